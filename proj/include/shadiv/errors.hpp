#pragma once

#include <stdexcept>
#include <string>

namespace shadiv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SHADIV_DEFINE_ERROR(Name)                 \
  class Name : public Error {                     \
   public:                                        \
    explicit Name(const std::string& what)        \
        : Error(std::string(#Name ": ") + what) {} \
  }

// gf_linalg
SHADIV_DEFINE_ERROR(NotPrime);
SHADIV_DEFINE_ERROR(DimensionMismatch);
SHADIV_DEFINE_ERROR(ModulusMismatch);
SHADIV_DEFINE_ERROR(SingularMatrix);

// gl2_group
SHADIV_DEFINE_ERROR(SingularGenerator);
SHADIV_DEFINE_ERROR(CapExceeded);
SHADIV_DEFINE_ERROR(ExhaustiveTooLarge);
SHADIV_DEFINE_ERROR(SampledTooLarge);

// gmodule
SHADIV_DEFINE_ERROR(NotInNormalizer);
SHADIV_DEFINE_ERROR(DimTooLarge);
SHADIV_DEFINE_ERROR(GroupMismatch);

// cohomology
SHADIV_DEFINE_ERROR(GroupModuleMismatch);
SHADIV_DEFINE_ERROR(TooLarge);

// elliptic
SHADIV_DEFINE_ERROR(SingularCurve);
SHADIV_DEFINE_ERROR(BadPrime);
SHADIV_DEFINE_ERROR(BadReduction);
SHADIV_DEFINE_ERROR(NotSquarefree);
SHADIV_DEFINE_ERROR(BadExponents);
SHADIV_DEFINE_ERROR(ParseError);

// certify
SHADIV_DEFINE_ERROR(InvalidDegree);

// selmer_ring
SHADIV_DEFINE_ERROR(LevelMismatch);

#undef SHADIV_DEFINE_ERROR

}  // namespace shadiv
