#pragma once

/**
 * @file gmodule.hpp
 * @brief Finite-dimensional F_p representations of a MatrixGroup.
 *
 * A module stores one action matrix per generator; actions on every group
 * element are derived along the group's BFS tree. Characters are simply
 * modules of dimension 1.
 */

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shadiv/gf_linalg.hpp"
#include "shadiv/gl2_group.hpp"

namespace shadiv::gmod {

class GModule {
 public:
  /// One action per generator of g. Throws DimensionMismatch / SingularMatrix.
  GModule(gl2::MatrixGroup g, std::size_t dim, std::vector<gf::FpMatrix> generator_actions, std::string label = {});

  const gl2::MatrixGroup& group() const;
  std::size_t dim() const;
  const std::string& label() const;
  const std::vector<gf::FpMatrix>& generator_actions() const;
  /// Action of element(i) of the group.
  const gf::FpMatrix& action(std::size_t element_index) const;
  /// Action on an arbitrary group member (throws std::out_of_range if not in the group).
  const gf::FpMatrix& action_of(const gl2::Mat2& m) const;

  /// Checks action(g h) = action(g) action(h) for all g and every generator h.
  bool is_homomorphism() const;
  /// Joint fixed space M^G, as a basis.
  std::vector<gf::FpVector> fixed_space() const;

  GModule relabeled(std::string label) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

GModule standard_module(const gl2::MatrixGroup& g);
/// X -> s X s^-1 on the basis (E11, E12, E21, E22).
GModule end_module(const gl2::MatrixGroup& g);
GModule trivial_module(const gl2::MatrixGroup& g, std::size_t dim = 1);
GModule determinant_character(const gl2::MatrixGroup& g);
GModule tensor(const GModule& a, const GModule& b);
GModule dual(const GModule& m);
GModule direct_sum(const GModule& a, const GModule& b);
/// Tensor power; negative k uses the dual. Intended for characters.
GModule character_power(const GModule& chi, int k);

/// Scalar values of a character on the generators.
std::vector<std::uint32_t> character_values(const GModule& chi);

/**
 * If g stabilizes a line L, the characters (chi1, chi2) with
 * 0 -> chi1 -> V -> chi2 -> 0, chi1 acting on L.
 */
std::optional<std::pair<GModule, GModule>> line_characters(const gl2::MatrixGroup& g);

enum class TorusKind { Split, Nonsplit };

struct AdjointSplitting {
  TorusKind kind;
  GModule a0;
  GModule a1;
  /// 4x4 matrix of (a0, a1) -> a0 + a1 F, from A0 (+) A1 coordinates to (E11, E12, E21, E22).
  gf::FpMatrix phi;
};

/**
 * A0 and A1 for a subgroup of the canonical split normalizer
 * (diagonal / antidiagonal) or nonsplit normalizer. With `kind` unset the
 * split model is tried first. Throws NotInNormalizer.
 */
AdjointSplitting a0_a1_modules(const gl2::MatrixGroup& n, std::optional<TorusKind> kind = {});

enum class LineOrder { Forward, Reverse };

/// Composition factors (dim <= 4). Throws DimTooLarge.
std::vector<GModule> composition_factors(const GModule& m, LineOrder order = LineOrder::Forward);
/// Some proper nonzero submodule, as a basis, if one exists.
std::optional<std::vector<gf::FpVector>> find_submodule(const GModule& m, LineOrder order = LineOrder::Forward);
bool is_irreducible(const GModule& m);

/// Basis of {T : T act1(s) = act2(s) T for all generators s}, T of shape dim2 x dim1.
std::vector<gf::FpMatrix> intertwiner_basis(const GModule& m1, const GModule& m2);
/// An invertible intertwiner, if any. Throws GroupMismatch.
std::optional<gf::FpMatrix> find_isomorphism(const GModule& m1, const GModule& m2);
bool modules_isomorphic(const GModule& m1, const GModule& m2);
/// Isomorphism test for irreducibles: any nonzero intertwiner is invertible (asserted).
bool irreducibles_isomorphic(const GModule& m1, const GModule& m2);

bool has_common_irreducible_factor(const GModule& m1, const GModule& m2);
bool has_common_factor(const std::vector<GModule>& f1, const std::vector<GModule>& f2);

/// True iff the two factor lists agree as multisets up to isomorphism.
bool same_factor_multiset(const std::vector<GModule>& f1, const std::vector<GModule>& f2);

std::string describe_factors(const std::vector<GModule>& factors);

}  // namespace shadiv::gmod
