#pragma once

/**
 * @file elliptic.hpp
 * @brief Integral Weierstrass models over Q: invariants, local data at a
 *        prime, point counts, twists, rational 2-torsion, and the
 *        power-character congruence scan.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "shadiv/arith.hpp"

namespace shadiv::ec {

using Rational = boost::multiprecision::cpp_rational;

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integral coefficients.
class CurveQ {
 public:
  /// Throws SingularCurve when the discriminant vanishes.
  CurveQ(BigInt a1, BigInt a2, BigInt a3, BigInt a4, BigInt a6);
  explicit CurveQ(const std::array<BigInt, 5>& a) : CurveQ(a[0], a[1], a[2], a[3], a[4]) {}

  /// "a1,a2,a3,a4,a6" (optional surrounding brackets). Throws ParseError / SingularCurve.
  static CurveQ parse(const std::string& text);

  const BigInt& a1() const { return a_[0]; }
  const BigInt& a2() const { return a_[1]; }
  const BigInt& a3() const { return a_[2]; }
  const BigInt& a4() const { return a_[3]; }
  const BigInt& a6() const { return a_[4]; }
  const std::array<BigInt, 5>& coefficients() const { return a_; }

  const BigInt& b2() const { return b2_; }
  const BigInt& b4() const { return b4_; }
  const BigInt& b6() const { return b6_; }
  const BigInt& b8() const { return b8_; }
  const BigInt& c4() const { return c4_; }
  const BigInt& c6() const { return c6_; }
  const BigInt& disc() const { return disc_; }

  Rational j_invariant() const;
  std::string to_string() const;

  bool operator==(const CurveQ& other) const { return a_ == other.a_; }

 private:
  std::array<BigInt, 5> a_;
  BigInt b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

struct Invariants {
  BigInt c4;
  BigInt c6;
  BigInt disc;
};
Invariants invariants(const CurveQ& c);

/// Model with invariants (c4, c6): the reduced-form conversion when it is integral, else [0,0,0,-27c4,-54c6].
CurveQ curve_from_c4c6(const BigInt& c4, const BigInt& c6);

/// Model under x = u^2 x', y = u^3 y' read backwards: a_i -> u^i a_i (so c4 -> u^4 c4, c6 -> u^6 c6).
CurveQ scale_model(const CurveQ& c, const BigInt& u);

/// An l-minimal model (l >= 5, Kraus). Returns c itself when already minimal. Throws BadPrime.
CurveQ minimalize_at(const CurveQ& c, std::uint32_t ell);

/// True iff E has good reduction at ell, in the sense used for point counting:
/// for ell in {2, 3} ell must not divide the given model's discriminant.
bool has_good_reduction(const CurveQ& c, std::uint32_t ell);

/// #E(F_ell) including infinity. Throws BadPrime / BadReduction.
std::uint64_t count_points(const CurveQ& c, std::uint32_t ell);
/// a_ell = ell + 1 - #E(F_ell).
std::int64_t trace_frobenius(const CurveQ& c, std::uint32_t ell);

struct ReductionInfo {
  enum class Kind { Good, Multiplicative, Additive, Undetermined };
  std::uint32_t ell = 0;
  Kind kind = Kind::Undetermined;
  std::optional<bool> supersingular;  // Good only, decided for ell >= 5
  bool split = false;                 // Multiplicative only

  std::string to_string() const;
};
ReductionInfo reduction_type(const CurveQ& c, std::uint32_t ell);

/// y^2 = x^3 - 27 D^2 c4 x - 54 D^3 c6. Throws NotSquarefree.
CurveQ quadratic_twist(const CurveQ& c, const BigInt& d);

/// 1 + number of rational roots of 4x^3 + b2 x^2 + 2 b4 x + b6; one of 1, 2, 4.
unsigned rational_two_torsion_count(const CurveQ& c);

struct CongruenceResult {
  bool excluded = false;
  std::uint32_t ell = 0;       // witness when excluded
  std::int64_t a_ell = 0;      // a_ell at the witness
  std::size_t primes_checked = 0;
};

/// Scans good ell <= aux_bound, ell != p, for a_ell != ell^a + ell^b (mod p). Throws BadPrime / BadExponents.
CongruenceResult power_congruence_test(const CurveQ& c, std::uint32_t p, std::uint32_t a, std::uint32_t b,
                                       std::uint32_t aux_bound);

/// (ell^a + ell^b) mod p as a residue in [0, p).
std::uint32_t power_pair_residue(std::uint32_t ell, std::uint32_t a, std::uint32_t b, std::uint32_t p);
/// Centered representative of x mod m, in (-m/2, m/2].
std::int64_t centered(std::int64_t x, std::int64_t m);

}  // namespace shadiv::ec
