#pragma once

/**
 * @file selmer_ring.hpp
 * @brief Arithmetic in Z[zeta_3] / 3^k and the 1-unit cube check at level 9.
 */

#include <cstddef>
#include <cstdint>
#include <string>

#include "shadiv/elliptic.hpp"

namespace shadiv::selmer {

/// x + y*zeta mod 3^k with zeta^2 = -zeta - 1.
class EisensteinResidue {
 public:
  EisensteinResidue(std::int64_t x, std::int64_t y, unsigned level);

  static EisensteinResidue one(unsigned level) { return {1, 0, level}; }
  static EisensteinResidue zeta(unsigned level) { return {0, 1, level}; }
  static EisensteinResidue from_int(std::int64_t n, unsigned level) { return {n, 0, level}; }

  std::uint32_t x() const { return x_; }
  std::uint32_t y() const { return y_; }
  unsigned level() const { return level_; }
  std::uint32_t modulus() const { return modulus_; }

  bool operator==(const EisensteinResidue&) const = default;
  std::string to_string() const;

 private:
  std::uint32_t x_;
  std::uint32_t y_;
  unsigned level_;
  std::uint32_t modulus_;
};

/// Throw LevelMismatch when levels differ.
EisensteinResidue ring_add(const EisensteinResidue& a, const EisensteinResidue& b);
EisensteinResidue ring_sub(const EisensteinResidue& a, const EisensteinResidue& b);
EisensteinResidue ring_mul(const EisensteinResidue& a, const EisensteinResidue& b);
EisensteinResidue ring_pow(const EisensteinResidue& a, unsigned e);

/// (1 + (zeta - 1) a)^3 == 1 for all 81 residues a mod 9. Only k = 2 is supported.
bool verify_cube_killing(unsigned k = 2);

struct OneUnitReport {
  std::size_t cases_checked = 0;  // residues a enumerated
  std::size_t cube_failures = 0;
  std::size_t units = 0;          // |U^1|
  std::size_t cubes = 0;          // |(U^1)^3|
  std::size_t quotient = 0;       // |U^1 / (U^1)^3|
  std::size_t exponent = 0;       // lcm of element orders in U^1
  bool abelian = false;
};

OneUnitReport one_unit_report(unsigned k = 2);
std::size_t one_unit_cube_quotient_order(unsigned k = 2);

/// y^2 = x^3 - 1555200, the Jacobian of 3x^3 + 4y^3 + 5z^3 = 0 via the d = 60 model.
ec::CurveQ selmer_demo_curve();

}  // namespace shadiv::selmer
