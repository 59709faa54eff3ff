#pragma once

/**
 * @file cohomology.hpp
 * @brief First cohomology H^1(G, M) for finite matrix groups, and the two
 *        sides of the group-theoretic divisibility criterion.
 */

#include <cstddef>
#include <string>
#include <vector>

#include "shadiv/gl2_group.hpp"
#include "shadiv/gmodule.hpp"

namespace shadiv::coh {

struct H1Detail {
  std::size_t unknowns = 0;  // |generators| * dim M
  std::size_t dim_z1 = 0;
  std::size_t dim_fixed = 0;
  std::size_t dim_b1 = 0;
  std::size_t h1 = 0;
};

/**
 * Cocycles are parametrized by their values on the generators. f is pushed
 * along the BFS tree (f(g s) = f(g) + g f(s), f(g s^-1) = f(g) - g s^-1 f(s)),
 * and every edge g -> g s of the Cayley graph contributes d linear
 * constraints. dim B^1 = dim M - dim M^G. Throws GroupModuleMismatch.
 */
H1Detail h1_details(const gl2::MatrixGroup& g, const gmod::GModule& m);
std::size_t h1_dimension(const gl2::MatrixGroup& g, const gmod::GModule& m);

/**
 * Oracle by enumeration. Functions G -> M are enumerated outright when
 * |M|^|G| <= 1e7. Otherwise candidate cocycles are enumerated by their
 * generator values (|M|^|gens| <= 1e7), each extended along the BFS tree and
 * then checked against the cocycle identity on every pair (g, h). Coboundaries
 * are counted as distinct functions g -> g m - m. Throws TooLarge.
 */
std::size_t h1_brute_force(const gl2::MatrixGroup& g, const gmod::GModule& m);

bool groupcrit_side1(const gl2::MatrixGroup& g);
bool groupcrit_side2(const gl2::MatrixGroup& g);

struct GroupDiagnostics {
  std::string group;
  std::size_t order = 0;
  gl2::ClassificationFlags flags;
  std::string factors_v;
  std::string factors_end;
  bool common_factor = false;
  std::size_t h1_v = 0;
  std::size_t h1_end = 0;
  bool in_s3_copy = false;
  bool v_reducible = false;
  bool characters_ok = true;  // chi1 not in {1, chi2^2} and chi2 not in {1, chi1^2}
  bool side1 = false;
  bool side2 = false;

  std::string to_string() const;
};

GroupDiagnostics diagnose(const gl2::MatrixGroup& g);

struct EquivalenceReport {
  std::uint32_t p = 0;
  std::vector<GroupDiagnostics> groups;
  std::vector<std::size_t> violators;  // indices into groups

  bool ok() const { return violators.empty(); }
};

EquivalenceReport groupcrit_equivalence_report(std::uint32_t p, const std::vector<gl2::MatrixGroup>& groups);

}  // namespace shadiv::coh
