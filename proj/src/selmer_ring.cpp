#include "shadiv/selmer_ring.hpp"

#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "shadiv/errors.hpp"

namespace shadiv::selmer {

namespace {

std::uint32_t reduce(std::int64_t v, std::uint32_t m) {
  const std::int64_t r = v % static_cast<std::int64_t>(m);
  return static_cast<std::uint32_t>(r < 0 ? r + m : r);
}

void same_level(const EisensteinResidue& a, const EisensteinResidue& b) {
  if (a.level() != b.level()) {
    throw LevelMismatch("levels " + std::to_string(a.level()) + " and " + std::to_string(b.level()));
  }
}

void require_level_two(unsigned k) {
  if (k != 2) throw LevelMismatch("only level 2 (mod 9) is implemented, got " + std::to_string(k));
}

}  // namespace

EisensteinResidue::EisensteinResidue(std::int64_t x, std::int64_t y, unsigned level) : level_(level), modulus_(1) {
  if (level == 0 || level > 19) throw LevelMismatch("level must lie in [1, 19]");
  for (unsigned i = 0; i < level; ++i) modulus_ *= 3;
  x_ = reduce(x, modulus_);
  y_ = reduce(y, modulus_);
}

std::string EisensteinResidue::to_string() const {
  return std::to_string(x_) + "+" + std::to_string(y_) + "z (mod " + std::to_string(modulus_) + ")";
}

EisensteinResidue ring_add(const EisensteinResidue& a, const EisensteinResidue& b) {
  same_level(a, b);
  return {static_cast<std::int64_t>(a.x()) + b.x(), static_cast<std::int64_t>(a.y()) + b.y(), a.level()};
}

EisensteinResidue ring_sub(const EisensteinResidue& a, const EisensteinResidue& b) {
  same_level(a, b);
  return {static_cast<std::int64_t>(a.x()) - b.x(), static_cast<std::int64_t>(a.y()) - b.y(), a.level()};
}

EisensteinResidue ring_mul(const EisensteinResidue& a, const EisensteinResidue& b) {
  same_level(a, b);
  const std::int64_t m = a.modulus();
  const std::int64_t x1 = a.x(), y1 = a.y(), x2 = b.x(), y2 = b.y();
  const std::int64_t yy = y1 * y2 % m;
  return {x1 * x2 % m - yy, (x1 * y2 % m + x2 * y1 % m) - yy, a.level()};
}

EisensteinResidue ring_pow(const EisensteinResidue& a, unsigned e) {
  EisensteinResidue r = EisensteinResidue::one(a.level());
  for (unsigned i = 0; i < e; ++i) r = ring_mul(r, a);
  return r;
}

OneUnitReport one_unit_report(unsigned k) {
  require_level_two(k);
  const auto one = EisensteinResidue::one(k);
  const auto pi = ring_sub(EisensteinResidue::zeta(k), one);
  const std::uint32_t m = one.modulus();

  OneUnitReport r;
  std::set<std::pair<std::uint32_t, std::uint32_t>> units;
  std::set<std::pair<std::uint32_t, std::uint32_t>> cubes;
  std::vector<EisensteinResidue> elems;
  for (std::uint32_t x = 0; x < m; ++x) {
    for (std::uint32_t y = 0; y < m; ++y) {
      ++r.cases_checked;
      const auto u = ring_add(one, ring_mul(pi, EisensteinResidue(x, y, k)));
      const auto c = ring_pow(u, 3);
      if (!(c == one)) ++r.cube_failures;
      if (units.emplace(u.x(), u.y()).second) elems.push_back(u);
      cubes.emplace(c.x(), c.y());
    }
  }
  r.units = units.size();
  r.cubes = cubes.size();
  r.quotient = r.cubes ? r.units / r.cubes : 0;
  r.exponent = 1;
  r.abelian = true;
  for (const auto& u : elems) {
    std::size_t order = 1;
    for (auto v = u; !(v == one); v = ring_mul(v, u)) ++order;
    r.exponent = std::lcm(r.exponent, order);
    for (const auto& w : elems) r.abelian = r.abelian && ring_mul(u, w) == ring_mul(w, u);
  }
  return r;
}

bool verify_cube_killing(unsigned k) {
  const OneUnitReport r = one_unit_report(k);
  return r.cases_checked == 81 && r.cube_failures == 0;
}

std::size_t one_unit_cube_quotient_order(unsigned k) { return one_unit_report(k).quotient; }

ec::CurveQ selmer_demo_curve() { return ec::CurveQ(0, 0, 0, 0, -1555200); }

}  // namespace shadiv::selmer
