#include "shadiv/elliptic.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

#include "shadiv/errors.hpp"

namespace shadiv::ec {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) { return -floor_div(-a, b); }

BigInt pos_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

bool divides(const BigInt& d, const BigInt& n) { return n % d == 0; }

void require_prime(std::uint32_t ell) {
  if (!is_prime(static_cast<std::uint64_t>(ell))) throw BadPrime(std::to_string(ell) + " is not prime");
}

}  // namespace

CurveQ::CurveQ(BigInt a1, BigInt a2, BigInt a3, BigInt a4, BigInt a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
  const auto& [x1, x2, x3, x4, x6] = a_;
  b2_ = x1 * x1 + 4 * x2;
  b4_ = 2 * x4 + x1 * x3;
  b6_ = x3 * x3 + 4 * x6;
  b8_ = x1 * x1 * x6 + 4 * x2 * x6 - x1 * x3 * x4 + x2 * x3 * x3 - x4 * x4;
  c4_ = b2_ * b2_ - 24 * b4_;
  c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
  disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
  if (disc_ == 0) throw SingularCurve("curve " + to_string() + " has discriminant 0");
}

CurveQ CurveQ::parse(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (ch != '[' && ch != ']' && !std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  std::array<BigInt, 5> a;
  std::stringstream in(s);
  std::string item;
  std::size_t count = 0;
  while (std::getline(in, item, ',')) {
    if (count == 5) throw ParseError("curve needs exactly 5 coefficients: '" + text + "'");
    std::size_t start = (item.size() > 1 && (item[0] == '-' || item[0] == '+')) ? 1 : 0;
    if (item.empty() || start == item.size() ||
        item.find_first_not_of("0123456789", start) != std::string::npos) {
      throw ParseError("bad coefficient '" + item + "' in '" + text + "'");
    }
    a[count++] = BigInt(item[0] == '+' ? item.substr(1) : item);
  }
  if (count != 5 || (!s.empty() && s.back() == ',')) {
    throw ParseError("curve needs exactly 5 coefficients: '" + text + "'");
  }
  return CurveQ(a);
}

Rational CurveQ::j_invariant() const {
  Rational j(BigInt(c4_ * c4_ * c4_));
  return j / Rational(disc_);
}

std::string CurveQ::to_string() const {
  std::ostringstream os;
  os << '[' << a_[0] << ',' << a_[1] << ',' << a_[2] << ',' << a_[3] << ',' << a_[4] << ']';
  return os.str();
}

Invariants invariants(const CurveQ& c) { return {c.c4(), c.c6(), c.disc()}; }

CurveQ curve_from_c4c6(const BigInt& c4, const BigInt& c6) {
  BigInt b2 = pos_mod(-c6, 12);
  if (b2 > 6) b2 -= 12;
  const BigInt n4 = b2 * b2 - c4;
  if (divides(24, n4)) {
    const BigInt b4 = n4 / 24;
    const BigInt n6 = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
    if (divides(216, n6)) {
      const BigInt b6 = n6 / 216;
      const BigInt a1 = pos_mod(b2, 2);
      const BigInt a3 = pos_mod(b6, 2);
      if (divides(4, b2 - a1) && divides(2, b4 - a1 * a3) && divides(4, b6 - a3)) {
        CurveQ out(a1, (b2 - a1) / 4, a3, (b4 - a1 * a3) / 2, (b6 - a3) / 4);
        if (out.c4() == c4 && out.c6() == c6) return out;
      }
    }
  }
  return CurveQ(0, 0, 0, -27 * c4, -54 * c6);
}

CurveQ scale_model(const CurveQ& c, const BigInt& u) {
  return CurveQ(c.a1() * u, c.a2() * u * u, c.a3() * u * u * u, c.a4() * u * u * u * u,
                c.a6() * u * u * u * u * u * u);
}

CurveQ minimalize_at(const CurveQ& c, std::uint32_t ell) {
  require_prime(ell);
  if (ell < 5) throw BadPrime("minimalize_at needs ell >= 5, got " + std::to_string(ell));
  const BigInt l = ell;
  const BigInt l4 = l * l * l * l;
  const BigInt l6 = l4 * l * l;
  const BigInt l12 = l6 * l6;
  BigInt c4 = c.c4();
  BigInt c6 = c.c6();
  BigInt disc = c.disc();
  bool changed = false;
  while (divides(l4, c4) && divides(l6, c6) && divides(l12, disc)) {
    c4 /= l4;
    c6 /= l6;
    disc /= l12;
    changed = true;
  }
  return changed ? curve_from_c4c6(c4, c6) : c;
}

bool has_good_reduction(const CurveQ& c, std::uint32_t ell) {
  require_prime(ell);
  if (ell < 5) return mod_small(c.disc(), ell) != 0;
  return mod_small(minimalize_at(c, ell).disc(), ell) != 0;
}

std::uint64_t count_points(const CurveQ& c, std::uint32_t ell) {
  require_prime(ell);
  if (!has_good_reduction(c, ell)) {
    throw BadReduction("curve " + c.to_string() + " has bad reduction at " + std::to_string(ell));
  }
  const CurveQ m = ell >= 5 ? minimalize_at(c, ell) : c;
  const std::uint64_t l = ell;
  if (ell == 2) {
    std::array<std::uint64_t, 5> a{};
    for (int i = 0; i < 5; ++i) a[i] = mod_small(m.coefficients()[i], 2);
    std::uint64_t n = 1;
    for (std::uint64_t x = 0; x < 2; ++x) {
      for (std::uint64_t y = 0; y < 2; ++y) {
        const std::uint64_t lhs = y * y + a[0] * x * y + a[2] * y;
        const std::uint64_t rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
        if ((lhs + rhs) % 2 == 0) ++n;
      }
    }
    return n;
  }
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
  const std::uint64_t k3 = 4 % l;
  const std::uint64_t k2 = mod_small(m.b2(), l);
  const std::uint64_t k1 = mod_small(2 * m.b4(), l);
  const std::uint64_t k0 = mod_small(m.b6(), l);
  std::vector<int> chi(l, -1);
  chi[0] = 0;
  for (std::uint64_t y = 1; y < l; ++y) chi[y * y % l] = 1;
  std::int64_t n = 1;
  for (std::uint64_t x = 0; x < l; ++x) {
    const std::uint64_t v = (((k3 * x + k2) % l * x + k1) % l * x + k0) % l;
    n += 1 + chi[v];
  }
  return static_cast<std::uint64_t>(n);
}

std::int64_t trace_frobenius(const CurveQ& c, std::uint32_t ell) {
  return static_cast<std::int64_t>(ell) + 1 - static_cast<std::int64_t>(count_points(c, ell));
}

std::string ReductionInfo::to_string() const {
  switch (kind) {
    case Kind::Good:
      if (!supersingular) return "good";
      return *supersingular ? "good supersingular" : "good ordinary";
    case Kind::Multiplicative: return split ? "split multiplicative" : "non-split multiplicative";
    case Kind::Additive: return "additive";
    case Kind::Undetermined: return "undetermined";
  }
  return "?";
}

ReductionInfo reduction_type(const CurveQ& c, std::uint32_t ell) {
  require_prime(ell);
  ReductionInfo info;
  info.ell = ell;
  if (ell < 5) {
    info.kind = mod_small(c.disc(), ell) != 0 ? ReductionInfo::Kind::Good : ReductionInfo::Kind::Undetermined;
    return info;
  }
  const CurveQ m = minimalize_at(c, ell);
  if (mod_small(m.disc(), ell) != 0) {
    info.kind = ReductionInfo::Kind::Good;
    info.supersingular = trace_frobenius(m, ell) % static_cast<std::int64_t>(ell) == 0;
  } else if (mod_small(m.c4(), ell) != 0) {
    info.kind = ReductionInfo::Kind::Multiplicative;
    const std::uint64_t v = mod_small(-m.c6(), ell);
    info.split = v != 0 && pow_mod(v, (ell - 1) / 2, ell) == 1;
  } else {
    info.kind = ReductionInfo::Kind::Additive;
  }
  return info;
}

CurveQ quadratic_twist(const CurveQ& c, const BigInt& d) {
  if (!is_squarefree(d)) {
    std::ostringstream os;
    os << d << " is not a nonzero squarefree integer";
    throw NotSquarefree(os.str());
  }
  return CurveQ(0, 0, 0, -27 * d * d * c.c4(), -54 * d * d * d * c.c6());
}

unsigned rational_two_torsion_count(const CurveQ& c) {
  // With X = 4x the 2-division cubic becomes monic: X^3 + b2 X^2 + 8 b4 X + 16 b6.
  const BigInt k2 = c.b2();
  const BigInt k1 = 8 * c.b4();
  const BigInt k0 = 16 * c.b6();
  auto f = [&](const BigInt& x) { return ((x + k2) * x + k1) * x + k0; };
  const BigInt bound = 1 + std::max({BigInt(abs(k2)), BigInt(abs(k1)), BigInt(abs(k0))});
  std::set<BigInt> roots;

  auto search = [&](BigInt lo, BigInt hi, bool increasing) {
    lo = std::max(lo, BigInt(-bound));
    hi = std::min(hi, bound);
    if (lo > hi) return;
    const int sign = increasing ? 1 : -1;
    if (sign * f(lo) > 0 || sign * f(hi) < 0) return;
    // least x in [lo, hi] with sign * f(x) >= 0
    while (lo < hi) {
      const BigInt mid = floor_div(lo + hi, 2);
      if (sign * f(mid) >= 0) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (f(lo) == 0) roots.insert(lo);
  };
  auto probe = [&](const BigInt& lo, const BigInt& hi) {
    for (BigInt x = std::max(lo, BigInt(-bound)); x <= std::min(hi, bound); ++x) {
      if (f(x) == 0) roots.insert(x);
    }
  };

  // f' = 3X^2 + 2 b2 X + 8 b4 has discriminant 4 c4; critical points (-b2 +- sqrt(c4)) / 3.
  if (c.c4() <= 0) {
    search(-bound, bound, true);
  } else {
    const BigInt s = isqrt(c.c4());
    const BigInt left = floor_div(-k2 - s - 1, 3);  // <= first critical point
    const BigInt mid_lo = ceil_div(-k2 - s, 3);     // >= first critical point
    const BigInt mid_hi = floor_div(-k2 + s, 3);    // <= second critical point
    const BigInt right = ceil_div(-k2 + s + 1, 3);  // >= second critical point
    search(-bound, left, true);
    probe(left + 1, mid_lo - 1);
    search(mid_lo, mid_hi, false);
    probe(mid_hi + 1, right - 1);
    search(right, bound, true);
  }
  return 1 + static_cast<unsigned>(roots.size());
}

std::uint32_t power_pair_residue(std::uint32_t ell, std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>((pow_mod(ell, a, p) + pow_mod(ell, b, p)) % p);
}

std::int64_t centered(std::int64_t x, std::int64_t m) {
  std::int64_t r = ((x % m) + m) % m;
  if (2 * r > m) r -= m;
  return r;
}

CongruenceResult power_congruence_test(const CurveQ& c, std::uint32_t p, std::uint32_t a, std::uint32_t b,
                                       std::uint32_t aux_bound) {
  require_prime(p);
  if (p == 2) throw BadPrime("power_congruence_test needs an odd prime");
  if ((static_cast<std::uint64_t>(a) + b) % (p - 1) != 1 % (p - 1)) {
    throw BadExponents("a + b must be 1 mod " + std::to_string(p - 1) + ", got (" + std::to_string(a) + "," +
                       std::to_string(b) + ")");
  }
  CongruenceResult r;
  for (std::uint32_t ell : primes_up_to(aux_bound)) {
    if (ell == p || !has_good_reduction(c, ell)) continue;
    ++r.primes_checked;
    const std::int64_t t = trace_frobenius(c, ell);
    const auto lhs = static_cast<std::uint32_t>(((t % static_cast<std::int64_t>(p)) + p) % p);
    if (lhs != power_pair_residue(ell, a, b, p)) {
      r.excluded = true;
      r.ell = ell;
      r.a_ell = t;
      return r;
    }
  }
  return r;
}

}  // namespace shadiv::ec
