#include "shadiv/cohomology.hpp"

#include <set>
#include <sstream>

#include "shadiv/errors.hpp"

namespace shadiv::coh {

using gf::FpMatrix;
using gf::FpVector;
using gl2::MatrixGroup;
using gmod::GModule;

namespace {

void require_match(const MatrixGroup& g, const GModule& m) {
  if (!g.same_elements(m.group()) || g.generators() != m.group().generators()) {
    throw GroupModuleMismatch("module is defined over a different group");
  }
}

}  // namespace

H1Detail h1_details(const MatrixGroup& g, const GModule& m) {
  require_match(g, m);
  const gf::PrimeField& f = g.field();
  const std::size_t d = m.dim();
  const std::size_t k = g.generators().size();
  const std::size_t n = d * k;

  // expr[i] is the d x n matrix with f(element i) = expr[i] * (f(s_1), ..., f(s_k)).
  std::vector<FpMatrix> expr(g.order(), FpMatrix(f, d, n));
  auto add_block = [&](FpMatrix& target, const FpMatrix& a, std::size_t s, bool subtract) {
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        auto& x = target(r, s * d + c);
        x = subtract ? f.sub(x, a(r, c)) : f.add(x, a(r, c));
      }
    }
  };
  for (std::size_t i : g.bfs_order()) {
    if (i == g.identity_index()) continue;
    const std::size_t q = g.parent(i);
    const gl2::Letter l = g.parent_letter(i);
    expr[i] = expr[q];
    if (l.inverse) {
      add_block(expr[i], m.action(i), l.generator, true);
    } else {
      add_block(expr[i], m.action(q), l.generator, false);
    }
  }

  gf::EchelonBasis constraints(f, n);
  for (std::size_t i = 0; i < g.order() && constraints.rank() < n; ++i) {
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t j = *g.index_of(g.arith().mul(g.element(i), g.generators()[s]));
      FpMatrix row = gf::mat_sub(expr[j], expr[i]);
      add_block(row, m.action(i), s, true);
      for (std::size_t r = 0; r < d; ++r) {
        auto span = row.row(r);
        constraints.insert(FpVector(span.begin(), span.end()));
      }
    }
  }

  H1Detail out;
  out.unknowns = n;
  out.dim_z1 = n - constraints.rank();
  out.dim_fixed = m.fixed_space().size();
  out.dim_b1 = d - out.dim_fixed;
  out.h1 = out.dim_z1 - out.dim_b1;
  return out;
}

std::size_t h1_dimension(const MatrixGroup& g, const GModule& m) { return h1_details(g, m).h1; }

// ---------------------------------------------------------------------------
// Oracle

namespace {

constexpr double kEnumerationLimit = 1e7;

/// Elements of M as integers in [0, p^d), base-p digits.
struct Codes {
  std::uint32_t p;
  std::size_t d;
  std::size_t size;

  FpVector decode(std::size_t c) const {
    FpVector v(d);
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    return v;
  }
  std::size_t encode(const FpVector& v) const {
    std::size_t c = 0;
    for (std::size_t i = d; i-- > 0;) c = c * p + v[i];
    return c;
  }
  std::size_t add(std::size_t a, std::size_t b) const {
    std::size_t c = 0;
    std::size_t scale = 1;
    for (std::size_t i = 0; i < d; ++i) {
      c += ((a % p + b % p) % p) * scale;
      a /= p;
      b /= p;
      scale *= p;
    }
    return c;
  }
  std::size_t neg(std::size_t a) const {
    std::size_t c = 0;
    std::size_t scale = 1;
    for (std::size_t i = 0; i < d; ++i) {
      c += ((p - a % p) % p) * scale;
      a /= p;
      scale *= p;
    }
    return c;
  }
};

double power(double base, std::size_t e) {
  double r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::size_t h1_brute_force(const MatrixGroup& g, const GModule& m) {
  require_match(g, m);
  const std::size_t n = g.order();
  const std::size_t k = g.generators().size();
  Codes codes{g.p(), m.dim(), 1};
  for (std::size_t i = 0; i < m.dim(); ++i) codes.size *= g.p();
  const double all_functions = power(static_cast<double>(codes.size), n);
  const double by_generators = power(static_cast<double>(codes.size), k);
  if (all_functions > kEnumerationLimit && by_generators > kEnumerationLimit) {
    throw TooLarge("enumeration space too large for the oracle");
  }
  if (static_cast<double>(n) * static_cast<double>(codes.size) > 5e7) throw TooLarge("action table too large");

  // act[g * |M| + x] = g . x, mul[g * n + h] = index of g h.
  std::vector<std::uint32_t> act(n * codes.size);
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t x = 0; x < codes.size; ++x) {
      act[e * codes.size + x] = static_cast<std::uint32_t>(codes.encode(gf::mat_vec(m.action(e), codes.decode(x))));
    }
  }
  std::vector<std::uint32_t> mul(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) mul[a * n + b] = static_cast<std::uint32_t>(g.product_index(a, b));
  }
  auto is_cocycle = [&](const std::vector<std::uint32_t>& f) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (f[mul[a * n + b]] != codes.add(f[a], act[a * codes.size + f[b]])) return false;
      }
    }
    return true;
  };

  std::size_t cocycles = 0;
  if (all_functions <= kEnumerationLimit) {
    std::vector<std::uint32_t> f(n, 0);
    for (;;) {
      if (is_cocycle(f)) ++cocycles;
      std::size_t i = 0;
      while (i < n && ++f[i] == codes.size) f[i++] = 0;
      if (i == n) break;
    }
  } else {
    std::vector<std::uint32_t> vals(k, 0);
    std::vector<std::uint32_t> f(n, 0);
    std::vector<std::size_t> gen_index(k);
    for (std::size_t s = 0; s < k; ++s) gen_index[s] = *g.index_of(g.generators()[s]);
    for (;;) {
      bool consistent = true;
      f[g.identity_index()] = 0;
      for (std::size_t i : g.bfs_order()) {
        if (i == g.identity_index()) continue;
        const std::size_t q = g.parent(i);
        const gl2::Letter l = g.parent_letter(i);
        const std::size_t fs = vals[l.generator];
        // f(q s^-1) = f(q) + q s^-1 (-f(s)) and element i = q s^-1.
        f[i] = static_cast<std::uint32_t>(l.inverse ? codes.add(f[q], act[i * codes.size + codes.neg(fs)])
                                                   : codes.add(f[q], act[q * codes.size + fs]));
      }
      for (std::size_t s = 0; s < k && consistent; ++s) consistent = f[gen_index[s]] == vals[s];
      if (consistent && is_cocycle(f)) ++cocycles;
      std::size_t i = 0;
      while (i < k && ++vals[i] == codes.size) vals[i++] = 0;
      if (i == k) break;
    }
  }

  std::set<std::vector<std::uint32_t>> coboundaries;
  for (std::size_t x = 0; x < codes.size; ++x) {
    std::vector<std::uint32_t> f(n);
    for (std::size_t e = 0; e < n; ++e) f[e] = static_cast<std::uint32_t>(codes.add(act[e * codes.size + x], codes.neg(x)));
    coboundaries.insert(std::move(f));
  }
  if (cocycles % coboundaries.size() != 0) throw std::logic_error("coboundaries do not divide cocycles");
  std::size_t quotient = cocycles / coboundaries.size();
  std::size_t h1 = 0;
  while (quotient > 1) {
    if (quotient % g.p() != 0) throw std::logic_error("H^1 order is not a power of p");
    quotient /= g.p();
    ++h1;
  }
  return h1;
}

// ---------------------------------------------------------------------------
// Criterion

namespace {

bool characters_allowed(const GModule& chi1, const GModule& chi2) {
  const auto v1 = gmod::character_values(chi1);
  const auto v2 = gmod::character_values(chi2);
  const auto sq1 = gmod::character_values(gmod::character_power(chi1, 2));
  const auto sq2 = gmod::character_values(gmod::character_power(chi2, 2));
  const std::vector<std::uint32_t> one(v1.size(), 1);
  return v1 != one && v1 != sq2 && v2 != one && v2 != sq1;
}

}  // namespace

bool groupcrit_side1(const MatrixGroup& g) {
  const GModule v = gmod::standard_module(g);
  if (gmod::has_common_irreducible_factor(v, gmod::end_module(g))) return false;
  return h1_dimension(g, v) == 0;
}

bool groupcrit_side2(const MatrixGroup& g) {
  if (gl2::is_in_s3_copy(g)) return false;
  const auto chars = gmod::line_characters(g);
  return !chars || characters_allowed(chars->first, chars->second);
}

GroupDiagnostics diagnose(const MatrixGroup& g) {
  GroupDiagnostics d;
  d.group = g.describe();
  d.order = g.order();
  d.flags = gl2::classify_subgroup(g);
  const GModule v = gmod::standard_module(g);
  const GModule e = gmod::end_module(g);
  const auto fv = gmod::composition_factors(v);
  const auto fe = gmod::composition_factors(e);
  d.factors_v = gmod::describe_factors(fv);
  d.factors_end = gmod::describe_factors(fe);
  d.common_factor = gmod::has_common_factor(fv, fe);
  d.h1_v = h1_dimension(g, v);
  d.h1_end = h1_dimension(g, e);
  d.in_s3_copy = gl2::is_in_s3_copy(g);
  const auto chars = gmod::line_characters(g);
  d.v_reducible = chars.has_value();
  d.characters_ok = !chars || characters_allowed(chars->first, chars->second);
  d.side1 = !d.common_factor && d.h1_v == 0;
  d.side2 = !d.in_s3_copy && d.characters_ok;
  return d;
}

std::string GroupDiagnostics::to_string() const {
  std::ostringstream os;
  os << group << "\n  flags: " << flags.to_string() << "\n  factors(V) = " << factors_v
     << "  factors(End V) = " << factors_end << "\n  common_factor=" << common_factor << " h1(V)=" << h1_v
     << " h1(End V)=" << h1_end << " in_s3_copy=" << in_s3_copy << " V_reducible=" << v_reducible
     << " characters_ok=" << characters_ok << "\n  side1=" << side1 << " side2=" << side2;
  return os.str();
}

EquivalenceReport groupcrit_equivalence_report(std::uint32_t p, const std::vector<MatrixGroup>& groups) {
  EquivalenceReport r;
  r.p = p;
  for (const auto& g : groups) {
    r.groups.push_back(diagnose(g));
    if (r.groups.back().side1 != r.groups.back().side2) r.violators.push_back(r.groups.size() - 1);
  }
  return r;
}

}  // namespace shadiv::coh
