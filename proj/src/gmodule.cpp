#include "shadiv/gmodule.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "shadiv/errors.hpp"

namespace shadiv::gmod {

using gf::FpMatrix;
using gf::FpVector;
using gl2::Mat2;
using gl2::MatrixGroup;

struct GModule::Impl {
  MatrixGroup group;
  std::size_t dim;
  std::string label;
  std::vector<FpMatrix> gen_actions;
  std::vector<FpMatrix> all_actions;
};

GModule::GModule(MatrixGroup g, std::size_t dim, std::vector<FpMatrix> generator_actions, std::string label) {
  if (generator_actions.size() != g.generators().size()) {
    throw DimensionMismatch("need one action per generator");
  }
  const gf::PrimeField& f = g.field();
  std::vector<FpMatrix> inverses;
  for (const auto& a : generator_actions) {
    if (a.rows() != dim || a.cols() != dim) throw DimensionMismatch("action matrix has wrong shape");
    if (!(a.field() == f)) throw ModulusMismatch("action over a different field");
    inverses.push_back(gf::inverse(a));
  }
  std::vector<FpMatrix> all(g.order(), FpMatrix::identity(f, dim));
  for (std::size_t i : g.bfs_order()) {
    if (i == g.identity_index()) continue;
    const gl2::Letter l = g.parent_letter(i);
    all[i] = gf::mat_mul(all[g.parent(i)], l.inverse ? inverses[l.generator] : generator_actions[l.generator]);
  }
  impl_ = std::make_shared<Impl>(Impl{std::move(g), dim, std::move(label), std::move(generator_actions), std::move(all)});
}

const MatrixGroup& GModule::group() const { return impl_->group; }
std::size_t GModule::dim() const { return impl_->dim; }
const std::string& GModule::label() const { return impl_->label; }
const std::vector<FpMatrix>& GModule::generator_actions() const { return impl_->gen_actions; }
const FpMatrix& GModule::action(std::size_t i) const { return impl_->all_actions.at(i); }

const FpMatrix& GModule::action_of(const Mat2& m) const {
  const auto i = impl_->group.index_of(m);
  if (!i) throw std::out_of_range("matrix " + gl2::format_mat(m) + " is not in the group");
  return impl_->all_actions[*i];
}

bool GModule::is_homomorphism() const {
  const MatrixGroup& g = impl_->group;
  if (!(action(g.identity_index()) == FpMatrix::identity(g.field(), dim()))) return false;
  for (std::size_t i = 0; i < g.order(); ++i) {
    for (std::size_t s = 0; s < g.generators().size(); ++s) {
      const auto j = g.index_of(g.arith().mul(g.element(i), g.generators()[s]));
      if (!(gf::mat_mul(action(i), impl_->gen_actions[s]) == action(*j))) return false;
    }
  }
  return true;
}

std::vector<FpVector> GModule::fixed_space() const {
  const std::size_t d = dim();
  const auto& gens = impl_->gen_actions;
  FpMatrix stacked(impl_->group.field(), d * gens.size(), d);
  const gf::PrimeField& f = impl_->group.field();
  for (std::size_t s = 0; s < gens.size(); ++s) {
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) stacked(s * d + r, c) = f.sub(gens[s](r, c), r == c ? 1 : 0);
    }
  }
  return gf::rref_kernel(stacked).kernel_basis;
}

GModule GModule::relabeled(std::string label) const {
  return GModule(impl_->group, impl_->dim, impl_->gen_actions, std::move(label));
}

// ---------------------------------------------------------------------------
// Constructions

GModule standard_module(const MatrixGroup& g) {
  std::vector<FpMatrix> acts;
  for (const auto& s : g.generators()) acts.push_back(g.arith().to_matrix(s));
  return GModule(g, 2, std::move(acts), "V");
}

namespace {

/// Row-major coordinates of a 2x2 matrix: (E11, E12, E21, E22).
FpVector vec4(const Mat2& m) { return {m[0], m[1], m[2], m[3]}; }

FpMatrix adjoint_action(const gl2::Gl2& a, const Mat2& s) {
  const Mat2 si = a.inv(s);
  std::vector<FpVector> cols;
  for (int j = 0; j < 4; ++j) {
    Mat2 e{0, 0, 0, 0};
    e[j] = 1;
    cols.push_back(vec4(a.mul(a.mul(s, e), si)));
  }
  return FpMatrix::from_columns(a.field(), 4, cols);
}

}  // namespace

GModule end_module(const MatrixGroup& g) {
  std::vector<FpMatrix> acts;
  for (const auto& s : g.generators()) acts.push_back(adjoint_action(g.arith(), s));
  return GModule(g, 4, std::move(acts), "End(V)");
}

GModule trivial_module(const MatrixGroup& g, std::size_t dim) {
  std::vector<FpMatrix> acts(g.generators().size(), FpMatrix::identity(g.field(), dim));
  return GModule(g, dim, std::move(acts), dim == 1 ? "1" : "trivial");
}

GModule determinant_character(const MatrixGroup& g) {
  std::vector<FpMatrix> acts;
  for (const auto& s : g.generators()) acts.push_back(FpMatrix(g.field(), 1, 1, {g.arith().det(s)}));
  return GModule(g, 1, std::move(acts), "det");
}

GModule tensor(const GModule& a, const GModule& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  const gf::PrimeField& f = a.group().field();
  std::vector<FpMatrix> acts;
  for (std::size_t s = 0; s < a.generator_actions().size(); ++s) {
    const FpMatrix& x = a.generator_actions()[s];
    const FpMatrix& y = b.generator_actions()[s];
    FpMatrix k(f, da * db, da * db);
    for (std::size_t i = 0; i < da; ++i) {
      for (std::size_t j = 0; j < da; ++j) {
        for (std::size_t r = 0; r < db; ++r) {
          for (std::size_t c = 0; c < db; ++c) k(i * db + r, j * db + c) = f.mul(x(i, j), y(r, c));
        }
      }
    }
    acts.push_back(std::move(k));
  }
  return GModule(a.group(), da * db, std::move(acts), "(" + a.label() + ")x(" + b.label() + ")");
}

GModule dual(const GModule& m) {
  std::vector<FpMatrix> acts;
  for (const auto& x : m.generator_actions()) acts.push_back(gf::inverse(x).transpose());
  return GModule(m.group(), m.dim(), std::move(acts), "(" + m.label() + ")^*");
}

GModule direct_sum(const GModule& a, const GModule& b) {
  const std::size_t n = a.dim() + b.dim();
  std::vector<FpMatrix> acts;
  for (std::size_t s = 0; s < a.generator_actions().size(); ++s) {
    FpMatrix k(a.group().field(), n, n);
    const FpMatrix& x = a.generator_actions()[s];
    const FpMatrix& y = b.generator_actions()[s];
    for (std::size_t r = 0; r < a.dim(); ++r) {
      for (std::size_t c = 0; c < a.dim(); ++c) k(r, c) = x(r, c);
    }
    for (std::size_t r = 0; r < b.dim(); ++r) {
      for (std::size_t c = 0; c < b.dim(); ++c) k(a.dim() + r, a.dim() + c) = y(r, c);
    }
    acts.push_back(std::move(k));
  }
  return GModule(a.group(), n, std::move(acts), a.label() + "+" + b.label());
}

GModule character_power(const GModule& chi, int k) {
  const GModule base = k < 0 ? dual(chi) : chi;
  GModule out = trivial_module(chi.group(), 1);
  for (int i = 0; i < std::abs(k); ++i) out = tensor(out, base);
  return out.relabeled("(" + chi.label() + ")^" + std::to_string(k));
}

std::vector<std::uint32_t> character_values(const GModule& chi) {
  if (chi.dim() != 1) throw DimensionMismatch("character_values needs a 1-dimensional module");
  std::vector<std::uint32_t> out;
  for (const auto& a : chi.generator_actions()) out.push_back(a(0, 0));
  return out;
}

std::optional<std::pair<GModule, GModule>> line_characters(const MatrixGroup& g) {
  const auto line = gl2::common_stable_line(g);
  if (!line) return std::nullopt;
  const gl2::Gl2& a = g.arith();
  const gf::PrimeField& f = g.field();
  const std::uint32_t x = *line < g.p() ? 1 : 0;
  const std::uint32_t y = *line < g.p() ? *line : 1;
  std::vector<FpMatrix> c1;
  std::vector<FpMatrix> c2;
  for (const auto& s : g.generators()) {
    const std::uint32_t u = f.add(f.mul(s[0], x), f.mul(s[1], y));
    const std::uint32_t v = f.add(f.mul(s[2], x), f.mul(s[3], y));
    const std::uint32_t lambda = x == 1 ? u : v;  // s(x, y) = lambda (x, y)
    c1.emplace_back(f, 1, 1, std::vector<std::uint32_t>{lambda});
    c2.emplace_back(f, 1, 1, std::vector<std::uint32_t>{f.mul(a.det(s), f.inv(lambda))});
  }
  return std::make_pair(GModule(g, 1, std::move(c1), "chi1"), GModule(g, 1, std::move(c2), "chi2"));
}

// ---------------------------------------------------------------------------
// Torus normalizer splitting

namespace {

struct TorusModel {
  TorusKind kind;
  gl2::Gl2 a;
  Mat2 frob;
  Mat2 companion;  // nonsplit only

  Mat2 from_coords(std::uint32_t x, std::uint32_t y) const {
    if (kind == TorusKind::Split) return {x, 0, 0, y};
    const gf::PrimeField& f = a.field();
    return {x, f.mul(y, companion[1]), y, f.add(x, f.mul(y, companion[3]))};
  }
  FpVector coords(const Mat2& m) const {
    if (kind == TorusKind::Split) return {m[0], m[3]};
    return {m[0], m[2]};
  }
  bool in_algebra(const Mat2& m) const {
    if (kind == TorusKind::Split) return m[1] == 0 && m[2] == 0;
    return a.mul(m, companion) == a.mul(companion, m);
  }
  /// g = lambda F^e with lambda in the torus.
  std::optional<std::pair<Mat2, int>> decompose(const Mat2& g) const {
    if (in_algebra(g)) return std::make_pair(g, 0);
    const Mat2 l = a.mul(g, a.inv(frob));
    if (in_algebra(l)) return std::make_pair(l, 1);
    return std::nullopt;
  }
  Mat2 frobenius(const Mat2& x) const { return a.conj(frob, x); }
};

TorusModel torus_model(const gf::PrimeField& f, TorusKind kind) {
  const gl2::Gl2 a(f);
  if (kind == TorusKind::Split) return {kind, a, a.make(0, 1, 1, 0), a.identity()};
  const gl2::NonsplitModel m = gl2::canonical_nonsplit(f);
  return {kind, a, m.frobenius, m.companion};
}

std::optional<AdjointSplitting> try_split(const MatrixGroup& n, TorusKind kind) {
  const TorusModel t = torus_model(n.field(), kind);
  const gf::PrimeField& f = n.field();
  const gl2::Gl2& a = t.a;
  std::vector<FpMatrix> act0;
  std::vector<FpMatrix> act1;
  for (const auto& g : n.generators()) {
    const auto dec = t.decompose(g);
    if (!dec) return std::nullopt;
    const auto& [lambda, e] = *dec;
    const Mat2 ratio = a.mul(lambda, a.inv(t.frobenius(lambda)));
    std::vector<FpVector> c0;
    std::vector<FpVector> c1;
    for (int j = 0; j < 2; ++j) {
      const Mat2 b = t.from_coords(j == 0, j == 1);
      const Mat2 fb = e ? t.frobenius(b) : b;
      c0.push_back(t.coords(fb));
      c1.push_back(t.coords(a.mul(ratio, fb)));
    }
    act0.push_back(FpMatrix::from_columns(f, 2, c0));
    act1.push_back(FpMatrix::from_columns(f, 2, c1));
  }
  std::vector<FpVector> phi_cols;
  for (int j = 0; j < 2; ++j) phi_cols.push_back(vec4(t.from_coords(j == 0, j == 1)));
  for (int j = 0; j < 2; ++j) phi_cols.push_back(vec4(a.mul(t.from_coords(j == 0, j == 1), t.frob)));
  return AdjointSplitting{kind, GModule(n, 2, std::move(act0), "A0"), GModule(n, 2, std::move(act1), "A1"),
                          FpMatrix::from_columns(f, 4, phi_cols)};
}

}  // namespace

AdjointSplitting a0_a1_modules(const MatrixGroup& n, std::optional<TorusKind> kind) {
  for (TorusKind k : {TorusKind::Split, TorusKind::Nonsplit}) {
    if (kind && *kind != k) continue;
    if (auto s = try_split(n, k)) return *s;
  }
  throw NotInNormalizer("group (" + n.describe() + ") is not inside the canonical torus normalizer");
}

// ---------------------------------------------------------------------------
// Composition factors

namespace {

std::vector<FpVector> projective_points(const gf::PrimeField& f, std::size_t d) {
  std::vector<FpVector> out;
  for (std::size_t lead = 0; lead < d; ++lead) {
    const std::size_t free = d - lead - 1;
    std::size_t total = 1;
    for (std::size_t i = 0; i < free; ++i) total *= f.p();
    for (std::size_t code = 0; code < total; ++code) {
      FpVector v(d, 0);
      v[lead] = 1;
      std::size_t c = code;
      for (std::size_t i = d; i-- > lead + 1;) {
        v[i] = static_cast<std::uint32_t>(c % f.p());
        c /= f.p();
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<FpVector> spin(const gf::PrimeField& f, const std::vector<FpMatrix>& gens, const FpVector& v) {
  const std::size_t d = v.size();
  gf::EchelonBasis eb(f, d);
  std::vector<FpVector> basis;
  eb.insert(v);
  basis.push_back(v);
  for (std::size_t head = 0; head < basis.size() && basis.size() < d; ++head) {
    for (const auto& a : gens) {
      FpVector u = gf::mat_vec(a, basis[head]);
      if (eb.insert(u)) basis.push_back(std::move(u));
    }
  }
  return basis;
}

std::optional<std::vector<FpVector>> find_sub(const gf::PrimeField& f, const std::vector<FpMatrix>& gens, std::size_t d,
                                             LineOrder order) {
  if (d <= 1) return std::nullopt;
  std::vector<FpVector> lines = projective_points(f, d);
  if (order == LineOrder::Reverse) std::reverse(lines.begin(), lines.end());
  for (const auto& v : lines) {
    auto w = spin(f, gens, v);
    if (w.size() < d) return w;
  }
  return std::nullopt;
}

struct Blocks {
  std::vector<FpMatrix> sub;
  std::vector<FpMatrix> quot;
};

Blocks split_blocks(const gf::PrimeField& f, const std::vector<FpMatrix>& gens, std::size_t d,
                    const std::vector<FpVector>& w) {
  gf::EchelonBasis eb(f, d);
  std::vector<FpVector> cols;
  for (const auto& v : w) {
    eb.insert(v);
    cols.push_back(v);
  }
  for (std::size_t i = 0; i < d && cols.size() < d; ++i) {
    FpVector e(d, 0);
    e[i] = 1;
    if (eb.insert(e)) cols.push_back(std::move(e));
  }
  const FpMatrix p = FpMatrix::from_columns(f, d, cols);
  const FpMatrix pinv = gf::inverse(p);
  const std::size_t k = w.size();
  Blocks out;
  for (const auto& a : gens) {
    const FpMatrix b = gf::mat_mul(gf::mat_mul(pinv, a), p);
    FpMatrix s(f, k, k);
    FpMatrix q(f, d - k, d - k);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        if (r < k && c < k) s(r, c) = b(r, c);
        if (r >= k && c >= k) q(r - k, c - k) = b(r, c);
      }
    }
    out.sub.push_back(std::move(s));
    out.quot.push_back(std::move(q));
  }
  return out;
}

void collect_factors(const MatrixGroup& g, const std::vector<FpMatrix>& gens, std::size_t d, LineOrder order,
                     std::vector<GModule>& out) {
  if (d == 0) return;
  const auto w = find_sub(g.field(), gens, d, order);
  if (!w) {
    out.emplace_back(g, d, gens, d == 1 ? "chi" : "irr" + std::to_string(d));
    return;
  }
  const Blocks b = split_blocks(g.field(), gens, d, *w);
  collect_factors(g, b.sub, w->size(), order, out);
  collect_factors(g, b.quot, d - w->size(), order, out);
}

void require_small(const GModule& m) {
  if (m.dim() > 4) throw DimTooLarge("module dimension " + std::to_string(m.dim()) + " exceeds 4");
}

}  // namespace

std::optional<std::vector<FpVector>> find_submodule(const GModule& m, LineOrder order) {
  require_small(m);
  return find_sub(m.group().field(), m.generator_actions(), m.dim(), order);
}

bool is_irreducible(const GModule& m) { return !find_submodule(m).has_value(); }

std::vector<GModule> composition_factors(const GModule& m, LineOrder order) {
  require_small(m);
  std::vector<GModule> out;
  collect_factors(m.group(), m.generator_actions(), m.dim(), order, out);
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

void require_same_group(const GModule& m1, const GModule& m2) {
  if (!m1.group().same_elements(m2.group()) || m1.group().generators() != m2.group().generators()) {
    throw GroupMismatch("modules are over different groups");
  }
}

bool invertible(const FpMatrix& t) { return t.is_square() && gf::determinant(t).value != 0; }

}  // namespace

std::vector<FpMatrix> intertwiner_basis(const GModule& m1, const GModule& m2) {
  require_same_group(m1, m2);
  const gf::PrimeField& f = m1.group().field();
  const std::size_t d1 = m1.dim();
  const std::size_t d2 = m2.dim();
  const std::size_t gens = m1.generator_actions().size();
  // Unknown T[r][c] sits at column r * d1 + c. Row (s, r, c): (T A1 - A2 T)[r][c] = 0.
  FpMatrix sys(f, gens * d2 * d1, d2 * d1);
  for (std::size_t s = 0; s < gens; ++s) {
    const FpMatrix& a1 = m1.generator_actions()[s];
    const FpMatrix& a2 = m2.generator_actions()[s];
    for (std::size_t r = 0; r < d2; ++r) {
      for (std::size_t c = 0; c < d1; ++c) {
        const std::size_t row = (s * d2 + r) * d1 + c;
        for (std::size_t k = 0; k < d1; ++k) sys(row, r * d1 + k) = f.add(sys(row, r * d1 + k), a1(k, c));
        for (std::size_t k = 0; k < d2; ++k) sys(row, k * d1 + c) = f.sub(sys(row, k * d1 + c), a2(r, k));
      }
    }
  }
  std::vector<FpMatrix> out;
  for (auto& v : gf::rref_kernel(sys).kernel_basis) out.emplace_back(f, d2, d1, std::move(v));
  return out;
}

std::optional<FpMatrix> find_isomorphism(const GModule& m1, const GModule& m2) {
  require_same_group(m1, m2);
  if (m1.dim() != m2.dim()) return std::nullopt;
  const auto basis = intertwiner_basis(m1, m2);
  if (basis.empty()) return std::nullopt;
  for (const auto& t : basis) {
    if (invertible(t)) return t;
  }
  const gf::PrimeField& f = m1.group().field();
  const std::size_t k = basis.size();
  auto combine = [&](const std::vector<std::uint32_t>& coeff) {
    FpMatrix t(f, m2.dim(), m1.dim());
    for (std::size_t i = 0; i < k; ++i) t = gf::mat_add(t, gf::mat_scale(basis[i], coeff[i]));
    return t;
  };
  double space = 1;
  for (std::size_t i = 0; i < k; ++i) space *= f.p();
  std::vector<std::uint32_t> coeff(k, 0);
  if (space <= static_cast<double>(1u << 20)) {
    for (;;) {
      std::size_t i = 0;
      while (i < k && ++coeff[i] == f.p()) coeff[i++] = 0;
      if (i == k) break;
      FpMatrix t = combine(coeff);
      if (invertible(t)) return t;
    }
    return std::nullopt;
  }
  std::mt19937_64 rng(0x150);
  for (int trial = 0; trial < 256; ++trial) {
    for (auto& c : coeff) c = std::uniform_int_distribution<std::uint32_t>(0, f.p() - 1)(rng);
    FpMatrix t = combine(coeff);
    if (invertible(t)) return t;
  }
  return std::nullopt;
}

bool modules_isomorphic(const GModule& m1, const GModule& m2) { return find_isomorphism(m1, m2).has_value(); }

bool irreducibles_isomorphic(const GModule& m1, const GModule& m2) {
  require_same_group(m1, m2);
  if (m1.dim() != m2.dim()) return false;
  const auto basis = intertwiner_basis(m1, m2);
  if (basis.empty()) return false;
  if (!invertible(basis.front())) throw std::logic_error("nonzero intertwiner between irreducibles is singular");
  return true;
}

bool has_common_factor(const std::vector<GModule>& f1, const std::vector<GModule>& f2) {
  for (const auto& a : f1) {
    for (const auto& b : f2) {
      if (irreducibles_isomorphic(a, b)) return true;
    }
  }
  return false;
}

bool has_common_irreducible_factor(const GModule& m1, const GModule& m2) {
  return has_common_factor(composition_factors(m1), composition_factors(m2));
}

bool same_factor_multiset(const std::vector<GModule>& f1, const std::vector<GModule>& f2) {
  if (f1.size() != f2.size()) return false;
  std::vector<bool> used(f2.size(), false);
  for (const auto& a : f1) {
    bool matched = false;
    for (std::size_t j = 0; j < f2.size() && !matched; ++j) {
      if (!used[j] && irreducibles_isomorphic(a, f2[j])) matched = used[j] = true;
    }
    if (!matched) return false;
  }
  return true;
}

std::string describe_factors(const std::vector<GModule>& factors) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < factors.size(); ++i) {
    os << (i ? ", " : "");
    if (factors[i].dim() == 1) {
      const auto v = character_values(factors[i]);
      if (std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 1; })) {
        os << '1';
        continue;
      }
      os << "chi(";
      for (std::size_t j = 0; j < v.size(); ++j) os << (j ? "," : "") << v[j];
      os << ')';
    } else {
      os << "irr" << factors[i].dim();
    }
  }
  os << '}';
  return os.str();
}

}  // namespace shadiv::gmod
