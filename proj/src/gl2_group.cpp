#include "shadiv/gl2_group.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>

#include "shadiv/errors.hpp"

namespace shadiv::gl2 {

// ---------------------------------------------------------------------------
// Gl2

Mat2 Gl2::mul(const Mat2& x, const Mat2& y) const {
  const std::uint64_t q = p();
  auto dot = [q](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return static_cast<std::uint32_t>((a * b + c * d) % q);
  };
  return {dot(x[0], y[0], x[1], y[2]), dot(x[0], y[1], x[1], y[3]), dot(x[2], y[0], x[3], y[2]),
          dot(x[2], y[1], x[3], y[3])};
}

std::uint32_t Gl2::det(const Mat2& m) const { return field_.sub(field_.mul(m[0], m[3]), field_.mul(m[1], m[2])); }

Mat2 Gl2::inv(const Mat2& m) const {
  const std::uint32_t d = det(m);
  if (d == 0) throw SingularGenerator("matrix " + format_mat(m) + " is singular mod " + std::to_string(p()));
  const std::uint32_t s = field_.inv(d);
  return {field_.mul(m[3], s), field_.mul(field_.neg(m[1]), s), field_.mul(field_.neg(m[2]), s),
          field_.mul(m[0], s)};
}

Mat2 Gl2::pow(Mat2 m, std::uint64_t e) const {
  Mat2 r = identity();
  while (e > 0) {
    if (e & 1u) r = mul(r, m);
    m = mul(m, m);
    e >>= 1u;
  }
  return r;
}

std::uint64_t Gl2::element_order(const Mat2& m) const {
  const Mat2 id = identity();
  Mat2 x = m;
  std::uint64_t k = 1;
  while (x != id) {
    x = mul(x, m);
    ++k;
  }
  return k;
}

std::uint64_t Gl2::projective_order(const Mat2& m) const {
  Mat2 x = m;
  std::uint64_t k = 1;
  while (!is_scalar(x)) {
    x = mul(x, m);
    ++k;
  }
  return k;
}

Mat2 Gl2::from_key(std::uint64_t k) const {
  const std::uint64_t q = p();
  Mat2 m{};
  for (int i = 3; i >= 0; --i) {
    m[i] = static_cast<std::uint32_t>(k % q);
    k /= q;
  }
  return m;
}

gf::FpMatrix Gl2::to_matrix(const Mat2& m) const { return gf::FpMatrix(field_, 2, 2, {m[0], m[1], m[2], m[3]}); }

Mat2 Gl2::from_matrix(const gf::FpMatrix& m) const {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionMismatch("expected a 2x2 matrix");
  if (m.modulus() != p()) throw ModulusMismatch("matrix over a different field");
  return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

std::uint64_t Gl2::gl2_order() const {
  const std::uint64_t q = p();
  return (q * q - 1) * (q * q - q);
}

std::vector<Mat2> Gl2::all_elements() const {
  std::vector<Mat2> out;
  out.reserve(gl2_order());
  const std::uint64_t total = static_cast<std::uint64_t>(p()) * p() * p() * p();
  for (std::uint64_t k = 0; k < total; ++k) {
    const Mat2 m = from_key(k);
    if (det(m) != 0) out.push_back(m);
  }
  return out;
}

std::uint32_t Gl2::line_image(const Mat2& m, std::uint32_t line) const {
  const std::uint32_t x = line < p() ? 1 : 0;
  const std::uint32_t y = line < p() ? line : 1;
  const std::uint32_t u = field_.add(field_.mul(m[0], x), field_.mul(m[1], y));
  const std::uint32_t v = field_.add(field_.mul(m[2], x), field_.mul(m[3], y));
  if (u == 0) return p();
  return field_.mul(v, field_.inv(u));
}

std::string format_mat(const Mat2& m) {
  std::ostringstream os;
  os << "[[" << m[0] << ',' << m[1] << "],[" << m[2] << ',' << m[3] << "]]";
  return os.str();
}

// ---------------------------------------------------------------------------
// MatrixGroup

struct MatrixGroup::Impl {
  Gl2 arith;
  std::vector<Mat2> generators;
  std::vector<Mat2> elements;
  std::vector<std::uint64_t> keys;
  std::vector<std::size_t> parent;
  std::vector<Letter> letter;
  std::vector<std::size_t> bfs;
  std::size_t identity = 0;

  explicit Impl(const gf::PrimeField& f) : arith(f) {}
};

std::uint32_t MatrixGroup::p() const { return impl_->arith.p(); }
const gf::PrimeField& MatrixGroup::field() const { return impl_->arith.field(); }
const Gl2& MatrixGroup::arith() const { return impl_->arith; }
std::size_t MatrixGroup::order() const { return impl_->elements.size(); }
const std::vector<Mat2>& MatrixGroup::generators() const { return impl_->generators; }
const std::vector<Mat2>& MatrixGroup::elements() const { return impl_->elements; }
std::size_t MatrixGroup::identity_index() const { return impl_->identity; }
const std::vector<std::size_t>& MatrixGroup::bfs_order() const { return impl_->bfs; }
std::size_t MatrixGroup::parent(std::size_t i) const { return impl_->parent[i]; }
Letter MatrixGroup::parent_letter(std::size_t i) const { return impl_->letter[i]; }

GroupElement MatrixGroup::group_element(std::size_t i) const { return {impl_->elements[i], witness_word(i)}; }

std::optional<std::size_t> MatrixGroup::index_of(const Mat2& m) const {
  const auto k = impl_->arith.key(m);
  const auto it = std::lower_bound(impl_->keys.begin(), impl_->keys.end(), k);
  if (it == impl_->keys.end() || *it != k) return std::nullopt;
  return static_cast<std::size_t>(it - impl_->keys.begin());
}

std::size_t MatrixGroup::product_index(std::size_t i, std::size_t j) const {
  return *index_of(impl_->arith.mul(impl_->elements[i], impl_->elements[j]));
}

Word MatrixGroup::witness_word(std::size_t i) const {
  Word w;
  while (i != impl_->identity) {
    w.push_back(impl_->letter[i]);
    i = impl_->parent[i];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

Mat2 MatrixGroup::evaluate(const Word& w) const {
  const Gl2& a = impl_->arith;
  Mat2 m = a.identity();
  for (const auto& l : w) {
    const Mat2& g = impl_->generators.at(l.generator);
    m = a.mul(m, l.inverse ? a.inv(g) : g);
  }
  return m;
}

bool MatrixGroup::is_subgroup_of(const MatrixGroup& other) const {
  if (p() != other.p() || other.order() % order() != 0) return false;
  return std::all_of(impl_->generators.begin(), impl_->generators.end(),
                     [&](const Mat2& g) { return other.contains(g); });
}

bool MatrixGroup::same_elements(const MatrixGroup& other) const {
  return p() == other.p() && impl_->keys == other.impl_->keys;
}

std::string MatrixGroup::describe() const {
  std::ostringstream os;
  os << "order " << order() << " over F_" << p() << ", generators {";
  for (std::size_t i = 0; i < impl_->generators.size(); ++i) {
    os << (i ? ", " : "") << format_mat(impl_->generators[i]);
  }
  os << '}';
  return os.str();
}

MatrixGroup make_group(const gf::PrimeField& field, std::vector<Mat2> gens, std::optional<std::uint64_t> cap) {
  auto impl = std::make_shared<MatrixGroup::Impl>(field);
  const Gl2& a = impl->arith;
  const std::uint64_t limit = cap.value_or(a.gl2_order());
  for (auto& g : gens) {
    for (auto& x : g) x %= a.p();
    if (a.det(g) == 0) throw SingularGenerator("generator " + format_mat(g) + " is singular mod " + std::to_string(a.p()));
  }
  std::vector<Mat2> inverses;
  for (const auto& g : gens) inverses.push_back(a.inv(g));

  // BFS in discovery order, then re-index by key.
  std::vector<Mat2> found{a.identity()};
  std::vector<std::size_t> parent{0};
  std::vector<Letter> letter{Letter{}};
  std::unordered_map<std::uint64_t, std::size_t> seen;
  seen.emplace(a.key(a.identity()), 0);
  for (std::size_t head = 0; head < found.size(); ++head) {
    for (std::uint32_t gi = 0; gi < gens.size(); ++gi) {
      for (bool inverse : {false, true}) {
        const Mat2 next = a.mul(found[head], inverse ? inverses[gi] : gens[gi]);
        if (seen.emplace(a.key(next), found.size()).second) {
          found.push_back(next);
          parent.push_back(head);
          letter.push_back({gi, inverse});
          if (found.size() > limit) {
            throw CapExceeded("closure exceeds cap " + std::to_string(limit));
          }
        }
      }
    }
  }

  const std::size_t n = found.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<std::uint64_t> disc_keys(n);
  for (std::size_t i = 0; i < n; ++i) disc_keys[i] = a.key(found[i]);
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) { return disc_keys[x] < disc_keys[y]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[perm[i]] = i;

  impl->generators = std::move(gens);
  impl->elements.resize(n);
  impl->keys.resize(n);
  impl->parent.resize(n);
  impl->letter.resize(n);
  impl->bfs.resize(n);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t s = rank[d];
    impl->elements[s] = found[d];
    impl->keys[s] = disc_keys[d];
    impl->parent[s] = rank[parent[d]];
    impl->letter[s] = letter[d];
    impl->bfs[d] = s;
  }
  impl->identity = rank[0];
  return MatrixGroup(std::move(impl));
}

MatrixGroup generate_group(const gf::PrimeField& field, const std::vector<Mat2>& gens,
                           std::optional<std::uint64_t> cap) {
  return make_group(field, gens, cap);
}

MatrixGroup generate_group(std::uint32_t p, const std::vector<Mat2>& gens, std::optional<std::uint64_t> cap) {
  return make_group(gf::PrimeField(p), gens, cap);
}

namespace {

/// Sorted keys of the closure of gens (forward products suffice in a finite group).
std::vector<std::uint64_t> closure_keys(const Gl2& a, const std::vector<Mat2>& gens) {
  std::vector<Mat2> found{a.identity()};
  std::unordered_set<std::uint64_t> seen{a.key(a.identity())};
  for (std::size_t head = 0; head < found.size(); ++head) {
    for (const auto& g : gens) {
      const Mat2 next = a.mul(found[head], g);
      if (seen.insert(a.key(next)).second) found.push_back(next);
    }
  }
  std::vector<std::uint64_t> keys(seen.begin(), seen.end());
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

MatrixGroup subgroup_from_elements(const gf::PrimeField& field, std::vector<Mat2> elems) {
  const Gl2 a(field);
  std::vector<std::pair<std::uint64_t, Mat2>> cand;
  for (const auto& m : elems) cand.emplace_back(a.key(m), m);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const std::size_t target = cand.size();

  // Prefer elements of large order; ties by key.
  std::vector<std::pair<std::uint64_t, std::size_t>> by_order;
  for (std::size_t i = 0; i < cand.size(); ++i) by_order.emplace_back(a.element_order(cand[i].second), i);
  std::stable_sort(by_order.begin(), by_order.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

  std::vector<Mat2> gens;
  std::vector<std::uint64_t> current{a.key(a.identity())};
  for (const auto& [ord, i] : by_order) {
    if (current.size() >= target) break;
    if (std::binary_search(current.begin(), current.end(), cand[i].first)) continue;
    gens.push_back(cand[i].second);
    current = closure_keys(a, gens);
  }
  MatrixGroup g = make_group(field, std::move(gens), std::nullopt);
  if (g.order() != target) throw std::invalid_argument("element set is not closed under multiplication");
  return g;
}

// ---------------------------------------------------------------------------
// Standard subgroups

std::uint32_t primitive_root(const gf::PrimeField& field) {
  if (field.p() == 2) return 1;
  for (std::uint32_t g = 2; g < field.p(); ++g) {
    if (field.order(g) == field.p() - 1) return g;
  }
  return 1;
}

namespace {

std::vector<Mat2> drop_identity(std::vector<Mat2> gens) {
  const Mat2 id{1, 0, 0, 1};
  std::erase(gens, id);
  return gens;
}

Mat2 nonsplit_generator(const Gl2& a, const NonsplitModel& m) {
  const std::uint64_t target = static_cast<std::uint64_t>(a.p()) * a.p() - 1;
  for (std::uint32_t x = 0; x < a.p(); ++x) {
    for (std::uint32_t y = 1; y < a.p(); ++y) {
      const Mat2 e = a.make(x, static_cast<std::int64_t>(y) * m.companion[1], y, x + static_cast<std::int64_t>(y) * m.companion[3]);
      if (a.element_order(e) == target) return e;
    }
  }
  return a.identity();
}

}  // namespace

MatrixGroup full_gl2(const gf::PrimeField& field) {
  const Gl2 a(field);
  const std::uint32_t g = primitive_root(field);
  return make_group(field, drop_identity({a.make(g, 0, 0, 1), a.make(1, 1, 0, 1), a.make(0, 1, 1, 0)}), std::nullopt);
}

MatrixGroup special_linear(const gf::PrimeField& field) {
  const Gl2 a(field);
  return make_group(field, {a.make(1, 1, 0, 1), a.make(1, 0, 1, 1)}, std::nullopt);
}

MatrixGroup standard_borel(const gf::PrimeField& field) {
  const Gl2 a(field);
  const std::uint32_t g = primitive_root(field);
  return make_group(field, drop_identity({a.make(g, 0, 0, 1), a.make(1, 0, 0, g), a.make(1, 1, 0, 1)}), std::nullopt);
}

MatrixGroup standard_unipotent(const gf::PrimeField& field) {
  const Gl2 a(field);
  return make_group(field, {a.make(1, 1, 0, 1)}, std::nullopt);
}

MatrixGroup split_torus(const gf::PrimeField& field) {
  const Gl2 a(field);
  const std::uint32_t g = primitive_root(field);
  return make_group(field, drop_identity({a.make(g, 0, 0, 1), a.make(1, 0, 0, g)}), std::nullopt);
}

MatrixGroup split_normalizer(const gf::PrimeField& field) {
  const Gl2 a(field);
  const std::uint32_t g = primitive_root(field);
  return make_group(field, drop_identity({a.make(g, 0, 0, 1), a.make(1, 0, 0, g), a.make(0, 1, 1, 0)}),
                    std::nullopt);
}

MatrixGroup nonsplit_torus(const gf::PrimeField& field) {
  const Gl2 a(field);
  return make_group(field, {nonsplit_generator(a, canonical_nonsplit(field))}, std::nullopt);
}

MatrixGroup nonsplit_normalizer(const gf::PrimeField& field) {
  const Gl2 a(field);
  const NonsplitModel m = canonical_nonsplit(field);
  return make_group(field, {nonsplit_generator(a, m), m.frobenius}, std::nullopt);
}

MatrixGroup scalar_subgroup(const gf::PrimeField& field) {
  const Gl2 a(field);
  return make_group(field, drop_identity({a.scalar(primitive_root(field))}), std::nullopt);
}

NonsplitModel canonical_nonsplit(const gf::PrimeField& f) {
  const Gl2 a(f);
  for (std::uint32_t t = 0; t < f.p(); ++t) {
    for (std::uint32_t n = 1; n < f.p(); ++n) {
      bool has_root = false;
      for (std::uint32_t x = 0; x < f.p() && !has_root; ++x) {
        has_root = f.add(f.sub(f.mul(x, x), f.mul(t, x)), n) == 0;
      }
      if (has_root) continue;
      NonsplitModel m;
      m.t = t;
      m.n = n;
      m.companion = {0, f.neg(n), 1, t};
      m.frobenius = {1, t, 0, f.neg(1)};
      return m;
    }
  }
  throw std::logic_error("no irreducible quadratic found");
}

std::string to_string(ExceptionalImage e) {
  switch (e) {
    case ExceptionalImage::A4: return "A4";
    case ExceptionalImage::S4: return "S4";
    case ExceptionalImage::A5: return "A5";
  }
  return "?";
}

std::string ClassificationFlags::to_string() const {
  std::ostringstream os;
  os << "p_divides_order=" << p_divides_order << " in_borel=" << in_borel << " contains_sl2=" << contains_sl2
     << " in_split_normalizer=" << in_split_normalizer << " in_nonsplit_normalizer=" << in_nonsplit_normalizer
     << " exceptional_pgl_image=" << (exceptional_pgl_image ? gl2::to_string(*exceptional_pgl_image) : "none");
  return os.str();
}

// ---------------------------------------------------------------------------
// Classification

std::optional<std::uint32_t> common_stable_line(const MatrixGroup& g) {
  const Gl2& a = g.arith();
  for (std::uint32_t line = 0; line < a.line_count(); ++line) {
    const bool stable = std::all_of(g.generators().begin(), g.generators().end(),
                                    [&](const Mat2& s) { return a.line_image(s, line) == line; });
    if (stable) return line;
  }
  return std::nullopt;
}

namespace {

bool in_split_normalizer(const MatrixGroup& g) {
  const Gl2& a = g.arith();
  const std::uint32_t lines = a.line_count();
  std::vector<std::vector<std::uint32_t>> images;
  for (const auto& s : g.generators()) {
    std::vector<std::uint32_t> img(lines);
    for (std::uint32_t l = 0; l < lines; ++l) img[l] = a.line_image(s, l);
    images.push_back(std::move(img));
  }
  for (std::uint32_t i = 0; i < lines; ++i) {
    for (std::uint32_t j = i + 1; j < lines; ++j) {
      const bool ok = std::all_of(images.begin(), images.end(), [&](const auto& img) {
        return (img[i] == i && img[j] == j) || (img[i] == j && img[j] == i);
      });
      if (ok) return true;
    }
  }
  return false;
}

std::optional<ExceptionalImage> exceptional_image(const MatrixGroup& g) {
  const Gl2& a = g.arith();
  if (g.order() % g.p() == 0) return std::nullopt;
  std::size_t scalars = 0;
  std::uint64_t max_order = 0;
  bool has_six = false;
  for (const auto& m : g.elements()) {
    if (a.is_scalar(m)) ++scalars;
    const auto o = a.projective_order(m);
    max_order = std::max(max_order, o);
    has_six = has_six || o == 6;
  }
  const std::size_t q = g.order() / scalars;
  if (q == 12 && !has_six) return ExceptionalImage::A4;
  if (q == 24 && max_order <= 4) return ExceptionalImage::S4;
  if (q == 60 && max_order <= 5) return ExceptionalImage::A5;
  return std::nullopt;
}

}  // namespace

std::optional<Mat2> conjugator_into_nonsplit_normalizer(const MatrixGroup& g) {
  const Gl2& a = g.arith();
  const NonsplitModel model = canonical_nonsplit(g.field());
  const Mat2& c = model.companion;
  const Mat2 sigma_inv = a.inv(model.frobenius);
  auto in_torus = [&](const Mat2& m) { return a.mul(m, c) == a.mul(c, m); };
  auto in_normalizer = [&](const Mat2& m) { return in_torus(m) || in_torus(a.mul(sigma_inv, m)); };
  if (g.generators().empty()) return a.identity();
  for (const auto& x : a.all_elements()) {
    const Mat2 xi = a.inv(x);
    const bool ok = std::all_of(g.generators().begin(), g.generators().end(),
                                [&](const Mat2& s) { return in_normalizer(a.mul(a.mul(x, s), xi)); });
    if (ok) return x;
  }
  return std::nullopt;
}

ClassificationFlags classify_subgroup(const MatrixGroup& g) {
  const Gl2& a = g.arith();
  ClassificationFlags f;
  f.p_divides_order = g.order() % g.p() == 0;
  f.in_borel = common_stable_line(g).has_value();
  f.contains_sl2 = g.contains(a.make(1, 1, 0, 1)) && g.contains(a.make(1, 0, 1, 1));
  f.in_split_normalizer = in_split_normalizer(g);
  f.in_nonsplit_normalizer = conjugator_into_nonsplit_normalizer(g).has_value();
  f.exceptional_pgl_image = exceptional_image(g);
  return f;
}

bool is_in_s3_copy(const MatrixGroup& g) {
  const Gl2& a = g.arith();
  const std::size_t n = g.order();
  if (n == 1) return true;
  if (n != 2 && n != 3 && n != 6) return false;
  if (g.p() == 2) return true;  // every subgroup of GL_2(F_2) ~ S_3
  if (n == 2) {
    const Mat2& x = g.element(g.identity_index() == 0 ? 1 : 0);
    return a.det(x) == g.p() - 1;
  }
  if (n == 3) {
    const Mat2& x = g.element(g.identity_index() == 0 ? 1 : 0);
    return g.p() == 3 || a.det(x) == 1;
  }
  const auto& els = g.elements();
  for (const auto& x : els) {
    for (const auto& y : els) {
      if (a.mul(x, y) != a.mul(y, x)) return true;
    }
  }
  return false;
}

MatrixGroup center_intersection(const MatrixGroup& g) {
  std::vector<Mat2> scalars;
  for (const auto& m : g.elements()) {
    if (g.arith().is_scalar(m)) scalars.push_back(m);
  }
  return subgroup_from_elements(g.field(), std::move(scalars));
}

MatrixGroup normalizer_in(const MatrixGroup& g, const MatrixGroup& h) {
  const Gl2& a = g.arith();
  std::vector<Mat2> out;
  for (const auto& x : g.elements()) {
    const Mat2 xi = a.inv(x);
    const bool ok = std::all_of(h.generators().begin(), h.generators().end(),
                                [&](const Mat2& s) { return h.contains(a.mul(a.mul(x, s), xi)); });
    if (ok) out.push_back(x);
  }
  return subgroup_from_elements(g.field(), std::move(out));
}

MatrixGroup p_sylow(const MatrixGroup& g) {
  const Gl2& a = g.arith();
  std::size_t target = 1;
  for (std::size_t n = g.order(); n % g.p() == 0; n /= g.p()) target *= g.p();
  MatrixGroup sylow = make_group(g.field(), {}, std::nullopt);
  while (sylow.order() < target) {
    const MatrixGroup n = normalizer_in(g, sylow);
    bool grown = false;
    for (const auto& x : n.elements()) {
      if (sylow.contains(x)) continue;
      std::uint64_t m = a.element_order(x);
      while (m % g.p() == 0) m /= g.p();
      const Mat2 y = a.pow(x, m);
      if (sylow.contains(y)) continue;
      std::vector<Mat2> gens = sylow.generators();
      gens.push_back(y);
      sylow = make_group(g.field(), std::move(gens), std::nullopt);
      grown = true;
      break;
    }
    if (!grown) throw std::logic_error("Sylow extension failed");
  }
  return sylow;
}

MatrixGroup conjugate(const MatrixGroup& g, const Mat2& x) {
  const Gl2& a = g.arith();
  std::vector<Mat2> gens;
  for (const auto& s : g.generators()) gens.push_back(a.conj(x, s));
  return make_group(g.field(), std::move(gens), std::nullopt);
}

std::optional<Mat2> find_conjugator(const MatrixGroup& src, const MatrixGroup& dst) {
  if (src.p() != dst.p()) throw ModulusMismatch("groups over different fields");
  if (src.order() != dst.order()) return std::nullopt;
  const Gl2& a = src.arith();
  for (const auto& x : a.all_elements()) {
    const Mat2 xi = a.inv(x);
    const bool ok = std::all_of(src.generators().begin(), src.generators().end(),
                                [&](const Mat2& s) { return dst.contains(a.mul(a.mul(x, s), xi)); });
    if (ok) return x;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

using IndexSet = std::vector<std::uint32_t>;

struct IndexSetHash {
  std::size_t operator()(const IndexSet& s) const { return boost::hash_range(s.begin(), s.end()); }
};

/// Dense multiplication table over all of GL_2(F_p), for small p.
struct Gl2Table {
  Gl2 a;
  std::vector<Mat2> all;
  std::vector<std::uint32_t> mul;  // all.size()^2
  std::vector<std::uint32_t> inv;
  std::uint32_t identity = 0;

  explicit Gl2Table(const gf::PrimeField& f) : a(f), all(a.all_elements()) {
    const std::size_t n = all.size();
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    for (std::uint32_t i = 0; i < n; ++i) index.emplace(a.key(all[i]), i);
    mul.resize(n * n);
    inv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) mul[i * n + j] = index.at(a.key(a.mul(all[i], all[j])));
      inv[i] = index.at(a.key(a.inv(all[i])));
    }
    identity = index.at(a.key(a.identity()));
  }
  std::size_t size() const { return all.size(); }
  std::uint32_t times(std::uint32_t x, std::uint32_t y) const { return mul[x * all.size() + y]; }
  std::uint32_t conj(std::uint32_t x, std::uint32_t h) const { return times(times(x, h), inv[x]); }

  IndexSet closure(const std::vector<std::uint32_t>& gens) const {
    std::vector<char> seen(size(), 0);
    IndexSet found{identity};
    seen[identity] = 1;
    for (std::size_t head = 0; head < found.size(); ++head) {
      for (auto g : gens) {
        const auto nx = times(found[head], g);
        if (!seen[nx]) {
          seen[nx] = 1;
          found.push_back(nx);
        }
      }
    }
    std::sort(found.begin(), found.end());
    return found;
  }
};

std::vector<MatrixGroup> enumerate_exhaustive(const gf::PrimeField& field) {
  const Gl2Table t(field);
  const std::size_t n = t.size();

  struct ClassRep {
    IndexSet elements;
    std::vector<std::uint32_t> gens;
  };
  std::vector<ClassRep> reps;
  std::unordered_map<IndexSet, std::size_t, IndexSetHash> seen;

  auto add_class = [&](const IndexSet& h, const std::vector<std::uint32_t>& gens) {
    const std::size_t id = reps.size();
    IndexSet best = h;
    std::uint32_t best_x = t.identity;
    IndexSet img(h.size());
    for (std::uint32_t x = 0; x < n; ++x) {
      for (std::size_t i = 0; i < h.size(); ++i) img[i] = t.conj(x, h[i]);
      std::sort(img.begin(), img.end());
      if (seen.emplace(img, id).second && img < best) {
        best = img;
        best_x = x;
      }
    }
    std::vector<std::uint32_t> cg;
    for (auto s : gens) cg.push_back(t.conj(best_x, s));
    reps.push_back({std::move(best), std::move(cg)});
  };

  add_class(t.closure({}), {});
  std::vector<char> done(n);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const IndexSet h = reps[r].elements;
    const std::vector<std::uint32_t> hgens = reps[r].gens;
    std::fill(done.begin(), done.end(), 0);
    for (auto e : h) done[e] = 1;
    for (std::uint32_t x = 0; x < n; ++x) {
      if (done[x]) continue;
      // <H, x> depends only on the coset xH.
      for (auto e : h) done[t.times(x, e)] = 1;
      std::vector<std::uint32_t> gens = hgens;
      gens.push_back(x);
      const IndexSet k = t.closure(gens);
      if (!seen.contains(k)) add_class(k, gens);
    }
  }

  std::sort(reps.begin(), reps.end(), [](const ClassRep& x, const ClassRep& y) {
    if (x.elements.size() != y.elements.size()) return x.elements.size() < y.elements.size();
    return x.elements < y.elements;
  });
  std::vector<MatrixGroup> out;
  out.reserve(reps.size());
  for (const auto& rep : reps) {
    std::vector<Mat2> els;
    for (auto i : rep.elements) els.push_back(t.all[i]);
    out.push_back(subgroup_from_elements(field, std::move(els)));
  }
  return out;
}

enum class Family { General, Borel, SplitNormalizer, NonsplitNormalizer, Power };

std::vector<MatrixGroup> enumerate_sampled(const gf::PrimeField& field, const Sampled& mode) {
  const Gl2 a(field);
  const NonsplitModel ns = canonical_nonsplit(field);
  std::mt19937_64 rng(mode.seed);
  auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
  };
  const std::uint32_t p = field.p();
  auto unit = [&] { return uniform(1, p - 1); };
  auto any_gl2 = [&] {
    for (;;) {
      const Mat2 m{uniform(0, p - 1), uniform(0, p - 1), uniform(0, p - 1), uniform(0, p - 1)};
      if (a.det(m) != 0) return m;
    }
  };
  auto draw = [&](Family f) -> Mat2 {
    switch (f) {
      case Family::General: return any_gl2();
      case Family::Borel: return {unit(), uniform(0, p - 1), 0, unit()};
      case Family::SplitNormalizer:
        return uniform(0, 1) ? Mat2{unit(), 0, 0, unit()} : Mat2{0, unit(), unit(), 0};
      case Family::NonsplitNormalizer: {
        Mat2 m{};
        do {
          const std::uint32_t x = uniform(0, p - 1);
          const std::uint32_t y = uniform(0, p - 1);
          m = a.make(x, static_cast<std::int64_t>(y) * ns.companion[1], y,
                     x + static_cast<std::int64_t>(y) * ns.companion[3]);
        } while (a.det(m) == 0);
        return uniform(0, 1) ? a.mul(ns.frobenius, m) : m;
      }
      case Family::Power: {
        const Mat2 m = any_gl2();
        return a.pow(m, uniform(1, static_cast<std::uint32_t>(a.element_order(m))));
      }
    }
    return a.identity();
  };

  std::vector<MatrixGroup> out;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash;
  const std::size_t max_attempts = 50 * std::max<std::size_t>(mode.count, 1);
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < mode.count; ++attempt) {
    const auto family = static_cast<Family>(uniform(0, 4));
    const std::uint32_t k = uniform(1, 3);
    const Mat2 x = any_gl2();
    std::vector<Mat2> gens;
    for (std::uint32_t i = 0; i < k; ++i) gens.push_back(a.conj(x, draw(family)));
    MatrixGroup g = make_group(field, std::move(gens), std::nullopt);
    std::vector<std::uint64_t> keys;
    keys.reserve(g.order());
    for (const auto& m : g.elements()) keys.push_back(a.key(m));
    const std::size_t h = boost::hash_range(keys.begin(), keys.end());
    auto& bucket = by_hash[h];
    const bool dup = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t i) { return out[i].same_elements(g); });
    if (dup) continue;
    bucket.push_back(out.size());
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::vector<MatrixGroup> enumerate_subgroups_up_to_conjugacy(std::uint32_t p, const EnumerationMode& mode) {
  const gf::PrimeField field(p);
  if (std::holds_alternative<Exhaustive>(mode)) {
    if (p > 5) throw ExhaustiveTooLarge("exhaustive enumeration needs p <= 5, got " + std::to_string(p));
    return enumerate_exhaustive(field);
  }
  if (p > 13) throw SampledTooLarge("sampled enumeration needs p <= 13, got " + std::to_string(p));
  return enumerate_sampled(field, std::get<Sampled>(mode));
}

std::vector<Mat2> parse_generators(const Gl2& arith, const std::string& text) {
  std::vector<Mat2> out;
  std::stringstream groups(text);
  std::string chunk;
  while (std::getline(groups, chunk, ';')) {
    if (chunk.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream entries(chunk);
    std::string item;
    std::vector<std::int64_t> v;
    while (std::getline(entries, item, ',')) {
      std::size_t used = 0;
      std::int64_t x = 0;
      try {
        x = std::stoll(item, &used);
      } catch (const std::exception&) {
        throw ParseError("bad matrix entry '" + item + "'");
      }
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw ParseError("bad matrix entry '" + item + "'");
      v.push_back(x);
    }
    if (v.size() != 4) throw ParseError("each generator needs 4 entries, got '" + chunk + "'");
    out.push_back(arith.make(v[0], v[1], v[2], v[3]));
  }
  return out;
}

}  // namespace shadiv::gl2
