#pragma once

/**
 * @file gl2_group.hpp
 * @brief Finite subgroups of GL_2(F_p): closure with witness words,
 *        classification into the classical maximal-subgroup families,
 *        and enumeration up to conjugacy.
 */

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "shadiv/gf_linalg.hpp"

namespace shadiv::gl2 {

/// Row-major 2x2 matrix {a, b, c, d} = [[a, b], [c, d]] with entries in [0, p).
using Mat2 = std::array<std::uint32_t, 4>;

/// Arithmetic on 2x2 matrices over a fixed prime field.
class Gl2 {
 public:
  explicit Gl2(const gf::PrimeField& field) : field_(field) {}
  explicit Gl2(std::uint32_t p) : field_(p) {}

  const gf::PrimeField& field() const { return field_; }
  std::uint32_t p() const { return field_.p(); }

  Mat2 identity() const { return {1, 0, 0, 1}; }
  Mat2 scalar(std::uint32_t s) const { return {s % p(), 0, 0, s % p()}; }
  Mat2 make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) const {
    return {field_.reduce(a), field_.reduce(b), field_.reduce(c), field_.reduce(d)};
  }

  Mat2 mul(const Mat2& x, const Mat2& y) const;
  std::uint32_t det(const Mat2& m) const;
  std::uint32_t trace(const Mat2& m) const { return field_.add(m[0], m[3]); }
  /// Throws SingularGenerator on det = 0.
  Mat2 inv(const Mat2& m) const;
  Mat2 pow(Mat2 m, std::uint64_t e) const;
  /// x m x^-1
  Mat2 conj(const Mat2& x, const Mat2& m) const { return mul(mul(x, m), inv(x)); }
  bool is_scalar(const Mat2& m) const { return m[1] == 0 && m[2] == 0 && m[0] == m[3]; }
  std::uint64_t element_order(const Mat2& m) const;
  /// Least k >= 1 with m^k scalar.
  std::uint64_t projective_order(const Mat2& m) const;

  std::uint64_t key(const Mat2& m) const {
    const std::uint64_t q = p();
    return ((static_cast<std::uint64_t>(m[0]) * q + m[1]) * q + m[2]) * q + m[3];
  }
  Mat2 from_key(std::uint64_t k) const;

  gf::FpMatrix to_matrix(const Mat2& m) const;
  Mat2 from_matrix(const gf::FpMatrix& m) const;

  /// |GL_2(F_p)| = (p^2 - 1)(p^2 - p).
  std::uint64_t gl2_order() const;
  /// Every invertible matrix, in increasing key order.
  std::vector<Mat2> all_elements() const;

  /// Lines of F_p^2 are indexed 0..p: i < p is span(1, i), p is span(0, 1).
  std::uint32_t line_count() const { return p() + 1; }
  std::uint32_t line_image(const Mat2& m, std::uint32_t line) const;

 private:
  gf::PrimeField field_;
};

struct Letter {
  std::uint32_t generator = 0;
  bool inverse = false;
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

struct GroupElement {
  Mat2 matrix;
  Word witness_word;
};

/**
 * A finite subgroup of GL_2(F_p). Immutable and cheap to copy.
 *
 * Elements are sorted by Gl2::key. A breadth-first spanning tree from the
 * identity (steps: right multiplication by a generator or its inverse)
 * gives every element a shortest witness word.
 */
class MatrixGroup {
 public:
  struct Impl;

  std::uint32_t p() const;
  const gf::PrimeField& field() const;
  const Gl2& arith() const;
  std::size_t order() const;

  const std::vector<Mat2>& generators() const;
  const std::vector<Mat2>& elements() const;
  const Mat2& element(std::size_t i) const { return elements()[i]; }
  GroupElement group_element(std::size_t i) const;

  bool contains(const Mat2& m) const { return index_of(m).has_value(); }
  std::optional<std::size_t> index_of(const Mat2& m) const;
  std::size_t identity_index() const;
  /// Index of (element i) * (element j).
  std::size_t product_index(std::size_t i, std::size_t j) const;

  /// Element indices in BFS order; the identity comes first.
  const std::vector<std::size_t>& bfs_order() const;
  /// Tree parent of element i and the letter with element(i) = parent * letter.
  std::size_t parent(std::size_t i) const;
  Letter parent_letter(std::size_t i) const;
  Word witness_word(std::size_t i) const;
  Mat2 evaluate(const Word& w) const;

  bool is_subgroup_of(const MatrixGroup& other) const;
  bool same_elements(const MatrixGroup& other) const;

  std::string describe() const;

 private:
  friend MatrixGroup make_group(const gf::PrimeField&, std::vector<Mat2>, std::optional<std::uint64_t>);
  explicit MatrixGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Closure of gens. Throws SingularGenerator or CapExceeded (default cap |GL_2(F_p)|).
MatrixGroup generate_group(std::uint32_t p, const std::vector<Mat2>& gens, std::optional<std::uint64_t> cap = {});
MatrixGroup generate_group(const gf::PrimeField& field, const std::vector<Mat2>& gens,
                           std::optional<std::uint64_t> cap = {});
/// Internal entry point shared by the two overloads above.
MatrixGroup make_group(const gf::PrimeField& field, std::vector<Mat2> gens, std::optional<std::uint64_t> cap);

/// Group generated by a closed set of matrices, with a small generating set chosen greedily.
MatrixGroup subgroup_from_elements(const gf::PrimeField& field, std::vector<Mat2> elems);

// Standard subgroups.
MatrixGroup full_gl2(const gf::PrimeField& field);
MatrixGroup special_linear(const gf::PrimeField& field);
MatrixGroup standard_borel(const gf::PrimeField& field);
MatrixGroup standard_unipotent(const gf::PrimeField& field);
MatrixGroup split_torus(const gf::PrimeField& field);
MatrixGroup split_normalizer(const gf::PrimeField& field);
MatrixGroup nonsplit_torus(const gf::PrimeField& field);
MatrixGroup nonsplit_normalizer(const gf::PrimeField& field);
MatrixGroup scalar_subgroup(const gf::PrimeField& field);

/// Least primitive root mod p.
std::uint32_t primitive_root(const gf::PrimeField& field);

/**
 * The fixed nonsplit model: the least irreducible x^2 - t x + n in (t, n)
 * order, its companion matrix C = [[0, -n], [1, t]], and sigma with
 * sigma C sigma^-1 = t - C (Frobenius on F_p[C]).
 */
struct NonsplitModel {
  std::uint32_t t = 0;
  std::uint32_t n = 0;
  Mat2 companion{};
  Mat2 frobenius{};
};
NonsplitModel canonical_nonsplit(const gf::PrimeField& field);

enum class ExceptionalImage { A4, S4, A5 };
std::string to_string(ExceptionalImage e);

struct ClassificationFlags {
  bool p_divides_order = false;
  bool in_borel = false;
  bool contains_sl2 = false;
  bool in_split_normalizer = false;
  bool in_nonsplit_normalizer = false;
  std::optional<ExceptionalImage> exceptional_pgl_image;

  bool any() const {
    return in_borel || contains_sl2 || in_split_normalizer || in_nonsplit_normalizer ||
           exceptional_pgl_image.has_value();
  }
  std::string to_string() const;
};

ClassificationFlags classify_subgroup(const MatrixGroup& g);

/// Line stabilized by every element, if any (smallest index).
std::optional<std::uint32_t> common_stable_line(const MatrixGroup& g);

/// Some x in GL_2(F_p) with x g x^-1 inside the canonical nonsplit normalizer.
std::optional<Mat2> conjugator_into_nonsplit_normalizer(const MatrixGroup& g);

/// Fast criterion for "g is conjugate into a subgroup isomorphic to S_3".
bool is_in_s3_copy(const MatrixGroup& g);

MatrixGroup center_intersection(const MatrixGroup& g);
MatrixGroup p_sylow(const MatrixGroup& g);
/// {x in g : x h x^-1 = h}.
MatrixGroup normalizer_in(const MatrixGroup& g, const MatrixGroup& h);

/// Some x in GL_2(F_p) with x a x^-1 = b as sets.
std::optional<Mat2> find_conjugator(const MatrixGroup& a, const MatrixGroup& b);
MatrixGroup conjugate(const MatrixGroup& g, const Mat2& x);

struct Exhaustive {};
struct Sampled {
  std::size_t count = 200;
  std::uint64_t seed = 0;
};
using EnumerationMode = std::variant<Exhaustive, Sampled>;

/**
 * Exhaustive (p <= 5): one representative per conjugacy class of subgroups,
 * each the conjugate with the lexicographically least sorted key list,
 * ordered by (order, keys). Throws ExhaustiveTooLarge for p > 5.
 *
 * Sampled (p <= 13): up to `count` distinct subgroups from seeded random
 * generators, in discovery order. Throws SampledTooLarge for p > 13.
 */
std::vector<MatrixGroup> enumerate_subgroups_up_to_conjugacy(std::uint32_t p, const EnumerationMode& mode);

/// Parses "m11,m12,m21,m22;..." into matrices. Throws ParseError.
std::vector<Mat2> parse_generators(const Gl2& arith, const std::string& text);
std::string format_mat(const Mat2& m);

}  // namespace shadiv::gl2
