#pragma once

/**
 * @file gf_linalg.hpp
 * @brief Exact arithmetic and dense linear algebra over prime fields F_p.
 *
 * Every matrix carries its field. A PrimeField checks primality once when it
 * is built; matrices derived from an existing field reuse it without
 * re-checking. Moduli are limited to p <= 46337 (the largest prime below
 * 2^15.5), so a dot product of up to 2^32 terms fits into 64 bits before
 * reduction.
 */

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shadiv::gf {

inline constexpr std::uint32_t kMaxModulus = 46337;

class PrimeField {
 public:
  /// Throws NotPrime if p is not a prime in [2, kMaxModulus].
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }

  std::uint32_t reduce(std::int64_t x) const {
    const auto m = static_cast<std::int64_t>(p_);
    const std::int64_t r = x % m;
    return static_cast<std::uint32_t>(r < 0 ? r + m : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  /// Throws SingularMatrix on zero.
  std::uint32_t inv(std::uint32_t a) const;
  /// Legendre symbol for odd p; for p = 2 returns 1 on nonzero input.
  int legendre(std::uint32_t a) const;
  bool is_square(std::uint32_t a) const { return a == 0 || legendre(a) == 1; }
  /// Multiplicative order of a nonzero element.
  std::uint32_t order(std::uint32_t a) const;

  bool operator==(const PrimeField& other) const { return p_ == other.p_; }

 private:
  std::uint32_t p_;
};

/// A residue together with its modulus.
struct FpScalar {
  std::uint32_t value = 0;
  std::uint32_t modulus = 2;

  bool operator==(const FpScalar&) const = default;
};

using FpVector = std::vector<std::uint32_t>;

/// Dense row-major matrix over F_p.
class FpMatrix {
 public:
  FpMatrix(const PrimeField& field, std::size_t rows, std::size_t cols);
  /// Entries are reduced mod p. Throws NotPrime / DimensionMismatch.
  FpMatrix(std::uint32_t p, std::initializer_list<std::initializer_list<std::int64_t>> rows);
  FpMatrix(const PrimeField& field, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> entries);

  static FpMatrix identity(const PrimeField& field, std::size_t n);
  /// Matrix whose columns are the given vectors.
  static FpMatrix from_columns(const PrimeField& field, std::size_t rows, std::span<const FpVector> columns);

  const PrimeField& field() const { return field_; }
  std::uint32_t modulus() const { return field_.p(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const std::uint32_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  FpVector column(std::size_t c) const;
  std::span<const std::uint32_t> entries() const { return data_; }

  bool is_square() const { return rows_ == cols_; }
  bool is_zero() const;
  FpMatrix transpose() const;

  bool operator==(const FpMatrix& other) const;

  std::string to_string() const;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> data_;
};

/// Product a*b. Throws DimensionMismatch or ModulusMismatch.
FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_add(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_sub(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_scale(const FpMatrix& a, std::uint32_t s);
FpVector mat_vec(const FpMatrix& a, std::span<const std::uint32_t> v);

struct RrefKernel {
  std::size_t rank = 0;
  /// Basis of {x : m x = 0}, one vector per free column, in increasing free-column order.
  std::vector<FpVector> kernel_basis;
};

/// Reduced row echelon form, first-nonzero pivoting.
FpMatrix rref(const FpMatrix& m, std::vector<std::size_t>* pivot_columns = nullptr);
RrefKernel rref_kernel(const FpMatrix& m);
std::size_t rank(const FpMatrix& m);

/// Some x with m x = rhs, or nullopt when the system is inconsistent.
std::optional<FpVector> solve_linear(const FpMatrix& m, std::span<const std::uint32_t> rhs);

FpScalar determinant(const FpMatrix& m);
/// Throws SingularMatrix when m is not invertible.
FpMatrix inverse(const FpMatrix& m);

struct CharPoly2 {
  FpScalar trace;
  FpScalar det;
};

/// x^2 - trace x + det. Throws DimensionMismatch on non-2x2 input.
CharPoly2 char_poly_2x2(const FpMatrix& m);

/**
 * Incrementally maintained row space. Rows are kept in echelon form keyed by
 * pivot column; `insert` reports whether the new row enlarged the span.
 */
class EchelonBasis {
 public:
  EchelonBasis(const PrimeField& field, std::size_t width);

  /// Reduces v against the basis. Returns true if v was independent (and stores it).
  bool insert(FpVector v);
  /// True iff v lies in the span.
  bool contains(FpVector v) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t width() const { return width_; }

 private:
  void reduce(FpVector& v) const;

  PrimeField field_;
  std::size_t width_;
  std::vector<FpVector> rows_;          // normalized: pivot entry is 1
  std::vector<std::size_t> pivots_;     // pivot column of rows_[i]
};

}  // namespace shadiv::gf
