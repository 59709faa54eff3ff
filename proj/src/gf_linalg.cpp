#include "shadiv/gf_linalg.hpp"

#include <sstream>

#include "shadiv/arith.hpp"
#include "shadiv/errors.hpp"

namespace shadiv::gf {

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p > kMaxModulus || !is_prime(static_cast<std::uint64_t>(p))) {
    throw NotPrime("modulus " + std::to_string(p) + " is not a supported prime");
  }
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const {
  return static_cast<std::uint32_t>(pow_mod(a, e, p_));
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a % p_ == 0) throw SingularMatrix("inverse of zero in F_" + std::to_string(p_));
  return pow(a, p_ - 2);
}

int PrimeField::legendre(std::uint32_t a) const {
  a %= p_;
  if (a == 0) return 0;
  if (p_ == 2) return 1;
  return pow(a, (p_ - 1) / 2) == 1 ? 1 : -1;
}

std::uint32_t PrimeField::order(std::uint32_t a) const {
  if (a % p_ == 0) throw SingularMatrix("order of zero");
  std::uint32_t k = 1;
  std::uint32_t x = a % p_;
  while (x != 1) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

FpMatrix::FpMatrix(const PrimeField& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FpMatrix::FpMatrix(const PrimeField& field, std::size_t rows, std::size_t cols,
                   std::vector<std::uint32_t> entries)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw DimensionMismatch("entry count does not match shape");
  for (auto& x : data_) x %= field_.p();
}

FpMatrix::FpMatrix(std::uint32_t p, std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : field_(p), rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    for (auto x : r) data_.push_back(field_.reduce(x));
  }
}

FpMatrix FpMatrix::identity(const PrimeField& field, std::size_t n) {
  FpMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::from_columns(const PrimeField& field, std::size_t rows, std::span<const FpVector> columns) {
  FpMatrix m(field, rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw DimensionMismatch("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r] % field.p();
  }
  return m;
}

FpVector FpMatrix::column(std::size_t c) const {
  FpVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

bool FpMatrix::is_zero() const {
  for (auto x : data_) {
    if (x != 0) return false;
  }
  return true;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

bool FpMatrix::operator==(const FpMatrix& other) const {
  return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

std::string FpMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ",[" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << (*this)(r, c);
    os << ']';
  }
  os << ']';
  return os.str();
}

namespace {

void require_same_field(const FpMatrix& a, const FpMatrix& b) {
  if (!(a.field() == b.field())) {
    throw ModulusMismatch("F_" + std::to_string(a.modulus()) + " vs F_" + std::to_string(b.modulus()));
  }
}

void require_same_shape(const FpMatrix& a, const FpMatrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("shapes differ");
}

}  // namespace

FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) {
    throw DimensionMismatch(std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const std::uint64_t p = a.modulus();
  FpMatrix out(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += static_cast<std::uint64_t>(a(i, k)) * b(k, j);
      out(i, j) = static_cast<std::uint32_t>(acc % p);
    }
  }
  return out;
}

FpMatrix mat_add(const FpMatrix& a, const FpMatrix& b) {
  require_same_shape(a, b);
  FpMatrix out(a.field(), a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.field().add(a(r, c), b(r, c));
  }
  return out;
}

FpMatrix mat_sub(const FpMatrix& a, const FpMatrix& b) {
  require_same_shape(a, b);
  FpMatrix out(a.field(), a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.field().sub(a(r, c), b(r, c));
  }
  return out;
}

FpMatrix mat_scale(const FpMatrix& a, std::uint32_t s) {
  FpMatrix out(a.field(), a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.field().mul(a(r, c), s % a.modulus());
  }
  return out;
}

FpVector mat_vec(const FpMatrix& a, std::span<const std::uint32_t> v) {
  if (v.size() != a.cols()) throw DimensionMismatch("vector length does not match column count");
  const std::uint64_t p = a.modulus();
  FpVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < a.cols(); ++k) acc += static_cast<std::uint64_t>(a(i, k)) * v[k];
    out[i] = static_cast<std::uint32_t>(acc % p);
  }
  return out;
}

FpMatrix rref(const FpMatrix& m, std::vector<std::size_t>* pivot_columns) {
  const PrimeField& f = m.field();
  FpMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(pivot, c), a(row, c));
    }
    const std::uint32_t scale = f.inv(a(row, col));
    for (std::size_t c = 0; c < a.cols(); ++c) a(row, c) = f.mul(a(row, c), scale);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      const std::uint32_t factor = a(r, col);
      for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = f.sub(a(r, c), f.mul(factor, a(row, c)));
    }
    pivots.push_back(col);
    ++row;
  }
  if (pivot_columns) *pivot_columns = std::move(pivots);
  return a;
}

RrefKernel rref_kernel(const FpMatrix& m) {
  std::vector<std::size_t> pivots;
  const FpMatrix r = rref(m, &pivots);
  const PrimeField& f = m.field();
  RrefKernel out;
  out.rank = pivots.size();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    FpVector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(r(i, free));
    out.kernel_basis.push_back(std::move(v));
  }
  return out;
}

std::size_t rank(const FpMatrix& m) {
  std::vector<std::size_t> pivots;
  rref(m, &pivots);
  return pivots.size();
}

std::optional<FpVector> solve_linear(const FpMatrix& m, std::span<const std::uint32_t> rhs) {
  if (rhs.size() != m.rows()) throw DimensionMismatch("rhs length does not match row count");
  FpMatrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = rhs[r] % m.modulus();
  }
  std::vector<std::size_t> pivots;
  const FpMatrix red = rref(aug, &pivots);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  FpVector x(m.cols(), 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = red(i, m.cols());
  return x;
}

FpScalar determinant(const FpMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("determinant of non-square matrix");
  const PrimeField& f = m.field();
  FpMatrix a = m;
  std::uint32_t det = 1;
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return {0, m.modulus()};
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = f.neg(det);
    }
    det = f.mul(det, a(col, col));
    const std::uint32_t inv = f.inv(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      const std::uint32_t factor = f.mul(a(r, col), inv);
      for (std::size_t c = col; c < n; ++c) a(r, c) = f.sub(a(r, c), f.mul(factor, a(col, c)));
    }
  }
  return {det, m.modulus()};
}

FpMatrix inverse(const FpMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("inverse of non-square matrix");
  const std::size_t n = m.rows();
  FpMatrix aug(m.field(), n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  std::vector<std::size_t> pivots;
  const FpMatrix red = rref(aug, &pivots);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw SingularMatrix("matrix is not invertible");
  FpMatrix out(m.field(), n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) = red(r, n + c);
  }
  return out;
}

CharPoly2 char_poly_2x2(const FpMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionMismatch("char_poly_2x2 needs a 2x2 matrix");
  const PrimeField& f = m.field();
  return {{f.add(m(0, 0), m(1, 1)), m.modulus()},
          {f.sub(f.mul(m(0, 0), m(1, 1)), f.mul(m(0, 1), m(1, 0))), m.modulus()}};
}

EchelonBasis::EchelonBasis(const PrimeField& field, std::size_t width) : field_(field), width_(width) {}

void EchelonBasis::reduce(FpVector& v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::uint32_t c = v[pivots_[i]];
    if (c == 0) continue;
    const FpVector& row = rows_[i];
    for (std::size_t j = pivots_[i]; j < width_; ++j) {
      if (row[j] != 0) v[j] = field_.sub(v[j], field_.mul(c, row[j]));
    }
  }
}

bool EchelonBasis::insert(FpVector v) {
  if (v.size() != width_) throw DimensionMismatch("row width mismatch");
  for (auto& x : v) x %= field_.p();
  reduce(v);
  std::size_t pivot = 0;
  while (pivot < width_ && v[pivot] == 0) ++pivot;
  if (pivot == width_) return false;
  const std::uint32_t s = field_.inv(v[pivot]);
  for (std::size_t j = pivot; j < width_; ++j) v[j] = field_.mul(v[j], s);
  // Keep existing rows reduced in the new pivot column so reduce() stays a single pass.
  for (auto& row : rows_) {
    const std::uint32_t c = row[pivot];
    if (c == 0) continue;
    for (std::size_t j = pivot; j < width_; ++j) row[j] = field_.sub(row[j], field_.mul(c, v[j]));
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(pivot);
  return true;
}

bool EchelonBasis::contains(FpVector v) const {
  if (v.size() != width_) throw DimensionMismatch("row width mismatch");
  for (auto& x : v) x %= field_.p();
  reduce(v);
  for (auto x : v) {
    if (x != 0) return false;
  }
  return true;
}

}  // namespace shadiv::gf
