#include "icsem/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "icsem/errors.hpp"
#include "icsem/kernels.hpp"

namespace icsem {

SystemDims::SystemDims(std::initializer_list<std::size_t> factors)
    : SystemDims(std::vector<std::size_t>(factors)) {}

SystemDims::SystemDims(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
  for (std::size_t f : factors_) {
    if (f == 0) throw DimensionError("system factor dimension must be positive");
    total_ *= f;
  }
}

SystemDims SystemDims::operator*(const SystemDims& other) const {
  std::vector<std::size_t> joined = factors_;
  joined.insert(joined.end(), other.factors_.begin(), other.factors_.end());
  return SystemDims(std::move(joined));
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw DimensionError("matrix entry count " + std::to_string(entries_.size()) +
                         " does not match " + std::to_string(rows_) + "x" +
                         std::to_string(cols_));
  }
  for (const Complex& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw PreconditionError("matrix entries must be finite");
    }
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::basis_ket(std::size_t n, std::size_t k) {
  if (k >= n) throw DimensionError("basis index out of range");
  ComplexMatrix m(n, 1);
  m(k, 0) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::basis_bra(std::size_t n, std::size_t k) {
  if (k >= n) throw DimensionError("basis index out of range");
  ComplexMatrix m(1, n);
  m(0, k) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out = *this;
  for (Complex& z : out.entries_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of a non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm_squared() const {
  double s = 0.0;
  for (const Complex& z : entries_) s += std::norm(z);
  return s;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix sum shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw DimensionError("matrix difference shape mismatch");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& z : entries_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("cannot compare " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " with " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = r; c < m.cols(); ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
  return true;
}

}  // namespace icsem
