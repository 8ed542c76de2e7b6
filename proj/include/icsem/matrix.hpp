#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace icsem {

using Complex = std::complex<double>;

/// Ordered list of tensor-factor dimensions. Factor 0 is the leftmost
/// (outermost) Kronecker factor; an empty list is the trivial system.
class SystemDims {
 public:
  SystemDims() = default;
  SystemDims(std::initializer_list<std::size_t> factors);
  explicit SystemDims(std::vector<std::size_t> factors);

  const std::vector<std::size_t>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  std::size_t operator[](std::size_t i) const { return factors_.at(i); }
  std::size_t total() const noexcept { return total_; }

  // Concatenation, i.e. the monoidal product of systems.
  SystemDims operator*(const SystemDims& other) const;
  bool operator==(const SystemDims& other) const { return factors_ == other.factors_; }

  // A single factor of the same total dimension.
  SystemDims flattened() const { return SystemDims({total_}); }

 private:
  std::vector<std::size_t> factors_;
  std::size_t total_ = 1;
};

/// Dense row-major complex matrix. Entries are always finite.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  // Column vector |k> in dimension n.
  static ComplexMatrix basis_ket(std::size_t n, std::size_t k);
  static ComplexMatrix basis_bra(std::size_t n, std::size_t k);
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;
  double frobenius_norm_squared() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  // Matrix product (OpenMP kernel).
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

// Largest |a_ij - b_ij|; throws DimensionError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& m, double tol);

}  // namespace icsem
