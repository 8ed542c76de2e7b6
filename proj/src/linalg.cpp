#include "icsem/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "icsem/errors.hpp"

namespace icsem {

namespace {

// Eigenvalues this close are treated as degenerate when ordering eigenvectors.
constexpr double kDegeneracyTol = 1e-9;

// Lexicographic comparison of column vectors: real parts, then imaginary
// parts. Returns true if a sorts before b (larger first).
bool column_precedes(const ComplexMatrix& a, const ComplexMatrix& b) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double ar = a(i, 0).real(), br = b(i, 0).real();
    if (std::abs(ar - br) > kDegeneracyTol) return ar > br;
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double ai = a(i, 0).imag(), bi = b(i, 0).imag();
    if (std::abs(ai - bi) > kDegeneracyTol) return ai > bi;
  }
  return false;
}

}  // namespace

HermitianSpectrum hermitian_spectrum(const ComplexMatrix& m) {
  if (!is_hermitian(m, kPsdTol)) throw PreconditionError("matrix is not Hermitian");
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXcd em(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      // Symmetrize so tiny anti-Hermitian noise does not leak into the solver.
      em(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em);
  if (solver.info() != Eigen::Success) throw PreconditionError("eigensolver failed to converge");

  HermitianSpectrum out;
  out.eigenvalues.resize(m.rows());
  out.eigenvectors = ComplexMatrix(m.rows(), m.cols());
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.eigenvalues[k] = solver.eigenvalues()(src);
    for (Eigen::Index r = 0; r < n; ++r) out.eigenvectors(r, k) = solver.eigenvectors()(r, src);
  }
  return out;
}

std::size_t numerical_rank(const ComplexMatrix& hermitian, double rank_tol) {
  const auto spec = hermitian_spectrum(hermitian);
  return static_cast<std::size_t>(std::count_if(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                                                [&](double l) { return l > rank_tol; }));
}

ComplexMatrix canonical_phase(const ComplexMatrix& v) {
  const double top = v.max_abs();
  if (top == 0.0) return v;
  for (const Complex& z : v.entries()) {
    if (std::abs(z) >= top - 1e-9) return v * (std::abs(z) / z);
  }
  return v;
}

ComplexMatrix kraus_to_choi(std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) throw DimensionError("kraus_to_choi: empty Kraus list");
  const std::size_t dout = kraus.front().rows();
  const std::size_t din = kraus.front().cols();
  const std::size_t n = din * dout;
  ComplexMatrix choi(n, n);
  std::vector<Complex> vec(n);
  for (const ComplexMatrix& k : kraus) {
    if (k.rows() != dout || k.cols() != din) throw DimensionError("kraus_to_choi: Kraus shape mismatch");
    for (std::size_t i = 0; i < din; ++i)
      for (std::size_t r = 0; r < dout; ++r) vec[i * dout + r] = k(r, i);
    for (std::size_t a = 0; a < n; ++a) {
      if (vec[a] == Complex(0.0)) continue;
      for (std::size_t b = 0; b < n; ++b) choi(a, b) += vec[a] * std::conj(vec[b]);
    }
  }
  return choi;
}

std::vector<ComplexMatrix> choi_to_kraus(const ComplexMatrix& choi, std::size_t dim_in,
                                         std::size_t dim_out, double rank_tol) {
  if (choi.rows() != dim_in * dim_out || !choi.is_square()) {
    throw DimensionError("choi_to_kraus: Choi side " + std::to_string(choi.rows()) +
                         " != " + std::to_string(dim_in) + "*" + std::to_string(dim_out));
  }
  const auto spec = hermitian_spectrum(choi);
  if (!spec.eigenvalues.empty() && spec.eigenvalues.back() < -kPsdTol) {
    throw PreconditionError("Choi matrix has eigenvalue " + std::to_string(spec.eigenvalues.back()) +
                            "; map is not completely positive");
  }

  struct Pair {
    double value;
    ComplexMatrix vec;
  };
  std::vector<Pair> kept;
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    if (spec.eigenvalues[k] <= rank_tol) continue;
    ComplexMatrix v(choi.rows(), 1);
    for (std::size_t r = 0; r < choi.rows(); ++r) v(r, 0) = spec.eigenvectors(r, k);
    kept.push_back({spec.eigenvalues[k], canonical_phase(v)});
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Pair& a, const Pair& b) {
    if (std::abs(a.value - b.value) > kDegeneracyTol) return a.value > b.value;
    return column_precedes(a.vec, b.vec);
  });

  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kept.size());
  for (const Pair& p : kept) {
    const double s = std::sqrt(p.value);
    ComplexMatrix k(dim_out, dim_in);
    for (std::size_t i = 0; i < dim_in; ++i)
      for (std::size_t r = 0; r < dim_out; ++r) k(r, i) = s * p.vec(i * dim_out + r, 0);
    kraus.push_back(std::move(k));
  }
  return kraus;
}

}  // namespace icsem
