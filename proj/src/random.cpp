#include "icsem/random.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>

#include "icsem/errors.hpp"

namespace icsem::random {

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Complex& z : m.entries()) {
    const double re = n01(rng);
    const double im = n01(rng);
    z = Complex(re, im);
  }
  return m;
}

ComplexMatrix isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows < cols) throw DimensionError("isometry needs rows >= cols");
  const ComplexMatrix g = gaussian_matrix(rows, cols, rng);
  Eigen::MatrixXcd eg(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) eg(r, c) = g(r, c);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(eg);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  const Eigen::MatrixXcd rr = qr.matrixQR();
  ComplexMatrix out(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    // Fix the phase ambiguity of QR so the distribution is Haar.
    const Complex d = rr(c, c);
    const Complex ph = std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
    for (std::size_t r = 0; r < rows; ++r) out(r, c) = q(r, c) * ph;
  }
  return out;
}

ComplexMatrix unitary(std::size_t n, Rng& rng) { return isometry(n, n, rng); }

ComplexMatrix pure_state(std::size_t d, Rng& rng) {
  ComplexMatrix v = gaussian_matrix(d, 1, rng);
  return v * Complex(1.0 / std::sqrt(v.frobenius_norm_squared()));
}

ComplexMatrix density_matrix(std::size_t d, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  return rho * Complex(1.0 / rho.trace().real());
}

CPMap cp_map(std::size_t din, std::size_t dout, std::size_t kraus_count, Rng& rng) {
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < kraus_count; ++k) kraus.push_back(gaussian_matrix(dout, din, rng) * Complex(0.5));
  return {SystemDims({din}), SystemDims({dout}), std::move(kraus)};
}

namespace {

std::vector<ComplexMatrix> split_blocks(const ComplexMatrix& v, std::size_t dout, std::size_t count) {
  std::vector<ComplexMatrix> blocks;
  for (std::size_t k = 0; k < count; ++k) {
    ComplexMatrix b(dout, v.cols());
    for (std::size_t r = 0; r < dout; ++r)
      for (std::size_t c = 0; c < v.cols(); ++c) b(r, c) = v(k * dout + r, c);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

}  // namespace

CPMap channel(std::size_t din, std::size_t dout, std::size_t kraus_count, Rng& rng) {
  if (dout * kraus_count < din) kraus_count = (din + dout - 1) / dout;
  const ComplexMatrix v = isometry(dout * kraus_count, din, rng);
  return {SystemDims({din}), SystemDims({dout}), split_blocks(v, dout, kraus_count)};
}

QuantumInstrument instrument(const ClassicalSet& inputs, const ClassicalSet& outputs, std::size_t din,
                             std::size_t dout, std::size_t kraus_per_branch, Rng& rng) {
  std::size_t per = std::max<std::size_t>(kraus_per_branch, 1);
  while (dout * per * outputs.size() < din) ++per;
  std::vector<CPMap> branches;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const ComplexMatrix v = isometry(dout * per * outputs.size(), din, rng);
    const auto blocks = split_blocks(v, dout, per * outputs.size());
    for (std::size_t o = 0; o < outputs.size(); ++o) {
      std::vector<ComplexMatrix> kraus(blocks.begin() + static_cast<std::ptrdiff_t>(o * per),
                                       blocks.begin() + static_cast<std::ptrdiff_t>((o + 1) * per));
      branches.emplace_back(SystemDims({din}), SystemDims({dout}), std::move(kraus));
    }
  }
  return {inputs, outputs, SystemDims({din}), SystemDims({dout}), std::move(branches)};
}

double phase(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return u(rng);
}

}  // namespace icsem::random
