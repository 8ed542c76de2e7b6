#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "icsem/matrix.hpp"
#include "icsem/random.hpp"

namespace icsem::testing {

inline ComplexMatrix pauli_x() { return {{0, 1}, {1, 0}}; }
inline ComplexMatrix pauli_y() { return {{0, Complex(0, -1)}, {Complex(0, 1), 0}}; }
inline ComplexMatrix pauli_z() { return {{1, 0}, {0, -1}}; }
inline ComplexMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, s}, {s, -s}};
}
inline ComplexMatrix projector(std::size_t n, std::size_t k) {
  ComplexMatrix m(n, n);
  m(k, k) = 1.0;
  return m;
}

// Angular distance between two phases, in [0, pi].
inline double phase_gap(double a, double b) {
  const double d = std::remainder(a - b, 2.0 * std::numbers::pi);
  return std::abs(d);
}

// Family of random channels A -> B.
inline std::vector<CPMap> random_channels(std::size_t n, std::size_t din, std::size_t dout, random::Rng& rng) {
  std::vector<CPMap> out;
  for (std::size_t x = 0; x < n; ++x) out.push_back(random::channel(din, dout, 1 + (x + din) % 3, rng));
  return out;
}

// Family of random isometries A -> B (dout >= din), as pure maps.
inline std::vector<CPMap> random_isometries(std::size_t n, std::size_t din, std::size_t dout, random::Rng& rng) {
  std::vector<CPMap> out;
  for (std::size_t x = 0; x < n; ++x) out.push_back(CPMap::dbl(random::isometry(dout, din, rng)));
  return out;
}

}  // namespace icsem::testing
