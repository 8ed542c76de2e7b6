#pragma once

#include <cstddef>
#include <random>

#include "icsem/matrix.hpp"
#include "icsem/process.hpp"

// Seeded generators for the property suites and `icsem verify`.
namespace icsem::random {

using Rng = std::mt19937_64;

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);
// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix unitary(std::size_t n, Rng& rng);
// rows >= cols; orthonormal columns.
ComplexMatrix isometry(std::size_t rows, std::size_t cols, Rng& rng);
ComplexMatrix pure_state(std::size_t d, Rng& rng);     // column ket
ComplexMatrix density_matrix(std::size_t d, Rng& rng);  // full rank, trace 1

// Unnormalised CP map with `kraus_count` Gaussian Kraus operators.
CPMap cp_map(std::size_t din, std::size_t dout, std::size_t kraus_count, Rng& rng);
// Trace-preserving map from a random isometry split into Kraus blocks.
CPMap channel(std::size_t din, std::size_t dout, std::size_t kraus_count, Rng& rng);
// Normalised instrument: for each input, a random channel split across outcomes.
QuantumInstrument instrument(const ClassicalSet& inputs, const ClassicalSet& outputs, std::size_t din,
                             std::size_t dout, std::size_t kraus_per_branch, Rng& rng);

double phase(Rng& rng);  // uniform in [0, 2 pi)

}  // namespace icsem::random
