#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "icsem/matrix.hpp"

namespace icsem {

inline constexpr double kRankTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

struct HermitianSpectrum {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // orthonormal columns, matching eigenvalues
};

// Throws PreconditionError if `m` is not Hermitian within kPsdTol.
HermitianSpectrum hermitian_spectrum(const ComplexMatrix& m);

// Count of eigenvalues above rank_tol.
std::size_t numerical_rank(const ComplexMatrix& hermitian, double rank_tol = kRankTol);

/// Choi matrix sum_ij |i><j| (x) E(|i><j|), input factor first.
///
/// Equivalently sum_k |K_k>><<K_k| with |K>> = sum_i |i> (x) K|i>. All Kraus
/// operators must share one shape; an empty list is rejected because the
/// shape would be unknown.
ComplexMatrix kraus_to_choi(std::span<const ComplexMatrix> kraus);

/// Canonical Kraus decomposition of a Choi matrix.
///
/// Eigenpairs with eigenvalue > rank_tol become K_j = sqrt(lambda_j) unvec(v_j),
/// ordered by descending eigenvalue; near-equal eigenvalues are ordered by
/// comparing eigenvector entries lexicographically (real part, then
/// imaginary part, larger first). Each eigenvector is phased so that its first
/// entry of maximal magnitude is real and positive, which makes the output a
/// deterministic function of the input.
///
/// Throws PreconditionError on an eigenvalue below -kPsdTol (not CP).
std::vector<ComplexMatrix> choi_to_kraus(const ComplexMatrix& choi, std::size_t dim_in,
                                         std::size_t dim_out, double rank_tol = kRankTol);

// Multiply by a unit complex number so the first max-magnitude entry is real positive.
ComplexMatrix canonical_phase(const ComplexMatrix& v);

}  // namespace icsem
