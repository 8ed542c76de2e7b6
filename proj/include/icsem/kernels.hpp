#pragma once

#include <cstddef>
#include <vector>

#include "icsem/matrix.hpp"

// Tensor kernels. The functions in namespace icsem are OpenMP-parallel over
// output rows; icsem::serial holds straightforward loop-nest versions that the
// tests use as references and the benchmark compares against.

namespace icsem {

using Permutation = std::vector<std::size_t>;

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reindex the tensor factors of a linear map.
///
/// `m` maps dims_in to dims_out. After the call, new output factor k is old
/// output factor perm_out[k], and new input factor k is old input factor
/// perm_in[k]. Throws DimensionError when a permutation has the wrong length
/// or is not a permutation.
ComplexMatrix permute_factors(const ComplexMatrix& m, const SystemDims& dims_in,
                              const SystemDims& dims_out, const Permutation& perm_in,
                              const Permutation& perm_out);

/// Trace out the listed factors of a square matrix on `dims`. Tracing every
/// factor yields the 1x1 matrix [[Tr m]].
ComplexMatrix partial_trace(const ComplexMatrix& m, const SystemDims& dims,
                            const std::vector<std::size_t>& traced);

SystemDims permuted(const SystemDims& dims, const Permutation& perm);
void check_permutation(const Permutation& perm, std::size_t n);
Permutation identity_permutation(std::size_t n);

namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix permute_factors(const ComplexMatrix& m, const SystemDims& dims_in,
                              const SystemDims& dims_out, const Permutation& perm_in,
                              const Permutation& perm_out);
ComplexMatrix partial_trace(const ComplexMatrix& m, const SystemDims& dims,
                            const std::vector<std::size_t>& traced);

}  // namespace serial

}  // namespace icsem
