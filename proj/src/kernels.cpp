#include "icsem/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "icsem/errors.hpp"

namespace icsem {

namespace {

// Below this many output entries the OpenMP fork costs more than the work.
constexpr std::size_t kParallelThreshold = 4096;

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& factors) {
  std::vector<std::size_t> strides(factors.size(), 1);
  for (std::size_t k = factors.size(); k-- > 1;) strides[k - 1] = strides[k] * factors[k];
  return strides;
}

// old_of_new[j] = flat index in the old layout of flat index j in the permuted layout.
std::vector<std::size_t> old_index_of_new(const SystemDims& dims, const Permutation& perm) {
  const auto& f = dims.factors();
  const auto old_strides = strides_of(f);
  std::vector<std::size_t> new_factors(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) new_factors[k] = f[perm[k]];
  std::vector<std::size_t> table(dims.total());
  std::vector<std::size_t> digits(f.size(), 0);
  for (std::size_t j = 0; j < table.size(); ++j) {
    std::size_t old = 0;
    for (std::size_t k = 0; k < f.size(); ++k) old += digits[k] * old_strides[perm[k]];
    table[j] = old;
    for (std::size_t k = f.size(); k-- > 0;) {
      if (++digits[k] < new_factors[k]) break;
      digits[k] = 0;
    }
  }
  return table;
}

void check_same_total(const ComplexMatrix& m, const SystemDims& in, const SystemDims& out) {
  if (m.rows() != out.total() || m.cols() != in.total()) {
    throw DimensionError("matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         " does not match declared systems " + std::to_string(out.total()) + "x" +
                         std::to_string(in.total()));
  }
}

struct TraceIndex {
  std::vector<std::size_t> kept_factors;
  std::vector<std::size_t> traced_factors;
  // full[a * traced_total + t] = flat index for kept index a and traced index t.
  std::vector<std::size_t> full;
  std::size_t kept_total = 1;
  std::size_t traced_total = 1;
};

TraceIndex trace_index(const ComplexMatrix& m, const SystemDims& dims,
                       const std::vector<std::size_t>& traced) {
  if (!m.is_square()) throw DimensionError("partial trace of a non-square matrix");
  if (m.rows() != dims.total()) throw DimensionError("partial trace: matrix side != dims.total");
  std::vector<bool> is_traced(dims.size(), false);
  for (std::size_t t : traced) {
    if (t >= dims.size()) throw DimensionError("partial trace: invalid factor index " + std::to_string(t));
    is_traced[t] = true;
  }
  TraceIndex ix;
  Permutation perm;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!is_traced[k]) {
      perm.push_back(k);
      ix.kept_factors.push_back(dims[k]);
      ix.kept_total *= dims[k];
    }
  }
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (is_traced[k]) {
      perm.push_back(k);
      ix.traced_factors.push_back(dims[k]);
      ix.traced_total *= dims[k];
    }
  }
  ix.full = old_index_of_new(dims, perm);
  return ix;
}

}  // namespace

void check_permutation(const Permutation& perm, std::size_t n) {
  if (perm.size() != n) {
    throw DimensionError("permutation length " + std::to_string(perm.size()) +
                         " != factor count " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw DimensionError("not a permutation");
    seen[p] = true;
  }
}

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

SystemDims permuted(const SystemDims& dims, const Permutation& perm) {
  check_permutation(perm, dims.size());
  std::vector<std::size_t> f(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) f[k] = dims[perm[k]];
  return SystemDims(std::move(f));
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  ComplexMatrix c(a.rows(), b.cols());
  const auto n = static_cast<std::int64_t>(a.rows());
  const std::size_t inner = a.cols();
  const std::size_t cols = b.cols();
#pragma omp parallel for schedule(static) if (a.rows() * b.cols() * inner >= kParallelThreshold)
  for (std::int64_t r = 0; r < n; ++r) {
    // raw row pointers: through the accessors every store reloads the members
    Complex* crow = &c(static_cast<std::size_t>(r), 0);
    const Complex* arow = &a(static_cast<std::size_t>(r), 0);
    for (std::size_t k = 0; k < inner; ++k) {
      const Complex aik = arow[k];
      if (aik == Complex(0.0)) continue;
      const Complex* brow = &b(k, 0);
      const double ar = aik.real(), ai = aik.imag();
      // spelled out: std::complex operator* takes the slow Annex G path
      for (std::size_t col = 0; col < cols; ++col) {
        const double br = brow[col].real(), bi = brow[col].imag();
        crow[col] += Complex(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  }
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  const auto n = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static) if (out.rows() * out.cols() >= kParallelThreshold)
  for (std::int64_t ri = 0; ri < n; ++ri) {
    const auto i = static_cast<std::size_t>(ri);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  }
  return out;
}

ComplexMatrix permute_factors(const ComplexMatrix& m, const SystemDims& dims_in,
                              const SystemDims& dims_out, const Permutation& perm_in,
                              const Permutation& perm_out) {
  check_same_total(m, dims_in, dims_out);
  check_permutation(perm_in, dims_in.size());
  check_permutation(perm_out, dims_out.size());
  const auto rows = old_index_of_new(dims_out, perm_out);
  const auto cols = old_index_of_new(dims_in, perm_in);
  ComplexMatrix out(m.rows(), m.cols());
  const auto n = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static) if (m.rows() * m.cols() >= kParallelThreshold)
  for (std::int64_t r = 0; r < n; ++r) {
    const std::size_t old_r = rows[static_cast<std::size_t>(r)];
    for (std::size_t c = 0; c < cols.size(); ++c) out(static_cast<std::size_t>(r), c) = m(old_r, cols[c]);
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SystemDims& dims,
                            const std::vector<std::size_t>& traced) {
  const TraceIndex ix = trace_index(m, dims, traced);
  ComplexMatrix out(ix.kept_total, ix.kept_total);
  const auto n = static_cast<std::int64_t>(ix.kept_total);
#pragma omp parallel for schedule(static) if (m.rows() * m.cols() >= kParallelThreshold)
  for (std::int64_t ra = 0; ra < n; ++ra) {
    const auto a = static_cast<std::size_t>(ra);
    for (std::size_t b = 0; b < ix.kept_total; ++b) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < ix.traced_total; ++t) {
        s += m(ix.full[a * ix.traced_total + t], ix.full[b * ix.traced_total + t]);
      }
      out(a, b) = s;
    }
  }
  return out;
}

namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimension mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Decodes every multi-index digit by digit; no lookup tables.
ComplexMatrix permute_factors(const ComplexMatrix& m, const SystemDims& dims_in,
                              const SystemDims& dims_out, const Permutation& perm_in,
                              const Permutation& perm_out) {
  check_same_total(m, dims_in, dims_out);
  check_permutation(perm_in, dims_in.size());
  check_permutation(perm_out, dims_out.size());
  auto remap = [](std::size_t old_flat, const SystemDims& dims, const Permutation& perm) {
    const auto& f = dims.factors();
    std::vector<std::size_t> digits(f.size());
    for (std::size_t k = f.size(); k-- > 0;) {
      digits[k] = old_flat % f[k];
      old_flat /= f[k];
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) flat = flat * f[perm[k]] + digits[perm[k]];
    return flat;
  };
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      out(remap(r, dims_out, perm_out), remap(c, dims_in, perm_in)) = m(r, c);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SystemDims& dims,
                            const std::vector<std::size_t>& traced) {
  if (!m.is_square() || m.rows() != dims.total()) throw DimensionError("partial trace: bad shape");
  std::vector<bool> is_traced(dims.size(), false);
  for (std::size_t t : traced) {
    if (t >= dims.size()) throw DimensionError("partial trace: invalid factor index");
    is_traced[t] = true;
  }
  std::size_t kept_total = 1;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (!is_traced[k]) kept_total *= dims[k];
  ComplexMatrix out(kept_total, kept_total);
  const auto& f = dims.factors();
  // Visit every (row, col) pair; accumulate when traced digits agree.
  std::vector<std::size_t> dr(f.size()), dc(f.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::size_t x = r;
    for (std::size_t k = f.size(); k-- > 0;) { dr[k] = x % f[k]; x /= f[k]; }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::size_t y = c;
      for (std::size_t k = f.size(); k-- > 0;) { dc[k] = y % f[k]; y /= f[k]; }
      bool match = true;
      std::size_t kr = 0, kc = 0;
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (is_traced[k]) {
          if (dr[k] != dc[k]) { match = false; break; }
        } else {
          kr = kr * f[k] + dr[k];
          kc = kc * f[k] + dc[k];
        }
      }
      if (match) out(kr, kc) += m(r, c);
    }
  }
  return out;
}

}  // namespace serial

}  // namespace icsem
