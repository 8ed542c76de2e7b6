#include "icsem/process.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <string>

#include "icsem/errors.hpp"
#include "icsem/kernels.hpp"

namespace icsem {

// ---------------------------------------------------------------------------
// ClassicalSet

ClassicalSet::ClassicalSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw PreconditionError("classical set must be non-empty");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw PreconditionError("classical set labels must be unique");
}

ClassicalSet ClassicalSet::range(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return ClassicalSet(std::move(labels));
}

ClassicalSet ClassicalSet::product(std::span<const ClassicalSet> sets) {
  std::vector<std::string> labels{""};
  bool first = true;
  for (const ClassicalSet& s : sets) {
    std::vector<std::string> next;
    next.reserve(labels.size() * s.size());
    for (const std::string& prefix : labels)
      for (const std::string& l : s.labels()) next.push_back(first ? l : prefix + "," + l);
    labels = std::move(next);
    first = false;
  }
  if (first) return ClassicalSet::singleton();
  return ClassicalSet(std::move(labels));
}

std::size_t ClassicalSet::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw PreconditionError("unknown classical value '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

bool ClassicalSet::contains(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

// ---------------------------------------------------------------------------
// CPMap

struct CPMap::ChoiCache {
  std::once_flag once;
  ComplexMatrix choi;
};

CPMap::CPMap(SystemDims dim_in, SystemDims dim_out, std::vector<ComplexMatrix> kraus)
    : dim_in_(std::move(dim_in)),
      dim_out_(std::move(dim_out)),
      kraus_(std::move(kraus)),
      cache_(std::make_shared<ChoiCache>()) {
  for (const ComplexMatrix& k : kraus_) {
    if (k.rows() != dim_out_.total() || k.cols() != dim_in_.total()) {
      throw DimensionError("Kraus operator " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                           " does not map dim " + std::to_string(dim_in_.total()) + " to " +
                           std::to_string(dim_out_.total()));
    }
  }
}

CPMap CPMap::identity(SystemDims dims) {
  const std::size_t n = dims.total();
  return {dims, dims, {ComplexMatrix::identity(n)}};
}

CPMap CPMap::dbl(ComplexMatrix op) {
  SystemDims in({op.cols()});
  SystemDims out({op.rows()});
  return {std::move(in), std::move(out), {std::move(op)}};
}

CPMap CPMap::dbl(ComplexMatrix op, SystemDims dim_in, SystemDims dim_out) {
  return {std::move(dim_in), std::move(dim_out), {std::move(op)}};
}

const ComplexMatrix& CPMap::choi() const {
  std::call_once(cache_->once, [this] {
    if (kraus_.empty()) {
      const std::size_t n = dim_in_.total() * dim_out_.total();
      cache_->choi = ComplexMatrix(n, n);
    } else {
      cache_->choi = kraus_to_choi(kraus_);
    }
  });
  return cache_->choi;
}

ComplexMatrix CPMap::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != dim_in_.total() || rho.cols() != dim_in_.total()) {
    throw DimensionError("apply: state dimension mismatch");
  }
  ComplexMatrix out(dim_out_.total(), dim_out_.total());
  for (const ComplexMatrix& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

CPMap CPMap::with_dims(SystemDims dim_in, SystemDims dim_out) const {
  if (dim_in.total() != dim_in_.total() || dim_out.total() != dim_out_.total()) {
    throw DimensionError("with_dims: totals must agree");
  }
  CPMap out(std::move(dim_in), std::move(dim_out), kraus_);
  out.cache_ = cache_;
  return out;
}

namespace {

CPMap maybe_compress(CPMap f) {
  if (f.kraus().size() > 1 && f.kraus().size() > f.dim_in().total() * f.dim_out().total()) {
    return compress(f);
  }
  return f;
}

}  // namespace

CPMap compose(const CPMap& f, const CPMap& g) {
  if (f.dim_in().total() != g.dim_out().total()) {
    throw DimensionError("compose: output dim " + std::to_string(g.dim_out().total()) +
                         " of the first map != input dim " + std::to_string(f.dim_in().total()));
  }
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(f.kraus().size() * g.kraus().size());
  for (const ComplexMatrix& kf : f.kraus())
    for (const ComplexMatrix& kg : g.kraus()) kraus.push_back(kf * kg);
  return maybe_compress(CPMap(g.dim_in(), f.dim_out(), std::move(kraus)));
}

CPMap tensor(const CPMap& f, const CPMap& g) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(f.kraus().size() * g.kraus().size());
  for (const ComplexMatrix& kf : f.kraus())
    for (const ComplexMatrix& kg : g.kraus()) kraus.push_back(kron(kf, kg));
  return maybe_compress(CPMap(f.dim_in() * g.dim_in(), f.dim_out() * g.dim_out(), std::move(kraus)));
}

CPMap sum(const CPMap& f, const CPMap& g) {
  if (f.dim_in().total() != g.dim_in().total() || f.dim_out().total() != g.dim_out().total()) {
    throw DimensionError("sum: dimension mismatch");
  }
  std::vector<ComplexMatrix> kraus = f.kraus();
  kraus.insert(kraus.end(), g.kraus().begin(), g.kraus().end());
  return maybe_compress(CPMap(f.dim_in(), f.dim_out(), std::move(kraus)));
}

CPMap scale(const CPMap& f, double weight) {
  if (weight < 0.0) throw PreconditionError("CP maps can only be scaled by nonnegative weights");
  if (weight == 0.0) return CPMap::zero(f.dim_in(), f.dim_out());
  std::vector<ComplexMatrix> kraus;
  const double s = std::sqrt(weight);
  for (const ComplexMatrix& k : f.kraus()) kraus.push_back(k * s);
  return {f.dim_in(), f.dim_out(), std::move(kraus)};
}

CPMap discard(const SystemDims& dims) {
  std::vector<ComplexMatrix> kraus;
  for (std::size_t b = 0; b < dims.total(); ++b) kraus.push_back(ComplexMatrix::basis_bra(dims.total(), b));
  return {dims, SystemDims{}, std::move(kraus)};
}

CPMap compress(const CPMap& f) {
  if (f.kraus().empty()) return f;
  return {f.dim_in(), f.dim_out(), choi_to_kraus(f.choi(), f.dim_in().total(), f.dim_out().total())};
}

CPMap permute_outputs(const CPMap& f, const Permutation& perm) {
  const auto id = identity_permutation(f.dim_in().size());
  std::vector<ComplexMatrix> kraus;
  for (const ComplexMatrix& k : f.kraus()) kraus.push_back(permute_factors(k, f.dim_in(), f.dim_out(), id, perm));
  return {f.dim_in(), permuted(f.dim_out(), perm), std::move(kraus)};
}

CPMap permute_inputs(const CPMap& f, const Permutation& perm) {
  const auto id = identity_permutation(f.dim_out().size());
  std::vector<ComplexMatrix> kraus;
  for (const ComplexMatrix& k : f.kraus()) kraus.push_back(permute_factors(k, f.dim_in(), f.dim_out(), perm, id));
  return {permuted(f.dim_in(), perm), f.dim_out(), std::move(kraus)};
}

CPMap trace_outputs(const CPMap& f, const std::vector<std::size_t>& factors) {
  const std::size_t n = f.dim_out().size();
  std::vector<bool> traced(n, false);
  for (std::size_t t : factors) {
    if (t >= n) throw DimensionError("trace_outputs: invalid factor index " + std::to_string(t));
    traced[t] = true;
  }
  Permutation perm;
  std::vector<std::size_t> kept_dims;
  std::size_t traced_total = 1;
  for (std::size_t k = 0; k < n; ++k)
    if (!traced[k]) {
      perm.push_back(k);
      kept_dims.push_back(f.dim_out()[k]);
    }
  for (std::size_t k = 0; k < n; ++k)
    if (traced[k]) {
      perm.push_back(k);
      traced_total *= f.dim_out()[k];
    }
  const CPMap moved = permute_outputs(f, perm);
  SystemDims kept(kept_dims);
  std::vector<ComplexMatrix> kraus;
  for (const ComplexMatrix& k : moved.kraus()) {
    for (std::size_t t = 0; t < traced_total; ++t) {
      ComplexMatrix part(kept.total(), k.cols());
      bool nonzero = false;
      for (std::size_t r = 0; r < kept.total(); ++r)
        for (std::size_t c = 0; c < k.cols(); ++c) {
          part(r, c) = k(r * traced_total + t, c);
          nonzero = nonzero || part(r, c) != Complex(0.0);
        }
      if (nonzero) kraus.push_back(std::move(part));
    }
  }
  return maybe_compress(CPMap(f.dim_in(), kept, std::move(kraus)));
}

double channel_distance(const CPMap& f, const CPMap& g) {
  if (f.dim_in().total() != g.dim_in().total() || f.dim_out().total() != g.dim_out().total()) {
    throw DimensionError("channel_distance: maps have different types");
  }
  return max_abs_diff(f.choi(), g.choi());
}

bool same_channel(const CPMap& f, const CPMap& g, double tol) { return channel_distance(f, g) <= tol; }

double trace_preservation_deviation(const CPMap& f) {
  ComplexMatrix s(f.dim_in().total(), f.dim_in().total());
  for (const ComplexMatrix& k : f.kraus()) s += k.adjoint() * k;
  return max_abs_diff(s, ComplexMatrix::identity(f.dim_in().total()));
}

bool is_normalised(const CPMap& f, double tol) { return trace_preservation_deviation(f) <= tol; }

bool is_pure(const CPMap& f, double tol) {
  if (f.kraus().empty()) return false;
  return numerical_rank(f.choi(), tol) == 1;
}

// ---------------------------------------------------------------------------
// Purification

CPMap Purification::pure_map() const {
  return CPMap::dbl(isometry, source.dim_in(), source.dim_out() * SystemDims({env_dim}));
}

CPMap Purification::traced() const { return trace_outputs(pure_map(), {source.dim_out().size()}); }

Purification purify_padded(const CPMap& f, std::size_t env_dim) {
  const std::size_t din = f.dim_in().total();
  const std::size_t dout = f.dim_out().total();
  std::vector<ComplexMatrix> kraus;
  if (!f.kraus().empty()) kraus = choi_to_kraus(f.choi(), din, dout);
  if (kraus.size() > env_dim) {
    throw DimensionError("purification needs environment dim " + std::to_string(kraus.size()) + " > " +
                         std::to_string(env_dim));
  }
  ComplexMatrix v(dout * env_dim, din);
  for (std::size_t j = 0; j < kraus.size(); ++j)
    for (std::size_t b = 0; b < dout; ++b)
      for (std::size_t a = 0; a < din; ++a) v(b * env_dim + j, a) = kraus[j](b, a);
  return {f, env_dim, std::move(v)};
}

Purification purify(const CPMap& f) {
  if (f.kraus().empty()) throw PreconditionError("purify: empty Kraus list");
  const std::size_t rank = numerical_rank(f.choi());
  return purify_padded(f, std::max<std::size_t>(rank, 1));
}

Purification rotate_environment(const Purification& p, const ComplexMatrix& env_unitary) {
  if (env_unitary.rows() != p.env_dim || env_unitary.cols() != p.env_dim) {
    throw DimensionError("environment unitary has the wrong size");
  }
  const ComplexMatrix lift = kron(ComplexMatrix::identity(p.source.dim_out().total()), env_unitary);
  return {p.source, p.env_dim, lift * p.isometry};
}

// ---------------------------------------------------------------------------
// SPO pairs and no-signalling

double SPOPair::deviation() const {
  double dev = 0.0;
  for (std::size_t x = 0; x < classical.size(); ++x)
    for (std::size_t y = 0; y < classical.size(); ++y) {
      const Complex v = (measure.at(x) * prepare.at(y))(0, 0);
      dev = std::max(dev, std::abs(v - Complex(x == y ? 1.0 : 0.0)));
    }
  return dev;
}

CPMap SPOPair::prepare_channel() const {
  std::vector<ComplexMatrix> kraus;
  for (std::size_t x = 0; x < classical.size(); ++x)
    kraus.push_back(prepare.at(x) * ComplexMatrix::basis_bra(classical.size(), x));
  return {SystemDims({classical.size()}), SystemDims({quantum_dim}), std::move(kraus)};
}

CPMap SPOPair::measure_channel() const {
  std::vector<ComplexMatrix> kraus;
  for (std::size_t x = 0; x < classical.size(); ++x)
    kraus.push_back(ComplexMatrix::basis_ket(classical.size(), x) * measure.at(x));
  return {SystemDims({quantum_dim}), SystemDims({classical.size()}), std::move(kraus)};
}

SPOPair canonical_spo(const ClassicalSet& x) {
  SPOPair spo;
  spo.classical = x;
  spo.quantum_dim = x.size();
  for (std::size_t k = 0; k < x.size(); ++k) {
    spo.prepare.push_back(ComplexMatrix::basis_ket(x.size(), k));
    spo.measure.push_back(ComplexMatrix::basis_bra(x.size(), k));
  }
  return spo;
}

CPMap classical_identity(std::size_t n) {
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < n; ++k) kraus.push_back(ComplexMatrix::basis_ket(n, k) * ComplexMatrix::basis_bra(n, k));
  return {SystemDims({n}), SystemDims({n}), std::move(kraus)};
}

double no_signalling_deviation(const CPMap& f, std::size_t classical_dim) {
  if (classical_dim == 0 || f.dim_in().total() % classical_dim != 0 || f.dim_out().total() % classical_dim != 0) {
    throw DimensionError("no-signalling: classical block does not divide the system dims");
  }
  const std::size_t a = f.dim_in().total() / classical_dim;
  const std::size_t b = f.dim_out().total() / classical_dim;
  const CPMap shaped = f.with_dims(SystemDims({classical_dim, a}), SystemDims({classical_dim, b}));
  const CPMap dephase = classical_identity(classical_dim);
  const CPMap lhs = compose(tensor(dephase, discard(SystemDims({b}))),
                            compose(shaped, tensor(dephase, CPMap::identity(SystemDims({a})))));
  const CPMap rhs = tensor(dephase, discard(SystemDims({a})));
  return channel_distance(lhs, rhs);
}

bool check_no_signalling(const CPMap& f, std::size_t classical_dim, double tol) {
  if (!is_normalised(f, tol)) throw PreconditionError("no-signalling check requires a normalised map");
  return no_signalling_deviation(f, classical_dim) <= tol;
}

// ---------------------------------------------------------------------------
// QuantumInstrument

QuantumInstrument::QuantumInstrument(ClassicalSet inputs, ClassicalSet outputs, SystemDims dim_in,
                                     SystemDims dim_out, std::vector<CPMap> branches)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      dim_in_(std::move(dim_in)),
      dim_out_(std::move(dim_out)) {
  if (branches.size() != inputs_.size() * outputs_.size()) {
    throw DimensionError("instrument needs " + std::to_string(inputs_.size() * outputs_.size()) +
                         " branches, got " + std::to_string(branches.size()));
  }
  branches_.reserve(branches.size());
  for (const CPMap& b : branches) branches_.push_back(b.with_dims(dim_in_, dim_out_));
}

QuantumInstrument::QuantumInstrument(ClassicalSet inputs, ClassicalSet outputs, SystemDims dim_in,
                                     SystemDims dim_out,
                                     const std::map<std::pair<std::size_t, std::size_t>, CPMap>& sparse)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      dim_in_(std::move(dim_in)),
      dim_out_(std::move(dim_out)) {
  branches_.assign(inputs_.size() * outputs_.size(), CPMap::zero(dim_in_, dim_out_));
  for (const auto& [key, map] : sparse) {
    if (key.first >= inputs_.size() || key.second >= outputs_.size()) {
      throw DimensionError("instrument branch index out of range");
    }
    branches_[key.first * outputs_.size() + key.second] = map.with_dims(dim_in_, dim_out_);
  }
}

QuantumInstrument QuantumInstrument::from_map(const CPMap& f) {
  return {ClassicalSet::singleton(), ClassicalSet::singleton(), f.dim_in(), f.dim_out(), std::vector<CPMap>{f}};
}

CPMap QuantumInstrument::marginal(std::size_t i) const {
  CPMap total = CPMap::zero(dim_in_, dim_out_);
  for (std::size_t o = 0; o < outputs_.size(); ++o) total = sum(total, branch(i, o));
  return total;
}

double QuantumInstrument::normalisation_deviation() const {
  double dev = 0.0;
  for (std::size_t i = 0; i < inputs_.size(); ++i) dev = std::max(dev, trace_preservation_deviation(marginal(i)));
  return dev;
}

}  // namespace icsem
