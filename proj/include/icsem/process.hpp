#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icsem/kernels.hpp"
#include "icsem/linalg.hpp"
#include "icsem/matrix.hpp"

namespace icsem {

inline constexpr double kChannelTol = 1e-9;

/// Finite set of classical values with a fixed label order.
class ClassicalSet {
 public:
  ClassicalSet() : labels_{"0"} {}
  explicit ClassicalSet(std::vector<std::string> labels);

  static ClassicalSet singleton() { return ClassicalSet(); }
  static ClassicalSet range(std::size_t n);  // labels "0".."n-1"
  // Cartesian product, first set most significant; tuple labels joined by ','.
  static ClassicalSet product(std::span<const ClassicalSet> sets);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& operator[](std::size_t i) const { return labels_.at(i); }
  std::size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const;

  bool operator==(const ClassicalSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Completely positive map in Kraus form. The Choi matrix is computed on
/// first use and shared between copies.
class CPMap {
 public:
  CPMap(SystemDims dim_in, SystemDims dim_out, std::vector<ComplexMatrix> kraus);

  static CPMap zero(SystemDims dim_in, SystemDims dim_out) { return {std::move(dim_in), std::move(dim_out), {}}; }
  static CPMap identity(SystemDims dims);
  static CPMap dbl(ComplexMatrix op);  // single-factor systems
  static CPMap dbl(ComplexMatrix op, SystemDims dim_in, SystemDims dim_out);

  const SystemDims& dim_in() const noexcept { return dim_in_; }
  const SystemDims& dim_out() const noexcept { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

  const ComplexMatrix& choi() const;
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  // Same map with relabelled factor structure (totals must agree).
  CPMap with_dims(SystemDims dim_in, SystemDims dim_out) const;

 private:
  struct ChoiCache;
  SystemDims dim_in_;
  SystemDims dim_out_;
  std::vector<ComplexMatrix> kraus_;
  std::shared_ptr<ChoiCache> cache_;
};

// f after g.
CPMap compose(const CPMap& f, const CPMap& g);
CPMap tensor(const CPMap& f, const CPMap& g);
CPMap sum(const CPMap& f, const CPMap& g);
CPMap scale(const CPMap& f, double weight);
CPMap discard(const SystemDims& dims);
// Kraus set replaced by the canonical one from choi_to_kraus.
CPMap compress(const CPMap& f);
CPMap permute_outputs(const CPMap& f, const Permutation& perm);
CPMap permute_inputs(const CPMap& f, const Permutation& perm);
// Partial trace over the listed output factors.
CPMap trace_outputs(const CPMap& f, const std::vector<std::size_t>& factors);

// Max-abs entry of the Choi difference.
double channel_distance(const CPMap& f, const CPMap& g);
bool same_channel(const CPMap& f, const CPMap& g, double tol = kChannelTol);

bool is_normalised(const CPMap& f, double tol = kChannelTol);
bool is_pure(const CPMap& f, double tol = kRankTol);

/// Purification: a single operator V from A to B (x) E whose environment
/// trace reproduces the source channel. The environment is the last output
/// factor.
struct Purification {
  CPMap source;
  std::size_t env_dim;
  ComplexMatrix isometry;

  CPMap pure_map() const;
  CPMap traced() const;
};

// Canonical purification, env_dim = Choi rank (at least 1).
Purification purify(const CPMap& f);
// Canonical purification padded with zero Kraus components to env_dim.
Purification purify_padded(const CPMap& f, std::size_t env_dim);
// The purification obtained by applying `env_unitary` on the environment.
Purification rotate_environment(const Purification& p, const ComplexMatrix& env_unitary);

/// Sharp preparation-observation pair between a classical set and C^d.
struct SPOPair {
  ClassicalSet classical;
  std::size_t quantum_dim = 1;
  std::vector<ComplexMatrix> prepare;  // kets, indexed like classical
  std::vector<ComplexMatrix> measure;  // bras

  // max |m(x) p(x') - delta_xx'|
  double deviation() const;
  // Classical systems are embedded as diagonal quantum systems of dim |X|.
  CPMap prepare_channel() const;
  CPMap measure_channel() const;
};

SPOPair canonical_spo(const ClassicalSet& x);

// Completely dephasing channel on C^n, i.e. the identity on a classical system.
CPMap classical_identity(std::size_t n);

/// Checks that discarding the quantum output of f: X (x) A -> X (x) B leaves
/// the classical identity on X tensored with discarding A. X is the first
/// `classical_dim` block; with classical_dim = 1 this is trace preservation.
/// Throws PreconditionError when f is not normalised.
bool check_no_signalling(const CPMap& f, std::size_t classical_dim = 1, double tol = kChannelTol);
double no_signalling_deviation(const CPMap& f, std::size_t classical_dim = 1);

/// Indexed family F(o|i) of CP maps sharing quantum input/output systems.
/// Branches are dense over I x O (index i * |O| + o); absent ones are zero.
class QuantumInstrument {
 public:
  QuantumInstrument(ClassicalSet inputs, ClassicalSet outputs, SystemDims dim_in, SystemDims dim_out,
                    std::vector<CPMap> branches);
  QuantumInstrument(ClassicalSet inputs, ClassicalSet outputs, SystemDims dim_in, SystemDims dim_out,
                    const std::map<std::pair<std::size_t, std::size_t>, CPMap>& sparse);
  // A single CP map with trivial classical interface.
  static QuantumInstrument from_map(const CPMap& f);

  const ClassicalSet& inputs() const noexcept { return inputs_; }
  const ClassicalSet& outputs() const noexcept { return outputs_; }
  const SystemDims& dim_in() const noexcept { return dim_in_; }
  const SystemDims& dim_out() const noexcept { return dim_out_; }
  const std::vector<CPMap>& branches() const noexcept { return branches_; }
  const CPMap& branch(std::size_t i, std::size_t o) const { return branches_.at(i * outputs_.size() + o); }

  // Sum over outcomes for input i.
  CPMap marginal(std::size_t i) const;
  // Largest deviation of any marginal from trace preservation.
  double normalisation_deviation() const;
  bool is_normalised(double tol = kChannelTol) const { return normalisation_deviation() <= tol; }

 private:
  ClassicalSet inputs_;
  ClassicalSet outputs_;
  SystemDims dim_in_;
  SystemDims dim_out_;
  std::vector<CPMap> branches_;
};

// Largest |sum_k K^dagger K - I| entry.
double trace_preservation_deviation(const CPMap& f);

}  // namespace icsem
