#include "icsem/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <stdexcept>

#include "icsem/errors.hpp"
#include "icsem/linalg.hpp"

namespace icsem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// |p> (x) id_A as a map A -> H (x) A.
CPMap lift_ket(const ComplexMatrix& ket, const SystemDims& dims) {
  return CPMap::dbl(kron(ket, ComplexMatrix::identity(dims.total())), dims, SystemDims({ket.rows()}) * dims);
}

// <m| (x) id_B as a map H (x) B -> B.
CPMap lift_bra(const ComplexMatrix& bra, const SystemDims& dims) {
  return CPMap::dbl(kron(bra, ComplexMatrix::identity(dims.total())), SystemDims({bra.cols()}) * dims, dims);
}

Complex inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) s += std::conj(a(r, c)) * b(r, c);
  return s;
}

void check_phase(const PhaseVector& phase, std::size_t n) {
  if (phase.size() != n) {
    throw PreconditionError("phase vector has " + std::to_string(phase.size()) + " entries, expected " +
                            std::to_string(n));
  }
}

CPMap compress_if_large(CPMap f) {
  if (f.kraus().size() > f.dim_in().total() * f.dim_out().total()) return compress(f);
  return f;
}

}  // namespace

ProcessFamily::ProcessFamily(ClassicalSet idx, std::vector<CPMap> ms) : index(std::move(idx)), members(std::move(ms)) {
  if (members.empty()) throw PreconditionError("process family must be non-empty");
  if (members.size() != index.size()) throw PreconditionError("process family size differs from its index set");
  for (const CPMap& m : members) {
    if (m.dim_in().total() != dim_in().total() || m.dim_out().total() != dim_out().total()) {
      throw DimensionError("process family members must share input and output systems");
    }
  }
}

// Copies rather than moves `ms`: argument evaluation order is unspecified.
ProcessFamily::ProcessFamily(std::vector<CPMap> ms)
    : ProcessFamily(ClassicalSet::range(std::max<std::size_t>(ms.size(), 1)), ms) {}

PhaseVector::PhaseVector(std::vector<double> values) : phases(std::move(values)) {
  for (double& p : phases) {
    if (!std::isfinite(p)) throw PreconditionError("phases must be finite");
    p = wrap_phase(p);
  }
}

double wrap_phase(double radians) {
  double w = std::fmod(radians, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// ---------------------------------------------------------------------------
// Controlled processes

ControlledProcess classical_control(const ProcessFamily& family) {
  const std::size_t h = family.size();
  std::vector<ComplexMatrix> kraus;
  for (std::size_t x = 0; x < h; ++x) {
    const ComplexMatrix proj = ComplexMatrix::basis_ket(h, x) * ComplexMatrix::basis_bra(h, x);
    for (const ComplexMatrix& k : family.members[x].kraus()) kraus.push_back(kron(proj, k));
  }
  const SystemDims hd({h});
  CPMap g(hd * family.dim_in(), hd * family.dim_out(), std::move(kraus));
  return {h, family, compress_if_large(std::move(g)), canonical_spo(family.index)};
}

ComplexMatrix assemble_coherent(const std::vector<ComplexMatrix>& ops, const PhaseVector& phase) {
  check_phase(phase, ops.size());
  const std::size_t h = ops.size();
  ComplexMatrix out(h * ops.front().rows(), h * ops.front().cols());
  for (std::size_t x = 0; x < h; ++x) {
    if (ops[x].rows() != ops.front().rows() || ops[x].cols() != ops.front().cols()) {
      throw DimensionError("coherent control needs operators of one shape");
    }
    const ComplexMatrix proj = ComplexMatrix::basis_ket(h, x) * ComplexMatrix::basis_bra(h, x);
    out += kron(proj, ops[x]) * std::polar(1.0, phase[x]);
  }
  return out;
}

ControlledProcess coherent_control_pure(const ProcessFamily& family, const PhaseVector& phase) {
  check_phase(phase, family.size());
  std::vector<ComplexMatrix> ops;
  for (std::size_t x = 0; x < family.size(); ++x) {
    const CPMap& m = family.members[x];
    if (!is_pure(m)) throw PreconditionError("family member '" + family.index[x] + "' is not pure");
    ops.push_back(choi_to_kraus(m.choi(), m.dim_in().total(), m.dim_out().total()).front());
  }
  const SystemDims hd({family.size()});
  CPMap g = CPMap::dbl(assemble_coherent(ops, phase), hd * family.dim_in(), hd * family.dim_out());
  return {family.size(), family, std::move(g), canonical_spo(family.index)};
}

std::vector<Purification> shared_purifications(const ProcessFamily& family) {
  std::size_t env = 1;
  for (const CPMap& m : family.members)
    if (!m.kraus().empty()) env = std::max(env, numerical_rank(m.choi()));
  std::vector<Purification> out;
  for (const CPMap& m : family.members) out.push_back(purify_padded(m, env));
  return out;
}

ControlledProcess coherent_control_cp(const ProcessFamily& family, const PhaseVector& phase) {
  return coherent_control_cp(family, phase, shared_purifications(family));
}

ControlledProcess coherent_control_cp(const ProcessFamily& family, const PhaseVector& phase,
                                      const std::vector<Purification>& purifications) {
  check_phase(phase, family.size());
  if (purifications.size() != family.size()) throw PreconditionError("one purification per family member required");
  const std::size_t env = purifications.front().env_dim;
  std::vector<ComplexMatrix> ops;
  for (std::size_t x = 0; x < family.size(); ++x) {
    const Purification& p = purifications[x];
    if (p.env_dim != env) throw DimensionError("purifications must share one environment");
    if (channel_distance(p.traced(), family.members[x]) > kChannelTol) {
      throw PreconditionError("purification " + std::to_string(x) + " does not trace back to its family member");
    }
    ops.push_back(p.isometry);
  }
  const SystemDims hd({family.size()});
  const CPMap pure = CPMap::dbl(assemble_coherent(ops, phase), hd * family.dim_in(),
                                hd * family.dim_out() * SystemDims({env}));
  CPMap g = trace_outputs(pure, {pure.dim_out().size() - 1});
  return {family.size(), family, std::move(g), canonical_spo(family.index)};
}

double eq1_deviation(const ControlledProcess& cp) {
  const SystemDims& a = cp.family.dim_in();
  const SystemDims& b = cp.family.dim_out();
  if (cp.g.dim_in().total() != cp.control_dim * a.total() || cp.g.dim_out().total() != cp.control_dim * b.total()) {
    throw DimensionError("G does not act on the control system tensored with the family systems");
  }
  const CPMap g = cp.g.with_dims(SystemDims({cp.control_dim}) * a, SystemDims({cp.control_dim}) * b);
  double dev = 0.0;
  for (std::size_t x = 0; x < cp.family.size(); ++x) {
    const CPMap& fx = cp.family.members[x];
    const ComplexMatrix& p = cp.spo.prepare.at(x);
    const ComplexMatrix& m = cp.spo.measure.at(x);
    const CPMap prepared = compose(g, lift_ket(p, a));
    const CPMap expected_prepared = tensor(CPMap::dbl(p, SystemDims{}, SystemDims({cp.control_dim})), fx);
    dev = std::max(dev, channel_distance(prepared, expected_prepared));
    const CPMap measured = compose(lift_bra(m, b), g);
    const CPMap expected_measured = compose(fx, lift_bra(m, a));
    dev = std::max(dev, channel_distance(measured, expected_measured));
  }
  return dev;
}

bool verify_eq1(const ControlledProcess& cp, double tol) { return eq1_deviation(cp) <= tol; }

double eq2_deviation(const ControlledProcess& cp) {
  const SystemDims& a = cp.family.dim_in();
  const SystemDims& b = cp.family.dim_out();
  const std::size_t n = cp.spo.classical.size();
  const CPMap g = cp.g.with_dims(SystemDims({cp.control_dim}) * a, SystemDims({cp.control_dim}) * b);
  const CPMap f = compose(tensor(cp.spo.measure_channel(), CPMap::identity(b)),
                          compose(g, tensor(cp.spo.prepare_channel(), CPMap::identity(a))));
  if (!is_normalised(f)) throw PreconditionError("no-signalling needs a normalised controlled process");
  return no_signalling_deviation(f, n);
}

PhaseVector extract_phase(const CPMap& g, const ProcessFamily& family, double tol) {
  if (!is_pure(g)) throw PreconditionError("extract_phase needs a pure controlled process");
  const std::size_t h = family.size();
  const ControlledProcess cp{h, family, g, canonical_spo(family.index)};
  const double dev = eq1_deviation(cp);
  if (dev > tol) throw PreconditionError("G is not a controlled process for the family (deviation " + std::to_string(dev) + ")");

  const ComplexMatrix k = g.kraus().size() == 1 ? g.kraus().front() : compress(g).kraus().front();
  const std::size_t da = family.dim_in().total(), db = family.dim_out().total();
  std::vector<double> phases;
  double reference = 0.0;
  for (std::size_t x = 0; x < h; ++x) {
    const CPMap& m = family.members[x];
    if (!is_pure(m)) throw PreconditionError("family member '" + family.index[x] + "' is not pure");
    const ComplexMatrix l = choi_to_kraus(m.choi(), da, db).front();
    ComplexMatrix block(db, da);
    for (std::size_t r = 0; r < db; ++r)
      for (std::size_t c = 0; c < da; ++c) block(r, c) = k(x * db + r, x * da + c);
    const Complex coeff = inner(l, block) / inner(l, l);
    const double residual = max_abs_diff(block, l * coeff);
    if (residual > tol * std::max(1.0, std::sqrt(block.frobenius_norm_squared()))) {
      throw PreconditionError("block " + std::to_string(x) + " is not proportional to the family operator");
    }
    const double arg = std::arg(coeff);
    if (x == 0) reference = arg;
    phases.push_back(arg - reference);
  }
  return PhaseVector(std::move(phases));
}

NogoWitness nogo_witness() {
  const CPMap identity = CPMap::identity(SystemDims({2}));
  const CPMap dephase(SystemDims({2}), SystemDims({2}),
                      {ComplexMatrix{{1, 0}, {0, 0}}, ComplexMatrix{{0, 0}, {0, 1}}});
  ProcessFamily family(std::vector<CPMap>{identity, dephase});
  const auto canonical = shared_purifications(family);
  const ComplexMatrix x{{0, 1}, {1, 0}};
  const std::vector<Purification> alternative{canonical[0], rotate_environment(canonical[1], x)};
  const std::vector<Purification> equal_u{rotate_environment(canonical[0], x), rotate_environment(canonical[1], x)};
  const PhaseVector zero = PhaseVector::zeros(2);
  const CPMap g = coherent_control_cp(family, zero, canonical).g;
  const double distance = channel_distance(g, coherent_control_cp(family, zero, alternative).g);
  const double equal = channel_distance(g, coherent_control_cp(family, zero, equal_u).g);
  return {family, canonical, alternative, equal_u, distance, equal};
}

// ---------------------------------------------------------------------------
// Switch and diagrams

SwitchDiagram build_switch(std::size_t n, std::size_t system_dim, const std::vector<QuantumInstrument>& instruments) {
  if (n == 0) throw PreconditionError("the switch needs at least one party");
  if (instruments.size() != n) throw PreconditionError("the switch needs one instrument per party");
  const std::string label = "t";
  SwitchDiagram s;
  s.scenario.labels = {label};
  s.scenario.boundary_in = {label};
  s.scenario.boundary_out = {label};
  s.diagram.sys[label] = system_dim;
  for (std::size_t k = 0; k < n; ++k) {
    const QuantumInstrument& inst = instruments[k];
    const std::string ev = "A" + std::to_string(k + 1);
    if (inst.dim_in().total() != system_dim || inst.dim_out().total() != system_dim) {
      throw DimensionError("instrument of party " + ev + " does not act on dimension " + std::to_string(system_dim));
    }
    s.scenario.events.push_back(ev);
    s.scenario.in_labels[ev] = {label};
    s.scenario.out_labels[ev] = {label};
    s.scenario.classical_inputs.emplace(ev, inst.inputs());
    s.scenario.classical_outputs.emplace(ev, inst.outputs());
    s.diagram.proc.emplace(ev, inst);
  }
  return s;
}

QuantumInstrument DiagramControl::instrument() const {
  std::vector<CPMap> gs;
  for (const ControlledProcess& cp : branches) gs.push_back(cp.g);
  const SystemDims hd({control.size()});
  return {inputs, outputs, hd * dim_in, hd * dim_out, std::move(gs)};
}

DiagramControl coherent_control_of_diagram(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                                           const PhaseVector& phase, const ControlOptions& options) {
  check_typing(phi, delta);
  DiagramControl out;
  out.orders = enumerate_compatible(phi, {.cap = options.cap, .parallel = true});
  const std::size_t n = out.orders.size();
  if (n == 0) throw PreconditionError("the scenario has no compatible definite scenarios");
  out.phase = phase.size() == 0 ? PhaseVector::zeros(n) : phase;
  check_phase(out.phase, n);
  std::vector<std::string> keys;
  for (const auto& c : out.orders) keys.push_back(c.canonical_key);
  out.control = ClassicalSet(keys);

  const PurifiedDiagram pd = options.purified ? *options.purified : purify_diagram(phi, delta);
  if (pd.base_scenario.events != phi.events) throw PreconditionError("purified diagram belongs to another scenario");

  std::vector<CompiledProcess> open, plain;
  for (const auto& c : out.orders) {
    open.push_back(contract_purified(c, pd));
    plain.push_back(compile(phi, delta, c));
  }
  const QuantumInstrument& first = plain.front().instrument;
  out.inputs = first.inputs();
  out.outputs = first.outputs();
  out.dim_in = first.dim_in();
  out.dim_out = first.dim_out();

  const SystemDims open_out = open.front().instrument.dim_out();
  std::vector<std::size_t> env_factors;
  for (std::size_t k = out.dim_out.size(); k < open_out.size(); ++k) env_factors.push_back(1 + k);
  const SystemDims hd({n});

  const std::size_t n_branches = out.inputs.size() * out.outputs.size();
  std::vector<std::optional<ControlledProcess>> results(n_branches);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(n_branches); ++flat) {
    try {
      const auto b = static_cast<std::size_t>(flat);
      std::vector<ComplexMatrix> ops;
      std::vector<CPMap> members;
      for (std::size_t t = 0; t < n; ++t) {
        const CPMap& pure = open[t].instrument.branches()[b];
        if (pure.kraus().size() > 1) throw std::logic_error("purified branch is not a single operator");
        ops.push_back(pure.kraus().empty() ? ComplexMatrix(open_out.total(), out.dim_in.total()) : pure.kraus().front());
        members.push_back(plain[t].instrument.branches()[b]);
      }
      const CPMap g_pure = CPMap::dbl(assemble_coherent(ops, out.phase), hd * out.dim_in, hd * open_out);
      CPMap g = trace_outputs(g_pure, env_factors).with_dims(hd * out.dim_in, hd * out.dim_out);
      results[b] = ControlledProcess{n, ProcessFamily(out.control, std::move(members)), std::move(g), canonical_spo(out.control)};
    } catch (...) {
#pragma omp critical(icsem_control_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (auto& r : results) out.branches.push_back(std::move(*r));
  return out;
}

// ---------------------------------------------------------------------------
// Superposition of causal orders

MeasurementBasis fourier_basis(std::size_t n) {
  if (n == 0) throw PreconditionError("Fourier basis needs n >= 1");
  ComplexMatrix v(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      v(j, k) = std::polar(norm, kTwoPi * static_cast<double>((j * k) % n) / static_cast<double>(n));
  std::vector<std::string> labels;
  if (n == 2) {
    labels = {"+", "-"};
  } else {
    for (std::size_t k = 0; k < n; ++k) labels.push_back("f" + std::to_string(k));
  }
  return {std::move(v), ClassicalSet(std::move(labels))};
}

MeasurementBasis custom_basis(const ComplexMatrix& vectors, double tol) {
  const std::size_t n = vectors.rows();
  if (!vectors.is_square() || n == 0) throw PreconditionError("measurement basis must be a square matrix");
  if (max_abs_diff(vectors.adjoint() * vectors, ComplexMatrix::identity(n)) > tol) {
    throw PreconditionError("measurement basis is not orthonormal");
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (std::abs(std::norm(vectors(j, k)) - 1.0 / static_cast<double>(n)) > tol) {
        throw PreconditionError("measurement basis is not unbiased with respect to the computational basis");
      }
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n; ++k) labels.push_back("m" + std::to_string(k));
  return {vectors, ClassicalSet(std::move(labels))};
}

SuperpositionInstrument superpose(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                                  const PhaseVector& phase, const std::optional<MeasurementBasis>& measurement,
                                  const ControlOptions& options) {
  DiagramControl dc = coherent_control_of_diagram(phi, delta, phase, options);
  const std::size_t n = dc.control.size();
  MeasurementBasis basis = measurement ? *measurement : fourier_basis(n);
  if (basis.vectors.rows() != n) {
    throw PreconditionError("measurement basis has dimension " + std::to_string(basis.vectors.rows()) + ", control has " +
                            std::to_string(n));
  }
  const std::size_t outcomes = basis.outcomes.size();
  ComplexMatrix plus(n, 1);
  for (std::size_t j = 0; j < n; ++j) plus(j, 0) = 1.0 / std::sqrt(static_cast<double>(n));
  const ComplexMatrix prep = kron(plus, ComplexMatrix::identity(dc.dim_in.total()));

  std::vector<CPMap> branches;
  for (std::size_t i = 0; i < dc.inputs.size(); ++i)
    for (std::size_t o = 0; o < dc.outputs.size(); ++o) {
      const CPMap& g = dc.branch(i, o).g;
      for (std::size_t k = 0; k < outcomes; ++k) {
        ComplexMatrix bra(1, n);
        for (std::size_t j = 0; j < n; ++j) bra(0, j) = std::conj(basis.vectors(j, k));
        const ComplexMatrix meas = kron(bra, ComplexMatrix::identity(dc.dim_out.total()));
        std::vector<ComplexMatrix> kraus;
        for (const ComplexMatrix& op : g.kraus()) kraus.push_back(meas * op * prep);
        branches.push_back(compress_if_large(CPMap(dc.dim_in, dc.dim_out, std::move(kraus))));
      }
    }
  const std::vector<ClassicalSet> parts{dc.outputs, basis.outcomes};
  QuantumInstrument inst(dc.inputs, ClassicalSet::product(parts), dc.dim_in, dc.dim_out, std::move(branches));
  return {std::move(dc), std::move(basis), std::move(inst)};
}

CPMap discard_control_mixture(const ControlledProcess& cp, const std::vector<double>& weights) {
  if (weights.size() != cp.family.size()) throw PreconditionError("one weight per branch required");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw PreconditionError("weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw PreconditionError("weights must sum to 1");
  CPMap out = CPMap::zero(cp.family.dim_in(), cp.family.dim_out());
  for (std::size_t x = 0; x < weights.size(); ++x) out = sum(out, scale(cp.family.members[x], weights[x]));
  return out;
}

CPMap with_control_state(const ControlledProcess& cp, const ComplexMatrix& rho) {
  if (rho.rows() != cp.control_dim || !rho.is_square()) throw DimensionError("control state has the wrong size");
  const auto spec = hermitian_spectrum(rho);
  const SystemDims& a = cp.family.dim_in();
  const SystemDims& b = cp.family.dim_out();
  const SystemDims hd({cp.control_dim});
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    if (spec.eigenvalues[k] < -kPsdTol) throw PreconditionError("control state is not positive semidefinite");
    if (spec.eigenvalues[k] <= kRankTol) continue;
    ComplexMatrix v(cp.control_dim, 1);
    for (std::size_t r = 0; r < cp.control_dim; ++r) v(r, 0) = spec.eigenvectors(r, k) * std::sqrt(spec.eigenvalues[k]);
    kraus.push_back(kron(v, ComplexMatrix::identity(a.total())));
  }
  if (kraus.empty()) return CPMap::zero(a, b);
  const CPMap prepare(a, hd * a, std::move(kraus));
  const CPMap g = cp.g.with_dims(hd * a, hd * b);
  return trace_outputs(compose(g, prepare), {0}).with_dims(a, b);
}

}  // namespace icsem
