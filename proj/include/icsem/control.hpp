#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "icsem/causal.hpp"
#include "icsem/diagram.hpp"
#include "icsem/process.hpp"

namespace icsem {

/// Family F_x : A -> B of CP maps indexed by a classical set.
struct ProcessFamily {
  ClassicalSet index;
  std::vector<CPMap> members;  // aligned with index

  ProcessFamily(ClassicalSet index, std::vector<CPMap> members);
  explicit ProcessFamily(std::vector<CPMap> members);  // index 0..n-1

  std::size_t size() const noexcept { return members.size(); }
  const SystemDims& dim_in() const { return members.front().dim_in(); }
  const SystemDims& dim_out() const { return members.front().dim_out(); }
};

/// Relative phases per branch, each in [0, 2 pi).
struct PhaseVector {
  std::vector<double> phases;

  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> values);
  static PhaseVector zeros(std::size_t n) { return PhaseVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return phases.size(); }
  double operator[](std::size_t i) const { return phases.at(i); }
};

// Wrap into [0, 2 pi).
double wrap_phase(double radians);

/// (G, p, m) with G : H (x) A -> H (x) B, the control factor first.
struct ControlledProcess {
  std::size_t control_dim;
  ProcessFamily family;
  CPMap g;
  SPOPair spo;
};

ControlledProcess classical_control(const ProcessFamily& family);
// Every member must be pure; L_x is its canonical Kraus operator.
ControlledProcess coherent_control_pure(const ProcessFamily& family, const PhaseVector& phase);
// sum_x e^{i a_x} |x><x| (x) ops[x], as a map H (x) A -> H (x) B (no canonicalisation).
ComplexMatrix assemble_coherent(const std::vector<ComplexMatrix>& ops, const PhaseVector& phase);

// Padded canonical purifications sharing one environment.
std::vector<Purification> shared_purifications(const ProcessFamily& family);
ControlledProcess coherent_control_cp(const ProcessFamily& family, const PhaseVector& phase);
ControlledProcess coherent_control_cp(const ProcessFamily& family, const PhaseVector& phase,
                                      const std::vector<Purification>& purifications);

/// Largest Choi deviation over both sides of the controlled-process equations:
/// G . (p_x (x) id) = p_x (x) F_x and (m_x (x) id) . G = F_x . (m_x (x) id).
double eq1_deviation(const ControlledProcess& cp);
bool verify_eq1(const ControlledProcess& cp, double tol = 1e-8);

// (m (x) id) . G . (p (x) id) on the embedded classical system, checked for
// no-signalling. Requires a normalised family.
double eq2_deviation(const ControlledProcess& cp);

/// Relative phases a_x - a_0 of a pure controlled process for a pure family.
PhaseVector extract_phase(const CPMap& g, const ProcessFamily& family, double tol = 1e-8);

struct NogoWitness {
  ProcessFamily family;
  std::vector<Purification> canonical;
  std::vector<Purification> alternative;  // X on the environment of F_1 only
  std::vector<Purification> equal_u;      // X on both environments
  double distance;          // canonical vs alternative
  double equal_u_distance;  // canonical vs equal_u
};

NogoWitness nogo_witness();

/// The n-partite switch: events A1..An each acting once on a single wire label.
struct SwitchDiagram {
  IndefiniteCausalScenario scenario;
  DiagramAssignment diagram;
};

SwitchDiagram build_switch(std::size_t n, std::size_t system_dim, const std::vector<QuantumInstrument>& instruments);

struct ControlOptions {
  double cap = 1e6;
  // Purified diagram to use instead of the canonical one.
  std::optional<PurifiedDiagram> purified;
};

/// Coherent control of a diagram over its compatible scenarios, one
/// controlled process per global classical branch (i, o), dense i * |O| + o.
/// The control basis follows canonical_key order.
struct DiagramControl {
  std::vector<CompatibleScenario> orders;
  ClassicalSet control;
  PhaseVector phase;
  ClassicalSet inputs;
  ClassicalSet outputs;
  SystemDims dim_in;
  SystemDims dim_out;
  std::vector<ControlledProcess> branches;

  const ControlledProcess& branch(std::size_t i, std::size_t o) const { return branches.at(i * outputs.size() + o); }
  // The G maps as one instrument on H (x) in -> H (x) out.
  QuantumInstrument instrument() const;
};

DiagramControl coherent_control_of_diagram(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                                           const PhaseVector& phase, const ControlOptions& options = {});

/// Columns are the measurement vectors; must be unitary and unbiased with
/// respect to the computational basis.
struct MeasurementBasis {
  ComplexMatrix vectors;
  ClassicalSet outcomes;
};

MeasurementBasis fourier_basis(std::size_t n);  // outcomes "+","-" for n = 2, else f0..f{n-1}
MeasurementBasis custom_basis(const ComplexMatrix& vectors, double tol = 1e-9);  // outcomes m0..

struct SuperpositionInstrument {
  DiagramControl control;
  MeasurementBasis measurement;
  // Outputs are (o, outcome) pairs, index o * |outcomes| + k.
  QuantumInstrument instrument;

  const CPMap& branch(std::size_t i, std::size_t o, std::size_t k) const {
    return instrument.branch(i, o * measurement.outcomes.size() + k);
  }
};

SuperpositionInstrument superpose(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                                  const PhaseVector& phase, const std::optional<MeasurementBasis>& measurement = {},
                                  const ControlOptions& options = {});

// sum_x w_x F_x. Weights must be a probability vector within 1e-12.
CPMap discard_control_mixture(const ControlledProcess& cp, const std::vector<double>& weights);
// (Tr_H (x) id) . G . (rho (x) id) for a control state rho.
CPMap with_control_state(const ControlledProcess& cp, const ComplexMatrix& rho);

}  // namespace icsem
