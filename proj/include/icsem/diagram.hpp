#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "icsem/causal.hpp"
#include "icsem/process.hpp"

namespace icsem {

/// sys: wire label (or edge id, over a definite scenario) -> dimension.
/// proc: event -> instrument.
struct DiagramAssignment {
  std::map<std::string, std::size_t> sys;
  std::map<std::string, QuantumInstrument> proc;

  const QuantumInstrument& instrument(const std::string& event) const;
  std::size_t dim(const std::string& wire) const;
};

// Throw TypingError naming the event and wire on the first mismatch.
void check_typing(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta);
void check_typing(const DefiniteCausalScenario& theta, const DiagramAssignment& delta);

/// The process associated to a diagram. Classical inputs/outputs are the
/// products of the event sets in event order; quantum systems follow the
/// boundary node order.
struct CompiledProcess {
  std::vector<std::string> events;
  QuantumInstrument instrument;
};

CompiledProcess contract(const DefiniteCausalScenario& theta, const DiagramAssignment& delta);
// Same, with an explicit event schedule (must be a topological order).
CompiledProcess contract(const DefiniteCausalScenario& theta, const DiagramAssignment& delta,
                         const std::vector<std::string>& order);

// Contract a single global branch given one CP map per event.
CPMap contract_branch(const DefiniteCausalScenario& theta, const DiagramAssignment& delta,
                      const std::map<std::string, CPMap>& branch_maps, const std::vector<std::string>& order);

/// Induced diagram over a compatible scenario: edge dims read through the labelling.
DiagramAssignment induce(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                         const CompatibleScenario& theta);

// contract(theta.scenario, induce(phi, delta, theta)).
CompiledProcess compile(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                        const CompatibleScenario& theta);

// Wire label carrying the environment of an event in a purified diagram.
std::string env_label(const std::string& event);

/// Every branch replaced by a padded canonical purification; one environment
/// per event, appended as the last output of the event and as an extra
/// boundary output (event order).
struct PurifiedDiagram {
  IndefiniteCausalScenario base_scenario;
  DiagramAssignment base;
  std::map<std::string, std::size_t> env_dims;
  IndefiniteCausalScenario scenario;  // base_scenario plus the environment wires
  DiagramAssignment purified;         // pure branches, environment output last
};

// event -> one unitary on E_event per dense branch index (i * |O| + o).
using EnvironmentUnitaries = std::map<std::string, std::vector<ComplexMatrix>>;

PurifiedDiagram purify_diagram(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta);
// Alternative purification: branch purifications rotated on their environment.
PurifiedDiagram purify_diagram(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                               const EnvironmentUnitaries& env_unitaries);

// theta extended with environment edges and output nodes, compatible with pd.scenario.
CompatibleScenario extend_with_environments(const PurifiedDiagram& pd, const CompatibleScenario& theta);

/// Compile with environments left open as trailing outputs, in event order.
CompiledProcess contract_purified(const CompatibleScenario& theta, const PurifiedDiagram& pd);

}  // namespace icsem
