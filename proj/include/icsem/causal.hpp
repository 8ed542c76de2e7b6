#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "icsem/process.hpp"

namespace icsem {

struct Edge {
  std::string id;
  std::string tail;
  std::string head;
};

/// Directed multigraph with boundary half-edges and a framing: total orders
/// on input nodes, output nodes, and the incoming/outgoing edges of each node.
struct FramedMultigraph {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::vector<std::string> input_nodes;
  std::vector<std::string> output_nodes;
  std::map<std::string, std::vector<std::string>> in_framing;
  std::map<std::string, std::vector<std::string>> out_framing;

  const Edge& edge(const std::string& id) const;
  const std::vector<std::string>& incoming(const std::string& node) const;
  const std::vector<std::string>& outgoing(const std::string& node) const;
  bool is_boundary(const std::string& node) const;
  // Nodes that are neither inputs nor outputs, in node order.
  std::vector<std::string> internal_nodes() const;
};

struct Violation {
  std::string subject;  // node or edge id
  std::string clause;   // which structural requirement failed
};

std::vector<Violation> validate_framed(const FramedMultigraph& graph);
bool is_acyclic(const FramedMultigraph& graph);
/// Internal nodes in Kahn order; among ready nodes the smallest id goes
/// first. Throws GraphError on a cycle or loop.
std::vector<std::string> topological_order(const FramedMultigraph& graph);

struct DefiniteCausalScenario {
  FramedMultigraph graph;
  std::vector<std::string> events;  // internal nodes
  std::map<std::string, ClassicalSet> classical_inputs;
  std::map<std::string, ClassicalSet> classical_outputs;

  // Validates structure and acyclicity; missing classical sets become singletons.
  static DefiniteCausalScenario make(FramedMultigraph graph, std::map<std::string, ClassicalSet> inputs = {},
                                     std::map<std::string, ClassicalSet> outputs = {});
};

/// Events with labelled open wires and no wiring.
struct IndefiniteCausalScenario {
  std::vector<std::string> events;
  std::vector<std::string> labels;
  std::map<std::string, ClassicalSet> classical_inputs;
  std::map<std::string, ClassicalSet> classical_outputs;
  std::map<std::string, std::vector<std::string>> in_labels;
  std::map<std::string, std::vector<std::string>> out_labels;
  std::vector<std::string> boundary_in;
  std::vector<std::string> boundary_out;

  // Throws GraphError when a sequence uses an unknown label, an event is
  // missing its data, or ids collide with boundary node names.
  void validate() const;
  const ClassicalSet& inputs_of(const std::string& event) const;
  const ClassicalSet& outputs_of(const std::string& event) const;
};

/// A definite scenario compatible with an indefinite one, plus its edge labelling.
struct CompatibleScenario {
  DefiniteCausalScenario scenario;
  std::map<std::string, std::string> labelling;  // edge id -> label
  std::string canonical_key;
};

// Sorted (label, tail endpoint, head endpoint) triples. Independent of edge ids.
std::string canonical_key(const DefiniteCausalScenario& scenario, const std::map<std::string, std::string>& labelling);
std::string canonical_key(const CompatibleScenario& c);

IndefiniteCausalScenario definite_to_indefinite(const DefiniteCausalScenario& theta);
// theta with the identity labelling (edge -> edge id).
CompatibleScenario as_compatible(const DefiniteCausalScenario& theta);

struct EnumerationOptions {
  double cap = 1e6;
  bool parallel = true;
};

// Worst-case number of label-respecting matchings (product of class factorials);
// 0 when label counts cannot balance.
double matching_bound(const IndefiniteCausalScenario& phi);

/// All definite scenarios compatible with phi, sorted by canonical key.
/// Throws CapExceededError when matching_bound(phi) > options.cap.
std::vector<CompatibleScenario> enumerate_compatible(const IndefiniteCausalScenario& phi,
                                                     const EnumerationOptions& options = {});

/// Re-checks the compatibility conditions of `c` against `phi` from scratch.
std::vector<Violation> check_compatible(const IndefiniteCausalScenario& phi, const CompatibleScenario& c);

// Boundary node names used by enumerated scenarios.
std::string input_node_name(std::size_t k);
std::string output_node_name(std::size_t k);

}  // namespace icsem
