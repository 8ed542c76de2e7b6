#include "icsem/diagram.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <set>

#include "icsem/errors.hpp"

namespace icsem {

namespace {

std::size_t product_of(const DiagramAssignment& delta, const std::vector<std::string>& wires) {
  std::size_t d = 1;
  for (const std::string& w : wires) d *= delta.dim(w);
  return d;
}

// "a:2 x b:3"
std::string describe(const DiagramAssignment& delta, const std::vector<std::string>& wires) {
  if (wires.empty()) return "(none)";
  std::string out;
  for (const std::string& w : wires) out += (out.empty() ? "" : " x ") + w + ":" + std::to_string(delta.dim(w));
  return out;
}

SystemDims dims_of(const DiagramAssignment& delta, const std::vector<std::string>& wires) {
  std::vector<std::size_t> d;
  d.reserve(wires.size());
  for (const std::string& w : wires) d.push_back(delta.dim(w));
  return SystemDims(std::move(d));
}

void check_event(const std::string& ev, const DiagramAssignment& delta, const std::vector<std::string>& in_wires,
                 const std::vector<std::string>& out_wires, const ClassicalSet& inputs, const ClassicalSet& outputs) {
  auto it = delta.proc.find(ev);
  if (it == delta.proc.end()) throw TypingError("event '" + ev + "' has no instrument");
  const QuantumInstrument& inst = it->second;
  for (const auto* wires : {&in_wires, &out_wires})
    for (const std::string& w : *wires)
      if (!delta.sys.count(w)) throw TypingError("event '" + ev + "': wire '" + w + "' has no dimension");
  if (inst.dim_in().total() != product_of(delta, in_wires)) {
    throw TypingError("event '" + ev + "': instrument input dim " + std::to_string(inst.dim_in().total()) +
                      " != product of input wires " + describe(delta, in_wires) + " = " +
                      std::to_string(product_of(delta, in_wires)));
  }
  if (inst.dim_out().total() != product_of(delta, out_wires)) {
    throw TypingError("event '" + ev + "': instrument output dim " + std::to_string(inst.dim_out().total()) +
                      " != product of output wires " + describe(delta, out_wires) + " = " +
                      std::to_string(product_of(delta, out_wires)));
  }
  if (!(inst.inputs() == inputs)) throw TypingError("event '" + ev + "': classical input set differs");
  if (!(inst.outputs() == outputs)) throw TypingError("event '" + ev + "': classical output set differs");
}

// Mixed-radix digits of `flat`, first digit most significant.
std::vector<std::size_t> decode(std::size_t flat, const std::vector<std::size_t>& radix) {
  std::vector<std::size_t> digits(radix.size());
  for (std::size_t k = radix.size(); k-- > 0;) {
    digits[k] = flat % radix[k];
    flat /= radix[k];
  }
  return digits;
}

void check_schedule(const DefiniteCausalScenario& theta, const std::vector<std::string>& order) {
  std::vector<std::string> sorted_order = order, events = theta.events;
  std::sort(sorted_order.begin(), sorted_order.end());
  std::sort(events.begin(), events.end());
  if (sorted_order != events) throw GraphError("schedule is not a permutation of the events");
  std::set<std::string> done(theta.graph.input_nodes.begin(), theta.graph.input_nodes.end());
  for (const std::string& ev : order) {
    for (const std::string& e : theta.graph.incoming(ev))
      if (!done.count(theta.graph.edge(e).tail)) throw GraphError("schedule is not a topological order at '" + ev + "'");
    done.insert(ev);
  }
}

}  // namespace

const QuantumInstrument& DiagramAssignment::instrument(const std::string& event) const {
  auto it = proc.find(event);
  if (it == proc.end()) throw TypingError("event '" + event + "' has no instrument");
  return it->second;
}

std::size_t DiagramAssignment::dim(const std::string& wire) const {
  auto it = sys.find(wire);
  if (it == sys.end()) throw TypingError("wire '" + wire + "' has no dimension");
  return it->second;
}

void check_typing(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta) {
  for (const std::string& l : phi.labels) {
    auto it = delta.sys.find(l);
    if (it == delta.sys.end()) throw TypingError("label '" + l + "' has no dimension");
    if (it->second == 0) throw TypingError("label '" + l + "' has dimension 0");
  }
  for (const std::string& ev : phi.events) {
    check_event(ev, delta, phi.in_labels.at(ev), phi.out_labels.at(ev), phi.inputs_of(ev), phi.outputs_of(ev));
  }
}

void check_typing(const DefiniteCausalScenario& theta, const DiagramAssignment& delta) {
  for (const Edge& e : theta.graph.edges) {
    auto it = delta.sys.find(e.id);
    if (it == delta.sys.end()) throw TypingError("edge '" + e.id + "' has no dimension");
    if (it->second == 0) throw TypingError("edge '" + e.id + "' has dimension 0");
  }
  for (const std::string& ev : theta.events) {
    check_event(ev, delta, theta.graph.incoming(ev), theta.graph.outgoing(ev), theta.classical_inputs.at(ev),
                theta.classical_outputs.at(ev));
  }
}

// ---------------------------------------------------------------------------
// Contraction

CPMap contract_branch(const DefiniteCausalScenario& theta, const DiagramAssignment& delta,
                      const std::map<std::string, CPMap>& branch_maps, const std::vector<std::string>& order) {
  const FramedMultigraph& g = theta.graph;
  std::vector<std::string> frontier;
  for (const std::string& n : g.input_nodes) frontier.push_back(g.outgoing(n).at(0));
  const SystemDims dim_in = dims_of(delta, frontier);

  std::vector<std::string> boundary_out;
  for (const std::string& n : g.output_nodes) boundary_out.push_back(g.incoming(n).at(0));
  const SystemDims dim_out = dims_of(delta, boundary_out);

  for (const std::string& ev : order)
    if (branch_maps.at(ev).kraus().empty()) return CPMap::zero(dim_in, dim_out);

  CPMap current = CPMap::identity(dim_in);
  for (const std::string& ev : order) {
    const auto& in_edges = g.incoming(ev);
    Permutation perm;
    std::vector<std::string> rest;
    for (const std::string& e : in_edges) {
      const auto pos = std::find(frontier.begin(), frontier.end(), e);
      if (pos == frontier.end()) throw GraphError("edge '" + e + "' into '" + ev + "' is not yet available");
      perm.push_back(static_cast<std::size_t>(pos - frontier.begin()));
    }
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      if (std::find(perm.begin(), perm.end(), k) == perm.end()) {
        perm.push_back(k);
        rest.push_back(frontier[k]);
      }
    }
    current = permute_outputs(current, perm);
    const CPMap local = branch_maps.at(ev).with_dims(dims_of(delta, in_edges), dims_of(delta, g.outgoing(ev)));
    current = compose(tensor(local, CPMap::identity(dims_of(delta, rest))), current);
    frontier = g.outgoing(ev);
    frontier.insert(frontier.end(), rest.begin(), rest.end());
  }

  Permutation perm;
  for (const std::string& e : boundary_out) {
    const auto pos = std::find(frontier.begin(), frontier.end(), e);
    if (pos == frontier.end()) throw GraphError("boundary edge '" + e + "' never produced");
    perm.push_back(static_cast<std::size_t>(pos - frontier.begin()));
  }
  if (perm.size() != frontier.size()) throw GraphError("dangling wires after contraction");
  return permute_outputs(current, perm).with_dims(dim_in, dim_out);
}

CompiledProcess contract(const DefiniteCausalScenario& theta, const DiagramAssignment& delta) {
  return contract(theta, delta, topological_order(theta.graph));
}

CompiledProcess contract(const DefiniteCausalScenario& theta, const DiagramAssignment& delta,
                         const std::vector<std::string>& order) {
  check_typing(theta, delta);
  check_schedule(theta, order);

  std::vector<ClassicalSet> in_sets, out_sets;
  std::vector<std::size_t> in_radix, out_radix;
  for (const std::string& ev : theta.events) {
    in_sets.push_back(theta.classical_inputs.at(ev));
    out_sets.push_back(theta.classical_outputs.at(ev));
    in_radix.push_back(in_sets.back().size());
    out_radix.push_back(out_sets.back().size());
  }
  const ClassicalSet inputs = ClassicalSet::product(in_sets);
  const ClassicalSet outputs = ClassicalSet::product(out_sets);

  std::vector<std::string> in_wires, out_wires;
  for (const std::string& n : theta.graph.input_nodes) in_wires.push_back(theta.graph.outgoing(n).at(0));
  for (const std::string& n : theta.graph.output_nodes) out_wires.push_back(theta.graph.incoming(n).at(0));
  const SystemDims dim_in = dims_of(delta, in_wires);
  const SystemDims dim_out = dims_of(delta, out_wires);

  const std::size_t n_branches = inputs.size() * outputs.size();
  std::vector<CPMap> branches(n_branches, CPMap::zero(dim_in, dim_out));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(n_branches); ++flat) {
    try {
      const std::size_t i = static_cast<std::size_t>(flat) / outputs.size();
      const std::size_t o = static_cast<std::size_t>(flat) % outputs.size();
      const auto is = decode(i, in_radix), os = decode(o, out_radix);
      std::map<std::string, CPMap> maps;
      for (std::size_t k = 0; k < theta.events.size(); ++k) {
        const std::string& ev = theta.events[k];
        maps.emplace(ev, delta.instrument(ev).branch(is[k], os[k]));
      }
      branches[static_cast<std::size_t>(flat)] = contract_branch(theta, delta, maps, order);
    } catch (...) {
#pragma omp critical(icsem_contract_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return {theta.events, QuantumInstrument(inputs, outputs, dim_in, dim_out, std::move(branches))};
}

DiagramAssignment induce(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                         const CompatibleScenario& theta) {
  const auto violations = check_compatible(phi, theta);
  if (!violations.empty()) {
    throw GraphError("scenario is not compatible: " + violations.front().subject + ": " + violations.front().clause);
  }
  check_typing(phi, delta);
  DiagramAssignment out;
  out.proc = delta.proc;
  for (const Edge& e : theta.scenario.graph.edges) out.sys[e.id] = delta.dim(theta.labelling.at(e.id));
  return out;
}

CompiledProcess compile(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                        const CompatibleScenario& theta) {
  return contract(theta.scenario, induce(phi, delta, theta));
}

// ---------------------------------------------------------------------------
// Purified diagrams

std::string env_label(const std::string& event) { return "env:" + event; }

PurifiedDiagram purify_diagram(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta) {
  return purify_diagram(phi, delta, {});
}

PurifiedDiagram purify_diagram(const IndefiniteCausalScenario& phi, const DiagramAssignment& delta,
                               const EnvironmentUnitaries& env_unitaries) {
  check_typing(phi, delta);
  PurifiedDiagram pd;
  pd.base_scenario = phi;
  pd.base = delta;
  pd.scenario = phi;
  pd.purified.sys = delta.sys;
  const std::set<std::string> labels(phi.labels.begin(), phi.labels.end());

  for (const std::string& ev : phi.events) {
    const QuantumInstrument& inst = delta.instrument(ev);
    std::size_t env = 1;
    for (const CPMap& b : inst.branches())
      if (!b.kraus().empty()) env = std::max(env, numerical_rank(b.choi()));
    pd.env_dims[ev] = env;

    const std::string label = env_label(ev);
    if (labels.count(label)) throw GraphError("label '" + label + "' is reserved for environments");
    pd.scenario.labels.push_back(label);
    pd.scenario.out_labels[ev].push_back(label);
    pd.scenario.boundary_out.push_back(label);
    pd.purified.sys[label] = env;

    const auto rot = env_unitaries.find(ev);
    if (rot != env_unitaries.end() && rot->second.size() != inst.branches().size()) {
      throw DimensionError("event '" + ev + "' needs one environment unitary per branch");
    }
    const SystemDims out = inst.dim_out() * SystemDims({env});
    std::vector<CPMap> pure;
    for (std::size_t b = 0; b < inst.branches().size(); ++b) {
      Purification p = purify_padded(inst.branches()[b], env);
      if (rot != env_unitaries.end()) p = rotate_environment(p, rot->second[b]);
      pure.push_back(CPMap::dbl(p.isometry, inst.dim_in(), out));
    }
    pd.purified.proc.emplace(ev, QuantumInstrument(inst.inputs(), inst.outputs(), inst.dim_in(), out, std::move(pure)));
  }
  return pd;
}

CompatibleScenario extend_with_environments(const PurifiedDiagram& pd, const CompatibleScenario& theta) {
  CompatibleScenario out = theta;
  FramedMultigraph& g = out.scenario.graph;
  std::size_t next_output = g.output_nodes.size();
  for (const std::string& ev : pd.base_scenario.events) {
    const std::string id = env_label(ev);
    for (const Edge& e : g.edges)
      if (e.id == id) throw GraphError("edge id '" + id + "' is reserved for environments");
    const std::string node = output_node_name(next_output++);
    if (std::find(g.nodes.begin(), g.nodes.end(), node) != g.nodes.end()) {
      throw GraphError("node id '" + node + "' is reserved for environment outputs");
    }
    g.nodes.push_back(node);
    g.output_nodes.push_back(node);
    g.edges.push_back({id, ev, node});
    g.out_framing[ev].push_back(id);
    g.in_framing[node] = {id};
    out.labelling[id] = id;
  }
  out.canonical_key = canonical_key(out);
  return out;
}

CompiledProcess contract_purified(const CompatibleScenario& theta, const PurifiedDiagram& pd) {
  const CompatibleScenario extended = extend_with_environments(pd, theta);
  return compile(pd.scenario, pd.purified, extended);
}

}  // namespace icsem
