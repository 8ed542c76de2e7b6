#include "icsem/causal.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>

#include "icsem/errors.hpp"

namespace icsem {

namespace {

const std::vector<std::string> kNoEdges;

std::size_t position_of(const std::vector<std::string>& seq, const std::string& item) {
  return static_cast<std::size_t>(std::find(seq.begin(), seq.end(), item) - seq.begin());
}

// An open wire end of an indefinite scenario.
struct Endpoint {
  std::string event;  // empty for boundary slots
  std::size_t slot;
  std::string label;

  std::string spec(bool outgoing) const {
    if (event.empty()) return (outgoing ? "in[" : "out[") + std::to_string(slot) + "]";
    return event + (outgoing ? ".out[" : ".in[") + std::to_string(slot) + "]";
  }
};

struct LabelClass {
  std::vector<Endpoint> outs;  // edge tails
  std::vector<Endpoint> ins;   // edge heads
};

// r-th permutation of {0..k-1} in lexicographic order (factorial number system).
std::vector<std::size_t> nth_permutation(std::size_t k, std::uint64_t r) {
  std::vector<std::size_t> pool(k);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::uint64_t> fact(k + 1, 1);
  for (std::size_t i = 1; i <= k; ++i) fact[i] = fact[i - 1] * i;
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = k; i > 0; --i) {
    const std::uint64_t idx = r / fact[i - 1];
    r %= fact[i - 1];
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

std::map<std::string, LabelClass> label_classes(const IndefiniteCausalScenario& phi) {
  std::map<std::string, LabelClass> classes;
  for (const std::string& l : phi.labels) classes[l];
  for (std::size_t k = 0; k < phi.boundary_in.size(); ++k) classes[phi.boundary_in[k]].outs.push_back({"", k, phi.boundary_in[k]});
  for (const std::string& ev : phi.events) {
    const auto& outs = phi.out_labels.at(ev);
    for (std::size_t k = 0; k < outs.size(); ++k) classes[outs[k]].outs.push_back({ev, k, outs[k]});
    const auto& ins = phi.in_labels.at(ev);
    for (std::size_t k = 0; k < ins.size(); ++k) classes[ins[k]].ins.push_back({ev, k, ins[k]});
  }
  for (std::size_t k = 0; k < phi.boundary_out.size(); ++k) classes[phi.boundary_out[k]].ins.push_back({"", k, phi.boundary_out[k]});
  return classes;
}

struct Wire {
  const Endpoint* tail;
  const Endpoint* head;
};

bool wiring_is_acyclic(const std::vector<std::string>& events, const std::vector<Wire>& wires) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < events.size(); ++i) index[events[i]] = i;
  std::vector<std::vector<std::size_t>> succ(events.size());
  std::vector<std::size_t> indeg(events.size(), 0);
  for (const Wire& w : wires) {
    if (w.tail->event.empty() || w.head->event.empty()) continue;
    const std::size_t a = index.at(w.tail->event), b = index.at(w.head->event);
    if (a == b) return false;
    succ[a].push_back(b);
    ++indeg[b];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t n = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t m : succ[n])
      if (--indeg[m] == 0) ready.push_back(m);
  }
  return seen == events.size();
}

CompatibleScenario build_scenario(const IndefiniteCausalScenario& phi, const std::vector<Wire>& wires) {
  FramedMultigraph g;
  g.nodes = phi.events;
  for (std::size_t k = 0; k < phi.boundary_in.size(); ++k) {
    g.input_nodes.push_back(input_node_name(k));
    g.nodes.push_back(g.input_nodes.back());
  }
  for (std::size_t k = 0; k < phi.boundary_out.size(); ++k) {
    g.output_nodes.push_back(output_node_name(k));
    g.nodes.push_back(g.output_nodes.back());
  }
  for (const std::string& ev : phi.events) {
    g.in_framing[ev].resize(phi.in_labels.at(ev).size());
    g.out_framing[ev].resize(phi.out_labels.at(ev).size());
  }
  for (const std::string& n : g.input_nodes) g.out_framing[n].resize(1);
  for (const std::string& n : g.output_nodes) g.in_framing[n].resize(1);

  // Edge ids follow the head endpoint order: event in-slots, then boundary outputs.
  std::vector<const Wire*> ordered;
  for (const Wire& w : wires) ordered.push_back(&w);
  auto head_rank = [&](const Wire* w) {
    const Endpoint& h = *w->head;
    const std::size_t ev = h.event.empty() ? phi.events.size() : position_of(phi.events, h.event);
    return std::pair(ev, h.slot);
  };
  std::sort(ordered.begin(), ordered.end(), [&](const Wire* a, const Wire* b) { return head_rank(a) < head_rank(b); });

  CompatibleScenario c;
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    const Endpoint& t = *ordered[k]->tail;
    const Endpoint& h = *ordered[k]->head;
    Edge e{"e" + std::to_string(k), t.event.empty() ? input_node_name(t.slot) : t.event,
           h.event.empty() ? output_node_name(h.slot) : h.event};
    g.out_framing[e.tail][t.event.empty() ? 0 : t.slot] = e.id;
    g.in_framing[e.head][h.event.empty() ? 0 : h.slot] = e.id;
    c.labelling[e.id] = t.label;
    g.edges.push_back(std::move(e));
  }

  c.scenario.graph = std::move(g);
  c.scenario.events = phi.events;
  for (const std::string& ev : phi.events) {
    c.scenario.classical_inputs.emplace(ev, phi.inputs_of(ev));
    c.scenario.classical_outputs.emplace(ev, phi.outputs_of(ev));
  }
  c.canonical_key = canonical_key(c.scenario, c.labelling);
  return c;
}

}  // namespace

std::string input_node_name(std::size_t k) { return "#in" + std::to_string(k); }
std::string output_node_name(std::size_t k) { return "#out" + std::to_string(k); }

// ---------------------------------------------------------------------------
// FramedMultigraph

const Edge& FramedMultigraph::edge(const std::string& id) const {
  for (const Edge& e : edges)
    if (e.id == id) return e;
  throw GraphError("unknown edge '" + id + "'");
}

const std::vector<std::string>& FramedMultigraph::incoming(const std::string& node) const {
  auto it = in_framing.find(node);
  return it == in_framing.end() ? kNoEdges : it->second;
}

const std::vector<std::string>& FramedMultigraph::outgoing(const std::string& node) const {
  auto it = out_framing.find(node);
  return it == out_framing.end() ? kNoEdges : it->second;
}

bool FramedMultigraph::is_boundary(const std::string& node) const {
  return std::find(input_nodes.begin(), input_nodes.end(), node) != input_nodes.end() ||
         std::find(output_nodes.begin(), output_nodes.end(), node) != output_nodes.end();
}

std::vector<std::string> FramedMultigraph::internal_nodes() const {
  std::vector<std::string> out;
  for (const std::string& n : nodes)
    if (!is_boundary(n)) out.push_back(n);
  return out;
}

std::vector<Violation> validate_framed(const FramedMultigraph& graph) {
  std::vector<Violation> v;
  const std::set<std::string> node_set(graph.nodes.begin(), graph.nodes.end());
  if (node_set.size() != graph.nodes.size()) v.push_back({"nodes", "node ids must be unique"});

  std::map<std::string, std::multiset<std::string>> actual_in, actual_out;
  std::set<std::string> edge_ids;
  for (const Edge& e : graph.edges) {
    if (!edge_ids.insert(e.id).second) v.push_back({e.id, "edge ids must be unique"});
    if (!node_set.count(e.tail)) v.push_back({e.id, "tail is not a node"});
    if (!node_set.count(e.head)) v.push_back({e.id, "head is not a node"});
    actual_out[e.tail].insert(e.id);
    actual_in[e.head].insert(e.id);
  }
  for (const std::string& n : graph.input_nodes) {
    if (!node_set.count(n)) v.push_back({n, "input node is not a node"});
    if (!actual_in[n].empty()) v.push_back({n, "input node must have zero incoming edges"});
    if (actual_out[n].size() != 1) v.push_back({n, "input node must have exactly one outgoing edge"});
  }
  for (const std::string& n : graph.output_nodes) {
    if (!node_set.count(n)) v.push_back({n, "output node is not a node"});
    if (!actual_out[n].empty()) v.push_back({n, "output node must have zero outgoing edges"});
    if (actual_in[n].size() != 1) v.push_back({n, "output node must have exactly one incoming edge"});
    if (std::find(graph.input_nodes.begin(), graph.input_nodes.end(), n) != graph.input_nodes.end()) {
      v.push_back({n, "node cannot be both input and output"});
    }
  }
  for (const std::string& n : graph.nodes) {
    const auto& in = graph.incoming(n);
    const auto& out = graph.outgoing(n);
    if (std::multiset<std::string>(in.begin(), in.end()) != actual_in[n]) {
      v.push_back({n, "incoming framing is not a permutation of the incoming edges"});
    }
    if (std::multiset<std::string>(out.begin(), out.end()) != actual_out[n]) {
      v.push_back({n, "outgoing framing is not a permutation of the outgoing edges"});
    }
  }
  return v;
}

bool is_acyclic(const FramedMultigraph& graph) {
  std::map<std::string, std::size_t> indeg;
  for (const std::string& n : graph.nodes) indeg[n] = 0;
  for (const Edge& e : graph.edges) {
    if (e.tail == e.head) return false;
    ++indeg[e.head];
  }
  std::vector<std::string> ready;
  for (const auto& [n, d] : indeg)
    if (d == 0) ready.push_back(n);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::string n = ready.back();
    ready.pop_back();
    ++seen;
    for (const Edge& e : graph.edges)
      if (e.tail == n && --indeg[e.head] == 0) ready.push_back(e.head);
  }
  return seen == indeg.size();
}

std::vector<std::string> topological_order(const FramedMultigraph& graph) {
  std::map<std::string, std::size_t> indeg;
  for (const std::string& n : graph.nodes) indeg[n] = 0;
  for (const Edge& e : graph.edges) {
    if (e.tail == e.head) throw GraphError("loop on node '" + e.tail + "'");
    ++indeg[e.head];
  }
  std::set<std::string> ready;
  for (const auto& [n, d] : indeg)
    if (d == 0) ready.insert(n);
  std::vector<std::string> order;
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::string n = *ready.begin();
    ready.erase(ready.begin());
    ++seen;
    if (!graph.is_boundary(n)) order.push_back(n);
    for (const Edge& e : graph.edges)
      if (e.tail == n && --indeg[e.head] == 0) ready.insert(e.head);
  }
  if (seen != indeg.size()) throw GraphError("graph has a directed cycle");
  return order;
}

DefiniteCausalScenario DefiniteCausalScenario::make(FramedMultigraph graph, std::map<std::string, ClassicalSet> inputs,
                                                    std::map<std::string, ClassicalSet> outputs) {
  const auto violations = validate_framed(graph);
  if (!violations.empty()) {
    throw GraphError("invalid framed multigraph: " + violations.front().subject + ": " + violations.front().clause);
  }
  if (!is_acyclic(graph)) throw GraphError("definite causal scenarios must be acyclic");
  DefiniteCausalScenario s;
  s.events = graph.internal_nodes();
  for (const std::string& ev : s.events) {
    s.classical_inputs.emplace(ev, inputs.count(ev) ? inputs.at(ev) : ClassicalSet::singleton());
    s.classical_outputs.emplace(ev, outputs.count(ev) ? outputs.at(ev) : ClassicalSet::singleton());
  }
  s.graph = std::move(graph);
  return s;
}

// ---------------------------------------------------------------------------
// IndefiniteCausalScenario

void IndefiniteCausalScenario::validate() const {
  const std::set<std::string> known(labels.begin(), labels.end());
  auto check_seq = [&](const std::vector<std::string>& seq, const std::string& where) {
    for (const std::string& l : seq)
      if (!known.count(l)) throw GraphError(where + " uses unknown system label '" + l + "'");
  };
  std::set<std::string> seen;
  for (const std::string& ev : events) {
    if (!seen.insert(ev).second) throw GraphError("duplicate event '" + ev + "'");
    if (ev.empty() || ev.front() == '#') throw GraphError("event ids must be non-empty and not start with '#'");
    if (!in_labels.count(ev) || !out_labels.count(ev)) throw GraphError("event '" + ev + "' is missing its wire labels");
    check_seq(in_labels.at(ev), "event '" + ev + "' inputs");
    check_seq(out_labels.at(ev), "event '" + ev + "' outputs");
  }
  check_seq(boundary_in, "boundary_in");
  check_seq(boundary_out, "boundary_out");
}

const ClassicalSet& IndefiniteCausalScenario::inputs_of(const std::string& event) const {
  static const ClassicalSet trivial;
  auto it = classical_inputs.find(event);
  return it == classical_inputs.end() ? trivial : it->second;
}

const ClassicalSet& IndefiniteCausalScenario::outputs_of(const std::string& event) const {
  static const ClassicalSet trivial;
  auto it = classical_outputs.find(event);
  return it == classical_outputs.end() ? trivial : it->second;
}

// ---------------------------------------------------------------------------
// Keys and conversions

std::string canonical_key(const DefiniteCausalScenario& scenario, const std::map<std::string, std::string>& labelling) {
  const FramedMultigraph& g = scenario.graph;
  std::vector<std::string> triples;
  for (const Edge& e : g.edges) {
    std::string tail, head;
    const std::size_t in_pos = position_of(g.input_nodes, e.tail);
    if (in_pos < g.input_nodes.size()) {
      tail = "in[" + std::to_string(in_pos) + "]";
    } else {
      tail = e.tail + ".out[" + std::to_string(position_of(g.outgoing(e.tail), e.id)) + "]";
    }
    const std::size_t out_pos = position_of(g.output_nodes, e.head);
    if (out_pos < g.output_nodes.size()) {
      head = "out[" + std::to_string(out_pos) + "]";
    } else {
      head = e.head + ".in[" + std::to_string(position_of(g.incoming(e.head), e.id)) + "]";
    }
    auto it = labelling.find(e.id);
    if (it == labelling.end()) throw GraphError("edge '" + e.id + "' has no label");
    triples.push_back(it->second + ":" + tail + ">" + head);
  }
  std::sort(triples.begin(), triples.end());
  std::string key;
  for (const std::string& t : triples) {
    if (!key.empty()) key += ";";
    key += t;
  }
  return key;
}

std::string canonical_key(const CompatibleScenario& c) { return canonical_key(c.scenario, c.labelling); }

IndefiniteCausalScenario definite_to_indefinite(const DefiniteCausalScenario& theta) {
  const FramedMultigraph& g = theta.graph;
  IndefiniteCausalScenario phi;
  phi.events = theta.events;
  for (const Edge& e : g.edges) phi.labels.push_back(e.id);
  for (const std::string& ev : theta.events) {
    phi.in_labels[ev] = g.incoming(ev);
    phi.out_labels[ev] = g.outgoing(ev);
    phi.classical_inputs.emplace(ev, theta.classical_inputs.at(ev));
    phi.classical_outputs.emplace(ev, theta.classical_outputs.at(ev));
  }
  for (const std::string& n : g.input_nodes) phi.boundary_in.push_back(g.outgoing(n).at(0));
  for (const std::string& n : g.output_nodes) phi.boundary_out.push_back(g.incoming(n).at(0));
  return phi;
}

CompatibleScenario as_compatible(const DefiniteCausalScenario& theta) {
  CompatibleScenario c;
  c.scenario = theta;
  for (const Edge& e : theta.graph.edges) c.labelling[e.id] = e.id;
  c.canonical_key = canonical_key(c);
  return c;
}

// ---------------------------------------------------------------------------
// Enumeration

double matching_bound(const IndefiniteCausalScenario& phi) {
  double bound = 1.0;
  for (const auto& [label, cls] : label_classes(phi)) {
    if (cls.outs.size() != cls.ins.size()) return 0.0;
    bound *= factorial(cls.outs.size());
  }
  return bound;
}

std::vector<CompatibleScenario> enumerate_compatible(const IndefiniteCausalScenario& phi,
                                                     const EnumerationOptions& options) {
  phi.validate();
  const auto class_map = label_classes(phi);
  std::vector<const LabelClass*> classes;
  for (const auto& [label, cls] : class_map) {
    if (cls.outs.size() != cls.ins.size()) return {};
    if (!cls.outs.empty()) classes.push_back(&cls);
  }
  const double bound = matching_bound(phi);
  if (bound > options.cap) throw CapExceededError(bound, options.cap);

  std::vector<std::uint64_t> radix;
  for (const LabelClass* cls : classes) radix.push_back(static_cast<std::uint64_t>(factorial(cls->outs.size())));
  const auto total = static_cast<std::int64_t>(bound);

  auto candidate = [&](std::uint64_t flat) -> std::vector<Wire> {
    std::vector<Wire> wires;
    for (std::size_t c = classes.size(); c-- > 0;) {
      const std::uint64_t r = flat % radix[c];
      flat /= radix[c];
      const auto perm = nth_permutation(classes[c]->outs.size(), r);
      for (std::size_t k = 0; k < perm.size(); ++k) wires.push_back({&classes[c]->outs[k], &classes[c]->ins[perm[k]]});
    }
    return wires;
  };

  std::vector<CompatibleScenario> found;
  if (options.parallel) {
#pragma omp parallel
    {
      std::vector<CompatibleScenario> local;
#pragma omp for schedule(dynamic, 64) nowait
      for (std::int64_t flat = 0; flat < total; ++flat) {
        const auto wires = candidate(static_cast<std::uint64_t>(flat));
        if (wiring_is_acyclic(phi.events, wires)) local.push_back(build_scenario(phi, wires));
      }
#pragma omp critical(icsem_enumerate_merge)
      found.insert(found.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
    }
  } else {
    for (std::int64_t flat = 0; flat < total; ++flat) {
      const auto wires = candidate(static_cast<std::uint64_t>(flat));
      if (wiring_is_acyclic(phi.events, wires)) found.push_back(build_scenario(phi, wires));
    }
  }

  std::sort(found.begin(), found.end(),
            [](const CompatibleScenario& a, const CompatibleScenario& b) { return a.canonical_key < b.canonical_key; });
  found.erase(std::unique(found.begin(), found.end(),
                          [](const CompatibleScenario& a, const CompatibleScenario& b) {
                            return a.canonical_key == b.canonical_key;
                          }),
              found.end());
  return found;
}

std::vector<Violation> check_compatible(const IndefiniteCausalScenario& phi, const CompatibleScenario& c) {
  std::vector<Violation> v;
  const DefiniteCausalScenario& theta = c.scenario;
  const FramedMultigraph& g = theta.graph;
  for (const Violation& s : validate_framed(g)) v.push_back(s);
  if (!is_acyclic(g)) v.push_back({"graph", "not acyclic"});

  const std::set<std::string> events_theta(theta.events.begin(), theta.events.end());
  const auto internal_list = g.internal_nodes();
  const std::set<std::string> internal(internal_list.begin(), internal_list.end());
  const std::set<std::string> events_phi(phi.events.begin(), phi.events.end());
  if (events_theta != events_phi || internal != events_phi) v.push_back({"events", "events differ from the scenario"});
  if (!v.empty()) return v;

  for (const std::string& ev : phi.events) {
    if (!(theta.classical_inputs.at(ev) == phi.inputs_of(ev))) v.push_back({ev, "classical inputs differ"});
    if (!(theta.classical_outputs.at(ev) == phi.outputs_of(ev))) v.push_back({ev, "classical outputs differ"});
    if (g.incoming(ev).size() != phi.in_labels.at(ev).size()) v.push_back({ev, "input wire count differs"});
    if (g.outgoing(ev).size() != phi.out_labels.at(ev).size()) v.push_back({ev, "output wire count differs"});
  }
  if (g.input_nodes.size() != phi.boundary_in.size()) v.push_back({"boundary_in", "input node count differs"});
  if (g.output_nodes.size() != phi.boundary_out.size()) v.push_back({"boundary_out", "output node count differs"});
  if (!v.empty()) return v;

  for (const Edge& e : g.edges) {
    std::string tail_label, head_label;
    const std::size_t ip = position_of(g.input_nodes, e.tail);
    tail_label = ip < g.input_nodes.size() ? phi.boundary_in[ip]
                                           : phi.out_labels.at(e.tail)[position_of(g.outgoing(e.tail), e.id)];
    const std::size_t op = position_of(g.output_nodes, e.head);
    head_label = op < g.output_nodes.size() ? phi.boundary_out[op]
                                            : phi.in_labels.at(e.head)[position_of(g.incoming(e.head), e.id)];
    if (tail_label != head_label) v.push_back({e.id, "labels at tail and head differ"});
    auto it = c.labelling.find(e.id);
    if (it == c.labelling.end() || it->second != tail_label) v.push_back({e.id, "labelling disagrees with endpoints"});
  }
  return v;
}

}  // namespace icsem
