#include <algorithm>
#include <set>

#include "doctest.h"
#include "icsem/causal.hpp"
#include "icsem/errors.hpp"

using namespace icsem;

namespace {

// in -> a1 -> a2 -> ... -> out, one edge per hop.
FramedMultigraph chain_graph(const std::vector<std::string>& events) {
  FramedMultigraph g;
  g.nodes = {"in"};
  g.nodes.insert(g.nodes.end(), events.begin(), events.end());
  g.nodes.push_back("out");
  g.input_nodes = {"in"};
  g.output_nodes = {"out"};
  for (std::size_t k = 0; k + 1 < g.nodes.size(); ++k) {
    const std::string id = "w" + std::to_string(k);
    g.edges.push_back({id, g.nodes[k], g.nodes[k + 1]});
    g.out_framing[g.nodes[k]] = {id};
    g.in_framing[g.nodes[k + 1]] = {id};
  }
  return g;
}

IndefiniteCausalScenario switch_scenario(std::size_t n) {
  IndefiniteCausalScenario phi;
  phi.labels = {"z"};
  for (std::size_t k = 0; k < n; ++k) {
    const std::string ev = "A" + std::to_string(k);
    phi.events.push_back(ev);
    phi.in_labels[ev] = {"z"};
    phi.out_labels[ev] = {"z"};
  }
  phi.boundary_in = {"z"};
  phi.boundary_out = {"z"};
  return phi;
}

}  // namespace

TEST_SUITE("causal-structure") {

TEST_CASE("validate_framed") {
  SUBCASE("single internal node with boundary half-edges") { CHECK(validate_framed(chain_graph({"a"})).empty()); }
  SUBCASE("input node with two outgoing edges") {
    FramedMultigraph g = chain_graph({"a"});
    g.edges.push_back({"extra", "in", "a"});
    g.out_framing["in"].push_back("extra");
    g.in_framing["a"].push_back("extra");
    const auto v = validate_framed(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].subject == "in");
  }
  SUBCASE("framing missing an incident edge") {
    FramedMultigraph g = chain_graph({"a", "b"});
    g.in_framing["b"].clear();
    const auto v = validate_framed(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].subject == "b");
  }
}

TEST_CASE("is_acyclic") {
  CHECK(is_acyclic(chain_graph({"A", "B", "C"})));
  FramedMultigraph two;
  two.nodes = {"A", "B"};
  two.edges = {{"e0", "A", "B"}, {"e1", "B", "A"}};
  CHECK_FALSE(is_acyclic(two));
  FramedMultigraph loop;
  loop.nodes = {"A"};
  loop.edges = {{"e0", "A", "A"}};
  CHECK_FALSE(is_acyclic(loop));
}

TEST_CASE("topological_order") {
  CHECK(topological_order(chain_graph({"alpha", "beta"})) == std::vector<std::string>{"alpha", "beta"});
  FramedMultigraph fan;
  fan.nodes = {"beta", "alpha", "gamma"};
  fan.edges = {{"e0", "gamma", "beta"}, {"e1", "gamma", "alpha"}};
  CHECK(topological_order(fan) == std::vector<std::string>{"gamma", "alpha", "beta"});
  FramedMultigraph cyc;
  cyc.nodes = {"A", "B"};
  cyc.edges = {{"e0", "A", "B"}, {"e1", "B", "A"}};
  CHECK_THROWS_AS(topological_order(cyc), GraphError);
}

TEST_CASE("definite scenarios") {
  const auto theta = DefiniteCausalScenario::make(chain_graph({"a", "b"}), {{"a", ClassicalSet::range(2)}});
  CHECK(theta.events == std::vector<std::string>{"a", "b"});
  CHECK(theta.classical_inputs.at("a").size() == 2);
  CHECK(theta.classical_outputs.at("b").size() == 1);
  FramedMultigraph bad = chain_graph({"a"});
  bad.in_framing["a"].clear();
  CHECK_THROWS_AS(DefiniteCausalScenario::make(bad), GraphError);
}

TEST_CASE("definite_to_indefinite round trip") {
  for (const auto& events : {std::vector<std::string>{"a"}, {"a", "b"}, {"x", "y", "z"}}) {
    const auto theta = DefiniteCausalScenario::make(chain_graph(events));
    const auto phi = definite_to_indefinite(theta);
    const auto all = enumerate_compatible(phi);
    CHECK(all.size() == 1);
    const std::string key = as_compatible(theta).canonical_key;
    CHECK(std::any_of(all.begin(), all.end(), [&](const CompatibleScenario& c) { return c.canonical_key == key; }));
  }
}

TEST_CASE("single and independent events") {
  IndefiniteCausalScenario one;
  one.events = {"a"};
  one.labels = {"p", "q"};
  one.in_labels["a"] = {"p"};
  one.out_labels["a"] = {"q"};
  one.boundary_in = {"p"};
  one.boundary_out = {"q"};
  CHECK(enumerate_compatible(one).size() == 1);

  IndefiniteCausalScenario two = one;
  two.events.push_back("b");
  two.labels.insert(two.labels.end(), {"r", "s"});
  two.in_labels["b"] = {"r"};
  two.out_labels["b"] = {"s"};
  two.boundary_in.push_back("r");
  two.boundary_out.push_back("s");
  const auto all = enumerate_compatible(two);
  REQUIRE(all.size() == 1);
  CHECK(all[0].scenario.graph.edges.size() == 4);
}

TEST_CASE("n-partite switch has n! compatible orders") {
  const std::size_t expected[] = {1, 2, 6, 24};
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto phi = switch_scenario(n);
    const auto all = enumerate_compatible(phi);
    CHECK(all.size() == expected[n - 1]);
    for (std::size_t k = 1; k < all.size(); ++k) CHECK(all[k - 1].canonical_key < all[k].canonical_key);
    for (const auto& c : all) {
      CHECK(check_compatible(phi, c).empty());
      CHECK(validate_framed(c.scenario.graph).empty());
      CHECK(is_acyclic(c.scenario.graph));
      CHECK(topological_order(c.scenario.graph).size() == n);
    }
    const auto serial = enumerate_compatible(phi, {.cap = 1e6, .parallel = false});
    REQUIRE(serial.size() == all.size());
    for (std::size_t k = 0; k < all.size(); ++k) CHECK(serial[k].canonical_key == all[k].canonical_key);
  }
}

TEST_CASE("switch orders are distinct wirings") {
  const auto all = enumerate_compatible(switch_scenario(2));
  REQUIRE(all.size() == 2);
  CHECK(all[0].canonical_key != all[1].canonical_key);
  std::set<std::vector<std::string>> orders;
  for (const auto& c : all) orders.insert(topological_order(c.scenario.graph));
  CHECK(orders == std::set<std::vector<std::string>>{{"A0", "A1"}, {"A1", "A0"}});
  CHECK(all[0].canonical_key == "z:A0.out[0]>A1.in[0];z:A1.out[0]>out[0];z:in[0]>A0.in[0]");
}

TEST_CASE("canonical key ignores edge ids") {
  const auto theta = DefiniteCausalScenario::make(chain_graph({"a", "b"}));
  DefiniteCausalScenario renamed = theta;
  std::map<std::string, std::string> labelling, relabelled;
  for (auto& e : renamed.graph.edges) {
    labelling[e.id] = "L";
    const std::string fresh = "renamed_" + e.id;
    for (auto& [node, seq] : renamed.graph.in_framing) std::replace(seq.begin(), seq.end(), e.id, fresh);
    for (auto& [node, seq] : renamed.graph.out_framing) std::replace(seq.begin(), seq.end(), e.id, fresh);
    e.id = fresh;
    relabelled[fresh] = "L";
  }
  CHECK(canonical_key(theta, labelling) == canonical_key(renamed, relabelled));
}

TEST_CASE("unbalanced labels give no scenarios") {
  IndefiniteCausalScenario phi = switch_scenario(2);
  phi.labels.push_back("w");
  phi.out_labels["A1"] = {"w"};
  CHECK(matching_bound(phi) == 0.0);
  CHECK(enumerate_compatible(phi).empty());
}

TEST_CASE("enumeration cap") {
  const auto phi = switch_scenario(4);
  CHECK(matching_bound(phi) == 120.0);
  try {
    enumerate_compatible(phi, {.cap = 100});
    FAIL("expected CapExceededError");
  } catch (const CapExceededError& e) {
    CHECK(e.bound() == 120.0);
  }
}

TEST_CASE("unknown labels are rejected") {
  IndefiniteCausalScenario phi = switch_scenario(1);
  phi.in_labels["A0"] = {"nope"};
  CHECK_THROWS_AS(enumerate_compatible(phi), GraphError);
}

TEST_CASE("check_compatible catches label mismatch") {
  IndefiniteCausalScenario phi;
  phi.events = {"a", "b"};
  phi.labels = {"p", "q"};
  phi.in_labels = {{"a", {"p"}}, {"b", {"q"}}};
  phi.out_labels = {{"a", {"p"}}, {"b", {"q"}}};
  phi.boundary_in = {"p", "q"};
  phi.boundary_out = {"p", "q"};
  const auto all = enumerate_compatible(phi);
  REQUIRE(all.size() == 1);
  CompatibleScenario broken = all[0];
  broken.labelling.begin()->second = broken.labelling.begin()->second == "p" ? "q" : "p";
  CHECK_FALSE(check_compatible(phi, broken).empty());
}

}  // TEST_SUITE
