#include <cmath>
#include <numbers>

#include "doctest.h"
#include "icsem/control.hpp"
#include "icsem/errors.hpp"
#include "icsem/random.hpp"
#include "test_util.hpp"

using namespace icsem;
using icsem::testing::hadamard;
using icsem::testing::pauli_x;
using icsem::testing::pauli_z;
using icsem::testing::phase_gap;

namespace {

const double kPi = std::numbers::pi;

CPMap z_dephasing() {
  return CPMap(SystemDims({2}), SystemDims({2}), {testing::projector(2, 0), testing::projector(2, 1)});
}

SwitchDiagram unitary_switch(const std::vector<ComplexMatrix>& us) {
  std::vector<QuantumInstrument> insts;
  for (const auto& u : us) insts.push_back(QuantumInstrument::from_map(CPMap::dbl(u)));
  return build_switch(us.size(), us.front().rows(), insts);
}

// |0><0| (x) U2 U1 + e^{i phi} |1><1| (x) U1 U2: the two-party switch by hand.
ComplexMatrix switch_oracle(const ComplexMatrix& u1, const ComplexMatrix& u2, double phi) {
  const ComplexMatrix p0 = testing::projector(2, 0), p1 = testing::projector(2, 1);
  return kron(p0, u2 * u1) + kron(p1, u1 * u2) * std::polar(1.0, phi);
}

double probability(const CPMap& branch, const ComplexMatrix& rho) { return branch.apply(rho).trace().real(); }

}  // namespace

TEST_SUITE("control-and-superposition") {

TEST_CASE("classical control") {
  random::Rng rng(21);
  SUBCASE("singleton family") {
    const CPMap f = random::channel(2, 3, 2, rng);
    const auto cp = classical_control(ProcessFamily({f}));
    CHECK(cp.control_dim == 1);
    CHECK(channel_distance(cp.g, f) <= 1e-12);
  }
  SUBCASE("two identities give dephasing on the control") {
    const CPMap id = CPMap::identity(SystemDims({2}));
    const auto cp = classical_control(ProcessFamily({id, id}));
    CHECK(channel_distance(cp.g, tensor(classical_identity(2), id)) <= 1e-12);
  }
  SUBCASE("random families satisfy the controlled-process equations") {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + trial % 3, din = 1 + trial % 2, dout = 1 + (trial / 2) % 3;
      const ProcessFamily family(testing::random_channels(n, din, dout, rng));
      const auto cp = classical_control(family);
      CHECK(verify_eq1(cp));
      CHECK(eq2_deviation(cp) <= 1e-9);
    }
  }
}

TEST_CASE("coherent control of pure families") {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  SUBCASE("{I, X} gives controlled-X") {
    const auto cp = coherent_control_pure(ProcessFamily({CPMap::dbl(id), CPMap::dbl(pauli_x())}), PhaseVector::zeros(2));
    const ComplexMatrix cnot = kron(testing::projector(2, 0), id) + kron(testing::projector(2, 1), pauli_x());
    CHECK(channel_distance(cp.g, CPMap::dbl(cnot)) <= 1e-12);
    CHECK(verify_eq1(cp));
  }
  SUBCASE("{I, I} with phases (0, pi) gives a phase gate on the control") {
    const auto cp = coherent_control_pure(ProcessFamily({CPMap::dbl(id), CPMap::dbl(id)}), PhaseVector({0.0, kPi}));
    CHECK(channel_distance(cp.g, CPMap::dbl(kron(pauli_z(), id))) <= 1e-12);
  }
  SUBCASE("singleton family: the phase is global") {
    random::Rng rng(22);
    const ComplexMatrix u = random::unitary(3, rng);
    const auto cp = coherent_control_pure(ProcessFamily({CPMap::dbl(u)}), PhaseVector({1.7}));
    CHECK(channel_distance(cp.g, CPMap::dbl(u)) <= 1e-12);
  }
  SUBCASE("mixed members are rejected") {
    CHECK_THROWS_AS(coherent_control_pure(ProcessFamily({z_dephasing()}), PhaseVector::zeros(1)), PreconditionError);
  }
  SUBCASE("phase vector length") {
    CHECK_THROWS_AS(coherent_control_pure(ProcessFamily({CPMap::dbl(id)}), PhaseVector::zeros(2)), PreconditionError);
  }
}

TEST_CASE("coherent control of CP families") {
  random::Rng rng(23);
  SUBCASE("unitary families agree with the pure construction") {
    const ProcessFamily family({CPMap::dbl(random::unitary(2, rng)), CPMap::dbl(random::unitary(2, rng))});
    const PhaseVector phase({0.0, 0.4});
    CHECK(channel_distance(coherent_control_cp(family, phase).g, coherent_control_pure(family, phase).g) <= 1e-12);
  }
  SUBCASE("identity and dephasing") {
    const ProcessFamily family({CPMap::identity(SystemDims({2})), z_dephasing()});
    const auto cp = coherent_control_cp(family, PhaseVector::zeros(2));
    CHECK(verify_eq1(cp));
    CHECK(eq2_deviation(cp) <= 1e-9);
    // Marginals through the sharp preparations are the two channels.
    for (std::size_t x = 0; x < 2; ++x) {
      const ComplexMatrix rho = testing::projector(2, x);
      CHECK(channel_distance(with_control_state(cp, rho), family.members[x]) <= 1e-12);
    }
  }
  SUBCASE("random families") {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + trial % 3, din = 1 + trial % 3, dout = 1 + (trial / 3) % 3;
      const ProcessFamily family(testing::random_channels(n, din, dout, rng));
      std::vector<double> ph;
      for (std::size_t x = 0; x < n; ++x) ph.push_back(random::phase(rng));
      const auto cp = coherent_control_cp(family, PhaseVector(ph));
      CHECK(verify_eq1(cp));
      CHECK(eq2_deviation(cp) <= 1e-9);
    }
  }
  SUBCASE("a purification that does not match is rejected") {
    const ProcessFamily family({CPMap::identity(SystemDims({2})), z_dephasing()});
    auto purifs = shared_purifications(family);
    std::swap(purifs[0], purifs[1]);
    CHECK_THROWS_AS(coherent_control_cp(family, PhaseVector::zeros(2), purifs), PreconditionError);
  }
}

TEST_CASE("corrupted G fails the controlled-process equations") {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  auto cp = coherent_control_pure(ProcessFamily({CPMap::dbl(id), CPMap::dbl(hadamard())}), PhaseVector::zeros(2));
  CHECK(verify_eq1(cp));
  cp.g = compose(CPMap::dbl(kron(pauli_x(), id)), cp.g);
  CHECK_FALSE(verify_eq1(cp));
  CHECK(eq1_deviation(cp) >= 1e-2);
}

TEST_CASE("extract_phase") {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ProcessFamily ix({CPMap::dbl(id), CPMap::dbl(pauli_x())});
  SUBCASE("known phase") {
    const auto cp = coherent_control_pure(ix, PhaseVector({0.0, 1.234}));
    const auto got = extract_phase(cp.g, ix);
    CHECK(got[0] == 0.0);
    CHECK(std::abs(got[1] - 1.234) <= 1e-9);
  }
  SUBCASE("controlled-X has zero relative phase") {
    const ComplexMatrix cnot = kron(testing::projector(2, 0), id) + kron(testing::projector(2, 1), pauli_x());
    const auto got = extract_phase(CPMap::dbl(cnot), ix);
    CHECK(phase_gap(got[1], 0.0) <= 1e-9);
  }
  SUBCASE("random round trips") {
    random::Rng rng(24);
    double worst_phase = 0.0, worst_choi = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 1 + trial % 3, din = 1 + trial % 2, dout = din + (trial / 2) % 2;
      const ProcessFamily family(testing::random_isometries(n, din, dout, rng));
      std::vector<double> ph;
      for (std::size_t x = 0; x < n; ++x) ph.push_back(random::phase(rng));
      const PhaseVector phase(ph);
      const auto cp = coherent_control_pure(family, phase);
      const auto got = extract_phase(cp.g, family);
      for (std::size_t x = 0; x < n; ++x)
        worst_phase = std::max(worst_phase, phase_gap(got[x], phase[x] - phase[0]));
      worst_choi = std::max(worst_choi, channel_distance(coherent_control_pure(family, got).g, cp.g));
    }
    CHECK(worst_phase <= 1e-8);
    CHECK(worst_choi <= 1e-8);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(extract_phase(tensor(classical_identity(2), CPMap::identity(SystemDims({2}))), ix),
                    PreconditionError);
    const ProcessFamily iz({CPMap::dbl(id), CPMap::dbl(pauli_z())});
    const auto cp = coherent_control_pure(ix, PhaseVector::zeros(2));
    CHECK_THROWS_AS(extract_phase(cp.g, iz), PreconditionError);
  }
}

TEST_CASE("purification dependence witness") {
  const auto w = nogo_witness();
  MESSAGE("witness distance = " << w.distance);
  CHECK(w.distance > 0.05);
  CHECK(w.equal_u_distance <= 1e-9);
  CHECK(w.canonical[0].env_dim == 2);

  SUBCASE("unitary families have trivial environments") {
    random::Rng rng(25);
    const ProcessFamily family({CPMap::dbl(random::unitary(2, rng)), CPMap::dbl(random::unitary(2, rng))});
    const auto purifs = shared_purifications(family);
    REQUIRE(purifs[0].env_dim == 1);
    const ComplexMatrix one = ComplexMatrix::identity(1);
    const std::vector<Purification> rotated{rotate_environment(purifs[0], one), rotate_environment(purifs[1], one)};
    const PhaseVector zero = PhaseVector::zeros(2);
    CHECK(channel_distance(coherent_control_cp(family, zero, purifs).g, coherent_control_cp(family, zero, rotated).g) <=
          1e-9);
    // A 1x1 environment "unitary" is a phase; differing phases shift the relative phase instead.
    const std::vector<Purification> phased{purifs[0], rotate_environment(purifs[1], ComplexMatrix{{std::polar(1.0, 0.3)}})};
    CHECK(channel_distance(coherent_control_cp(family, zero, phased).g,
                           coherent_control_cp(family, PhaseVector({0.0, 0.3}), purifs).g) <= 1e-12);
  }
}

TEST_CASE("switch construction") {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto sw = unitary_switch(std::vector<ComplexMatrix>(n, id));
    std::size_t fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= k;
    CHECK(enumerate_compatible(sw.scenario).size() == fact);
  }
  const std::vector<QuantumInstrument> bad{QuantumInstrument::from_map(CPMap::identity(SystemDims({3})))};
  CHECK_THROWS_AS(build_switch(1, 2, bad), DimensionError);
  CHECK_THROWS_AS(build_switch(2, 2, {QuantumInstrument::from_map(CPMap::dbl(id))}), PreconditionError);
}

TEST_CASE("coherent control of the two-party switch") {
  random::Rng rng(26);
  const ComplexMatrix u1 = random::unitary(2, rng), u2 = random::unitary(2, rng);
  const auto sw = unitary_switch({u1, u2});
  for (double phi : {0.0, 0.9}) {
    const auto dc = coherent_control_of_diagram(sw.scenario, sw.diagram, PhaseVector({0.0, phi}));
    REQUIRE(dc.branches.size() == 1);
    CHECK(dc.control.size() == 2);
    CHECK(channel_distance(dc.branch(0, 0).g, CPMap::dbl(switch_oracle(u1, u2, phi))) <= 1e-12);
    CHECK(verify_eq1(dc.branch(0, 0)));
    // Feeding a definite order and discarding the control recovers that order.
    for (std::size_t t = 0; t < 2; ++t) {
      const CPMap fed = with_control_state(dc.branch(0, 0), testing::projector(2, t));
      CHECK(channel_distance(fed, compile(sw.scenario, sw.diagram, dc.orders[t]).instrument.branch(0, 0)) <= 1e-12);
    }
  }
}

TEST_CASE("diagram control is independent of the purification") {
  random::Rng rng(27);
  const auto two = ClassicalSet::range(2);
  struct Case {
    SwitchDiagram sw;
  };
  std::vector<SwitchDiagram> cases;
  cases.push_back(build_switch(2, 2,
                               {random::instrument(ClassicalSet::singleton(), two, 2, 2, 2, rng),
                                random::instrument(two, ClassicalSet::singleton(), 2, 2, 3, rng)}));
  cases.push_back(build_switch(3, 2,
                               {random::instrument(ClassicalSet::singleton(), two, 2, 2, 1, rng),
                                random::instrument(ClassicalSet::singleton(), ClassicalSet::singleton(), 2, 2, 2, rng),
                                random::instrument(two, ClassicalSet::singleton(), 2, 2, 2, rng)}));
  for (const auto& sw : cases) {
    const std::size_t n = enumerate_compatible(sw.scenario).size();
    std::vector<double> ph;
    for (std::size_t t = 0; t < n; ++t) ph.push_back(random::phase(rng));
    const PhaseVector phase(ph);
    const auto base = coherent_control_of_diagram(sw.scenario, sw.diagram, phase);
    for (const auto& b : base.branches) CHECK(verify_eq1(b));
    const auto pd = purify_diagram(sw.scenario, sw.diagram);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      EnvironmentUnitaries rot;
      for (const auto& [ev, env] : pd.env_dims)
        for (std::size_t b = 0; b < sw.diagram.proc.at(ev).branches().size(); ++b) rot[ev].push_back(random::unitary(env, rng));
      ControlOptions options;
      options.purified = purify_diagram(sw.scenario, sw.diagram, rot);
      const auto other = coherent_control_of_diagram(sw.scenario, sw.diagram, phase, options);
      for (std::size_t b = 0; b < base.branches.size(); ++b)
        worst = std::max(worst, channel_distance(base.branches[b].g, other.branches[b].g));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("superposition of causal orders") {
  random::Rng rng(28);
  const ComplexMatrix id = ComplexMatrix::identity(2);
  SUBCASE("X and Z anticommute, so + never fires") {
    const auto sw = unitary_switch({pauli_x(), pauli_z()});
    const auto s = superpose(sw.scenario, sw.diagram, PhaseVector::zeros(2));
    CHECK(s.measurement.outcomes.labels() == std::vector<std::string>{"+", "-"});
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix psi = random::pure_state(2, rng);
      const ComplexMatrix rho = psi * psi.adjoint();
      CHECK(std::abs(probability(s.branch(0, 0, 0), rho)) <= 1e-9);
      CHECK(std::abs(probability(s.branch(0, 0, 1), rho) - 1.0) <= 1e-9);
    }
  }
  SUBCASE("identical parties commute, so - never fires") {
    const auto sw = unitary_switch({id, id});
    const auto s = superpose(sw.scenario, sw.diagram, PhaseVector::zeros(2));
    const ComplexMatrix psi = random::pure_state(2, rng);
    CHECK(std::abs(probability(s.branch(0, 0, 1), psi * psi.adjoint())) <= 1e-9);
  }
  SUBCASE("branches match the dense switch formula") {
    const ComplexMatrix u1 = random::unitary(2, rng), u2 = random::unitary(2, rng);
    const double phi = 0.77;
    const auto sw = unitary_switch({u1, u2});
    const auto s = superpose(sw.scenario, sw.diagram, PhaseVector({0.0, phi}));
    const ComplexMatrix a = u2 * u1, b = u1 * u2 * std::polar(1.0, phi);
    CHECK(channel_distance(s.branch(0, 0, 0), CPMap::dbl((a + b) * Complex(0.5))) <= 1e-12);
    CHECK(channel_distance(s.branch(0, 0, 1), CPMap::dbl((a - b) * Complex(0.5))) <= 1e-12);
  }
  SUBCASE("one party degenerates to its instrument") {
    const auto inst = random::instrument(ClassicalSet::singleton(), ClassicalSet::range(2), 2, 2, 2, rng);
    const auto sw = build_switch(1, 2, {inst});
    const auto s = superpose(sw.scenario, sw.diagram, PhaseVector::zeros(1));
    REQUIRE(s.measurement.outcomes.size() == 1);
    for (std::size_t o = 0; o < 2; ++o) CHECK(channel_distance(s.branch(0, o, 0), inst.branch(0, o)) <= 1e-12);
  }
  SUBCASE("random instruments give a normalised instrument") {
    const auto two = ClassicalSet::range(2);
    const auto sw = build_switch(3, 2,
                                 {random::instrument(two, two, 2, 2, 1, rng),
                                  random::instrument(ClassicalSet::singleton(), two, 2, 2, 2, rng),
                                  random::instrument(ClassicalSet::singleton(), ClassicalSet::singleton(), 2, 2, 2, rng)});
    const auto s = superpose(sw.scenario, sw.diagram, PhaseVector::zeros(6));
    CHECK(s.measurement.outcomes.size() == 6);
    CHECK(s.instrument.normalisation_deviation() <= 1e-9);
  }
  SUBCASE("custom measurement bases") {
    const auto sw = unitary_switch({pauli_x(), pauli_z()});
    const ComplexMatrix y_basis = ComplexMatrix{{1, 1}, {Complex(0, 1), Complex(0, -1)}} * Complex(1.0 / std::sqrt(2.0));
    const auto s = superpose(sw.scenario, sw.diagram, PhaseVector::zeros(2), custom_basis(y_basis));
    CHECK(s.instrument.normalisation_deviation() <= 1e-9);
    CHECK_THROWS_AS(custom_basis(ComplexMatrix::identity(2)), PreconditionError);
    CHECK_THROWS_AS(custom_basis(ComplexMatrix{{1, 1}, {1, 1}} * Complex(1.0 / std::sqrt(2.0))), PreconditionError);
    CHECK_THROWS_AS(superpose(sw.scenario, sw.diagram, PhaseVector::zeros(2), fourier_basis(3)), PreconditionError);
  }
}

TEST_CASE("discarding the control") {
  random::Rng rng(29);
  const ComplexMatrix u1 = random::unitary(2, rng), u2 = random::unitary(2, rng);
  const auto sw = unitary_switch({u1, u2});
  const auto dc = coherent_control_of_diagram(sw.scenario, sw.diagram, PhaseVector::zeros(2));
  const auto& cp = dc.branch(0, 0);
  CHECK(channel_distance(discard_control_mixture(cp, {1.0, 0.0}), CPMap::dbl(u2 * u1)) <= 1e-12);
  const CPMap uniform = discard_control_mixture(cp, {0.5, 0.5});
  CHECK(channel_distance(uniform, sum(scale(CPMap::dbl(u2 * u1), 0.5), scale(CPMap::dbl(u1 * u2), 0.5))) <= 1e-12);
  const std::vector<Complex> w{0.3, 0.7};
  CHECK(channel_distance(discard_control_mixture(cp, {0.3, 0.7}), with_control_state(cp, ComplexMatrix::diagonal(w))) <=
        1e-9);
  // Coherences in the control state do not survive discarding it.
  ComplexMatrix plus(2, 2, {0.5, 0.5, 0.5, 0.5});
  CHECK(channel_distance(with_control_state(cp, plus), uniform) <= 1e-9);
  CHECK_THROWS_AS(discard_control_mixture(cp, {0.5, 0.6}), PreconditionError);
  CHECK_THROWS_AS(discard_control_mixture(cp, {1.5, -0.5}), PreconditionError);
  CHECK_THROWS_AS(discard_control_mixture(cp, {1.0}), PreconditionError);
}

}  // TEST_SUITE
