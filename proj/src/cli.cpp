#include "icsem/cli.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "icsem/errors.hpp"
#include "icsem/random.hpp"

namespace icsem::cli {

namespace {

constexpr double kEq1Tol = 1e-8;
constexpr double kNoSignallingTol = 1e-9;
constexpr double kPhaseTol = 1e-8;
constexpr double kWitnessMin = 0.05;
constexpr double kEqualUTol = 1e-9;
constexpr double kInvarianceTol = 1e-8;
constexpr double kNormTol = 1e-9;

struct Inputs {
  std::vector<std::string> raw;

  Json load(const std::string& path) {
    std::string bytes;
    Json j = io::read_document(path, &bytes);
    raw.push_back(std::move(bytes));
    return j;
  }

  std::string digest() const {
    if (raw.size() == 1) return sha256_hex(raw.front());
    std::string joined;
    for (const std::string& r : raw) joined += sha256_hex(r) + "\n";
    return sha256_hex(joined);
  }
};

Json violation(const std::string& subject, const std::string& message, std::optional<double> deviation = {}) {
  Json v = {{"subject", subject}, {"message", message}};
  if (deviation) v["deviation"] = *deviation;
  return v;
}

Report finish(const std::string& command, const Inputs& inputs, Json results, Json tolerances, Json violations) {
  Report r;
  r.exit_code = violations.empty() ? kOk : kVerificationFailed;
  r.json = {{"command", command},
            {"inputs_digest", inputs.digest()},
            {"results", std::move(results)},
            {"tolerances_used", std::move(tolerances)},
            {"violations", std::move(violations)}};
  return r;
}

bool locally_normalised(const DiagramAssignment& delta) {
  for (const auto& [ev, inst] : delta.proc)
    if (!inst.is_normalised(kNormTol)) return false;
  return true;
}

PhaseVector load_phases(Inputs& inputs, const std::string& spec, const std::vector<CompatibleScenario>& orders) {
  if (spec == "zeros") return PhaseVector::zeros(orders.size());
  return io::phases_from_json(inputs.load(spec), orders);
}

Json choi_rank_entry(const CPMap& f) {
  return f.kraus().empty() ? Json(0) : Json(numerical_rank(f.choi()));
}

// Family of random channels (or isometries when `pure`), |X| <= 3, dims <= 3.
ProcessFamily random_family(random::Rng& rng, bool pure) {
  std::uniform_int_distribution<std::size_t> small(1, 3);
  const std::size_t n = small(rng), din = small(rng);
  std::vector<CPMap> members;
  if (pure) {
    const std::size_t dout = std::uniform_int_distribution<std::size_t>(din, 3)(rng);
    for (std::size_t x = 0; x < n; ++x) members.push_back(CPMap::dbl(random::isometry(dout, din, rng)));
  } else {
    const std::size_t dout = small(rng);
    for (std::size_t x = 0; x < n; ++x) members.push_back(random::channel(din, dout, small(rng), rng));
  }
  return ProcessFamily(std::move(members));
}

PhaseVector random_phases(std::size_t n, random::Rng& rng) {
  std::vector<double> p;
  for (std::size_t k = 0; k < n; ++k) p.push_back(random::phase(rng));
  return PhaseVector(std::move(p));
}

// Per classical input: family and G summed over outputs.
std::vector<ControlledProcess> input_marginals(const DiagramControl& dc) {
  std::vector<ControlledProcess> out;
  for (std::size_t i = 0; i < dc.inputs.size(); ++i) {
    const ControlledProcess& first = dc.branch(i, 0);
    std::vector<CPMap> members = first.family.members;
    CPMap g = first.g;
    for (std::size_t o = 1; o < dc.outputs.size(); ++o) {
      const ControlledProcess& cp = dc.branch(i, o);
      for (std::size_t x = 0; x < members.size(); ++x) members[x] = sum(members[x], cp.family.members[x]);
      g = sum(g, cp.g);
    }
    out.push_back({first.control_dim, ProcessFamily(dc.control, std::move(members)), std::move(g), first.spo});
  }
  return out;
}

struct SuiteResult {
  std::string name;
  bool pass = true;
  bool skipped = false;
  double max_deviation = 0.0;
  double threshold = 0.0;
  Json details = Json::object();
  std::string note;

  Json to_json() const {
    Json j = {{"suite", name}, {"pass", pass}, {"skipped", skipped}, {"max_deviation", max_deviation},
              {"threshold", threshold}, {"details", details}};
    if (!note.empty()) j["note"] = note;
    return j;
  }
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[k]);
  return hex.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ICSEM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("ICSEM_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 42;
}

// ---------------------------------------------------------------------------
// Commands

Report cmd_enumerate(const std::string& scenario_file, const CommonOptions& common) {
  Inputs inputs;
  const auto phi = io::scenario_from_json(inputs.load(scenario_file));
  const auto orders = enumerate_compatible(phi, {.cap = common.cap, .parallel = true});
  Json scenarios = Json::array();
  for (const auto& c : orders) scenarios.push_back(io::to_json(c));
  Json results = {{"count", orders.size()}, {"matching_bound", matching_bound(phi)}, {"scenarios", std::move(scenarios)}};
  return finish("enumerate", inputs, std::move(results), {{"cap", common.cap}}, Json::array());
}

Report cmd_compile(const std::string& diagram_file, const std::optional<std::string>& order,
                   const CommonOptions& common) {
  Inputs inputs;
  const auto doc = io::diagram_from_json(inputs.load(diagram_file));
  check_typing(doc.scenario, doc.diagram);
  const auto orders = enumerate_compatible(doc.scenario, {.cap = common.cap, .parallel = true});
  std::vector<const CompatibleScenario*> chosen;
  for (const auto& c : orders)
    if (!order || c.canonical_key == *order) chosen.push_back(&c);
  if (order && chosen.empty()) throw PreconditionError("unknown canonical key '" + *order + "'");

  const bool normalised_inputs = locally_normalised(doc.diagram);
  Json compiled = Json::array(), violations = Json::array();
  for (const CompatibleScenario* c : chosen) {
    const auto proc = compile(doc.scenario, doc.diagram, *c);
    const QuantumInstrument& inst = proc.instrument;
    Json branches = Json::array();
    for (std::size_t i = 0; i < inst.inputs().size(); ++i)
      for (std::size_t o = 0; o < inst.outputs().size(); ++o) {
        const CPMap& b = inst.branch(i, o);
        branches.push_back({{"input", inst.inputs()[i]},
                            {"output", inst.outputs()[o]},
                            {"choi", io::to_json(b.choi())},
                            {"choi_rank", choi_rank_entry(b)}});
      }
    const double dev = inst.normalisation_deviation();
    compiled.push_back({{"canonical_key", c->canonical_key},
                        {"event_order", topological_order(c->scenario.graph)},
                        {"inputs", inst.inputs().labels()},
                        {"outputs", inst.outputs().labels()},
                        {"dim_in", inst.dim_in().factors()},
                        {"dim_out", inst.dim_out().factors()},
                        {"branches", std::move(branches)},
                        {"normalisation_deviation", dev},
                        {"normalised", dev <= kNormTol}});
    if (normalised_inputs && dev > kNormTol) {
      violations.push_back(violation(c->canonical_key, "compiled process is not normalised", dev));
    }
  }
  Json results = {{"count", chosen.size()}, {"local_instruments_normalised", normalised_inputs}, {"orders", std::move(compiled)}};
  return finish("compile", inputs, std::move(results), {{"cap", common.cap}, {"normalisation", kNormTol}},
                std::move(violations));
}

Report cmd_superpose(const std::string& diagram_file, const SuperposeOptions& options, const CommonOptions& common) {
  Inputs inputs;
  const auto doc = io::diagram_from_json(inputs.load(diagram_file));
  check_typing(doc.scenario, doc.diagram);
  const auto orders = enumerate_compatible(doc.scenario, {.cap = common.cap, .parallel = true});
  if (orders.empty()) throw PreconditionError("the scenario has no compatible definite scenarios");
  const PhaseVector phase = load_phases(inputs, options.phases, orders);
  std::optional<MeasurementBasis> basis;
  if (options.measure != "fourier") basis = custom_basis(io::matrix_from_json(inputs.load(options.measure), "measure"));

  std::optional<ComplexMatrix> rho;
  if (options.state) {
    if (*options.state == "zero") {
      std::size_t d = 1;
      for (const std::string& l : doc.scenario.boundary_in) d *= doc.diagram.dim(l);
      rho = ComplexMatrix(d, d);
      (*rho)(0, 0) = 1.0;
    } else {
      const ComplexMatrix m = io::matrix_from_json(inputs.load(*options.state), "state");
      rho = m.cols() == 1 ? m * m.adjoint() : m;
      if (std::abs(rho->trace() - Complex(1.0)) > 1e-9) throw PreconditionError("input state must have unit trace");
    }
  }

  ControlOptions copt;
  copt.cap = common.cap;
  const auto s = superpose(doc.scenario, doc.diagram, phase, basis, copt);
  const auto& dc = s.control;
  const auto& outcomes = s.measurement.outcomes;
  if (rho && rho->rows() != dc.dim_in.total()) throw DimensionError("input state has the wrong dimension");

  Json branches = Json::array(), probabilities = Json::array(), marginals = Json::object(), sums = Json::object();
  Json violations = Json::array();
  for (std::size_t i = 0; i < dc.inputs.size(); ++i) {
    Json per_outcome = Json::object();
    double total = 0.0;
    for (std::size_t o = 0; o < dc.outputs.size(); ++o)
      for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const CPMap& b = s.branch(i, o, k);
        branches.push_back({{"input", dc.inputs[i]}, {"output", dc.outputs[o]}, {"outcome", outcomes[k]},
                            {"choi", io::to_json(b.choi())}});
        if (rho) {
          const double p = b.kraus().empty() ? 0.0 : b.apply(*rho).trace().real();
          probabilities.push_back({{"input", dc.inputs[i]}, {"output", dc.outputs[o]}, {"outcome", outcomes[k]}, {"probability", p}});
          per_outcome[outcomes[k]] = per_outcome.value(outcomes[k], 0.0) + p;
          total += p;
        }
      }
    if (rho) {
      marginals[dc.inputs[i]] = std::move(per_outcome);
      sums[dc.inputs[i]] = total;
    }
  }
  const double dev = s.instrument.normalisation_deviation();
  const bool normalised_inputs = locally_normalised(doc.diagram);
  if (normalised_inputs && dev > kNormTol) violations.push_back(violation("instrument", "branch sum is not trace preserving", dev));

  Json keys = Json::array();
  for (const auto& c : dc.orders) keys.push_back(c.canonical_key);
  Json results = {{"orders", std::move(keys)},
                  {"phases", dc.phase.phases},
                  {"measurement", options.measure == "fourier" ? Json("fourier") : Json("custom")},
                  {"outcomes", outcomes.labels()},
                  {"branches", std::move(branches)},
                  {"normalisation_deviation", dev},
                  {"local_instruments_normalised", normalised_inputs}};
  if (rho) {
    results["probabilities"] = std::move(probabilities);
    results["outcome_probabilities"] = std::move(marginals);
    results["probability_sums"] = std::move(sums);
  }
  return finish("superpose", inputs, std::move(results),
                {{"cap", common.cap}, {"normalisation", kNormTol}, {"unbiasedness", 1e-9}}, std::move(violations));
}

Report cmd_control(const std::string& diagram_file, const std::string& phases, const CommonOptions& common) {
  Inputs inputs;
  const auto doc = io::diagram_from_json(inputs.load(diagram_file));
  check_typing(doc.scenario, doc.diagram);
  const auto orders = enumerate_compatible(doc.scenario, {.cap = common.cap, .parallel = true});
  if (orders.empty()) throw PreconditionError("the scenario has no compatible definite scenarios");
  const PhaseVector phase = load_phases(inputs, phases, orders);
  ControlOptions copt;
  copt.cap = common.cap;
  const auto dc = coherent_control_of_diagram(doc.scenario, doc.diagram, phase, copt);

  Json branches = Json::array(), violations = Json::array();
  for (std::size_t i = 0; i < dc.inputs.size(); ++i)
    for (std::size_t o = 0; o < dc.outputs.size(); ++o) {
      const ControlledProcess& cp = dc.branch(i, o);
      const double dev = eq1_deviation(cp);
      branches.push_back({{"input", dc.inputs[i]}, {"output", dc.outputs[o]}, {"choi", io::to_json(cp.g.choi())},
                          {"eq1_deviation", dev}});
      if (dev > kEq1Tol) violations.push_back(violation(dc.inputs[i] + "|" + dc.outputs[o], "controlled-process equations fail", dev));
    }
  Json nosig = Json::object();
  if (locally_normalised(doc.diagram)) {
    const auto marginals = input_marginals(dc);
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      const double dev = eq2_deviation(marginals[i]);
      nosig[dc.inputs[i]] = dev;
      if (dev > kNoSignallingTol) violations.push_back(violation(dc.inputs[i], "control marginal signals", dev));
    }
  }
  Json keys = Json::array();
  for (const auto& c : dc.orders) keys.push_back(c.canonical_key);
  Json results = {{"control_basis", std::move(keys)},
                  {"phases", dc.phase.phases},
                  {"dim_in", (SystemDims({dc.control.size()}) * dc.dim_in).factors()},
                  {"dim_out", (SystemDims({dc.control.size()}) * dc.dim_out).factors()},
                  {"branches", std::move(branches)},
                  {"no_signalling_deviation", std::move(nosig)}};
  return finish("control", inputs, std::move(results),
                {{"cap", common.cap}, {"eq1", kEq1Tol}, {"no_signalling", kNoSignallingTol}}, std::move(violations));
}

Report cmd_verify(const std::string& file, const VerifyOptions& options, const CommonOptions& common) {
  static const std::vector<std::string> kSuites{"eq1", "nosig", "prop1", "prop2", "prop3"};
  if (options.suite != "all" && std::find(kSuites.begin(), kSuites.end(), options.suite) == kSuites.end()) {
    throw ParseError("unknown suite '" + options.suite + "'");
  }
  auto wanted = [&](const std::string& s) { return options.suite == "all" || options.suite == s; };

  Inputs inputs;
  const Json doc_json = inputs.load(file);
  std::optional<io::DiagramDocument> diagram;
  std::optional<ControlledProcess> fixture;
  std::optional<DiagramControl> dc;
  if (doc_json.is_object() && doc_json.contains("g")) {
    fixture = io::controlled_from_json(doc_json).process;
  } else {
    diagram = io::diagram_from_json(doc_json);
    check_typing(diagram->scenario, diagram->diagram);
    ControlOptions copt;
    copt.cap = common.cap;
    dc = coherent_control_of_diagram(diagram->scenario, diagram->diagram,
                                     PhaseVector::zeros(enumerate_compatible(diagram->scenario, {.cap = common.cap}).size()),
                                     copt);
  }
  random::Rng rng(options.seed);
  std::vector<SuiteResult> suites;

  if (wanted("eq1")) {
    SuiteResult r;
    r.name = "eq1";
    r.threshold = kEq1Tol;
    double input_dev = 0.0;
    if (fixture) {
      input_dev = eq1_deviation(*fixture);
    } else {
      for (const auto& b : dc->branches) input_dev = std::max(input_dev, eq1_deviation(b));
    }
    double random_dev = 0.0;
    for (std::size_t t = 0; t < options.trials; ++t) {
      const ProcessFamily mixed = random_family(rng, false);
      const ProcessFamily pure = random_family(rng, true);
      random_dev = std::max(random_dev, eq1_deviation(classical_control(mixed)));
      random_dev = std::max(random_dev, eq1_deviation(coherent_control_cp(mixed, random_phases(mixed.size(), rng))));
      random_dev = std::max(random_dev, eq1_deviation(coherent_control_pure(pure, random_phases(pure.size(), rng))));
    }
    r.max_deviation = std::max(input_dev, random_dev);
    r.details = {{"input_deviation", input_dev}, {"random_deviation", random_dev}};
    r.pass = r.max_deviation <= r.threshold;
    suites.push_back(std::move(r));
  }

  if (wanted("nosig")) {
    SuiteResult r;
    r.name = "nosig";
    r.threshold = kNoSignallingTol;
    std::optional<double> input_dev;
    if (fixture) {
      try {
        input_dev = eq2_deviation(*fixture);
      } catch (const PreconditionError&) {
        r.note = "input controlled process is not normalised; only random families checked";
      }
    } else if (locally_normalised(diagram->diagram)) {
      double d = 0.0;
      for (const auto& m : input_marginals(*dc)) d = std::max(d, eq2_deviation(m));
      input_dev = d;
    } else {
      r.note = "local instruments are not normalised; only random families checked";
    }
    double random_dev = 0.0;
    for (std::size_t t = 0; t < options.trials; ++t) {
      const ProcessFamily mixed = random_family(rng, false);
      random_dev = std::max(random_dev, eq2_deviation(classical_control(mixed)));
      random_dev = std::max(random_dev, eq2_deviation(coherent_control_cp(mixed, random_phases(mixed.size(), rng))));
    }
    r.max_deviation = std::max(input_dev.value_or(0.0), random_dev);
    r.details = {{"random_deviation", random_dev}};
    if (input_dev) r.details["input_deviation"] = *input_dev;
    r.pass = r.max_deviation <= r.threshold;
    suites.push_back(std::move(r));
  }

  if (wanted("prop1")) {
    SuiteResult r;
    r.name = "prop1";
    r.threshold = kPhaseTol;
    double phase_err = 0.0, choi_err = 0.0;
    for (std::size_t t = 0; t < options.trials; ++t) {
      const ProcessFamily pure = random_family(rng, true);
      const PhaseVector phase = random_phases(pure.size(), rng);
      const auto cp = coherent_control_pure(pure, phase);
      const PhaseVector got = extract_phase(cp.g, pure);
      for (std::size_t x = 0; x < pure.size(); ++x) {
        const double gap = std::abs(std::remainder(got[x] - (phase[x] - phase[0]), 2.0 * M_PI));
        phase_err = std::max(phase_err, gap);
      }
      choi_err = std::max(choi_err, channel_distance(coherent_control_pure(pure, got).g, cp.g));
    }
    r.max_deviation = std::max(phase_err, choi_err);
    r.details = {{"phase_error", phase_err}, {"reassembly_distance", choi_err}};
    r.pass = r.max_deviation <= r.threshold;
    suites.push_back(std::move(r));
  }

  if (wanted("prop2")) {
    SuiteResult r;
    r.name = "prop2";
    r.threshold = kEqualUTol;
    const NogoWitness w = nogo_witness();
    r.max_deviation = w.equal_u_distance;
    r.details = {{"witness_distance", w.distance},
                 {"witness_minimum", kWitnessMin},
                 {"equal_u_distance", w.equal_u_distance},
                 {"family", "identity, Z-dephasing"},
                 {"environment_unitary", "Pauli X on the environment of member 1"}};
    r.pass = w.distance > kWitnessMin && w.equal_u_distance <= kEqualUTol;
    suites.push_back(std::move(r));
  }

  if (wanted("prop3")) {
    SuiteResult r;
    r.name = "prop3";
    r.threshold = kInvarianceTol;
    if (!diagram) {
      r.skipped = true;
      r.note = "needs a diagram file";
    } else {
      const auto pd = purify_diagram(diagram->scenario, diagram->diagram);
      double worst = 0.0;
      for (std::size_t t = 0; t < options.trials; ++t) {
        EnvironmentUnitaries rot;
        for (const auto& [ev, env] : pd.env_dims) {
          const std::size_t count = diagram->diagram.proc.at(ev).branches().size();
          for (std::size_t b = 0; b < count; ++b) rot[ev].push_back(random::unitary(env, rng));
        }
        ControlOptions copt;
        copt.cap = common.cap;
        copt.purified = purify_diagram(diagram->scenario, diagram->diagram, rot);
        const auto other = coherent_control_of_diagram(diagram->scenario, diagram->diagram, dc->phase, copt);
        for (std::size_t b = 0; b < dc->branches.size(); ++b)
          worst = std::max(worst, channel_distance(dc->branches[b].g, other.branches[b].g));
      }
      r.max_deviation = worst;
      r.details = {{"environment_dims", pd.env_dims}};
      r.pass = worst <= r.threshold;
    }
    suites.push_back(std::move(r));
  }

  Json results = Json::array(), violations = Json::array();
  for (const SuiteResult& s : suites) {
    results.push_back(s.to_json());
    if (!s.pass) violations.push_back(violation(s.name, "suite failed", s.max_deviation));
  }
  Json tolerances = {{"eq1", kEq1Tol},          {"no_signalling", kNoSignallingTol}, {"prop1", kPhaseTol},
                     {"prop2_witness_min", kWitnessMin}, {"prop2_equal_u", kEqualUTol},       {"prop3", kInvarianceTol},
                     {"cap", common.cap}};
  Json wrapped = {{"suites", std::move(results)}, {"seed", options.seed}, {"trials", options.trials}};
  return finish("verify", inputs, std::move(wrapped), std::move(tolerances), std::move(violations));
}

// ---------------------------------------------------------------------------
// Command line

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"icsem: causal scenarios, diagram compilation and coherent control of causal orders", "icsem"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  CommonOptions common;
  app.add_flag("--pretty", pretty, "Indent the JSON report");
  app.add_option("--cap", common.cap, "Refuse enumeration above this many candidate matchings")->check(CLI::PositiveNumber);

  std::string file;
  std::optional<std::string> order;
  SuperposeOptions sup;
  std::string control_phases = "zeros";
  VerifyOptions ver;
  std::optional<std::uint64_t> seed;

  auto* enumerate = app.add_subcommand("enumerate", "List the definite scenarios compatible with a scenario file");
  enumerate->add_option("scenario", file, "Scenario JSON")->required();

  auto* compile_cmd = app.add_subcommand("compile", "Compile a diagram over one or all compatible scenarios");
  compile_cmd->add_option("diagram", file, "Diagram JSON")->required();
  compile_cmd->add_option("--order", order, "Canonical key of the scenario to compile");

  auto* superpose_cmd = app.add_subcommand("superpose", "Superposition of causal orders instrument");
  superpose_cmd->add_option("diagram", file, "Diagram JSON")->required();
  superpose_cmd->add_option("--phases", sup.phases, "Phase file or 'zeros'");
  superpose_cmd->add_option("--measure", sup.measure, "'fourier' or a matrix file with the basis as columns");
  superpose_cmd->add_option("--state", sup.state, "'zero' or a matrix file; adds a probability table");

  auto* control_cmd = app.add_subcommand("control", "Coherent control of a diagram over its causal orders");
  control_cmd->add_option("diagram", file, "Diagram JSON")->required();
  control_cmd->add_option("--phases", control_phases, "Phase file or 'zeros'");

  auto* verify_cmd = app.add_subcommand("verify", "Run the verification suites");
  verify_cmd->add_option("file", file, "Diagram JSON or controlled-process fixture")->required();
  verify_cmd->add_option("--suite", ver.suite, "eq1|nosig|prop1|prop2|prop3|all")
      ->check(CLI::IsMember({"eq1", "nosig", "prop1", "prop2", "prop3", "all"}));
  verify_cmd->add_option("--trials", ver.trials, "Random trials per suite");
  verify_cmd->add_option("--seed", seed, "Random seed (default: $ICSEM_SEED or 42)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "icsem: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kInputError;
  }

  try {
    Report report;
    if (*enumerate) {
      report = cmd_enumerate(file, common);
    } else if (*compile_cmd) {
      report = cmd_compile(file, order, common);
    } else if (*superpose_cmd) {
      report = cmd_superpose(file, sup, common);
    } else if (*control_cmd) {
      report = cmd_control(file, control_phases, common);
    } else {
      ver.seed = seed ? *seed : default_seed();
      report = cmd_verify(file, ver, common);
    }
    out << report.json.dump(pretty ? 2 : -1) << "\n";
    return report.exit_code;
  } catch (const std::exception& e) {
    err << "icsem: error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace icsem::cli
