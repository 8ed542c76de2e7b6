#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "icsem/cli.hpp"

using namespace icsem;
using cli::Json;

namespace {

std::string data(const std::string& name) { return std::string(ICSEM_DATA_DIR) + "/" + name; }

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "icsem");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_SUITE("cli-harness") {

TEST_CASE("sha256 of known strings") {
  CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("enumerate") {
  const auto r = run({"enumerate", data("switch3.json")});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["command"] == "enumerate");
  CHECK(j["results"]["count"] == 6);
  CHECK(j["results"]["scenarios"].size() == 6);
  CHECK(j["inputs_digest"].get<std::string>().size() == 64);
  CHECK(j["violations"].empty());

  const auto u = run({"enumerate", data("unbalanced.json")});
  REQUIRE(u.code == 0);
  CHECK(u.json()["results"]["count"] == 0);
}

TEST_CASE("cap refusal is an input error") {
  const auto r = run({"enumerate", data("switch3.json"), "--cap", "5"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("cap") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
  const auto a = run({"verify", data("switch2_instrument.json"), "--seed", "9", "--trials", "4"});
  const auto b = run({"verify", data("switch2_instrument.json"), "--seed", "9", "--trials", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run({"superpose", data("xz_switch.json"), "--state", "zero", "--pretty"});
  CHECK(c.out == run({"superpose", data("xz_switch.json"), "--state", "zero", "--pretty"}).out);
}

TEST_CASE("the seed comes from the environment when not given") {
  ::setenv("ICSEM_SEED", "9", 1);
  const auto env = run({"verify", data("switch2_instrument.json"), "--trials", "4"});
  ::unsetenv("ICSEM_SEED");
  const auto flag = run({"verify", data("switch2_instrument.json"), "--seed", "9", "--trials", "4"});
  CHECK(env.out == flag.out);
  CHECK(env.json()["results"]["seed"] == 9);
}

TEST_CASE("input errors exit 2 with a location") {
  const std::string bad = write_temp("icsem_bad.json", "{\n  \"events\": [,]\n}\n");
  const auto r = run({"enumerate", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find(":2:") != std::string::npos);
  CHECK(run({"enumerate", data("no_such_file.json")}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"verify", data("switch2.json"), "--suite", "nope"}).code == 2);
  const std::string wrong = write_temp("icsem_wrong.json", R"({"events": [{"id": "A", "inputs": "t", "outputs": []}],
    "boundary_in": [], "boundary_out": []})");
  const auto w = run({"enumerate", wrong});
  CHECK(w.code == 2);
  CHECK(w.err.find("scenario/events/0/inputs") != std::string::npos);
}

TEST_CASE("help exits 0") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("enumerate") != std::string::npos);
}

TEST_CASE("compile") {
  const auto all = run({"compile", data("switch2_instrument.json")});
  REQUIRE(all.code == 0);
  const Json j = all.json();
  REQUIRE(j["results"]["count"] == 2);
  for (const auto& o : j["results"]["orders"]) {
    CHECK(o["normalised"] == true);
    CHECK(o["branches"].size() == 2);
  }
  const std::string key = j["results"]["orders"][1]["canonical_key"];
  const auto one = run({"compile", data("switch2_instrument.json"), "--order", key});
  REQUIRE(one.code == 0);
  CHECK(one.json()["results"]["count"] == 1);
  CHECK(one.json()["results"]["orders"][0]["canonical_key"] == key);
  CHECK(run({"compile", data("switch2_instrument.json"), "--order", "t:nope"}).code == 2);

  const auto chain = run({"compile", data("unitary_chain.json")});
  REQUIRE(chain.code == 0);
  CHECK(chain.json()["results"]["orders"][0]["event_order"] == Json({"A", "B"}));
  CHECK(chain.json()["results"]["orders"][0]["branches"][0]["choi_rank"] == 1);
}

TEST_CASE("compile reports the library's Choi matrices exactly") {
  const auto doc = io::diagram_from_json(io::read_document(data("switch2_instrument.json")));
  const auto orders = enumerate_compatible(doc.scenario);
  const Json j = run({"compile", data("switch2_instrument.json")}).json();
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const auto inst = compile(doc.scenario, doc.diagram, orders[k]).instrument;
    const Json& branches = j["results"]["orders"][k]["branches"];
    for (std::size_t b = 0; b < inst.branches().size(); ++b)
      CHECK(branches[b]["choi"] == io::to_json(inst.branches()[b].choi()));
  }
}

TEST_CASE("typing errors name the event and the wire") {
  const auto r = run({"compile", data("bad_typing.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("'A1'") != std::string::npos);
  CHECK(r.err.find("t:3") != std::string::npos);
}

TEST_CASE("superpose") {
  const auto r = run({"superpose", data("xz_switch.json"), "--state", data("plus_state.json")});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["results"]["outcomes"] == Json({"+", "-"}));
  CHECK(std::abs(j["results"]["outcome_probabilities"]["0,0"]["+"].get<double>()) <= 1e-9);
  CHECK(std::abs(j["results"]["outcome_probabilities"]["0,0"]["-"].get<double>() - 1.0) <= 1e-9);

  const auto id = run({"superpose", data("identity_switch.json"), "--state", "zero"});
  CHECK(std::abs(id.json()["results"]["outcome_probabilities"]["0,0"]["-"].get<double>()) <= 1e-9);

  const auto y = run({"superpose", data("xz_switch.json"), "--measure", data("basis_y.json"), "--state", "zero"});
  REQUIRE(y.code == 0);
  CHECK(y.json()["results"]["outcomes"] == Json({"m0", "m1"}));
  CHECK(run({"superpose", data("switch3_unitaries.json"), "--measure", data("basis_y.json")}).code == 2);
}

TEST_CASE("phase files") {
  const auto orders = run({"enumerate", data("switch2.json")}).json()["results"]["scenarios"];
  const std::string key = orders[1]["canonical_key"];
  Json spec = {{"phases", {{key, 0.5}}}};
  const std::string file = write_temp("icsem_phases.json", spec.dump());
  const auto r = run({"control", data("xz_switch.json"), "--phases", file});
  REQUIRE(r.code == 0);
  CHECK(r.json()["results"]["phases"] == Json({0.0, 0.5}));
  const std::string bad = write_temp("icsem_phases_bad.json", R"({"phases": {"t:nope": 1}})");
  CHECK(run({"control", data("xz_switch.json"), "--phases", bad}).code == 2);
  // Two input files hash differently from one.
  CHECK(r.json()["inputs_digest"] != run({"control", data("xz_switch.json")}).json()["inputs_digest"]);
}

TEST_CASE("control") {
  const auto r = run({"control", data("switch2_instrument.json")});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["results"]["control_basis"].size() == 2);
  CHECK(j["results"]["dim_in"] == Json({2, 2}));
  for (const auto& b : j["results"]["branches"]) CHECK(b["eq1_deviation"].get<double>() <= 1e-8);
}

TEST_CASE("verify") {
  const auto good = run({"verify", data("switch2_instrument.json"), "--trials", "5"});
  CHECK(good.code == 0);
  CHECK(good.json()["results"]["suites"].size() == 5);

  const auto bad = run({"verify", data("corrupted_g.json"), "--trials", "2"});
  CHECK(bad.code == 1);
  const Json v = bad.json()["violations"];
  REQUIRE(!v.empty());
  CHECK(v[0]["subject"] == "eq1");
  CHECK(v[0]["deviation"].get<double>() >= 1e-2);

  const auto fixture = run({"verify", data("cnot_controlled.json"), "--suite", "prop3"});
  CHECK(fixture.code == 0);
  CHECK(fixture.json()["results"]["suites"][0]["skipped"] == true);

  const auto one = run({"verify", data("switch3_unitaries.json"), "--suite", "prop2"});
  CHECK(one.code == 0);
  CHECK(one.json()["results"]["suites"].size() == 1);
}

}  // TEST_SUITE
