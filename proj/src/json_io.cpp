#include "icsem/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "icsem/errors.hpp"

namespace icsem::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::size_t positive(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw ParseError(where + ": expected a positive integer");
  return j.get<std::size_t>();
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

std::vector<std::string> strings(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_string()) throw ParseError(where + "/" + std::to_string(k) + ": expected a string");
    out.push_back(j[k].get<std::string>());
  }
  return out;
}

ClassicalSet classical_set(const Json& j, const std::string& where) {
  try {
    return ClassicalSet(strings(j, where));
  } catch (const PreconditionError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

SystemDims dims_from_json(const Json& j, const std::string& where) {
  if (j.is_array()) {
    std::vector<std::size_t> d;
    for (std::size_t k = 0; k < j.size(); ++k) d.push_back(positive(j[k], where + "/" + std::to_string(k)));
    return SystemDims(std::move(d));
  }
  return SystemDims({positive(j, where)});
}

std::vector<ComplexMatrix> kraus_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(matrix_from_json(j[k], where + "/" + std::to_string(k)));
  return out;
}

// {"kraus": [...]} or {"unitary": m}, with optional dims.
CPMap map_from_json(const Json& j, const std::string& where) {
  std::vector<ComplexMatrix> kraus;
  if (j.contains("unitary")) {
    kraus.push_back(matrix_from_json(j["unitary"], where + "/unitary"));
  } else {
    kraus = kraus_list(field(j, "kraus", where), where + "/kraus");
  }
  if (kraus.empty() && (!j.contains("dim_in") || !j.contains("dim_out"))) {
    throw ParseError(where + ": an empty Kraus list needs dim_in and dim_out");
  }
  const SystemDims din = j.contains("dim_in") ? dims_from_json(j["dim_in"], where + "/dim_in")
                                              : SystemDims({kraus.front().cols()});
  const SystemDims dout = j.contains("dim_out") ? dims_from_json(j["dim_out"], where + "/dim_out")
                                                : SystemDims({kraus.front().rows()});
  try {
    return CPMap(din, dout, std::move(kraus));
  } catch (const DimensionError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

Json dims_to_json(const SystemDims& d) { return d.factors(); }

}  // namespace

Json parse_document(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    const auto colon = msg.rfind(": ");
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + " (byte " +
                     std::to_string(e.byte) + "): " + msg);
  }
}

Json read_document(const std::string& path, std::string* raw) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (raw) *raw = text;
  return parse_document(text, path);
}

// ---------------------------------------------------------------------------
// Matrices and maps

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  const std::size_t rows = positive(field(j, "rows", where), where + "/rows");
  const std::size_t cols = positive(field(j, "cols", where), where + "/cols");
  const Json& re = field(j, "re", where);
  if (!re.is_array() || re.size() != rows * cols) {
    throw ParseError(where + "/re: expected " + std::to_string(rows * cols) + " numbers");
  }
  const bool has_im = j.contains("im");
  if (has_im && (!j["im"].is_array() || j["im"].size() != rows * cols)) {
    throw ParseError(where + "/im: expected " + std::to_string(rows * cols) + " numbers");
  }
  std::vector<Complex> entries(rows * cols);
  for (std::size_t k = 0; k < rows * cols; ++k) {
    const double r = number(re[k], where + "/re/" + std::to_string(k));
    const double i = has_im ? number(j["im"][k], where + "/im/" + std::to_string(k)) : 0.0;
    entries[k] = Complex(r, i);
  }
  try {
    return ComplexMatrix(rows, cols, std::move(entries));
  } catch (const std::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
}

Json to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Json kraus_to_json(const CPMap& f) {
  Json ks = Json::array();
  for (const ComplexMatrix& k : f.kraus()) ks.push_back(to_json(k));
  return {{"dim_in", dims_to_json(f.dim_in())}, {"dim_out", dims_to_json(f.dim_out())}, {"kraus", std::move(ks)}};
}

QuantumInstrument instrument_from_json(const Json& j, const ClassicalSet& default_inputs,
                                       const ClassicalSet& default_outputs, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an instrument object");
  if (!j.contains("branches")) {
    const CPMap f = map_from_json(j, where);
    return QuantumInstrument::from_map(f);
  }
  const ClassicalSet inputs = j.contains("inputs") ? classical_set(j["inputs"], where + "/inputs") : default_inputs;
  const ClassicalSet outputs = j.contains("outputs") ? classical_set(j["outputs"], where + "/outputs") : default_outputs;
  const Json& branches = j["branches"];
  if (!branches.is_object()) throw ParseError(where + "/branches: expected an object keyed by \"input|output\"");

  std::map<std::pair<std::size_t, std::size_t>, std::vector<ComplexMatrix>> parsed;
  for (const auto& [key, value] : branches.items()) {
    const std::string bw = where + "/branches/" + key;
    const auto bar = key.find('|');
    if (bar == std::string::npos) throw ParseError(bw + ": branch keys have the form \"input|output\"");
    const std::string i = key.substr(0, bar), o = key.substr(bar + 1);
    if (!inputs.contains(i)) throw ParseError(bw + ": unknown classical input '" + i + "'");
    if (!outputs.contains(o)) throw ParseError(bw + ": unknown classical output '" + o + "'");
    parsed[{inputs.index_of(i), outputs.index_of(o)}] = kraus_list(value.is_object() ? field(value, "kraus", bw) : value, bw);
  }
  const ComplexMatrix* sample = nullptr;
  for (const auto& [key, ks] : parsed)
    if (!ks.empty() && !sample) sample = &ks.front();
  if (!sample && (!j.contains("dim_in") || !j.contains("dim_out"))) {
    throw ParseError(where + ": dim_in and dim_out are required when every branch is empty");
  }
  const SystemDims din = j.contains("dim_in") ? dims_from_json(j["dim_in"], where + "/dim_in") : SystemDims({sample->cols()});
  const SystemDims dout = j.contains("dim_out") ? dims_from_json(j["dim_out"], where + "/dim_out") : SystemDims({sample->rows()});
  std::map<std::pair<std::size_t, std::size_t>, CPMap> sparse;
  try {
    for (auto& [key, ks] : parsed) sparse.emplace(key, CPMap(din, dout, std::move(ks)));
    return QuantumInstrument(inputs, outputs, din, dout, sparse);
  } catch (const DimensionError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

Json to_json(const QuantumInstrument& inst) {
  Json branches = Json::object();
  for (std::size_t i = 0; i < inst.inputs().size(); ++i)
    for (std::size_t o = 0; o < inst.outputs().size(); ++o) {
      const CPMap& b = inst.branch(i, o);
      if (b.kraus().empty()) continue;
      Json ks = Json::array();
      for (const ComplexMatrix& k : b.kraus()) ks.push_back(to_json(k));
      branches[inst.inputs()[i] + "|" + inst.outputs()[o]] = std::move(ks);
    }
  return {{"inputs", inst.inputs().labels()},
          {"outputs", inst.outputs().labels()},
          {"dim_in", dims_to_json(inst.dim_in())},
          {"dim_out", dims_to_json(inst.dim_out())},
          {"branches", std::move(branches)}};
}

// ---------------------------------------------------------------------------
// Scenarios

IndefiniteCausalScenario scenario_from_json(const Json& j) {
  IndefiniteCausalScenario phi;
  const Json& events = field(j, "events", "scenario");
  if (!events.is_array()) throw ParseError("scenario/events: expected an array");
  phi.boundary_in = strings(field(j, "boundary_in", "scenario"), "scenario/boundary_in");
  phi.boundary_out = strings(field(j, "boundary_out", "scenario"), "scenario/boundary_out");

  std::vector<std::string> seen_order;
  std::set<std::string> seen;
  auto note = [&](const std::vector<std::string>& ls) {
    for (const std::string& l : ls)
      if (seen.insert(l).second) seen_order.push_back(l);
  };
  note(phi.boundary_in);
  for (std::size_t k = 0; k < events.size(); ++k) {
    const std::string where = "scenario/events/" + std::to_string(k);
    const Json& ev = events[k];
    const Json& id_json = field(ev, "id", where);
    if (!id_json.is_string()) throw ParseError(where + "/id: expected a string");
    const std::string id = id_json.get<std::string>();
    if (phi.in_labels.count(id)) throw ParseError(where + ": duplicate event id '" + id + "'");
    phi.events.push_back(id);
    phi.in_labels[id] = strings(field(ev, "inputs", where), where + "/inputs");
    phi.out_labels[id] = strings(field(ev, "outputs", where), where + "/outputs");
    note(phi.in_labels[id]);
    note(phi.out_labels[id]);
    phi.classical_inputs.emplace(id, ev.contains("classical_in") ? classical_set(ev["classical_in"], where + "/classical_in")
                                                                 : ClassicalSet::singleton());
    phi.classical_outputs.emplace(id, ev.contains("classical_out")
                                          ? classical_set(ev["classical_out"], where + "/classical_out")
                                          : ClassicalSet::singleton());
  }
  note(phi.boundary_out);
  phi.labels = j.contains("labels") ? strings(j["labels"], "scenario/labels") : seen_order;
  phi.validate();
  return phi;
}

Json to_json(const IndefiniteCausalScenario& phi) {
  Json events = Json::array();
  for (const std::string& ev : phi.events) {
    events.push_back({{"id", ev},
                      {"inputs", phi.in_labels.at(ev)},
                      {"outputs", phi.out_labels.at(ev)},
                      {"classical_in", phi.inputs_of(ev).labels()},
                      {"classical_out", phi.outputs_of(ev).labels()}});
  }
  return {{"events", std::move(events)},
          {"labels", phi.labels},
          {"boundary_in", phi.boundary_in},
          {"boundary_out", phi.boundary_out}};
}

Json to_json(const FramedMultigraph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges) edges.push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}});
  Json in = Json::object(), out = Json::object();
  for (const std::string& n : g.nodes) {
    in[n] = g.incoming(n);
    out[n] = g.outgoing(n);
  }
  return {{"nodes", g.nodes},
          {"edges", std::move(edges)},
          {"input_nodes", g.input_nodes},
          {"output_nodes", g.output_nodes},
          {"in_framing", std::move(in)},
          {"out_framing", std::move(out)}};
}

Json to_json(const CompatibleScenario& c) {
  return {{"canonical_key", c.canonical_key},
          {"graph", to_json(c.scenario.graph)},
          {"labelling", c.labelling},
          {"event_order", topological_order(c.scenario.graph)}};
}

DiagramDocument diagram_from_json(const Json& j) {
  DiagramDocument doc;
  doc.scenario = scenario_from_json(j);
  const Json& sys = field(j, "sys", "diagram");
  if (!sys.is_object()) throw ParseError("diagram/sys: expected an object of label dimensions");
  for (const auto& [label, dim] : sys.items()) doc.diagram.sys[label] = positive(dim, "diagram/sys/" + label);
  const Json& proc = field(j, "proc", "diagram");
  if (!proc.is_object()) throw ParseError("diagram/proc: expected an object of event instruments");
  for (const auto& [event, inst] : proc.items()) {
    if (!doc.scenario.in_labels.count(event)) throw ParseError("diagram/proc/" + event + ": unknown event");
    doc.diagram.proc.emplace(event, instrument_from_json(inst, doc.scenario.inputs_of(event),
                                                         doc.scenario.outputs_of(event), "diagram/proc/" + event));
  }
  return doc;
}

PhaseVector phases_from_json(const Json& j, const std::vector<CompatibleScenario>& orders) {
  std::vector<double> phases(orders.size(), 0.0);
  const Json& table = field(j, "phases", "phases");
  if (!table.is_object()) throw ParseError("phases/phases: expected an object keyed by canonical key");
  for (const auto& [key, value] : table.items()) {
    auto it = std::find_if(orders.begin(), orders.end(), [&](const CompatibleScenario& c) { return c.canonical_key == key; });
    if (it == orders.end()) throw ParseError("phases/phases: unknown canonical key '" + key + "'");
    phases[static_cast<std::size_t>(it - orders.begin())] = number(value, "phases/phases/" + key);
  }
  return PhaseVector(std::move(phases));
}

ControlledDocument controlled_from_json(const Json& j) {
  const Json& fam = field(j, "family", "controlled");
  if (!fam.is_array() || fam.empty()) throw ParseError("controlled/family: expected a non-empty array of maps");
  std::vector<CPMap> members;
  for (std::size_t k = 0; k < fam.size(); ++k) members.push_back(map_from_json(fam[k], "controlled/family/" + std::to_string(k)));
  ProcessFamily family = [&] {
    try {
      return ProcessFamily(members);
    } catch (const std::exception& e) {
      throw ParseError(std::string("controlled/family: ") + e.what());
    }
  }();
  const CPMap g = map_from_json(field(j, "g", "controlled"), "controlled/g");
  const std::size_t h = family.size();
  if (g.dim_in().total() != h * family.dim_in().total() || g.dim_out().total() != h * family.dim_out().total()) {
    throw ParseError("controlled/g: G must map H (x) A to H (x) B with dim H = family size");
  }
  return {ControlledProcess{h, family, g, canonical_spo(family.index)}};
}

}  // namespace icsem::io
