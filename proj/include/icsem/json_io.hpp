#pragma once

#include <string>
#include <vector>

#include "icsem/causal.hpp"
#include "icsem/control.hpp"
#include "icsem/diagram.hpp"
#include "icsem/process.hpp"
#include "json.hpp"

// JSON encodings shared by the CLI and its tests. Readers throw ParseError
// naming the offending location (line/column for syntax errors, a JSON
// pointer-like path for structural ones).
namespace icsem::io {

using Json = nlohmann::json;

Json parse_document(const std::string& text, const std::string& source);
// Returns the raw bytes too, for hashing.
Json read_document(const std::string& path, std::string* raw = nullptr);

// {"rows": n, "cols": m, "re": [...], "im": [...]}, row-major.
ComplexMatrix matrix_from_json(const Json& j, const std::string& where);
Json to_json(const ComplexMatrix& m);

// {"inputs", "outputs", "dim_in", "dim_out", "branches": {"i|o": [matrix, ...]}},
// or the shorthands {"kraus": [...]} and {"unitary": matrix} for one map.
// Absent branches are zero; classical sets default to the given ones.
QuantumInstrument instrument_from_json(const Json& j, const ClassicalSet& default_inputs,
                                       const ClassicalSet& default_outputs, const std::string& where);
Json to_json(const QuantumInstrument& inst);
Json kraus_to_json(const CPMap& f);

IndefiniteCausalScenario scenario_from_json(const Json& j);
Json to_json(const IndefiniteCausalScenario& phi);
Json to_json(const FramedMultigraph& g);
Json to_json(const CompatibleScenario& c);

struct DiagramDocument {
  IndefiniteCausalScenario scenario;
  DiagramAssignment diagram;
};

// Scenario JSON plus {"sys": {label: dim}, "proc": {event: instrument}}.
DiagramDocument diagram_from_json(const Json& j);

// {"phases": {canonical_key: radians}}; missing keys are zero.
PhaseVector phases_from_json(const Json& j, const std::vector<CompatibleScenario>& orders);

// A hand-written controlled process: {"family": [map...], "g": map}, each map
// given as {"kraus": [...], "dim_in", "dim_out"} or {"unitary": matrix}.
struct ControlledDocument {
  ControlledProcess process;
};
ControlledDocument controlled_from_json(const Json& j);

}  // namespace icsem::io
