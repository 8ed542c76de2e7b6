#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "icsem/json_io.hpp"

namespace icsem::cli {

using io::Json;

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInputError = 2 };

struct Report {
  Json json;  // {command, inputs_digest, results, tolerances_used, violations}
  int exit_code = kOk;
};

struct CommonOptions {
  double cap = 1e6;
};

Report cmd_enumerate(const std::string& scenario_file, const CommonOptions& common);

// Without `order`, every compatible scenario is compiled.
Report cmd_compile(const std::string& diagram_file, const std::optional<std::string>& order,
                   const CommonOptions& common);

struct SuperposeOptions {
  std::string phases = "zeros";   // "zeros" or a phase-spec file
  std::string measure = "fourier";  // "fourier" or a matrix file
  std::optional<std::string> state;  // "zero" or a matrix file (ket or density matrix)
};
Report cmd_superpose(const std::string& diagram_file, const SuperposeOptions& options, const CommonOptions& common);

Report cmd_control(const std::string& diagram_file, const std::string& phases, const CommonOptions& common);

struct VerifyOptions {
  std::string suite = "all";  // eq1|nosig|prop1|prop2|prop3|all
  std::size_t trials = 20;
  std::uint64_t seed = 42;
};
// Accepts a diagram file or a controlled-process fixture ({"family", "g"}).
Report cmd_verify(const std::string& file, const VerifyOptions& options, const CommonOptions& common);

std::string sha256_hex(const std::string& bytes);

// Seed from ICSEM_SEED when set, else 42.
std::uint64_t default_seed();

// Full command line; reports go to `out`, input errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace icsem::cli
