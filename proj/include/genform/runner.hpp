#pragma once
// Report builders behind the command line tool: identity suites with fault
// injection for harness tests, structure analysis, deformation jobs, type
// decompositions and complex-type scans. Reports are json text and are byte
// identical for a fixed config and seed.

#include <cstdint>
#include <optional>
#include <string>

namespace gf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitObstructed = 2;
inline constexpr int kExitTruncation = 3;
inline constexpr int kExitTolerance = 4;

struct RunConfig {
  std::string command;      // verify, analyze, deform, decompose, ddj
  std::string input;        // inline json or a file path; unused by verify
  std::optional<double> tol;
  std::optional<int> trunc;
  std::optional<int> order;
  uint64_t seed = 0;
  std::string suite;        // verify only, empty runs every suite
  std::string flip_suite;   // verify only, injects a sign error into one suite
};

struct RunResult {
  int exit_code = kExitOk;
  std::string report;  // json text
};

RunResult run_command(const RunConfig& cfg);

// indented human view of a report
std::string text_view(const std::string& report_json);

// honors GENFORM_THREADS; returns the cap now in force, 0 when unset
int apply_thread_cap();

}  // namespace gf
