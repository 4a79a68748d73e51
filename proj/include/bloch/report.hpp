#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bloch/json_io.hpp"

namespace bloch {

enum class CheckStatus { pass, fail, info, error };

std::string status_name(CheckStatus s);

/// One line of a report. Certified checks state a guaranteed inequality and
/// gate the exit code; heuristic checks report an observation.
struct Check {
  std::string name;
  CheckStatus status = CheckStatus::info;
  bool certified = false;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string tolerance_name;
  io::Json witnesses = io::Json::object();
  std::string error_kind;  // set when status == error
  std::string message;
};

/// Named tolerances with documented defaults; `--tol name=value` overrides.
class Tolerances {
public:
  Tolerances();
  double get(const std::string& name) const;
  /// Throws InvalidArgument for an unknown name or a non-positive value.
  void set(const std::string& name, double value);
  /// Parses "name=value".
  void set_from_string(const std::string& assignment);
  const std::map<std::string, double>& all() const noexcept { return values_; }

private:
  std::map<std::string, double> values_;
};

struct Report {
  std::string version;
  std::uint64_t seed = 0;
  io::Json scenario = nullptr;
  std::vector<Check> checks;  // sorted by name
  std::map<std::string, double> timing_ms;

  bool certified_failure() const;
  bool input_error() const;
  /// 0 pass, 1 certified-check failure, 2 input error.
  int exit_code() const;
  /// Timing goes under "timing"; omit it for determinism comparisons.
  io::Json to_json(bool include_timing = true) const;
};

/// git describe of the source tree at configure time.
std::string tool_version();

/// BLOCH_MAX_THREADS, or the hardware concurrency, at least 1.
unsigned max_threads_from_env();

/// Runs a scenario document. Input problems and library errors become
/// status "error" checks; nothing escapes as an exception.
Report run_scenario(const io::Json& scenario, const Tolerances& tol = {});

/// The bundled monotonicity scenario.
io::Json prop1_inclusions_scenario();

struct VerifyOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Adds a family member with certificate 1.5, which must surface as a
  /// certified failure.
  bool inject_corrupted_certificate = false;
};

/// The full invariant suite across modules.
Report verify_all(const VerifyOptions& options, const Tolerances& tol = {});

}  // namespace bloch
