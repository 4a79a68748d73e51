#include "bloch/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "bloch/errors.hpp"
#include "bloch/sampling.hpp"
#include "check_util.hpp"

#ifndef BLOCH_GIT_VERSION
#define BLOCH_GIT_VERSION "unknown"
#endif

namespace bloch {

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::info: return "info";
    case CheckStatus::error: return "error";
  }
  return "?";
}

Tolerances::Tolerances()
    : values_{{"atom_bound", 1e-12},          {"bilinearity", 1e-12},     {"bracket_width", 1e-3},
              {"crossnorm", 1e-9},            {"denominator", 1e-12},     {"derivative_fd", 1e-6},
              {"domination", 1e-9},           {"duality", 1e-7},          {"extremal_identity", 1e-12},
              {"factorization_norm", 1e-4},   {"factorization_residual", 1e-8},
              {"family", 1e-9},               {"homogeneity", 1e-12},     {"infinity_coincidence", 1e-10},
              {"interpolation", 1e-12},       {"mobius", 1e-12},          {"mobius_group", 1e-12},
              {"monotonicity", 1e-9},         {"representation", 1e-9},   {"sandwich", 1e-9},
              {"single_atom", 1e-9},          {"subadditivity", 1e-12},   {"tensor_exactness", 1e-10},
              {"theta", 1e-12}} {}

double Tolerances::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw InvalidArgument("unknown tolerance \"" + name + "\"");
  return it->second;
}

void Tolerances::set(const std::string& name, double value) {
  auto it = values_.find(name);
  if (it == values_.end()) throw InvalidArgument("unknown tolerance \"" + name + "\"");
  if (!(value > 0.0) || !std::isfinite(value)) throw InvalidArgument("tolerance " + name + " must be positive");
  it->second = value;
}

void Tolerances::set_from_string(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidArgument("expected name=value, got \"" + assignment + "\"");
  const std::string name = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw InvalidArgument("tolerance value \"" + text + "\" is not a number");
  set(name, v);
}

namespace {

bool is_input_kind(const std::string& kind) { return kind != "CertificationFailure"; }

}  // namespace

bool Report::certified_failure() const {
  return std::any_of(checks.begin(), checks.end(), [](const Check& c) {
    return (c.certified && c.status == CheckStatus::fail) ||
           (c.status == CheckStatus::error && c.error_kind == "CertificationFailure");
  });
}

bool Report::input_error() const {
  return std::any_of(checks.begin(), checks.end(), [](const Check& c) {
    return c.status == CheckStatus::error && is_input_kind(c.error_kind);
  });
}

int Report::exit_code() const {
  if (input_error()) return 2;
  return certified_failure() ? 1 : 0;
}

io::Json Report::to_json(bool include_timing) const {
  io::Json cs = io::Json::array();
  std::size_t passed = 0;
  std::size_t failed = 0;
  for (const auto& c : checks) {
    io::Json j{{"name", c.name},
               {"status", status_name(c.status)},
               {"provenance", c.certified ? "certified" : "heuristic"},
               {"margin", io::real_to_json(c.margin)},
               {"tolerance", io::real_to_json(c.tolerance)},
               {"tolerance_name", c.tolerance_name},
               {"witnesses", c.witnesses}};
    if (c.status == CheckStatus::error) {
      j["error"] = {{"kind", c.error_kind}, {"message", c.message}};
    } else if (!c.message.empty()) {
      j["message"] = c.message;
    }
    if (c.status == CheckStatus::pass) ++passed;
    if (c.status == CheckStatus::fail || c.status == CheckStatus::error) ++failed;
    cs.push_back(std::move(j));
  }
  io::Json out{{"version", version},
               {"seed", seed},
               {"scenario", scenario},
               {"checks", cs},
               {"summary",
                {{"checks", checks.size()},
                 {"passed", passed},
                 {"failed_or_error", failed},
                 {"certified_failure", certified_failure()},
                 {"exit_code", exit_code()}}}};
  if (include_timing) {
    io::Json t = io::Json::object();
    for (const auto& [k, v] : timing_ms) t[k] = v;
    out["timing_ms"] = t;
  }
  return out;
}

std::string tool_version() { return BLOCH_GIT_VERSION; }

unsigned max_threads_from_env() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BLOCH_MAX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

Check measured(std::string name, bool certified, double margin, const Tolerances& tol, const std::string& tol_name,
               io::Json witnesses) {
  Check c;
  c.name = std::move(name);
  c.certified = certified;
  c.margin = margin;
  c.tolerance_name = tol_name;
  c.tolerance = tol.get(tol_name);
  c.status = (std::isfinite(margin) || margin > 0) && margin >= -c.tolerance ? CheckStatus::pass : CheckStatus::fail;
  c.witnesses = std::move(witnesses);
  return c;
}

Check errored(std::string name, const std::string& kind, const std::string& message) {
  Check c;
  c.name = std::move(name);
  c.status = CheckStatus::error;
  c.certified = true;
  c.error_kind = kind;
  c.message = message;
  return c;
}

Check informational(std::string name, io::Json witnesses, std::string message) {
  Check c;
  c.name = std::move(name);
  c.status = CheckStatus::info;
  c.witnesses = std::move(witnesses);
  c.message = std::move(message);
  return c;
}

void sort_checks(std::vector<Check>& checks) {
  std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
}

}  // namespace bloch
