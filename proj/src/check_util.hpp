#pragma once

#include <string>
#include <vector>

#include "bloch/report.hpp"

namespace bloch {

/// Status pass iff margin >= -tolerance (NaN fails).
Check measured(std::string name, bool certified, double margin, const Tolerances& tol, const std::string& tol_name,
               io::Json witnesses = io::Json::object());
Check errored(std::string name, const std::string& kind, const std::string& message);
Check informational(std::string name, io::Json witnesses, std::string message = {});
void sort_checks(std::vector<Check>& checks);

}  // namespace bloch
