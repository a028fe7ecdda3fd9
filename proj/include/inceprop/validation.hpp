#pragma once

// The acceptance battery: each numbered criterion runs a fixed scenario and
// compares measured residuals with tolerances. Shared by the acceptance test
// and the `validate` command.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace inceprop {

struct ValidationCheck {
  std::string label;
  double measured = 0.0;
  /// "<=" or ">="
  std::string relation = "<=";
  double tolerance = 0.0;
  bool passed = false;
  /// Wall-clock measurements are left out of the JSON report.
  bool timing = false;
};

struct CriterionResult {
  int id = 0;
  std::string key;
  std::string title;
  std::vector<ValidationCheck> checks;
  std::string note;
  /// Diagnostic lines never count towards the verdict.
  bool informational = false;

  bool passed() const;
};

/// Tolerance name -> value. Every name used by the battery is present in
/// default_tolerances(); overrides must use those names.
using ToleranceTable = std::map<std::string, double>;

const ToleranceTable& default_tolerances();

struct ValidationOptions {
  std::vector<int> criteria;  // empty: all
  ToleranceTable tolerances = default_tolerances();
  bool informational = true;
  int jobs = 1;
};

/// "acceptance" (1-13) or "special-case" (the lambda = omega closed forms).
/// Throws ConfigInvalid for other names.
std::vector<int> suite_criteria(std::string_view suite);

constexpr int kCriterionCount = 13;

/// Results in criterion order; informational entries follow the criterion
/// they belong to. Module errors inside a criterion become failed checks.
std::vector<CriterionResult> run_validation(const ValidationOptions& options);

bool all_passed(const std::vector<CriterionResult>& results);

/// "PASS 1 special_case_ode: max_abs_error = ... (<= 1e-08)"
std::string format_result(const CriterionResult& result);

nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace inceprop
