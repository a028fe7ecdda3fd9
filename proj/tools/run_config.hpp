#pragma once

// Batch run configuration: one JSON document holding the model and one
// section per command, read strictly (unknown keys are errors).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "inceprop/ince_analysis.hpp"
#include "inceprop/oscillator_models.hpp"
#include "inceprop/validation.hpp"

namespace inceprop::cli {

struct GridSpec {
  double x_min = -10.0;
  double x_max = 10.0;
  long points = 2048;
};

struct SolveSection {
  double t_max = 6.283185307179586;
  double rtol = 1e-10;
  double atol = 1e-12;
  double mu1_initial = 1.0;
  /// Output mesh: explicit times, or `points` uniform samples of [0, t_max].
  std::vector<double> times;
  long points = 201;
};

struct ClassifySection {
  long xi_max = 50;
  /// Ince form given directly; otherwise derived from a dpo model.
  std::optional<InceForm> form;
  /// Truncation orders for the Fourier-trial convergence table.
  std::vector<long> orders{8, 16, 32, 64};
};

struct KernelSlice {
  double x_min = -5.0;
  double x_max = 5.0;
  long points = 101;
  double y = 0.0;
};

struct GreenSection {
  std::vector<double> times;
  KernelSlice kernel;
};

struct InitialState {
  double epsilon = 1.0;
  double delta = 0.0;
  long n = 0;
};

struct PropagateSection {
  GridSpec grid;
  InitialState initial;
  std::vector<double> times;
  /// quadrature | analytic | crank_nicolson
  std::string method = "quadrature";
  double dt = 1e-3;
};

struct EigenstatesSection {
  long n_max = 5;
  double C0 = 1.0;
  double epsilon = 1.0;
  double delta = 0.0;
  std::vector<double> times;
  GridSpec grid{-12.0, 12.0, 4097};
};

struct ValidateSection {
  std::string suite = "acceptance";
  std::vector<int> criteria;  // overrides the suite when non-empty
  ToleranceTable tolerances = default_tolerances();
  bool informational = true;
};

/// Runs the command once per value with `parameter` (a dotted config path)
/// overridden.
struct Sweep {
  std::string parameter;
  std::vector<nlohmann::json> values;
};

struct RunConfig {
  std::optional<CoefficientModel> model;
  SolveSection solve;
  ClassifySection classify;
  GreenSection green;
  PropagateSection propagate;
  EigenstatesSection eigenstates;
  ValidateSection validate;
  std::optional<Sweep> sweep;
};

/// Throws ConfigInvalid with the dotted path of the offending field.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Parses the file as JSON; syntax errors become ConfigInvalid.
nlohmann::json load_config_file(const std::string& path);

/// Applies `dotted.path=value`. The value is read as JSON when it parses,
/// otherwise as a string. Numeric segments index arrays.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Sets the value at a dotted path, creating objects as needed.
void set_path(nlohmann::json& doc, const std::string& path,
              const nlohmann::json& value);

}  // namespace inceprop::cli
