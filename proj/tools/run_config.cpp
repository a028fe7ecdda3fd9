#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "inceprop/errors.hpp"
#include "inceprop/json_reader.hpp"
#include "inceprop/model_json.hpp"

namespace inceprop::cli {
namespace {

using nlohmann::json;

std::vector<long> integers(JsonObjectReader& r, const std::string& key) {
  const json& v = r.raw(key);
  if (!v.is_array()) config_error(r.path_of(key), "expected an array of integers");
  std::vector<long> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) {
      config_error(r.path_of(key) + "[" + std::to_string(i) + "]", "expected an integer");
    }
    out.push_back(v[i].get<long>());
  }
  return out;
}

double positive(JsonObjectReader& r, const std::string& key, double fallback) {
  const double v = r.number_or(key, fallback);
  if (!(v > 0.0)) config_error(r.path_of(key), "must be positive");
  return v;
}

std::vector<double> time_list(JsonObjectReader& r, const std::string& key,
                              bool strictly_positive) {
  std::vector<double> ts = r.numbers(key);
  if (ts.empty()) config_error(r.path_of(key), "must not be empty");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!std::isfinite(ts[i]) || (strictly_positive ? ts[i] <= 0.0 : ts[i] < 0.0)) {
      config_error(r.path_of(key) + "[" + std::to_string(i) + "]",
                   strictly_positive ? "times must be positive" : "times must be non-negative");
    }
  }
  return ts;
}

GridSpec grid_from(JsonObjectReader& r, GridSpec g) {
  g.x_min = r.number_or("x_min", g.x_min);
  g.x_max = r.number_or("x_max", g.x_max);
  g.points = r.integer_or("points", g.points);
  if (!(g.x_max > g.x_min)) config_error(r.path_of("x_max"), "must exceed x_min");
  if (g.points < 16) config_error(r.path_of("points"), "at least 16 points required");
  r.finish();
  return g;
}

SolveSection solve_from(JsonObjectReader& r) {
  SolveSection s;
  s.t_max = positive(r, "t_max", s.t_max);
  s.rtol = positive(r, "rtol", s.rtol);
  s.atol = positive(r, "atol", s.atol);
  s.mu1_initial = r.number_or("mu1_initial", s.mu1_initial);
  if (s.mu1_initial == 0.0) config_error(r.path_of("mu1_initial"), "must be nonzero");
  if (r.has("times")) {
    s.times = time_list(r, "times", false);
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      if (s.times[i] > s.t_max) {
        config_error(r.path_of("times") + "[" + std::to_string(i) + "]", "exceeds t_max");
      }
    }
  }
  s.points = r.integer_or("points", s.points);
  if (s.points < 2) config_error(r.path_of("points"), "at least 2 points required");
  r.finish();
  return s;
}

ClassifySection classify_from(JsonObjectReader& r) {
  ClassifySection c;
  c.xi_max = r.integer_or("xi_max", c.xi_max);
  if (c.xi_max < 1) config_error(r.path_of("xi_max"), "must be at least 1");
  if (auto f = r.object("form")) {
    InceForm form;
    form.a0 = f->number("a0");
    form.b0 = f->number("b0");
    form.c0 = f->number("c0");
    form.d0 = f->number("d0");
    form.omega = positive(*f, "omega", 1.0);
    f->finish();
    c.form = form;
  }
  if (r.has("orders")) {
    c.orders = integers(r, "orders");
    for (std::size_t i = 0; i < c.orders.size(); ++i) {
      if (c.orders[i] < 4) {
        config_error(r.path_of("orders") + "[" + std::to_string(i) + "]", "must be at least 4");
      }
    }
  }
  r.finish();
  return c;
}

GreenSection green_from(JsonObjectReader& r) {
  GreenSection g;
  g.times = time_list(r, "times", true);
  if (auto k = r.object("kernel")) {
    g.kernel.x_min = k->number_or("x_min", g.kernel.x_min);
    g.kernel.x_max = k->number_or("x_max", g.kernel.x_max);
    g.kernel.points = k->integer_or("points", g.kernel.points);
    g.kernel.y = k->number_or("y", g.kernel.y);
    if (!(g.kernel.x_max > g.kernel.x_min)) config_error(k->path_of("x_max"), "must exceed x_min");
    if (g.kernel.points < 2) config_error(k->path_of("points"), "at least 2 points required");
    k->finish();
  }
  r.finish();
  return g;
}

PropagateSection propagate_from(JsonObjectReader& r) {
  PropagateSection p;
  if (auto g = r.object("grid")) p.grid = grid_from(*g, p.grid);
  if (auto i = r.object("initial")) {
    p.initial.epsilon = positive(*i, "epsilon", p.initial.epsilon);
    p.initial.delta = i->number_or("delta", p.initial.delta);
    p.initial.n = i->integer_or("n", p.initial.n);
    if (p.initial.n < 0) config_error(i->path_of("n"), "must be non-negative");
    i->finish();
  }
  p.times = time_list(r, "times", true);
  p.method = r.string_or("method", p.method);
  if (p.method != "quadrature" && p.method != "analytic" && p.method != "crank_nicolson") {
    config_error(r.path_of("method"),
                 "expected one of quadrature, analytic, crank_nicolson; got '" + p.method + "'");
  }
  if (p.method == "analytic" && p.initial.n != 0) {
    config_error(r.path_of("method"), "the analytic route needs initial.n = 0");
  }
  p.dt = positive(r, "dt", p.dt);
  r.finish();
  return p;
}

EigenstatesSection eigenstates_from(JsonObjectReader& r) {
  EigenstatesSection e;
  e.n_max = r.integer_or("n_max", e.n_max);
  if (e.n_max < 0) config_error(r.path_of("n_max"), "must be non-negative");
  e.C0 = positive(r, "C0", e.C0);
  e.epsilon = positive(r, "epsilon", e.epsilon);
  e.delta = r.number_or("delta", e.delta);
  e.times = time_list(r, "times", false);
  if (auto g = r.object("grid")) e.grid = grid_from(*g, e.grid);
  r.finish();
  return e;
}

ValidateSection validate_from(JsonObjectReader& r) {
  ValidateSection v;
  v.suite = r.string_or("suite", v.suite);
  try {
    suite_criteria(v.suite);
  } catch (const Error&) {
    config_error(r.path_of("suite"), "expected acceptance or special-case; got '" + v.suite + "'");
  }
  if (r.has("criteria")) {
    for (long id : integers(r, "criteria")) {
      if (id < 1 || id > kCriterionCount) {
        config_error(r.path_of("criteria"), "criterion " + std::to_string(id) + " does not exist");
      }
      v.criteria.push_back(static_cast<int>(id));
    }
  }
  if (auto t = r.object("tolerances")) {
    for (auto& [key, value] : v.tolerances) value = positive(*t, key, value);
    t->finish();
  }
  v.informational = r.boolean_or("informational", v.informational);
  r.finish();
  return v;
}

Sweep sweep_from(JsonObjectReader& r) {
  Sweep s;
  s.parameter = r.string("parameter");
  if (s.parameter.empty()) config_error(r.path_of("parameter"), "must not be empty");
  if (s.parameter.rfind("sweep", 0) == 0) {
    config_error(r.path_of("parameter"), "cannot sweep the sweep section");
  }
  const json& values = r.raw("values");
  if (!values.is_array() || values.empty()) {
    config_error(r.path_of("values"), "expected a non-empty array");
  }
  s.values.assign(values.begin(), values.end());
  r.finish();
  return s;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  JsonObjectReader r(doc, "");
  RunConfig c;
  if (r.has("model")) {
    JsonObjectReader m(r.raw("model"), "model");
    c.model = model_from_json(m);
  }
  if (auto s = r.object("solve")) c.solve = solve_from(*s);
  if (auto s = r.object("classify")) c.classify = classify_from(*s);
  if (auto s = r.object("green")) c.green = green_from(*s);
  if (auto s = r.object("propagate")) c.propagate = propagate_from(*s);
  if (auto s = r.object("eigenstates")) c.eigenstates = eigenstates_from(*s);
  if (auto s = r.object("validate")) c.validate = validate_from(*s);
  if (auto s = r.object("sweep")) c.sweep = sweep_from(*s);
  r.finish();
  return c;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, path + ": " + e.what());
  }
}

void set_path(json& doc, const std::string& path, const json& value) {
  if (path.empty()) throw Error(ErrorCode::ConfigInvalid, "empty override path");
  json* node = &doc;
  std::istringstream segments(path);
  std::string seg;
  std::string walked;
  while (std::getline(segments, seg, '.')) {
    if (seg.empty()) throw Error(ErrorCode::ConfigInvalid, path + ": empty path segment");
    walked += walked.empty() ? seg : "." + seg;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(seg, &used);
        if (used != seg.size()) throw std::invalid_argument(seg);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigInvalid, walked + ": expected an array index");
      }
      if (idx >= node->size()) throw Error(ErrorCode::ConfigInvalid, walked + ": index out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) {
        throw Error(ErrorCode::ConfigInvalid, walked + ": cannot descend into a scalar");
      }
      node = &(*node)[seg];
    }
  }
  *node = value;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::ConfigInvalid, "override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_path(doc, key, value);
}

}  // namespace inceprop::cli
