#include "inceprop/model_json.hpp"

#include "inceprop/errors.hpp"

namespace inceprop {

namespace {

using nlohmann::json;

TrigSeries series_from_json(JsonObjectReader& parent, const std::string& key) {
  const json& v = parent.raw(key);
  if (v.is_number()) return TrigSeries{v.get<double>(), {}};
  JsonObjectReader r(v, parent.path_of(key));
  TrigSeries s;
  s.offset = r.number_or("offset", 0.0);
  if (r.has("terms")) {
    const json& terms = r.raw("terms");
    if (!terms.is_array()) config_error(r.path_of("terms"), "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      JsonObjectReader t(terms[i], r.path_of("terms") + "[" +
                                       std::to_string(i) + "]");
      s.terms.push_back({t.number("amplitude"), t.number("frequency"),
                         t.number_or("phase", 0.0)});
      t.finish();
    }
  }
  r.finish();
  return s;
}

json series_to_json(const TrigSeries& s) {
  if (s.terms.empty()) return s.offset;
  json terms = json::array();
  for (const auto& t : s.terms) {
    terms.push_back(
        {{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}});
  }
  return {{"offset", s.offset}, {"terms", terms}};
}

OscillatorParams params_from(JsonObjectReader& r, double default_lambda) {
  const double m = r.number_or("m", 1.0);
  const double omega = r.number("omega");
  const double lambda = r.number_or("lambda", default_lambda);
  const double hbar = r.number_or("hbar", 1.0);
  try {
    return OscillatorParams(m, omega, lambda, hbar);
  } catch (const Error& e) {
    config_error(r.path(), e.what());
  }
}

PumpSchedule pump_from(JsonObjectReader& r, double lambda) {
  const std::string type = r.string("type");
  try {
    if (type == "constant") {
      return PumpSchedule::constant(r.number_or("amplitude", lambda));
    }
    if (type == "detuned") {
      return PumpSchedule::detuned(r.number_or("amplitude", lambda),
                                   r.number("detuning"));
    }
    if (type == "tabulated") {
      auto t = r.numbers("t");
      auto amp = r.numbers("amplitude");
      std::vector<double> phase =
          r.has("phase") ? r.numbers("phase") : std::vector<double>(t.size(), 0.0);
      return PumpSchedule::tabulated(std::move(t), std::move(amp),
                                     std::move(phase));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    config_error(r.path(), e.what());
  }
  config_error(r.path_of("type"),
               "expected one of constant, detuned, tabulated; got '" + type + "'");
}

}  // namespace

CoefficientModel model_from_json(const nlohmann::json& doc,
                                 const std::string& path) {
  JsonObjectReader r(doc, path);
  return model_from_json(r);
}

CoefficientModel model_from_json(JsonObjectReader& r) {
  const std::string kind = r.string("model");
  if (kind == "dpo") {
    const auto params = params_from(r, 0.0);
    r.finish();
    return CoefficientModel::dpo(params);
  }
  if (kind == "raiford") {
    const auto params = params_from(r, 0.0);
    auto pump_reader = r.required_object("pump");
    auto pump = pump_from(pump_reader, params.coupling());
    pump_reader.finish();
    r.finish();
    return CoefficientModel::raiford(params, std::move(pump));
  }
  if (kind == "generic") {
    auto a = series_from_json(r, "a");
    auto b = series_from_json(r, "b");
    auto c = series_from_json(r, "c");
    auto d = series_from_json(r, "d");
    r.finish();
    return CoefficientModel::generic(std::move(a), std::move(b), std::move(c),
                                     std::move(d));
  }
  config_error(r.path_of("model"),
               "expected one of dpo, raiford, generic; got '" + kind + "'");
}

nlohmann::json model_to_json(const CoefficientModel& model) {
  json out;
  if (model.kind() == ModelKind::Generic) {
    const auto* s = model.series();
    if (!s) {
      throw Error(ErrorCode::InvalidArgument,
                  "generic model built from callables cannot be serialized");
    }
    out["model"] = "generic";
    out["a"] = series_to_json((*s)[0]);
    out["b"] = series_to_json((*s)[1]);
    out["c"] = series_to_json((*s)[2]);
    out["d"] = series_to_json((*s)[3]);
    return out;
  }
  const OscillatorParams& p = *model.params();
  out["model"] = model.kind() == ModelKind::Dpo ? "dpo" : "raiford";
  out["m"] = p.mass();
  out["omega"] = p.omega();
  out["lambda"] = p.coupling();
  out["hbar"] = p.hbar();
  if (const PumpSchedule* pump = model.pump()) {
    json pj;
    switch (pump->kind()) {
      case PumpSchedule::Kind::Constant:
        pj = {{"type", "constant"}, {"amplitude", pump->amplitude()}};
        break;
      case PumpSchedule::Kind::Detuned:
        pj = {{"type", "detuned"},
              {"amplitude", pump->amplitude()},
              {"detuning", pump->detuning()}};
        break;
      case PumpSchedule::Kind::Tabulated:
        pj = {{"type", "tabulated"},
              {"t", pump->amplitude_table().knots()},
              {"amplitude", pump->amplitude_table().values()},
              {"phase", pump->phase_table().values()}};
        break;
    }
    out["pump"] = pj;
  }
  return out;
}

}  // namespace inceprop
