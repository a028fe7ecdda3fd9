#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "inceprop/characteristic_ode.hpp"
#include "inceprop/ermakov_invariant.hpp"
#include "inceprop/errors.hpp"
#include "inceprop/ince_analysis.hpp"
#include "inceprop/json_reader.hpp"
#include "inceprop/propagator.hpp"
#include "inceprop/reference_oracles.hpp"
#include "inceprop/text_format.hpp"
#include "inceprop/validation.hpp"

namespace inceprop::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string numbered(const std::string& stem, std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return stem + buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return os;
}

void write_json(const fs::path& path, const json& doc) {
  auto os = open_output(path);
  os << doc.dump(2) << '\n';
}

const CoefficientModel& require_model(const RunConfig& c) {
  if (!c.model) config_error("model", "missing required field");
  return *c.model;
}

std::shared_ptr<const CharacteristicSolution> solve(const RunConfig& c, double t_max) {
  SolveOptions o;
  o.t_max = t_max;
  o.rtol = c.solve.rtol;
  o.atol = c.solve.atol;
  o.mu1_initial = c.solve.mu1_initial;
  return std::make_shared<const CharacteristicSolution>(
      solve_standard_pair(characteristic_form(require_model(c)), o));
}

Grid make_grid(const GridSpec& g) {
  return Grid(g.x_min, g.x_max, static_cast<std::size_t>(g.points));
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

void solve_mu(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const auto sol = solve(c, c.solve.t_max);
  std::vector<double> times = c.solve.times;
  if (times.empty()) {
    for (long i = 0; i < c.solve.points; ++i) {
      times.push_back(c.solve.t_max * static_cast<double>(i) / static_cast<double>(c.solve.points - 1));
    }
  }
  auto os = open_output(out / "mu.csv");
  write_characteristic_csv(os, *sol, times);
  double worst = 0.0;
  for (double t : times) worst = std::max(worst, wronskian_residual(*sol, t));
  write_json(out / "solve.json", {{"t_max", c.solve.t_max},
                                  {"rtol", c.solve.rtol},
                                  {"atol", c.solve.atol},
                                  {"mu1_initial", c.solve.mu1_initial},
                                  {"zeros_mu0", sol->zeros()},
                                  {"max_wronskian_residual", worst}});
  log << "solve-mu: " << times.size() << " rows, " << sol->zeros().size()
      << " zeros of mu0 in (0, " << fmt17(c.solve.t_max) << "]\n";
}

void classify_ince(const RunConfig& c, const fs::path& out, std::ostream& log) {
  InceForm form;
  if (c.classify.form) {
    form = *c.classify.form;
  } else {
    const CoefficientModel& m = require_model(c);
    if (m.kind() != ModelKind::Dpo) {
      config_error("classify.form", "required when the model is not dpo");
    }
    form = to_ince_form(*m.params());
  }
  const PeriodicityReport rep = classify_periodicity(form, c.classify.xi_max);
  json doc = to_json(rep);
  doc["form"] = {{"a0", form.a0}, {"b0", form.b0}, {"c0", form.c0}, {"d0", form.d0},
                 {"omega", form.omega}};
  write_json(out / "periodicity.json", doc);

  for (TrialClass cls : {TrialClass::EvenPi, TrialClass::OddPi, TrialClass::EvenTwoPi,
                         TrialClass::OddTwoPi}) {
    std::vector<FourierTrialSolution> trials;
    for (long n : c.classify.orders) trials.push_back(fourier_trial(form, cls, static_cast<int>(n)));
    auto os = open_output(out / ("convergence_" + std::string(to_string(cls)) + ".csv"));
    write_convergence_csv(os, trials);
  }
  log << "classify-ince: pi pair " << (rep.pi_pair_possible ? "possible" : "ruled out")
      << ", 2pi pair " << (rep.two_pi_pair_possible ? "possible" : "ruled out")
      << ", min P = " << fmt17(rep.p_minimum) << ", min Q = " << fmt17(rep.q_minimum) << '\n';
}

void green(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const auto sol = solve(c, max_of(c.green.times));
  json rows = json::array();
  auto os = open_output(out / "kernel_slice.csv");
  os << "t[time],x[length],y[length],re_G[length^-1],im_G[length^-1]\n";
  const KernelSlice& k = c.green.kernel;
  for (double t : c.green.times) {
    const PropagatorCoefficients pc = greens_coefficients(*sol, t);
    rows.push_back(to_json(pc));
    for (long i = 0; i < k.points; ++i) {
      const double x = k.x_min + (k.x_max - k.x_min) * static_cast<double>(i) /
                                     static_cast<double>(k.points - 1);
      const Complex g = greens_kernel(pc, x, k.y);
      os << fmt17(t) << ',' << fmt17(x) << ',' << fmt17(k.y) << ',' << fmt17(g.real()) << ','
         << fmt17(g.imag()) << '\n';
    }
  }
  write_json(out / "coefficients.json", {{"coefficients", rows}});
  log << "green: " << c.green.times.size() << " times\n";
}

void propagate(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const PropagateSection& p = c.propagate;
  const CoefficientModel& model = require_model(c);
  const Grid grid = make_grid(p.grid);
  const HermiteGaussianSpec spec(p.initial.epsilon, p.initial.delta, static_cast<int>(p.initial.n));
  const WaveField chi(grid, initial_state(spec, grid.points()), 0.0);
  const double n0 = l2_norm(chi);

  std::vector<double> times = p.times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::shared_ptr<const CharacteristicSolution> sol;
  if (p.method != "crank_nicolson") sol = solve(c, times.back());

  {
    auto os = open_output(out / "psi_initial.csv");
    write_wavefield_csv(os, chi);
  }
  json entries = json::array();
  WaveField current = chi;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    WaveField psi = chi;
    if (p.method == "quadrature") {
      psi = propagate_quadrature(greens_coefficients(*sol, t), chi);
    } else if (p.method == "analytic") {
      psi = propagate_gaussian_analytic(greens_coefficients(*sol, t), spec.epsilon, spec.delta)
                .sample(grid, t);
    } else {
      current = crank_nicolson_evolve(model, current, t, OracleConfig(grid, p.dt));
      psi = current;
    }
    const std::string file = numbered("psi_", i) + ".csv";
    auto os = open_output(out / file);
    write_wavefield_csv(os, psi);
    json meta = wavefield_metadata(psi);
    meta["file"] = file;
    meta["relative_norm_change"] = std::abs(l2_norm(psi) - n0) / n0;
    entries.push_back(std::move(meta));
  }
  write_json(out / "propagate.json", {{"method", p.method},
                                      {"initial", {{"epsilon", spec.epsilon},
                                                   {"delta", spec.delta},
                                                   {"n", spec.n},
                                                   {"file", "psi_initial.csv"}}},
                                      {"fields", entries}});
  log << "propagate: " << times.size() << " fields by " << p.method << '\n';
}

void eigenstates(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const EigenstatesSection& e = c.eigenstates;
  const CoefficientModel& model = require_model(c);
  std::vector<double> times = e.times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const auto sol = solve(c, std::max(times.back(), 1e-3));
  const PinneyValue ic =
      initial_conditions_from_gaussian(HermiteGaussianSpec(e.epsilon, e.delta, 0), e.C0, model);
  const ErmakovSolution es(sol, e.C0, ic.mu, ic.dmu);
  const Grid grid = make_grid(e.grid);

  {
    auto os = open_output(out / "pinney.csv");
    write_pinney_csv(os, es, times);
  }
  json snapshots = json::array();
  double worst_gram = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    std::vector<WaveField> basis;
    json states = json::array();
    for (long n = 0; n <= e.n_max; ++n) {
      WaveField psi = wavefunction(es, static_cast<int>(n), t, grid);
      const std::string file = numbered("psi_n", static_cast<std::size_t>(n)) + "_" +
                               numbered("t", i) + ".csv";
      auto os = open_output(out / file);
      write_wavefield_csv(os, psi);
      states.push_back({{"n", n},
                        {"file", file},
                        {"invariant_expectation", invariant_expectation(es, psi, t)},
                        {"invariant_eigenvalue", 2 * std::sqrt(e.C0) * (static_cast<double>(n) + 0.5)}});
      basis.push_back(std::move(psi));
    }
    json gram_re = json::array(), gram_im = json::array();
    double gram_err = 0.0;
    for (std::size_t m = 0; m < basis.size(); ++m) {
      json row_re = json::array(), row_im = json::array();
      for (std::size_t n = 0; n < basis.size(); ++n) {
        const Complex ip = inner_product(grid, basis[m].values, basis[n].values);
        gram_err = std::max(gram_err, std::abs(ip - (m == n ? 1.0 : 0.0)));
        row_re.push_back(ip.real());
        row_im.push_back(ip.imag());
      }
      gram_re.push_back(std::move(row_re));
      gram_im.push_back(std::move(row_im));
    }
    worst_gram = std::max(worst_gram, gram_err);
    snapshots.push_back({{"t", t},
                         {"states", std::move(states)},
                         {"gram_real", std::move(gram_re)},
                         {"gram_imag", std::move(gram_im)},
                         {"gram_max_deviation", gram_err}});
  }
  write_json(out / "eigenstates.json", {{"C0", e.C0},
                                        {"mu_initial", ic.mu},
                                        {"dmu_initial", ic.dmu},
                                        {"snapshots", std::move(snapshots)}});
  log << "eigenstates: n <= " << e.n_max << " at " << times.size()
      << " times, max Gram deviation " << fmt17(worst_gram) << '\n';
}

bool validate(const RunConfig& c, const fs::path& out, int jobs, std::ostream& log) {
  ValidationOptions o;
  o.criteria = c.validate.criteria.empty() ? suite_criteria(c.validate.suite) : c.validate.criteria;
  o.tolerances = c.validate.tolerances;
  o.informational = c.validate.informational;
  o.jobs = jobs;
  const auto results = run_validation(o);
  for (const auto& r : results) log << format_result(r) << '\n';
  json doc = to_json(results);
  doc["suite"] = c.validate.criteria.empty() ? c.validate.suite : "custom";
  doc["tolerances"] = o.tolerances;
  write_json(out / "validation.json", doc);
  return all_passed(results);
}

}  // namespace

std::optional<Command> command_from_string(std::string_view name) {
  if (name == "solve-mu") return Command::SolveMu;
  if (name == "classify-ince") return Command::ClassifyInce;
  if (name == "green") return Command::Green;
  if (name == "propagate") return Command::Propagate;
  if (name == "eigenstates") return Command::Eigenstates;
  if (name == "validate") return Command::Validate;
  return std::nullopt;
}

bool run_command(Command command, const RunConfig& config, const fs::path& out, int jobs,
                 std::ostream& log) {
  fs::create_directories(out);
  switch (command) {
    case Command::SolveMu: solve_mu(config, out, log); return true;
    case Command::ClassifyInce: classify_ince(config, out, log); return true;
    case Command::Green:
      if (config.green.times.empty()) config_error("green.times", "missing required field");
      green(config, out, log);
      return true;
    case Command::Propagate:
      if (config.propagate.times.empty()) config_error("propagate.times", "missing required field");
      propagate(config, out, log);
      return true;
    case Command::Eigenstates:
      if (config.eigenstates.times.empty()) config_error("eigenstates.times", "missing required field");
      eigenstates(config, out, log);
      return true;
    case Command::Validate: return validate(config, out, jobs, log);
  }
  return true;
}

int execute(Command command, const json& doc, const fs::path& out, int jobs, std::ostream& log,
            std::ostream& err) {
  struct Entry {
    Entry(RunConfig c, fs::path d) : config(std::move(c)), dir(std::move(d)) {}
    RunConfig config;
    fs::path dir;
    std::string log;
    std::string error;
    ErrorCode code = ErrorCode::InvalidArgument;
    bool failed = false;
    bool passed = true;
  };
  std::vector<Entry> entries;
  std::optional<Sweep> sweep;
  try {
    RunConfig base = parse_run_config(doc);
    sweep = base.sweep;
    if (!sweep) {
      entries.emplace_back(std::move(base), out);
    } else {
      if (command == Command::Validate) config_error("sweep", "not supported by validate");
      for (std::size_t i = 0; i < sweep->values.size(); ++i) {
        json variant = doc;
        variant.erase("sweep");
        set_path(variant, sweep->parameter, sweep->values[i]);
        entries.emplace_back(parse_run_config(variant), out / numbered("sweep_", i));
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  auto work = [&](Entry& e) {
    std::ostringstream os;
    try {
      e.passed = run_command(command, e.config, e.dir, sweep ? 1 : jobs, os);
    } catch (const Error& ex) {
      e.failed = true;
      e.code = ex.code();
      e.error = ex.what();
    } catch (const std::exception& ex) {
      e.failed = true;
      e.error = ex.what();
    }
    e.log = os.str();
  };

  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(jobs, 1)), 1, entries.size());
  if (workers == 1) {
    for (auto& e : entries) work(e);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < entries.size();) work(entries[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  int status = kSuccess;
  for (const auto& e : entries) {
    if (sweep) log << "[" << e.dir.filename().string() << "] ";
    log << e.log;
    if (e.failed) {
      err << "error";
      if (sweep) err << " [" << e.dir.filename().string() << "]";
      err << ": " << e.error << '\n';
      status = kUsageError;
    } else if (!e.passed && status == kSuccess) {
      status = kValidationFailed;
    }
  }
  if (sweep) {
    json list = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      list.push_back({{"value", sweep->values[i]},
                      {"directory", entries[i].dir.filename().string()},
                      {"status", entries[i].failed ? "error" : "ok"}});
    }
    try {
      fs::create_directories(out);
      write_json(out / "sweep.json", {{"parameter", sweep->parameter}, {"entries", list}});
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      status = kUsageError;
    }
  }
  return status;
}

}  // namespace inceprop::cli
