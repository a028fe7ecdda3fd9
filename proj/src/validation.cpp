#include "inceprop/validation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <memory>
#include <numbers>
#include <thread>

#include "inceprop/characteristic_ode.hpp"
#include "inceprop/ermakov_invariant.hpp"
#include "inceprop/errors.hpp"
#include "inceprop/ince_analysis.hpp"
#include "inceprop/propagator.hpp"
#include "inceprop/reference_oracles.hpp"
#include "inceprop/text_format.hpp"

namespace inceprop {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::shared_ptr<const CharacteristicSolution> solve(const CoefficientModel& m,
                                                    double t_max) {
  SolveOptions o;
  o.t_max = t_max;
  return std::make_shared<const CharacteristicSolution>(
      solve_standard_pair(characteristic_form(m), o));
}

CoefficientModel dpo(double ratio) {
  return CoefficientModel::dpo(OscillatorParams::unit(1.0, ratio));
}

WaveField gaussian(const Grid& g, double eps, double delta) {
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    v[i] = std::sqrt(eps / std::sqrt(kPi)) *
           std::exp(Complex(-0.5 * eps * eps, delta) * (x * x));
  }
  return WaveField(g, std::move(v), 0.0);
}

// NaN measurements (from failed computations) never pass.
ValidationCheck at_most(std::string label, double measured, double tol) {
  return {std::move(label), measured, "<=", tol, measured <= tol, false};
}

ValidationCheck at_least(std::string label, double measured, double tol) {
  return {std::move(label), measured, ">=", tol, measured >= tol, false};
}

ValidationCheck runtime(std::string label, double measured, double limit) {
  ValidationCheck c = at_most(std::move(label), measured, limit);
  c.timing = true;
  return c;
}

CriterionResult criterion(int id, std::string key, std::string title) {
  CriterionResult r;
  r.id = id;
  r.key = std::move(key);
  r.title = std::move(title);
  return r;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Battery {
 public:
  explicit Battery(const ToleranceTable& tol) : tol_(tol) {}

  double tol(const std::string& key) const { return tol_.at(key); }

  // criterion 1
  CriterionResult special_case_ode() const {
    CriterionResult r = criterion(1, "special_case_ode",
                      "lambda = omega pair matches the closed forms on [0, 1.4]");
    const auto start = Clock::now();
    SolveOptions o;
    o.t_max = 1.4;
    o.rtol = 1e-10;
    const auto sol = solve_standard_pair(characteristic_form(dpo(1.0)), o);
    double err = 0.0;
    for (int i = 0; i <= 1400; ++i) {
      const double t = 1.4 * i / 1400;
      const StandardPair p = sol.at(t);
      const SpecialCaseMu m = special_case_mu(t);
      err = std::max({err, std::abs(p.mu0 - m.mu0), std::abs(p.mu1 - m.mu1)});
    }
    const double elapsed = seconds_since(start);
    r.checks.push_back(at_most("max_abs_error", err, tol("special_case_ode")));
    r.checks.push_back(runtime("runtime_s", elapsed, tol("special_case_runtime")));
    return r;
  }

  // criterion 2
  CriterionResult green_coefficients() const {
    CriterionResult r = criterion(2, "green_coefficients",
                      "alpha, beta, gamma match the lambda = omega closed forms");
    const auto sol = solve(dpo(1.0), 1.1);
    double err = 0.0;
    for (double t : {0.2, 0.5, 1.0}) {
      const auto pc = greens_coefficients(*sol, t);
      const SpecialCaseMu m = special_case_mu(t);
      const double alpha =
          (std::cos(t) * std::cosh(t) - std::sin(t) * std::sinh(t)) / (2 * m.mu0);
      err = std::max({err, std::abs(pc.alpha - alpha), std::abs(pc.beta + 1 / m.mu0),
                      std::abs(pc.gamma - m.mu1 / (2 * m.mu0))});
    }
    r.checks.push_back(at_most("max_abs_error", err, tol("green_coefficients")));
    return r;
  }

  // criterion 3 and its caustic-excluded companion
  std::vector<CriterionResult> riccati(bool informational) const {
    CriterionResult r = criterion(3, "riccati",
                      "max |d gamma/dt + a beta^2| on [0.2, 3], dt = 1e-4");
    CriterionResult info = criterion(3, "riccati_away_from_caustics",
                         "same residual with |t - caustic| > 0.1 excluded");
    info.informational = true;
    constexpr double kDt = 1e-4;
    constexpr int kSteps = 28000;
    for (double ratio : {0.2, 0.5}) {
      const auto sol = solve(dpo(ratio), 3.01);
      const std::string tag = "lambda/omega=" + short_number(ratio);
      std::vector<PropagatorCoefficients> pcs;
      double undefined_at = kInf;
      for (int i = 0; i <= kSteps; ++i) {
        const double t = 0.2 + kDt * i;
        try {
          pcs.push_back(greens_coefficients(*sol, t));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::CausticEncountered) throw;
          undefined_at = std::min(undefined_at, t);
          pcs.clear();
          break;
        }
      }
      double literal = kInf;
      if (!pcs.empty()) literal = riccati_residual(pcs, sol->model());
      r.checks.push_back(at_most("residual " + tag, literal, tol("riccati")));
      if (std::isfinite(undefined_at)) {
        r.note += "kernel undefined at t = " + fmt17(undefined_at) + " (" + tag + "); ";
      }
      for (double z : sol->zeros()) {
        if (z > 0.2 && z < 3.0) r.note += "caustic at t = " + fmt17(z) + " (" + tag + "); ";
      }

      if (!informational) continue;
      // contiguous runs of mesh points away from every caustic
      double worst = 0.0;
      std::vector<PropagatorCoefficients> run;
      auto flush = [&] {
        if (run.size() >= 3) worst = std::max(worst, riccati_residual(run, sol->model()));
        run.clear();
      };
      for (int i = 0; i <= kSteps; ++i) {
        const double t = 0.2 + kDt * i;
        const bool near = std::any_of(sol->zeros().begin(), sol->zeros().end(),
                                      [&](double z) { return std::abs(t - z) <= 0.1; });
        if (near) {
          flush();
          continue;
        }
        run.push_back(greens_coefficients(*sol, t));
      }
      flush();
      info.checks.push_back(at_most("residual " + tag, worst, tol("riccati")));
    }
    if (!r.note.empty()) r.note.erase(r.note.size() - 2);
    std::vector<CriterionResult> out{r};
    if (informational) out.push_back(info);
    return out;
  }

  // criterion 4
  CriterionResult wronskian() const {
    CriterionResult r = criterion(4, "wronskian",
                      "|W + 2 mu1(0) lambda_f^2 a| at 50 times per model");
    struct Case {
      std::string label;
      CoefficientModel model;
      double t_max;
    };
    TrigSeries half{0.5, {}};
    TrigSeries tilt{0.0, {{0.3, 1.0, 0.0}}};
    const std::vector<Case> cases{
        {"dpo lambda/omega=0", dpo(0.0), 2 * kPi},
        {"dpo lambda/omega=0.2", dpo(0.2), 2 * kPi},
        {"dpo lambda/omega=0.5", dpo(0.5), 2 * kPi},
        {"dpo lambda/omega=0.8", dpo(0.8), 2 * kPi},
        {"dpo lambda/omega=1", dpo(1.0), 1.4},
        {"dpo m=0.7 omega=1.3 lambda=0.4 hbar=1.1",
         CoefficientModel::dpo(OscillatorParams(0.7, 1.3, 0.4, 1.1)), 5.0},
        {"raiford detuned",
         CoefficientModel::raiford(OscillatorParams::unit(1.0, 0.3),
                                   PumpSchedule::detuned(0.3, 0.1)),
         5.0},
        {"generic c != d",
         CoefficientModel::generic(half, half, tilt, TrigSeries{}), 3.0},
    };
    for (const Case& c : cases) {
      const auto sol = solve(c.model, c.t_max);
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        worst = std::max(worst, wronskian_residual(*sol, c.t_max * i / 49));
      }
      r.checks.push_back(at_most(c.label, worst, tol("wronskian")));
    }
    return r;
  }

  // criterion 5
  CriterionResult mehler() const {
    CriterionResult r = criterion(5, "mehler",
                      "lambda = 0 kernel equals the Mehler kernel, 64x64 points, t = 0.7");
    SolveOptions o;
    o.t_max = 1.0;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    const auto sol = solve_standard_pair(characteristic_form(dpo(0.0)), o);
    const auto pc = greens_coefficients(sol, 0.7);
    double err = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double x = -4.0 + 8.0 * i / 63;
      for (int j = 0; j < 64; ++j) {
        const double y = -4.0 + 8.0 * j / 63;
        err = std::max(err, std::abs(greens_kernel(pc, x, y) -
                                     mehler_kernel(1.0, 1.0, 1.0, x, y, 0.7)));
      }
    }
    r.checks.push_back(at_most("max_abs_error", err, tol("mehler")));
    return r;
  }

  // criterion 6
  CriterionResult cauchy() const {
    CriterionResult r = criterion(6, "cauchy_cross_validation",
                      "Green quadrature vs Crank-Nicolson, lambda/omega = 0.2, t = 1");
    const auto start = Clock::now();
    const auto model = dpo(0.2);
    const Grid g(-10, 10, 2048);
    const WaveField chi = gaussian(g, 1.0, 0.0);
    const auto sol = solve(model, 1.0);
    const WaveField quad = propagate_quadrature(greens_coefficients(*sol, 1.0), chi);
    const WaveField cn = crank_nicolson_evolve(model, chi, 1.0, OracleConfig(g, 1e-3));
    const double diff = relative_l2_difference(quad, cn);
    const double elapsed = seconds_since(start);
    r.checks.push_back(at_most("relative_l2", diff, tol("cauchy")));
    r.checks.push_back(runtime("runtime_s", elapsed, tol("cauchy_runtime")));
    return r;
  }

  // criterion 7
  CriterionResult unitarity() const {
    CriterionResult r = criterion(7, "unitarity",
                      "propagated norms and Crank-Nicolson per-step norm drift");
    const auto model = dpo(0.2);
    const Grid g(-10, 10, 2048);
    const WaveField chi = gaussian(g, 1.0, 0.3);
    const double n0 = l2_norm(chi);
    const auto sol = solve(model, 2.0);
    double quad = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
      const WaveField psi = propagate_quadrature(greens_coefficients(*sol, t), chi);
      quad = std::max(quad, std::abs(l2_norm(psi) - n0) / n0);
    }
    double analytic = 0.0;
    const Grid wide(-14, 14, 4096);
    for (double t : {0.5, 1.0, 2.0}) {
      const WaveField psi =
          propagate_gaussian_analytic(greens_coefficients(*sol, t), 1.0, 0.3).sample(wide, t);
      analytic = std::max(analytic, std::abs(l2_norm(psi) - 1.0));
    }
    CrankNicolsonStats stats;
    const WaveField end = crank_nicolson_evolve(model, chi, 2.0, OracleConfig(g, 1e-3), &stats);
    const double cn_total = std::abs(l2_norm(end) - n0) / n0;
    r.checks.push_back(at_most("quadrature_norm_change", quad, tol("norm")));
    r.checks.push_back(at_most("analytic_norm_change", analytic, tol("norm")));
    r.checks.push_back(at_most("crank_nicolson_norm_change", cn_total, tol("norm")));
    r.checks.push_back(
        at_most("crank_nicolson_step_drift", stats.max_step_norm_drift, tol("cn_step_norm")));
    return r;
  }

  // criterion 8
  CriterionResult eigenstates() const {
    CriterionResult r = criterion(8, "eigenstates",
                      "n <= 5, lambda/omega = 0.2: Schrodinger residual, <E>, Gram matrix");
    const auto model = dpo(0.2);
    const auto sol = solve(model, 2.0);
    const double C0 = 1.0;
    const ErmakovSolution es(sol, C0, 1.0, 0.0);
    const Grid g(-12, 12, 4097);
    const std::vector<double> xs = g.points();
    const double dt = 1e-4;
    double schro = 0.0, expect = 0.0, gram = 0.0;
    for (double t : {0.5, 1.0, 1.5}) {
      std::vector<std::vector<Complex>> basis;
      for (int n = 0; n <= 5; ++n) {
        const WaveField now = wavefunction(es, n, t, g);
        schro = std::max(schro, schrodinger_residual(model, wavefunction(es, n, t - dt, g), now,
                                                     wavefunction(es, n, t + dt, g)));
        expect = std::max(expect, std::abs(invariant_expectation(es, now, t) -
                                           2 * std::sqrt(C0) * (n + 0.5)));
        basis.push_back(now.values);
      }
      for (int m = 0; m <= 5; ++m) {
        for (int n = 0; n <= 5; ++n) {
          const Complex ip = inner_product(g, basis[m], basis[n]);
          gram = std::max(gram, std::abs(ip - (m == n ? 1.0 : 0.0)));
        }
      }
    }
    r.checks.push_back(at_most("schrodinger_residual", schro, tol("schrodinger")));
    r.checks.push_back(at_most("invariant_eigenvalue_error", expect, tol("invariant_eigenvalue")));
    r.checks.push_back(at_most("gram_identity_error", gram, tol("gram")));
    return r;
  }

  // criterion 9
  CriterionResult pinney() const {
    CriterionResult r = criterion(9, "pinney",
                      "Ermakov residual at 50 times for three initial-data triples");
    const OscillatorParams params = OscillatorParams::unit(1.0, 0.2);
    const auto sol = solve(CoefficientModel::dpo(params), 3.0);
    const PinneyValue mapped =
        initial_conditions_from_gaussian(HermiteGaussianSpec(1.0, 0.25, 0), 1.0, params);
    struct Triple {
      std::string label;
      double C0, mu, dmu;
    };
    const std::vector<Triple> triples{
        {"gaussian eps=1 delta=0.25 C0=1", 1.0, mapped.mu, mapped.dmu},
        {"C0=1 mu=1 dmu=0", 1.0, 1.0, 0.0},
        {"C0=4 mu=0.7 dmu=-0.3", 4.0, 0.7, -0.3},
    };
    for (const Triple& tr : triples) {
      const ErmakovSolution es(sol, tr.C0, tr.mu, tr.dmu);
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        worst = std::max(worst, ermakov_residual(es, 3.0 * (i + 0.5) / 50));
      }
      r.checks.push_back(at_most(tr.label, worst, tol("pinney")));
    }
    return r;
  }

  // criterion 10
  CriterionResult periodicity() const {
    CriterionResult r = criterion(10, "periodicity",
                      "20 pump ratios ruled out with the closed-form minima; d0 = 0 form");
    int wrong_verdicts = 0;
    double p_err = 0.0, q_err = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double ratio = k / 21.0;
      const PeriodicityReport rep =
          classify_periodicity(to_ince_form(OscillatorParams::unit(1.0, ratio)));
      if (rep.pi_pair_possible || rep.two_pi_pair_possible) ++wrong_verdicts;
      const double s = ratio * ratio / 4;
      p_err = std::max(p_err, std::abs(rep.p_minimum - 2 * ratio * s));
      q_err = std::max(q_err, std::abs(rep.q_minimum - 4 * ratio * s));
    }
    const PeriodicityReport test = classify_periodicity(InceForm{0.3, 0.6, 1.0, 0.0, 1.0});
    r.checks.push_back(at_most("pairs_not_ruled_out", wrong_verdicts, 0));
    r.checks.push_back(at_most("min_p_error", p_err, tol("periodicity_minimum")));
    r.checks.push_back(at_most("min_q_error", q_err, tol("periodicity_minimum")));
    r.checks.push_back(at_most("d0_form_abs_p0", std::abs(test.polynomials.p(0.0)), 0.0));
    r.checks.push_back(at_least("d0_form_pi_pair_possible", test.pi_pair_possible ? 1 : 0, 1));
    return r;
  }

  // criterion 11 and the c0 = 4 companion
  std::vector<CriterionResult> fourier(bool informational) const {
    CriterionResult r = criterion(11, "fourier_convergence",
                      "r(N) on the d0 = 0 form and on lambda/omega = 0.5, N <= 64");
    const InceForm test{0.3, 0.6, 1.0, 0.0, 1.0};
    std::string series;
    double r64 = kInf;
    for (int n : {8, 16, 32, 64}) {
      const double res = fourier_trial(test, TrialClass::OddPi, n).residual_norm;
      series += "r(" + std::to_string(n) + ") = " + fmt17(res) + "; ";
      r64 = res;
    }
    series.erase(series.size() - 2);
    r.note = "d0 = 0 form, odd pi class: " + series;
    r.checks.push_back(at_most("d0_form_r64", r64, tol("fourier_converged")));

    const InceForm dpo_form = to_ince_form(OscillatorParams::unit(1.0, 0.5));
    double smallest = kInf;
    for (TrialClass cls : {TrialClass::EvenPi, TrialClass::OddPi, TrialClass::EvenTwoPi,
                           TrialClass::OddTwoPi}) {
      for (int n = 4; n <= 64; n *= 2) {
        smallest = std::min(smallest, fourier_trial(dpo_form, cls, n).residual_norm);
      }
    }
    r.checks.push_back(at_least("dpo_min_r", smallest, tol("fourier_stalled")));

    std::vector<CriterionResult> out{r};
    if (informational) {
      CriterionResult info = criterion(11, "fourier_c0_4_companion",
                           "a0 = 0.3, b0 = 0.6, c0 = 4, d0 = 0 (exact solution sin 2s)");
      info.informational = true;
      const double res = fourier_trial(InceForm{0.3, 0.6, 4.0, 0.0, 1.0}, TrialClass::OddPi, 64)
                             .residual_norm;
      info.checks.push_back(at_most("r64", res, tol("fourier_converged")));
      out.push_back(info);
    }
    return out;
  }

  // criterion 12
  CriterionResult consistency() const {
    CriterionResult r = criterion(12, "consistency",
                      "n = 0 wavefunction equals the propagated Gaussian at t = 0.5, 1");
    const OscillatorParams params = OscillatorParams::unit(1.0, 0.2);
    const auto sol = solve(CoefficientModel::dpo(params), 1.0);
    const HermiteGaussianSpec spec(1.0, 0.25, 0);
    const PinneyValue ic = initial_conditions_from_gaussian(spec, 1.0, params);
    const ErmakovSolution es(sol, 1.0, ic.mu, ic.dmu);
    const Grid g(-10, 10, 2048);
    double worst = 0.0;
    for (double t : {0.5, 1.0}) {
      const WaveField a = wavefunction(es, 0, t, g);
      const WaveField b =
          propagate_gaussian_analytic(greens_coefficients(*sol, t), spec.epsilon, spec.delta)
              .sample(g, t);
      worst = std::max(worst, relative_l2_difference(a, b));
    }
    r.checks.push_back(at_most("relative_l2", worst, tol("consistency")));
    return r;
  }

  // criterion 13
  CriterionResult gauge() const {
    CriterionResult r = criterion(13, "gauge_invariance",
                      "psi_n unchanged when C0 is quadrupled with rescaled initial data");
    const OscillatorParams params = OscillatorParams::unit(1.0, 0.2);
    const auto sol = solve(CoefficientModel::dpo(params), 2.0);
    const Grid g(-12, 12, 2048);
    double worst = 0.0;
    for (int n = 0; n <= 5; ++n) {
      const HermiteGaussianSpec spec(1.0, 0.25, n);
      const PinneyValue i1 = initial_conditions_from_gaussian(spec, 1.0, params);
      const PinneyValue i4 = initial_conditions_from_gaussian(spec, 4.0, params);
      const ErmakovSolution e1(sol, 1.0, i1.mu, i1.dmu);
      const ErmakovSolution e4(sol, 4.0, i4.mu, i4.dmu);
      for (double t : {0.5, 1.0, 2.0}) {
        worst = std::max(worst, relative_l2_difference(wavefunction(e4, n, t, g),
                                                       wavefunction(e1, n, t, g)));
      }
    }
    r.checks.push_back(at_most("relative_l2", worst, tol("gauge")));
    return r;
  }

  std::vector<CriterionResult> run(int id, bool informational) const {
    switch (id) {
      case 1: return {special_case_ode()};
      case 2: return {green_coefficients()};
      case 3: return riccati(informational);
      case 4: return {wronskian()};
      case 5: return {mehler()};
      case 6: return {cauchy()};
      case 7: return {unitarity()};
      case 8: return {eigenstates()};
      case 9: return {pinney()};
      case 10: return {periodicity()};
      case 11: return fourier(informational);
      case 12: return {consistency()};
      case 13: return {gauge()};
      default:
        throw Error(ErrorCode::InvalidArgument,
                    "no acceptance criterion " + std::to_string(id));
    }
  }

 private:
  const ToleranceTable& tol_;
};

const char* const kKeys[kCriterionCount + 1] = {
    "",           "special_case_ode", "green_coefficients", "riccati",
    "wronskian",  "mehler",           "cauchy_cross_validation",
    "unitarity",  "eigenstates",      "pinney",
    "periodicity", "fourier_convergence", "consistency", "gauge_invariance"};

}  // namespace

bool CriterionResult::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

const ToleranceTable& default_tolerances() {
  static const ToleranceTable table{
      {"special_case_ode", 1e-8},
      {"special_case_runtime", 1.0},
      {"green_coefficients", 1e-8},
      {"riccati", 1e-5},
      {"wronskian", 1e-8},
      {"mehler", 1e-10},
      {"cauchy", 1e-4},
      {"cauchy_runtime", 30.0},
      {"norm", 1e-6},
      {"cn_step_norm", 1e-10},
      {"schrodinger", 1e-4},
      {"invariant_eigenvalue", 1e-6},
      {"gram", 1e-8},
      {"pinney", 1e-5},
      {"periodicity_minimum", 1e-12},
      {"fourier_converged", 1e-8},
      {"fourier_stalled", 1e-3},
      {"consistency", 1e-6},
      {"gauge", 1e-8},
  };
  return table;
}

std::vector<int> suite_criteria(std::string_view suite) {
  if (suite == "acceptance") {
    std::vector<int> all(kCriterionCount);
    for (int i = 0; i < kCriterionCount; ++i) all[i] = i + 1;
    return all;
  }
  if (suite == "special-case") return {1, 2};
  throw Error(ErrorCode::ConfigInvalid,
              "unknown suite \"" + std::string(suite) +
                  "\" (expected \"acceptance\" or \"special-case\")");
}

std::vector<CriterionResult> run_validation(const ValidationOptions& options) {
  std::vector<int> ids = options.criteria;
  if (ids.empty()) ids = suite_criteria("acceptance");
  for (const auto& [key, value] : default_tolerances()) {
    if (!options.tolerances.count(key)) {
      throw Error(ErrorCode::InvalidArgument, "missing tolerance " + key);
    }
  }
  const Battery battery(options.tolerances);

  std::vector<std::vector<CriterionResult>> slots(ids.size());
  auto work = [&](std::size_t i) {
    const int id = ids[i];
    try {
      slots[i] = battery.run(id, options.informational);
    } catch (const Error& e) {
      if (id < 1 || id > kCriterionCount) throw;
      CriterionResult failed = criterion(id, kKeys[id], "did not complete");
      failed.checks.push_back(at_most("completed", 1, 0));
      failed.note = e.what();
      slots[i] = {failed};
    }
  };

  const std::size_t jobs =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, options.jobs)), 1, ids.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < ids.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < ids.size();) {
          try {
            work(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::vector<CriterionResult> out;
  for (auto& s : slots) {
    for (auto& r : s) out.push_back(std::move(r));
  }
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) {
    return r.informational || r.passed();
  });
}

std::string format_result(const CriterionResult& r) {
  std::string line = r.informational ? "INFO" : (r.passed() ? "PASS" : "FAIL");
  line += " " + std::to_string(r.id) + " " + r.key + ":";
  const char* sep = " ";
  for (const ValidationCheck& c : r.checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g (%s %.3g)", c.measured, c.relation.c_str(),
                  c.tolerance);
    line += sep + c.label + " = " + buf;
    sep = "; ";
  }
  if (!r.note.empty()) line += " [" + r.note + "]";
  return line;
}

nlohmann::json to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json list = nlohmann::json::array();
  for (const CriterionResult& r : results) {
    nlohmann::json checks = nlohmann::json::array();
    for (const ValidationCheck& c : r.checks) {
      nlohmann::json jc{{"label", c.label},
                        {"relation", c.relation},
                        {"tolerance", c.tolerance},
                        {"passed", c.passed}};
      if (!c.timing) {
        // JSON has no infinity; an undefined measurement is written as null
        jc["measured"] = std::isfinite(c.measured) ? nlohmann::json(c.measured)
                                                   : nlohmann::json(nullptr);
      }
      checks.push_back(std::move(jc));
    }
    nlohmann::json jr{{"id", r.id},
                      {"key", r.key},
                      {"title", r.title},
                      {"informational", r.informational},
                      {"passed", r.passed()},
                      {"checks", std::move(checks)}};
    if (!r.note.empty()) jr["note"] = r.note;
    list.push_back(std::move(jr));
  }
  return {{"passed", all_passed(results)}, {"criteria", std::move(list)}};
}

}  // namespace inceprop
