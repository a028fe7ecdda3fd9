#include <cmath>
#include <numbers>
#include <random>

#include "inceprop/ermakov_invariant.hpp"
#include "inceprop/propagator.hpp"
#include "inceprop/reference_oracles.hpp"
#include "support.hpp"

using namespace inceprop;

namespace {

constexpr double kPi = std::numbers::pi;

WaveField gaussian(const Grid& g, double eps, double delta, double t = 0.0) {
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    v[i] = std::sqrt(eps / std::sqrt(kPi)) *
           std::exp(Complex(-0.5 * eps * eps, delta) * (x * x));
  }
  return WaveField(g, std::move(v), t);
}

}  // namespace

TEST_CASE("special-case closed forms") {
  const SpecialCaseMu z = special_case_mu(0.0);
  CHECK(z.mu0 == 0.0);
  CHECK(z.mu1 == 1.0);
  CHECK(z.dmu0 == 2.0);
  CHECK(z.dmu1 == 0.0);
  const SpecialCaseMu h = special_case_mu(0.5);
  CHECK(std::abs(h.mu0 - 0.997917) <= 1e-6);
  CHECK(std::abs(h.mu1 - 1.2394113) <= 1e-6);

  auto residual = [](double mu, double dmu, double ddmu, double t) {
    return std::abs(ddmu + 2 * std::tan(t) * dmu - 2 * mu);
  };
  const SpecialCaseMu m = special_case_mu(0.3);
  CHECK(residual(m.mu0, m.dmu0, m.ddmu0, 0.3) <= 1e-9);
  CHECK(residual(m.mu1, m.dmu1, m.ddmu1, 0.3) <= 1e-9);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  int sampled = 0;
  while (sampled < 100) {
    const double t = u(rng);
    const double k = std::round((t - kPi / 2) / kPi);
    if (std::abs(t - (kPi / 2 + k * kPi)) <= 0.05) continue;
    const SpecialCaseMu s = special_case_mu(t);
    const double scale = 1 + std::abs(s.mu0) + std::abs(s.mu1) + std::abs(s.dmu0);
    CHECK(residual(s.mu0, s.dmu0, s.ddmu0, t) <= 1e-9 * scale);
    CHECK(residual(s.mu1, s.dmu1, s.ddmu1, t) <= 1e-9 * scale);
    // derivatives against central differences
    const double e = 1e-6;
    CHECK(std::abs((special_case_mu(t + e).mu0 - special_case_mu(t - e).mu0) / (2 * e) - s.dmu0) <=
          1e-6 * scale);
    CHECK(std::abs((special_case_mu(t + e).mu1 - special_case_mu(t - e).mu1) / (2 * e) - s.dmu1) <=
          1e-6 * scale);
    ++sampled;
  }
}

TEST_CASE("special-case kernel against the pipeline") {
  SolveOptions o;
  o.t_max = 1.2;
  const auto sol = solve_standard_pair(
      characteristic_form(CoefficientModel::dpo(OscillatorParams::unit(1, 1))), o);
  const auto pc = greens_coefficients(sol, 0.5);
  const SpecialCaseMu m = special_case_mu(0.5);
  const double t = 0.5;
  CHECK(std::abs(pc.alpha - (std::cos(t) * std::cosh(t) - std::sin(t) * std::sinh(t)) / (2 * m.mu0)) <= 1e-8);
  CHECK(std::abs(pc.beta + 1 / m.mu0) <= 1e-8);
  CHECK(std::abs(pc.gamma - m.mu1 / (2 * m.mu0)) <= 1e-8);
  for (double x : {-1.0, 0.3}) {
    for (double y : {-0.7, 1.1}) {
      CHECK(std::abs(special_case_green(x, y, t) - greens_kernel(pc, x, y)) <= 1e-8);
    }
  }
  // (2 pi * 0.997917)^{-1/2}
  CHECK(std::abs(special_case_green(0, 0, t)) == doctest::Approx(0.399358).epsilon(1e-5));
  CHECK_ERROR_CODE(special_case_green(0.0, 0.0, 0.0), CausticEncountered);

  // identity limit: int G(x, y, t) e^{-y^2} dy -> e^{-x^2}. At t = 1e-3 the
  // O(t) term -i t H e^{-x^2} = -i t (2 - 4x^2) e^{-x^2} is still 2e-3 at x = 0,
  // so compare with the first-order expansion and check the remainder is O(t^2).
  const double ts = 1e-3;
  const Grid g(-6, 6, 120001);
  for (double x : {0.0, 0.5, 1.2}) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double y = g.x(i);
      const double w = (i == 0 || i + 1 == g.size()) ? 0.5 : 1.0;
      acc += w * special_case_green(x, y, ts) * std::exp(-y * y);
    }
    acc *= g.spacing();
    const double chi = std::exp(-x * x);
    const Complex first = chi * Complex(1.0, -ts * (2 - 4 * x * x));
    CHECK(std::abs(acc - first) <= 1e-5);
    CHECK(std::abs(acc - chi) <= 2.5 * ts);
  }
}

TEST_CASE("mehler kernel") {
  const Complex ref = 1.0 / std::sqrt(Complex(0.0, 2 * kPi));
  CHECK(std::abs(mehler_kernel(1, 1, 1, 0.4, -1.2, kPi / 2) -
                 ref * std::exp(Complex(0.0, 0.48))) <= 1e-14);
  CHECK_ERROR_CODE(mehler_kernel(1, 1, 1, 0, 0, kPi), CausticEncountered);
  CHECK_ERROR_CODE(mehler_kernel(2, 1, 1, 0, 0, kPi), CausticEncountered);
  CHECK(mehler_kernel(1.3, 0.7, 1.1, 0.2, 0.9, 0.8) == mehler_kernel(1.3, 0.7, 1.1, 0.9, 0.2, 0.8));

  // general units and a time past the first caustic
  const OscillatorParams p(0.7, 1.3, 0.0, 1.1);
  SolveOptions o;
  o.t_max = 4.0;
  const auto sol = solve_standard_pair(characteristic_form(CoefficientModel::dpo(p)), o);
  for (double t : {0.7, 3.1}) {
    const auto pc = greens_coefficients(sol, t);
    for (double x : {-2.0, 0.5}) {
      for (double y : {-1.0, 1.5}) {
        CHECK(std::abs(mehler_kernel(1.3, 0.7, 1.1, x, y, t) - greens_kernel(pc, x, y)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("discrete hamiltonian is hermitian for c == d") {
  const auto model = CoefficientModel::dpo(OscillatorParams::unit(1, 0.4));
  const Grid g(-5, 5, 64);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  std::vector<Complex> u(g.size()), v(g.size());
  for (auto& z : u) z = {n(rng), n(rng)};
  for (auto& z : v) z = {n(rng), n(rng)};
  const auto hu = apply_hamiltonian(model, 0.3, g, u);
  const auto hv = apply_hamiltonian(model, 0.3, g, v);
  Complex uhv = 0.0, hu_v = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    uhv += std::conj(u[i]) * hv[i];
    hu_v += std::conj(hu[i]) * v[i];
  }
  CHECK(std::abs(uhv - hu_v) <= 1e-9 * std::abs(uhv));
}

TEST_CASE("crank-nicolson keeps the harmonic ground state stationary") {
  const auto model = CoefficientModel::dpo(OscillatorParams::unit(1, 0));
  const Grid g(-10, 10, 1024);
  const WaveField chi = gaussian(g, 1.0, 0.0);
  CrankNicolsonStats stats;
  double worst = 0.0;
  const WaveField end = crank_nicolson_evolve(
      model, chi, 2 * kPi, OracleConfig(g, 1e-3), &stats, [&](const WaveField& f) {
        for (std::size_t i = 0; i < g.size(); ++i) {
          worst = std::max(worst, std::abs(std::norm(f.values[i]) - std::norm(chi.values[i])));
        }
      });
  CHECK(worst <= 1e-6);
  CHECK(stats.max_step_norm_drift <= 1e-10);
  CHECK(stats.steps == 6284);
  CHECK(end.t == 2 * kPi);
}

TEST_CASE("crank-nicolson matches the Green-function propagation") {
  const auto model = CoefficientModel::dpo(OscillatorParams::unit(1, 0.2));
  const Grid g(-10, 10, 2048);
  const WaveField chi = gaussian(g, 1.0, 0.0);
  CrankNicolsonStats stats;
  const WaveField cn = crank_nicolson_evolve(model, chi, 1.0, OracleConfig(g, 1e-3), &stats);
  SolveOptions o;
  o.t_max = 1.0;
  const auto sol = solve_standard_pair(characteristic_form(model), o);
  const WaveField quad = propagate_quadrature(greens_coefficients(sol, 1.0), chi);
  CHECK(relative_l2_difference(quad, cn) <= 1e-4);
  CHECK(stats.max_step_norm_drift <= 1e-10);
}

TEST_CASE("crank-nicolson conserves the invariant expectation") {
  const auto model = CoefficientModel::dpo(OscillatorParams::unit(1, 0.2));
  SolveOptions o;
  o.t_max = 2 * kPi + 0.01;
  auto sol = std::make_shared<const CharacteristicSolution>(
      solve_standard_pair(characteristic_form(model), o));
  const ErmakovSolution es(sol, 1.0, 1.0, 0.0);
  // The packet breathes to several times its initial width; the drift is
  // dominated by the O(dt^2) time error.
  const Grid g(-24, 24, 2048);
  const WaveField chi = gaussian(g, 1.0, 0.2);
  const double e0 = invariant_expectation(es, chi, 0.0);
  double drift = 0.0;
  std::size_t k = 0;
  crank_nicolson_evolve(model, chi, 2 * kPi, OracleConfig(g, 2.5e-4), nullptr,
                        [&](const WaveField& f) {
                          if (++k % 400 == 0) {
                            drift = std::max(drift, std::abs(invariant_expectation(es, f, f.t) - e0));
                          }
                        });
  CHECK(drift <= 1e-5);
}

TEST_CASE("crank-nicolson error paths") {
  const auto model = CoefficientModel::dpo(OscillatorParams::unit(1, 0));
  const Grid g(-4, 4, 256);
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::exp(-(g.x(i) - 2.0) * (g.x(i) - 2.0) / 0.5);
  CHECK_ERROR_CODE(crank_nicolson_evolve(model, WaveField(g, v, 0.0), 1.0, OracleConfig(g, 1e-3)),
                   BoundaryContamination);
  const Grid other(-5, 5, 256);
  CHECK_ERROR_CODE(crank_nicolson_evolve(model, gaussian(g, 1.0, 0.0), 1.0, OracleConfig(other, 1e-3)),
                   GridMismatch);
  CHECK_ERROR_CODE(OracleConfig(g, 0.0), InvalidArgument);
}

TEST_CASE("schrodinger residual discriminates") {
  const auto model = CoefficientModel::dpo(OscillatorParams::unit(1, 0));
  const Grid g(-10, 10, 2048);
  const double t = 0.6, dt = 1e-4;
  auto state = [&](double s) {
    WaveField f = gaussian(g, 1.0, 0.0, s);
    for (auto& z : f.values) z *= std::polar(1.0, -0.5 * s);
    return f;
  };
  CHECK(schrodinger_residual(model, state(t - dt), state(t), state(t + dt)) <= 1e-6);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  auto noise = [&](double s) {
    std::vector<Complex> v(g.size());
    for (auto& z : v) z = {n(rng), n(rng)};
    return WaveField(g, v, s);
  };
  CHECK(schrodinger_residual(model, noise(t - dt), noise(t), noise(t + dt)) >= 0.1);

  const Grid other(-10, 10, 1024);
  CHECK_ERROR_CODE(schrodinger_residual(model, state(t - dt), gaussian(other, 1.0, 0.0, t), state(t + dt)),
                   GridMismatch);
}
