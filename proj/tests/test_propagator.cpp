#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "inceprop/propagator.hpp"
#include "support.hpp"

using namespace inceprop;

namespace {

constexpr double kPi = std::numbers::pi;

CharacteristicSolution solve(const CoefficientModel& m, double t_max) {
  SolveOptions o;
  o.t_max = t_max;
  return solve_standard_pair(characteristic_form(m), o);
}

WaveField gaussian(const Grid& g, double eps, double delta, double shift = 0.0) {
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i) - shift;
    v[i] = std::sqrt(eps / std::sqrt(kPi)) *
           std::exp(Complex(-0.5 * eps * eps, delta) * (x * x));
  }
  return WaveField(g, std::move(v), 0.0);
}

}  // namespace

TEST_CASE("harmonic-limit coefficients") {
  const auto sol = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 6.0);
  for (double t : {0.3, 1.0, 2.0, 4.0, 5.5}) {
    const auto pc = greens_coefficients(sol, t);
    CHECK(pc.alpha == doctest::Approx(std::cos(t) / (2 * std::sin(t))).epsilon(1e-8));
    CHECK(pc.gamma == doctest::Approx(std::cos(t) / (2 * std::sin(t))).epsilon(1e-8));
    CHECK(pc.beta == doctest::Approx(-1 / std::sin(t)).epsilon(1e-8));
    CHECK(pc.branch == (t > kPi ? 1 : 0));
  }
  CHECK_ERROR_CODE(greens_coefficients(sol, 0.0), TimeNotPositive);
  CHECK_ERROR_CODE(greens_coefficients(sol, -1.0), TimeNotPositive);
  CHECK_ERROR_CODE(greens_coefficients(sol, sol.zeros().at(0)), CausticEncountered);
}

TEST_CASE("kernel values") {
  const auto sho = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 2.0);
  const auto pc = greens_coefficients(sho, kPi / 2);
  const Complex ref_pref = 1.0 / std::sqrt(Complex(0.0, 2 * kPi));
  for (double x : {-1.3, 0.0, 0.7}) {
    for (double y : {-2.0, 0.4}) {
      const Complex ref = ref_pref * std::exp(Complex(0.0, -x * y));
      CHECK(std::abs(greens_kernel(pc, x, y) - ref) <= 1e-8);
    }
  }

  const auto sc = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 1)), 1.0);
  const auto p5 = greens_coefficients(sc, 0.5);
  const Complex g00 = greens_kernel(p5, 0.0, 0.0);
  CHECK(std::abs(g00) == doctest::Approx(0.399358).epsilon(1e-5));
  CHECK(std::arg(g00) == doctest::Approx(-kPi / 4).epsilon(1e-12));

  // modulus independent of x, y
  const auto dpo = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0.4)), 2.0);
  const auto p = greens_coefficients(dpo, 1.3);
  const double mod = 1.0 / std::sqrt(2 * kPi * std::abs(p.mu0));
  for (double x : {-5.0, 0.1, 3.3}) {
    for (double y : {-4.0, 2.2}) {
      CHECK(std::abs(std::abs(greens_kernel(p, x, y)) - mod) <= 1e-15);
      CHECK(std::abs(greens_kernel(p, x, y)) == doctest::Approx(std::abs(greens_kernel(p, y, x))));
    }
  }
}

TEST_CASE("branch continuity across caustics") {
  // Just past a caustic the phase has moved by -pi/2 relative to the
  // principal value just before it.
  const auto sho = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 7.0);
  const auto before = greens_coefficients(sho, kPi - 1e-3);
  const auto after = greens_coefficients(sho, kPi + 1e-3);
  CHECK(before.branch == 0);
  CHECK(after.branch == 1);
  CHECK(std::arg(before.prefactor()) == doctest::Approx(-kPi / 4));
  CHECK(std::arg(after.prefactor()) == doctest::Approx(-3 * kPi / 4));
  const auto twice = greens_coefficients(sho, 2 * kPi + 0.5);
  CHECK(twice.branch == 2);
  CHECK(std::arg(twice.prefactor()) == doctest::Approx(3 * kPi / 4));
}

TEST_CASE("small-t asymptotics") {
  const auto model = CoefficientModel::dpo(OscillatorParams::unit(1, 0.3));
  const auto sol = solve(model, 0.1);
  const double a0 = model(0.0).a, c0 = model(0.0).c;
  for (double t : {1e-4, 1e-5}) {
    const auto pc = greens_coefficients(sol, t);
    CHECK(t * pc.beta == doctest::Approx(-1 / (2 * a0)).epsilon(1e-3));
    CHECK(t * (pc.gamma - c0 / (2 * a0)) == doctest::Approx(1 / (4 * a0)).epsilon(1e-3));
  }
}

TEST_CASE("quadrature preserves the harmonic ground state") {
  const auto sho = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 2.0);
  const Grid g(-10, 10, 2048);
  const WaveField chi = gaussian(g, 1.0, 0.0);
  const WaveField psi = propagate_quadrature(greens_coefficients(sho, kPi / 2), chi);
  const Complex phase = std::polar(1.0, -kPi / 4);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(psi.values[i] - phase * chi.values[i]));
  }
  CHECK(err <= 1e-6);
  CHECK(std::abs(l2_norm(psi) - l2_norm(chi)) <= 1e-6 * l2_norm(chi));
}

TEST_CASE("direct and chirp-z sums agree") {
  const auto dpo = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0.2)), 1.0);
  const auto pc = greens_coefficients(dpo, 1.0);
  const Grid g(-10, 10, 1500);
  const WaveField chi = gaussian(g, 1.2, 0.3, 0.5);
  const WaveField a = propagate_quadrature(pc, chi, QuadratureMethod::Direct);
  const WaveField b = propagate_quadrature(pc, chi, QuadratureMethod::ChirpZ);
  CHECK(relative_l2_difference(a, b) <= 1e-12);
}

TEST_CASE("quadrature matches the closed-form Gaussian") {
  const auto dpo = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0.2)), 1.0);
  const auto pc = greens_coefficients(dpo, 1.0);
  const Grid g(-12, 12, 3001);
  for (double delta : {0.0, 0.4}) {
    const WaveField chi = gaussian(g, 1.0, delta);
    const WaveField quad = propagate_quadrature(pc, chi);
    const WaveField exact = propagate_gaussian_analytic(pc, 1.0, delta).sample(g, 1.0);
    CHECK(relative_l2_difference(quad, exact) <= 1e-8);
    CHECK(std::abs(l2_norm(quad) - 1.0) <= 1e-6);
  }
}

TEST_CASE("identity limit") {
  const auto dpo = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0.2)), 0.01);
  const auto pc = greens_coefficients(dpo, 1e-3);
  // |beta| ~ 1/(2 a(0) t); the phase gate needs a fine grid
  const Grid g(-7.5, 7.5, 150001);
  const WaveField chi = gaussian(g, 1.0, 0.0);
  const WaveField psi = propagate_quadrature(pc, chi);
  CHECK(relative_l2_difference(psi, chi) <= 1e-3);

  const GaussianProfile gp = propagate_gaussian_analytic(greens_coefficients(dpo, 1e-6), 1.0, 0.0);
  CHECK(std::abs(gp.exponent - Complex(-0.5, 0.0)) <= 1e-4);
  CHECK(std::abs(gp.amplitude - std::pow(kPi, -0.25)) <= 1e-4);
}

TEST_CASE("analytic Gaussian in the harmonic limit is stationary in density") {
  const auto sho = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 6.0);
  for (double t : {0.4, 2.0, 4.0}) {
    const auto gp = propagate_gaussian_analytic(greens_coefficients(sho, t), 1.0, 0.0);
    for (double x : {0.0, 0.8, 2.1}) {
      CHECK(std::norm(gp(x)) == doctest::Approx(std::exp(-x * x) / std::sqrt(kPi)).epsilon(1e-8));
    }
  }
  PropagatorCoefficients bad;
  bad.t = 1.0;
  bad.mu0 = 1.0;
  CHECK_ERROR_CODE(propagate_gaussian_analytic(bad, -1.0, 0.0), InvalidArgument);
}

TEST_CASE("semigroup in the harmonic limit") {
  const auto sho = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 2.0);
  const Grid g(-10, 10, 2048);
  const WaveField chi = gaussian(g, 1.3, 0.2, 1.0);
  const WaveField one = propagate_quadrature(greens_coefficients(sho, 0.4), chi);
  const WaveField two = propagate_quadrature(greens_coefficients(sho, 0.6), one);
  const WaveField direct = propagate_quadrature(greens_coefficients(sho, 1.0), chi);
  CHECK(relative_l2_difference(two, direct) <= 1e-5);
}

TEST_CASE("quadrature preconditions") {
  const auto dpo = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0.2)), 1.0);
  const auto pc = greens_coefficients(dpo, 0.01);
  const Grid g(-10, 10, 256);
  CHECK_ERROR_CODE(propagate_quadrature(pc, gaussian(g, 1.0, 0.0)), GridUnderResolved);
  const auto slow = greens_coefficients(dpo, 1.0);
  const Grid narrow(-3, 3, 256);
  CHECK_ERROR_CODE(propagate_quadrature(slow, gaussian(narrow, 1.0, 0.0)), TailNotDecayed);
}

TEST_CASE("riccati residual") {
  const auto sho = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 2.0);
  std::vector<PropagatorCoefficients> pcs;
  for (int i = 0; i <= 1000; ++i) pcs.push_back(greens_coefficients(sho, 0.5 + 1e-4 * i));
  CHECK(riccati_residual(pcs, sho.model()) <= 1e-6);
  // analytic check of the same identity: d/dt(cot t / 2) + 1/(2 sin^2 t) = 0
  for (const auto& pc : pcs) {
    CHECK(std::abs(pc.gamma - 0.5 / std::tan(pc.t)) <= 1e-8);
  }

  const auto sc = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 1)), 1.3);
  pcs.clear();
  // gamma ~ 1/(4t) near 0.2, so the centered-difference error is about
  // 1.5 dt^2 / t^4; dt = 5e-5 keeps it under 1e-6
  for (int i = 0; i <= 20000; ++i) pcs.push_back(greens_coefficients(sc, 0.2 + 5e-5 * i));
  CHECK(riccati_residual(pcs, sc.model()) <= 1e-6);

  std::vector<PropagatorCoefficients> coarse{pcs[0], pcs[100], pcs[200]};
  CHECK_ERROR_CODE(riccati_residual(coarse, sc.model()), InvalidArgument);
}

TEST_CASE("coefficient json rows") {
  const auto sho = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 2.0);
  const auto j = to_json(greens_coefficients(sho, 1.0));
  for (const char* key : {"t", "alpha", "beta", "gamma", "mu0", "branch"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.at("branch") == 0);
}
