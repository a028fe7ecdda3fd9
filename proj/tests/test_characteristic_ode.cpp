#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inceprop/characteristic_ode.hpp"
#include "support.hpp"

using namespace inceprop;

namespace {

constexpr double kPi = std::numbers::pi;

CharacteristicSolution solve(const CoefficientModel& m, double t_max,
                             double t_min = 0.0, double mu1 = 1.0) {
  SolveOptions o;
  o.t_max = t_max;
  o.t_min = t_min;
  o.mu1_initial = mu1;
  return solve_standard_pair(characteristic_form(m), o);
}

// Fixed-step RK4 on the DPO characteristic equation written in the Ince
// variable s = omega t; independent of the library's tau/sigma assembly.
std::array<double, 4> rk4_dpo(double r, double omega, double a0, double t_end,
                              int steps) {
  auto rhs = [&](double t, const std::array<double, 4>& y) {
    const double s = omega * t;
    const double den = 1 + r * std::cos(2 * s);
    auto acc = [&](double mu, double dmu) {
      return -omega * omega *
             (2 * r * std::sin(2 * s) * dmu / omega +
              (1 - 3 * r * r - r * (1 + r * r) * std::cos(2 * s)) * mu) /
             den;
    };
    return std::array<double, 4>{y[1], acc(y[0], y[1]), y[3], acc(y[2], y[3])};
  };
  std::array<double, 4> y{0.0, 2 * a0, 1.0, 0.0};
  const double h = t_end / steps;
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    auto k1 = rhs(t, y);
    std::array<double, 4> tmp;
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    auto k2 = rhs(t + 0.5 * h, tmp);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    auto k3 = rhs(t + 0.5 * h, tmp);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * k3[j];
    auto k4 = rhs(t + h, tmp);
    for (int j = 0; j < 4; ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    t += h;
  }
  return y;
}

}  // namespace

TEST_CASE("characteristic form values") {
  const auto sho = characteristic_form(CoefficientModel::dpo(OscillatorParams::unit(1, 0)));
  CHECK(sho.tau(1.3) == 0.0);
  CHECK(sho.sigma(1.3) == doctest::Approx(0.25));

  const auto f = characteristic_form(CoefficientModel::dpo(OscillatorParams::unit(1, 0.5)));
  // Dividing the Ince equation by (1 + a0 cos 2s): mu'' - tau mu' + 4 sigma mu = 0
  // with tau = -omega b0 sin 2s/(1 + a0 cos 2s).
  CHECK(f.tau(kPi / 4) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(f.sigma(kPi / 4) == doctest::Approx(0.0625).epsilon(1e-14));

  // DPO closed forms at generic times, general units
  const OscillatorParams p(1.7, 2.3, 0.9, 0.6);
  const auto g = characteristic_form(CoefficientModel::dpo(p));
  const double w = 2.3, lam = 0.9;
  for (double t : {0.1, 0.77, 2.9}) {
    const double s2 = 2 * w * t;
    const double tau = -2 * lam * w * std::sin(s2) / (w + lam * std::cos(s2));
    const double r = lam / w;
    const double sigma = w * w * (1 - 3 * r * r - r * (1 + r * r) * std::cos(s2)) /
                         (4 * (1 + r * std::cos(s2)));
    CHECK(g.tau(t) == doctest::Approx(tau).epsilon(1e-12));
    CHECK(std::abs(g.sigma(t) - sigma) <= 1e-10);
  }

  GenericCoefficients degenerate{[](double t) { return std::cos(t); },
                                 [](double) { return 1.0; },
                                 [](double) { return 0.0; },
                                 [](double) { return 0.0; },
                                 [](double t) { return -std::sin(t); },
                                 {}};
  const auto d = characteristic_form(CoefficientModel::generic(degenerate));
  CHECK_ERROR_CODE(d.at(kPi / 2), KineticDegenerate);
}

TEST_CASE("harmonic limit pair is sin and cos") {
  const auto sol = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 2 * kPi);
  double err = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = 2 * kPi * i / 400;
    const StandardPair p = sol.at(t);
    err = std::max({err, std::abs(p.mu0 - std::sin(t)), std::abs(p.mu1 - std::cos(t)),
                    std::abs(p.dmu0 - std::cos(t)), std::abs(p.dmu1 + std::sin(t)),
                    std::abs(p.lambda_f - 1.0)});
    CHECK(wronskian_residual(sol, t) <= 1e-9);
  }
  CHECK(err <= 1e-8);
  REQUIRE(sol.zeros().size() == 2);
  CHECK(sol.zeros()[0] == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(sol.zeros()[1] == doctest::Approx(2 * kPi).epsilon(1e-10));
  CHECK(sol.zeros_before(3.0) == 0);
  CHECK(sol.zeros_before(4.0) == 1);
}

TEST_CASE("special case lambda = omega = 1 values") {
  const auto sol = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 1)), 1.4);
  const double t = 0.5;
  const StandardPair p = sol.at(t);
  const double mu0 = std::cos(t) * std::sinh(t) + std::sin(t) * std::cosh(t);
  const double mu1 = std::cos(t) * std::cosh(t) + std::sin(t) * std::sinh(t);
  CHECK(std::abs(p.mu0 - 0.997917) <= 1e-6);
  CHECK(std::abs(p.mu1 - 1.2394113) <= 1e-6);
  CHECK(std::abs(p.mu0 - mu0) <= 1e-9);
  CHECK(std::abs(p.mu1 - mu1) <= 1e-9);
  CHECK(wronskian(p) == doctest::Approx(-2 * std::cos(t) * std::cos(t)).epsilon(1e-9));
  CHECK(wronskian_residual(sol, t) <= 1e-8);
}

TEST_CASE("dpo pair against an independent fixed-step integrator") {
  for (double r : {0.2, 0.5, 0.8}) {
    const double omega = 1.3;
    const OscillatorParams p(1.0, omega, r * omega, 1.0);
    const auto sol = solve(CoefficientModel::dpo(p), 3.0);
    const double a0 = 0.5 * (1 + r);
    const auto ref = rk4_dpo(r, omega, a0, 3.0, 30000);
    const StandardPair v = sol.at(3.0);
    CHECK(std::abs(v.mu0 - ref[0]) <= 1e-8 * (1 + std::abs(ref[0])));
    CHECK(std::abs(v.dmu0 - ref[1]) <= 1e-8 * (1 + std::abs(ref[1])));
    CHECK(std::abs(v.mu1 - ref[2]) <= 1e-8 * (1 + std::abs(ref[2])));
    CHECK(std::abs(v.dmu1 - ref[3]) <= 1e-8 * (1 + std::abs(ref[3])));
    CHECK(v.lambda_f == 1.0);
  }
}

TEST_CASE("initial data, Abel property and zero detection") {
  const auto sol = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0.5)), 8.0);
  CHECK(wronskian_residual(sol, 0.0) == 0.0);
  const StandardPair p0 = sol.at(1e-12);
  CHECK(std::abs(p0.mu0) <= 1e-12 + 2 * 0.75 * 1e-12);
  CHECK(std::abs(p0.dmu0 - 1.5) <= 1e-11);
  CHECK(std::abs(p0.mu1 - 1.0) <= 1e-12);
  CHECK(std::abs(p0.dmu1) <= 1e-11);
  for (int i = 0; i < 50; ++i) {
    const double t = 8.0 * i / 49;
    CHECK(wronskian_residual(sol, t) <= 100 * sol.rtol());
  }
  REQUIRE_FALSE(sol.zeros().empty());
  for (double z : sol.zeros()) {
    CHECK(std::abs(sol.at(z).mu0) <= sol.atol());
    CHECK(sol.at(z - 1e-3).mu0 * sol.at(z + 1e-3).mu0 < 0.0);
  }
  CHECK(sol.zeros()[0] == doctest::Approx(2.44289).epsilon(1e-5));
}

TEST_CASE("linearity in mu1(0) and time reversal") {
  const auto model = CoefficientModel::dpo(OscillatorParams::unit(1, 0.3));
  const auto one = solve(model, 4.0, 0.0, 1.0);
  const auto two = solve(model, 4.0, 0.0, 2.0);
  for (double t : {0.3, 1.1, 2.5, 3.9}) {
    CHECK(two.at(t).mu1 == doctest::Approx(2 * one.at(t).mu1).epsilon(1e-9));
    CHECK(two.at(t).mu0 == doctest::Approx(one.at(t).mu0).epsilon(1e-9));
    CHECK(wronskian_residual(two, t) <= 1e-8);
  }

  const auto sym = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0)), 3.0, -3.0);
  for (double t : {0.4, 1.7, 2.9}) {
    CHECK(std::abs(sym.at(t).mu0 + sym.at(-t).mu0) <= 1e-9);
    CHECK(std::abs(sym.at(t).mu1 - sym.at(-t).mu1) <= 1e-9);
  }
}

TEST_CASE("integrating factor for c != d") {
  // c - d = 0.3 cos t  =>  lambda_f = exp(0.3 sin t)
  GenericCoefficients fns{[](double) { return 0.5; }, [](double) { return 0.5; },
                          [](double t) { return 0.3 * std::cos(t); },
                          [](double) { return 0.0; }, [](double) { return 0.0; },
                          [](double t) { return -0.3 * std::sin(t); }};
  const auto sol = solve(CoefficientModel::generic(fns), 3.0);
  for (double t : {0.5, 1.5, 3.0}) {
    CHECK(sol.at(t).lambda_f == doctest::Approx(std::exp(0.3 * std::sin(t))).epsilon(1e-9));
    CHECK(wronskian_residual(sol, t) <= 1e-8);
  }
}

TEST_CASE("solver error paths") {
  GenericCoefficients through_zero{[](double t) { return 0.5 - t; },
                                   [](double) { return 1.0; },
                                   [](double) { return 0.0; },
                                   [](double) { return 0.0; },
                                   [](double) { return -1.0; },
                                   {}};
  SolveOptions o;
  o.t_max = 1.0;
  auto code = testing::code_of(
      [&] { solve_standard_pair(characteristic_form(CoefficientModel::generic(through_zero)), o); });
  REQUIRE(code.has_value());
  CHECK((*code == ErrorCode::KineticDegenerate || *code == ErrorCode::StepSizeUnderflow));

  const auto sol = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0.2)), 1.0);
  CHECK_THROWS(sol.at(1.5));
}

TEST_CASE("characteristic csv") {
  const auto sol = solve(CoefficientModel::dpo(OscillatorParams::unit(1, 0.2)), 1.0);
  std::ostringstream os;
  const std::vector<double> ts{0.0, 0.5, 1.0};
  write_characteristic_csv(os, sol, ts);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  CHECK(header ==
        "t[time],mu0[length^2],dmu0[length^2/time],mu1[1],dmu1[1/time],"
        "lambda_f[1],wronskian_residual[length^2/time]");
  int rows = 0;
  while (std::getline(is, row)) ++rows;
  CHECK(rows == 3);
}
