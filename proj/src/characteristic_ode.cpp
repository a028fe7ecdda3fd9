#include "inceprop/characteristic_ode.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "inceprop/text_format.hpp"

namespace inceprop {

CharacteristicForm::Values CharacteristicForm::at(double t) const {
  const QuadraticCoefficients q = model_(t);
  if (!(std::abs(q.a) >= kDegenerateKinetic)) {
    throw Error(ErrorCode::KineticDegenerate,
                "a(t) = " + std::to_string(q.a) + " at t = " + std::to_string(t));
  }
  Values v;
  v.coefficients = q;
  v.tau = q.da / q.a + 2.0 * q.c - 2.0 * q.d;
  v.sigma = q.a * q.b - q.c * q.d + q.da * q.c / (2.0 * q.a) - 0.5 * q.dc;
  return v;
}

CharacteristicForm characteristic_form(CoefficientModel model) {
  return CharacteristicForm(std::move(model));
}

CharacteristicSolution::CharacteristicSolution(CharacteristicForm form,
                                               Trajectory trajectory,
                                               SolveOptions options, double a0,
                                               std::vector<double> zeros)
    : form_(std::move(form)),
      trajectory_(std::move(trajectory)),
      options_(options),
      a0_(a0),
      zeros_(std::move(zeros)) {}

StandardPair CharacteristicSolution::at(double t) const {
  const auto y = trajectory_(t);
  return {y[0], y[1], y[2], y[3], y[4]};
}

int CharacteristicSolution::zeros_before(double t) const {
  return static_cast<int>(
      std::lower_bound(zeros_.begin(), zeros_.end(), t) - zeros_.begin());
}

double wronskian(const StandardPair& p) {
  return p.mu0 * p.dmu1 - p.dmu0 * p.mu1;
}

double wronskian_residual(const CharacteristicSolution& sol, double t) {
  const StandardPair p = sol.at(t);
  const double a = sol.coefficients(t).a;
  // At t = 0 both terms reduce to 2 a(0) mu1(0) with identical rounding.
  const double abel = 2.0 * (a * sol.mu1_initial()) * (p.lambda_f * p.lambda_f);
  return std::abs(wronskian(p) + abel);
}

namespace {

std::vector<double> locate_zeros(const CharacteristicSolution::Trajectory& traj,
                                 double dmu0_origin) {
  std::vector<double> zeros;
  if (traj.t_end() <= 0.0) return zeros;
  auto mu0 = [&](double t) { return traj(t)[0]; };
  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };

  // Sample each accepted step at its ends and midpoint so a pair of close
  // zeros inside one step is still bracketed.
  std::vector<double> nodes;
  for (const auto& s : traj.segments()) {
    if (s.upper() <= 0.0) continue;
    const double lo = std::max(0.0, s.lower());
    nodes.push_back(lo);
    nodes.push_back(0.5 * (lo + s.upper()));
  }
  nodes.push_back(traj.t_end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  int prev_sign = sign(dmu0_origin);
  double prev_t = 0.0;
  for (double t : nodes) {
    if (t <= 0.0) continue;
    const double v = mu0(t);
    const int s = sign(v);
    if (s == 0) {
      zeros.push_back(t);
      prev_sign = 0;
      prev_t = t;
      continue;
    }
    if (prev_sign != 0 && s != prev_sign) {
      // Bisect down to adjacent doubles, then keep the smaller |mu0|.
      double lo = prev_t, hi = t;
      for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const int sm = sign(mu0(mid));
        if (sm == 0) {
          lo = hi = mid;
          break;
        }
        if (sm == prev_sign) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      zeros.push_back(std::abs(mu0(lo)) <= std::abs(mu0(hi)) ? lo : hi);
    }
    prev_sign = s;
    prev_t = t;
  }
  return zeros;
}

}  // namespace

CharacteristicSolution solve_standard_pair(const CharacteristicForm& form,
                                           const SolveOptions& options) {
  if (!(options.t_max > 0.0) || !(options.t_min <= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "solve range must satisfy t_min <= 0 < t_max");
  }
  if (!(options.rtol > 0.0) || !(options.atol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (options.mu1_initial == 0.0 || !std::isfinite(options.mu1_initial)) {
    throw Error(ErrorCode::InvalidArgument, "mu1(0) must be nonzero");
  }

  const CharacteristicForm::Values v0 = form.at(0.0);
  const double a0 = v0.coefficients.a;

  auto rhs = [&form, a0](double t, const std::array<double, 5>& y) {
    const CharacteristicForm::Values v = form.at(t);
    // A sign change of a(t) between stages means the kinetic term vanished
    // somewhere in between, even if no stage landed close to the zero.
    if ((v.coefficients.a > 0.0) != (a0 > 0.0)) {
      throw Error(ErrorCode::KineticDegenerate,
                  "a(t) changes sign before t = " + std::to_string(t));
    }
    const double c_minus_d = v.coefficients.c - v.coefficients.d;
    return std::array<double, 5>{
        y[1], v.tau * y[1] - 4.0 * v.sigma * y[0],
        y[3], v.tau * y[3] - 4.0 * v.sigma * y[2],
        c_minus_d * y[4]};
  };

  const std::array<double, 5> y0{0.0, 2.0 * a0, options.mu1_initial, 0.0, 1.0};
  IntegratorOptions iopt;
  iopt.rtol = options.rtol;
  iopt.atol = options.atol;
  iopt.max_step = options.max_step;

  auto forward = integrate_dopri5<5>(rhs, 0.0, y0, options.t_max, iopt);
  CharacteristicSolution::Trajectory traj = forward;
  if (options.t_min < 0.0) {
    auto backward = integrate_dopri5<5>(rhs, 0.0, y0, options.t_min, iopt);
    traj = CharacteristicSolution::Trajectory::join(backward, forward);
  }

  auto zeros = locate_zeros(traj, y0[1]);
  CharacteristicSolution sol(form, std::move(traj), options, a0,
                             std::move(zeros));

  for (double t : {sol.t_min(), sol.t_max()}) {
    const StandardPair p = sol.at(t);
    const double scale =
        std::max(1.0, std::abs(p.mu0 * p.dmu1) + std::abs(p.dmu0 * p.mu1));
    const double r = wronskian_residual(sol, t);
    if (!(r <= 100.0 * options.rtol * scale)) {
      throw Error(ErrorCode::ToleranceNotMet,
                  "Wronskian residual " + std::to_string(r) + " at t = " +
                      std::to_string(t));
    }
  }
  return sol;
}

void write_characteristic_csv(std::ostream& os,
                              const CharacteristicSolution& sol,
                              std::span<const double> times) {
  os << "t[time],mu0[length^2],dmu0[length^2/time],mu1[1],dmu1[1/time],"
        "lambda_f[1],wronskian_residual[length^2/time]\n";
  for (double t : times) {
    const StandardPair p = sol.at(t);
    os << fmt17(t) << ',' << fmt17(p.mu0) << ',' << fmt17(p.dmu0) << ','
       << fmt17(p.mu1) << ',' << fmt17(p.dmu1) << ',' << fmt17(p.lambda_f)
       << ',' << fmt17(wronskian_residual(sol, t)) << '\n';
  }
}

}  // namespace inceprop
