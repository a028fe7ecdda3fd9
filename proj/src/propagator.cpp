#include "inceprop/propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "inceprop/errors.hpp"

namespace inceprop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kDirectLimit = 4096;

// Phase of e^{i theta}, recomputed exactly now and then so long recurrences
// do not drift.
std::vector<Complex> chirp(double theta0, double dtheta, std::size_t n) {
  std::vector<Complex> out(n);
  const Complex step = std::polar(1.0, dtheta);
  Complex z;
  for (std::size_t j = 0; j < n; ++j) {
    if (j % 64 == 0) {
      z = std::polar(1.0, theta0 + dtheta * static_cast<double>(j));
    }
    out[j] = z;
    z *= step;
  }
  return out;
}

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
 public:
  FftPlan(std::size_t n, std::vector<Complex>& in, std::vector<Complex>& out,
          int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n),
                             reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()), sign,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "FFT planning failed");
    }
  }
  ~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void run() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

// S_i = sum_j u_j exp(i theta i j) for i, j in [0, n).
std::vector<Complex> direct_sum(const std::vector<Complex>& u, double theta) {
  const std::size_t n = u.size();
  std::vector<Complex> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<Complex> row =
        chirp(0.0, theta * static_cast<double>(i), n);
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += u[j] * row[j];
    s[i] = acc;
  }
  return s;
}

// Same sum via i j = (i^2 + j^2 - (i - j)^2)/2 and a zero-padded circular
// convolution.
std::vector<Complex> chirp_z_sum(const std::vector<Complex>& u, double theta) {
  const std::size_t n = u.size();
  std::size_t len = 1;
  while (len < 2 * n - 1) len <<= 1;

  auto half_square = [theta](std::size_t j) {
    const double jd = static_cast<double>(j);
    return 0.5 * theta * jd * jd;
  };

  std::vector<Complex> a(len, 0.0), fa(len), k(len, 0.0), fk(len);
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = u[j] * std::polar(1.0, half_square(j));
  }
  for (std::size_t m = 0; m < n; ++m) {
    const Complex w = std::polar(1.0, -half_square(m));
    k[m] = w;
    if (m > 0) k[len - m] = w;
  }
  {
    FftPlan pa(len, a, fa, FFTW_FORWARD);
    FftPlan pk(len, k, fk, FFTW_FORWARD);
    pa.run();
    pk.run();
  }
  for (std::size_t m = 0; m < len; ++m) fa[m] *= fk[m];
  {
    FftPlan back(len, fa, a, FFTW_BACKWARD);
    back.run();
  }
  std::vector<Complex> s(n);
  const double scale = 1.0 / static_cast<double>(len);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = a[i] * scale * std::polar(1.0, half_square(i));
  }
  return s;
}

}  // namespace

Complex PropagatorCoefficients::prefactor() const {
  const double magnitude = 1.0 / std::sqrt(2.0 * kPi * std::abs(mu0));
  const double phase =
      -static_cast<double>(orientation) * (kPi / 4.0 + branch * kPi / 2.0);
  return std::polar(magnitude, phase);
}

PropagatorCoefficients greens_coefficients(const CharacteristicSolution& sol,
                                           double t) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::TimeNotPositive,
                "kernel requested at t = " + std::to_string(t));
  }
  const StandardPair p = sol.at(t);
  if (std::abs(p.mu0) < sol.atol() * (1.0 + std::abs(p.mu1))) {
    throw Error(ErrorCode::CausticEncountered,
                "mu0 vanishes at t = " + std::to_string(t));
  }
  const QuadraticCoefficients k = sol.coefficients(t);
  const QuadraticCoefficients k0 = sol.coefficients(0.0);

  PropagatorCoefficients pc;
  pc.t = t;
  pc.mu0 = p.mu0;
  pc.alpha = p.dmu0 / (4.0 * k.a * p.mu0) - k.c / (2.0 * k.a);
  pc.beta = -p.lambda_f / p.mu0;
  pc.gamma = p.mu1 / (2.0 * sol.mu1_initial() * p.mu0) + k0.c / (2.0 * k0.a);
  pc.branch = sol.zeros_before(t);
  pc.orientation = k0.a > 0.0 ? 1 : -1;
  return pc;
}

Complex greens_kernel(const PropagatorCoefficients& pc, double x, double y) {
  const double arg = pc.alpha * x * x + pc.beta * x * y + pc.gamma * y * y;
  return pc.prefactor() * std::polar(1.0, arg);
}

WaveField propagate_quadrature(const PropagatorCoefficients& pc,
                               const WaveField& chi, QuadratureMethod method) {
  const Grid& g = chi.grid;
  const std::size_t n = g.size();
  const double h = g.spacing();

  if (!(std::abs(pc.beta) * g.extent() * h < kPi / 4.0)) {
    throw Error(ErrorCode::GridUnderResolved,
                "|beta| x_max h = " +
                    std::to_string(std::abs(pc.beta) * g.extent() * h) +
                    " is not below pi/4");
  }
  const double peak = max_abs(chi.values);
  if (std::abs(chi.values.front()) > 1e-12 * peak ||
      std::abs(chi.values.back()) > 1e-12 * peak) {
    throw Error(ErrorCode::TailNotDecayed,
                "initial state is not negligible at the grid boundary");
  }

  // beta x_i y_j = beta x0^2 + beta x0 h (i + j) + beta h^2 i j
  const double x0 = g.x_min();
  std::vector<Complex> u(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = g.x(j);
    const double w = (j == 0 || j + 1 == n) ? 0.5 * h : h;
    u[j] = w * chi.values[j] *
           std::polar(1.0, pc.gamma * y * y +
                               pc.beta * x0 * h * static_cast<double>(j));
  }
  const double theta = pc.beta * h * h;

  const bool use_direct =
      method == QuadratureMethod::Direct ||
      (method == QuadratureMethod::Automatic && n <= kDirectLimit);
  const std::vector<Complex> s =
      use_direct ? direct_sum(u, theta) : chirp_z_sum(u, theta);

  const Complex pref = pc.prefactor();
  std::vector<Complex> psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.x(i);
    psi[i] = pref * s[i] *
             std::polar(1.0, pc.alpha * x * x + pc.beta * x0 * x0 +
                                 pc.beta * x0 * h * static_cast<double>(i));
  }
  return WaveField(g, std::move(psi), pc.t);
}

WaveField GaussianProfile::sample(const Grid& grid, double t) const {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = (*this)(grid.x(i));
  return WaveField(grid, std::move(v), t);
}

GaussianProfile propagate_gaussian_analytic(const PropagatorCoefficients& pc,
                                            double epsilon, double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "Gaussian width must be positive");
  }
  const Complex p(0.5 * epsilon * epsilon, -(pc.gamma + delta));
  if (!(p.real() > 0.0)) {
    throw Error(ErrorCode::NonConvergentIntegral,
                "Gaussian integral does not converge");
  }
  GaussianProfile out;
  out.amplitude = pc.prefactor() * std::sqrt(epsilon / std::sqrt(kPi)) *
                  std::sqrt(kPi / p);
  out.exponent = Complex(0.0, pc.alpha) - pc.beta * pc.beta / (4.0 * p);
  return out;
}

double riccati_residual(std::span<const PropagatorCoefficients> pcs,
                        const CoefficientModel& model) {
  if (pcs.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "need at least three time points");
  }
  const double dt = pcs[1].t - pcs[0].t;
  if (!(dt > 0.0) || dt > 1e-3 * (1.0 + 1e-9)) {
    throw Error(ErrorCode::InvalidArgument,
                "time spacing must be positive and at most 1e-3");
  }
  for (std::size_t k = 1; k < pcs.size(); ++k) {
    const double step = pcs[k].t - pcs[k - 1].t;
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(pcs[k].t))) {
      throw Error(ErrorCode::InvalidArgument, "time mesh is not uniform");
    }
  }
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < pcs.size(); ++k) {
    const double dgamma =
        (pcs[k + 1].gamma - pcs[k - 1].gamma) / (pcs[k + 1].t - pcs[k - 1].t);
    const double a = model(pcs[k].t).a;
    worst = std::max(worst, std::abs(dgamma + a * pcs[k].beta * pcs[k].beta));
  }
  return worst;
}

nlohmann::json to_json(const PropagatorCoefficients& pc) {
  return {{"t", pc.t},         {"alpha", pc.alpha}, {"beta", pc.beta},
          {"gamma", pc.gamma}, {"mu0", pc.mu0},     {"branch", pc.branch}};
}

}  // namespace inceprop
