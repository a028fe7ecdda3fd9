#include "inceprop/ermakov_invariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "inceprop/errors.hpp"
#include "inceprop/finite_difference.hpp"
#include "inceprop/text_format.hpp"

namespace inceprop {

namespace {

constexpr double kResidualStep = 1e-5;
constexpr double kPhaseTolerance = 1e-12;

void require_positive_c0(double C0) {
  if (!(C0 > 0.0) || !std::isfinite(C0)) {
    throw Error(ErrorCode::InvalidInvariantConstant,
                "invariant constant must be positive, got " + std::to_string(C0));
  }
}

void require_hermitian(const CharacteristicSolution& sol) {
  if (sol.model().kind() != ModelKind::Generic) return;
  for (double t : sol.mesh()) {
    const QuadraticCoefficients k = sol.coefficients(t);
    if (std::abs(k.c - k.d) > 1e-14 * (1.0 + std::abs(k.c))) {
      throw Error(ErrorCode::UnsupportedModel,
                  "Pinney construction requires c(t) == d(t)");
    }
  }
}

}  // namespace

HermiteGaussianSpec::HermiteGaussianSpec(double eps, double dlt, int order)
    : epsilon(eps), delta(dlt), n(order) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  }
  if (!std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "delta must be finite");
  }
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be nonnegative");
}

PinneyValue pinney_mu(const CharacteristicSolution& sol, double mu_init,
                      double dmu_init, double C0, double t) {
  require_positive_c0(C0);
  if (mu_init == 0.0 || !std::isfinite(mu_init) || !std::isfinite(dmu_init)) {
    throw Error(ErrorCode::InvalidArgument, "mu(0) must be finite and nonzero");
  }
  const double p = dmu_init / (2.0 * sol.kinetic0());
  const double q = mu_init / sol.mu1_initial();
  const double r = C0 / (mu_init * mu_init);

  const StandardPair s = sol.at(t);
  const double u = p * s.mu0 + q * s.mu1;
  const double du = p * s.dmu0 + q * s.dmu1;
  const double mu = std::sqrt(u * u + r * s.mu0 * s.mu0);
  return {mu, (u * du + r * s.mu0 * s.dmu0) / mu};
}

ErmakovSolution::ErmakovSolution(
    std::shared_ptr<const CharacteristicSolution> sol, double C0,
    double mu_init, double dmu_init)
    : sol_(std::move(sol)), C0_(C0), mu_init_(mu_init), dmu_init_(dmu_init) {
  if (!sol_) throw Error(ErrorCode::InvalidArgument, "missing solution");
  require_positive_c0(C0_);
  if (mu_init_ <= 0.0 || !std::isfinite(mu_init_) || !std::isfinite(dmu_init_)) {
    throw Error(ErrorCode::InvalidArgument, "mu(0) must be finite and positive");
  }
  require_hermitian(*sol_);

  nodes_ = sol_->mesh();
  if (std::find(nodes_.begin(), nodes_.end(), 0.0) == nodes_.end()) {
    nodes_.insert(std::upper_bound(nodes_.begin(), nodes_.end(), 0.0), 0.0);
  }
  cumulative_.assign(nodes_.size(), 0.0);
  const std::size_t origin = static_cast<std::size_t>(
      std::find(nodes_.begin(), nodes_.end(), 0.0) - nodes_.begin());
  for (std::size_t k = origin + 1; k < nodes_.size(); ++k) {
    cumulative_[k] = cumulative_[k - 1] + integrate_phase(nodes_[k - 1], nodes_[k]);
  }
  for (std::size_t k = origin; k-- > 0;) {
    cumulative_[k] = cumulative_[k + 1] - integrate_phase(nodes_[k], nodes_[k + 1]);
  }
}

PinneyValue ErmakovSolution::at(double t) const {
  return pinney_mu(*sol_, mu_init_, dmu_init_, C0_, t);
}

double ErmakovSolution::phase_rate(double t) const {
  const double mu = at(t).mu;
  return std::sqrt(C0_) * 2.0 * sol_->coefficients(t).a / (mu * mu);
}

double ErmakovSolution::integrate_phase(double a, double b) const {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  auto f = [this](double s) { return phase_rate(s); };
  return gauss_kronrod<double, 31>::integrate(f, a, b, 12, kPhaseTolerance);
}

double ErmakovSolution::phase(double t) const {
  if (!(t >= nodes_.front() && t <= nodes_.back())) {
    throw Error(ErrorCode::InvalidArgument,
                "phase requested outside the solved range");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  const std::size_t k =
      it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return cumulative_[k] + integrate_phase(nodes_[k], t);
}

double ermakov_residual(const ErmakovSolution& es, double t) {
  const double h = kResidualStep;
  const PinneyValue v = es.at(t);
  const double ddmu = (es.at(t + h).dmu - es.at(t - h).dmu) / (2.0 * h);
  const CharacteristicForm::Values f = es.solution().form().at(t);
  const double two_a = 2.0 * f.coefficients.a;
  const double rhs = es.C0() * two_a * two_a / (v.mu * v.mu * v.mu);
  return std::abs(ddmu - f.tau * v.dmu + 4.0 * f.sigma * v.mu - rhs);
}

double phase(const ErmakovSolution& es, double t) { return es.phase(t); }

PinneyValue initial_conditions_from_gaussian(const HermiteGaussianSpec& spec,
                                             double C0,
                                             const OscillatorParams& params) {
  require_positive_c0(C0);
  const double q = std::pow(C0, 0.25);
  return {q / spec.epsilon, 2.0 * q * (params.hbar() / params.mass()) *
                                (1.0 + params.pump_ratio()) * spec.delta /
                                spec.epsilon};
}

PinneyValue initial_conditions_from_gaussian(const HermiteGaussianSpec& spec,
                                             double C0,
                                             const CoefficientModel& model) {
  require_positive_c0(C0);
  const QuadraticCoefficients k = model(0.0);
  const double mu = std::pow(C0, 0.25) / spec.epsilon;
  return {mu, mu * (4.0 * k.a * spec.delta + 2.0 * k.c)};
}

double hermite_function(int n, double z) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be nonnegative");
  // Normalized recurrence, with the Gaussian factor and any rescaling kept in
  // a separate logarithm so neither overflows.
  double log_scale = -0.5 * z * z;
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * z * cur -
                        std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e100) {
      prev *= 1e-100;
      cur *= 1e-100;
      log_scale += 100.0 * std::numbers::ln10;
    }
  }
  return cur * std::exp(log_scale);
}

std::vector<Complex> eigenfunction(const ErmakovSolution& es, int n, double t,
                                   std::span<const double> xs) {
  const PinneyValue v = es.at(t);
  const QuadraticCoefficients k = es.solution().coefficients(t);
  const double kappa = (v.dmu / v.mu - 2.0 * k.c) / (4.0 * k.a);
  const double q = std::pow(es.C0(), 0.25);
  const double amp = std::sqrt(q / v.mu);
  std::vector<Complex> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    out[i] = std::polar(amp * hermite_function(n, x * q / v.mu), kappa * x * x);
  }
  return out;
}

std::vector<Complex> wavefunction(const ErmakovSolution& es, int n, double t,
                                  std::span<const double> xs) {
  std::vector<Complex> out = eigenfunction(es, n, t, xs);
  const Complex rot = std::polar(1.0, -(n + 0.5) * es.phase(t));
  for (Complex& z : out) z *= rot;
  return out;
}

WaveField wavefunction(const ErmakovSolution& es, int n, double t,
                       const Grid& grid) {
  const std::vector<double> xs = grid.points();
  return WaveField(grid, wavefunction(es, n, t, xs), t);
}

std::vector<Complex> initial_state(const HermiteGaussianSpec& spec,
                                   std::span<const double> xs) {
  std::vector<Complex> out(xs.size());
  const double amp = std::sqrt(spec.epsilon);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    out[i] = std::polar(amp * hermite_function(spec.n, spec.epsilon * x),
                        spec.delta * x * x);
  }
  return out;
}

WaveField apply_invariant(const ErmakovSolution& es, const WaveField& field,
                          double t) {
  const Grid& g = field.grid;
  const double peak = max_abs(field.values);
  if (std::abs(field.values.front()) > 1e-10 * peak ||
      std::abs(field.values.back()) > 1e-10 * peak) {
    throw Error(ErrorCode::GridUnderResolved,
                "state is not resolved inside the grid");
  }
  const PinneyValue v = es.at(t);
  const QuadraticCoefficients k = es.solution().coefficients(t);
  const double f = (2.0 * k.c * v.mu - v.dmu) / (2.0 * k.a);
  const double h = g.spacing();
  const Complex minus_i(0.0, -1.0);

  auto apply_a = [&](const std::vector<Complex>& u) {
    std::vector<Complex> du = first_derivative(u, h);
    for (std::size_t i = 0; i < u.size(); ++i) {
      du[i] = v.mu * minus_i * du[i] + f * g.x(i) * u[i];
    }
    return du;
  };

  std::vector<Complex> out = apply_a(apply_a(field.values));
  const double w = es.C0() / (v.mu * v.mu);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = g.x(i);
    out[i] += w * x * x * field.values[i];
  }
  return WaveField(g, std::move(out), t);
}

double invariant_expectation(const ErmakovSolution& es, const WaveField& field,
                             double t) {
  const WaveField e = apply_invariant(es, field, t);
  const Complex num = inner_product(field.grid, field.values, e.values);
  const Complex den = inner_product(field.grid, field.values, field.values);
  return num.real() / den.real();
}

void write_pinney_csv(std::ostream& os, const ErmakovSolution& es,
                      std::span<const double> times) {
  os << "t[time],mu[length],dmu[length/time],phi[rad]\n";
  for (double t : times) {
    const PinneyValue v = es.at(t);
    os << fmt17(t) << ',' << fmt17(v.mu) << ',' << fmt17(v.dmu) << ','
       << fmt17(es.phase(t)) << '\n';
  }
}

}  // namespace inceprop
