#pragma once

#include <span>

#include <json.hpp>

#include "inceprop/characteristic_ode.hpp"
#include "inceprop/wavefield.hpp"

namespace inceprop {

/// Gaussian kernel G(x, y, t) = (2 pi i mu0)^(-1/2) exp(i(alpha x^2 + beta xy
/// + gamma y^2)) at one time.
struct PropagatorCoefficients {
  double t = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double mu0 = 0.0;
  /// Zeros of mu0 crossed in (0, t). The square-root phase is continued
  /// through each one (principal branch before the first caustic).
  int branch = 0;
  /// Sign of a(0); fixes the direction of the phase continuation.
  int orientation = 1;

  /// (2 pi i mu0)^(-1/2) on the continued branch.
  Complex prefactor() const;
};

/// Throws TimeNotPositive for t <= 0 and CausticEncountered when
/// |mu0(t)| < atol (1 + |mu1(t)|).
PropagatorCoefficients greens_coefficients(const CharacteristicSolution& sol,
                                           double t);

Complex greens_kernel(const PropagatorCoefficients& pc, double x, double y);

enum class QuadratureMethod {
  Automatic,  // direct for small grids, chirp-z otherwise
  Direct,     // O(N^2) trapezoid sum
  ChirpZ,     // identical trapezoid sum through an FFT convolution
};

/// psi(x, t) = trapezoidal sum of G(x, y, t) chi(y) over chi's grid.
/// Throws GridUnderResolved unless |beta| extent h < pi/4, and TailNotDecayed
/// when chi is not below 1e-12 of its peak at both ends.
WaveField propagate_quadrature(const PropagatorCoefficients& pc,
                               const WaveField& chi,
                               QuadratureMethod method = QuadratureMethod::Automatic);

/// psi(x) = amplitude * exp(exponent * x^2)
struct GaussianProfile {
  Complex amplitude;
  Complex exponent;

  Complex operator()(double x) const {
    return amplitude * std::exp(exponent * (x * x));
  }
  WaveField sample(const Grid& grid, double t) const;
};

/// Closed-form propagation of sqrt(eps/sqrt(pi)) exp((i delta - eps^2/2) y^2).
/// Throws NonConvergentIntegral when Re(eps^2/2 - i(gamma + delta)) <= 0.
GaussianProfile propagate_gaussian_analytic(const PropagatorCoefficients& pc,
                                            double epsilon, double delta);

/// max over interior points of |d gamma/dt + a beta^2| with centered
/// differences. Requires a uniform, increasing mesh with spacing <= 1e-3.
double riccati_residual(std::span<const PropagatorCoefficients> pcs,
                        const CoefficientModel& model);

nlohmann::json to_json(const PropagatorCoefficients& pc);

}  // namespace inceprop
