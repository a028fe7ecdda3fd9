#pragma once

// Canonical Ince form (1 + a0 cos 2s) y'' + b0 sin 2s y' + (c0 + d0 cos 2s) y = 0
// of the pumped-oscillator characteristic equation (s = omega t), with the
// periodicity polynomials and truncated Fourier trial solutions.

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "inceprop/oscillator_models.hpp"

namespace inceprop {

struct InceForm {
  double a0 = 0.0;
  double b0 = 0.0;
  double c0 = 1.0;
  double d0 = 0.0;
  /// s = omega t
  double omega = 1.0;

  /// The characteristic-equation coefficients this form implies in the
  /// original time variable, i.e. mu'' - tau mu' + 4 sigma mu = 0.
  double characteristic_tau(double t) const;
  double characteristic_sigma(double t) const;
};

/// Throws KineticDegenerate when lambda/omega >= 1.
InceForm to_ince_form(const OscillatorParams& params);

/// c2 xi^2 + c1 xi + c0
struct Quadratic {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double xi) const { return (c2 * xi + c1) * xi + c0; }
  /// Infimum over the real line (-inf when unbounded below).
  double minimum() const;
  bool is_zero() const { return c2 == 0.0 && c1 == 0.0 && c0 == 0.0; }
};

struct PeriodicityPolynomials {
  Quadratic p;  // 2 a0 xi^2 - b0 xi - d0/2
  Quadratic q;  // 2 P(xi - 1/2)
};

PeriodicityPolynomials periodicity_polynomials(const InceForm& form);

/// A periodic pair is never claimed to exist: an integer zero of P (Q) only
/// leaves a pi (2 pi) pair possible, its absence rules the pair out.
struct PeriodicityReport {
  PeriodicityPolynomials polynomials;
  long xi_max = 50;
  std::vector<long> p_integer_zeros;
  std::vector<long> q_integer_zeros;
  double p_minimum = 0.0;
  double q_minimum = 0.0;
  bool degenerate = false;
  bool pi_pair_possible = false;
  bool two_pi_pair_possible = false;
};

PeriodicityReport classify_periodicity(const InceForm& form, long xi_max = 50);

nlohmann::json to_json(const PeriodicityReport& report);

enum class TrialClass {
  EvenPi,     // sum A_{2n} cos(2n s)
  OddPi,      // sum B_{2n} sin(2n s), n >= 1
  EvenTwoPi,  // sum A_{2n+1} cos((2n+1) s)
  OddTwoPi,   // sum B_{2n+1} sin((2n+1) s)
};

std::string_view to_string(TrialClass cls);
TrialClass trial_class_from_string(std::string_view name);

struct FourierTrialSolution {
  TrialClass trial_class;
  int order = 0;                // N
  std::vector<int> harmonics;   // N + 1 harmonic indices k
  std::vector<double> coefficients;  // unit norm, first nonzero positive
  double residual_norm = 0.0;   // r(N), L2 defect over one period
  double system_residual = 0.0; // |M v|
  double matrix_norm = 0.0;     // spectral norm of M
  double smallest_singular_value = 0.0;

  double period() const;
  double value(double s) const;
};

/// Banded (N+1)x(N+1) system from substituting the series into the Ince
/// equation; the coefficient vector is its minimal right singular vector.
/// Throws TruncationTooSmall when N < 4.
FourierTrialSolution fourier_trial(const InceForm& form, TrialClass cls, int N);

/// Assembled recurrence matrix (rows and columns indexed by harmonics).
std::vector<std::vector<double>> fourier_system(const InceForm& form,
                                                TrialClass cls, int N);

/// L2 norm of the Ince-equation defect of a trigonometric series on a
/// `points`-point periodic trapezoid grid over one period.
double ince_defect_norm(const InceForm& form, TrialClass cls,
                        std::span<const int> harmonics,
                        std::span<const double> coefficients,
                        int points = 1024);

/// Columns N, r(N).
void write_convergence_csv(std::ostream& os,
                           std::span<const FourierTrialSolution> trials);

}  // namespace inceprop
