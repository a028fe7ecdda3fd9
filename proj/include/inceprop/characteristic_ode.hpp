#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "inceprop/dense_ode.hpp"
#include "inceprop/oscillator_models.hpp"

namespace inceprop {

/// Coefficients of mu'' - tau(t) mu' + 4 sigma(t) mu = 0 derived from a
/// quadratic Hamiltonian:
///   tau   = a'/a + 2c - 2d
///   sigma = ab - cd + a'c/(2a) - c'/2
class CharacteristicForm {
 public:
  /// |a(t)| below this is treated as a kinetic degeneracy.
  static constexpr double kDegenerateKinetic = 1e-12;

  explicit CharacteristicForm(CoefficientModel model)
      : model_(std::move(model)) {}

  struct Values {
    double tau;
    double sigma;
    QuadraticCoefficients coefficients;
  };

  /// Throws KineticDegenerate when |a(t)| < 1e-12.
  Values at(double t) const;
  double tau(double t) const { return at(t).tau; }
  double sigma(double t) const { return at(t).sigma; }

  const CoefficientModel& model() const noexcept { return model_; }

 private:
  CoefficientModel model_;
};

CharacteristicForm characteristic_form(CoefficientModel model);

struct SolveOptions {
  double t_max = 1.0;
  /// Optional backward range; t_min <= 0.
  double t_min = 0.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  /// mu1(0); any nonzero value.
  double mu1_initial = 1.0;
  double max_step = std::numeric_limits<double>::infinity();
};

struct StandardPair {
  double mu0;
  double dmu0;
  double mu1;
  double dmu1;
  double lambda_f;  // integrating factor exp(int_0^t (c - d))
};

/// Dense standard solutions mu0 (mu0(0)=0, mu0'(0)=2a(0)) and mu1
/// (mu1(0)=mu1_initial, mu1'(0)=0), co-integrated with lambda_f.
class CharacteristicSolution {
 public:
  using Trajectory = DenseTrajectory<5>;

  CharacteristicSolution(CharacteristicForm form, Trajectory trajectory,
                         SolveOptions options, double a0,
                         std::vector<double> zeros);

  StandardPair at(double t) const;
  QuadraticCoefficients coefficients(double t) const {
    return form_.model()(t);
  }

  double t_min() const noexcept { return trajectory_.t_begin(); }
  double t_max() const noexcept { return trajectory_.t_end(); }
  double rtol() const noexcept { return options_.rtol; }
  double atol() const noexcept { return options_.atol; }
  double mu1_initial() const noexcept { return options_.mu1_initial; }
  /// a(0)
  double kinetic0() const noexcept { return a0_; }

  /// Zeros of mu0 in (0, t_max], increasing, each within 1e-10 in time.
  const std::vector<double>& zeros() const noexcept { return zeros_; }
  /// Number of zeros of mu0 in (0, t).
  int zeros_before(double t) const;

  std::vector<double> mesh() const { return trajectory_.mesh(); }
  const CharacteristicForm& form() const noexcept { return form_; }
  const CoefficientModel& model() const noexcept { return form_.model(); }

 private:
  CharacteristicForm form_;
  Trajectory trajectory_;
  SolveOptions options_;
  double a0_;
  std::vector<double> zeros_;
};

/// Throws StepSizeUnderflow near coefficient singularities, KineticDegenerate
/// if a(t) vanishes on the interval, ToleranceNotMet if the Abel identity is
/// violated at the ends by more than 100 rtol (relative to the magnitude of
/// the Wronskian terms, floor 1).
CharacteristicSolution solve_standard_pair(const CharacteristicForm& form,
                                           const SolveOptions& options);

/// W(mu0, mu1) = mu0 mu1' - mu0' mu1.
double wronskian(const StandardPair& p);

/// |W(mu0, mu1)(t) + 2 mu1(0) lambda_f(t)^2 a(t)|
double wronskian_residual(const CharacteristicSolution& sol, double t);

/// Columns t, mu0, dmu0, mu1, dmu1, lambda_f, wronskian_residual.
void write_characteristic_csv(std::ostream& os,
                              const CharacteristicSolution& sol,
                              std::span<const double> times);

}  // namespace inceprop
