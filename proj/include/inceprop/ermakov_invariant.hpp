#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "inceprop/characteristic_ode.hpp"
#include "inceprop/wavefield.hpp"

namespace inceprop {

/// Initial state sqrt(eps/(sqrt(pi) 2^n n!)) exp((i delta - eps^2/2) x^2) H_n(eps x).
struct HermiteGaussianSpec {
  HermiteGaussianSpec(double epsilon, double delta, int n);

  double epsilon;
  double delta;
  int n;
};

struct PinneyValue {
  double mu;
  double dmu;
};

/// mu^2 = (p mu0 + q mu1)^2 + r mu0^2 with p = mu'(0)/(2a(0)),
/// q = mu(0)/mu1(0), r = C0/mu(0)^2; mu' from the same expression.
/// Throws InvalidInvariantConstant for C0 <= 0 and InvalidArgument for
/// mu(0) == 0.
PinneyValue pinney_mu(const CharacteristicSolution& sol, double mu_init,
                      double dmu_init, double C0, double t);

/// Positive solution of mu'' - tau mu' + 4 sigma mu = C0 (2a)^2 / mu^3 built
/// from a standard pair, with the phase phi(t) = int_0^t sqrt(C0) 2a / mu^2.
///
/// Only Hamiltonians with c == d are accepted. The phase is tabulated on the
/// solver mesh at construction; instances are immutable afterwards.
class ErmakovSolution {
 public:
  ErmakovSolution(std::shared_ptr<const CharacteristicSolution> sol,
                  double C0, double mu_init, double dmu_init);

  PinneyValue at(double t) const;
  double phase(double t) const;

  double C0() const noexcept { return C0_; }
  double mu_init() const noexcept { return mu_init_; }
  double dmu_init() const noexcept { return dmu_init_; }
  const CharacteristicSolution& solution() const noexcept { return *sol_; }

 private:
  double phase_rate(double t) const;
  double integrate_phase(double a, double b) const;

  std::shared_ptr<const CharacteristicSolution> sol_;
  double C0_;
  double mu_init_;
  double dmu_init_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
};

/// |mu'' - tau mu' + 4 sigma mu - C0 (2a)^2/mu^3| with mu'' from centered
/// differences of the analytic mu' (step 1e-5).
double ermakov_residual(const ErmakovSolution& es, double t);

double phase(const ErmakovSolution& es, double t);

/// (mu(0), mu'(0)) for the given initial Gaussian: mu(0) = C0^{1/4}/eps,
/// mu'(0) = 2 C0^{1/4} (hbar/m)(1 + lambda/omega) delta/eps.
PinneyValue initial_conditions_from_gaussian(const HermiteGaussianSpec& spec,
                                             double C0,
                                             const OscillatorParams& params);

/// Same mapping for an arbitrary coefficient model:
/// mu'(0) = mu(0) (4 a(0) delta + 2 c(0)).
PinneyValue initial_conditions_from_gaussian(const HermiteGaussianSpec& spec,
                                             double C0,
                                             const CoefficientModel& model);

/// pi^{-1/4} (2^n n!)^{-1/2} H_n(z) exp(-z^2/2), stable for large n and |z|.
double hermite_function(int n, double z);

/// Invariant eigenfunction Psi_n(x, t) with D_n real and positive.
std::vector<Complex> eigenfunction(const ErmakovSolution& es, int n, double t,
                                   std::span<const double> xs);

/// psi_n = exp(-i (n + 1/2) phi(t)) Psi_n.
std::vector<Complex> wavefunction(const ErmakovSolution& es, int n, double t,
                                  std::span<const double> xs);

WaveField wavefunction(const ErmakovSolution& es, int n, double t,
                       const Grid& grid);

/// The initial state described by spec on the given points.
std::vector<Complex> initial_state(const HermiteGaussianSpec& spec,
                                   std::span<const double> xs);

/// E psi with E = A A + (C0/mu^2) x^2, A = mu p + ((2c mu - mu')/(2a)) x,
/// p = -i d/dx by fourth-order differences. Throws GridUnderResolved when the
/// field is not below 1e-10 of its peak at the boundary.
WaveField apply_invariant(const ErmakovSolution& es, const WaveField& field,
                          double t);

/// <psi, E psi> / <psi, psi> on the field's grid.
double invariant_expectation(const ErmakovSolution& es, const WaveField& field,
                             double t);

/// Columns t, mu, dmu, phi.
void write_pinney_csv(std::ostream& os, const ErmakovSolution& es,
                      std::span<const double> times);

}  // namespace inceprop
