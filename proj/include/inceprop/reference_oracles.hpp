#pragma once

#include <functional>

#include "inceprop/oscillator_models.hpp"
#include "inceprop/wavefield.hpp"

namespace inceprop {

/// Closed-form standard pair of mu'' + 2 tan(t) mu' - 2 mu = 0 (the
/// lambda = omega = m = hbar = 1 pump), with second derivatives.
struct SpecialCaseMu {
  double mu0, mu1;
  double dmu0, dmu1;
  double ddmu0, ddmu1;
};

SpecialCaseMu special_case_mu(double t);

/// Kernel for the same case on the principal branch. Throws
/// CausticEncountered when mu0(t) == 0.
Complex special_case_green(double x, double y, double t);

/// Harmonic-oscillator propagator, continued through the caustics
/// omega t = k pi (where it throws CausticEncountered).
Complex mehler_kernel(double omega, double mass, double hbar, double x,
                      double y, double t);

struct OracleConfig {
  enum class Boundary { HardWall };

  OracleConfig(Grid g, double time_step, Boundary b = Boundary::HardWall);

  Grid grid;
  double dt;
  Boundary boundary;
};

struct CrankNicolsonStats {
  std::size_t steps = 0;
  /// max over steps of | ||psi_{k+1}|| - ||psi_k|| | / ||psi_k||
  double max_step_norm_drift = 0.0;
};

/// H psi with p^2 -> -D2, px -> -i D1 x, xp -> -i x D1 (fourth order, zero
/// outside the grid), coefficients at time t.
std::vector<Complex> apply_hamiltonian(const CoefficientModel& model, double t,
                                       const Grid& grid,
                                       const std::vector<Complex>& psi);

/// Crank-Nicolson integration of i psi_t = H psi from chi.t to t_final with
/// midpoint coefficients and a banded solve per step. The step is shrunk so
/// that it divides the interval. The observer, if set, sees every step.
/// Throws LinearSolveFailure and BoundaryContamination (edge amplitude above
/// 1e-8 of the initial peak).
WaveField crank_nicolson_evolve(
    const CoefficientModel& model, const WaveField& chi, double t_final,
    const OracleConfig& cfg, CrankNicolsonStats* stats = nullptr,
    const std::function<void(const WaveField&)>& observer = {});

/// ||i (psi_+ - psi_-)/(2 dt) - H(t) psi|| / ||psi|| for fields at t - dt,
/// t, t + dt. Throws GridMismatch for differing grids or unequal spacing.
double schrodinger_residual(const CoefficientModel& model,
                            const WaveField& before, const WaveField& now,
                            const WaveField& after);

}  // namespace inceprop
