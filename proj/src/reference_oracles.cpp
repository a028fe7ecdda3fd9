#include "inceprop/reference_oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "inceprop/errors.hpp"
#include "inceprop/finite_difference.hpp"

extern "C" void zgbsv_(const int* n, const int* kl, const int* ku,
                       const int* nrhs, std::complex<double>* ab,
                       const int* ldab, int* ipiv, std::complex<double>* b,
                       const int* ldb, int* info);

namespace inceprop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kContamination = 1e-8;

// Banded H at time t: entries H(j, j + off) for off in [-2, 2].
struct BandedHamiltonian {
  std::vector<std::array<Complex, 5>> rows;
};

BandedHamiltonian band_hamiltonian(const CoefficientModel& model, double t,
                                   const Grid& grid) {
  const QuadraticCoefficients k = model(t);
  const double h = grid.spacing();
  const std::size_t n = grid.size();
  const Complex minus_i(0.0, -1.0);
  BandedHamiltonian out;
  out.rows.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = grid.x(j);
    for (int off = -2; off <= 2; ++off) {
      const std::ptrdiff_t col = static_cast<std::ptrdiff_t>(j) + off;
      Complex v = 0.0;
      if (col >= 0 && col < static_cast<std::ptrdiff_t>(n)) {
        const double xk = grid.x(static_cast<std::size_t>(col));
        v = -k.a * kD2[off + 2] / (h * h) +
            minus_i * (kD1[off + 2] / h) * (k.c * xk + k.d * xj);
        if (off == 0) v += k.b * xj * xj;
      }
      out.rows[j][static_cast<std::size_t>(off + 2)] = v;
    }
  }
  return out;
}

std::vector<Complex> multiply(const BandedHamiltonian& hm,
                              const std::vector<Complex>& u) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
  std::vector<Complex> out(u.size());
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (int off = -2; off <= 2; ++off) {
      const std::ptrdiff_t col = j + off;
      if (col >= 0 && col < n) {
        acc += hm.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(off + 2)] *
               u[static_cast<std::size_t>(col)];
      }
    }
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

double edge_amplitude(const std::vector<Complex>& v) {
  const std::size_t n = v.size();
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[n - 2]),
                   std::abs(v[n - 1])});
}

}  // namespace

SpecialCaseMu special_case_mu(double t) {
  const double c = std::cos(t), s = std::sin(t);
  const double ch = std::cosh(t), sh = std::sinh(t);
  SpecialCaseMu m;
  m.mu0 = c * sh + s * ch;
  m.mu1 = c * ch + s * sh;
  m.dmu0 = 2.0 * c * ch;
  m.dmu1 = 2.0 * c * sh;
  m.ddmu0 = 2.0 * (c * sh - s * ch);
  m.ddmu1 = 2.0 * (c * ch - s * sh);
  return m;
}

Complex special_case_green(double x, double y, double t) {
  const SpecialCaseMu m = special_case_mu(t);
  if (m.mu0 == 0.0) {
    throw Error(ErrorCode::CausticEncountered, "mu0 vanishes");
  }
  const double num = (x * x - y * y) * std::sin(t) * std::sinh(t) + 2.0 * x * y -
                     (x * x + y * y) * std::cos(t) * std::cosh(t);
  const Complex pref = 1.0 / std::sqrt(Complex(0.0, 2.0 * kPi * m.mu0));
  return pref * std::exp(num / Complex(0.0, 2.0 * m.mu0));
}

Complex mehler_kernel(double omega, double mass, double hbar, double x,
                      double y, double t) {
  const double wt = omega * t;
  const double turns = wt / kPi;
  if (std::abs(turns - std::round(turns)) < 1e-12) {
    throw Error(ErrorCode::CausticEncountered, "omega t is a multiple of pi");
  }
  const double s = std::sin(wt);
  const double k = std::floor(turns);
  const double magnitude = 1.0 / std::sqrt(2.0 * kPi * std::abs(hbar / (mass * omega) * s));
  const double arg = mass * omega * ((x * x + y * y) * std::cos(wt) - 2.0 * x * y) /
                     (2.0 * hbar * s);
  return std::polar(magnitude, -kPi / 4.0 - k * kPi / 2.0 + arg);
}

OracleConfig::OracleConfig(Grid g, double time_step, Boundary b)
    : grid(g), dt(time_step), boundary(b) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  }
}

std::vector<Complex> apply_hamiltonian(const CoefficientModel& model, double t,
                                       const Grid& grid,
                                       const std::vector<Complex>& psi) {
  if (psi.size() != grid.size()) {
    throw Error(ErrorCode::GridMismatch, "field does not match grid");
  }
  return multiply(band_hamiltonian(model, t, grid), psi);
}

WaveField crank_nicolson_evolve(
    const CoefficientModel& model, const WaveField& chi, double t_final,
    const OracleConfig& cfg, CrankNicolsonStats* stats,
    const std::function<void(const WaveField&)>& observer) {
  if (!(chi.grid == cfg.grid)) {
    throw Error(ErrorCode::GridMismatch, "initial field is not on the oracle grid");
  }
  const double span = t_final - chi.t;
  if (!(span >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "t_final precedes the initial time");
  }
  const std::size_t steps =
      span == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
  const double dt = steps == 0 ? 0.0 : span / static_cast<double>(steps);

  const Grid& g = cfg.grid;
  const int n = static_cast<int>(g.size());
  const int kl = 2, ku = 2, ldab = 2 * kl + ku + 1, nrhs = 1;
  const double peak = max_abs(chi.values);
  if (edge_amplitude(chi.values) > kContamination * peak) {
    throw Error(ErrorCode::BoundaryContamination,
                "initial field is not confined to the grid");
  }

  std::vector<Complex> psi = chi.values;
  std::vector<Complex> ab(static_cast<std::size_t>(ldab) * g.size());
  std::vector<int> ipiv(g.size());
  double norm = l2_norm(g, psi);
  CrankNicolsonStats local;

  for (std::size_t s = 0; s < steps; ++s) {
    const double t0 = chi.t + dt * static_cast<double>(s);
    const BandedHamiltonian hm = band_hamiltonian(model, t0 + 0.5 * dt, g);
    const Complex half(0.0, 0.5 * dt);

    std::vector<Complex> rhs = multiply(hm, psi);
    for (std::size_t j = 0; j < psi.size(); ++j) rhs[j] = psi[j] - half * rhs[j];

    std::fill(ab.begin(), ab.end(), Complex(0.0));
    for (int j = 0; j < n; ++j) {
      for (int off = -2; off <= 2; ++off) {
        const int col = j + off;
        if (col < 0 || col >= n) continue;
        Complex v = half * hm.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(off + 2)];
        if (off == 0) v += 1.0;
        ab[static_cast<std::size_t>(kl + ku + j - col + col * ldab)] = v;
      }
    }
    int info = 0;
    zgbsv_(&n, &kl, &ku, &nrhs, ab.data(), &ldab, ipiv.data(), rhs.data(), &n,
           &info);
    if (info != 0) {
      throw Error(ErrorCode::LinearSolveFailure,
                  "banded solve failed with info = " + std::to_string(info));
    }
    psi = std::move(rhs);

    if (edge_amplitude(psi) > kContamination * peak) {
      throw Error(ErrorCode::BoundaryContamination,
                  "wave reached the grid boundary at t = " +
                      std::to_string(t0 + dt));
    }
    const double next = l2_norm(g, psi);
    local.max_step_norm_drift =
        std::max(local.max_step_norm_drift, std::abs(next - norm) / norm);
    norm = next;
    ++local.steps;
    if (observer) {
      const double t_now = s + 1 == steps ? t_final : t0 + dt;
      observer(WaveField(g, psi, t_now));
    }
  }
  if (stats) *stats = local;
  return WaveField(g, std::move(psi), t_final);
}

double schrodinger_residual(const CoefficientModel& model,
                            const WaveField& before, const WaveField& now,
                            const WaveField& after) {
  if (!(before.grid == now.grid) || !(after.grid == now.grid)) {
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
  }
  const double dt = 0.5 * (after.t - before.t);
  if (!(dt > 0.0) ||
      std::abs((now.t - before.t) - (after.t - now.t)) > 1e-9 * std::max(dt, 1e-12) + 1e-15) {
    throw Error(ErrorCode::GridMismatch, "time samples are not equally spaced");
  }
  const std::vector<Complex> hpsi =
      apply_hamiltonian(model, now.t, now.grid, now.values);
  std::vector<Complex> r(hpsi.size());
  const Complex i(0.0, 1.0);
  for (std::size_t j = 0; j < r.size(); ++j) {
    r[j] = i * (after.values[j] - before.values[j]) / (2.0 * dt) - hpsi[j];
  }
  return l2_norm(now.grid, r) / l2_norm(now.grid, now.values);
}

}  // namespace inceprop
