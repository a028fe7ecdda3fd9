#pragma once

// Embedded Dormand-Prince 5(4) integrator with Hairer's continuous
// extension, storing every accepted step so the whole trajectory can be
// evaluated at arbitrary times afterwards.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "inceprop/errors.hpp"

namespace inceprop {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
};

template <std::size_t Dim>
class DenseTrajectory {
 public:
  using State = std::array<double, Dim>;

  /// One accepted step: y(t0 + theta h) =
  ///   r0 + theta (r1 + (1-theta) (r2 + theta (r3 + (1-theta) r4))).
  struct Segment {
    double t0;
    double h;
    std::array<State, 5> r;

    double lower() const { return h > 0 ? t0 : t0 + h; }
    double upper() const { return h > 0 ? t0 + h : t0; }
  };

  DenseTrajectory() = default;
  DenseTrajectory(double t_origin, State y_origin)
      : t_lo_(t_origin), t_hi_(t_origin), origin_(y_origin) {}

  double t_begin() const noexcept { return t_lo_; }
  double t_end() const noexcept { return t_hi_; }
  bool contains(double t) const noexcept { return t >= t_lo_ && t <= t_hi_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  /// Accepted step boundaries in increasing order.
  std::vector<double> mesh() const {
    std::vector<double> m;
    m.reserve(segments_.size() + 1);
    if (segments_.empty()) {
      m.push_back(t_lo_);
      return m;
    }
    m.push_back(segments_.front().lower());
    for (const auto& s : segments_) m.push_back(s.upper());
    return m;
  }

  State operator()(double t) const {
    if (!contains(t)) {
      throw Error(ErrorCode::InvalidArgument,
                  "time " + std::to_string(t) + " outside solved range [" +
                      std::to_string(t_lo_) + ", " + std::to_string(t_hi_) +
                      "]");
    }
    if (segments_.empty()) return origin_;
    auto it = std::upper_bound(
        segments_.begin(), segments_.end(), t,
        [](double value, const Segment& s) { return value < s.lower(); });
    if (it != segments_.begin()) --it;
    const Segment& s = *it;
    const double theta = (t - s.t0) / s.h;
    const double theta1 = 1.0 - theta;
    State y;
    for (std::size_t i = 0; i < Dim; ++i) {
      y[i] = s.r[0][i] +
             theta * (s.r[1][i] +
                      theta1 * (s.r[2][i] +
                                theta * (s.r[3][i] + theta1 * s.r[4][i])));
    }
    return y;
  }

  /// Merge a backward run (segments ordered away from the origin) and a
  /// forward run sharing the same origin.
  static DenseTrajectory join(const DenseTrajectory& backward,
                              const DenseTrajectory& forward) {
    DenseTrajectory out(forward.t_lo_, forward.origin_);
    out.segments_.assign(backward.segments_.rbegin(), backward.segments_.rend());
    out.segments_.insert(out.segments_.end(), forward.segments_.begin(),
                         forward.segments_.end());
    out.t_lo_ = backward.t_lo_;
    out.t_hi_ = forward.t_hi_;
    return out;
  }

  void push(const Segment& s) {
    segments_.push_back(s);
    t_lo_ = std::min(t_lo_, s.lower());
    t_hi_ = std::max(t_hi_, s.upper());
  }

 private:
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
  State origin_{};
  std::vector<Segment> segments_;
};

namespace detail {

template <std::size_t Dim>
double scaled_rms(const std::array<double, Dim>& v,
                  const std::array<double, Dim>& y0,
                  const std::array<double, Dim>& y1,
                  const IntegratorOptions& opt) {
  double acc = 0.0;
  for (std::size_t i = 0; i < Dim; ++i) {
    const double sc =
        opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = v[i] / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(Dim));
}

}  // namespace detail

/// Integrate y' = f(t, y) from t0 to t1 (either direction). Throws
/// StepSizeUnderflow when the controller cannot make progress.
template <std::size_t Dim, class Rhs>
DenseTrajectory<Dim> integrate_dopri5(Rhs&& f, double t0,
                                      const std::array<double, Dim>& y0,
                                      double t1,
                                      const IntegratorOptions& opt) {
  using State = std::array<double, Dim>;

  // Dormand-Prince tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  // Continuous extension (order 4).
  constexpr double d1 = -12715105075.0 / 11282082432.0,
                   d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0,
                   d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0,
                   d7 = 69997945.0 / 29380423.0;

  DenseTrajectory<Dim> traj(t0, y0);
  if (t1 == t0) return traj;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  auto axpy = [](const State& y, double h,
                 std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [coef, k] : terms) {
      for (std::size_t i = 0; i < Dim; ++i) out[i] += h * coef * (*k)[i];
    }
    return out;
  };

  double t = t0;
  State y = y0;
  State k1 = f(t, y);

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    State zero{};
    const double d0 = detail::scaled_rms(y, y, zero, opt);
    const double d1n = detail::scaled_rms(k1, y, zero, opt);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span);
    const State y1 = axpy(y, dir * h0, {{1.0, &k1}});
    const State f1 = f(t + dir * h0, y1);
    State diff;
    for (std::size_t i = 0; i < Dim; ++i) diff[i] = f1[i] - k1[i];
    const double d2 = detail::scaled_rms(diff, y, zero, opt) / h0;
    const double dm = std::max(d1n, d2);
    const double h1 =
        dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min({h, opt.max_step, span});

  bool last_rejected = false;
  for (std::size_t step = 0;; ++step) {
    if (step >= opt.max_steps) {
      throw Error(ErrorCode::StepSizeUnderflow,
                  "maximum number of steps exceeded near t = " +
                      std::to_string(t));
    }
    const double remaining = std::abs(t1 - t);
    if (remaining <= 0.0) break;
    bool final_step = false;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    }
    const double min_step =
        64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < min_step) {
      throw Error(ErrorCode::StepSizeUnderflow,
                  "step size underflow near t = " + std::to_string(t));
    }
    const double hs = dir * h;

    const State k2 = f(t + c2 * hs, axpy(y, hs, {{a21, &k1}}));
    const State k3 = f(t + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
    const State k4 =
        f(t + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(
        t + c5 * hs,
        axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        f(t + hs, axpy(y, hs,
                       {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                        {a65, &k5}}));
    const State ynew = axpy(
        y, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const double tnew = final_step ? t1 : t + hs;
    const State k7 = f(tnew, ynew);

    State err;
    for (std::size_t i = 0; i < Dim; ++i) {
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);
    }
    const double err_norm = detail::scaled_rms(err, y, ynew, opt);
    if (!std::isfinite(err_norm)) {
      throw Error(ErrorCode::StepSizeUnderflow,
                  "non-finite solution near t = " + std::to_string(t));
    }

    if (err_norm <= 1.0) {
      typename DenseTrajectory<Dim>::Segment seg;
      seg.t0 = t;
      seg.h = tnew - t;
      for (std::size_t i = 0; i < Dim; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = seg.h * k1[i] - ydiff;
        seg.r[0][i] = y[i];
        seg.r[1][i] = ydiff;
        seg.r[2][i] = bspl;
        seg.r[3][i] = ydiff - seg.h * k7[i] - bspl;
        seg.r[4][i] = seg.h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                               d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      traj.push(seg);
      t = tnew;
      y = ynew;
      k1 = k7;
      if (final_step) break;
      double fac = err_norm == 0.0 ? 10.0 : 0.9 * std::pow(err_norm, -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      h = std::min(h * fac, opt.max_step);
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      last_rejected = true;
    }
  }
  return traj;
}

}  // namespace inceprop
