#include "inceprop/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "inceprop/errors.hpp"

namespace inceprop {

MonotoneCubic::MonotoneCubic(std::vector<double> knots,
                             std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  const std::size_t n = knots_.size();
  if (n < 2 || values_.size() != n) {
    throw Error(ErrorCode::InvalidArgument,
                "interpolant needs at least two knots and matching values");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(knots_[i] > knots_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "interpolation knots must be strictly increasing");
    }
  }

  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    secant[i] = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
  }

  slopes_.assign(n, 0.0);
  if (n == 2) {
    slopes_[0] = slopes_[1] = secant[0];
    return;
  }
  // Interior slopes: weighted harmonic mean, zero at local extrema.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (secant[i - 1] * secant[i] <= 0.0) continue;
    const double h0 = knots_[i] - knots_[i - 1];
    const double h1 = knots_[i + 1] - knots_[i];
    const double w0 = 2.0 * h1 + h0;
    const double w1 = h1 + 2.0 * h0;
    slopes_[i] = (w0 + w1) / (w0 / secant[i - 1] + w1 / secant[i]);
  }
  // One-sided three-point end slopes, limited to keep monotone shape.
  auto end_slope = [](double h0, double h1, double s0, double s1) {
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0) return 0.0;
    if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
    return d;
  };
  slopes_[0] = end_slope(knots_[1] - knots_[0], knots_[2] - knots_[1],
                         secant[0], secant[1]);
  slopes_[n - 1] = end_slope(knots_[n - 1] - knots_[n - 2],
                             knots_[n - 2] - knots_[n - 3], secant[n - 2],
                             secant[n - 3]);
}

bool MonotoneCubic::covers(double x) const noexcept {
  return !knots_.empty() && x >= knots_.front() && x <= knots_.back();
}

MonotoneCubic::Sample MonotoneCubic::operator()(double x) const {
  if (!covers(x)) {
    throw Error(ErrorCode::InvalidArgument, "interpolation point out of range");
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  i = std::clamp<std::size_t>(i, 1, knots_.size() - 1) - 1;

  const double h = knots_[i + 1] - knots_[i];
  const double s = (x - knots_[i]) / h;
  const double y0 = values_[i], y1 = values_[i + 1];
  const double m0 = slopes_[i] * h, m1 = slopes_[i + 1] * h;

  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double value = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;

  const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1;
  const double d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
  const double slope = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
  return {value, slope};
}

}  // namespace inceprop
