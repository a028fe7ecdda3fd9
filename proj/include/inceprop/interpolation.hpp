#pragma once

#include <span>
#include <vector>

namespace inceprop {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// slopes). Nonnegative data stays nonnegative between knots, which keeps
/// tabulated pump amplitudes physical. Outside [front, back] it refuses.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> knots, std::vector<double> values);

  struct Sample {
    double value;
    double slope;
  };

  bool covers(double x) const noexcept;
  Sample operator()(double x) const;

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace inceprop
