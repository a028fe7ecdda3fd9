#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <json.hpp>

namespace inceprop {

using Complex = std::complex<double>;

/// Uniform grid x_i = x_min + i h, i = 0..N-1, h = (x_max - x_min)/(N - 1).
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  Grid(double x_min, double x_max, std::size_t points);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double x(std::size_t i) const noexcept {
    return x_min_ + static_cast<double>(i) * h_;
  }
  /// max(|x_min|, |x_max|)
  double extent() const noexcept;
  std::vector<double> points() const;

  bool operator==(const Grid& other) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

struct WaveField {
  WaveField(Grid g, std::vector<Complex> v, double time);

  Grid grid;
  std::vector<Complex> values;
  double t;
};

/// Trapezoidal L2 norm.
double l2_norm(const WaveField& f);
double l2_norm(const Grid& g, const std::vector<Complex>& values);
/// Trapezoidal <f, g> (conjugate-linear in f).
Complex inner_product(const Grid& grid, const std::vector<Complex>& f,
                      const std::vector<Complex>& g);
/// ||a - b|| / ||b||; throws GridMismatch when the grids differ.
double relative_l2_difference(const WaveField& a, const WaveField& b);
double relative_l2_difference(const Grid& g, const std::vector<Complex>& a,
                              const std::vector<Complex>& b);
double max_abs(const std::vector<Complex>& values);

/// Columns x, Re psi, Im psi.
void write_wavefield_csv(std::ostream& os, const WaveField& f);
/// Reads the format above back; the grid is inferred from the x column.
WaveField read_wavefield_csv(std::istream& is, double t);
nlohmann::json wavefield_metadata(const WaveField& f);

}  // namespace inceprop
