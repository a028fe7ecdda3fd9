#include "inceprop/wavefield.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "inceprop/errors.hpp"
#include "inceprop/text_format.hpp"

namespace inceprop {

Grid::Grid(double x_min, double x_max, std::size_t points)
    : x_min_(x_min), x_max_(x_max), n_(points) {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorCode::InvalidArgument, "grid requires x_max > x_min");
  }
  if (points < kMinPoints) {
    throw Error(ErrorCode::InvalidArgument,
                "grid requires at least 16 points, got " + std::to_string(points));
  }
  h_ = (x_max - x_min) / static_cast<double>(points - 1);
}

double Grid::extent() const noexcept {
  return std::max(std::abs(x_min_), std::abs(x_max_));
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

WaveField::WaveField(Grid g, std::vector<Complex> v, double time)
    : grid(g), values(std::move(v)), t(time) {
  if (values.size() != grid.size()) {
    throw Error(ErrorCode::GridMismatch, "amplitude count does not match grid");
  }
  for (const Complex& z : values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::InvalidArgument, "wave field has non-finite amplitude");
    }
  }
}

Complex inner_product(const Grid& grid, const std::vector<Complex>& f,
                      const std::vector<Complex>& g) {
  if (f.size() != grid.size() || g.size() != grid.size()) {
    throw Error(ErrorCode::GridMismatch, "inner product size mismatch");
  }
  const std::size_t n = grid.size();
  Complex acc = 0.5 * (std::conj(f[0]) * g[0] + std::conj(f[n - 1]) * g[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) acc += std::conj(f[i]) * g[i];
  return acc * grid.spacing();
}

double l2_norm(const Grid& g, const std::vector<Complex>& values) {
  return std::sqrt(std::max(0.0, inner_product(g, values, values).real()));
}

double l2_norm(const WaveField& f) { return l2_norm(f.grid, f.values); }

double relative_l2_difference(const Grid& g, const std::vector<Complex>& a,
                              const std::vector<Complex>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::GridMismatch, "field sizes differ");
  }
  std::vector<Complex> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return l2_norm(g, diff) / l2_norm(g, b);
}

double relative_l2_difference(const WaveField& a, const WaveField& b) {
  if (!(a.grid == b.grid)) {
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
  }
  return relative_l2_difference(a.grid, a.values, b.values);
}

double max_abs(const std::vector<Complex>& values) {
  double m = 0.0;
  for (const Complex& z : values) m = std::max(m, std::abs(z));
  return m;
}

void write_wavefield_csv(std::ostream& os, const WaveField& f) {
  os << "x[length],re_psi[length^-1/2],im_psi[length^-1/2]\n";
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    os << fmt17(f.grid.x(i)) << ',' << fmt17(f.values[i].real()) << ','
       << fmt17(f.values[i].imag()) << '\n';
  }
}

WaveField read_wavefield_csv(std::istream& is, double t) {
  std::string line;
  if (!std::getline(is, line)) {
    throw Error(ErrorCode::InvalidArgument, "empty wave field CSV");
  }
  std::vector<double> xs;
  std::vector<Complex> vs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') ||
        !std::getline(row, c)) {
      throw Error(ErrorCode::InvalidArgument, "malformed CSV row: " + line);
    }
    xs.push_back(std::stod(a));
    vs.emplace_back(std::stod(b), std::stod(c));
  }
  if (xs.size() < Grid::kMinPoints) {
    throw Error(ErrorCode::InvalidArgument, "too few rows for a grid");
  }
  Grid g(xs.front(), xs.back(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - g.x(i)) > 1e-9 * std::max(1.0, g.extent())) {
      throw Error(ErrorCode::GridMismatch, "x column is not a uniform grid");
    }
  }
  return WaveField(g, std::move(vs), t);
}

nlohmann::json wavefield_metadata(const WaveField& f) {
  return {{"t", f.t},
          {"grid",
           {{"x_min", f.grid.x_min()},
            {"x_max", f.grid.x_max()},
            {"points", f.grid.size()}}},
          {"norm", l2_norm(f)}};
}

}  // namespace inceprop
