#pragma once

#include <complex>
#include <vector>

namespace inceprop {

// Fourth-order central stencils on a uniform grid; values beyond either end
// are taken as zero (hard-wall Dirichlet).
//   D1: ( u[j-2] - 8u[j-1] + 8u[j+1] - u[j+2]) / (12h)
//   D2: (-u[j-2] + 16u[j-1] - 30u[j] + 16u[j+1] - u[j+2]) / (12h^2)

inline constexpr double kD1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
inline constexpr double kD2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12,
                                  -1.0 / 12};

template <class T>
std::vector<T> apply_stencil(const std::vector<T>& u, const double (&w)[5],
                             double scale) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
  std::vector<T> out(u.size());
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    T acc{};
    for (std::ptrdiff_t k = -2; k <= 2; ++k) {
      const std::ptrdiff_t i = j + k;
      if (i >= 0 && i < n) acc += w[k + 2] * u[static_cast<std::size_t>(i)];
    }
    out[static_cast<std::size_t>(j)] = acc * scale;
  }
  return out;
}

template <class T>
std::vector<T> first_derivative(const std::vector<T>& u, double h) {
  return apply_stencil(u, kD1, 1.0 / h);
}

template <class T>
std::vector<T> second_derivative(const std::vector<T>& u, double h) {
  return apply_stencil(u, kD2, 1.0 / (h * h));
}

}  // namespace inceprop
