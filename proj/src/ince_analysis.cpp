#include "inceprop/ince_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

#include <Eigen/Dense>

#include "inceprop/errors.hpp"
#include "inceprop/text_format.hpp"

namespace inceprop {

double InceForm::characteristic_tau(double t) const {
  const double s = omega * t;
  return -omega * b0 * std::sin(2.0 * s) / (1.0 + a0 * std::cos(2.0 * s));
}

double InceForm::characteristic_sigma(double t) const {
  const double s = omega * t;
  const double cs = std::cos(2.0 * s);
  return 0.25 * omega * omega * (c0 + d0 * cs) / (1.0 + a0 * cs);
}

InceForm to_ince_form(const OscillatorParams& params) {
  if (params.kinetic_degenerate()) {
    throw Error(ErrorCode::KineticDegenerate,
                "lambda/omega = " + std::to_string(params.pump_ratio()) +
                    " >= 1; 1 + a0 cos 2s vanishes");
  }
  const double r = params.pump_ratio();
  InceForm f;
  f.a0 = r;
  f.b0 = 2.0 * r;
  f.c0 = 1.0 - 3.0 * r * r;
  f.d0 = -r * (1.0 + r * r);
  f.omega = params.omega();
  return f;
}

double Quadratic::minimum() const {
  if (c2 > 0.0) return c0 - c1 * c1 / (4.0 * c2);
  if (c2 == 0.0 && c1 == 0.0) return c0;
  return -std::numeric_limits<double>::infinity();
}

PeriodicityPolynomials periodicity_polynomials(const InceForm& form) {
  PeriodicityPolynomials out;
  out.p = {2.0 * form.a0, -form.b0, -0.5 * form.d0};
  // 2 P(xi - 1/2) expanded.
  const Quadratic& p = out.p;
  out.q = {2.0 * p.c2, 2.0 * (p.c1 - p.c2), 2.0 * (0.25 * p.c2 - 0.5 * p.c1 + p.c0)};
  return out;
}

namespace {

std::vector<long> integer_zeros(const Quadratic& poly, long xi_max) {
  std::set<long> found;
  for (long xi = -xi_max; xi <= xi_max; ++xi) {
    const double x = static_cast<double>(xi);
    const double scale =
        std::abs(poly.c2) * x * x + std::abs(poly.c1) * std::abs(x) + std::abs(poly.c0);
    if (std::abs(poly(x)) <= 1e-12 * std::max(scale, 1e-300)) found.insert(xi);
  }
  // Closed-form roots catch integer zeros beyond the scan window.
  std::vector<double> roots;
  if (poly.c2 != 0.0) {
    const double disc = poly.c1 * poly.c1 - 4.0 * poly.c2 * poly.c0;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Numerically stable pair.
      const double qv = -0.5 * (poly.c1 + std::copysign(sq, poly.c1));
      if (qv != 0.0) {
        roots.push_back(qv / poly.c2);
        roots.push_back(poly.c0 / qv);
      } else {
        roots.push_back(0.0);
      }
    }
  } else if (poly.c1 != 0.0) {
    roots.push_back(-poly.c0 / poly.c1);
  }
  for (double r : roots) {
    const double n = std::round(r);
    if (std::abs(r - n) <= 1e-9 && std::abs(n) < 9.0e15) {
      found.insert(static_cast<long>(n));
    }
  }
  return {found.begin(), found.end()};
}

}  // namespace

PeriodicityReport classify_periodicity(const InceForm& form, long xi_max) {
  if (xi_max < 0) {
    throw Error(ErrorCode::InvalidArgument, "xi_max must be nonnegative");
  }
  PeriodicityReport rep;
  rep.polynomials = periodicity_polynomials(form);
  rep.xi_max = xi_max;
  rep.p_minimum = rep.polynomials.p.minimum();
  rep.q_minimum = rep.polynomials.q.minimum();
  rep.degenerate = rep.polynomials.p.is_zero();
  if (rep.degenerate) {
    // Every integer is a zero: nothing is ruled out.
    rep.pi_pair_possible = rep.two_pi_pair_possible = true;
    return rep;
  }
  rep.p_integer_zeros = integer_zeros(rep.polynomials.p, xi_max);
  rep.q_integer_zeros = integer_zeros(rep.polynomials.q, xi_max);
  rep.pi_pair_possible = !rep.p_integer_zeros.empty();
  rep.two_pi_pair_possible = !rep.q_integer_zeros.empty();
  return rep;
}

nlohmann::json to_json(const PeriodicityReport& r) {
  auto poly = [](const Quadratic& q) {
    return nlohmann::json{{"xi2", q.c2}, {"xi1", q.c1}, {"xi0", q.c0}};
  };
  auto minimum = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return "-inf";
    return v;
  };
  return {{"P", poly(r.polynomials.p)},
          {"Q", poly(r.polynomials.q)},
          {"xi_max", r.xi_max},
          {"P_integer_zeros", r.p_integer_zeros},
          {"Q_integer_zeros", r.q_integer_zeros},
          {"P_min", minimum(r.p_minimum)},
          {"Q_min", minimum(r.q_minimum)},
          {"degenerate", r.degenerate},
          {"pi_pair_possible", r.pi_pair_possible},
          {"two_pi_pair_possible", r.two_pi_pair_possible}};
}

std::string_view to_string(TrialClass cls) {
  switch (cls) {
    case TrialClass::EvenPi: return "even_pi";
    case TrialClass::OddPi: return "odd_pi";
    case TrialClass::EvenTwoPi: return "even_2pi";
    case TrialClass::OddTwoPi: return "odd_2pi";
  }
  return "unknown";
}

TrialClass trial_class_from_string(std::string_view name) {
  for (TrialClass c : {TrialClass::EvenPi, TrialClass::OddPi,
                       TrialClass::EvenTwoPi, TrialClass::OddTwoPi}) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown trial class '" + std::string(name) + "'");
}

namespace {

bool is_cosine(TrialClass cls) {
  return cls == TrialClass::EvenPi || cls == TrialClass::EvenTwoPi;
}

double class_period(TrialClass cls) {
  return (cls == TrialClass::EvenPi || cls == TrialClass::OddPi)
             ? std::numbers::pi
             : 2.0 * std::numbers::pi;
}

std::vector<int> class_harmonics(TrialClass cls, int N) {
  int first = 0;
  switch (cls) {
    case TrialClass::EvenPi: first = 0; break;
    case TrialClass::OddPi: first = 2; break;
    case TrialClass::EvenTwoPi:
    case TrialClass::OddTwoPi: first = 1; break;
  }
  std::vector<int> k(static_cast<std::size_t>(N) + 1);
  for (int j = 0; j <= N; ++j) k[static_cast<std::size_t>(j)] = first + 2 * j;
  return k;
}

Eigen::MatrixXd assemble(const InceForm& f, TrialClass cls,
                         const std::vector<int>& harmonics) {
  // Substituting cos(ks) (or sin(ks)) and reducing products:
  //   harmonic k   : c0 - k^2
  //   harmonic k+2 : (-a0 k^2 + b0 k + d0) / 2
  //   harmonic k-2 : (-a0 k^2 - b0 k + d0) / 2
  // with negative harmonics folded back by parity.
  const bool cosine = is_cosine(cls);
  const int n = static_cast<int>(harmonics.size());
  const int first = harmonics.front();
  auto row_of = [&](int k) -> int {
    if ((k - first) % 2 != 0 || k < first) return -1;
    const int r = (k - first) / 2;
    return r < n ? r : -1;
  };
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double k = harmonics[static_cast<std::size_t>(j)];
    const int kk = harmonics[static_cast<std::size_t>(j)];
    const double up = 0.5 * (-f.a0 * k * k + f.b0 * k + f.d0);
    const double down = 0.5 * (-f.a0 * k * k - f.b0 * k + f.d0);
    const std::pair<int, double> contributions[] = {
        {kk, f.c0 - k * k}, {kk + 2, up}, {kk - 2, down}};
    for (auto [h, value] : contributions) {
      double sign = 1.0;
      if (h < 0) {
        h = -h;
        sign = cosine ? 1.0 : -1.0;
      }
      if (!cosine && h == 0) continue;
      const int r = row_of(h);
      if (r >= 0) m(r, j) += sign * value;
    }
  }
  return m;
}

}  // namespace

double FourierTrialSolution::period() const { return class_period(trial_class); }

double FourierTrialSolution::value(double s) const {
  const bool cosine = is_cosine(trial_class);
  double v = 0.0;
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    const double arg = harmonics[i] * s;
    v += coefficients[i] * (cosine ? std::cos(arg) : std::sin(arg));
  }
  return v;
}

std::vector<std::vector<double>> fourier_system(const InceForm& form,
                                                TrialClass cls, int N) {
  if (N < 4) {
    throw Error(ErrorCode::TruncationTooSmall,
                "truncation order " + std::to_string(N) + " < 4");
  }
  const Eigen::MatrixXd m = assemble(form, cls, class_harmonics(cls, N));
  std::vector<std::vector<double>> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto& row = out.emplace_back(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = m(r, c);
    }
  }
  return out;
}

double ince_defect_norm(const InceForm& f, TrialClass cls,
                        std::span<const int> harmonics,
                        std::span<const double> coefficients, int points) {
  if (harmonics.size() != coefficients.size() || points < 8) {
    throw Error(ErrorCode::InvalidArgument, "malformed trigonometric series");
  }
  const bool cosine = is_cosine(cls);
  const double period = class_period(cls);
  const double ds = period / points;
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    const double s = i * ds;
    double y = 0.0, dy = 0.0, d2y = 0.0;
    for (std::size_t j = 0; j < harmonics.size(); ++j) {
      const double k = harmonics[j];
      const double cs = std::cos(k * s), sn = std::sin(k * s);
      const double c = coefficients[j];
      if (cosine) {
        y += c * cs;
        dy -= c * k * sn;
        d2y -= c * k * k * cs;
      } else {
        y += c * sn;
        dy += c * k * cs;
        d2y -= c * k * k * sn;
      }
    }
    const double defect = (1.0 + f.a0 * std::cos(2.0 * s)) * d2y +
                          f.b0 * std::sin(2.0 * s) * dy +
                          (f.c0 + f.d0 * std::cos(2.0 * s)) * y;
    acc += defect * defect;
  }
  return std::sqrt(acc * ds);
}

FourierTrialSolution fourier_trial(const InceForm& form, TrialClass cls,
                                   int N) {
  if (N < 4) {
    throw Error(ErrorCode::TruncationTooSmall,
                "truncation order " + std::to_string(N) + " < 4");
  }
  FourierTrialSolution out;
  out.trial_class = cls;
  out.order = N;
  out.harmonics = class_harmonics(cls, N);

  const Eigen::MatrixXd m = assemble(form, cls, out.harmonics);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd v = svd.matrixV().col(m.cols() - 1);
  v.normalize();
  const double vmax = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * vmax) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }

  out.coefficients.assign(v.data(), v.data() + v.size());
  out.matrix_norm = sv(0);
  out.smallest_singular_value = sv(sv.size() - 1);
  out.system_residual = (m * v).norm();
  out.residual_norm =
      ince_defect_norm(form, cls, out.harmonics, out.coefficients, 1024);
  return out;
}

void write_convergence_csv(std::ostream& os,
                           std::span<const FourierTrialSolution> trials) {
  os << "N[1],residual_norm[1]\n";
  for (const auto& t : trials) {
    os << t.order << ',' << fmt17(t.residual_norm) << '\n';
  }
}

}  // namespace inceprop
