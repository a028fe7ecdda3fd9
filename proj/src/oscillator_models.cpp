#include "inceprop/oscillator_models.hpp"

#include <array>
#include <cmath>
#include <string>

#include "inceprop/errors.hpp"

namespace inceprop {

OscillatorParams::OscillatorParams(double mass, double omega, double coupling,
                                   double hbar)
    : mass_(mass), omega_(omega), coupling_(coupling), hbar_(hbar) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  }
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  }
}

PumpSchedule PumpSchedule::constant(double amplitude) {
  return detuned(amplitude, 0.0);
}

PumpSchedule PumpSchedule::detuned(double amplitude, double detuning) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude) ||
      !std::isfinite(detuning)) {
    throw Error(ErrorCode::InvalidArgument,
                "pump amplitude must be finite and nonnegative");
  }
  PumpSchedule p;
  p.kind_ = detuning == 0.0 ? Kind::Constant : Kind::Detuned;
  p.amplitude_ = amplitude;
  p.detuning_ = detuning;
  return p;
}

PumpSchedule PumpSchedule::tabulated(std::vector<double> times,
                                     std::vector<double> amplitudes,
                                     std::vector<double> phases) {
  for (double v : amplitudes) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument,
                  "tabulated pump amplitudes must be finite and nonnegative");
    }
  }
  PumpSchedule p;
  p.kind_ = Kind::Tabulated;
  p.amp_table_ = MonotoneCubic(times, std::move(amplitudes));
  p.phase_table_ = MonotoneCubic(std::move(times), std::move(phases));
  return p;
}

PumpValue PumpSchedule::at(double t) const {
  if (kind_ != Kind::Tabulated) {
    return {amplitude_, 0.0, detuning_ * t, detuning_};
  }
  if (!amp_table_.covers(t)) {
    throw Error(ErrorCode::PumpOutOfDomain,
                "tabulated pump does not cover t = " + std::to_string(t));
  }
  const auto amp = amp_table_(t);
  const auto ph = phase_table_(t);
  return {amp.value, amp.slope, ph.value, ph.slope};
}

double TrigSeries::value(double t) const {
  double v = offset;
  for (const auto& term : terms) {
    v += term.amplitude * std::cos(term.frequency * t + term.phase);
  }
  return v;
}

double TrigSeries::derivative(double t) const {
  double v = 0.0;
  for (const auto& term : terms) {
    v -= term.amplitude * term.frequency *
         std::sin(term.frequency * t + term.phase);
  }
  return v;
}

QuadraticCoefficients dpo_coefficients(const OscillatorParams& params,
                                       double t) {
  const double m = params.mass();
  const double w = params.omega();
  const double hbar = params.hbar();
  const double lambda = params.coupling();

  const double arg = 2.0 * w * t;
  const double cs = std::cos(arg);
  const double sn = std::sin(arg);
  const double ratio = lambda / w;
  const double kin = hbar / (2.0 * m);
  const double pot = m * w * w / (2.0 * hbar);

  QuadraticCoefficients q;
  q.a = kin * (1.0 + ratio * cs);
  q.b = pot * (1.0 - ratio * cs);
  q.c = 0.5 * lambda * sn;
  q.d = q.c;
  q.da = kin * (-(ratio * sn * (2.0 * w)));
  q.dc = 0.5 * (lambda * cs * (2.0 * w));
  return q;
}

QuadraticCoefficients raiford_coefficients(const OscillatorParams& params,
                                           const PumpSchedule& pump,
                                           double t) {
  const double m = params.mass();
  const double w = params.omega();
  const double hbar = params.hbar();
  const PumpValue pv = pump.at(t);

  const double arg = 2.0 * w * t + pv.phase;
  const double darg = 2.0 * w + pv.phase_rate;
  const double cs = std::cos(arg);
  const double sn = std::sin(arg);
  const double ratio = pv.amplitude / w;
  const double dratio = pv.amplitude_rate / w;

  const double kin = hbar / (2.0 * m);
  const double pot = m * w * w / (2.0 * hbar);

  QuadraticCoefficients q;
  q.a = kin * (1.0 + ratio * cs);
  q.b = pot * (1.0 - ratio * cs);
  q.c = 0.5 * pv.amplitude * sn;
  q.d = q.c;
  q.da = kin * (dratio * cs - ratio * sn * darg);
  q.dc = 0.5 * (pv.amplitude_rate * sn + pv.amplitude * cs * darg);
  return q;
}

namespace {

double checked(double v, const char* name, double t) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteCoefficient,
                std::string(name) + "(t) is not finite at t = " +
                    std::to_string(t));
  }
  return v;
}

double central_difference(const ScalarFunction& f, double t) {
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace

QuadraticCoefficients generic_coefficients(const GenericCoefficients& fns,
                                           double t) {
  if (!fns.a || !fns.b || !fns.c || !fns.d) {
    throw Error(ErrorCode::InvalidArgument,
                "generic model requires a, b, c and d callables");
  }
  QuadraticCoefficients q;
  q.a = checked(fns.a(t), "a", t);
  q.b = checked(fns.b(t), "b", t);
  q.c = checked(fns.c(t), "c", t);
  q.d = checked(fns.d(t), "d", t);
  q.da = checked(fns.da ? fns.da(t) : central_difference(fns.a, t), "a'", t);
  q.dc = checked(fns.dc ? fns.dc(t) : central_difference(fns.c, t), "c'", t);
  return q;
}

CoefficientModel CoefficientModel::dpo(const OscillatorParams& params) {
  return CoefficientModel(Dpo{params});
}

CoefficientModel CoefficientModel::raiford(const OscillatorParams& params,
                                           PumpSchedule pump) {
  return CoefficientModel(Raiford{params, std::move(pump)});
}

CoefficientModel CoefficientModel::generic(GenericCoefficients fns) {
  return CoefficientModel(Generic{std::move(fns), std::nullopt});
}

CoefficientModel CoefficientModel::generic(TrigSeries a, TrigSeries b,
                                           TrigSeries c, TrigSeries d) {
  std::array<TrigSeries, 4> s{std::move(a), std::move(b), std::move(c),
                              std::move(d)};
  GenericCoefficients fns;
  fns.a = [f = s[0]](double t) { return f.value(t); };
  fns.b = [f = s[1]](double t) { return f.value(t); };
  fns.c = [f = s[2]](double t) { return f.value(t); };
  fns.d = [f = s[3]](double t) { return f.value(t); };
  fns.da = [f = s[0]](double t) { return f.derivative(t); };
  fns.dc = [f = s[2]](double t) { return f.derivative(t); };
  return CoefficientModel(Generic{std::move(fns), std::move(s)});
}

QuadraticCoefficients CoefficientModel::operator()(double t) const {
  return std::visit(
      [t](const auto& m) -> QuadraticCoefficients {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Dpo>) {
          return dpo_coefficients(m.params, t);
        } else if constexpr (std::is_same_v<T, Raiford>) {
          return raiford_coefficients(m.params, m.pump, t);
        } else {
          return generic_coefficients(m.fns, t);
        }
      },
      *impl_);
}

ModelKind CoefficientModel::kind() const noexcept {
  switch (impl_->index()) {
    case 0: return ModelKind::Dpo;
    case 1: return ModelKind::Raiford;
    default: return ModelKind::Generic;
  }
}

const OscillatorParams* CoefficientModel::params() const noexcept {
  if (const auto* m = std::get_if<Dpo>(impl_.get())) return &m->params;
  if (const auto* m = std::get_if<Raiford>(impl_.get())) return &m->params;
  return nullptr;
}

const PumpSchedule* CoefficientModel::pump() const noexcept {
  if (const auto* m = std::get_if<Raiford>(impl_.get())) return &m->pump;
  return nullptr;
}

const std::array<TrigSeries, 4>* CoefficientModel::series() const noexcept {
  if (const auto* m = std::get_if<Generic>(impl_.get())) {
    return m->series ? &*m->series : nullptr;
  }
  return nullptr;
}

}  // namespace inceprop
