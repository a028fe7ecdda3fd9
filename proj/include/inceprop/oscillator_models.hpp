#pragma once

// Time-dependent coefficients of H = a p^2 + b x^2 + c px + d xp with
// p = -i d/dx (hbar already folded into a and b).

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "inceprop/interpolation.hpp"

namespace inceprop {

/// Physical constants of the pumped oscillator. `coupling` is the pump
/// strength lambda (rad/time), not the integrating factor.
class OscillatorParams {
 public:
  OscillatorParams(double mass, double omega, double coupling,
                   double hbar = 1.0);

  /// m = hbar = 1 convenience.
  static OscillatorParams unit(double omega, double coupling) {
    return OscillatorParams(1.0, omega, coupling, 1.0);
  }

  double mass() const noexcept { return mass_; }
  double omega() const noexcept { return omega_; }
  double coupling() const noexcept { return coupling_; }
  double hbar() const noexcept { return hbar_; }

  /// lambda / omega
  double pump_ratio() const noexcept { return coupling_ / omega_; }

  /// a(t) can reach zero; propagator synthesis is not defined there.
  bool kinetic_degenerate() const noexcept { return pump_ratio() >= 1.0; }

  bool operator==(const OscillatorParams&) const = default;

 private:
  double mass_;
  double omega_;
  double coupling_;
  double hbar_;
};

struct PumpValue {
  double amplitude;
  double amplitude_rate;
  double phase;
  double phase_rate;
};

/// Pump amplitude lambda(t) >= 0 and phase delta(t) for the detuned /
/// time-dependent pump extension.
class PumpSchedule {
 public:
  enum class Kind { Constant, Detuned, Tabulated };

  static PumpSchedule constant(double amplitude);
  /// delta(t) = detuning * t, so delta(0) = 0.
  static PumpSchedule detuned(double amplitude, double detuning);
  static PumpSchedule tabulated(std::vector<double> times,
                                std::vector<double> amplitudes,
                                std::vector<double> phases);

  PumpValue at(double t) const;

  Kind kind() const noexcept { return kind_; }
  double amplitude() const noexcept { return amplitude_; }
  double detuning() const noexcept { return detuning_; }
  const MonotoneCubic& amplitude_table() const noexcept { return amp_table_; }
  const MonotoneCubic& phase_table() const noexcept { return phase_table_; }

 private:
  PumpSchedule() = default;

  Kind kind_ = Kind::Constant;
  double amplitude_ = 0.0;
  double detuning_ = 0.0;
  MonotoneCubic amp_table_;
  MonotoneCubic phase_table_;
};

struct QuadraticCoefficients {
  double a;
  double b;
  double c;
  double d;
  double da;  // a'(t)
  double dc;  // c'(t)
};

using ScalarFunction = std::function<double(double)>;

/// User-supplied coefficient functions. Missing derivatives are replaced by
/// central differences with step 1e-6 * max(1, |t|).
struct GenericCoefficients {
  ScalarFunction a;
  ScalarFunction b;
  ScalarFunction c;
  ScalarFunction d;
  ScalarFunction da;
  ScalarFunction dc;
};

/// offset + sum_k amp_k cos(freq_k t + phase_k); the serializable building
/// block for generic models.
struct TrigSeries {
  struct Term {
    double amplitude;
    double frequency;
    double phase;
    bool operator==(const Term&) const = default;
  };
  double offset = 0.0;
  std::vector<Term> terms;

  double value(double t) const;
  double derivative(double t) const;
  bool operator==(const TrigSeries&) const = default;
};

QuadraticCoefficients dpo_coefficients(const OscillatorParams& params,
                                       double t);
QuadraticCoefficients raiford_coefficients(const OscillatorParams& params,
                                           const PumpSchedule& pump, double t);
QuadraticCoefficients generic_coefficients(const GenericCoefficients& fns,
                                           double t);

enum class ModelKind { Dpo, Raiford, Generic };

/// Immutable, cheaply copyable coefficient source shared by every pipeline
/// stage.
class CoefficientModel {
 public:
  static CoefficientModel dpo(const OscillatorParams& params);
  static CoefficientModel raiford(const OscillatorParams& params,
                                  PumpSchedule pump);
  static CoefficientModel generic(GenericCoefficients fns);
  /// Generic model built from trig series (a, b, c, d); serializable.
  static CoefficientModel generic(TrigSeries a, TrigSeries b, TrigSeries c,
                                  TrigSeries d);

  QuadraticCoefficients operator()(double t) const;

  ModelKind kind() const noexcept;
  /// Present for dpo and raiford models.
  const OscillatorParams* params() const noexcept;
  const PumpSchedule* pump() const noexcept;
  /// Present for series-backed generic models.
  const std::array<TrigSeries, 4>* series() const noexcept;

 private:
  struct Dpo {
    OscillatorParams params;
  };
  struct Raiford {
    OscillatorParams params;
    PumpSchedule pump;
  };
  struct Generic {
    GenericCoefficients fns;
    std::optional<std::array<TrigSeries, 4>> series;
  };
  using Variant = std::variant<Dpo, Raiford, Generic>;

  explicit CoefficientModel(Variant v)
      : impl_(std::make_shared<const Variant>(std::move(v))) {}

  std::shared_ptr<const Variant> impl_;
};

}  // namespace inceprop
