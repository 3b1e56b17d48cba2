// Copyright 2026 The vspike Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vspike/sfm_neuron.h"

#include <cmath>
#include <numbers>
#include <string>

#include "vspike/error.h"

namespace vspike {
namespace {

// Parameter combinations hoisted out of the right-hand side.
struct Coefficients {
  explicit Coefficients(const SfmParams& p)
      : linear_x(-(p.kappa + p.gamma_a), -(p.kappa * p.alpha + p.gamma_p)),
        linear_y(-(p.kappa - p.gamma_a), -(p.kappa * p.alpha - p.gamma_p)),
        gain(p.kappa, p.kappa * p.alpha),
        k_inj(p.k_inj),
        gamma_n(p.gamma_n),
        gamma_s(p.gamma_s),
        mu(p.mu),
        omega(DetuningAngular(p)) {}

  std::complex<double> linear_x;
  std::complex<double> linear_y;
  std::complex<double> gain;  // kappa * (1 + i alpha)
  double k_inj;
  double gamma_n;
  double gamma_s;
  double mu;
  double omega;
};

// i * z without a full complex multiply.
inline std::complex<double> TimesI(std::complex<double> z) {
  return {-z.imag(), z.real()};
}

// `drive` is the complete injection term k_inj * E_inj * exp(i omega t).
inline NeuronState Rhs(const Coefficients& c, const NeuronState& s,
                       std::complex<double> drive) {
  const double big_n = s.n_total;
  const double small_n = s.n_spin;
  const double ix = std::norm(s.e_x);
  const double iy = std::norm(s.e_y);
  // i (Ey Ex* - Ex Ey*) = -2 Im(Ey Ex*), always real.
  const double cross = -2.0 * (s.e_y * std::conj(s.e_x)).imag();

  NeuronState d;
  d.e_x = c.linear_x * s.e_x +
          c.gain * (big_n * s.e_x + small_n * TimesI(s.e_y)) + drive;
  d.e_y =
      c.linear_y * s.e_y + c.gain * (big_n * s.e_y - small_n * TimesI(s.e_x));
  d.n_total = -c.gamma_n * (big_n * (1.0 + ix + iy) - c.mu + small_n * cross);
  d.n_spin =
      -c.gamma_s * small_n - c.gamma_n * (small_n * (ix + iy) + big_n * cross);
  return d;
}

inline NeuronState Axpy(const NeuronState& s, double h, const NeuronState& k) {
  return {s.e_x + h * k.e_x, s.e_y + h * k.e_y, s.n_total + h * k.n_total,
          s.n_spin + h * k.n_spin};
}

struct StepRotations {
  StepRotations(double omega, double dt)
      : half(std::polar(1.0, 0.5 * omega * dt)),
        full(std::polar(1.0, omega * dt)) {}
  std::complex<double> half;
  std::complex<double> full;
};

// One deterministic RK4 step from t. Every integrating entry point goes
// through here, which keeps their arithmetic identical.
inline NeuronState Rk4(const Coefficients& c, const StepRotations& rot,
                       const NeuronState& s, double t, double dt,
                       const StageAmplitudes& amps) {
  const std::complex<double> phasor = std::polar(1.0, c.omega * t);
  const std::complex<double> drive0 = c.k_inj * amps.start * phasor;
  const std::complex<double> drive1 = c.k_inj * amps.mid * (phasor * rot.half);
  const std::complex<double> drive2 = c.k_inj * amps.end * (phasor * rot.full);

  const double h2 = 0.5 * dt;
  const NeuronState k1 = Rhs(c, s, drive0);
  const NeuronState k2 = Rhs(c, Axpy(s, h2, k1), drive1);
  const NeuronState k3 = Rhs(c, Axpy(s, h2, k2), drive1);
  const NeuronState k4 = Rhs(c, Axpy(s, dt, k3), drive2);
  const double w = dt / 6.0;
  return {
      s.e_x + w * (k1.e_x + 2.0 * (k2.e_x + k3.e_x) + k4.e_x),
      s.e_y + w * (k1.e_y + 2.0 * (k2.e_y + k3.e_y) + k4.e_y),
      s.n_total +
          w * (k1.n_total + 2.0 * (k2.n_total + k3.n_total) + k4.n_total),
      s.n_spin + w * (k1.n_spin + 2.0 * (k2.n_spin + k3.n_spin) + k4.n_spin)};
}

inline void AddNoise(NeuronState& s, const SfmParams& params, double dt,
                     NoiseSource& noise) {
  if (params.beta_sp == 0.0) return;
  const FieldIncrement kick = NoiseIncrement(s, params, dt, noise);
  s.e_x += kick.d_x;
  s.e_y += kick.d_y;
}

void CheckStepSize(double dt, double dt_max) {
  if (!(dt > 0.0) || !(dt <= dt_max)) {
    throw Error(ErrorCode::kInvalidArgument, "dt = " + std::to_string(dt) +
                                                 " ns outside (0, " +
                                                 std::to_string(dt_max) + "]");
  }
}

// Field amplitudes in the frame co-rotating with the injected field.
NeuronState CoRotating(const NeuronState& s, double omega, double t) {
  const std::complex<double> back = std::polar(1.0, -omega * t);
  return {s.e_x * back, s.e_y * back, s.n_total, s.n_spin};
}

double MaxDifference(const NeuronState& a, const NeuronState& b) {
  return std::max({std::abs(a.e_x - b.e_x), std::abs(a.e_y - b.e_y),
                   std::abs(a.n_total - b.n_total),
                   std::abs(a.n_spin - b.n_spin)});
}

}  // namespace

void SfmParams::Validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidParams,
                  std::string(name) + " must be positive and finite");
    }
  };
  positive(gamma_a, "gamma_a");
  positive(gamma_p, "gamma_p");
  positive(gamma_n, "gamma_n");
  positive(gamma_s, "gamma_s");
  positive(kappa, "kappa");
  positive(k_inj, "k_inj");
  positive(mu, "mu");
  if (!std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidParams, "alpha must be finite");
  }
  if (!(beta_sp >= 0.0) || !std::isfinite(beta_sp)) {
    throw Error(ErrorCode::kInvalidParams, "beta_sp must be >= 0");
  }
  if (!std::isfinite(detuning_ghz)) {
    throw Error(ErrorCode::kInvalidParams, "detuning must be finite");
  }
}

bool NeuronState::IsFinite() const {
  return std::isfinite(e_x.real()) && std::isfinite(e_x.imag()) &&
         std::isfinite(e_y.real()) && std::isfinite(e_y.imag()) &&
         std::isfinite(n_total) && std::isfinite(n_spin);
}

double DetuningAngular(const SfmParams& params) {
  // GHz and 1/ns are the same unit.
  return 2.0 * std::numbers::pi * params.detuning_ghz +
         params.alpha * params.gamma_a - params.gamma_p;
}

NeuronState DeterministicDerivative(const NeuronState& state,
                                    std::complex<double> e_inj, double t,
                                    const SfmParams& params) {
  const Coefficients c(params);
  return Rhs(c, state, c.k_inj * e_inj * std::polar(1.0, c.omega * t));
}

std::complex<double> NoiseSource::ComplexGaussian() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return std::complex<double>(re, im) / std::numbers::sqrt2;
}

FieldIncrement NoiseIncrement(const NeuronState& state, const SfmParams& params,
                              double dt, NoiseSource& noise) {
  if (params.beta_sp == 0.0) return {};
  double plus = state.n_total + state.n_spin;
  double minus = state.n_total - state.n_spin;
  if (plus < 0.0) {
    plus = 0.0;
    noise.RecordClamp();
  }
  if (minus < 0.0) {
    minus = 0.0;
    noise.RecordClamp();
  }
  const double scale = std::sqrt(0.5 * params.beta_sp * params.gamma_n * dt);
  const std::complex<double> a = std::sqrt(plus) * noise.ComplexGaussian();
  const std::complex<double> b = std::sqrt(minus) * noise.ComplexGaussian();
  return {scale * (a + b), -TimesI(scale * (a - b))};
}

NeuronState Step(const NeuronState& state, const InjectionWaveform& waveform,
                 double t, double dt, const SfmParams& params,
                 NoiseSource& noise, double dt_max) {
  CheckStepSize(dt, dt_max);
  const Coefficients c(params);
  const StepRotations rot(c.omega, dt);
  std::size_t hint = 0;
  NeuronState next =
      Rk4(c, rot, state, t, dt, waveform.StepAmplitudes(t, dt, hint));
  AddNoise(next, params, dt, noise);
  if (!next.IsFinite()) {
    throw NonFiniteError(t + dt, "state left the finite range; reduce dt");
  }
  return next;
}

Trajectory::Trajectory(double interval, bool with_carriers, double start_time)
    : interval_(interval),
      start_time_(start_time),
      with_carriers_(with_carriers) {}

Trajectory Trajectory::FromTotal(double interval, std::vector<double> total,
                                 double start_time) {
  std::vector<double> zeros(total.size(), 0.0);
  return FromModes(interval, std::move(zeros), std::move(total), start_time);
}

Trajectory Trajectory::FromModes(double interval, std::vector<double> x,
                                 std::vector<double> y, double start_time) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "mode traces differ in length");
  }
  if (!(interval > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample interval must be positive");
  }
  Trajectory traj(interval, false, start_time);
  traj.total_.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) traj.total_[i] = x[i] + y[i];
  traj.x_ = std::move(x);
  traj.y_ = std::move(y);
  return traj;
}

void Trajectory::Append(const NeuronState& state) {
  const double ix = state.intensity_x();
  const double iy = state.intensity_y();
  x_.push_back(ix);
  y_.push_back(iy);
  total_.push_back(ix + iy);
  if (with_carriers_) {
    n_total_.push_back(state.n_total);
    n_spin_.push_back(state.n_spin);
  }
}

void Trajectory::Reserve(std::size_t n) {
  x_.reserve(n);
  y_.reserve(n);
  total_.reserve(n);
  if (with_carriers_) {
    n_total_.reserve(n);
    n_spin_.reserve(n);
  }
}

std::span<const double> Trajectory::observable(Observable which) const {
  switch (which) {
    case Observable::kX:
      return x_;
    case Observable::kY:
      return y_;
    case Observable::kTotal:
      break;
  }
  return total_;
}

Trajectory Run(const NeuronState& initial, const InjectionWaveform& waveform,
               const SfmParams& params, const IntegratorOptions& options,
               NoiseSource& noise) {
  params.Validate();
  CheckStepSize(options.dt, options.dt_max);
  if (options.sample_every < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sample_every must be >= 1");
  }
  if (waveform.empty() || !(waveform.duration() > 0.0)) {
    throw Error(ErrorCode::kEmptyTrajectory, "waveform has zero duration");
  }
  const double dt = options.dt;
  const auto steps =
      static_cast<std::int64_t>(std::llround(waveform.duration() / dt));
  if (steps < 1) {
    throw Error(ErrorCode::kEmptyTrajectory,
                "waveform shorter than one integrator step");
  }

  const Coefficients c(params);
  const StepRotations rot(c.omega, dt);
  const int every = options.sample_every;

  Trajectory traj(dt * every, options.record_carriers);
  traj.Reserve(static_cast<std::size_t>(steps / every) + 1);
  traj.Append(initial);

  NeuronState s = initial;
  std::size_t hint = 0;
  for (std::int64_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    s = Rk4(c, rot, s, t, dt, waveform.StepAmplitudes(t, dt, hint));
    AddNoise(s, params, dt, noise);
    if (!s.IsFinite()) [[unlikely]] {
      throw NonFiniteError(t + dt, "state left the finite range; reduce dt");
    }
    if ((i + 1) % every == 0) traj.Append(s);
  }
  traj.set_final_state(s);
  return traj;
}

NeuronState FreeRunningState(const SfmParams& params,
                             const LockSearchOptions& options) {
  params.Validate();
  const Coefficients c(params);
  const double dt = options.dt;
  const StepRotations rot(c.omega, dt);
  const StageAmplitudes off{};
  NeuronState s{{1e-3, 0.0}, {1e-3, 0.0}, 1.0, 0.0};
  const auto steps =
      static_cast<std::int64_t>(std::llround(options.free_run_time / dt));
  for (std::int64_t i = 0; i < steps; ++i) {
    s = Rk4(c, rot, s, static_cast<double>(i) * dt, dt, off);
  }
  if (!s.IsFinite()) {
    throw NonFiniteError(options.free_run_time, "free-running relaxation");
  }
  return s;
}

NeuronState FindLockedState(const SfmParams& params,
                            std::complex<double> baseline,
                            const LockSearchOptions& options) {
  SfmParams quiet = params;
  quiet.beta_sp = 0.0;
  NeuronState s = FreeRunningState(quiet, options);

  const Coefficients c(quiet);
  const double dt = options.dt;
  const StepRotations rot(c.omega, dt);
  const StageAmplitudes amps{baseline, baseline, baseline};
  const auto per_check = std::max<std::int64_t>(1, std::llround(1.0 / dt));
  const double check_span = static_cast<double>(per_check) * dt;
  const auto total =
      static_cast<std::int64_t>(std::llround(options.max_time / dt));

  NeuronState previous = CoRotating(s, c.omega, 0.0);
  for (std::int64_t i = 0; i < total; ++i) {
    const double t = static_cast<double>(i) * dt;
    s = Rk4(c, rot, s, t, dt, amps);
    if ((i + 1) % per_check != 0) continue;
    if (!s.IsFinite()) throw NonFiniteError(t + dt, "lock search diverged");
    const double now = static_cast<double>(i + 1) * dt;
    const NeuronState current = CoRotating(s, c.omega, now);
    const double change = MaxDifference(current, previous) / check_span;
    previous = current;
    if (change < options.tolerance) {
      if (current.intensity_x() <= current.intensity_y()) {
        throw Error(ErrorCode::kNotLocked,
                    "fixed point without polarisation switching");
      }
      return current;
    }
  }
  throw Error(ErrorCode::kNotLocked, "no injection-locked fixed point within " +
                                         std::to_string(options.max_time) +
                                         " ns");
}

}  // namespace vspike
