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

#ifndef VSPIKE_SFM_NEURON_H_
#define VSPIKE_SFM_NEURON_H_

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vspike/encoding.h"

namespace vspike {

// Spin-flip model constants. Rates are in 1/ns, detuning in GHz.
struct SfmParams {
  double gamma_a = 2.0;         // gain anisotropy (dichroism)
  double gamma_p = 128.0;       // linear birefringence
  double gamma_n = 0.5;         // carrier inversion decay
  double gamma_s = 110.0;       // spin-flip relaxation
  double kappa = 185.0;         // field decay
  double alpha = 2.0;           // linewidth enhancement factor
  double mu = 2.2;              // normalised pump, 1 at threshold
  double k_inj = 15.0;          // injection strength
  double beta_sp = 1e-5;        // spontaneous emission strength
  double detuning_ghz = -4.58;  // injection minus subsidiary-mode frequency

  // Throws Error(kInvalidParams).
  void Validate() const;
};

// x is the subsidiary (orthogonal) mode, y the solitary (parallel) mode.
struct NeuronState {
  std::complex<double> e_x;
  std::complex<double> e_y;
  double n_total = 0.0;  // total carrier inversion N
  double n_spin = 0.0;   // spin inversion difference n

  double intensity_x() const { return std::norm(e_x); }
  double intensity_y() const { return std::norm(e_y); }
  double intensity() const { return intensity_x() + intensity_y(); }
  bool IsFinite() const;

  friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

// Angular detuning of the injected field from the frame centre frequency,
// 2*pi*detuning + alpha*gamma_a - gamma_p, in rad/ns.
double DetuningAngular(const SfmParams& params);

// Noise-free right-hand side. `e_inj` is the injected amplitude at time t; it
// drives the x-mode only, with phase factor exp(i * DetuningAngular * t).
NeuronState DeterministicDerivative(const NeuronState& state,
                                    std::complex<double> e_inj, double t,
                                    const SfmParams& params);

// Seeded source of complex Gaussian samples with E|xi|^2 = 1.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  std::complex<double> ComplexGaussian();

  // Number of times a negative N +/- n radicand was clamped to zero.
  std::uint64_t radicand_clamps() const { return radicand_clamps_; }
  void RecordClamp() { ++radicand_clamps_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uint64_t radicand_clamps_ = 0;
};

struct FieldIncrement {
  std::complex<double> d_x;
  std::complex<double> d_y;
};

// Spontaneous-emission kick for one step of length dt (sqrt(dt) scaling).
// Exactly zero, and draws nothing, when beta_sp == 0.
FieldIncrement NoiseIncrement(const NeuronState& state, const SfmParams& params,
                              double dt, NoiseSource& noise);

struct IntegratorOptions {
  double dt = 1e-4;      // ns
  double dt_max = 1e-4;  // ns
  int sample_every = 10;
  bool record_carriers = false;
};

// Classical RK4 on the deterministic part, then one additive noise kick.
// Throws kInvalidArgument for dt outside (0, dt_max] and NonFiniteError when
// the result is not finite.
NeuronState Step(const NeuronState& state, const InjectionWaveform& waveform,
                 double t, double dt, const SfmParams& params,
                 NoiseSource& noise, double dt_max = 1e-4);

enum class Observable { kTotal, kX, kY };

// Uniformly sampled intensity record.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double interval, bool with_carriers, double start_time = 0.0);

  // Builds a trajectory from a pre-sampled intensity trace; used for
  // synthetic fixtures and stored traces. FromTotal puts the whole trace in
  // the y-mode.
  static Trajectory FromTotal(double interval, std::vector<double> total,
                              double start_time = 0.0);
  static Trajectory FromModes(double interval, std::vector<double> x,
                              std::vector<double> y, double start_time = 0.0);

  void Append(const NeuronState& state);
  void Reserve(std::size_t n);

  std::size_t size() const { return total_.size(); }
  bool empty() const { return total_.empty(); }
  double interval() const { return interval_; }
  double start_time() const { return start_time_; }
  double time(std::size_t i) const {
    return start_time_ + static_cast<double>(i) * interval_;
  }
  // Time span covered by the samples.
  double duration() const {
    return empty() ? 0.0 : static_cast<double>(size() - 1) * interval_;
  }
  bool has_carriers() const { return with_carriers_; }

  std::span<const double> intensity_x() const { return x_; }
  std::span<const double> intensity_y() const { return y_; }
  std::span<const double> total() const { return total_; }
  std::span<const double> n_total() const { return n_total_; }
  std::span<const double> n_spin() const { return n_spin_; }
  std::span<const double> observable(Observable which) const;

  // Full-precision state after the last integrator step.
  const NeuronState& final_state() const { return final_state_; }
  void set_final_state(const NeuronState& s) { final_state_ = s; }

 private:
  double interval_ = 0.0;
  double start_time_ = 0.0;
  bool with_carriers_ = false;
  std::vector<double> x_, y_, total_, n_total_, n_spin_;
  NeuronState final_state_;
};

// Integrates over the whole waveform, recording the initial state and every
// sample_every-th step. Throws kEmptyTrajectory for an empty or zero-length
// waveform and NonFiniteError on blow-up.
Trajectory Run(const NeuronState& initial, const InjectionWaveform& waveform,
               const SfmParams& params, const IntegratorOptions& options,
               NoiseSource& noise);

struct LockSearchOptions {
  double dt = 1e-4;
  double max_time = 200.0;      // ns before giving up
  double tolerance = 1e-10;     // max state change per ns
  double free_run_time = 50.0;  // ns of solitary relaxation first
};

// Solitary (no injection, no noise) steady state relaxed from small fields.
NeuronState FreeRunningState(const SfmParams& params,
                             const LockSearchOptions& options = {});

// Injection-locked fixed point under a constant `baseline` amplitude, phased
// for a run that starts at t = 0. Noise is disabled. Throws kNotLocked when
// no x-dominant fixed point is reached within max_time.
NeuronState FindLockedState(const SfmParams& params,
                            std::complex<double> baseline,
                            const LockSearchOptions& options = {});

}  // namespace vspike

#endif  // VSPIKE_SFM_NEURON_H_
