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

#ifndef VSPIKE_ENCODING_H_
#define VSPIKE_ENCODING_H_

#include <complex>
#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "vspike/imaging.h"

namespace vspike {

struct EncodingParams {
  double pixel_period = 1.5;  // ns per pixel slot
  double pulse_hold = 0.25;   // ns the pixel value is held at slot start
  std::complex<double> baseline{1.0, 0.0};  // locking level, from calibration
  double mod_depth = 1.0;                   // fractional drop at v == v_max
  double v_max = 4.0;
  double lead_in = 20.0;  // ns of baseline before the first pixel

  // Throws Error(kInvalidParams).
  void Validate() const;
};

struct WaveformSegment {
  double start = 0.0;
  double duration = 0.0;
  std::complex<double> amplitude;

  double end() const { return start + duration; }
};

// Regular pixel-slot structure of an encoded waveform.
struct PixelLayout {
  double lead_in = 0.0;
  double pixel_period = 0.0;
  double pulse_hold = 0.0;
  int rows = 0;
  int cols = 0;

  std::size_t slot_count() const {
    return static_cast<std::size_t>(rows) * cols;
  }
};

struct SlotIndex {
  int row = 0;
  int col = 0;
  std::size_t index = 0;
};

// Injection amplitudes at the distinct RK4 stage times of one step. `start`
// is the right limit at t and `end` the left limit at t + dt.
struct StageAmplitudes {
  std::complex<double> start;
  std::complex<double> mid;
  std::complex<double> end;
};

// Piecewise-constant complex injection amplitude on [0, duration).
class InjectionWaveform {
 public:
  InjectionWaveform() = default;

  static InjectionWaveform Constant(std::complex<double> amplitude,
                                    double duration);
  // Segments must tile [0, duration) with positive lengths.
  static InjectionWaveform FromSegments(
      std::vector<WaveformSegment> segments,
      std::optional<PixelLayout> layout = std::nullopt);

  double duration() const { return duration_; }
  bool empty() const { return segments_.empty(); }
  const std::vector<WaveformSegment>& segments() const { return segments_; }
  const std::optional<PixelLayout>& layout() const { return layout_; }

  // Amplitude of the segment containing t. Throws kOutOfRange unless
  // 0 <= t < duration.
  std::complex<double> Sample(double t) const;
  std::size_t SegmentIndex(double t) const;

  // `hint` is a segment cursor for monotone sweeps; pass a variable that
  // starts at 0 and is reused between consecutive steps.
  StageAmplitudes StepAmplitudes(double t, double dt, std::size_t& hint) const;

  // Pixel slot containing t. Requires a layout and lead_in <= t < end of the
  // last slot; throws kOutOfRange otherwise.
  SlotIndex SlotOf(double t) const;
  double SlotStart(std::size_t index) const;

 private:
  std::vector<WaveformSegment> segments_;
  double duration_ = 0.0;
  std::optional<PixelLayout> layout_;
};

// Held amplitude multiplier for pixel value v: 1 - mod_depth * v / v_max,
// clamped to [0, 2].
double HeldAmplitudeFactor(double value, const EncodingParams& params);

// Row-major time-multiplexed return-to-zero encoding of a value map.
InjectionWaveform Encode(const ValueMap& map, const EncodingParams& params);

// Two-column CSV (time_ns, amplitude) with one row per segment start plus a
// closing row at the waveform end. Amplitude is the modulus; encode() never
// changes the phase of the baseline.
void WriteWaveformCsv(std::ostream& out, const InjectionWaveform& waveform);

}  // namespace vspike

#endif  // VSPIKE_ENCODING_H_
