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

#include "vspike/encoding.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vspike/error.h"

namespace vspike {
namespace {

// Relative slack used when deciding whether a step edge coincides with a
// segment edge.
constexpr double kEdgeTolerance = 1e-6;

}  // namespace

void EncodingParams::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidParams, what);
  };
  if (!(pixel_period > 0.0)) fail("pixel_period must be positive");
  if (!(pulse_hold > 0.0 && pulse_hold < pixel_period)) {
    fail("pulse_hold must lie in (0, pixel_period)");
  }
  if (!(lead_in >= 0.0) || !std::isfinite(lead_in)) {
    fail("lead_in must be non-negative");
  }
  if (!(v_max > 0.0)) fail("v_max must be positive");
  if (!(mod_depth >= 0.0 && mod_depth <= 1.0)) {
    fail("mod_depth must lie in [0, 1]");
  }
  if (!std::isfinite(baseline.real()) || !std::isfinite(baseline.imag())) {
    fail("baseline must be finite");
  }
}

InjectionWaveform InjectionWaveform::Constant(std::complex<double> amplitude,
                                              double duration) {
  return FromSegments({WaveformSegment{0.0, duration, amplitude}});
}

InjectionWaveform InjectionWaveform::FromSegments(
    std::vector<WaveformSegment> segments, std::optional<PixelLayout> layout) {
  if (segments.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "waveform has no segments");
  }
  double expected = 0.0;
  for (const auto& seg : segments) {
    if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "segment durations must be positive");
    }
    if (std::abs(seg.start - expected) >
        kEdgeTolerance * std::max(1.0, seg.duration)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "segments must be contiguous from t = 0");
    }
    expected = seg.end();
  }
  InjectionWaveform wf;
  wf.duration_ = segments.back().end();
  wf.segments_ = std::move(segments);
  wf.layout_ = layout;
  return wf;
}

std::size_t InjectionWaveform::SegmentIndex(double t) const {
  if (!(t >= 0.0 && t < duration_)) {
    throw Error(ErrorCode::kOutOfRange, "t = " + std::to_string(t) +
                                            " outside [0, " +
                                            std::to_string(duration_) + ")");
  }
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), t,
      [](double value, const WaveformSegment& s) { return value < s.start; });
  return static_cast<std::size_t>(it - segments_.begin()) - 1;
}

std::complex<double> InjectionWaveform::Sample(double t) const {
  return segments_[SegmentIndex(t)].amplitude;
}

StageAmplitudes InjectionWaveform::StepAmplitudes(double t, double dt,
                                                  std::size_t& hint) const {
  const double mid = t + 0.5 * dt;
  const std::size_t last = segments_.size() - 1;
  if (hint > last || segments_[hint].start > mid) hint = 0;
  while (hint < last && segments_[hint + 1].start <= mid) ++hint;
  const WaveformSegment& seg = segments_[hint];
  const double slack = kEdgeTolerance * dt;
  if (seg.start <= t + slack && t + dt <= seg.end() + slack) {
    return {seg.amplitude, seg.amplitude, seg.amplitude};
  }
  // A segment edge falls strictly inside the step: take one-sided limits.
  std::size_t first = hint;
  while (first > 0 && segments_[first].start > t) --first;
  std::size_t end = hint;
  while (end < last && segments_[end + 1].start < t + dt) ++end;
  return {segments_[first].amplitude, seg.amplitude, segments_[end].amplitude};
}

SlotIndex InjectionWaveform::SlotOf(double t) const {
  if (!layout_) {
    throw Error(ErrorCode::kOutOfRange, "waveform has no pixel layout");
  }
  const PixelLayout& l = *layout_;
  const double offset = (t - l.lead_in) / l.pixel_period;
  // Absorbs round-off when t is computed as lead_in + k * pixel_period.
  const double k = std::floor(offset + 1e-9);
  if (!(t >= l.lead_in - 1e-9 * l.pixel_period) || k < 0.0 ||
      k >= static_cast<double>(l.slot_count())) {
    throw Error(ErrorCode::kOutOfRange,
                "t = " + std::to_string(t) + " ns is outside the pixel slots");
  }
  const auto index = static_cast<std::size_t>(k);
  return SlotIndex{static_cast<int>(index / l.cols),
                   static_cast<int>(index % l.cols), index};
}

double InjectionWaveform::SlotStart(std::size_t index) const {
  if (!layout_ || index >= layout_->slot_count()) {
    throw Error(ErrorCode::kOutOfRange, "slot index out of range");
  }
  return layout_->lead_in + static_cast<double>(index) * layout_->pixel_period;
}

double HeldAmplitudeFactor(double value, const EncodingParams& params) {
  return std::clamp(1.0 - params.mod_depth * value / params.v_max, 0.0, 2.0);
}

InjectionWaveform Encode(const ValueMap& map, const EncodingParams& params) {
  if (map.empty()) throw Error(ErrorCode::kEmptyMap, "value map is empty");
  params.Validate();

  std::vector<WaveformSegment> segments;
  segments.reserve(2 * map.size() + 1);
  if (params.lead_in > 0.0) {
    segments.push_back({0.0, params.lead_in, params.baseline});
  }
  const std::size_t count = map.size();
  for (std::size_t i = 0; i < count; ++i) {
    const double slot =
        params.lead_in + static_cast<double>(i) * params.pixel_period;
    const double next =
        params.lead_in + static_cast<double>(i + 1) * params.pixel_period;
    const double held = slot + params.pulse_hold;
    segments.push_back(
        {slot, params.pulse_hold,
         params.baseline * HeldAmplitudeFactor(map.values()[i], params)});
    segments.push_back({held, next - held, params.baseline});
  }
  PixelLayout layout{params.lead_in, params.pixel_period, params.pulse_hold,
                     map.height(), map.width()};
  return InjectionWaveform::FromSegments(std::move(segments), layout);
}

void WriteWaveformCsv(std::ostream& out, const InjectionWaveform& waveform) {
  out << "time_ns,amplitude\n";
  const auto precision = out.precision(17);
  for (const auto& seg : waveform.segments()) {
    out << seg.start << ',' << std::abs(seg.amplitude) << '\n';
  }
  if (!waveform.empty()) {
    out << waveform.duration() << ','
        << std::abs(waveform.segments().back().amplitude) << '\n';
  }
  out.precision(precision);
}

}  // namespace vspike
