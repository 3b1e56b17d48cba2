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

#include "vspike/spikes.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"
#include "vspike/error.h"

namespace vspike {

double Percentile(std::span<const double> values, double q) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "percentile of empty range");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = std::clamp(q, 0.0, 100.0) / 100.0 *
                      static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SpikeRaster Detect(const Trajectory& trajectory, const DetectOptions& options) {
  if (!(options.refractory > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "refractory must be positive");
  }
  const std::span<const double> trace =
      trajectory.observable(options.observable);
  if (options.baseline_window > 0.0 && !trace.empty()) {
    const auto n = std::clamp<std::size_t>(
        static_cast<std::size_t>(options.baseline_window /
                                 trajectory.interval()),
        1, trace.size());
    const double band = Percentile(trace.first(n), 99.9);
    if (options.threshold < band) {
      throw Error(ErrorCode::kThresholdInsideNoiseBand,
                  "threshold " + std::to_string(options.threshold) +
                      " below baseline 99.9th percentile " +
                      std::to_string(band));
    }
  }

  SpikeRaster raster;
  raster.threshold = options.threshold;
  raster.refractory = options.refractory;
  bool have_last = false;
  double last = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (!(trace[i] > options.threshold && trace[i - 1] <= options.threshold)) {
      continue;
    }
    const double t = trajectory.time(i);
    if (have_last && t - last < options.refractory) continue;
    raster.times.push_back(t);
    last = t;
    have_last = true;
  }
  return raster;
}

ReconstructionMap::ReconstructionMap(int width, int height)
    : width_(width),
      height_(height),
      counts_(static_cast<std::size_t>(width) * height, 0) {}

long ReconstructionMap::total() const {
  long sum = 0;
  for (int c : counts_) sum += c;
  return sum;
}

int ReconstructionMap::max_count() const {
  return counts_.empty() ? 0
                         : *std::max_element(counts_.begin(), counts_.end());
}

GrayImage ReconstructionMap::ToGray(int maxval) const {
  GrayImage gray;
  gray.width = width_;
  gray.height = height_;
  gray.maxval = maxval;
  const int top = std::max(1, max_count());
  gray.pixels.reserve(counts_.size());
  for (int c : counts_) {
    gray.pixels.push_back(
        static_cast<std::uint16_t>(static_cast<long>(c) * maxval / top));
  }
  return gray;
}

std::string ReconstructionMap::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < height_; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < width_; ++c) row.push_back(at(r, c));
    rows.push_back(std::move(row));
  }
  nlohmann::json doc = {{"width", width_},
                        {"height", height_},
                        {"total_spikes", total()},
                        {"counts", std::move(rows)}};
  return doc.dump(1);
}

ReconstructionMap Bin(const SpikeRaster& raster,
                      const InjectionWaveform& waveform) {
  if (!waveform.layout()) {
    throw Error(ErrorCode::kInvalidArgument, "waveform has no pixel layout");
  }
  const PixelLayout& layout = *waveform.layout();
  ReconstructionMap map(layout.cols, layout.rows);
  for (double t : raster.times) {
    SlotIndex slot;
    try {
      slot = waveform.SlotOf(t);
    } catch (const Error&) {
      throw Error(ErrorCode::kSpikeOutOfRange,
                  "spike at " + std::to_string(t) + " ns is outside the slots");
    }
    ++map.at(slot.row, slot.col);
  }
  return map;
}

double WidthOf(const Trajectory& trajectory, double spike_time,
               const WidthOptions& options) {
  const std::span<const double> trace =
      trajectory.observable(options.observable);
  const double dt = trajectory.interval();
  const double offset = spike_time - trajectory.start_time();
  if (trace.empty() || !(offset >= 0.0) || offset > trajectory.duration()) {
    throw Error(ErrorCode::kNotASpike, "spike time outside the trajectory");
  }
  const double base =
      options.baseline ? *options.baseline : Percentile(trace, 50.0);
  const auto start = static_cast<std::size_t>(std::llround(offset / dt));
  const std::size_t stop = std::min(
      trace.size(),
      start + static_cast<std::size_t>(options.search_window / dt) + 1);
  std::size_t peak = start;
  for (std::size_t i = start; i < stop; ++i) {
    if (trace[i] > trace[peak]) peak = i;
  }
  if (!(trace[peak] > base)) {
    throw Error(ErrorCode::kNotASpike, "no excursion above baseline");
  }
  const double half = base + 0.5 * (trace[peak] - base);

  // Crossing position between samples a (above) and b (below half).
  auto crossing = [&](std::size_t above, std::size_t below) {
    const double va = trace[above];
    const double vb = trace[below];
    const double frac = (va - half) / (va - vb);
    return (static_cast<double>(above) +
            frac * (static_cast<double>(below) - static_cast<double>(above))) *
           dt;
  };
  // Offsets are relative to the first sample; only the difference matters.
  std::size_t left = peak;
  while (left > 0 && trace[left - 1] > half) --left;
  std::size_t right = peak;
  while (right + 1 < trace.size() && trace[right + 1] > half) ++right;
  const double t_left = left > 0 ? crossing(left, left - 1) : 0.0;
  const double t_right =
      right + 1 < trace.size() ? crossing(right, right + 1) : right * dt;
  return t_right - t_left;
}

void WriteRasterCsv(std::ostream& out, const SpikeRaster& raster) {
  const auto precision = out.precision(12);
  out << "time_ns\n";
  for (double t : raster.times) out << t << '\n';
  out.precision(precision);
}

}  // namespace vspike
