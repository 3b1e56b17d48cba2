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

#ifndef VSPIKE_SPIKES_H_
#define VSPIKE_SPIKES_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vspike/encoding.h"
#include "vspike/pgm.h"
#include "vspike/sfm_neuron.h"

namespace vspike {

struct SpikeRaster {
  std::vector<double> times;  // ns, ascending
  double threshold = 0.0;
  double refractory = 0.0;

  std::size_t size() const { return times.size(); }
};

struct DetectOptions {
  double threshold = 0.0;
  double refractory = 1.0;  // ns
  // When positive, samples with t < baseline_window are taken as the locked
  // baseline and the threshold must clear their 99.9th percentile.
  double baseline_window = 0.0;
  Observable observable = Observable::kTotal;
};

// Linear-interpolated percentile, q in [0, 100].
double Percentile(std::span<const double> values, double q);

// A spike is the first sample of each upward threshold crossing; crossings
// within `refractory` of the previous spike are ignored.
SpikeRaster Detect(const Trajectory& trajectory, const DetectOptions& options);

// Per-pixel spike counts laid out like the encoded value map.
class ReconstructionMap {
 public:
  ReconstructionMap() = default;
  ReconstructionMap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  int at(int row, int col) const { return counts_[Index(row, col)]; }
  int& at(int row, int col) { return counts_[Index(row, col)]; }
  const std::vector<int>& counts() const { return counts_; }
  long total() const;
  int max_count() const;

  // 0 stays black; the largest count maps to maxval.
  GrayImage ToGray(int maxval = 255) const;
  std::string ToJson() const;

  friend bool operator==(const ReconstructionMap&,
                         const ReconstructionMap&) = default;

 private:
  std::size_t Index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<int> counts_;
};

// Attributes every spike to the pixel slot containing it. Throws
// kSpikeOutOfRange for spikes outside the slots.
ReconstructionMap Bin(const SpikeRaster& raster,
                      const InjectionWaveform& waveform);

struct WidthOptions {
  Observable observable = Observable::kTotal;
  // Level the excursion is measured from; the trace median when unset.
  std::optional<double> baseline;
  double search_window = 0.5;  // ns after the spike time to look for the peak
};

// Full width at half maximum of the excursion above baseline around a spike,
// with linear interpolation between samples. Throws kNotASpike when there is
// no excursion above baseline.
double WidthOf(const Trajectory& trajectory, double spike_time,
               const WidthOptions& options = {});

void WriteRasterCsv(std::ostream& out, const SpikeRaster& raster);

}  // namespace vspike

#endif  // VSPIKE_SPIKES_H_
