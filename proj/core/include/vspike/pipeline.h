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

#ifndef VSPIKE_PIPELINE_H_
#define VSPIKE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vspike/encoding.h"
#include "vspike/imaging.h"
#include "vspike/sfm_neuron.h"
#include "vspike/spikes.h"

namespace vspike {

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationOptions {
  // Baseline amplitudes scanned for injection locking.
  double scan_min = 0.1;
  double scan_max = 1.6;
  double scan_step = 0.05;

  // Peak / locked intensity ratio that counts as a spike in noise-free
  // threshold probes (before the detection threshold exists).
  double probe_trigger_ratio = 2.0;
  int bisection_steps = 14;

  int seeds = 10;
  std::uint64_t first_seed = 1;
  double dt = 1e-4;
  int sample_every = 10;
  double refractory = 1.0;
  Observable observable = Observable::kTotal;
};

struct LockScanPoint {
  double amplitude = 0.0;
  bool locked = false;
  double intensity = 0.0;  // locked total intensity, 0 when not locked
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  int full_spikes = 0;     // spikes in v_max slots (expects one per slot)
  int half_spikes = 0;     // spikes in v_max / 2 slots (expects none)
  int inverse_spikes = 0;  // spikes in negative-value slots (expects none)
  int other_spikes = 0;    // spikes in zero slots or the lead-in
  bool ok = false;
};

struct CalibrationReport {
  SfmParams params;
  EncodingParams encoding;  // baseline and mod_depth filled in

  std::vector<LockScanPoint> lock_scan;
  double plateau_low = 0.0;
  double plateau_high = 0.0;

  // Smallest fractional drop that triggers a spike (noise-free bisection).
  double trigger_fraction = 0.0;
  // Encoded value at which spikes start: trigger_fraction * v_max / mod_depth.
  double trigger_value = 0.0;

  double baseline_band = 0.0;     // 99.9th percentile of the locked lead-in
  double calibration_peak = 0.0;  // peak intensity of the calibration spike
  double threshold = 0.0;         // detection threshold, midway between the two
  double refractory = 1.0;
  Observable observable = Observable::kTotal;

  double latency_ns = 0.0;       // pulse onset to detected spike, mean
  double fwhm_ns = 0.0;          // mean spike width
  double adjacent_isi_ns = 0.0;  // interval between two adjacent triggers
  bool diagonal_value_triggers = false;  // v_max / sqrt(2), gradient corners

  std::vector<SeedOutcome> seeds;
  bool pass = false;
};

// Locates the locking plateau, then picks the modulation depth that separates
// v_max from v_max / 2 and sets the detection threshold. Throws
// CalibrationError naming the failing stage.
CalibrationReport Calibrate(const SfmParams& params,
                            const EncodingParams& draft,
                            const CalibrationOptions& options = {});

// Re-runs the multi-seed trigger check with the reported values.
std::vector<SeedOutcome> VerifyCalibration(const CalibrationReport& report,
                                           std::uint64_t first_seed, int seeds,
                                           double dt = 1e-4,
                                           int sample_every = 10);

// Fixed pixel sequence used by calibration: zero, v_max, zero, v_max / 2, ...
ValueMap CalibrationPattern(double v_max);

std::string CalibrationReportToJson(const CalibrationReport& report);
CalibrationReport CalibrationReportFromJson(std::string_view text);

// ---------------------------------------------------------------------------
// End-to-end runs

struct GradientPair {
  int x_id = 1;
  int y_id = 3;
};

using KernelChoice = std::variant<int, Kernel2x2, GradientPair>;

struct RunConfig {
  std::string image_path;
  std::optional<SignedImage> image;  // takes precedence over image_path
  std::optional<double> binarize_threshold;
  KernelChoice kernel = 1;

  SfmParams sfm;
  EncodingParams encoding;
  IntegratorOptions integrator;
  DetectOptions detect;
  std::uint64_t seed = 1;
  std::string out_dir;

  bool is_gradient() const {
    return std::holds_alternative<GradientPair>(kernel);
  }
  // Throws kInvalidParams for an uncalibrated config or a gradient pair that
  // is not a quarter-turn pair.
  void Validate() const;
};

// Copies baseline, modulation depth, threshold, refractory and laser
// parameters from a calibration into the config.
void ApplyCalibration(RunConfig& config, const CalibrationReport& report);

struct RunResult {
  SignedImage source;
  ValueMap values;
  InjectionWaveform waveform;
  NeuronState initial;
  Trajectory trajectory;
  SpikeRaster raster;
  ReconstructionMap map;
};

RunResult RunSingleKernel(const RunConfig& config);
RunResult RunGradient(const RunConfig& config);
// Dispatches on the kernel choice.
RunResult RunPipeline(const RunConfig& config);

// Spikes expected without simulating the laser: one count wherever the encoded
// value reaches `trigger_value`.
ReconstructionMap OracleMap(const ValueMap& values, double trigger_value);

// Writes trace.csv, raster.csv, map.pgm, map.json, waveform.csv and
// manifest.json into config.out_dir. The manifest is written first and
// rewritten with the final status, so it exists even when the run throws.
RunResult RunAndExport(const RunConfig& config, bool write_trace = true);

std::string ManifestJson(const RunConfig& config, std::string_view status,
                         std::string_view message = {});
RunConfig ConfigFromManifest(std::string_view text);

void WriteTraceCsv(std::ostream& out, const Trajectory& trajectory);
Trajectory ReadTraceCsv(std::istream& in);

// ---------------------------------------------------------------------------
// Test images

struct NamedImage {
  std::string name;
  SignedImage image;
};

// Cross and saltire at 28x28; a ring-and-bars shape at 50x50.
SignedImage MakeCross();
SignedImage MakeSaltire();
SignedImage MakeRingLogo();
std::vector<NamedImage> MakeTestImages();
void WriteTestImages(const std::filesystem::path& dir);

}  // namespace vspike

#endif  // VSPIKE_PIPELINE_H_
