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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "json_io.h"
#include "vspike/error.h"
#include "vspike/pipeline.h"

namespace vspike {
namespace {

using internal::ObservableName;
using internal::ParseObservable;
using nlohmann::json;

// Slot values of CalibrationPattern in units of v_max.
constexpr double kPattern[] = {0, 1, 0, 0.5, 0, -1, 0, -0.5, 0, 1, 1, 0};
constexpr std::size_t kFirstFullSlot = 1;
constexpr std::size_t kAdjacentSlotA = 9;
constexpr std::size_t kAdjacentSlotB = 10;

struct PatternRun {
  SeedOutcome outcome;
  std::vector<double> latencies;
  std::vector<double> widths;
  double adjacent_isi = 0.0;
};

IntegratorOptions MakeIntegrator(double dt, int sample_every) {
  IntegratorOptions opt;
  opt.dt = dt;
  opt.dt_max = std::max(dt, opt.dt_max);
  opt.sample_every = sample_every;
  return opt;
}

PatternRun RunPattern(const CalibrationReport& report,
                      const NeuronState& locked, std::uint64_t seed, double dt,
                      int sample_every) {
  const EncodingParams& enc = report.encoding;
  const ValueMap pattern = CalibrationPattern(enc.v_max);
  const InjectionWaveform wf = Encode(pattern, enc);
  NoiseSource noise(seed);
  const Trajectory traj =
      Run(locked, wf, report.params, MakeIntegrator(dt, sample_every), noise);
  DetectOptions detect;
  detect.threshold = report.threshold;
  detect.refractory = report.refractory;
  detect.baseline_window = enc.lead_in;
  detect.observable = report.observable;
  const SpikeRaster raster = Detect(traj, detect);

  const auto trace = traj.observable(report.observable);
  const auto lead_samples = std::min(
      trace.size(), static_cast<std::size_t>(enc.lead_in / traj.interval()));
  WidthOptions width_opt;
  width_opt.observable = report.observable;
  width_opt.baseline =
      Percentile(trace.first(std::max<std::size_t>(1, lead_samples)), 50.0);

  PatternRun run;
  run.outcome.seed = seed;
  double t_a = -1.0, t_b = -1.0;
  std::vector<int> per_slot(std::size(kPattern), 0);
  for (double t : raster.times) {
    if (t < enc.lead_in) {
      ++run.outcome.other_spikes;
      continue;
    }
    const SlotIndex slot = wf.SlotOf(t);
    const double v = kPattern[slot.index];
    ++per_slot[slot.index];
    if (v == 1.0) {
      ++run.outcome.full_spikes;
      run.latencies.push_back(t - wf.SlotStart(slot.index));
      run.widths.push_back(WidthOf(traj, t, width_opt));
      if (slot.index == kAdjacentSlotA) t_a = t;
      if (slot.index == kAdjacentSlotB) t_b = t;
    } else if (v == 0.5) {
      ++run.outcome.half_spikes;
    } else if (v < 0.0) {
      ++run.outcome.inverse_spikes;
    } else {
      ++run.outcome.other_spikes;
    }
  }
  const int full_slots = static_cast<int>(
      std::count(std::begin(kPattern), std::end(kPattern), 1.0));
  bool one_each = true;
  for (std::size_t i = 0; i < per_slot.size(); ++i) {
    if (kPattern[i] == 1.0 && per_slot[i] != 1) one_each = false;
  }
  run.outcome.ok =
      one_each && run.outcome.full_spikes == full_slots &&
      run.latencies.size() == static_cast<std::size_t>(full_slots) &&
      run.outcome.half_spikes == 0 && run.outcome.inverse_spikes == 0 &&
      run.outcome.other_spikes == 0;
  if (t_a >= 0.0 && t_b >= 0.0) run.adjacent_isi = t_b - t_a;
  return run;
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Noise-free response to a single held drop of `fraction` of the baseline.
// Returns the peak of the observable after the pulse onset.
double ProbePeak(const SfmParams& quiet, const NeuronState& locked,
                 const EncodingParams& enc, double fraction, double dt,
                 int sample_every, Observable observable) {
  ValueMap probe(4, 1, MapKind::kSingleKernel);
  probe.at(0, 0) = fraction;
  EncodingParams p = enc;
  p.v_max = 1.0;
  p.mod_depth = 1.0;
  p.lead_in = 3.0;
  const InjectionWaveform wf = Encode(probe, p);
  NoiseSource noise(0);
  const Trajectory traj =
      Run(locked, wf, quiet, MakeIntegrator(dt, sample_every), noise);
  const auto trace = traj.observable(observable);
  const auto onset = static_cast<std::size_t>(p.lead_in / traj.interval());
  return *std::max_element(trace.begin() + static_cast<std::ptrdiff_t>(onset),
                           trace.end());
}

double Observe(const NeuronState& s, Observable which) {
  switch (which) {
    case Observable::kX:
      return s.intensity_x();
    case Observable::kY:
      return s.intensity_y();
    case Observable::kTotal:
      break;
  }
  return s.intensity();
}

}  // namespace

ValueMap CalibrationPattern(double v_max) {
  constexpr int n = static_cast<int>(std::size(kPattern));
  ValueMap map(n, 1, MapKind::kSingleKernel);
  for (int i = 0; i < n; ++i) map.at(0, i) = kPattern[i] * v_max;
  return map;
}

std::vector<SeedOutcome> VerifyCalibration(const CalibrationReport& report,
                                           std::uint64_t first_seed, int seeds,
                                           double dt, int sample_every) {
  LockSearchOptions lock;
  lock.dt = dt;
  const NeuronState locked =
      FindLockedState(report.params, report.encoding.baseline, lock);
  std::vector<SeedOutcome> out;
  for (int i = 0; i < seeds; ++i) {
    out.push_back(
        RunPattern(report, locked, first_seed + i, dt, sample_every).outcome);
  }
  return out;
}

CalibrationReport Calibrate(const SfmParams& params,
                            const EncodingParams& draft,
                            const CalibrationOptions& options) {
  params.Validate();
  draft.Validate();
  if (!(options.scan_step > 0.0) || !(options.scan_max >= options.scan_min)) {
    throw Error(ErrorCode::kInvalidArgument, "bad locking scan range");
  }

  CalibrationReport report;
  report.params = params;
  report.encoding = draft;
  report.refractory = options.refractory;
  report.observable = options.observable;

  LockSearchOptions lock;
  lock.dt = options.dt;

  // Stage 1: locking plateau.
  const auto points =
      static_cast<int>(std::floor(
          (options.scan_max - options.scan_min) / options.scan_step + 1e-9)) +
      1;
  int best_begin = -1, best_len = 0, run_begin = -1;
  for (int i = 0; i < points; ++i) {
    LockScanPoint point;
    point.amplitude = options.scan_min + i * options.scan_step;
    try {
      point.locked = true;
      point.intensity =
          FindLockedState(params, point.amplitude, lock).intensity();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotLocked) throw;
      point.locked = false;
    }
    report.lock_scan.push_back(point);
    if (point.locked) {
      if (run_begin < 0) run_begin = i;
      if (i - run_begin + 1 > best_len) {
        best_len = i - run_begin + 1;
        best_begin = run_begin;
      }
    } else {
      run_begin = -1;
    }
  }
  if (best_len == 0) {
    throw CalibrationError(CalibrationStage::kLocking,
                           "no locked amplitude in the scan range");
  }
  report.plateau_low = report.lock_scan[best_begin].amplitude;
  report.plateau_high = report.lock_scan[best_begin + best_len - 1].amplitude;
  report.encoding.baseline = 0.5 * (report.plateau_low + report.plateau_high);

  NeuronState locked;
  try {
    locked = FindLockedState(params, report.encoding.baseline, lock);
  } catch (const Error& e) {
    throw CalibrationError(CalibrationStage::kLocking,
                           std::string("plateau midpoint: ") + e.what());
  }

  // Stage 2: modulation depth from the noise-free trigger fraction.
  SfmParams quiet = params;
  quiet.beta_sp = 0.0;
  const double locked_level = Observe(locked, options.observable);
  auto triggers = [&](double fraction) {
    return ProbePeak(quiet, locked, report.encoding, fraction, options.dt,
                     options.sample_every, options.observable) >=
           options.probe_trigger_ratio * locked_level;
  };
  if (triggers(0.0)) {
    throw CalibrationError(CalibrationStage::kModDepth,
                           "locked baseline is not quiescent");
  }
  if (!triggers(1.0)) {
    throw CalibrationError(CalibrationStage::kModDepth,
                           "a full-depth drop does not trigger a spike");
  }
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < options.bisection_steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    (triggers(mid) ? hi : lo) = mid;
  }
  report.trigger_fraction = hi;

  // Centre the trigger between v_max / 2 (corners of single-kernel maps) and
  // v_max / sqrt(2) (diagonal cells of gradient maps).
  const double v_max = report.encoding.v_max;
  const double target = 0.5 * (0.5 + (1.0 / std::numbers::sqrt2)) * v_max;
  report.encoding.mod_depth =
      std::min(1.0, report.trigger_fraction * v_max / target);
  report.trigger_value =
      report.trigger_fraction * v_max / report.encoding.mod_depth;
  if (!(report.trigger_value > 0.5 * v_max && report.trigger_value < v_max)) {
    throw CalibrationError(
        CalibrationStage::kModDepth,
        "no modulation depth separates v_max from v_max / 2 (trigger value " +
            std::to_string(report.trigger_value) + ")");
  }
  report.diagonal_value_triggers =
      triggers(report.encoding.mod_depth * (1.0 / std::numbers::sqrt2));

  // Stage 3: detection threshold from one noisy calibration run.
  {
    const InjectionWaveform wf =
        Encode(CalibrationPattern(v_max), report.encoding);
    NoiseSource noise(options.first_seed);
    const Trajectory traj =
        Run(locked, wf, params,
            MakeIntegrator(options.dt, options.sample_every), noise);
    const auto trace = traj.observable(options.observable);
    const auto lead =
        static_cast<std::size_t>(report.encoding.lead_in / traj.interval());
    report.baseline_band = Percentile(trace.first(lead), 99.9);
    const auto from = static_cast<std::size_t>(wf.SlotStart(kFirstFullSlot) /
                                               traj.interval());
    const auto to = std::min(
        trace.size(), static_cast<std::size_t>((wf.SlotStart(kFirstFullSlot) +
                                                report.encoding.pixel_period) /
                                               traj.interval()));
    report.calibration_peak =
        *std::max_element(trace.begin() + static_cast<std::ptrdiff_t>(from),
                          trace.begin() + static_cast<std::ptrdiff_t>(to));
    if (report.calibration_peak <
        options.probe_trigger_ratio * report.baseline_band) {
      throw CalibrationError(CalibrationStage::kThreshold,
                             "calibration pulse produced no spike");
    }
    report.threshold = 0.5 * (report.baseline_band + report.calibration_peak);
  }

  // Seed sweep; latencies and widths are gathered on the way.
  std::vector<double> latencies, widths, isis;
  for (int i = 0; i < options.seeds; ++i) {
    PatternRun run = RunPattern(report, locked, options.first_seed + i,
                                options.dt, options.sample_every);
    report.seeds.push_back(run.outcome);
    latencies.insert(latencies.end(), run.latencies.begin(),
                     run.latencies.end());
    widths.insert(widths.end(), run.widths.begin(), run.widths.end());
    if (run.adjacent_isi > 0.0) isis.push_back(run.adjacent_isi);
  }
  report.latency_ns = Mean(latencies);
  report.fwhm_ns = Mean(widths);
  report.adjacent_isi_ns = Mean(isis);
  report.pass = std::all_of(report.seeds.begin(), report.seeds.end(),
                            [](const SeedOutcome& s) { return s.ok; });
  if (!report.pass) {
    std::ostringstream msg;
    msg << "trigger separation failed for seeds:";
    for (const auto& s : report.seeds) {
      if (!s.ok) {
        msg << ' ' << s.seed << " (full " << s.full_spikes << ", half "
            << s.half_spikes << ", inverse " << s.inverse_spikes << ", other "
            << s.other_spikes << ')';
      }
    }
    throw CalibrationError(CalibrationStage::kModDepth, msg.str());
  }
  const double max_latency =
      latencies.empty() ? 0.0
                        : *std::max_element(latencies.begin(), latencies.end());
  if (!(max_latency <
        report.encoding.pixel_period - report.encoding.pulse_hold)) {
    throw CalibrationError(CalibrationStage::kThreshold,
                           "spike latency " + std::to_string(max_latency) +
                               " ns leaves the pixel slot");
  }
  return report;
}

std::string CalibrationReportToJson(const CalibrationReport& r) {
  json scan = json::array();
  for (const auto& s : r.lock_scan) {
    scan.push_back({{"amplitude", s.amplitude},
                    {"locked", s.locked},
                    {"intensity", s.intensity}});
  }
  json seeds = json::array();
  for (const auto& s : r.seeds) {
    seeds.push_back({{"seed", s.seed},
                     {"full_spikes", s.full_spikes},
                     {"half_spikes", s.half_spikes},
                     {"inverse_spikes", s.inverse_spikes},
                     {"other_spikes", s.other_spikes},
                     {"ok", s.ok}});
  }
  json doc = {
      {"params", internal::ToJson(r.params)},
      {"encoding", internal::ToJson(r.encoding)},
      {"lock_scan", scan},
      {"plateau", {r.plateau_low, r.plateau_high}},
      {"trigger_fraction", r.trigger_fraction},
      {"trigger_value", r.trigger_value},
      {"baseline_band", r.baseline_band},
      {"calibration_peak", r.calibration_peak},
      {"threshold", r.threshold},
      {"refractory", r.refractory},
      {"observable", ObservableName(r.observable)},
      {"latency_ns", r.latency_ns},
      {"fwhm_ns", r.fwhm_ns},
      {"adjacent_isi_ns", r.adjacent_isi_ns},
      {"diagonal_value_triggers", r.diagonal_value_triggers},
      {"seeds", seeds},
      {"pass", r.pass},
  };
  return doc.dump(2);
}

CalibrationReport CalibrationReportFromJson(std::string_view text) {
  CalibrationReport r;
  try {
    const json doc = json::parse(text);
    r.params = internal::SfmParamsFromJson(doc.at("params"));
    r.encoding = internal::EncodingParamsFromJson(doc.at("encoding"));
    for (const auto& s : doc.at("lock_scan")) {
      r.lock_scan.push_back(
          {s.at("amplitude"), s.at("locked"), s.at("intensity")});
    }
    r.plateau_low = doc.at("plateau").at(0);
    r.plateau_high = doc.at("plateau").at(1);
    r.trigger_fraction = doc.at("trigger_fraction");
    r.trigger_value = doc.at("trigger_value");
    r.baseline_band = doc.at("baseline_band");
    r.calibration_peak = doc.at("calibration_peak");
    r.threshold = doc.at("threshold");
    r.refractory = doc.at("refractory");
    r.observable = ParseObservable(doc.at("observable"));
    r.latency_ns = doc.at("latency_ns");
    r.fwhm_ns = doc.at("fwhm_ns");
    r.adjacent_isi_ns = doc.at("adjacent_isi_ns");
    r.diagonal_value_triggers = doc.at("diagonal_value_triggers");
    for (const auto& s : doc.at("seeds")) {
      SeedOutcome o;
      o.seed = s.at("seed");
      o.full_spikes = s.at("full_spikes");
      o.half_spikes = s.at("half_spikes");
      o.inverse_spikes = s.at("inverse_spikes");
      o.other_spikes = s.at("other_spikes");
      o.ok = s.at("ok");
      r.seeds.push_back(o);
    }
    r.pass = doc.at("pass");
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kParse,
                std::string("calibration report: ") + ex.what());
  }
  r.params.Validate();
  r.encoding.Validate();
  return r;
}

}  // namespace vspike
