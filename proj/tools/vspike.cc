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

// Command-line front end: fixtures, calibrate, run, trace.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vspike/error.h"
#include "vspike/pipeline.h"

namespace fs = std::filesystem;

namespace {

constexpr char kRootEnv[] = "VSPIKE_OUTPUT_ROOT";

fs::path OutputRoot() {
  const char* root = std::getenv(kRootEnv);
  return (root != nullptr && *root != '\0') ? fs::path(root)
                                            : fs::path("vspike-out");
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw vspike::Error(vspike::ErrorCode::kIo, "cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw vspike::Error(vspike::ErrorCode::kIo,
                        "cannot write " + path.string());
  }
  out << text;
}

// Laser and slot overrides shared by calibrate and run.
struct PhysicsFlags {
  std::optional<double> mu;
  std::optional<double> detuning_ghz;
  std::optional<double> pixel_ns;
  std::optional<double> hold_ns;

  void Attach(CLI::App* app) {
    app->add_option("--mu", mu, "Normalised pump current");
    app->add_option("--detuning-ghz", detuning_ghz,
                    "Injection frequency detuning in GHz");
    app->add_option("--pixel-ns", pixel_ns, "Pixel slot length in ns");
    app->add_option("--hold-ns", hold_ns, "Pulse hold time in ns");
  }
  void Apply(vspike::SfmParams& sfm, vspike::EncodingParams& enc) const {
    if (mu) sfm.mu = *mu;
    if (detuning_ghz) sfm.detuning_ghz = *detuning_ghz;
    if (pixel_ns) enc.pixel_period = *pixel_ns;
    if (hold_ns) enc.pulse_hold = *hold_ns;
  }
};

void PrintCalibration(const vspike::CalibrationReport& r) {
  std::cout << "baseline      " << r.encoding.baseline.real() << " (plateau "
            << r.plateau_low << " .. " << r.plateau_high << ")\n"
            << "mod_depth     " << r.encoding.mod_depth << '\n'
            << "trigger value " << r.trigger_value << " of v_max "
            << r.encoding.v_max << '\n'
            << "threshold     " << r.threshold << " (lead-in band "
            << r.baseline_band << ", spike peak " << r.calibration_peak << ")\n"
            << "latency       " << r.latency_ns << " ns\n"
            << "fwhm          " << r.fwhm_ns << " ns\n"
            << "adjacent isi  " << r.adjacent_isi_ns << " ns\n"
            << "corner value  "
            << (r.diagonal_value_triggers ? "triggers" : "does not trigger")
            << '\n';
  int good = 0;
  for (const auto& s : r.seeds) good += s.ok ? 1 : 0;
  std::cout << "seeds         " << good << '/' << r.seeds.size() << " ok\n";
}

vspike::KernelChoice ParseKernelFlag(const std::string& text) {
  int id = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), id);
  if (res.ec == std::errc() && res.ptr == text.data() + text.size()) {
    vspike::BuiltinKernel(id);  // rejects ids outside 1..8
    return id;
  }
  return vspike::LoadKernel(text);
}

vspike::GradientPair ParseGradientFlag(const std::string& text) {
  vspike::GradientPair pair;
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw vspike::Error(vspike::ErrorCode::kInvalidArgument,
                        "--gradient expects X,Y");
  }
  try {
    pair.x_id = std::stoi(text.substr(0, comma));
    pair.y_id = std::stoi(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw vspike::Error(vspike::ErrorCode::kInvalidArgument,
                        "--gradient expects two kernel ids");
  }
  return pair;
}

// Renders one trace column as a white-background line plot.
vspike::GrayImage PlotTrace(std::span<const double> values, int width,
                            int height) {
  vspike::GrayImage img;
  img.width = width;
  img.height = height;
  img.maxval = 255;
  img.pixels.assign(static_cast<std::size_t>(width) * height, 255);
  if (values.empty()) return img;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double span = std::max(*hi_it - lo, 1e-12);
  const std::size_t n = values.size();
  for (int col = 0; col < width; ++col) {
    const std::size_t a = n * col / width;
    const std::size_t b = std::max(a + 1, n * (col + 1) / width);
    double vmin = values[a], vmax = values[a];
    for (std::size_t i = a; i < b && i < n; ++i) {
      vmin = std::min(vmin, values[i]);
      vmax = std::max(vmax, values[i]);
    }
    const auto row_of = [&](double v) {
      return height - 1 -
             static_cast<int>(std::lround((v - lo) / span * (height - 1)));
    };
    for (int row = row_of(vmax); row <= row_of(vmin); ++row) {
      img.at(row, col) = 0;
    }
  }
  return img;
}

int CmdFixtures(const fs::path& out) {
  vspike::WriteTestImages(out);
  for (const auto& [name, image] : vspike::MakeTestImages()) {
    std::cout << (out / (name + ".pgm")).string() << "  " << image.width()
              << 'x' << image.height() << '\n';
  }
  return 0;
}

int CmdCalibrate(const PhysicsFlags& physics, int seeds, const fs::path& out) {
  vspike::SfmParams sfm;
  vspike::EncodingParams enc;
  physics.Apply(sfm, enc);
  vspike::CalibrationOptions options;
  options.seeds = seeds;
  const vspike::CalibrationReport report = vspike::Calibrate(sfm, enc, options);
  fs::create_directories(out);
  WriteFile(out / "calibration.json", vspike::CalibrationReportToJson(report));
  PrintCalibration(report);
  std::cout << "wrote " << (out / "calibration.json").string() << '\n';
  return 0;
}

void PrintRun(const vspike::RunResult& result, const fs::path& out) {
  std::cout << "map " << result.map.width() << 'x' << result.map.height()
            << ", " << result.raster.size() << " spikes over "
            << result.waveform.duration() << " ns\n"
            << "outputs in " << out.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photonic spiking-neuron edge detection simulator"};
  app.require_subcommand(1);

  // fixtures
  std::string fixtures_out;
  auto* fixtures = app.add_subcommand("fixtures", "Write the test images");
  fixtures->add_option("--out", fixtures_out, "Output directory");

  // calibrate
  PhysicsFlags cal_physics;
  std::string cal_out;
  int cal_seeds = 10;
  auto* calibrate =
      app.add_subcommand("calibrate", "Find baseline, depth and threshold");
  cal_physics.Attach(calibrate);
  calibrate->add_option("--seeds", cal_seeds, "Noise seeds to verify")
      ->check(CLI::PositiveNumber);
  calibrate->add_option("--out", cal_out, "Output directory");

  // run
  PhysicsFlags run_physics;
  std::string image, kernel_flag, gradient_flag, run_out, calibration_path,
      manifest_path, observable = "total";
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  bool no_trace = false;
  auto* run = app.add_subcommand("run", "Encode an image and simulate");
  run->add_option("--image", image, "Source PGM (P2 or P5)");
  auto* kernel_opt =
      run->add_option("--kernel", kernel_flag, "Kernel id 1..8 or matrix file");
  run->add_option("--gradient", gradient_flag,
                  "Gradient mode with kernel ids X,Y")
      ->excludes(kernel_opt);
  run->add_option("--dt", dt, "Integration step in ns");
  run->add_option("--seed", seed, "Noise seed");
  run->add_option("--out", run_out, "Output directory");
  run_physics.Attach(run);
  run->add_option("--calibration", calibration_path,
                  "Stored calibration.json (calibrates first when absent)");
  run->add_option("--manifest", manifest_path, "Re-run a stored manifest.json");
  run->add_option("--observable", observable, "total, x or y")
      ->check(CLI::IsMember({"total", "x", "y"}));
  run->add_flag("--no-trace", no_trace, "Skip trace.csv");

  // trace
  std::string trace_in, trace_csv, trace_plot, trace_column = "total";
  std::optional<double> t_from, t_to, trace_threshold;
  double trace_refractory = 1.0;
  int plot_width = 1200, plot_height = 300;
  auto* trace = app.add_subcommand("trace", "Export or plot a stored trace");
  trace->add_option("input", trace_in, "trace.csv from a run")->required();
  trace->add_option("--from", t_from, "Window start in ns");
  trace->add_option("--to", t_to, "Window end in ns");
  trace->add_option("--csv", trace_csv, "Write the window as CSV");
  trace->add_option("--plot", trace_plot, "Write the window as a PGM plot");
  trace->add_option("--column", trace_column, "total, x or y")
      ->check(CLI::IsMember({"total", "x", "y"}));
  trace->add_option("--width", plot_width)->check(CLI::PositiveNumber);
  trace->add_option("--height", plot_height)->check(CLI::Range(2, 4096));
  trace->add_option("--threshold", trace_threshold,
                    "List spikes above this level");
  trace->add_option("--refractory", trace_refractory, "Refractory in ns");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fixtures) {
      return CmdFixtures(fixtures_out.empty() ? OutputRoot() / "fixtures"
                                              : fs::path(fixtures_out));
    }
    if (*calibrate) {
      return CmdCalibrate(
          cal_physics, cal_seeds,
          cal_out.empty() ? OutputRoot() / "calibration" : fs::path(cal_out));
    }
    if (*run) {
      vspike::RunConfig config;
      if (!manifest_path.empty()) {
        config = vspike::ConfigFromManifest(ReadFile(manifest_path));
        if (!run_out.empty()) config.out_dir = run_out;
        if (config.out_dir.empty()) {
          config.out_dir = (OutputRoot() / "run").string();
        }
        PrintRun(vspike::RunAndExport(config, !no_trace), config.out_dir);
        return 0;
      }
      if (image.empty()) {
        std::cerr << "run: --image or --manifest is required\n";
        return 2;
      }
      config.image_path = image;
      if (!gradient_flag.empty()) {
        config.kernel = ParseGradientFlag(gradient_flag);
      } else if (!kernel_flag.empty()) {
        config.kernel = ParseKernelFlag(kernel_flag);
      }
      vspike::CalibrationReport report;
      if (!calibration_path.empty()) {
        report = vspike::CalibrationReportFromJson(ReadFile(calibration_path));
      } else {
        vspike::SfmParams sfm;
        vspike::EncodingParams enc;
        run_physics.Apply(sfm, enc);
        std::cerr << "no --calibration given; calibrating\n";
        report = vspike::Calibrate(sfm, enc);
      }
      vspike::ApplyCalibration(config, report);
      // Explicit flags win over the calibration.
      run_physics.Apply(config.sfm, config.encoding);
      config.detect.observable = observable == "x" ? vspike::Observable::kX
                                 : observable == "y"
                                     ? vspike::Observable::kY
                                     : vspike::Observable::kTotal;
      if (dt) config.integrator.dt = *dt;
      if (seed) config.seed = *seed;
      config.out_dir =
          run_out.empty() ? (OutputRoot() / "run").string() : run_out;
      PrintRun(vspike::RunAndExport(config, !no_trace), config.out_dir);
      return 0;
    }
    if (*trace) {
      std::ifstream in(trace_in);
      if (!in) {
        std::cerr << "cannot read " << trace_in << '\n';
        return 1;
      }
      vspike::Trajectory traj = vspike::ReadTraceCsv(in);
      const auto which = trace_column == "x"   ? vspike::Observable::kX
                         : trace_column == "y" ? vspike::Observable::kY
                                               : vspike::Observable::kTotal;
      const double start = t_from.value_or(traj.start_time());
      const double stop = t_to.value_or(traj.time(traj.size() - 1));
      std::vector<double> x, y;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.time(i);
        if (t + 1e-9 < start || t > stop + 1e-9) continue;
        x.push_back(traj.intensity_x()[i]);
        y.push_back(traj.intensity_y()[i]);
      }
      if (x.size() < 2) {
        std::cerr << "window holds fewer than two samples\n";
        return 1;
      }
      const double first =
          traj.start_time() +
          std::ceil((start - traj.start_time()) / traj.interval() - 1e-6) *
              traj.interval();
      const vspike::Trajectory window = vspike::Trajectory::FromModes(
          traj.interval(), std::move(x), std::move(y),
          std::max(first, traj.start_time()));
      const auto values = window.observable(which);
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      std::cout << window.size() << " samples, " << window.start_time()
                << " .. " << window.time(window.size() - 1) << " ns, "
                << trace_column << " in [" << *lo << ", " << *hi << "]\n";
      if (!trace_csv.empty()) {
        std::ofstream out(trace_csv);
        vspike::WriteTraceCsv(out, window);
      }
      if (!trace_plot.empty()) {
        vspike::WritePgm(trace_plot, PlotTrace(values, plot_width, plot_height),
                         vspike::PgmFormat::kBinary);
      }
      if (trace_threshold) {
        vspike::DetectOptions detect;
        detect.threshold = *trace_threshold;
        detect.refractory = trace_refractory;
        detect.observable = which;
        const auto raster = vspike::Detect(window, detect);
        vspike::WidthOptions width;
        width.observable = which;
        for (double t : raster.times) {
          std::cout << "spike " << t << " ns";
          try {
            std::cout << "  fwhm " << vspike::WidthOf(window, t, width)
                      << " ns";
          } catch (const vspike::Error&) {
          }
          std::cout << '\n';
        }
        std::cout << raster.size() << " spikes\n";
      }
      return 0;
    }
  } catch (const vspike::CalibrationError& ex) {
    std::cerr << "calibration failed: " << ex.what() << '\n';
    return 3;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
