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

#include "vspike/pipeline.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "json_io.h"
#include "vspike/error.h"

namespace vspike {
namespace {

using nlohmann::json;

Kernel2x2 SingleKernel(const KernelChoice& choice) {
  if (const int* id = std::get_if<int>(&choice)) return BuiltinKernel(*id);
  return std::get<Kernel2x2>(choice);
}

SignedImage LoadSource(const RunConfig& config) {
  if (config.image) return *config.image;
  if (config.image_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no source image given");
  }
  return Binarize(ReadPgm(config.image_path), config.binarize_threshold);
}

RunResult Simulate(const RunConfig& config, SignedImage source, ValueMap values,
                   double v_max) {
  RunResult result;
  result.source = std::move(source);
  result.values = std::move(values);

  EncodingParams enc = config.encoding;
  enc.v_max = v_max;
  result.waveform = Encode(result.values, enc);

  LockSearchOptions lock;
  lock.dt = config.integrator.dt;
  result.initial = FindLockedState(config.sfm, enc.baseline, lock);

  NoiseSource noise(config.seed);
  result.trajectory = Run(result.initial, result.waveform, config.sfm,
                          config.integrator, noise);

  DetectOptions detect = config.detect;
  detect.baseline_window = enc.lead_in;
  result.raster = Detect(result.trajectory, detect);
  result.map = Bin(result.raster, result.waveform);
  return result;
}

json KernelToJson(const KernelChoice& choice) {
  if (const int* id = std::get_if<int>(&choice)) {
    return {{"mode", "builtin"}, {"id", *id}};
  }
  if (const auto* pair = std::get_if<GradientPair>(&choice)) {
    return {{"mode", "gradient"}, {"x", pair->x_id}, {"y", pair->y_id}};
  }
  const auto& k = std::get<Kernel2x2>(choice);
  return {{"mode", "matrix"},
          {"weights", {{k.at(0, 0), k.at(0, 1)}, {k.at(1, 0), k.at(1, 1)}}}};
}

KernelChoice KernelFromJson(const json& j) {
  const std::string mode = j.at("mode");
  if (mode == "builtin") return j.at("id").get<int>();
  if (mode == "gradient") {
    return GradientPair{j.at("x").get<int>(), j.at("y").get<int>()};
  }
  if (mode == "matrix") {
    Kernel2x2 k;
    for (int m = 0; m < 2; ++m) {
      for (int n = 0; n < 2; ++n) k.weights[m][n] = j.at("weights").at(m).at(n);
    }
    return k;
  }
  throw Error(ErrorCode::kParse, "unknown kernel mode '" + mode + "'");
}

json ImageToJson(const SignedImage& image) {
  json rows = json::array();
  for (int r = 0; r < image.height(); ++r) {
    std::string row(static_cast<std::size_t>(image.width()), '.');
    for (int c = 0; c < image.width(); ++c) {
      if (image.at(r, c) > 0) row[static_cast<std::size_t>(c)] = '#';
    }
    rows.push_back(std::move(row));
  }
  return {{"width", image.width()},
          {"height", image.height()},
          {"rows", std::move(rows)}};
}

SignedImage ImageFromJson(const json& j) {
  const int width = j.at("width");
  const int height = j.at("height");
  SignedImage image(width, height);
  const json& rows = j.at("rows");
  if (static_cast<int>(rows.size()) != height) {
    throw Error(ErrorCode::kParse, "manifest image height mismatch");
  }
  for (int r = 0; r < height; ++r) {
    const std::string row = rows.at(r);
    if (static_cast<int>(row.size()) != width) {
      throw Error(ErrorCode::kParse, "manifest image width mismatch");
    }
    for (int c = 0; c < width; ++c) image.set(r, c, row[c] == '#');
  }
  return image;
}

void AppendNumber(std::string& line, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 10);
  line.append(buf, res.ptr);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

}  // namespace

void RunConfig::Validate() const {
  sfm.Validate();
  encoding.Validate();
  if (!(detect.threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "detection threshold unset; apply a calibration first");
  }
  if (!(detect.refractory > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "refractory must be positive");
  }
  if (const auto* pair = std::get_if<GradientPair>(&kernel)) {
    if (!IsRotationPair(BuiltinKernel(pair->x_id), BuiltinKernel(pair->y_id))) {
      throw Error(ErrorCode::kInvalidParams,
                  "gradient kernels must be quarter turns of one another");
    }
  } else if (const int* id = std::get_if<int>(&kernel)) {
    BuiltinKernel(*id);
  }
  if (!image && image_path.empty()) {
    throw Error(ErrorCode::kInvalidParams, "no source image given");
  }
}

void ApplyCalibration(RunConfig& config, const CalibrationReport& report) {
  config.sfm = report.params;
  const EncodingParams& cal = report.encoding;
  config.encoding.baseline = cal.baseline;
  config.encoding.mod_depth = cal.mod_depth;
  config.encoding.v_max = cal.v_max;
  config.encoding.pixel_period = cal.pixel_period;
  config.encoding.pulse_hold = cal.pulse_hold;
  config.detect.threshold = report.threshold;
  config.detect.refractory = report.refractory;
  config.detect.observable = report.observable;
}

RunResult RunSingleKernel(const RunConfig& config) {
  if (config.is_gradient()) {
    throw Error(ErrorCode::kInvalidArgument,
                "gradient configs go through RunGradient");
  }
  config.Validate();
  const Kernel2x2 kernel = SingleKernel(config.kernel);
  SignedImage source = LoadSource(config);
  ValueMap values = Convolve2x2(source, kernel);
  // A full edge for this kernel is a full-depth drop.
  return Simulate(config, std::move(source), std::move(values),
                  kernel.L1Norm());
}

RunResult RunGradient(const RunConfig& config) {
  const auto* pair = std::get_if<GradientPair>(&config.kernel);
  if (pair == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "single-kernel configs go through RunSingleKernel");
  }
  config.Validate();
  const Kernel2x2 kx = BuiltinKernel(pair->x_id);
  const Kernel2x2 ky = BuiltinKernel(pair->y_id);
  SignedImage source = LoadSource(config);
  ValueMap values =
      GradientMagnitude(Convolve2x2(source, kx), Convolve2x2(source, ky));
  return Simulate(config, std::move(source), std::move(values), kx.L1Norm());
}

RunResult RunPipeline(const RunConfig& config) {
  return config.is_gradient() ? RunGradient(config) : RunSingleKernel(config);
}

ReconstructionMap OracleMap(const ValueMap& values, double trigger_value) {
  ReconstructionMap map(values.width(), values.height());
  for (int r = 0; r < values.height(); ++r) {
    for (int c = 0; c < values.width(); ++c) {
      map.at(r, c) = values.at(r, c) >= trigger_value ? 1 : 0;
    }
  }
  return map;
}

std::string ManifestJson(const RunConfig& config, std::string_view status,
                         std::string_view message) {
  json image = nullptr;
  try {
    image = ImageToJson(LoadSource(config));
  } catch (const Error&) {
    // Recorded as null; the status and message say why the run failed.
  }
  const IntegratorOptions& integ = config.integrator;
  const DetectOptions& det = config.detect;
  json doc = {
      {"status", std::string(status)},
      {"message", std::string(message)},
      {"seed", config.seed},
      {"image_path", config.image_path},
      {"binarize_threshold", config.binarize_threshold
                                 ? json(*config.binarize_threshold)
                                 : json(nullptr)},
      {"image", image},
      {"kernel", KernelToJson(config.kernel)},
      {"sfm", internal::ToJson(config.sfm)},
      {"encoding", internal::ToJson(config.encoding)},
      {"integrator",
       {{"dt", integ.dt},
        {"dt_max", integ.dt_max},
        {"sample_every", integ.sample_every},
        {"record_carriers", integ.record_carriers}}},
      {"detect",
       {{"threshold", det.threshold},
        {"refractory", det.refractory},
        {"observable", internal::ObservableName(det.observable)}}},
      {"out_dir", config.out_dir},
  };
  return doc.dump(2);
}

RunConfig ConfigFromManifest(std::string_view text) {
  RunConfig config;
  try {
    const json doc = json::parse(text);
    config.seed = doc.at("seed");
    config.image_path = doc.at("image_path");
    if (!doc.at("binarize_threshold").is_null()) {
      config.binarize_threshold = doc.at("binarize_threshold").get<double>();
    }
    if (!doc.at("image").is_null())
      config.image = ImageFromJson(doc.at("image"));
    config.kernel = KernelFromJson(doc.at("kernel"));
    config.sfm = internal::SfmParamsFromJson(doc.at("sfm"));
    config.encoding = internal::EncodingParamsFromJson(doc.at("encoding"));
    const json& integ = doc.at("integrator");
    config.integrator.dt = integ.at("dt");
    config.integrator.dt_max = integ.at("dt_max");
    config.integrator.sample_every = integ.at("sample_every");
    config.integrator.record_carriers = integ.at("record_carriers");
    const json& det = doc.at("detect");
    config.detect.threshold = det.at("threshold");
    config.detect.refractory = det.at("refractory");
    config.detect.observable = internal::ParseObservable(det.at("observable"));
    config.out_dir = doc.at("out_dir");
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kParse, std::string("manifest: ") + ex.what());
  }
  return config;
}

RunResult RunAndExport(const RunConfig& config, bool write_trace) {
  if (config.out_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no output directory");
  }
  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  const auto manifest = dir / "manifest.json";
  WriteText(manifest, ManifestJson(config, "running"));
  try {
    RunResult result = RunPipeline(config);
    if (write_trace) {
      std::ofstream trace(dir / "trace.csv");
      WriteTraceCsv(trace, result.trajectory);
    }
    {
      std::ofstream raster(dir / "raster.csv");
      WriteRasterCsv(raster, result.raster);
    }
    {
      std::ofstream waveform(dir / "waveform.csv");
      WriteWaveformCsv(waveform, result.waveform);
    }
    WritePgm(dir / "map.pgm", result.map.ToGray(), PgmFormat::kAscii);
    WriteText(dir / "map.json", result.map.ToJson());
    WriteText(manifest, ManifestJson(config, "ok"));
    return result;
  } catch (const std::exception& ex) {
    WriteText(manifest, ManifestJson(config, "failed", ex.what()));
    throw;
  }
}

void WriteTraceCsv(std::ostream& out, const Trajectory& trajectory) {
  out << "time_ns,intensity_x,intensity_y,intensity_total";
  if (trajectory.has_carriers()) out << ",n_total,n_spin";
  out << '\n';
  const auto x = trajectory.intensity_x();
  const auto y = trajectory.intensity_y();
  const auto total = trajectory.total();
  std::string line;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    line.clear();
    AppendNumber(line, trajectory.time(i));
    line += ',';
    AppendNumber(line, x[i]);
    line += ',';
    AppendNumber(line, y[i]);
    line += ',';
    AppendNumber(line, total[i]);
    if (trajectory.has_carriers()) {
      line += ',';
      AppendNumber(line, trajectory.n_total()[i]);
      line += ',';
      AppendNumber(line, trajectory.n_spin()[i]);
    }
    line += '\n';
    out << line;
  }
}

Trajectory ReadTraceCsv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) ||
      header.rfind("time_ns,intensity_x,intensity_y", 0) != 0) {
    throw Error(ErrorCode::kParse, "not a trace CSV");
  }
  std::vector<double> t, x, y;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double fields[3];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (double& f : fields) {
      const auto res = std::from_chars(p, end, f);
      if (res.ec != std::errc()) {
        throw Error(ErrorCode::kParse, "bad trace row: " + line);
      }
      p = res.ptr;
      if (p < end && *p == ',') ++p;
    }
    t.push_back(fields[0]);
    x.push_back(fields[1]);
    y.push_back(fields[2]);
  }
  if (t.size() < 2) throw Error(ErrorCode::kParse, "trace needs two rows");
  const double interval =
      (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  return Trajectory::FromModes(interval, std::move(x), std::move(y), t.front());
}

}  // namespace vspike
