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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "test_util.h"
#include "vspike/error.h"

namespace vspike {
namespace {

using testing::RandomImage;
using testing::ScratchDir;

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    report_ = new CalibrationReport(Calibrate(SfmParams{}, EncodingParams{}));
  }
  static void TearDownTestSuite() {
    delete report_;
    report_ = nullptr;
  }

  static RunConfig Config(const SignedImage& image, KernelChoice kernel,
                          std::uint64_t seed = 1) {
    RunConfig config;
    config.image = image;
    config.kernel = kernel;
    config.seed = seed;
    ApplyCalibration(config, *report_);
    return config;
  }

  // Trigger level in the units of a map whose full scale is `v_max`.
  static double Trigger(double v_max) {
    return report_->trigger_value * v_max / report_->encoding.v_max;
  }

  static CalibrationReport* report_;
};

CalibrationReport* PipelineTest::report_ = nullptr;

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST_F(PipelineTest, CalibrationPasses) {
  const CalibrationReport& r = *report_;
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.plateau_low, r.encoding.baseline.real());
  EXPECT_GT(r.plateau_high, r.encoding.baseline.real());
  EXPECT_GT(r.trigger_value, r.encoding.v_max / 2.0);
  EXPECT_LT(r.trigger_value, r.encoding.v_max);
  EXPECT_GT(r.threshold, r.baseline_band);
  EXPECT_LT(r.threshold, r.calibration_peak);
  EXPECT_LT(r.latency_ns, r.encoding.pixel_period - r.encoding.pulse_hold);
  EXPECT_EQ(r.seeds.size(), 10u);
  for (const auto& s : r.seeds) {
    EXPECT_TRUE(s.ok);
    EXPECT_EQ(s.full_spikes, 3);
    EXPECT_EQ(s.half_spikes, 0);
    EXPECT_EQ(s.inverse_spikes, 0);
    EXPECT_EQ(s.other_spikes, 0);
  }
}

TEST_F(PipelineTest, ReportIsSelfConsistent) {
  const auto again = VerifyCalibration(*report_, 101, 3);
  for (const auto& s : again) EXPECT_TRUE(s.ok) << "seed " << s.seed;
}

TEST_F(PipelineTest, ReportJsonRoundTrip) {
  const std::string json = CalibrationReportToJson(*report_);
  const CalibrationReport back = CalibrationReportFromJson(json);
  EXPECT_EQ(CalibrationReportToJson(back), json);
  EXPECT_EQ(back.threshold, report_->threshold);
  EXPECT_EQ(back.encoding.baseline, report_->encoding.baseline);
  EXPECT_THROW(CalibrationReportFromJson("{\"nope\": 1}"), Error);
}

TEST_F(PipelineTest, CalibratedBaselineIsLocked) {
  SfmParams quiet = report_->params;
  quiet.beta_sp = 0.0;
  const auto base = report_->encoding.baseline;
  const NeuronState s = FindLockedState(quiet, base);
  const auto wf = InjectionWaveform::Constant(base, 1.0);
  NoiseSource noise(1);
  const Trajectory t = vspike::Run(s, wf, quiet, IntegratorOptions{}, noise);
  const NeuronState& e = t.final_state();
  EXPECT_NEAR(e.intensity(), s.intensity(), 1e-9 * s.intensity());
  EXPECT_NEAR(e.n_total, s.n_total, 1e-9);
  EXPECT_NEAR(e.n_spin, s.n_spin, 1e-9);
  EXPECT_NO_THROW(FindLockedState(quiet, base * 1.1));
}

TEST(CalibrationTest, FarDetuningFailsAtLocking) {
  SfmParams p;
  p.detuning_ghz = -40.0;
  try {
    Calibrate(p, EncodingParams{});
    FAIL();
  } catch (const CalibrationError& e) {
    EXPECT_EQ(e.stage(), CalibrationStage::kLocking);
    EXPECT_EQ(e.code(), ErrorCode::kCalibrationFailed);
  }
}

TEST(CalibrationTest, NoiseFreeReportIgnoresSeeds) {
  SfmParams p;
  p.beta_sp = 0.0;
  CalibrationOptions a, b;
  a.seeds = b.seeds = 2;
  b.first_seed = 77;
  CalibrationReport ra = Calibrate(p, EncodingParams{}, a);
  CalibrationReport rb = Calibrate(p, EncodingParams{}, b);
  for (std::size_t i = 0; i < ra.seeds.size(); ++i) {
    ra.seeds[i].seed = rb.seeds[i].seed = 0;
  }
  EXPECT_EQ(CalibrationReportToJson(ra), CalibrationReportToJson(rb));
}

TEST(CalibrationTest, PatternValues) {
  const ValueMap m = CalibrationPattern(4.0);
  EXPECT_EQ(m.height(), 1);
  EXPECT_EQ(m.values(),
            (std::vector<double>{0, 4, 0, 2, 0, -4, 0, -2, 0, 4, 4, 0}));
}

TEST_F(PipelineTest, BlankImageNeverFires) {
  for (int id : {1, 3, 6}) {
    const RunResult r = RunPipeline(Config(SignedImage(6, 6), id));
    EXPECT_EQ(r.raster.size(), 0u) << "kernel " << id;
  }
}

TEST_F(PipelineTest, RandomImagesMatchOracle) {
  // Twenty random 10x10 images per seed, cycling through every kernel.
  for (std::uint64_t seed : {1u, 2u}) {
    std::mt19937_64 rng(1000 + seed);
    for (int i = 0; i < 20; ++i) {
      const int id = 1 + (i % 8);
      const RunResult r =
          RunSingleKernel(Config(RandomImage(rng, 10, 10), id, seed));
      const double v_max = BuiltinKernel(id).L1Norm();
      EXPECT_EQ(r.map, OracleMap(r.values, Trigger(v_max)))
          << "seed " << seed << " image " << i << " kernel " << id;
      EXPECT_LE(r.map.max_count(), 1);
    }
  }
}

TEST_F(PipelineTest, RandomImagesMatchGradientOracle) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 6; ++i) {
    const SignedImage img = RandomImage(rng, 10, 10);
    const RunResult r = RunGradient(Config(img, GradientPair{1, 3}, 3));
    const ValueMap g = GradientMagnitude(Convolve2x2(img, BuiltinKernel(1)),
                                         Convolve2x2(img, BuiltinKernel(3)));
    EXPECT_EQ(r.values.values(), g.values());
    EXPECT_EQ(r.map, OracleMap(g, Trigger(4.0))) << "image " << i;
  }
}

TEST_F(PipelineTest, ExplicitMatrixKernel) {
  std::mt19937_64 rng(8);
  const SignedImage img = RandomImage(rng, 8, 8);
  Kernel2x2 k = BuiltinKernel(1);
  k.id.reset();
  const RunResult a = RunPipeline(Config(img, k, 4));
  const RunResult b = RunPipeline(Config(img, 1, 4));
  EXPECT_EQ(a.map, b.map);
  EXPECT_EQ(a.raster.times, b.raster.times);
}

TEST_F(PipelineTest, ConfigValidation) {
  RunConfig c = Config(SignedImage(4, 4), GradientPair{1, 5});
  EXPECT_THROW(RunPipeline(c), Error);
  c = Config(SignedImage(4, 4), GradientPair{1, 2});
  EXPECT_THROW(RunPipeline(c), Error);
  RunConfig raw;
  raw.image = SignedImage(4, 4);
  try {
    RunPipeline(raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidParams);
  }
  c = Config(SignedImage(4, 4), 1);
  c.image.reset();
  EXPECT_THROW(RunPipeline(c), Error);
  EXPECT_THROW(RunPipeline(Config(SignedImage(4, 4), 12)), Error);
}

TEST_F(PipelineTest, ManifestReproducesRun) {
  const auto dir = ScratchDir("manifest");
  std::mt19937_64 rng(5);
  RunConfig c = Config(RandomImage(rng, 7, 6), GradientPair{1, 3}, 9);
  c.out_dir = (dir / "first").string();
  RunAndExport(c);
  RunConfig again = ConfigFromManifest(Slurp(dir / "first" / "manifest.json"));
  again.out_dir = (dir / "second").string();
  RunAndExport(again);
  for (const char* name :
       {"trace.csv", "raster.csv", "map.pgm", "map.json", "waveform.csv"}) {
    EXPECT_EQ(Slurp(dir / "first" / name), Slurp(dir / "second" / name))
        << name;
  }
  EXPECT_NE(Slurp(dir / "first" / "manifest.json").find("\"status\": \"ok\""),
            std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_F(PipelineTest, ManifestFromImageFile) {
  const auto dir = ScratchDir("manifest_file");
  WriteTestImages(dir / "fixtures");
  RunConfig c = Config(SignedImage{}, 3, 2);
  c.image.reset();
  c.image_path = (dir / "fixtures" / "cross.pgm").string();
  const RunConfig back = ConfigFromManifest(ManifestJson(c, "ok"));
  EXPECT_EQ(back.image_path, c.image_path);
  ASSERT_TRUE(back.image.has_value());
  EXPECT_EQ(*back.image, MakeCross());
  EXPECT_EQ(std::get<int>(back.kernel), 3);
  EXPECT_EQ(back.seed, 2u);
  EXPECT_EQ(back.detect.threshold, c.detect.threshold);
  EXPECT_EQ(back.encoding.baseline, c.encoding.baseline);
  EXPECT_EQ(back.sfm.beta_sp, c.sfm.beta_sp);
  std::filesystem::remove_all(dir);
}

TEST_F(PipelineTest, ManifestWrittenOnFailure) {
  const auto dir = ScratchDir("failure");
  RunConfig c = Config(SignedImage{}, 1);
  c.image.reset();
  c.image_path = (dir / "missing.pgm").string();
  c.out_dir = (dir / "out").string();
  EXPECT_THROW(RunAndExport(c), Error);
  const std::string manifest = Slurp(dir / "out" / "manifest.json");
  EXPECT_NE(manifest.find("\"status\": \"failed\""), std::string::npos);
  EXPECT_NE(manifest.find("missing.pgm"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_F(PipelineTest, TraceCsvRoundTrip) {
  std::mt19937_64 rng(6);
  RunConfig c = Config(RandomImage(rng, 4, 4), 1);
  const RunResult r = RunPipeline(c);
  std::stringstream buf;
  WriteTraceCsv(buf, r.trajectory);
  const Trajectory back = ReadTraceCsv(buf);
  ASSERT_EQ(back.size(), r.trajectory.size());
  EXPECT_NEAR(back.interval(), r.trajectory.interval(), 1e-12);
  for (std::size_t i = 0; i < back.size(); i += 97) {
    EXPECT_NEAR(back.total()[i], r.trajectory.total()[i],
                1e-9 * r.trajectory.total()[i]);
  }
  std::stringstream bad("time,foo\n1,2\n");
  EXPECT_THROW(ReadTraceCsv(bad), Error);
}

TEST(OracleMapTest, ThresholdsValues) {
  ValueMap v(3, 1, MapKind::kGradientMagnitude);
  v.at(0, 0) = 4.0;
  v.at(0, 1) = std::sqrt(8.0);
  v.at(0, 2) = 2.0;
  const ReconstructionMap m = OracleMap(v, 2.5);
  EXPECT_EQ(m.counts(), (std::vector<int>{1, 1, 0}));
}

TEST(FixtureTest, SizesAndBinary) {
  const auto images = MakeTestImages();
  ASSERT_EQ(images.size(), 3u);
  EXPECT_EQ(images[0].image.width(), 28);
  EXPECT_EQ(images[1].image.height(), 28);
  EXPECT_EQ(images[2].image.width(), 50);
  EXPECT_EQ(images[2].image.height(), 50);
  for (const auto& [name, img] : images) {
    bool black = false, white = false;
    for (int r = 0; r < img.height(); ++r) {
      for (int c = 0; c < img.width(); ++c) {
        ASSERT_TRUE(img.at(r, c) == 1 || img.at(r, c) == -1);
        (img.at(r, c) == 1 ? black : white) = true;
      }
    }
    EXPECT_TRUE(black && white) << name;
  }
}

TEST(FixtureTest, CrossHasFourFoldSymmetry) {
  const SignedImage cross = MakeCross();
  EXPECT_EQ(cross.RotatedClockwise(), cross);
}

TEST(FixtureTest, SaltireHasDiagonalMirrorSymmetry) {
  const SignedImage s = MakeSaltire();
  for (int r = 0; r < s.height(); ++r) {
    for (int c = 0; c < s.width(); ++c) {
      EXPECT_EQ(s.at(r, c), s.at(c, r));
      EXPECT_EQ(s.at(r, c), s.at(27 - c, 27 - r));
    }
  }
}

TEST(FixtureTest, LogoWaveformDuration) {
  const ValueMap g =
      GradientMagnitude(Convolve2x2(MakeRingLogo(), BuiltinKernel(1)),
                        Convolve2x2(MakeRingLogo(), BuiltinKernel(3)));
  EXPECT_EQ(g.width(), 49);
  const InjectionWaveform wf = Encode(g, EncodingParams{});
  EXPECT_NEAR(wf.duration(), 20.0 + 49 * 49 * 1.5, 1e-9);
}

TEST(FixtureTest, WrittenFilesReadBack) {
  const auto dir = ScratchDir("fixtures");
  WriteTestImages(dir);
  for (const auto& [name, img] : MakeTestImages()) {
    EXPECT_EQ(Binarize(ReadPgm(dir / (name + ".pgm"))), img) << name;
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace vspike
