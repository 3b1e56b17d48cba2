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

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "vspike/encoding.h"
#include "vspike/error.h"
#include "vspike/imaging.h"

namespace vspike {
namespace {

constexpr double kInterval = 0.01;

Trajectory Flat(std::size_t n, double level) {
  return Trajectory::FromTotal(kInterval, std::vector<double>(n, level));
}

// Flat trace with boxcar excursions to `height` starting at each index.
Trajectory WithPulses(std::size_t n, std::initializer_list<std::size_t> at,
                      std::size_t width, double height) {
  std::vector<double> v(n, 1.0);
  for (std::size_t i : at) {
    for (std::size_t j = i; j < i + width && j < n; ++j) v[j] = height;
  }
  return Trajectory::FromTotal(kInterval, std::move(v));
}

InjectionWaveform Slots(int cols, int rows) {
  return Encode(ValueMap(cols, rows, MapKind::kSingleKernel), EncodingParams{});
}

TEST(PercentileTest, Interpolates) {
  const std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(Percentile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(Percentile(v, 100.0), 4.0);
  EXPECT_DOUBLE_EQ(Percentile(v, 50.0), 2.5);
  EXPECT_THROW(Percentile(std::vector<double>{}, 50.0), Error);
}

TEST(DetectTest, ConstantTraceHasNoSpikes) {
  DetectOptions d;
  d.threshold = 2.0;
  d.baseline_window = 1.0;
  EXPECT_EQ(Detect(Flat(1000, 1.0), d).size(), 0u);
}

TEST(DetectTest, OnePulseOneSpike) {
  DetectOptions d;
  d.threshold = 2.0;
  const SpikeRaster r = Detect(WithPulses(1000, {400}, 8, 4.0), d);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r.times[0], 4.0);
  EXPECT_EQ(r.threshold, 2.0);
  EXPECT_EQ(r.refractory, 1.0);
}

TEST(DetectTest, RefractorySuppressesSecondCrossing) {
  DetectOptions d;
  d.threshold = 2.0;
  d.refractory = 1.5;
  EXPECT_EQ(Detect(WithPulses(1000, {100, 150}, 5, 3.0), d).size(), 1u);
  d.refractory = 0.4;
  EXPECT_EQ(Detect(WithPulses(1000, {100, 150}, 5, 3.0), d).size(), 2u);
}

TEST(DetectTest, StartingAboveThresholdIsNotACrossing) {
  DetectOptions d;
  d.threshold = 2.0;
  std::vector<double> v(100, 1.0);
  v[0] = v[1] = 3.0;
  EXPECT_EQ(Detect(Trajectory::FromTotal(kInterval, v), d).size(), 0u);
}

TEST(DetectTest, ThresholdInsideNoiseBand) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(1.0, 0.01);
  std::vector<double> v(2000);
  for (double& x : v) x = g(rng);
  DetectOptions d;
  d.threshold = 1.0;
  d.baseline_window = 10.0;
  try {
    Detect(Trajectory::FromTotal(kInterval, v), d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kThresholdInsideNoiseBand);
  }
  d.threshold = 1.2;
  EXPECT_NO_THROW(Detect(Trajectory::FromTotal(kInterval, v), d));
}

TEST(DetectTest, ObservableSelection) {
  std::vector<double> x(200, 0.1), y(200, 1.0);
  for (int i = 50; i < 55; ++i) x[i] = 5.0;
  const Trajectory t = Trajectory::FromModes(kInterval, x, y);
  DetectOptions d;
  d.threshold = 3.0;
  d.observable = Observable::kY;
  EXPECT_EQ(Detect(t, d).size(), 0u);
  d.observable = Observable::kX;
  EXPECT_EQ(Detect(t, d).size(), 1u);
  d.observable = Observable::kTotal;
  EXPECT_EQ(Detect(t, d).size(), 1u);
}

TEST(DetectTest, RejectsNonPositiveRefractory) {
  DetectOptions d;
  d.threshold = 2.0;
  d.refractory = 0.0;
  EXPECT_THROW(Detect(Flat(10, 1.0), d), Error);
}

TEST(BinTest, EmptyRasterGivesZeroMap) {
  const ReconstructionMap m = Bin(SpikeRaster{}, Slots(3, 2));
  EXPECT_EQ(m.width(), 3);
  EXPECT_EQ(m.height(), 2);
  EXPECT_EQ(m.total(), 0);
}

TEST(BinTest, SpikeLandsInItsSlot) {
  const InjectionWaveform wf = Slots(3, 2);
  SpikeRaster r;
  r.times = {20.0 + 4 * 1.5 + 0.3};
  const ReconstructionMap m = Bin(r, wf);
  EXPECT_EQ(m.at(1, 1), 1);
  EXPECT_EQ(m.total(), 1);
}

TEST(BinTest, OutOfRange) {
  SpikeRaster r;
  r.times = {5.0};
  try {
    Bin(r, Slots(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpikeOutOfRange);
  }
}

TEST(WidthTest, Rectangle) {
  const Trajectory t = WithPulses(1000, {300}, 10, 5.0);
  EXPECT_NEAR(WidthOf(t, 3.0), 0.1, 1e-12);
}

TEST(WidthTest, Triangle) {
  // Peak P at the centre, base 2w.
  const double w = 0.2, peak = 3.0;
  std::vector<double> v(1000, 1.0);
  const std::size_t centre = 500, half_base = 20;
  for (std::size_t i = centre - half_base; i <= centre + half_base; ++i) {
    const double dist = std::abs(static_cast<double>(i) - centre);
    v[i] = 1.0 + peak * (1.0 - dist / half_base);
  }
  const Trajectory t = Trajectory::FromTotal(kInterval, v, 100.0);
  WidthOptions opt;
  opt.baseline = 1.0;
  EXPECT_NEAR(WidthOf(t, 100.0 + (centre - half_base + 1) * kInterval, opt), w,
              1e-12);
}

TEST(WidthTest, NotASpike) {
  EXPECT_THROW(WidthOf(Flat(100, 1.0), 0.5), Error);
  EXPECT_THROW(WidthOf(Flat(100, 1.0), 50.0), Error);
}

TEST(MapTest, GrayAndJson) {
  ReconstructionMap m(2, 1);
  m.at(0, 1) = 2;
  const GrayImage g = m.ToGray();
  EXPECT_EQ(g.pixels, (std::vector<std::uint16_t>{0, 255}));
  EXPECT_EQ(m.max_count(), 2);
  const std::string j = m.ToJson();
  EXPECT_NE(j.find("\"total_spikes\": 2"), std::string::npos);
  EXPECT_NE(j.find("\"width\": 2"), std::string::npos);
}

TEST(RasterCsvTest, Format) {
  SpikeRaster r;
  r.times = {20.5, 23.25};
  std::ostringstream out;
  WriteRasterCsv(out, r);
  EXPECT_EQ(out.str(), "time_ns\n20.5\n23.25\n");
}

class SpikePropertyTest : public ::testing::TestWithParam<int> {};

// Random bursty traces: sparse spikes of random width over a noisy floor.
Trajectory RandomTrace(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> floor(1.0, 0.05);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = floor(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (u(rng) < 0.01) {
      const double h = 1.5 + 4.0 * u(rng);
      const auto w = static_cast<std::size_t>(1 + 10 * u(rng));
      for (std::size_t j = i; j < std::min(n, i + w); ++j) v[j] = h;
    }
  }
  return Trajectory::FromTotal(kInterval, std::move(v));
}

TEST_P(SpikePropertyTest, RefractoryGuarantee) {
  std::mt19937_64 rng(GetParam());
  const Trajectory t = RandomTrace(rng, 20000);
  for (double refractory : {0.05, 0.3, 1.0, 1.5}) {
    DetectOptions d;
    d.threshold = 2.0;
    d.refractory = refractory;
    const SpikeRaster r = Detect(t, d);
    for (std::size_t i = 1; i < r.size(); ++i) {
      ASSERT_GE(r.times[i] - r.times[i - 1], refractory);
      ASSERT_GT(r.times[i], r.times[i - 1]);
    }
  }
}

TEST_P(SpikePropertyTest, ThresholdMonotonicity) {
  std::mt19937_64 rng(50 + GetParam());
  const Trajectory t = RandomTrace(rng, 20000);
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (double th = 1.2; th < 6.0; th += 0.1) {
    DetectOptions d;
    d.threshold = th;
    d.refractory = 0.2;
    const std::size_t count = Detect(t, d).size();
    ASSERT_LE(count, previous) << "threshold " << th;
    previous = count;
  }
}

TEST_P(SpikePropertyTest, CountConservation) {
  std::mt19937_64 rng(100 + GetParam());
  const InjectionWaveform wf = Slots(7, 5);
  std::uniform_real_distribution<double> u(wf.layout()->lead_in,
                                           wf.duration() - 1e-6);
  SpikeRaster r;
  for (int i = 0; i < 30; ++i) r.times.push_back(u(rng));
  std::sort(r.times.begin(), r.times.end());
  EXPECT_EQ(Bin(r, wf).total(), static_cast<long>(r.size()));
}

INSTANTIATE_TEST_SUITE_P(Seeds, SpikePropertyTest, ::testing::Range(1, 11));

}  // namespace
}  // namespace vspike
