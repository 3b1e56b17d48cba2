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

#include <benchmark/benchmark.h>

#include "vspike/encoding.h"
#include "vspike/imaging.h"
#include "vspike/pipeline.h"
#include "vspike/sfm_neuron.h"
#include "vspike/spikes.h"

namespace {

const vspike::NeuronState& Locked() {
  static const vspike::NeuronState s = [] {
    vspike::SfmParams p;
    p.beta_sp = 0.0;
    return vspike::FindLockedState(p, {1.3, 0.0});
  }();
  return s;
}

void BM_RunNanosecond(benchmark::State& state) {
  vspike::SfmParams params;
  params.beta_sp = state.range(0) ? 1e-5 : 0.0;
  const auto wf = vspike::InjectionWaveform::Constant({1.3, 0.0}, 1.0);
  for (auto _ : state) {
    vspike::NoiseSource noise(1);
    auto t = vspike::Run(Locked(), wf, params, {}, noise);
    benchmark::DoNotOptimize(t.final_state());
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_RunNanosecond)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const vspike::SfmParams params;
  const auto wf = vspike::InjectionWaveform::Constant({1.3, 0.0}, 1.0);
  vspike::NoiseSource noise(1);
  vspike::NeuronState s = Locked();
  for (auto _ : state) {
    s = vspike::Step(s, wf, 0.5, 1e-4, params, noise);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Step);

void BM_GradientMap(benchmark::State& state) {
  const vspike::SignedImage logo = vspike::MakeRingLogo();
  for (auto _ : state) {
    auto g = vspike::GradientMagnitude(
        vspike::Convolve2x2(logo, vspike::BuiltinKernel(1)),
        vspike::Convolve2x2(logo, vspike::BuiltinKernel(3)));
    benchmark::DoNotOptimize(g.values().data());
  }
}
BENCHMARK(BM_GradientMap);

void BM_Detect(benchmark::State& state) {
  std::vector<double> v(1000000, 1.0);
  for (std::size_t i = 5000; i < v.size(); i += 1500) v[i] = 4.0;
  const auto t = vspike::Trajectory::FromTotal(1e-3, std::move(v));
  vspike::DetectOptions d;
  d.threshold = 2.0;
  for (auto _ : state) {
    auto r = vspike::Detect(t, d);
    benchmark::DoNotOptimize(r.times.data());
  }
}
BENCHMARK(BM_Detect)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
