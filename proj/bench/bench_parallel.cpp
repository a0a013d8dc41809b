// Copyright 2026 The invgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference against the OpenMP kernels: multi-start restarts inside one
// fit, and (data cell x method) fits inside one experiment.

#include <benchmark/benchmark.h>

#include "invgame/estimation.hpp"
#include "invgame/experiments.hpp"
#include "invgame/scenarios.hpp"

namespace {

using namespace invgame;

Dataset traffic_data() {
  auto cfg = ExperimentConfig::defaults(ExperimentId::kE2);
  return generate_experiment_data(cfg, 2000, 0);
}

void BM_CeMlRestarts(benchmark::State& state) {
  const Dataset d = traffic_data();
  const auto source = experiment_features(ExperimentConfig::defaults(ExperimentId::kE2));
  FitConfig cfg;
  cfg.restarts = 32;
  cfg.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(fit(Method::kCeMl, d, source, cfg).nll);
}
BENCHMARK(BM_CeMlRestarts)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_LbrMlGrid(benchmark::State& state) {
  const Dataset d = traffic_data();
  const auto source = experiment_features(ExperimentConfig::defaults(ExperimentId::kE2));
  FitConfig cfg;
  cfg.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(fit(Method::kLbrMl, d, source, cfg).nll);
}
BENCHMARK(BM_LbrMlGrid)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_ExperimentCells(benchmark::State& state) {
  auto cfg = ExperimentConfig::defaults(ExperimentId::kE1);
  cfg.T = {500};
  cfg.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg).rows.size());
}
// jobs = 1 is the serial reference; 0 uses every available thread.
BENCHMARK(BM_ExperimentCells)->Arg(1)->Arg(0)->ArgName("jobs")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
