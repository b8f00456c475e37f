// Copyright 2026 The dldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>

#include "benchmark/benchmark.h"
#include "dldp/attack.h"
#include "dldp/correlation.h"
#include "dldp/genotype.h"
#include "dldp/kinship.h"
#include "dldp/mechanism.h"
#include "dldp/ordering.h"
#include "dldp/random.h"
#include "dldp/randomized_response.h"
#include "dldp/synthetic.h"

namespace dldp {
namespace {

GenotypeMatrix Population(int n, int l, uint64_t seed) {
  SyntheticSpec spec;
  spec.num_individuals = n;
  spec.num_snps = l;
  spec.marginal_maf = UniformMafs(l, 0.01, 0.1, DeriveSeed(seed, {0}));
  spec.chain_strength = 0.5;
  spec.seed = DeriveSeed(seed, {1});
  return *GenerateSyntheticPopulation(spec);
}

void BM_ComputeCorrelation(benchmark::State& state) {
  const GenotypeMatrix m = Population(150, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeCorrelationModel(m));
  }
}
BENCHMARK(BM_ComputeCorrelation)->Arg(50)->Arg(200);

void BM_PerturbSequence(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const GenotypeMatrix m = Population(150, l, 2);
  const CorrelationModel corr = *ComputeCorrelationModel(m);
  const ProcessingOrder order = ProcessingOrder::Identity(l);
  MechanismConfig config;
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        PerturbSequence(m.Row(0), order, corr, config, seed++));
  }
}
BENCHMARK(BM_PerturbSequence)->Arg(50)->Arg(200);

void BM_Attack(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const GenotypeMatrix m = Population(150, l, 3);
  const CorrelationModel corr = *ComputeCorrelationModel(m);
  const GenotypeMatrix shared = *RrPerturb(m, 1.0, 4);
  AttackConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Attack(shared.Row(0), corr, cfg));
  }
}
BENCHMARK(BM_Attack)->Arg(50)->Arg(200);

void BM_RrPerturb(benchmark::State& state) {
  const GenotypeMatrix m = Population(150, 200, 5);
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RrPerturb(m, 1.0, seed++));
  }
}
BENCHMARK(BM_RrPerturb);

void BM_GreedyOrder(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const GenotypeMatrix m = Population(150, l, 6);
  const CorrelationModel corr = *ComputeCorrelationModel(m);
  MechanismConfig config;
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(GreedyOrder(m.Row(0), corr, config, seed++));
  }
}
BENCHMARK(BM_GreedyOrder)->Arg(10)->Arg(200);

void BM_OptimalOrder(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const GenotypeMatrix m = Population(10, l, 7);
  const CorrelationModel corr = *ComputeCorrelationModel(m);
  MechanismConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        OptimalOrderValueIteration(m.Row(0), corr, config));
  }
}
BENCHMARK(BM_OptimalOrder)
    ->Arg(6)
    ->Arg(8)
    ->Arg(10)
    ->Unit(benchmark::kMillisecond);

void BM_KinshipSolver(benchmark::State& state) {
  const FamilyState family =
      *FamilyState::Create(FamilyShape::kTwoChildrenToParent,
                           {{"parent", FamilyRole::kParent, 1.0},
                            {"a", FamilyRole::kChild, 1.0},
                            {"b", FamilyRole::kChild, 1.0}},
                           {{0, "a", SnpValue::kZero, 1.0}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(MaxBudgetGeneral(family, 0, "b"));
  }
}
BENCHMARK(BM_KinshipSolver);

}  // namespace
}  // namespace dldp

BENCHMARK_MAIN();
