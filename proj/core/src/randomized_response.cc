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

#include "dldp/randomized_response.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "dldp/random.h"

namespace dldp {

absl::StatusOr<PerturbParams> RrParams(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and >= 0; got ", epsilon));
  }
  return RrParamsUnchecked(epsilon);
}

PerturbParams RrParamsUnchecked(double epsilon) {
  // p = 1 / (1 + 2 e^-eps) stays finite where e^eps would overflow.
  const double inv = std::exp(-epsilon);
  PerturbParams params;
  params.epsilon = epsilon;
  params.p = 1.0 / (1.0 + 2.0 * inv);
  params.q = inv / (1.0 + 2.0 * inv);
  return params;
}

ProbabilityTriple RrDistribution(SnpValue x, const PerturbParams& params) {
  ProbabilityTriple dist = {params.q, params.q, params.q};
  dist[Index(x)] = params.p;
  return dist;
}

SnpValue RrSample(SnpValue x, const PerturbParams& params, double uniform) {
  const ProbabilityTriple dist = RrDistribution(x, params);
  return SnpValueOf(SampleCategorical(dist, uniform));
}

double CellUniform(uint64_t seed, int row, int column) {
  return ToUnitInterval(DeriveSeed(
      seed, {static_cast<uint64_t>(row), static_cast<uint64_t>(column)}));
}

absl::StatusOr<GenotypeMatrix> RrPerturb(const GenotypeMatrix& m,
                                         double epsilon, uint64_t seed) {
  auto params = RrParams(epsilon);
  if (!params.ok()) return params.status();
  std::vector<SnpValue> cells(m.cells().begin(), m.cells().end());
  const int l = m.num_snps();
  for (int j = 0; j < m.num_individuals(); ++j) {
    for (int i = 0; i < l; ++i) {
      SnpValue& cell = cells[static_cast<size_t>(j) * l + i];
      cell = RrSample(cell, *params, CellUniform(seed, j, i));
    }
  }
  return GenotypeMatrix::Create(m.num_individuals(), l, std::move(cells),
                                m.individual_ids(), m.snp_ids());
}

absl::StatusOr<FrequencyEstimate> RrEstimateFrequencies(
    std::span<const SnpValue> perturbed_column, double epsilon) {
  if (perturbed_column.empty()) {
    return absl::InvalidArgumentError("cannot estimate from an empty column");
  }
  auto params = RrParams(epsilon);
  if (!params.ok()) return params.status();
  if (!(params->p > params->q)) {
    return absl::FailedPreconditionError(
        "frequency estimator undefined at epsilon = 0 (p == q)");
  }
  std::array<int, kNumStates> counts = {0, 0, 0};
  for (SnpValue v : perturbed_column) ++counts[Index(v)];
  const double n = static_cast<double>(perturbed_column.size());
  FrequencyEstimate estimate;
  for (int v = 0; v < kNumStates; ++v) {
    estimate.raw[v] = (counts[v] - n * params->q) / (params->p - params->q);
    estimate.clamped[v] = std::clamp(estimate.raw[v], 0.0, n);
  }
  return estimate;
}

}  // namespace dldp
