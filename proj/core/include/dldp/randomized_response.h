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

#ifndef DLDP_RANDOMIZED_RESPONSE_H_
#define DLDP_RANDOMIZED_RESPONSE_H_

#include <cstdint>
#include <span>

#include "absl/status/statusor.h"
#include "dldp/genotype.h"

namespace dldp {

// Generalized randomized response over three states: the true value is
// reported with probability p = e^eps / (e^eps + 2), each other value with
// q = 1 / (e^eps + 2).
struct PerturbParams {
  double epsilon = 0.0;
  double p = 1.0 / 3.0;
  double q = 1.0 / 3.0;
};

// Fails for negative or non-finite epsilon.
absl::StatusOr<PerturbParams> RrParams(double epsilon);

// Unchecked; epsilon must be >= 0. For large epsilon, q underflows to 0
// smoothly rather than producing NaN.
PerturbParams RrParamsUnchecked(double epsilon);

// The RR triple centred on `x`.
ProbabilityTriple RrDistribution(SnpValue x, const PerturbParams& params);

// Draws the RR report for `x` from a single uniform in [0, 1).
SnpValue RrSample(SnpValue x, const PerturbParams& params, double uniform);

// Uniform used for cell (row, column); keyed so perturbation is
// independent of traversal order.
double CellUniform(uint64_t seed, int row, int column);

absl::StatusOr<GenotypeMatrix> RrPerturb(const GenotypeMatrix& m,
                                         double epsilon, uint64_t seed);

struct FrequencyEstimate {
  // (c_v - n q) / (p - q), before clamping.
  ProbabilityTriple raw;
  // raw clamped to [0, n].
  ProbabilityTriple clamped;
};

// Collector-side estimate of how many individuals hold each value.
// Fails on an empty column or epsilon == 0 (p == q).
absl::StatusOr<FrequencyEstimate> RrEstimateFrequencies(
    std::span<const SnpValue> perturbed_column, double epsilon);

}  // namespace dldp

#endif  // DLDP_RANDOMIZED_RESPONSE_H_
