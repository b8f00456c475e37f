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

#ifndef DLDP_SYNTHETIC_H_
#define DLDP_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dldp/genotype.h"

namespace dldp {

// First-order chain population over SNP index. Column 0 is drawn from its
// Hardy-Weinberg triple; column t copies column t-1 with probability
// chain_strength, else redraws from its own Hardy-Weinberg triple.
struct SyntheticSpec {
  int num_individuals = 0;
  int num_snps = 0;
  // Minor-allele frequency per SNP, each in (0, 0.5].
  std::vector<double> marginal_maf;
  // rho in [0, 1); 0 gives independent columns.
  double chain_strength = 0.0;
  uint64_t seed = 0;
};

absl::Status ValidateSyntheticSpec(const SyntheticSpec& spec);

// ((1-f)^2, 2f(1-f), f^2).
ProbabilityTriple HardyWeinberg(double maf);

// Per-SNP frequencies drawn uniformly from [lo, hi] with a keyed stream.
std::vector<double> UniformMafs(int num_snps, double lo, double hi,
                                uint64_t seed);

absl::StatusOr<GenotypeMatrix> GenerateSyntheticPopulation(
    const SyntheticSpec& spec);

}  // namespace dldp

#endif  // DLDP_SYNTHETIC_H_
