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

#include "dldp/synthetic.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "dldp/random.h"

namespace dldp {

absl::Status ValidateSyntheticSpec(const SyntheticSpec& spec) {
  if (spec.num_individuals < 1 || spec.num_snps < 1) {
    return absl::InvalidArgumentError("synthetic spec needs n >= 1, l >= 1");
  }
  if (spec.marginal_maf.size() != static_cast<size_t>(spec.num_snps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("marginal_maf has ", spec.marginal_maf.size(),
                     " entries, expected ", spec.num_snps));
  }
  for (double f : spec.marginal_maf) {
    if (!(f > 0.0 && f <= 0.5)) {
      return absl::InvalidArgumentError(
          absl::StrCat("minor-allele frequency must be in (0, 0.5]; got ", f));
    }
  }
  if (!(spec.chain_strength >= 0.0 && spec.chain_strength < 1.0)) {
    return absl::InvalidArgumentError("chain_strength must be in [0, 1)");
  }
  return absl::OkStatus();
}

ProbabilityTriple HardyWeinberg(double maf) {
  return {(1.0 - maf) * (1.0 - maf), 2.0 * maf * (1.0 - maf), maf * maf};
}

std::vector<double> UniformMafs(int num_snps, double lo, double hi,
                                uint64_t seed) {
  std::vector<double> mafs(num_snps);
  SplitMix64 gen(DeriveSeed(seed, {0x6d6166}));
  for (double& f : mafs) f = lo + (hi - lo) * ToUnitInterval(gen());
  return mafs;
}

absl::StatusOr<GenotypeMatrix> GenerateSyntheticPopulation(
    const SyntheticSpec& spec) {
  if (absl::Status s = ValidateSyntheticSpec(spec); !s.ok()) return s;
  const int n = spec.num_individuals;
  const int l = spec.num_snps;
  std::vector<ProbabilityTriple> hw(l);
  for (int i = 0; i < l; ++i) hw[i] = HardyWeinberg(spec.marginal_maf[i]);

  std::vector<SnpValue> cells(static_cast<size_t>(n) * l);
  for (int j = 0; j < n; ++j) {
    SplitMix64 gen(DeriveSeed(spec.seed, {static_cast<uint64_t>(j)}));
    SnpValue* row = &cells[static_cast<size_t>(j) * l];
    for (int i = 0; i < l; ++i) {
      const double copy_draw = ToUnitInterval(gen());
      const double value_draw = ToUnitInterval(gen());
      if (i > 0 && copy_draw < spec.chain_strength) {
        row[i] = row[i - 1];
      } else {
        row[i] = SnpValueOf(SampleCategorical(hw[i], value_draw));
      }
    }
  }
  return GenotypeMatrix::Create(n, l, std::move(cells));
}

}  // namespace dldp
