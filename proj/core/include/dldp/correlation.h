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

#ifndef DLDP_CORRELATION_H_
#define DLDP_CORRELATION_H_

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dldp/genotype.h"

namespace dldp {

// Pairwise conditional probabilities Pr(SNP_i = a | SNP_k = b) for i != k,
// plus per-SNP marginals. Entries whose conditioning event has no support
// are undefined. Immutable and safe to share across threads.
class CorrelationModel {
 public:
  // `cond` is laid out by Offset(); undefined entries are NaN. Validates
  // that every defined (i, k, b) slice sums to 1.
  static absl::StatusOr<CorrelationModel> Create(
      int num_snps, std::vector<double> cond,
      std::vector<ProbabilityTriple> marginals);

  int num_snps() const { return num_snps_; }

  std::optional<double> Cond(int i, int k, SnpValue a, SnpValue b) const {
    const double v = cond_[Offset(i, k, b) + Index(a)];
    if (std::isnan(v)) return std::nullopt;
    return v;
  }

  // Bit v set when Pr(SNP_i = v | SNP_k = b) is defined and below `tau`.
  // Undefined entries never set a bit.
  unsigned LowMask(int i, int k, SnpValue b, double tau) const {
    const double* slice = &cond_[Offset(i, k, b)];
    // NaN compares false.
    return (slice[0] < tau ? 1u : 0u) | (slice[1] < tau ? 2u : 0u) |
           (slice[2] < tau ? 4u : 0u);
  }

  const ProbabilityTriple& marginal(int i) const { return marginals_[i]; }

  // Smallest defined conditional probability over all i != k. Experiments
  // use it as the data-specific floor for the correlation threshold.
  double MinDefinedCond() const;

 private:
  friend absl::StatusOr<CorrelationModel> ComputeCorrelationModel(
      const GenotypeMatrix&, double);

  size_t Offset(int i, int k, SnpValue b) const {
    return ((static_cast<size_t>(i) * num_snps_ + k) * kNumStates + Index(b)) *
           kNumStates;
  }

  int num_snps_ = 0;
  std::vector<double> cond_;
  std::vector<ProbabilityTriple> marginals_;
};

// Maximum-likelihood estimates with optional pseudo-count smoothing:
//   cond(i,k,a,b) = (#(x_i=a, x_k=b) + c) / (#(x_k=b) + 3c)
// undefined when the denominator is zero. Marginals are smoothed the same
// way. pseudo_count must be nonnegative.
absl::StatusOr<CorrelationModel> ComputeCorrelationModel(
    const GenotypeMatrix& m, double pseudo_count = 0.0);

// JSON: {"l": l, "cond": [i][k][a][b] with null for undefined and for i == k,
//        "marginals": [[p0, p1, p2], ...]}.
void WriteCorrelationJson(const CorrelationModel& model, std::ostream& out);
absl::StatusOr<CorrelationModel> ParseCorrelationJson(std::istream& in);
absl::StatusOr<CorrelationModel> ReadCorrelationFile(const std::string& path);
absl::Status WriteCorrelationFile(const CorrelationModel& model,
                                  const std::string& path);

}  // namespace dldp

#endif  // DLDP_CORRELATION_H_
