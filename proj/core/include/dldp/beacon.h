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

#ifndef DLDP_BEACON_H_
#define DLDP_BEACON_H_

#include <span>
#include <string_view>

#include "absl/status/statusor.h"
#include "dldp/genotype.h"
#include "dldp/mechanism.h"

namespace dldp {

// A beacon answers "does anyone in the cohort carry the minor allele at
// this SNP?". One minor allele suffices, so {1, 2} form one equivalence
// class and {0} the other.
enum class BeaconAnswer { kNo, kYes };

// How the collector turns a perturbed column into an answer.
enum class BeaconRule {
  // Yes iff any reported value is nonzero.
  kDirect,
  // RR baseline: No iff at least n * p individuals report 0.
  kRrEstimated,
};

absl::StatusOr<BeaconRule> ParseBeaconRule(std::string_view name);

constexpr bool BeaconEquivalent(SnpValue a, SnpValue b) {
  return (a == SnpValue::kZero) == (b == SnpValue::kZero);
}

BeaconAnswer BeaconResponse(std::span<const SnpValue> column);

BeaconAnswer RrBeaconDecision(std::span<const SnpValue> perturbed_column,
                              double epsilon);

struct AccuracyReport {
  // n_s / l.
  double overall = 1.0;
  // Accuracy over queries whose original answer was Yes (resp. No). An
  // empty class has accuracy 1.
  double yes_accuracy = 1.0;
  double no_accuracy = 1.0;
  int matches = 0;
  int num_queries = 0;
  int num_yes = 0;
  int num_no = 0;
};

// One query per SNP over the full cohort.
absl::StatusOr<AccuracyReport> BeaconAccuracy(const GenotypeMatrix& original,
                                              const GenotypeMatrix& perturbed,
                                              BeaconRule rule, double epsilon);

// Expected single-individual beacon utility of sharing `x` through `dist`:
// Pr(y = 0) when x = 0, else Pr(y != 0).
double PerSnpExpectedUtility(SnpValue x, const SharingDistribution& dist);
double PerSnpExpectedUtility(SnpValue x, const ProbabilityTriple& probs);

}  // namespace dldp

#endif  // DLDP_BEACON_H_
