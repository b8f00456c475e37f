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

#include "dldp/beacon.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "dldp/randomized_response.h"

namespace dldp {

absl::StatusOr<BeaconRule> ParseBeaconRule(std::string_view name) {
  if (name == "direct") return BeaconRule::kDirect;
  if (name == "rr-estimated") return BeaconRule::kRrEstimated;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown beacon rule '", std::string(name),
                   "' (expected direct|rr-estimated)"));
}

BeaconAnswer BeaconResponse(std::span<const SnpValue> column) {
  const bool any = std::any_of(column.begin(), column.end(),
                               [](SnpValue v) { return v != SnpValue::kZero; });
  return any ? BeaconAnswer::kYes : BeaconAnswer::kNo;
}

BeaconAnswer RrBeaconDecision(std::span<const SnpValue> perturbed_column,
                              double epsilon) {
  const double p = RrParamsUnchecked(epsilon).p;
  const auto zeros = std::count(perturbed_column.begin(),
                                perturbed_column.end(), SnpValue::kZero);
  const double threshold = static_cast<double>(perturbed_column.size()) * p;
  return static_cast<double>(zeros) >= threshold ? BeaconAnswer::kNo
                                                 : BeaconAnswer::kYes;
}

absl::StatusOr<AccuracyReport> BeaconAccuracy(const GenotypeMatrix& original,
                                              const GenotypeMatrix& perturbed,
                                              BeaconRule rule, double epsilon) {
  if (original.num_individuals() != perturbed.num_individuals() ||
      original.num_snps() != perturbed.num_snps()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: original ", original.num_individuals(), "x",
        original.num_snps(), ", perturbed ", perturbed.num_individuals(), "x",
        perturbed.num_snps()));
  }
  AccuracyReport report;
  report.num_queries = original.num_snps();
  int yes_matches = 0;
  int no_matches = 0;
  for (int i = 0; i < original.num_snps(); ++i) {
    const BeaconAnswer truth = BeaconResponse(original.Column(i));
    const SnpRow column = perturbed.Column(i);
    const BeaconAnswer answer = rule == BeaconRule::kDirect
                                    ? BeaconResponse(column)
                                    : RrBeaconDecision(column, epsilon);
    const bool match = truth == answer;
    if (truth == BeaconAnswer::kYes) {
      ++report.num_yes;
      yes_matches += match;
    } else {
      ++report.num_no;
      no_matches += match;
    }
  }
  report.matches = yes_matches + no_matches;
  report.overall = static_cast<double>(report.matches) / report.num_queries;
  if (report.num_yes > 0) {
    report.yes_accuracy = static_cast<double>(yes_matches) / report.num_yes;
  }
  if (report.num_no > 0) {
    report.no_accuracy = static_cast<double>(no_matches) / report.num_no;
  }
  return report;
}

double PerSnpExpectedUtility(SnpValue x, const ProbabilityTriple& probs) {
  return x == SnpValue::kZero ? probs[0] : probs[1] + probs[2];
}

double PerSnpExpectedUtility(SnpValue x, const SharingDistribution& dist) {
  return PerSnpExpectedUtility(x, dist.probs);
}

}  // namespace dldp
