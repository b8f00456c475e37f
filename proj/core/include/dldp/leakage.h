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

#ifndef DLDP_LEAKAGE_H_
#define DLDP_LEAKAGE_H_

#include <vector>

#include "absl/status/statusor.h"
#include "dldp/attack.h"

namespace dldp {

// An attacker's prior odds between two candidate values of one SNP, and the
// budget the mechanism spent on it.
struct LeakageQuery {
  double zeta = 1.0;     // > 0
  double epsilon = 0.0;  // >= 0, finite
};

// Upper bound on the attacker's posterior for any single value:
// max{1 / (zeta e^eps + 1), zeta e^eps / (zeta e^eps + 1)}, in [1/2, 1).
// Depends on (zeta, eps) only through zeta * e^eps.
absl::StatusOr<double> LeakageUpperBound(const LeakageQuery& query);

struct LeakageCheck {
  int snp = 0;
  double max_posterior = 0.0;
  double zeta = 1.0;
  double bound = 0.5;
};

// Compares each SNP's largest belief probability with the bound, using the
// largest prior ratio between any two values the belief still allows. The
// attack's prior is uniform over the surviving values, so zeta = 1.
// SNPs reduced to a single value have a degenerate prior and are skipped.
std::vector<LeakageCheck> CheckLeakage(const AttackerBelief& belief,
                                       double epsilon);

}  // namespace dldp

#endif  // DLDP_LEAKAGE_H_
