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

#include "dldp/leakage.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace dldp {

absl::StatusOr<double> LeakageUpperBound(const LeakageQuery& query) {
  if (!(query.zeta > 0.0) || !std::isfinite(query.zeta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("zeta must be finite and > 0; got ", query.zeta));
  }
  if (!(query.epsilon >= 0.0) || !std::isfinite(query.epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and >= 0; got ", query.epsilon));
  }
  const double odds = query.zeta * std::exp(query.epsilon);
  return std::max(1.0 / (odds + 1.0), odds / (odds + 1.0));
}

std::vector<LeakageCheck> CheckLeakage(const AttackerBelief& belief,
                                       double epsilon) {
  std::vector<LeakageCheck> checks;
  for (size_t i = 0; i < belief.probs.size(); ++i) {
    const StateSet support = belief.fallback[i]
                                 ? StateSet::All()
                                 : belief.eliminated[i].Complement();
    if (support.size() < 2) continue;
    LeakageCheck check;
    check.snp = static_cast<int>(i);
    const auto& p = belief.probs[i];
    check.max_posterior = std::max({p[0], p[1], p[2]});
    check.zeta = 1.0;
    check.bound = *LeakageUpperBound({check.zeta, epsilon});
    checks.push_back(check);
  }
  return checks;
}

}  // namespace dldp
