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

#ifndef DLDP_ATTACK_H_
#define DLDP_ATTACK_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dldp/correlation.h"
#include "dldp/genotype.h"
#include "dldp/mechanism.h"

namespace dldp {

// Design parameters of the sharing mechanism, when the attacker knows them.
struct KnownMechanismParams {
  double tau_hat = 0.02;
  double gamma_hat = 0.03;
};

struct AttackConfig {
  // Correlation threshold, in (0, 1).
  double tau = 0.02;
  // Inconsistency threshold as a fraction of l, in [0, 1]. Zero eliminates
  // every state of every SNP, which triggers the fallback everywhere.
  double gamma = 0.03;
  double epsilon_known = 1.0;
  std::optional<KnownMechanismParams> mechanism_params;
};

absl::Status ValidateAttackConfig(const AttackConfig& cfg);

struct AttackerBelief {
  std::vector<ProbabilityTriple> probs;
  // States the belief assigns zero mass to. Empty when `fallback` is set.
  std::vector<StateSet> eliminated;
  // True where every state was eliminated and the belief reverted to the
  // plain RR profile.
  std::vector<bool> fallback;
};

// Belief from the RR likelihood alone: p on the received value, q elsewhere.
AttackerBelief RrProfileBelief(std::span<const SnpValue> received,
                               double epsilon);

// Counts, for each SNP i and state v, the other received values y_k
// (k != i, whole sequence) with Pr(x_i = v | x_k = y_k) defined and below
// tau; v is eliminated when the count reaches gamma * l. The RR profile is
// restricted to the survivors and renormalized. When the attacker knows the
// mechanism parameters, survivors are further intersected with
// RecoverPossibleInputs (identity order); an empty intersection keeps the
// recovered set.
absl::StatusOr<AttackerBelief> Attack(std::span<const SnpValue> received,
                                      const CorrelationModel& corr,
                                      const AttackConfig& cfg);

// Replays the mechanism's own elimination rule over the received values
// along `order` (identity when absent) and returns each SNP's surviving
// set. The set is empty where the mechanism eliminated every state.
std::vector<StateSet> RecoverPossibleInputs(
    std::span<const SnpValue> received, const CorrelationModel& corr,
    double tau_hat, double gamma_hat,
    const std::optional<ProcessingOrder>& order = std::nullopt);

// E = (1/l) sum_k sum_v Pr(x_k = v) |x_k - v|, in [0, 2].
absl::StatusOr<double> EstimationError(const AttackerBelief& belief,
                                       std::span<const SnpValue> truth);

// Largest belief probability per SNP.
std::vector<double> MaxPosterior(const AttackerBelief& belief);

// Collector-side cleanup of an RR report. Sweeps the SNPs in index order;
// a reported value that the attack-style check (tau, gamma over all l)
// eliminates is replaced by the surviving state with the highest mean
// defined conditional probability given the other current reports (ties
// to the lower value). Replacements are visible to later SNPs in the same
// sweep. Stops after a sweep without changes or after 3 sweeps. A SNP
// whose every state is eliminated is left unchanged.
SnpRow RrPostprocess(std::span<const SnpValue> received,
                     const CorrelationModel& corr, double tau, double gamma);

}  // namespace dldp

#endif  // DLDP_ATTACK_H_
