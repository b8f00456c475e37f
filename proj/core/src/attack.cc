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

#include "dldp/attack.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "dldp/randomized_response.h"

namespace dldp {
namespace {

constexpr int kPostprocessSweeps = 3;

// Inconsistency counts of every state of SNP i against all other values.
std::array<int, kNumStates> CountInconsistent(int i,
                                              std::span<const SnpValue> values,
                                              const CorrelationModel& corr,
                                              double tau) {
  std::array<int, kNumStates> counts = {0, 0, 0};
  const int l = static_cast<int>(values.size());
  for (int k = 0; k < l; ++k) {
    if (k == i) continue;
    const unsigned mask = corr.LowMask(i, k, values[k], tau);
    counts[0] += mask & 1u;
    counts[1] += mask >> 1 & 1u;
    counts[2] += mask >> 2 & 1u;
  }
  return counts;
}

StateSet EliminatedByCounts(const std::array<int, kNumStates>& counts,
                            double threshold) {
  unsigned bits = 0;
  for (int v = 0; v < kNumStates; ++v) {
    if (counts[v] >= threshold) bits |= 1u << v;
  }
  return StateSet(bits);
}

ProbabilityTriple RestrictProfile(SnpValue received, StateSet support,
                                  const PerturbParams& params) {
  ProbabilityTriple belief = RrDistribution(received, params);
  double total = 0.0;
  for (SnpValue v : kAllSnpValues) {
    if (!support.contains(v)) belief[Index(v)] = 0.0;
    total += belief[Index(v)];
  }
  if (total > 0.0) {
    for (double& b : belief) b /= total;
    return belief;
  }
  // q underflowed and the received value is unsupported.
  for (SnpValue v : kAllSnpValues) {
    belief[Index(v)] = support.contains(v) ? 1.0 / support.size() : 0.0;
  }
  return belief;
}

}  // namespace

absl::Status ValidateAttackConfig(const AttackConfig& cfg) {
  if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) {
    return absl::InvalidArgumentError("tau must be in (0, 1)");
  }
  if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) {
    return absl::InvalidArgumentError("gamma must be finite and >= 0");
  }
  if (!std::isfinite(cfg.epsilon_known) || cfg.epsilon_known < 0.0) {
    return absl::InvalidArgumentError("epsilon_known must be finite and >= 0");
  }
  if (cfg.mechanism_params.has_value()) {
    MechanismConfig mc;
    mc.tau_hat = cfg.mechanism_params->tau_hat;
    mc.gamma_hat = cfg.mechanism_params->gamma_hat;
    if (absl::Status s = ValidateMechanismConfig(mc); !s.ok()) return s;
  }
  return absl::OkStatus();
}

AttackerBelief RrProfileBelief(std::span<const SnpValue> received,
                               double epsilon) {
  const PerturbParams params = RrParamsUnchecked(epsilon);
  AttackerBelief belief;
  belief.probs.reserve(received.size());
  for (SnpValue y : received) belief.probs.push_back(RrDistribution(y, params));
  belief.eliminated.assign(received.size(), StateSet());
  belief.fallback.assign(received.size(), false);
  return belief;
}

absl::StatusOr<AttackerBelief> Attack(std::span<const SnpValue> received,
                                      const CorrelationModel& corr,
                                      const AttackConfig& cfg) {
  if (absl::Status s = ValidateAttackConfig(cfg); !s.ok()) return s;
  const int l = static_cast<int>(received.size());
  if (l != corr.num_snps()) {
    return absl::InvalidArgumentError(
        absl::StrCat("received ", l, " values for a ", corr.num_snps(),
                     "-SNP correlation model"));
  }
  std::vector<StateSet> recovered;
  if (cfg.mechanism_params.has_value()) {
    recovered =
        RecoverPossibleInputs(received, corr, cfg.mechanism_params->tau_hat,
                              cfg.mechanism_params->gamma_hat);
  }
  const PerturbParams params = RrParamsUnchecked(cfg.epsilon_known);
  const double threshold = cfg.gamma * l;
  AttackerBelief belief;
  belief.probs.resize(l);
  belief.eliminated.resize(l);
  belief.fallback.assign(l, false);
  for (int i = 0; i < l; ++i) {
    const StateSet eliminated = EliminatedByCounts(
        CountInconsistent(i, received, corr, cfg.tau), threshold);
    StateSet support = eliminated.Complement();
    bool fallback = support.empty();
    if (fallback) support = StateSet::All();
    if (!recovered.empty()) {
      const StateSet possible =
          recovered[i].empty() ? StateSet::All() : recovered[i];
      const StateSet combined(support.bits() & possible.bits());
      support = combined.empty() ? possible : combined;
      fallback = support == StateSet::All() && fallback;
    }
    belief.probs[i] = RestrictProfile(received[i], support, params);
    belief.eliminated[i] = fallback ? StateSet() : support.Complement();
    belief.fallback[i] = fallback;
  }
  return belief;
}

std::vector<StateSet> RecoverPossibleInputs(
    std::span<const SnpValue> received, const CorrelationModel& corr,
    double tau_hat, double gamma_hat,
    const std::optional<ProcessingOrder>& order) {
  const int l = static_cast<int>(received.size());
  const ProcessingOrder replay =
      order.has_value() ? *order : ProcessingOrder::Identity(l);
  std::vector<StateSet> possible(l);
  EliminationTracker tracker(corr, tau_hat, gamma_hat);
  for (int a = 0; a < l; ++a) {
    const int snp = replay[a];
    possible[snp] = tracker.Outcome(snp).eliminated.Complement();
    tracker.Share(snp, received[snp]);
  }
  return possible;
}

absl::StatusOr<double> EstimationError(const AttackerBelief& belief,
                                       std::span<const SnpValue> truth) {
  if (belief.probs.size() != truth.size() || truth.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("belief covers ", belief.probs.size(),
                     " SNPs but truth has ", truth.size()));
  }
  double total = 0.0;
  for (size_t k = 0; k < truth.size(); ++k) {
    const int x = Index(truth[k]);
    for (int v = 0; v < kNumStates; ++v) {
      total += belief.probs[k][v] * std::abs(x - v);
    }
  }
  return total / static_cast<double>(truth.size());
}

std::vector<double> MaxPosterior(const AttackerBelief& belief) {
  std::vector<double> out;
  out.reserve(belief.probs.size());
  for (const auto& p : belief.probs) {
    out.push_back(std::max({p[0], p[1], p[2]}));
  }
  return out;
}

SnpRow RrPostprocess(std::span<const SnpValue> received,
                     const CorrelationModel& corr, double tau, double gamma) {
  SnpRow current(received.begin(), received.end());
  const int l = static_cast<int>(current.size());
  const double threshold = gamma * l;
  for (int sweep = 0; sweep < kPostprocessSweeps; ++sweep) {
    bool changed = false;
    for (int i = 0; i < l; ++i) {
      const StateSet eliminated = EliminatedByCounts(
          CountInconsistent(i, current, corr, tau), threshold);
      if (!eliminated.contains(current[i])) continue;
      if (eliminated == StateSet::All()) continue;
      double best_score = -1.0;
      SnpValue best = current[i];
      for (SnpValue v : kAllSnpValues) {
        if (eliminated.contains(v)) continue;
        double sum = 0.0;
        int defined = 0;
        for (int k = 0; k < l; ++k) {
          if (k == i) continue;
          if (auto c = corr.Cond(i, k, v, current[k]); c.has_value()) {
            sum += *c;
            ++defined;
          }
        }
        const double score = defined > 0 ? sum / defined : 0.0;
        if (score > best_score) {
          best_score = score;
          best = v;
        }
      }
      current[i] = best;
      changed = true;
    }
    if (!changed) break;
  }
  return current;
}

}  // namespace dldp
