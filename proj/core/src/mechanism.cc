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

#include "dldp/mechanism.h"

#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "dldp/random.h"

namespace dldp {
namespace {

StateSet EliminatedFromCounters(const std::array<int, kNumStates>& counters,
                                double gamma_hat, int position) {
  const double threshold = gamma_hat * position;
  unsigned bits = 0;
  for (int v = 0; v < kNumStates; ++v) {
    if (counters[v] >= threshold) bits |= 1u << v;
  }
  return StateSet(bits);
}

}  // namespace

absl::StatusOr<DistributionMode> ParseDistributionMode(std::string_view name) {
  if (name == "plain") return DistributionMode::kPlain;
  if (name == "beacon") return DistributionMode::kBeacon;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown mode '", std::string(name), "' (expected plain|beacon)"));
}

std::string_view DistributionModeName(DistributionMode mode) {
  return mode == DistributionMode::kPlain ? "plain" : "beacon";
}

absl::Status ValidateMechanismConfig(const MechanismConfig& config) {
  if (!std::isfinite(config.epsilon) || config.epsilon < 0.0) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  if (!(config.tau_hat > 0.0 && config.tau_hat < 1.0)) {
    return absl::InvalidArgumentError("tau_hat must be in (0, 1)");
  }
  if (!(config.gamma_hat > 0.0) || !std::isfinite(config.gamma_hat)) {
    return absl::InvalidArgumentError("gamma_hat must be finite and > 0");
  }
  return absl::OkStatus();
}

SharingDistribution SharingDistributionFor(SnpValue x, StateSet eliminated,
                                           const MechanismConfig& config) {
  const PerturbParams params = config.params();
  SharingDistribution dist;
  dist.probs = SharingTable<double>(x, eliminated, config.mode, params.p,
                                    params.q, &dist.branch);
  return dist;
}

EliminationOutcome EliminateStates(int snp, std::span<const SharedValue> prefix,
                                   const CorrelationModel& corr,
                                   const MechanismConfig& config) {
  EliminationOutcome outcome;
  outcome.snp = snp;
  outcome.position = static_cast<int>(prefix.size()) + 1;
  for (const SharedValue& shared : prefix) {
    for (SnpValue v : kAllSnpValues) {
      const auto cond = corr.Cond(snp, shared.snp, v, shared.value);
      if (cond.has_value() && *cond < config.tau_hat) {
        ++outcome.counters[Index(v)];
      }
    }
  }
  outcome.eliminated = EliminatedFromCounters(
      outcome.counters, config.gamma_hat, outcome.position);
  return outcome;
}

EliminationTracker::EliminationTracker(const CorrelationModel& corr,
                                       double tau_hat, double gamma_hat)
    : corr_(&corr),
      tau_hat_(tau_hat),
      gamma_hat_(gamma_hat),
      counters_(corr.num_snps(), {0, 0, 0}) {}

void EliminationTracker::Share(int snp, SnpValue value) {
  const int l = corr_->num_snps();
  for (int i = 0; i < l; ++i) {
    if (i == snp) continue;
    const unsigned mask = corr_->LowMask(i, snp, value, tau_hat_);
    counters_[i][0] += mask & 1u;
    counters_[i][1] += mask >> 1 & 1u;
    counters_[i][2] += mask >> 2 & 1u;
  }
  ++num_shared_;
}

EliminationOutcome EliminationTracker::Outcome(int snp) const {
  EliminationOutcome outcome;
  outcome.snp = snp;
  outcome.position = num_shared_ + 1;
  outcome.counters = counters_[snp];
  outcome.eliminated =
      EliminatedFromCounters(outcome.counters, gamma_hat_, outcome.position);
  return outcome;
}

absl::StatusOr<ProcessingOrder> ProcessingOrder::Create(std::vector<int> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int index : perm) {
    if (index < 0 || static_cast<size_t>(index) >= perm.size() || seen[index]) {
      return absl::InvalidArgumentError(
          "processing order is not a permutation of 0..l-1");
    }
    seen[index] = true;
  }
  return ProcessingOrder(std::move(perm));
}

ProcessingOrder ProcessingOrder::Identity(int num_snps) {
  std::vector<int> perm(num_snps);
  std::iota(perm.begin(), perm.end(), 0);
  return ProcessingOrder(std::move(perm));
}

double SnpUniform(uint64_t seed, int snp) {
  return ToUnitInterval(DeriveSeed(seed, {static_cast<uint64_t>(snp)}));
}

SnpValue SampleShare(const SharingDistribution& dist, double uniform) {
  return SnpValueOf(SampleCategorical(dist.probs, uniform));
}

absl::StatusOr<PerturbedSequence> PerturbSequence(std::span<const SnpValue> row,
                                                  const ProcessingOrder& order,
                                                  const CorrelationModel& corr,
                                                  const MechanismConfig& config,
                                                  uint64_t seed) {
  if (absl::Status s = ValidateMechanismConfig(config); !s.ok()) return s;
  const int l = static_cast<int>(row.size());
  if (l != corr.num_snps() || order.size() != l) {
    return absl::InvalidArgumentError(
        absl::StrCat("length mismatch: row ", l, ", order ", order.size(),
                     ", correlation model ", corr.num_snps()));
  }
  PerturbedSequence seq;
  seq.values.assign(l, SnpValue::kZero);
  seq.outcomes.resize(l);
  seq.distributions.resize(l);
  seq.order_used = order;
  seq.dependence.max_dependence = l - 1;
  seq.dependence.consulted.assign(l, 0);

  EliminationTracker tracker(corr, config.tau_hat, config.gamma_hat);
  for (int a = 0; a < l; ++a) {
    const int snp = order[a];
    const EliminationOutcome outcome = tracker.Outcome(snp);
    const SharingDistribution dist =
        SharingDistributionFor(row[snp], outcome.eliminated, config);
    const SnpValue shared = SampleShare(dist, SnpUniform(seed, snp));
    seq.values[snp] = shared;
    seq.outcomes[snp] = outcome;
    seq.distributions[snp] = dist;
    seq.dependence.consulted[snp] = a;
    tracker.Share(snp, shared);
  }
  seq.dependence.ineliminable = ClassifyIneliminable(seq.outcomes, row);
  return seq;
}

std::vector<bool> ClassifyIneliminable(
    std::span<const EliminationOutcome> outcomes,
    std::span<const SnpValue> row) {
  std::vector<bool> flags(outcomes.size(), false);
  for (size_t idx = 0; idx < outcomes.size(); ++idx) {
    const EliminationOutcome& o = outcomes[idx];
    if (o.eliminated.size() != 2) continue;
    flags[idx] = !o.eliminated.contains(row[o.snp]);
  }
  return flags;
}

}  // namespace dldp
