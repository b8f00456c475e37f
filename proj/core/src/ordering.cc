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

#include "dldp/ordering.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "dldp/beacon.h"
#include "dldp/random.h"

namespace dldp {
namespace {

// Distinct from any SNP index used with SnpUniform.
constexpr uint64_t kGreedyTieTag = 0x9e3779b97f4a7c15ULL;
constexpr double kTieTolerance = 1e-12;

absl::Status ValidateInputs(std::span<const SnpValue> row,
                            const CorrelationModel& corr,
                            const MechanismConfig& config) {
  if (absl::Status s = ValidateMechanismConfig(config); !s.ok()) return s;
  if (row.empty()) return absl::InvalidArgumentError("empty SNP row");
  if (static_cast<int>(row.size()) != corr.num_snps()) {
    return absl::InvalidArgumentError(
        absl::StrCat("row has ", row.size(), " SNPs, correlation model has ",
                     corr.num_snps()));
  }
  return absl::OkStatus();
}

absl::Status CheckCap(int l, int cap, std::string_view what,
                      std::string_view advice) {
  if (l > cap) {
    return absl::ResourceExhaustedError(
        absl::StrCat(std::string(what), " supports at most ", cap,
                     " SNPs; got ", l, ". ", std::string(advice)));
  }
  return absl::OkStatus();
}

// Elimination counters for every SNP packed as 4-bit fields, one word per
// state, so sharing a SNP is three additions and an elimination check is a
// shift and compare. Valid for l <= 16.
class PackedModel {
 public:
  struct Counters {
    std::array<uint64_t, kNumStates> v = {0, 0, 0};
  };

  // Per (snp, eliminated mask): the sharing distribution and its rewards.
  struct Leaf {
    std::array<double, kNumStates> prob = {0, 0, 0};
    std::array<double, kNumStates> reward = {0, 0, 0};
    double expected = 0.0;
  };

  PackedModel(std::span<const SnpValue> row, const CorrelationModel& corr,
              const MechanismConfig& config)
      : l_(static_cast<int>(row.size())),
        add_(static_cast<size_t>(l_) * 9, 0),
        threshold_(l_ + 1, 0),
        leaves_(static_cast<size_t>(l_) * 8) {
    for (int k = 0; k < l_; ++k) {
      for (SnpValue y : kAllSnpValues) {
        for (int i = 0; i < l_; ++i) {
          if (i == k) continue;
          const unsigned mask = corr.LowMask(i, k, y, config.tau_hat);
          for (int v = 0; v < kNumStates; ++v) {
            if (mask >> v & 1u) {
              add_[(k * 3 + Index(y)) * 3 + v] += uint64_t{1} << (4 * i);
            }
          }
        }
      }
    }
    for (int a = 1; a <= l_; ++a) {
      // count >= gamma_hat * a  <=>  count >= ceil(gamma_hat * a).
      const double t = std::ceil(config.gamma_hat * a);
      threshold_[a] = t > 16.0 ? 16u : static_cast<unsigned>(std::max(t, 0.0));
    }
    for (int i = 0; i < l_; ++i) {
      for (unsigned mask = 0; mask < 8; ++mask) {
        const SharingDistribution dist =
            SharingDistributionFor(row[i], StateSet(mask), config);
        Leaf& leaf = leaves_[i * 8 + mask];
        for (SnpValue y : kAllSnpValues) {
          const int yi = Index(y);
          leaf.prob[yi] = dist.probs[yi];
          leaf.reward[yi] = BeaconEquivalent(row[i], y) ? 1.0 : 0.0;
          leaf.expected += leaf.prob[yi] * leaf.reward[yi];
        }
      }
    }
  }

  int num_snps() const { return l_; }

  unsigned Eliminated(const Counters& c, int snp, int position) const {
    const unsigned t = threshold_[position];
    unsigned bits = 0;
    for (int v = 0; v < kNumStates; ++v) {
      if ((c.v[v] >> (4 * snp) & 15u) >= t) bits |= 1u << v;
    }
    return bits;
  }

  void Share(Counters& c, int snp, int y) const {
    const uint64_t* add = &add_[(snp * 3 + y) * 3];
    c.v[0] += add[0];
    c.v[1] += add[1];
    c.v[2] += add[2];
  }

  const Leaf& leaf(int snp, unsigned mask) const {
    return leaves_[snp * 8 + mask];
  }

 private:
  int l_;
  std::vector<uint64_t> add_;
  std::vector<unsigned> threshold_;
  std::vector<Leaf> leaves_;
};

std::vector<MdpState> Powers4(int l) {
  std::vector<MdpState> pow4(l + 1, 1);
  for (int i = 1; i <= l; ++i) pow4[i] = pow4[i - 1] * 4;
  return pow4;
}

class ValueIteration {
 public:
  explicit ValueIteration(const PackedModel& model)
      : model_(model),
        pow4_(Powers4(model.num_snps())),
        value_(pow4_.back(), std::numeric_limits<double>::quiet_NaN()),
        action_(pow4_.back(), -1) {}

  double Solve() { return Visit(0, 0u, PackedModel::Counters{}, 0); }
  std::vector<int8_t> TakeActions() { return std::move(action_); }

 private:
  double Visit(MdpState state, unsigned done,
               const PackedModel::Counters& counters, int depth) {
    const int l = model_.num_snps();
    if (depth == l) return 0.0;
    if (!std::isnan(value_[state])) return value_[state];
    double best = -1.0;
    int best_action = -1;
    for (int i = 0; i < l; ++i) {
      if (done >> i & 1u) continue;
      const PackedModel::Leaf& leaf =
          model_.leaf(i, model_.Eliminated(counters, i, depth + 1));
      double total = leaf.expected;
      for (int y = 0; y < kNumStates; ++y) {
        if (leaf.prob[y] <= 0.0) continue;
        PackedModel::Counters next = counters;
        model_.Share(next, i, y);
        total += leaf.prob[y] * Visit(state + (y + 1) * pow4_[i],
                                      done | 1u << i, next, depth + 1);
      }
      if (total > best + kTieTolerance) {
        best = total;
        best_action = i;
      }
    }
    value_[state] = best;
    action_[state] = static_cast<int8_t>(best_action);
    return best;
  }

  const PackedModel& model_;
  std::vector<MdpState> pow4_;
  std::vector<double> value_;
  std::vector<int8_t> action_;
};

double ExpandStaticOrder(const PackedModel& model, std::span<const int> order,
                         int position, const PackedModel::Counters& counters) {
  if (position == static_cast<int>(order.size())) return 0.0;
  const int snp = order[position];
  const PackedModel::Leaf& leaf =
      model.leaf(snp, model.Eliminated(counters, snp, position + 1));
  double total = leaf.expected;
  for (int y = 0; y < kNumStates; ++y) {
    if (leaf.prob[y] <= 0.0) continue;
    PackedModel::Counters next = counters;
    model.Share(next, snp, y);
    total += leaf.prob[y] * ExpandStaticOrder(model, order, position + 1, next);
  }
  return total;
}

}  // namespace

ProcessingOrder RandomOrder(int num_snps, uint64_t seed) {
  // RandomPermutation always yields a valid permutation.
  return *ProcessingOrder::Create(RandomPermutation(num_snps, seed));
}

absl::StatusOr<ProcessingOrder> GreedyOrder(std::span<const SnpValue> row,
                                            const CorrelationModel& corr,
                                            const MechanismConfig& config,
                                            uint64_t seed) {
  if (absl::Status s = ValidateInputs(row, corr, config); !s.ok()) return s;
  const int l = static_cast<int>(row.size());
  SplitMix64 ties(DeriveSeed(seed, {kGreedyTieTag}));
  EliminationTracker tracker(corr, config.tau_hat, config.gamma_hat);
  std::vector<int> remaining(l);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> order;
  order.reserve(l);
  std::vector<int> best;
  std::vector<SharingDistribution> dists(l);
  while (!remaining.empty()) {
    double best_utility = -1.0;
    best.clear();
    for (int snp : remaining) {
      dists[snp] = SharingDistributionFor(
          row[snp], tracker.Outcome(snp).eliminated, config);
      const double u = PerSnpExpectedUtility(row[snp], dists[snp]);
      if (u > best_utility + kTieTolerance) {
        best_utility = u;
        best.assign(1, snp);
      } else if (u >= best_utility - kTieTolerance) {
        best.push_back(snp);
      }
    }
    const int pick = best[UniformIndex(ties, best.size())];
    tracker.Share(pick, SampleShare(dists[pick], SnpUniform(seed, pick)));
    order.push_back(pick);
    remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
  }
  return ProcessingOrder::Create(std::move(order));
}

absl::StatusOr<OrderingMdp> OrderingMdp::Create(std::span<const SnpValue> row,
                                                const CorrelationModel& corr,
                                                const MechanismConfig& config) {
  if (absl::Status s = ValidateInputs(row, corr, config); !s.ok()) return s;
  if (absl::Status s = CheckCap(static_cast<int>(row.size()), kMaxExactSnps,
                                "the ordering MDP", "Use greedy ordering.");
      !s.ok()) {
    return s;
  }
  return OrderingMdp(std::vector<SnpValue>(row.begin(), row.end()), corr,
                     config);
}

bool OrderingMdp::IsShared(MdpState state, int snp) const {
  return (state >> (2 * snp) & 3u) != 0;
}

int OrderingMdp::Depth(MdpState state) const {
  int depth = 0;
  for (int k = 0; k < num_snps(); ++k) depth += IsShared(state, k);
  return depth;
}

std::vector<int> OrderingMdp::Actions(MdpState state) const {
  std::vector<int> actions;
  for (int k = 0; k < num_snps(); ++k) {
    if (!IsShared(state, k)) actions.push_back(k);
  }
  return actions;
}

EliminationOutcome OrderingMdp::Outcome(MdpState state, int snp) const {
  std::vector<SharedValue> prefix;
  for (int k = 0; k < num_snps(); ++k) {
    const unsigned digit = state >> (2 * k) & 3u;
    if (digit != 0) prefix.push_back({k, SnpValueOf(digit - 1)});
  }
  return EliminateStates(snp, prefix, *corr_, config_);
}

std::vector<OrderingMdp::Transition> OrderingMdp::Transitions(
    MdpState state, int action) const {
  const SharingDistribution dist = SharingDistributionFor(
      row_[action], Outcome(state, action).eliminated, config_);
  std::vector<Transition> out;
  for (SnpValue y : kAllSnpValues) {
    const double prob = dist.probs[Index(y)];
    if (prob <= 0.0) continue;
    out.push_back({y, prob, BeaconEquivalent(row_[action], y) ? 1.0 : 0.0,
                   state + ((Index(y) + 1u) << (2 * action))});
  }
  return out;
}

absl::StatusOr<ProcessingOrder> Policy::Realize(std::span<const SnpValue> row,
                                                const CorrelationModel& corr,
                                                const MechanismConfig& config,
                                                uint64_t seed) const {
  if (absl::Status s = ValidateInputs(row, corr, config); !s.ok()) return s;
  if (static_cast<int>(row.size()) != num_snps_) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy is for ", num_snps_, " SNPs; row has ", row.size()));
  }
  EliminationTracker tracker(corr, config.tau_hat, config.gamma_hat);
  MdpState state = 0;
  std::vector<int> order;
  for (int depth = 0; depth < num_snps_; ++depth) {
    const int snp = Action(state);
    if (snp < 0 || (state >> (2 * snp) & 3u) != 0) {
      return absl::InternalError(
          absl::StrCat("policy has no valid action for state ", state));
    }
    const SharingDistribution dist = SharingDistributionFor(
        row[snp], tracker.Outcome(snp).eliminated, config);
    const SnpValue y = SampleShare(dist, SnpUniform(seed, snp));
    tracker.Share(snp, y);
    state += (Index(y) + 1u) << (2 * snp);
    order.push_back(snp);
  }
  return ProcessingOrder::Create(std::move(order));
}

absl::StatusOr<OptimalOrderResult> OptimalOrderValueIteration(
    std::span<const SnpValue> row, const CorrelationModel& corr,
    const MechanismConfig& config) {
  if (absl::Status s = ValidateInputs(row, corr, config); !s.ok()) return s;
  const int l = static_cast<int>(row.size());
  if (absl::Status s = CheckCap(l, kMaxExactSnps, "optimal ordering",
                                "Use greedy ordering for longer sequences.");
      !s.ok()) {
    return s;
  }
  const PackedModel model(row, corr, config);
  ValueIteration solver(model);
  OptimalOrderResult result;
  result.expected_utility = solver.Solve();
  result.policy = Policy(l, solver.TakeActions());
  return result;
}

absl::StatusOr<StaticOrderResult> BruteForceOrder(
    std::span<const SnpValue> row, const CorrelationModel& corr,
    const MechanismConfig& config) {
  if (absl::Status s = ValidateInputs(row, corr, config); !s.ok()) return s;
  const int l = static_cast<int>(row.size());
  if (absl::Status s = CheckCap(l, kMaxBruteForceSnps, "brute-force ordering",
                                "Use value iteration or greedy ordering.");
      !s.ok()) {
    return s;
  }
  const PackedModel model(row, corr, config);
  std::vector<int> perm(l);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  double best = -1.0;
  do {
    const double u = ExpandStaticOrder(model, perm, 0, {});
    if (u > best + kTieTolerance) {
      best = u;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  StaticOrderResult result;
  result.order = *ProcessingOrder::Create(std::move(best_perm));
  result.expected_utility = best;
  return result;
}

absl::StatusOr<UtilityEstimate> ExpectedUtilityOfOrder(
    std::span<const SnpValue> row, const ProcessingOrder& order,
    const CorrelationModel& corr, const MechanismConfig& config,
    const UtilityMethod& method) {
  if (absl::Status s = ValidateInputs(row, corr, config); !s.ok()) return s;
  const int l = static_cast<int>(row.size());
  if (order.size() != l) {
    return absl::InvalidArgumentError(
        absl::StrCat("order has ", order.size(), " entries; row has ", l));
  }
  UtilityEstimate estimate;
  if (method.kind == UtilityMethod::Kind::kExact) {
    if (absl::Status s = CheckCap(l, kMaxExactSnps, "exact utility",
                                  "Use Monte Carlo evaluation.");
        !s.ok()) {
      return s;
    }
    const PackedModel model(row, corr, config);
    estimate.mean = ExpandStaticOrder(model, order.perm(), 0, {});
    return estimate;
  }
  if (method.trials < 1) {
    return absl::InvalidArgumentError("Monte Carlo needs at least one trial");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int t = 0; t < method.trials; ++t) {
    const uint64_t seed = DeriveSeed(method.seed, {static_cast<uint64_t>(t)});
    EliminationTracker tracker(corr, config.tau_hat, config.gamma_hat);
    double utility = 0.0;
    for (int a = 0; a < l; ++a) {
      const int snp = order[a];
      const SharingDistribution dist = SharingDistributionFor(
          row[snp], tracker.Outcome(snp).eliminated, config);
      const SnpValue y = SampleShare(dist, SnpUniform(seed, snp));
      utility += BeaconEquivalent(row[snp], y) ? 1.0 : 0.0;
      tracker.Share(snp, y);
    }
    sum += utility;
    sum_sq += utility * utility;
  }
  const double n = method.trials;
  estimate.mean = sum / n;
  if (method.trials > 1) {
    const double var =
        std::max(0.0, (sum_sq - n * estimate.mean * estimate.mean) / (n - 1.0));
    estimate.standard_error = std::sqrt(var / n);
  }
  return estimate;
}

}  // namespace dldp
