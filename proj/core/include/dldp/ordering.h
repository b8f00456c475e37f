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

#ifndef DLDP_ORDERING_H_
#define DLDP_ORDERING_H_

// Choosing the order in which an individual's SNPs go through the sharing
// mechanism. Eliminations depend on already-shared values, so the order
// changes the sharing distributions and therefore the expected beacon
// utility.
//
// The exact solver treats ordering as a finite-horizon MDP. A state records,
// for every SNP, whether it was shared and with which value; it is encoded
// base 4 with digit k = 0 for "not yet shared" and y + 1 for "shared as y".
// The reward for sharing SNP i as y is 1 when y is beacon-equivalent to the
// true value.

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dldp/correlation.h"
#include "dldp/genotype.h"
#include "dldp/mechanism.h"

namespace dldp {

inline constexpr int kMaxExactSnps = 12;
inline constexpr int kMaxBruteForceSnps = 6;

using MdpState = uint32_t;

// Uniform permutation of 0..l-1.
ProcessingOrder RandomOrder(int num_snps, uint64_t seed);

// Repeatedly picks the unshared SNP whose current sharing distribution has
// the highest expected beacon utility, then shares it. Ties are broken
// uniformly at random. Shares use SnpUniform(seed, snp), so
// PerturbSequence(row, order, corr, config, seed) reproduces them.
absl::StatusOr<ProcessingOrder> GreedyOrder(std::span<const SnpValue> row,
                                            const CorrelationModel& corr,
                                            const MechanismConfig& config,
                                            uint64_t seed);

class OrderingMdp {
 public:
  struct Transition {
    SnpValue share = SnpValue::kZero;
    double probability = 0.0;
    double reward = 0.0;
    MdpState next = 0;
  };

  // Fails when l is 0 or above kMaxExactSnps.
  static absl::StatusOr<OrderingMdp> Create(std::span<const SnpValue> row,
                                            const CorrelationModel& corr,
                                            const MechanismConfig& config);

  int num_snps() const { return static_cast<int>(row_.size()); }
  static constexpr MdpState Initial() { return 0; }
  int Depth(MdpState state) const;
  bool IsShared(MdpState state, int snp) const;

  // Unshared SNPs in increasing order.
  std::vector<int> Actions(MdpState state) const;

  // Outcomes with nonzero probability of sharing `action` from `state`.
  std::vector<Transition> Transitions(MdpState state, int action) const;

  // Elimination outcome for `snp` if it were shared next from `state`.
  EliminationOutcome Outcome(MdpState state, int snp) const;

 private:
  OrderingMdp(std::vector<SnpValue> row, const CorrelationModel& corr,
              MechanismConfig config)
      : row_(std::move(row)), corr_(&corr), config_(config) {}

  std::vector<SnpValue> row_;
  const CorrelationModel* corr_;
  MechanismConfig config_;
};

// Deterministic policy over encoded states. Unreached states map to -1.
class Policy {
 public:
  Policy() = default;
  Policy(int num_snps, std::vector<int8_t> actions)
      : num_snps_(num_snps), actions_(std::move(actions)) {}

  int num_snps() const { return num_snps_; }
  int Action(MdpState state) const { return actions_[state]; }

  // Runs the policy on `row`, sharing with SnpUniform(seed, snp), and
  // returns the realized order.
  absl::StatusOr<ProcessingOrder> Realize(std::span<const SnpValue> row,
                                          const CorrelationModel& corr,
                                          const MechanismConfig& config,
                                          uint64_t seed) const;

 private:
  int num_snps_ = 0;
  std::vector<int8_t> actions_;
};

struct OptimalOrderResult {
  Policy policy;
  // Optimal expected number of beacon-equivalent shares, in [0, l].
  double expected_utility = 0.0;
};

// Exact backward induction over the reachable states. Ties go to the lowest
// SNP index. Fails with a capacity error above kMaxExactSnps.
absl::StatusOr<OptimalOrderResult> OptimalOrderValueIteration(
    std::span<const SnpValue> row, const CorrelationModel& corr,
    const MechanismConfig& config);

struct StaticOrderResult {
  ProcessingOrder order = ProcessingOrder::Identity(0);
  double expected_utility = 0.0;
};

// Best fixed order by enumerating all l! orders. First best order in
// lexicographic order wins ties. Limited to kMaxBruteForceSnps.
absl::StatusOr<StaticOrderResult> BruteForceOrder(
    std::span<const SnpValue> row, const CorrelationModel& corr,
    const MechanismConfig& config);

struct UtilityMethod {
  enum class Kind { kExact, kMonteCarlo };
  Kind kind = Kind::kExact;
  int trials = 0;
  uint64_t seed = 0;

  static UtilityMethod Exact() { return {}; }
  static UtilityMethod MonteCarlo(int trials, uint64_t seed) {
    return {Kind::kMonteCarlo, trials, seed};
  }
};

struct UtilityEstimate {
  double mean = 0.0;
  // Zero for exact evaluation.
  double standard_error = 0.0;
};

// Expected number of beacon-equivalent shares under a fixed order. Exact
// expands the share tree and is limited to kMaxExactSnps.
absl::StatusOr<UtilityEstimate> ExpectedUtilityOfOrder(
    std::span<const SnpValue> row, const ProcessingOrder& order,
    const CorrelationModel& corr, const MechanismConfig& config,
    const UtilityMethod& method);

}  // namespace dldp

#endif  // DLDP_ORDERING_H_
