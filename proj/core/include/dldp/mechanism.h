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

#ifndef DLDP_MECHANISM_H_
#define DLDP_MECHANISM_H_

// Correlation-aware sharing of a SNP sequence under (epsilon, T)-dependent
// local differential privacy.
//
// SNPs are processed one at a time in a given order. Before sharing SNP i at
// position a (1-based), every state v of x_i is tested against each
// already-shared SNP k: the pair is inconsistent when the conditional
// Pr(x_i = v | x_k = y_k) is defined and below tau_hat. A state whose
// inconsistency count reaches gamma_hat * a is eliminated. The shared value
// is drawn from a distribution over the surviving states that keeps the
// likelihood ratio between any two surviving inputs within e^epsilon.
//
// Each state is tested independently, both when counting and when
// eliminating; any number of states may be eliminated by one shared SNP.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dldp/correlation.h"
#include "dldp/genotype.h"
#include "dldp/randomized_response.h"

namespace dldp {

// Which case table to draw from once states are eliminated. kBeacon shifts
// mass toward the beacon-equivalent value ({1, 2} are interchangeable for a
// minor-allele query) when the true value itself was eliminated.
enum class DistributionMode { kPlain, kBeacon };

absl::StatusOr<DistributionMode> ParseDistributionMode(std::string_view name);
std::string_view DistributionModeName(DistributionMode mode);

struct MechanismConfig {
  double epsilon = 1.0;
  // Correlation threshold, in (0, 1).
  double tau_hat = 0.02;
  // Inconsistency threshold, > 0. Values above 1 can never be met
  // (counts are at most a - 1 < gamma_hat * a) and disable elimination.
  double gamma_hat = 0.03;
  DistributionMode mode = DistributionMode::kBeacon;

  PerturbParams params() const { return RrParamsUnchecked(epsilon); }
};

absl::Status ValidateMechanismConfig(const MechanismConfig& config);

// Subset of {0, 1, 2} as a 3-bit mask.
class StateSet {
 public:
  constexpr StateSet() = default;
  constexpr explicit StateSet(unsigned bits) : bits_(bits & 7u) {}
  static constexpr StateSet All() { return StateSet(7u); }

  constexpr bool contains(SnpValue v) const { return bits_ >> Index(v) & 1u; }
  constexpr int size() const {
    return static_cast<int>((bits_ & 1u) + (bits_ >> 1 & 1u) +
                            (bits_ >> 2 & 1u));
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr unsigned bits() const { return bits_; }
  constexpr StateSet Complement() const { return StateSet(~bits_); }
  constexpr StateSet With(SnpValue v) const {
    return StateSet(bits_ | 1u << Index(v));
  }

  friend constexpr bool operator==(StateSet, StateSet) = default;

 private:
  unsigned bits_ = 0;
};

struct EliminationOutcome {
  int snp = 0;
  // Inconsistency counts per state; each at most position - 1.
  std::array<int, kNumStates> counters = {0, 0, 0};
  StateSet eliminated;
  // 1-based position in the processing order.
  int position = 1;
};

enum class DistributionBranch {
  kRandomizedResponse,     // nothing eliminated
  kTrueValueSurvives,      // one eliminated, x survives
  kTrueValueEliminated,    // one eliminated, x eliminated
  kSoleSurvivor,           // two eliminated
  kAllEliminatedFallback,  // three eliminated; RR centred on x
};

struct SharingDistribution {
  ProbabilityTriple probs = {0, 0, 0};
  DistributionBranch branch = DistributionBranch::kRandomizedResponse;
};

// The case table, generic over the number type so it can be evaluated
// exactly. `p` and `q` are the RR parameters.
template <typename T>
std::array<T, kNumStates> SharingTable(SnpValue x, StateSet eliminated,
                                       DistributionMode mode, const T& p,
                                       const T& q,
                                       DistributionBranch* branch = nullptr) {
  const T zero(0);
  std::array<T, kNumStates> probs = {zero, zero, zero};
  const int xi = Index(x);
  auto set_branch = [branch](DistributionBranch b) {
    if (branch != nullptr) *branch = b;
  };
  const int eliminated_count = eliminated.size();
  if (eliminated_count == 0 || eliminated_count == kNumStates) {
    probs = {q, q, q};
    probs[xi] = p;
    set_branch(eliminated_count == 0
                   ? DistributionBranch::kRandomizedResponse
                   : DistributionBranch::kAllEliminatedFallback);
    return probs;
  }
  if (eliminated_count == 2) {
    for (SnpValue v : kAllSnpValues) {
      if (!eliminated.contains(v)) probs[Index(v)] = T(1);
    }
    set_branch(DistributionBranch::kSoleSurvivor);
    return probs;
  }
  const T p_adj = p / (p + q);
  const T q_adj = q / (p + q);
  if (!eliminated.contains(x)) {
    for (SnpValue v : kAllSnpValues) {
      if (!eliminated.contains(v)) probs[Index(v)] = (v == x) ? p_adj : q_adj;
    }
    set_branch(DistributionBranch::kTrueValueSurvives);
    return probs;
  }
  set_branch(DistributionBranch::kTrueValueEliminated);
  if (mode == DistributionMode::kBeacon && x != SnpValue::kZero) {
    // The surviving member of {1, 2} carries the beacon answer; favour it.
    probs[0] = q_adj;
    probs[x == SnpValue::kOne ? 2 : 1] = p_adj;
    return probs;
  }
  const T half = T(1) / T(2);
  for (SnpValue v : kAllSnpValues) {
    if (!eliminated.contains(v)) probs[Index(v)] = half;
  }
  return probs;
}

SharingDistribution SharingDistributionFor(SnpValue x, StateSet eliminated,
                                           const MechanismConfig& config);

struct SharedValue {
  int snp = 0;
  SnpValue value = SnpValue::kZero;
};

// Elimination check for SNP `snp` given the already-shared prefix; the
// position is prefix.size() + 1. Undefined conditionals never count.
EliminationOutcome EliminateStates(int snp, std::span<const SharedValue> prefix,
                                   const CorrelationModel& corr,
                                   const MechanismConfig& config);

// Incremental form of EliminateStates for all SNPs at once: Share() adds
// one shared SNP to the prefix in O(l).
class EliminationTracker {
 public:
  EliminationTracker(const CorrelationModel& corr, double tau_hat,
                     double gamma_hat);

  void Share(int snp, SnpValue value);

  // Outcome for `snp` if it were processed next.
  EliminationOutcome Outcome(int snp) const;

  int num_shared() const { return num_shared_; }

 private:
  const CorrelationModel* corr_;
  double tau_hat_;
  double gamma_hat_;
  int num_shared_ = 0;
  std::vector<std::array<int, kNumStates>> counters_;
};

// A permutation of 0..l-1.
class ProcessingOrder {
 public:
  static absl::StatusOr<ProcessingOrder> Create(std::vector<int> perm);
  static ProcessingOrder Identity(int num_snps);

  int size() const { return static_cast<int>(perm_.size()); }
  int operator[](int position) const { return perm_[position]; }
  const std::vector<int>& perm() const { return perm_; }

  friend bool operator==(const ProcessingOrder&,
                         const ProcessingOrder&) = default;

 private:
  explicit ProcessingOrder(std::vector<int> perm) : perm_(std::move(perm)) {}
  std::vector<int> perm_;
};

struct DependenceInfo {
  // T = l - 1 under the pairwise model.
  int max_dependence = 0;
  // Per SNP: number of already-shared SNPs consulted (its position - 1).
  // The consulted set itself is the prefix of the processing order.
  std::vector<int> consulted;
  std::vector<bool> ineliminable;
};

struct PerturbedSequence {
  // Indexed by original SNP position, never by processing position.
  SnpRow values;
  std::vector<EliminationOutcome> outcomes;
  std::vector<SharingDistribution> distributions;
  ProcessingOrder order_used = ProcessingOrder::Identity(0);
  DependenceInfo dependence;
};

// Uniform driving the draw for SNP `snp`. Keyed by SNP index so that any
// two procedures that reach the same state for a SNP draw the same value.
double SnpUniform(uint64_t seed, int snp);

SnpValue SampleShare(const SharingDistribution& dist, double uniform);

absl::StatusOr<PerturbedSequence> PerturbSequence(std::span<const SnpValue> row,
                                                  const ProcessingOrder& order,
                                                  const CorrelationModel& corr,
                                                  const MechanismConfig& config,
                                                  uint64_t seed);

// True where exactly two states were eliminated and the survivor is the
// true value.
std::vector<bool> ClassifyIneliminable(
    std::span<const EliminationOutcome> outcomes,
    std::span<const SnpValue> row);

}  // namespace dldp

#endif  // DLDP_MECHANISM_H_
