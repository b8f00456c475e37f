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

#ifndef DLDP_KINSHIP_H_
#define DLDP_KINSHIP_H_

// Privacy accounting across relatives. A child's perturbed SNP tells an
// attacker something about the parent through Mendelian inheritance; the
// functions here measure that indirect budget and bound the budget a child
// may use so a relative's own budget is respected.
//
// All posteriors assume the sharing mechanism left all three states
// possible, i.e. the share came from the plain RR triple.

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dldp/genotype.h"

namespace dldp {

struct Fraction {
  int num = 0;
  int den = 1;
  constexpr double value() const { return static_cast<double>(num) / den; }
};

using FractionRow = std::array<Fraction, kNumStates>;

// Pr(x_parent | x_child), rows indexed by the child's value.
inline constexpr std::array<FractionRow, 3> kParentGivenChild = {{
    {{{2, 3}, {1, 3}, {0, 1}}},
    {{{1, 3}, {1, 3}, {1, 3}}},
    {{{0, 1}, {1, 3}, {2, 3}}},
}};

// Pr(x_parent | x_child1, x_child2), rows indexed by 3 * child1 + child2.
inline constexpr std::array<FractionRow, 9> kParentGivenTwoChildren = {{
    {{{4, 5}, {1, 5}, {0, 1}}},
    {{{2, 5}, {3, 5}, {0, 1}}},
    {{{0, 1}, {1, 1}, {0, 1}}},
    {{{2, 5}, {3, 5}, {0, 1}}},
    {{{5, 13}, {3, 13}, {5, 13}}},
    {{{0, 1}, {3, 5}, {2, 5}}},
    {{{0, 1}, {1, 1}, {0, 1}}},
    {{{0, 1}, {3, 5}, {2, 5}}},
    {{{0, 1}, {1, 5}, {4, 5}}},
}};

// A child's share of one SNP and the budget it was shared with.
struct ChildShare {
  SnpValue value = SnpValue::kZero;
  double epsilon = 0.0;
};

// Pr(x_parent | y_child) = sum_m Pr(x_parent | x_child = m) Pr(x_child = m | y)
// with Pr(x_child = m | y) = p if m = y else q.
ProbabilityTriple PosteriorParentGivenShare(SnpValue y, double epsilon);

// Same mixing over one or two children's shares (Table lookups above).
absl::StatusOr<ProbabilityTriple> PosteriorParentGivenShares(
    std::span<const ChildShare> shares);

// Indistinguishability of the parent's two homozygous states,
// max(z0, z2) / min(z0, z2); +inf when the smaller is zero.
double HomozygousRatio(const ProbabilityTriple& posterior);

// ln((2 e^eps + 1) / 3) for y in {0, 2}; 0 for y = 1.
double IndirectBudgetOneChild(double epsilon_child, SnpValue y);

// ln((3 e^eps_parent - 1) / 2): the largest child budget keeping the
// parent's indirect budget at eps_parent.
double MaxBudgetOneChild(double epsilon_parent);

// ln((52 e^{2 eps} + 52 e^eps + 25) / 129): both children share 0 with
// budget eps.
double IndirectBudgetTwoChildren(double epsilon);

// ln((103 e^eps - 25) / (52 e^eps + 26)): budget for the second child after
// the first shared 0 with eps, keeping the parent at eps. Fails when the
// logarithm's argument is not positive.
absl::StatusOr<double> MaxBudgetSecondChild(double epsilon);

enum class FamilyShape { kOneChildToParent, kTwoChildrenToParent };
enum class FamilyRole { kParent, kChild };

absl::StatusOr<FamilyShape> ParseFamilyShape(std::string_view tag);

struct FamilyMember {
  std::string id;
  FamilyRole role = FamilyRole::kChild;
  // Nonnegative; +inf means the member imposes no constraint.
  double budget = 0.0;
};

struct ShareRecord {
  int snp = 0;
  std::string member;
  SnpValue value = SnpValue::kZero;
  double epsilon = 0.0;
};

class FamilyState {
 public:
  // Validates member composition against the shape, budgets, and that each
  // share comes from a child at most once per SNP.
  static absl::StatusOr<FamilyState> Create(FamilyShape shape,
                                            std::vector<FamilyMember> members,
                                            std::vector<ShareRecord> shares);

  FamilyShape shape() const { return shape_; }
  const std::vector<FamilyMember>& members() const { return members_; }
  const std::vector<ShareRecord>& shares() const { return shares_; }
  const FamilyMember* Find(std::string_view id) const;
  bool HasShared(std::string_view id, int snp) const;

 private:
  FamilyShape shape_ = FamilyShape::kOneChildToParent;
  std::vector<FamilyMember> members_;
  std::vector<ShareRecord> shares_;
};

// {"shape": "one_child_to_parent" | "two_children_to_parent",
//  "members": [{"id": s, "role": "parent" | "child", "budget": x | null}],
//  "shares": [{"snp": i, "member": s, "value": v, "epsilon": x}]}
// A null budget means unconstrained.
absl::StatusOr<FamilyState> ParseFamilyJson(std::istream& in);
absl::StatusOr<FamilyState> ReadFamilyFile(const std::string& path);

// Largest budget `next_sharer` may use for `snp` without pushing any
// member who has not shared that SNP past their own budget. For each such
// member and each candidate share value a, finds the first sharer budget at
// which the member's homozygous ratio reaches e^{budget}; the constraint
// must hold for every a, so the member's limit is the minimum over a.
// Returns the minimum over members, +inf when nothing binds, and 0 when the
// prior shares alone already exceed a member's budget.
//
// Only children share; siblings have no tabled transition law and are not
// constrained.
absl::StatusOr<double> MaxBudgetGeneral(const FamilyState& family, int snp,
                                        std::string_view next_sharer);

// min(min(per_snp_maxima), own_budget). Fails on an empty list.
absl::StatusOr<double> SelectDonorBudget(std::span<const double> per_snp_maxima,
                                         double own_budget);

}  // namespace dldp

#endif  // DLDP_KINSHIP_H_
