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

#include "dldp/kinship.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dldp/randomized_response.h"
#include "json.hpp"

namespace dldp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solver grid: first crossing found on a 1/64 step over [0, kMaxEpsilon],
// then refined by bisection.
constexpr double kMaxEpsilon = 32.0;
constexpr double kGridStep = 1.0 / 64.0;
constexpr double kTolerance = 1e-9;

// Pr(x_child = m | y) under plain RR.
ProbabilityTriple ShareWeights(const ChildShare& share) {
  const PerturbParams params = RrParamsUnchecked(share.epsilon);
  ProbabilityTriple w;
  for (int m = 0; m < kNumStates; ++m) {
    w[m] = m == Index(share.value) ? params.p : params.q;
  }
  return w;
}

absl::Status ValidateShare(const ChildShare& share) {
  if (!(share.epsilon >= 0.0) || !std::isfinite(share.epsilon)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "share epsilon must be finite and >= 0; got ", share.epsilon));
  }
  return absl::OkStatus();
}

const char* RoleName(FamilyRole role) {
  return role == FamilyRole::kParent ? "parent" : "child";
}

// First epsilon at which ratio(epsilon) exceeds target, or +inf.
template <typename Fn>
double FirstCrossing(Fn ratio, double target) {
  auto within = [&](double e) { return ratio(e) <= target * (1.0 + 1e-12); };
  if (!within(0.0)) return 0.0;
  double lo = 0.0;
  double hi = kInf;
  for (double e = kGridStep; e <= kMaxEpsilon; e += kGridStep) {
    if (!within(e)) {
      hi = e;
      break;
    }
    lo = e;
  }
  if (std::isinf(hi)) return kInf;
  while (hi - lo > kTolerance) {
    const double mid = 0.5 * (lo + hi);
    (within(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

ProbabilityTriple PosteriorParentGivenShare(SnpValue y, double epsilon) {
  const ProbabilityTriple w = ShareWeights({y, epsilon});
  ProbabilityTriple z{};
  for (int m = 0; m < kNumStates; ++m) {
    for (int x = 0; x < kNumStates; ++x) {
      z[x] += w[m] * kParentGivenChild[m][x].value();
    }
  }
  return z;
}

absl::StatusOr<ProbabilityTriple> PosteriorParentGivenShares(
    std::span<const ChildShare> shares) {
  for (const ChildShare& s : shares) {
    if (absl::Status st = ValidateShare(s); !st.ok()) return st;
  }
  if (shares.size() == 1) {
    return PosteriorParentGivenShare(shares[0].value, shares[0].epsilon);
  }
  if (shares.size() != 2) {
    return absl::UnimplementedError(absl::StrCat(
        "parent posterior is tabled for 1 or 2 children; got ", shares.size()));
  }
  const ProbabilityTriple w1 = ShareWeights(shares[0]);
  const ProbabilityTriple w2 = ShareWeights(shares[1]);
  ProbabilityTriple z{};
  for (int m1 = 0; m1 < kNumStates; ++m1) {
    for (int m2 = 0; m2 < kNumStates; ++m2) {
      const double w = w1[m1] * w2[m2];
      for (int x = 0; x < kNumStates; ++x) {
        z[x] += w * kParentGivenTwoChildren[3 * m1 + m2][x].value();
      }
    }
  }
  return z;
}

double HomozygousRatio(const ProbabilityTriple& posterior) {
  const double hi = std::max(posterior[0], posterior[2]);
  const double lo = std::min(posterior[0], posterior[2]);
  if (lo <= 0.0) return hi > 0.0 ? kInf : 1.0;
  return hi / lo;
}

double IndirectBudgetOneChild(double epsilon_child, SnpValue y) {
  if (y == SnpValue::kOne) return 0.0;
  return std::log((2.0 * std::exp(epsilon_child) + 1.0) / 3.0);
}

double MaxBudgetOneChild(double epsilon_parent) {
  return std::log((3.0 * std::exp(epsilon_parent) - 1.0) / 2.0);
}

double IndirectBudgetTwoChildren(double epsilon) {
  const double e = std::exp(epsilon);
  return std::log((52.0 * e * e + 52.0 * e + 25.0) / 129.0);
}

absl::StatusOr<double> MaxBudgetSecondChild(double epsilon) {
  const double e = std::exp(epsilon);
  const double num = 103.0 * e - 25.0;
  const double den = 52.0 * e + 26.0;
  if (!(num / den > 0.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("second-child budget undefined at epsilon ", epsilon));
  }
  return std::log(num / den);
}

absl::StatusOr<FamilyShape> ParseFamilyShape(std::string_view tag) {
  if (tag == "one_child_to_parent") return FamilyShape::kOneChildToParent;
  if (tag == "two_children_to_parent") return FamilyShape::kTwoChildrenToParent;
  return absl::UnimplementedError(absl::StrCat(
      "unsupported family shape '", std::string(tag),
      "' (supported: one_child_to_parent, two_children_to_parent)"));
}

absl::StatusOr<FamilyState> FamilyState::Create(
    FamilyShape shape, std::vector<FamilyMember> members,
    std::vector<ShareRecord> shares) {
  int parents = 0;
  int children = 0;
  for (size_t i = 0; i < members.size(); ++i) {
    const FamilyMember& m = members[i];
    if (m.id.empty()) return absl::InvalidArgumentError("member with empty id");
    for (size_t j = 0; j < i; ++j) {
      if (members[j].id == m.id) {
        return absl::InvalidArgumentError(
            absl::StrCat("duplicate member id '", m.id, "'"));
      }
    }
    if (!(m.budget >= 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "member '", m.id, "' budget must be >= 0; got ", m.budget));
    }
    (m.role == FamilyRole::kParent ? parents : children) += 1;
  }
  const int want_children = shape == FamilyShape::kOneChildToParent ? 1 : 2;
  if (parents != 1 || children != want_children) {
    return absl::UnimplementedError(absl::StrCat(
        "family shape needs 1 parent and ", want_children, " child(ren); got ",
        parents, " parent(s) and ", children, " child(ren)"));
  }
  FamilyState state;
  state.shape_ = shape;
  state.members_ = std::move(members);
  for (const ShareRecord& r : shares) {
    const FamilyMember* m = state.Find(r.member);
    if (m == nullptr) {
      return absl::InvalidArgumentError(
          absl::StrCat("share references unknown member '", r.member, "'"));
    }
    if (m->role != FamilyRole::kChild) {
      return absl::UnimplementedError(
          absl::StrCat("member '", r.member, "' is a ", RoleName(m->role),
                       "; only children's shares are modeled"));
    }
    if (r.snp < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("share snp must be >= 0; got ", r.snp));
    }
    if (absl::Status st = ValidateShare({r.value, r.epsilon}); !st.ok()) {
      return st;
    }
    if (state.HasShared(r.member, r.snp)) {
      return absl::InvalidArgumentError(
          absl::StrCat("member '", r.member, "' shares snp ", r.snp, " twice"));
    }
    state.shares_.push_back(r);
  }
  return state;
}

const FamilyMember* FamilyState::Find(std::string_view id) const {
  for (const FamilyMember& m : members_) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

bool FamilyState::HasShared(std::string_view id, int snp) const {
  return std::any_of(shares_.begin(), shares_.end(), [&](const ShareRecord& r) {
    return r.member == id && r.snp == snp;
  });
}

absl::StatusOr<FamilyState> ParseFamilyJson(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid family JSON: ", e.what()));
  }
  try {
    auto shape = ParseFamilyShape(doc.at("shape").get<std::string>());
    if (!shape.ok()) return shape.status();
    std::vector<FamilyMember> members;
    for (const auto& jm : doc.at("members")) {
      FamilyMember m;
      m.id = jm.at("id").get<std::string>();
      const std::string role = jm.at("role").get<std::string>();
      if (role == "parent") {
        m.role = FamilyRole::kParent;
      } else if (role == "child") {
        m.role = FamilyRole::kChild;
      } else {
        return absl::UnimplementedError(absl::StrCat(
            "member '", m.id, "' has unsupported role '", role, "'"));
      }
      const auto it = jm.find("budget");
      if (it == jm.end() || it->is_null() ||
          (it->is_string() && it->get<std::string>() == "inf")) {
        m.budget = kInf;
      } else {
        m.budget = it->get<double>();
      }
      members.push_back(std::move(m));
    }
    std::vector<ShareRecord> shares;
    if (doc.contains("shares")) {
      for (const auto& js : doc.at("shares")) {
        ShareRecord r;
        r.snp = js.at("snp").get<int>();
        r.member = js.at("member").get<std::string>();
        auto v = SnpValueFromInt(js.at("value").get<int>());
        if (!v.ok()) return v.status();
        r.value = *v;
        r.epsilon = js.at("epsilon").get<double>();
        shares.push_back(std::move(r));
      }
    }
    return FamilyState::Create(*shape, std::move(members), std::move(shares));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed family JSON: ", e.what()));
  }
}

absl::StatusOr<FamilyState> ReadFamilyFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  auto parsed = ParseFamilyJson(in);
  if (!parsed.ok()) {
    return absl::Status(parsed.status().code(),
                        absl::StrCat(path, ": ", parsed.status().message()));
  }
  return parsed;
}

absl::StatusOr<double> MaxBudgetGeneral(const FamilyState& family, int snp,
                                        std::string_view next_sharer) {
  const FamilyMember* sharer = family.Find(next_sharer);
  if (sharer == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown member '", std::string(next_sharer), "'"));
  }
  if (sharer->role != FamilyRole::kChild) {
    return absl::UnimplementedError(
        absl::StrCat("member '", std::string(next_sharer),
                     "' is a parent; only a child as next sharer is modeled"));
  }
  if (family.HasShared(next_sharer, snp)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "member '", std::string(next_sharer), "' already shared snp ", snp));
  }
  std::vector<ChildShare> prior;
  for (const ShareRecord& r : family.shares()) {
    if (r.snp == snp) prior.push_back({r.value, r.epsilon});
  }

  double limit = kInf;
  for (const FamilyMember& victim : family.members()) {
    if (victim.id == next_sharer || victim.role != FamilyRole::kParent) {
      continue;
    }
    if (std::isinf(victim.budget)) continue;
    const double target = std::exp(victim.budget);
    double member_limit = kInf;
    for (SnpValue a : kAllSnpValues) {
      std::vector<ChildShare> shares = prior;
      shares.push_back({a, 0.0});
      if (shares.size() > 2) {
        return absl::UnimplementedError(
            "more than two children sharing one snp is not modeled");
      }
      auto ratio = [&](double e) {
        shares.back().epsilon = e;
        return HomozygousRatio(*PosteriorParentGivenShares(shares));
      };
      member_limit = std::min(member_limit, FirstCrossing(ratio, target));
    }
    limit = std::min(limit, member_limit);
  }
  return limit;
}

absl::StatusOr<double> SelectDonorBudget(std::span<const double> per_snp_maxima,
                                         double own_budget) {
  if (per_snp_maxima.empty()) {
    return absl::InvalidArgumentError("no per-snp maxima");
  }
  return std::min(
      *std::min_element(per_snp_maxima.begin(), per_snp_maxima.end()),
      own_budget);
}

}  // namespace dldp
