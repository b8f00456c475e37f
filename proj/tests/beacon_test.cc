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

#include "dldp/beacon.h"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "dldp/randomized_response.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dldp {
namespace {

using testing::Matrix;
using testing::Row;

TEST(BeaconResponseTest, Definition) {
  EXPECT_EQ(BeaconResponse(Row({0, 0, 0})), BeaconAnswer::kNo);
  EXPECT_EQ(BeaconResponse(Row({0, 2, 0})), BeaconAnswer::kYes);
  EXPECT_EQ(BeaconResponse(Row({0, 0, 1})), BeaconAnswer::kYes);
}

TEST(BeaconEquivalentTest, Classes) {
  EXPECT_TRUE(BeaconEquivalent(SnpValue::kOne, SnpValue::kTwo));
  EXPECT_TRUE(BeaconEquivalent(SnpValue::kZero, SnpValue::kZero));
  EXPECT_FALSE(BeaconEquivalent(SnpValue::kZero, SnpValue::kTwo));
}

TEST(RrBeaconDecisionTest, Threshold) {
  EXPECT_EQ(RrBeaconDecision(Row({0, 0, 0, 0}), 3.0), BeaconAnswer::kNo);
  EXPECT_EQ(RrBeaconDecision(Row({1, 2, 1}), 0.5), BeaconAnswer::kYes);
  // n = 100, p = 0.5: 49 zeros is below the 50 threshold, 50 meets it.
  std::vector<SnpValue> col(100, SnpValue::kOne);
  std::fill(col.begin(), col.begin() + 49, SnpValue::kZero);
  EXPECT_EQ(RrBeaconDecision(col, std::log(2.0)), BeaconAnswer::kYes);
  col[49] = SnpValue::kZero;
  // 50 >= 100 * p, with p rounded from e^ln2 / (e^ln2 + 2).
  const double p = RrParamsUnchecked(std::log(2.0)).p;
  EXPECT_EQ(RrBeaconDecision(col, std::log(2.0)),
            50 >= 100 * p ? BeaconAnswer::kNo : BeaconAnswer::kYes);
}

TEST(BeaconAccuracyTest, IdentityIsPerfect) {
  const GenotypeMatrix m = Matrix({{0, 1, 0}, {0, 2, 0}});
  auto r = BeaconAccuracy(m, m, BeaconRule::kDirect, 1.0);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->overall, 1.0);
  EXPECT_EQ(r->yes_accuracy, 1.0);
  EXPECT_EQ(r->no_accuracy, 1.0);
  EXPECT_EQ(r->matches, 3);
  EXPECT_EQ(r->num_yes, 1);
  EXPECT_EQ(r->num_no, 2);
}

TEST(BeaconAccuracyTest, FlipCountsAsWrong) {
  const GenotypeMatrix orig = Matrix({{0, 1, 0}, {0, 2, 0}});
  const GenotypeMatrix pert = Matrix({{0, 1, 1}, {0, 0, 0}});
  auto r = BeaconAccuracy(orig, pert, BeaconRule::kDirect, 1.0);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->overall, 2.0 / 3);
  EXPECT_DOUBLE_EQ(r->no_accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r->yes_accuracy, 1.0);
  // overall * l = yes_acc * #yes + no_acc * #no
  EXPECT_DOUBLE_EQ(r->overall * 3,
                   r->yes_accuracy * r->num_yes + r->no_accuracy * r->num_no);
}

TEST(BeaconAccuracyTest, DimensionMismatch) {
  EXPECT_FALSE(
      BeaconAccuracy(Matrix({{0, 1}}), Matrix({{0}}), BeaconRule::kDirect, 1.0)
          .ok());
}

TEST(BeaconRuleTest, Parse) {
  EXPECT_EQ(*ParseBeaconRule("direct"), BeaconRule::kDirect);
  EXPECT_EQ(*ParseBeaconRule("rr-estimated"), BeaconRule::kRrEstimated);
  EXPECT_FALSE(ParseBeaconRule("other").ok());
}

TEST(ExpectedUtilityTest, HandValues) {
  const PerturbParams pq = RrParamsUnchecked(std::log(2.0));
  const double pa = pq.p / (pq.p + pq.q);
  const double qa = pq.q / (pq.p + pq.q);
  EXPECT_DOUBLE_EQ(
      PerSnpExpectedUtility(SnpValue::kOne, ProbabilityTriple{0, pa, qa}), 1.0);
  EXPECT_NEAR(PerSnpExpectedUtility(SnpValue::kZero,
                                    ProbabilityTriple{pq.p, pq.q, pq.q}),
              0.5, 1e-12);
  EXPECT_EQ(PerSnpExpectedUtility(SnpValue::kTwo, ProbabilityTriple{1, 0, 0}),
            0.0);
}

TEST(ExpectedUtilityTest, OneExactlyOnEquivalenceClass) {
  for (SnpValue x : kAllSnpValues) {
    for (unsigned mask = 0; mask < 8; ++mask) {
      for (DistributionMode mode :
           {DistributionMode::kPlain, DistributionMode::kBeacon}) {
        MechanismConfig c;
        c.epsilon = 0.9;
        c.mode = mode;
        const auto d = SharingDistributionFor(x, StateSet(mask), c);
        const double u = PerSnpExpectedUtility(x, d);
        EXPECT_GE(u, 0.0);
        EXPECT_LE(u, 1.0 + 1e-15);
        bool within = true;
        for (SnpValue y : kAllSnpValues) {
          if (d.probs[Index(y)] > 0 && !BeaconEquivalent(x, y)) within = false;
        }
        EXPECT_EQ(within, std::abs(u - 1.0) < 1e-12);
      }
    }
  }
}

// Desk check: over every assignment of sharing distributions
// to a tiny cohort, the expected direct-beacon accuracy never exceeds the
// accuracy reached when each individual maximizes its own per-SNP utility.
double ExpectedDirectAccuracy(std::span<const SnpValue> column,
                              const std::vector<ProbabilityTriple>& dists) {
  double all_zero = 1.0;
  for (const ProbabilityTriple& d : dists) all_zero *= d[0];
  return BeaconResponse(column) == BeaconAnswer::kYes ? 1.0 - all_zero
                                                      : all_zero;
}

TEST(ExpectedUtilityTest, PointwiseMaximumBoundsEnumeratedAccuracy) {
  const GenotypeMatrix m = Matrix({{0, 1, 2}, {0, 0, 1}, {0, 2, 0}});
  for (double eps : {0.5, 1.0, 2.0}) {
    // Candidate distributions: every case-table branch in both modes.
    std::vector<std::vector<ProbabilityTriple>> candidates(3);
    for (SnpValue x : kAllSnpValues) {
      for (DistributionMode mode :
           {DistributionMode::kPlain, DistributionMode::kBeacon}) {
        for (unsigned mask = 0; mask < 8; ++mask) {
          MechanismConfig c;
          c.epsilon = eps;
          c.mode = mode;
          candidates[Index(x)].push_back(
              SharingDistributionFor(x, StateSet(mask), c).probs);
        }
      }
    }
    for (int i = 0; i < m.num_snps(); ++i) {
      const SnpRow column = m.Column(i);
      std::vector<ProbabilityTriple> pointwise;
      for (SnpValue x : column) {
        const auto& cands = candidates[Index(x)];
        pointwise.push_back(*std::max_element(
            cands.begin(), cands.end(), [&](const auto& a, const auto& b) {
              return PerSnpExpectedUtility(x, a) < PerSnpExpectedUtility(x, b);
            }));
      }
      const double bound = ExpectedDirectAccuracy(column, pointwise);
      const size_t k = candidates[0].size();
      for (size_t a = 0; a < k; ++a) {
        for (size_t b = 0; b < k; ++b) {
          for (size_t c = 0; c < k; ++c) {
            const std::vector<ProbabilityTriple> chosen = {
                candidates[Index(column[0])][a],
                candidates[Index(column[1])][b],
                candidates[Index(column[2])][c]};
            ASSERT_LE(ExpectedDirectAccuracy(column, chosen), bound + 1e-12);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace dldp
