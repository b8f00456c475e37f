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

#include "dldp/experiment.h"

#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "dldp/correlation.h"
#include "dldp/mechanism.h"
#include "dldp/ordering.h"
#include "dldp/random.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dldp {
namespace {

ExperimentConfig SmallConfig() {
  ExperimentConfig c;
  c.synthetic.num_individuals = 20;
  c.synthetic.num_snps = 15;
  c.epsilons = {0.5, 2.0};
  c.trials = 3;
  c.seed = 17;
  return c;
}

TEST(ExperimentTest, Validation) {
  ExperimentConfig c = SmallConfig();
  EXPECT_TRUE(ValidateExperimentConfig(c).ok());
  c.epsilons = {0.0};
  EXPECT_FALSE(ValidateExperimentConfig(c).ok());
  c = SmallConfig();
  c.trials = 0;
  EXPECT_FALSE(ValidateExperimentConfig(c).ok());
  c = SmallConfig();
  c.epsilons.clear();
  EXPECT_FALSE(ValidateExperimentConfig(c).ok());
  EXPECT_TRUE(ParseOrderStrategy("greedy").ok());
  EXPECT_FALSE(ParseOrderStrategy("best").ok());
}

TEST(ExperimentTest, SingleCell) {
  ExperimentConfig c = SmallConfig();
  c.epsilons = {1.0};
  c.trials = 1;
  auto result = RunExperiment(c);
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->rows.size(), 1u);
  ASSERT_EQ(result->summary.size(), 1u);
  const TrialResult& r = result->rows[0];
  EXPECT_EQ(r.num_individuals, 20);
  EXPECT_EQ(r.num_snps, 15);
  for (double v : {r.accuracy_rr, r.accuracy_proposed,
                   r.accuracy_rr_postprocess, r.eliminated_fraction}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  for (double v : {r.error_rr, r.error_rr_attack, r.error_proposed_attack}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 2.0);
  }
  // One trial: the mean is the value and the spread is zero.
  const auto values = MetricValues(r);
  const SummaryRow& s = result->summary[0];
  ASSERT_EQ(s.metrics.size(), values.size());
  for (size_t m = 0; m < values.size(); ++m) {
    EXPECT_DOUBLE_EQ(s.metrics[m].mean, values[m]);
    EXPECT_EQ(s.metrics[m].standard_error, 0.0);
  }
}

TEST(ExperimentTest, SummaryWithinRange) {
  auto result = RunExperiment(SmallConfig());
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->rows.size(), 6u);
  ASSERT_EQ(result->summary.size(), 2u);
  EXPECT_EQ(result->rows[0].epsilon, 0.5);
  EXPECT_EQ(result->rows[3].epsilon, 2.0);
  for (const SummaryRow& s : result->summary) {
    EXPECT_EQ(s.trials, 3);
    for (const MetricSummary& m : s.metrics) {
      EXPECT_LE(m.min, m.mean + 1e-12);
      EXPECT_GE(m.max, m.mean - 1e-12);
      EXPECT_GE(m.standard_error, 0.0);
    }
  }
}

TEST(ExperimentTest, DeterministicAcrossJobs) {
  ExperimentConfig c = SmallConfig();
  auto serial = RunExperiment(c);
  c.jobs = 3;
  auto parallel = RunExperiment(c);
  ASSERT_TRUE(serial.ok());
  ASSERT_TRUE(parallel.ok());
  std::ostringstream a, b;
  WriteDetailCsv(serial->rows, a);
  WriteDetailCsv(parallel->rows, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(ExperimentTest, AddingTrialsKeepsExistingRows) {
  ExperimentConfig c = SmallConfig();
  c.trials = 1;
  auto one = RunExperiment(c);
  c.trials = 2;
  auto two = RunExperiment(c);
  ASSERT_TRUE(one.ok());
  ASSERT_TRUE(two.ok());
  EXPECT_EQ(MetricValues(one->rows[0]), MetricValues(two->rows[0]));
  EXPECT_EQ(MetricValues(one->rows[1]), MetricValues(two->rows[2]));
}

TEST(ExperimentTest, CsvShape) {
  auto result = RunExperiment(SmallConfig());
  ASSERT_TRUE(result.ok());
  std::ostringstream detail, summary;
  WriteDetailCsv(result->rows, detail);
  WriteSummaryCsv(result->summary, summary);
  std::vector<std::string> lines =
      absl::StrSplit(detail.str(), '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_THAT(lines[0], ::testing::StartsWith("epsilon,trial,n,l,"));
  const size_t columns = 4 + MetricNames().size();
  for (const std::string& line : lines) {
    EXPECT_EQ(std::vector<std::string>(absl::StrSplit(line, ',')).size(),
              columns);
  }
  lines = absl::StrSplit(summary.str(), '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_THAT(lines[0], ::testing::StartsWith("epsilon,trials,"));
  for (const std::string& line : lines) {
    EXPECT_EQ(std::vector<std::string>(absl::StrSplit(line, ',')).size(),
              2 + 2 * MetricNames().size());
  }
}

TEST(ShareCohortTest, MatchesPerIndividualSequences) {
  const GenotypeMatrix data =
      testing::Matrix({{0, 0, 1, 2}, {1, 1, 0, 0}, {2, 2, 2, 0}});
  const CorrelationModel corr = *ComputeCorrelationModel(data);
  MechanismConfig config;
  config.gamma_hat = 0.3;
  auto shared = ShareCohort(data, corr, config, OrderStrategy::kRandom, 44);
  ASSERT_TRUE(shared.ok()) << shared.status();
  int64_t eliminated = 0;
  for (int r = 0; r < 3; ++r) {
    const uint64_t rseed = DeriveSeed(44, {1, static_cast<uint64_t>(r)});
    const ProcessingOrder order = RandomOrder(4, DeriveSeed(rseed, {2}));
    auto seq = PerturbSequence(data.Row(r), order, corr, config, rseed);
    ASSERT_TRUE(seq.ok());
    for (int k = 0; k < 4; ++k)
      EXPECT_EQ(shared->values.at(r, k), seq->values[k]);
    for (const auto& o : seq->outcomes) eliminated += !o.eliminated.empty();
  }
  EXPECT_EQ(shared->eliminated_shares, eliminated);
}

TEST(ShareCohortTest, RejectsMismatchedModel) {
  const GenotypeMatrix data = testing::Matrix({{0, 1}, {1, 0}});
  EXPECT_FALSE(ShareCohort(data, testing::Uncorrelated(3), MechanismConfig{},
                           OrderStrategy::kGreedy, 1)
                   .ok());
}

TEST(ExperimentTest, MissingDatasetFails) {
  ExperimentConfig c = SmallConfig();
  c.dataset_path = "/nonexistent/genotypes.txt";
  EXPECT_FALSE(RunExperiment(c).ok());
}

}  // namespace
}  // namespace dldp
