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

#ifndef DLDP_EXPERIMENT_H_
#define DLDP_EXPERIMENT_H_

// Comparison harness: plain RR against the correlation-aware mechanism, on
// attacker estimation error and beacon accuracy, over a grid of budgets.
//
// Seeds. Everything derives from the master seed:
//   data(trial)             = DeriveSeed(master, {0, trial})
//   perturbation(eps,trial) = DeriveSeed(master, {1, trial, TagOf(eps)})
// and inside a perturbation seed s, RR uses DeriveSeed(s, {0}) and
// individual r of the proposed mechanism uses DeriveSeed(s, {1, r}).
// Adding trials or budgets never changes existing rows.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dldp/correlation.h"
#include "dldp/genotype.h"
#include "dldp/mechanism.h"

namespace dldp {

enum class OrderStrategy { kRandom, kGreedy, kOptimal };

absl::StatusOr<OrderStrategy> ParseOrderStrategy(std::string_view name);
std::string_view OrderStrategyName(OrderStrategy strategy);

struct CohortShares {
  GenotypeMatrix values;
  // Shares drawn with at least one state eliminated.
  int64_t eliminated_shares = 0;
};

// Shares every individual's row through the mechanism. Individual r uses
// seed DeriveSeed(seed, {1, r}); a random order comes from
// DeriveSeed(that, {2}).
absl::StatusOr<CohortShares> ShareCohort(const GenotypeMatrix& data,
                                         const CorrelationModel& corr,
                                         const MechanismConfig& config,
                                         OrderStrategy strategy, uint64_t seed);

// Defaults give rare variants with moderate chaining, where eliminations are
// frequent and beacon queries are not trivially Yes.
struct SyntheticSource {
  int num_individuals = 150;
  int num_snps = 200;
  double maf_lo = 0.01;
  double maf_hi = 0.1;
  double chain_strength = 0.5;
};

struct ExperimentConfig {
  // Genotype file; when empty, each trial draws a synthetic population.
  std::string dataset_path;
  SyntheticSource synthetic;
  std::vector<double> epsilons = {1.0};
  double tau_hat = 0.02;
  double gamma_hat = 0.03;
  DistributionMode mode = DistributionMode::kBeacon;
  double tau = 0.02;
  double gamma = 0.03;
  // Attacker also knows (tau_hat, gamma_hat).
  bool attacker_knows_params = false;
  OrderStrategy order = OrderStrategy::kRandom;
  int trials = 1;
  uint64_t seed = 1;
  int jobs = 1;
};

absl::Status ValidateExperimentConfig(const ExperimentConfig& config);

// One (epsilon, trial) cell. Errors are averaged over individuals.
struct TrialResult {
  double epsilon = 0.0;
  int trial = 0;
  int num_individuals = 0;
  int num_snps = 0;
  double error_rr = 0.0;
  double error_rr_attack = 0.0;
  double error_proposed_attack = 0.0;
  double accuracy_rr = 0.0;
  double accuracy_proposed = 0.0;
  double accuracy_rr_postprocess = 0.0;
  double accuracy_proposed_yes = 0.0;
  double accuracy_proposed_no = 0.0;
  // Fraction of proposed shares drawn with at least one state eliminated.
  double eliminated_fraction = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double standard_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SummaryRow {
  double epsilon = 0.0;
  int trials = 0;
  std::vector<MetricSummary> metrics;  // in MetricNames() order
};

// Metric columns shared by the detail and summary files.
const std::vector<std::string>& MetricNames();
std::vector<double> MetricValues(const TrialResult& row);

struct ExperimentResult {
  // Sorted by (epsilon grid position, trial).
  std::vector<TrialResult> rows;
  std::vector<SummaryRow> summary;
};

absl::StatusOr<TrialResult> RunTrial(const ExperimentConfig& config,
                                     double epsilon, int trial);

// Runs every cell, up to config.jobs at a time.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config);

std::vector<SummaryRow> Summarize(const std::vector<TrialResult>& rows,
                                  const std::vector<double>& epsilons);

// detail: epsilon,trial,n,l,<metrics...>
// summary: epsilon,trials,<metric>_mean,<metric>_se,... per metric
void WriteDetailCsv(const std::vector<TrialResult>& rows, std::ostream& out);
void WriteSummaryCsv(const std::vector<SummaryRow>& rows, std::ostream& out);

// Writes detail.csv and summary.csv under `dir`, creating it if needed.
absl::Status WriteExperimentOutputs(const ExperimentResult& result,
                                    const std::string& dir);

}  // namespace dldp

#endif  // DLDP_EXPERIMENT_H_
