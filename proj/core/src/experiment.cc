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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dldp/attack.h"
#include "dldp/beacon.h"
#include "dldp/correlation.h"
#include "dldp/genotype.h"
#include "dldp/ordering.h"
#include "dldp/random.h"
#include "dldp/randomized_response.h"
#include "dldp/synthetic.h"

namespace dldp {
namespace {

std::string Num(double v) { return absl::StrFormat("%.10g", v); }

absl::StatusOr<GenotypeMatrix> TrialData(const ExperimentConfig& config,
                                         int trial) {
  const SyntheticSource& src = config.synthetic;
  const uint64_t seed =
      DeriveSeed(config.seed, {0, static_cast<uint64_t>(trial)});
  SyntheticSpec spec;
  spec.num_individuals = src.num_individuals;
  spec.num_snps = src.num_snps;
  spec.marginal_maf =
      UniformMafs(src.num_snps, src.maf_lo, src.maf_hi, DeriveSeed(seed, {0}));
  spec.chain_strength = src.chain_strength;
  spec.seed = DeriveSeed(seed, {1});
  return GenerateSyntheticPopulation(spec);
}

absl::StatusOr<ProcessingOrder> OrderFor(OrderStrategy strategy,
                                         std::span<const SnpValue> row,
                                         const CorrelationModel& corr,
                                         const MechanismConfig& mech,
                                         uint64_t seed) {
  switch (strategy) {
    case OrderStrategy::kRandom:
      return RandomOrder(static_cast<int>(row.size()), DeriveSeed(seed, {2}));
    case OrderStrategy::kGreedy:
      return GreedyOrder(row, corr, mech, seed);
    case OrderStrategy::kOptimal: {
      auto solved = OptimalOrderValueIteration(row, corr, mech);
      if (!solved.ok()) return solved.status();
      return solved->policy.Realize(row, corr, mech, seed);
    }
  }
  return absl::InternalError("unknown order strategy");
}

absl::StatusOr<double> MeanError(const GenotypeMatrix& truth,
                                 const std::vector<AttackerBelief>& beliefs) {
  double total = 0.0;
  for (int r = 0; r < truth.num_individuals(); ++r) {
    auto e = EstimationError(beliefs[r], truth.Row(r));
    if (!e.ok()) return e.status();
    total += *e;
  }
  return total / truth.num_individuals();
}

absl::StatusOr<TrialResult> RunTrialOn(const ExperimentConfig& config,
                                       const GenotypeMatrix& data,
                                       double epsilon, int trial) {
  const int n = data.num_individuals();
  const int l = data.num_snps();
  auto corr = ComputeCorrelationModel(data);
  if (!corr.ok()) return corr.status();

  const uint64_t pseed = DeriveSeed(
      config.seed, {1, static_cast<uint64_t>(trial), TagOf(epsilon)});
  MechanismConfig mech;
  mech.epsilon = epsilon;
  mech.tau_hat = config.tau_hat;
  mech.gamma_hat = config.gamma_hat;
  mech.mode = config.mode;
  AttackConfig rr_attack;
  rr_attack.tau = config.tau;
  rr_attack.gamma = config.gamma;
  rr_attack.epsilon_known = epsilon;
  AttackConfig proposed_attack = rr_attack;
  if (config.attacker_knows_params) {
    proposed_attack.mechanism_params =
        KnownMechanismParams{config.tau_hat, config.gamma_hat};
  }

  auto rr = RrPerturb(data, epsilon, DeriveSeed(pseed, {0}));
  if (!rr.ok()) return rr.status();

  auto shared = ShareCohort(data, *corr, mech, config.order, pseed);
  if (!shared.ok()) return shared.status();
  const GenotypeMatrix& proposed = shared->values;

  std::vector<SnpValue> post_cells;
  post_cells.reserve(static_cast<size_t>(n) * l);
  std::vector<AttackerBelief> b_rr, b_rr_attack, b_proposed;
  for (int r = 0; r < n; ++r) {
    const std::span<const SnpValue> rr_row = rr->Row(r);
    b_rr.push_back(RrProfileBelief(rr_row, epsilon));
    auto a1 = Attack(rr_row, *corr, rr_attack);
    if (!a1.ok()) return a1.status();
    b_rr_attack.push_back(*std::move(a1));
    auto a2 = Attack(proposed.Row(r), *corr, proposed_attack);
    if (!a2.ok()) return a2.status();
    b_proposed.push_back(*std::move(a2));

    const SnpRow post = RrPostprocess(rr_row, *corr, config.tau, config.gamma);
    post_cells.insert(post_cells.end(), post.begin(), post.end());
  }
  auto post = GenotypeMatrix::Create(n, l, std::move(post_cells));
  if (!post.ok()) return post.status();

  TrialResult out;
  out.epsilon = epsilon;
  out.trial = trial;
  out.num_individuals = n;
  out.num_snps = l;
  auto e_rr = MeanError(data, b_rr);
  auto e_rr_attack = MeanError(data, b_rr_attack);
  auto e_proposed = MeanError(data, b_proposed);
  if (!e_rr.ok()) return e_rr.status();
  if (!e_rr_attack.ok()) return e_rr_attack.status();
  if (!e_proposed.ok()) return e_proposed.status();
  out.error_rr = *e_rr;
  out.error_rr_attack = *e_rr_attack;
  out.error_proposed_attack = *e_proposed;

  auto a_rr = BeaconAccuracy(data, *rr, BeaconRule::kRrEstimated, epsilon);
  auto a_proposed =
      BeaconAccuracy(data, proposed, BeaconRule::kDirect, epsilon);
  auto a_post = BeaconAccuracy(data, *post, BeaconRule::kRrEstimated, epsilon);
  if (!a_rr.ok()) return a_rr.status();
  if (!a_proposed.ok()) return a_proposed.status();
  if (!a_post.ok()) return a_post.status();
  out.accuracy_rr = a_rr->overall;
  out.accuracy_proposed = a_proposed->overall;
  out.accuracy_rr_postprocess = a_post->overall;
  out.accuracy_proposed_yes = a_proposed->yes_accuracy;
  out.accuracy_proposed_no = a_proposed->no_accuracy;
  out.eliminated_fraction = static_cast<double>(shared->eliminated_shares) /
                            (static_cast<double>(n) * l);
  return out;
}

// Runs fn(0..count-1) on up to `jobs` threads. Returns the first error by
// index, so the reported failure does not depend on scheduling.
absl::Status ParallelFor(int count, int jobs,
                         const std::function<absl::Status(int)>& fn) {
  std::vector<absl::Status> status(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) status[i] = fn(i);
  };
  const int threads = std::max(1, std::min(jobs, count));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const absl::Status& s : status) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<CohortShares> ShareCohort(const GenotypeMatrix& data,
                                         const CorrelationModel& corr,
                                         const MechanismConfig& config,
                                         OrderStrategy strategy,
                                         uint64_t seed) {
  if (corr.num_snps() != data.num_snps()) {
    return absl::InvalidArgumentError(
        absl::StrCat("correlation model covers ", corr.num_snps(),
                     " SNPs but the data has ", data.num_snps()));
  }
  const int n = data.num_individuals();
  const int l = data.num_snps();
  std::vector<SnpValue> cells;
  cells.reserve(static_cast<size_t>(n) * l);
  int64_t eliminated = 0;
  for (int r = 0; r < n; ++r) {
    const uint64_t rseed = DeriveSeed(seed, {1, static_cast<uint64_t>(r)});
    auto order = OrderFor(strategy, data.Row(r), corr, config, rseed);
    if (!order.ok()) return order.status();
    auto seq = PerturbSequence(data.Row(r), *order, corr, config, rseed);
    if (!seq.ok()) return seq.status();
    for (const EliminationOutcome& o : seq->outcomes) {
      eliminated += !o.eliminated.empty();
    }
    cells.insert(cells.end(), seq->values.begin(), seq->values.end());
  }
  auto values = GenotypeMatrix::Create(n, l, std::move(cells));
  if (!values.ok()) return values.status();
  return CohortShares{*std::move(values), eliminated};
}

absl::StatusOr<OrderStrategy> ParseOrderStrategy(std::string_view name) {
  if (name == "random") return OrderStrategy::kRandom;
  if (name == "greedy") return OrderStrategy::kGreedy;
  if (name == "optimal") return OrderStrategy::kOptimal;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown order '", std::string(name),
                   "' (expected random|greedy|optimal)"));
}

std::string_view OrderStrategyName(OrderStrategy strategy) {
  switch (strategy) {
    case OrderStrategy::kRandom:
      return "random";
    case OrderStrategy::kGreedy:
      return "greedy";
    case OrderStrategy::kOptimal:
      return "optimal";
  }
  return "?";
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& config) {
  if (config.epsilons.empty()) {
    return absl::InvalidArgumentError("epsilon grid is empty");
  }
  for (double e : config.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      return absl::InvalidArgumentError(
          absl::StrCat("grid epsilons must be finite and > 0; got ", e));
    }
  }
  if (config.trials < 1) {
    return absl::InvalidArgumentError("trials must be >= 1");
  }
  if (config.jobs < 1) return absl::InvalidArgumentError("jobs must be >= 1");
  MechanismConfig mech;
  mech.epsilon = config.epsilons.front();
  mech.tau_hat = config.tau_hat;
  mech.gamma_hat = config.gamma_hat;
  if (absl::Status s = ValidateMechanismConfig(mech); !s.ok()) return s;
  AttackConfig attack;
  attack.tau = config.tau;
  attack.gamma = config.gamma;
  attack.epsilon_known = config.epsilons.front();
  if (absl::Status s = ValidateAttackConfig(attack); !s.ok()) return s;
  if (config.dataset_path.empty()) {
    const SyntheticSource& src = config.synthetic;
    if (!(src.maf_lo > 0.0 && src.maf_lo <= src.maf_hi && src.maf_hi <= 0.5)) {
      return absl::InvalidArgumentError("need 0 < maf_lo <= maf_hi <= 0.5");
    }
    SyntheticSpec spec;
    spec.num_individuals = src.num_individuals;
    spec.num_snps = src.num_snps;
    spec.marginal_maf.assign(std::max(src.num_snps, 0), src.maf_hi);
    spec.chain_strength = src.chain_strength;
    if (absl::Status s = ValidateSyntheticSpec(spec); !s.ok()) return s;
  }
  return absl::OkStatus();
}

const std::vector<std::string>& MetricNames() {
  static const auto* names = new std::vector<std::string>{
      "error_rr",
      "error_rr_attack",
      "error_proposed_attack",
      "accuracy_rr",
      "accuracy_proposed",
      "accuracy_rr_postprocess",
      "accuracy_proposed_yes",
      "accuracy_proposed_no",
      "eliminated_fraction",
  };
  return *names;
}

std::vector<double> MetricValues(const TrialResult& row) {
  return {row.error_rr,
          row.error_rr_attack,
          row.error_proposed_attack,
          row.accuracy_rr,
          row.accuracy_proposed,
          row.accuracy_rr_postprocess,
          row.accuracy_proposed_yes,
          row.accuracy_proposed_no,
          row.eliminated_fraction};
}

absl::StatusOr<TrialResult> RunTrial(const ExperimentConfig& config,
                                     double epsilon, int trial) {
  if (absl::Status s = ValidateExperimentConfig(config); !s.ok()) return s;
  auto data = config.dataset_path.empty()
                  ? TrialData(config, trial)
                  : ReadGenotypeFile(config.dataset_path);
  if (!data.ok()) return data.status();
  return RunTrialOn(config, *data, epsilon, trial);
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config) {
  if (absl::Status s = ValidateExperimentConfig(config); !s.ok()) return s;
  std::optional<GenotypeMatrix> fixed;
  if (!config.dataset_path.empty()) {
    auto data = ReadGenotypeFile(config.dataset_path);
    if (!data.ok()) return data.status();
    fixed = *std::move(data);
  }
  const int num_eps = static_cast<int>(config.epsilons.size());
  const int cells = num_eps * config.trials;
  ExperimentResult result;
  result.rows.resize(cells);
  absl::Status status = ParallelFor(cells, config.jobs, [&](int c) {
    const int e = c / config.trials;
    const int trial = c % config.trials;
    absl::StatusOr<TrialResult> row;
    if (fixed.has_value()) {
      row = RunTrialOn(config, *fixed, config.epsilons[e], trial);
    } else {
      auto data = TrialData(config, trial);
      if (!data.ok()) return data.status();
      row = RunTrialOn(config, *data, config.epsilons[e], trial);
    }
    if (!row.ok()) return row.status();
    result.rows[c] = *row;
    return absl::OkStatus();
  });
  if (!status.ok()) return status;
  result.summary = Summarize(result.rows, config.epsilons);
  return result;
}

std::vector<SummaryRow> Summarize(const std::vector<TrialResult>& rows,
                                  const std::vector<double>& epsilons) {
  const size_t num_metrics = MetricNames().size();
  std::vector<SummaryRow> summary;
  for (double eps : epsilons) {
    std::vector<std::vector<double>> values(num_metrics);
    for (const TrialResult& row : rows) {
      if (row.epsilon != eps) continue;
      const std::vector<double> v = MetricValues(row);
      for (size_t m = 0; m < num_metrics; ++m) values[m].push_back(v[m]);
    }
    SummaryRow s;
    s.epsilon = eps;
    s.trials = static_cast<int>(values[0].size());
    for (const std::vector<double>& v : values) {
      MetricSummary ms;
      if (!v.empty()) {
        const double n = static_cast<double>(v.size());
        double sum = 0.0;
        for (double x : v) sum += x;
        ms.mean = sum / n;
        double ss = 0.0;
        for (double x : v) ss += (x - ms.mean) * (x - ms.mean);
        ms.standard_error = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        ms.min = *std::min_element(v.begin(), v.end());
        ms.max = *std::max_element(v.begin(), v.end());
      }
      s.metrics.push_back(ms);
    }
    summary.push_back(std::move(s));
  }
  return summary;
}

void WriteDetailCsv(const std::vector<TrialResult>& rows, std::ostream& out) {
  out << "epsilon,trial,n,l";
  for (const std::string& name : MetricNames()) out << ',' << name;
  out << '\n';
  for (const TrialResult& row : rows) {
    out << Num(row.epsilon) << ',' << row.trial << ',' << row.num_individuals
        << ',' << row.num_snps;
    for (double v : MetricValues(row)) out << ',' << Num(v);
    out << '\n';
  }
}

void WriteSummaryCsv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "epsilon,trials";
  for (const std::string& name : MetricNames()) {
    out << ',' << name << "_mean," << name << "_se";
  }
  out << '\n';
  for (const SummaryRow& row : rows) {
    out << Num(row.epsilon) << ',' << row.trials;
    for (const MetricSummary& m : row.metrics) {
      out << ',' << Num(m.mean) << ',' << Num(m.standard_error);
    }
    out << '\n';
  }
}

absl::Status WriteExperimentOutputs(const ExperimentResult& result,
                                    const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  const std::string detail =
      (std::filesystem::path(dir) / "detail.csv").string();
  const std::string summary =
      (std::filesystem::path(dir) / "summary.csv").string();
  std::ofstream d(detail);
  if (!d) return absl::UnavailableError(absl::StrCat("cannot write ", detail));
  WriteDetailCsv(result.rows, d);
  std::ofstream s(summary);
  if (!s) return absl::UnavailableError(absl::StrCat("cannot write ", summary));
  WriteSummaryCsv(result.summary, s);
  if (!d || !s) return absl::DataLossError("write failed under " + dir);
  return absl::OkStatus();
}

}  // namespace dldp
