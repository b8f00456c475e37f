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

// dldp: command-line front end for the sharing library.
//
// Exit status: 0 on success, 2 on usage errors, 1 on anything else (I/O,
// malformed input files, capacity limits).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dldp/attack.h"
#include "dldp/beacon.h"
#include "dldp/correlation.h"
#include "dldp/experiment.h"
#include "dldp/genotype.h"
#include "dldp/kinship.h"
#include "dldp/leakage.h"
#include "dldp/mechanism.h"
#include "dldp/ordering.h"
#include "dldp/random.h"
#include "dldp/randomized_response.h"
#include "dldp/synthetic.h"

namespace dldp {
namespace {

constexpr int kUsageError = 2;

std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return absl::StrFormat("%.10g", v);
}

// Thrown out of a command body; main() turns it into a diagnostic.
struct CommandFailure {
  absl::Status status;
};

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) throw CommandFailure{value.status()};
  return *std::move(value);
}

void Check(const absl::Status& status) {
  if (!status.ok()) throw CommandFailure{status};
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw CommandFailure{
        absl::UnavailableError(absl::StrCat("cannot write ", path))};
  return out;
}

const std::vector<std::string> kModes = {"plain", "beacon"};
const std::vector<std::string> kOrders = {"random", "greedy", "optimal"};

struct MechanismFlags {
  double epsilon = 1.0;
  double tau_hat = 0.02;
  double gamma_hat = 0.03;
  std::string mode = "beacon";

  void Register(CLI::App* cmd) {
    cmd->add_option("--epsilon", epsilon, "Privacy budget per SNP")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--tau-hat", tau_hat, "Mechanism elimination threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--gamma-hat", gamma_hat,
                    "Mechanism fraction of inconsistent SNPs")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--mode", mode, "Sharing distribution mode")
        ->check(CLI::IsMember(kModes))
        ->capture_default_str();
  }

  MechanismConfig Config() const {
    MechanismConfig c;
    c.epsilon = epsilon;
    c.tau_hat = tau_hat;
    c.gamma_hat = gamma_hat;
    c.mode = Unwrap(ParseDistributionMode(mode));
    return c;
  }
};

CorrelationModel LoadOrComputeCorrelation(const std::string& corr_path,
                                          const GenotypeMatrix& data) {
  if (!corr_path.empty()) return Unwrap(ReadCorrelationFile(corr_path));
  return Unwrap(ComputeCorrelationModel(data));
}

// gen ----------------------------------------------------------------------

void AddGen(CLI::App& app) {
  struct Flags {
    int individuals = 150;
    int snps = 200;
    double maf_lo = 0.01;
    double maf_hi = 0.1;
    double chain = 0.5;
    uint64_t seed = 1;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* cmd = app.add_subcommand("gen", "Generate a synthetic population");
  cmd->add_option("--individuals,-n", f->individuals)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--snps,-l", f->snps)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--maf-lo", f->maf_lo)->capture_default_str();
  cmd->add_option("--maf-hi", f->maf_hi)->capture_default_str();
  cmd->add_option("--chain-strength", f->chain,
                  "Probability of copying the previous SNP's value")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--seed", f->seed)->capture_default_str();
  cmd->add_option("--out,-o", f->out, "Genotype file")->required();
  cmd->callback([f] {
    SyntheticSpec spec;
    spec.num_individuals = f->individuals;
    spec.num_snps = f->snps;
    spec.marginal_maf =
        UniformMafs(f->snps, f->maf_lo, f->maf_hi, DeriveSeed(f->seed, {0}));
    spec.chain_strength = f->chain;
    spec.seed = DeriveSeed(f->seed, {1});
    const GenotypeMatrix m = Unwrap(GenerateSyntheticPopulation(spec));
    Check(WriteGenotypeFile(m, f->out));
  });
}

// corr ---------------------------------------------------------------------

void AddCorr(CLI::App& app) {
  struct Flags {
    std::string in;
    double pseudo = 0.0;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* cmd =
      app.add_subcommand("corr", "Estimate pairwise conditionals from data");
  cmd->add_option("--in,-i", f->in, "Genotype file")->required();
  cmd->add_option("--pseudo-count", f->pseudo)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--out,-o", f->out, "Correlation JSON")->required();
  cmd->callback([f] {
    const GenotypeMatrix m = Unwrap(ReadGenotypeFile(f->in));
    const CorrelationModel model =
        Unwrap(ComputeCorrelationModel(m, f->pseudo));
    Check(WriteCorrelationFile(model, f->out));
  });
}

// perturb ------------------------------------------------------------------

void AddPerturb(CLI::App& app) {
  struct Flags {
    std::string in;
    std::string corr;
    std::string mechanism = "proposed";
    std::string order = "random";
    MechanismFlags mech;
    uint64_t seed = 1;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* cmd = app.add_subcommand("perturb", "Share a cohort");
  cmd->add_option("--in,-i", f->in, "Genotype file")->required();
  cmd->add_option("--corr", f->corr,
                  "Correlation JSON (estimated from --in when absent)");
  cmd->add_option("--mechanism", f->mechanism)
      ->check(CLI::IsMember({"rr", "proposed"}))
      ->capture_default_str();
  cmd->add_option("--order", f->order)
      ->check(CLI::IsMember(kOrders))
      ->capture_default_str();
  f->mech.Register(cmd);
  cmd->add_option("--seed", f->seed)->capture_default_str();
  cmd->add_option("--out,-o", f->out, "Shared genotype file")->required();
  cmd->callback([f] {
    const GenotypeMatrix data = Unwrap(ReadGenotypeFile(f->in));
    const MechanismConfig mech = f->mech.Config();
    Check(ValidateMechanismConfig(mech));
    if (f->mechanism == "rr") {
      const GenotypeMatrix shared =
          Unwrap(RrPerturb(data, mech.epsilon, DeriveSeed(f->seed, {0})));
      Check(WriteGenotypeFile(shared, f->out));
      return;
    }
    const CorrelationModel corr = LoadOrComputeCorrelation(f->corr, data);
    const CohortShares shared = Unwrap(ShareCohort(
        data, corr, mech, Unwrap(ParseOrderStrategy(f->order)), f->seed));
    Check(WriteGenotypeFile(shared.values, f->out));
    std::cout << "eliminated_fraction "
              << Num(static_cast<double>(shared.eliminated_shares) /
                     (static_cast<double>(data.num_individuals()) *
                      data.num_snps()))
              << "\n";
  });
}

// attack -------------------------------------------------------------------

void AddAttack(CLI::App& app) {
  struct Flags {
    std::string received;
    std::string corr;
    std::string truth;
    double epsilon = 1.0;
    double tau = 0.02;
    double gamma = 0.03;
    bool knows_params = false;
    double tau_hat = 0.02;
    double gamma_hat = 0.03;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* cmd =
      app.add_subcommand("attack", "Run the correlation attack on shares");
  cmd->add_option("--received,-i", f->received, "Shared genotype file")
      ->required();
  cmd->add_option("--corr", f->corr, "Correlation JSON")->required();
  cmd->add_option("--truth", f->truth,
                  "Original genotypes; prints the estimation error");
  cmd->add_option("--epsilon", f->epsilon, "Budget the attacker assumes")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--tau", f->tau)->capture_default_str();
  cmd->add_option("--gamma", f->gamma)->capture_default_str();
  cmd->add_flag("--knows-params", f->knows_params,
                "Attacker also knows the mechanism's tau-hat and gamma-hat");
  cmd->add_option("--tau-hat", f->tau_hat)->capture_default_str();
  cmd->add_option("--gamma-hat", f->gamma_hat)->capture_default_str();
  cmd->add_option("--out,-o", f->out, "Belief CSV");
  cmd->callback([f] {
    const GenotypeMatrix received = Unwrap(ReadGenotypeFile(f->received));
    const CorrelationModel corr = Unwrap(ReadCorrelationFile(f->corr));
    AttackConfig cfg;
    cfg.tau = f->tau;
    cfg.gamma = f->gamma;
    cfg.epsilon_known = f->epsilon;
    if (f->knows_params) {
      cfg.mechanism_params = KnownMechanismParams{f->tau_hat, f->gamma_hat};
    }
    Check(ValidateAttackConfig(cfg));
    std::optional<GenotypeMatrix> truth;
    if (!f->truth.empty()) {
      truth = Unwrap(ReadGenotypeFile(f->truth));
      if (truth->num_individuals() != received.num_individuals() ||
          truth->num_snps() != received.num_snps()) {
        Check(absl::InvalidArgumentError(
            "--truth and --received have different dimensions"));
      }
    }
    std::optional<std::ofstream> out;
    if (!f->out.empty()) {
      out = OpenOutput(f->out);
      *out << "individual,snp,received,p0,p1,p2,fallback\n";
    }
    double total_error = 0.0;
    for (int r = 0; r < received.num_individuals(); ++r) {
      const AttackerBelief belief = Unwrap(Attack(received.Row(r), corr, cfg));
      if (out) {
        for (int k = 0; k < received.num_snps(); ++k) {
          const ProbabilityTriple& p = belief.probs[k];
          *out << r << ',' << k << ',' << Index(received.at(r, k)) << ','
               << Num(p[0]) << ',' << Num(p[1]) << ',' << Num(p[2]) << ','
               << (belief.fallback[k] ? 1 : 0) << '\n';
        }
      }
      if (truth) {
        total_error += Unwrap(EstimationError(belief, truth->Row(r)));
      }
    }
    if (truth) {
      std::cout << "estimation_error "
                << Num(total_error / received.num_individuals()) << "\n";
    }
  });
}

// eval ---------------------------------------------------------------------

void AddEval(CLI::App& app) {
  struct Flags {
    std::string truth;
    std::string shared;
    std::string rule = "direct";
    double epsilon = 1.0;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* cmd = app.add_subcommand("eval", "Beacon accuracy of shared data");
  cmd->add_option("--truth", f->truth, "Original genotype file")->required();
  cmd->add_option("--shared", f->shared, "Shared genotype file")->required();
  cmd->add_option("--rule", f->rule, "How the beacon answers")
      ->check(CLI::IsMember({"direct", "rr-estimated"}))
      ->capture_default_str();
  cmd->add_option("--epsilon", f->epsilon,
                  "Budget used by the rr-estimated rule")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->callback([f] {
    const GenotypeMatrix truth = Unwrap(ReadGenotypeFile(f->truth));
    const GenotypeMatrix shared = Unwrap(ReadGenotypeFile(f->shared));
    const AccuracyReport r = Unwrap(BeaconAccuracy(
        truth, shared, Unwrap(ParseBeaconRule(f->rule)), f->epsilon));
    std::cout << "accuracy " << Num(r.overall) << "\n"
              << "yes_accuracy " << Num(r.yes_accuracy) << "\n"
              << "no_accuracy " << Num(r.no_accuracy) << "\n"
              << "matches " << r.matches << "\n"
              << "queries " << r.num_queries << "\n";
  });
}

// order --------------------------------------------------------------------

void AddOrder(CLI::App& app) {
  struct Flags {
    std::string in;
    std::string corr;
    int individual = 0;
    std::string strategy = "greedy";
    MechanismFlags mech;
    int mc_trials = 0;
    uint64_t seed = 1;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* cmd =
      app.add_subcommand("order", "Pick a processing order for one individual");
  cmd->add_option("--in,-i", f->in, "Genotype file")->required();
  cmd->add_option("--corr", f->corr,
                  "Correlation JSON (estimated from --in when absent)");
  cmd->add_option("--individual", f->individual, "Row of --in to order")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--strategy", f->strategy)
      ->check(CLI::IsMember({"random", "greedy", "optimal", "brute-force"}))
      ->capture_default_str();
  f->mech.Register(cmd);
  cmd->add_option("--mc-trials", f->mc_trials,
                  "Estimate utility by simulation instead of exactly")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f->seed)->capture_default_str();
  cmd->callback([f] {
    const GenotypeMatrix data = Unwrap(ReadGenotypeFile(f->in));
    if (f->individual >= data.num_individuals()) {
      Check(absl::OutOfRangeError(
          absl::StrCat("--individual ", f->individual, " but the file has ",
                       data.num_individuals(), " rows")));
    }
    const CorrelationModel corr = LoadOrComputeCorrelation(f->corr, data);
    const MechanismConfig mech = f->mech.Config();
    Check(ValidateMechanismConfig(mech));
    const auto row = data.Row(f->individual);
    // Same per-individual seed as perturb.
    const uint64_t rseed =
        DeriveSeed(f->seed, {1, static_cast<uint64_t>(f->individual)});

    std::optional<double> optimal_value;
    ProcessingOrder order = ProcessingOrder::Identity(0);
    if (f->strategy == "random") {
      order = RandomOrder(data.num_snps(), DeriveSeed(rseed, {2}));
    } else if (f->strategy == "greedy") {
      order = Unwrap(GreedyOrder(row, corr, mech, rseed));
    } else if (f->strategy == "optimal") {
      const OptimalOrderResult r =
          Unwrap(OptimalOrderValueIteration(row, corr, mech));
      order = Unwrap(r.policy.Realize(row, corr, mech, rseed));
      optimal_value = r.expected_utility;
    } else {
      order = Unwrap(BruteForceOrder(row, corr, mech)).order;
    }
    std::cout << "order " << absl::StrJoin(order.perm(), " ") << "\n";
    if (optimal_value.has_value()) {
      std::cout << "policy_expected_utility " << Num(*optimal_value) << "\n";
    }
    const UtilityMethod method =
        f->mc_trials > 0 ? UtilityMethod::MonteCarlo(f->mc_trials, rseed)
                         : UtilityMethod::Exact();
    auto u = ExpectedUtilityOfOrder(row, order, corr, mech, method);
    if (u.ok()) {
      std::cout << "order_expected_utility " << Num(u->mean) << "\n";
      if (f->mc_trials > 0) {
        std::cout << "standard_error " << Num(u->standard_error) << "\n";
      }
    } else if (u.status().code() == absl::StatusCode::kResourceExhausted) {
      std::cerr << "note: " << u.status().message() << "\n";
    } else {
      Check(u.status());
    }
  });
}

// kinship ------------------------------------------------------------------

void AddKinship(CLI::App& app) {
  CLI::App* cmd =
      app.add_subcommand("kinship", "Budgets for relatives of a donor");
  cmd->require_subcommand(1);

  auto one = std::make_shared<double>(1.0);
  CLI::App* one_child = cmd->add_subcommand(
      "one-child", "Largest child budget keeping the parent within budget");
  one_child->add_option("--parent-budget", *one)
      ->check(CLI::NonNegativeNumber)
      ->required();
  one_child->callback(
      [one] { std::cout << Num(MaxBudgetOneChild(*one)) << "\n"; });

  auto two = std::make_shared<double>(1.0);
  CLI::App* two_children = cmd->add_subcommand(
      "two-children",
      "Largest budget for a second child after a first child shared at the "
      "parent's budget");
  two_children->add_option("--parent-budget", *two)
      ->check(CLI::NonNegativeNumber)
      ->required();
  two_children->callback(
      [two] { std::cout << Num(Unwrap(MaxBudgetSecondChild(*two))) << "\n"; });

  struct IndirectFlags {
    double child_budget = 1.0;
    int children = 1;
    int value = 0;
  };
  auto ind = std::make_shared<IndirectFlags>();
  CLI::App* indirect = cmd->add_subcommand(
      "indirect", "Budget a parent effectively spends when children share");
  indirect->add_option("--child-budget", ind->child_budget)
      ->check(CLI::NonNegativeNumber)
      ->required();
  indirect->add_option("--children", ind->children)
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  indirect
      ->add_option("--value", ind->value,
                   "Shared value (one child; two children assume 0, 0)")
      ->check(CLI::Range(0, 2))
      ->capture_default_str();
  indirect->callback([ind] {
    const double v =
        ind->children == 1
            ? IndirectBudgetOneChild(ind->child_budget, SnpValueOf(ind->value))
            : IndirectBudgetTwoChildren(ind->child_budget);
    std::cout << Num(v) << "\n";
  });

  struct FamilyFlags {
    std::string path;
    std::vector<int> snps;
    std::string next;
    double own = std::numeric_limits<double>::infinity();
  };
  auto fam = std::make_shared<FamilyFlags>();
  CLI::App* family = cmd->add_subcommand(
      "family", "Largest budget for the next sharer in a family file");
  family->add_option("--family", fam->path, "Family JSON")->required();
  family->add_option("--snp", fam->snps, "SNP index (repeatable)")->required();
  family->add_option("--next", fam->next, "Member about to share")->required();
  family->add_option("--own-budget", fam->own,
                     "The sharer's own budget (defaults to the family file)");
  family->callback([fam] {
    const FamilyState state = Unwrap(ReadFamilyFile(fam->path));
    std::vector<double> maxima;
    for (int snp : fam->snps) {
      const double m = Unwrap(MaxBudgetGeneral(state, snp, fam->next));
      std::cout << "snp " << snp << " " << Num(m) << "\n";
      maxima.push_back(m);
    }
    double own = fam->own;
    if (std::isinf(own)) {
      const FamilyMember* member = state.Find(fam->next);
      if (member != nullptr) own = member->budget;
    }
    std::cout << "budget " << Num(Unwrap(SelectDonorBudget(maxima, own)))
              << "\n";
  });
}

// leakage ------------------------------------------------------------------

void AddLeakage(CLI::App& app) {
  auto q = std::make_shared<LeakageQuery>();
  CLI::App* cmd =
      app.add_subcommand("leakage", "Upper bound on an attacker's posterior");
  cmd->add_option("--zeta", q->zeta, "Prior odds between two values")
      ->check(CLI::PositiveNumber)
      ->required();
  cmd->add_option("--epsilon", q->epsilon)
      ->check(CLI::NonNegativeNumber)
      ->required();
  cmd->callback(
      [q] { std::cout << Num(Unwrap(LeakageUpperBound(*q))) << "\n"; });
}

// experiment ---------------------------------------------------------------

void AddExperiment(CLI::App& app) {
  struct Flags {
    ExperimentConfig config;
    std::vector<double> grid;
    std::string mode = "beacon";
    std::string order = "random";
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  ExperimentConfig& c = f->config;
  CLI::App* cmd = app.add_subcommand(
      "experiment", "Compare RR and the proposed mechanism over a budget grid");
  cmd->add_option("--dataset", c.dataset_path,
                  "Genotype file (synthetic data when absent)");
  cmd->add_option("--individuals,-n", c.synthetic.num_individuals)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--snps,-l", c.synthetic.num_snps)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--maf-lo", c.synthetic.maf_lo)->capture_default_str();
  cmd->add_option("--maf-hi", c.synthetic.maf_hi)->capture_default_str();
  cmd->add_option("--chain-strength", c.synthetic.chain_strength)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--epsilon-grid", f->grid, "Comma-separated budgets")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tau-hat", c.tau_hat)->capture_default_str();
  cmd->add_option("--gamma-hat", c.gamma_hat)->capture_default_str();
  cmd->add_option("--mode", f->mode)
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
  cmd->add_option("--tau", c.tau)->capture_default_str();
  cmd->add_option("--gamma", c.gamma)->capture_default_str();
  cmd->add_flag("--knows-params", c.attacker_knows_params,
                "Attacker also knows tau-hat and gamma-hat");
  cmd->add_option("--order", f->order)
      ->check(CLI::IsMember(kOrders))
      ->capture_default_str();
  cmd->add_option("--trials", c.trials)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--jobs", c.jobs)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", c.seed)->capture_default_str();
  cmd->add_option("--out,-o", f->out, "Output directory")->required();
  cmd->callback([f] {
    ExperimentConfig config = f->config;
    if (!f->grid.empty()) config.epsilons = f->grid;
    config.mode = Unwrap(ParseDistributionMode(f->mode));
    config.order = Unwrap(ParseOrderStrategy(f->order));
    Check(ValidateExperimentConfig(config));
    const ExperimentResult result = Unwrap(RunExperiment(config));
    Check(WriteExperimentOutputs(result, f->out));
    std::cout << "wrote " << result.rows.size() << " rows to " << f->out
              << "\n";
  });
}

}  // namespace
}  // namespace dldp

int main(int argc, char** argv) {
  CLI::App app{"Correlation-aware local differential privacy for genomes",
               "dldp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dldp 0.1.0");
  dldp::AddGen(app);
  dldp::AddCorr(app);
  dldp::AddPerturb(app);
  dldp::AddAttack(app);
  dldp::AddEval(app);
  dldp::AddOrder(app);
  dldp::AddKinship(app);
  dldp::AddLeakage(app);
  dldp::AddExperiment(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dldp::kUsageError;
  } catch (const dldp::CommandFailure& failure) {
    std::cerr << "dldp: " << failure.status.message() << "\n";
    return 1;
  }
  return 0;
}
