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

#include "dldp/correlation.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace dldp {
namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
constexpr double kSumTolerance = 1e-9;

}  // namespace

absl::StatusOr<CorrelationModel> CorrelationModel::Create(
    int num_snps, std::vector<double> cond,
    std::vector<ProbabilityTriple> marginals) {
  if (num_snps < 1) return absl::InvalidArgumentError("l must be >= 1");
  const size_t l = static_cast<size_t>(num_snps);
  if (cond.size() != l * l * kNumStates * kNumStates) {
    return absl::InvalidArgumentError("cond table has the wrong size");
  }
  if (marginals.size() != l) {
    return absl::InvalidArgumentError("marginals has the wrong size");
  }
  CorrelationModel model;
  model.num_snps_ = num_snps;
  model.cond_ = std::move(cond);
  model.marginals_ = std::move(marginals);
  for (int i = 0; i < num_snps; ++i) {
    for (int k = 0; k < num_snps; ++k) {
      for (SnpValue b : kAllSnpValues) {
        const double* slice = &model.cond_[model.Offset(i, k, b)];
        if (i == k) {
          for (int a = 0; a < kNumStates; ++a)
            model.cond_[model.Offset(i, k, b) + a] = kUndefined;
          continue;
        }
        const int defined = !std::isnan(slice[0]) + !std::isnan(slice[1]) +
                            !std::isnan(slice[2]);
        if (defined == 0) continue;
        if (defined != kNumStates) {
          return absl::InvalidArgumentError(absl::StrCat(
              "partially defined conditional slice at i=", i, " k=", k));
        }
        const double sum = slice[0] + slice[1] + slice[2];
        if (std::abs(sum - 1.0) > kSumTolerance ||
            std::min({slice[0], slice[1], slice[2]}) < 0.0) {
          return absl::InvalidArgumentError(
              absl::StrCat("conditional slice at i=", i, " k=", k,
                           " b=", Index(b), " is not a distribution"));
        }
      }
    }
    const auto& m = model.marginals_[i];
    if (std::abs(m[0] + m[1] + m[2] - 1.0) > kSumTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("marginal of SNP ", i, " does not sum to 1"));
    }
  }
  return model;
}

double CorrelationModel::MinDefinedCond() const {
  double lowest = std::numeric_limits<double>::infinity();
  for (double v : cond_) {
    if (!std::isnan(v) && v < lowest) lowest = v;
  }
  return lowest;
}

absl::StatusOr<CorrelationModel> ComputeCorrelationModel(
    const GenotypeMatrix& m, double pseudo_count) {
  if (!(pseudo_count >= 0.0) || !std::isfinite(pseudo_count)) {
    return absl::InvalidArgumentError("pseudo_count must be >= 0");
  }
  const int n = m.num_individuals();
  const int l = m.num_snps();
  const size_t ll = static_cast<size_t>(l);

  // joint[i][k][b][a] counts.
  std::vector<int> joint(ll * ll * kNumStates * kNumStates, 0);
  std::vector<std::array<int, kNumStates>> marginal_counts(ll, {0, 0, 0});
  for (int j = 0; j < n; ++j) {
    const auto row = m.Row(j);
    for (int i = 0; i < l; ++i) {
      const int a = Index(row[i]);
      ++marginal_counts[i][a];
      int* base = &joint[static_cast<size_t>(i) * ll * 9];
      for (int k = 0; k < l; ++k) base[k * 9 + Index(row[k]) * 3 + a] += 1;
    }
  }

  CorrelationModel model;
  model.num_snps_ = l;
  model.cond_.assign(joint.size(), kUndefined);
  model.marginals_.resize(ll);
  for (int i = 0; i < l; ++i) {
    for (int k = 0; k < l; ++k) {
      if (i == k) continue;
      for (SnpValue b : kAllSnpValues) {
        const double denom =
            marginal_counts[k][Index(b)] + kNumStates * pseudo_count;
        if (denom <= 0.0) continue;
        const size_t offset = model.Offset(i, k, b);
        for (int a = 0; a < kNumStates; ++a) {
          model.cond_[offset + a] = (joint[offset + a] + pseudo_count) / denom;
        }
      }
    }
    const double denom = n + kNumStates * pseudo_count;
    for (int a = 0; a < kNumStates; ++a) {
      model.marginals_[i][a] = (marginal_counts[i][a] + pseudo_count) / denom;
    }
  }
  return model;
}

void WriteCorrelationJson(const CorrelationModel& model, std::ostream& out) {
  const int l = model.num_snps();
  nlohmann::json cond = nlohmann::json::array();
  for (int i = 0; i < l; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < l; ++k) {
      nlohmann::json by_a = nlohmann::json::array();
      for (SnpValue a : kAllSnpValues) {
        nlohmann::json by_b = nlohmann::json::array();
        for (SnpValue b : kAllSnpValues) {
          auto v = model.Cond(i, k, a, b);
          by_b.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
        }
        by_a.push_back(std::move(by_b));
      }
      row.push_back(std::move(by_a));
    }
    cond.push_back(std::move(row));
  }
  nlohmann::json marginals = nlohmann::json::array();
  for (int i = 0; i < l; ++i) {
    const auto& m = model.marginal(i);
    marginals.push_back({m[0], m[1], m[2]});
  }
  nlohmann::json doc;
  doc["l"] = l;
  doc["cond"] = std::move(cond);
  doc["marginals"] = std::move(marginals);
  out << doc.dump() << '\n';
}

absl::StatusOr<CorrelationModel> ParseCorrelationJson(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid correlation JSON: ", e.what()));
  }
  try {
    const int l = doc.at("l").get<int>();
    if (l < 1) return absl::InvalidArgumentError("l must be >= 1");
    const auto& cond = doc.at("cond");
    const auto& marginals = doc.at("marginals");
    if (cond.size() != static_cast<size_t>(l) ||
        marginals.size() != static_cast<size_t>(l)) {
      return absl::InvalidArgumentError("cond/marginals length != l");
    }
    const size_t ll = static_cast<size_t>(l);
    std::vector<double> table(ll * ll * 9, kUndefined);
    for (int i = 0; i < l; ++i) {
      if (cond[i].size() != ll) {
        return absl::InvalidArgumentError("cond row length != l");
      }
      for (int k = 0; k < l; ++k) {
        for (int a = 0; a < kNumStates; ++a) {
          for (int b = 0; b < kNumStates; ++b) {
            const auto& cell = cond[i][k].at(a).at(b);
            if (cell.is_null()) continue;
            table[((static_cast<size_t>(i) * ll + k) * 3 + b) * 3 + a] =
                cell.get<double>();
          }
        }
      }
    }
    std::vector<ProbabilityTriple> marg(ll);
    for (int i = 0; i < l; ++i) {
      for (int a = 0; a < kNumStates; ++a) {
        marg[i][a] = marginals[i].at(a).get<double>();
      }
    }
    return CorrelationModel::Create(l, std::move(table), std::move(marg));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed correlation JSON: ", e.what()));
  }
}

absl::StatusOr<CorrelationModel> ReadCorrelationFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  auto parsed = ParseCorrelationJson(in);
  if (!parsed.ok()) {
    return absl::Status(parsed.status().code(),
                        absl::StrCat(path, ": ", parsed.status().message()));
  }
  return parsed;
}

absl::Status WriteCorrelationFile(const CorrelationModel& model,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  WriteCorrelationJson(model, out);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace dldp
