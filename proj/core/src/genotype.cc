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

#include "dldp/genotype.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace dldp {
namespace {

bool IsCommentOrBlank(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    return c == '#';
  }
  return true;
}

}  // namespace

absl::StatusOr<SnpValue> SnpValueFromInt(int value) {
  if (value < 0 || value > 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("SNP value must be 0, 1 or 2; got ", value));
  }
  return SnpValueOf(value);
}

absl::StatusOr<GenotypeMatrix> GenotypeMatrix::Create(
    int num_individuals, int num_snps, std::vector<SnpValue> cells,
    std::vector<std::string> individual_ids, std::vector<std::string> snp_ids) {
  if (num_individuals < 1 || num_snps < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "genotype matrix needs n >= 1 and l >= 1; got n=", num_individuals,
        " l=", num_snps));
  }
  if (cells.size() != static_cast<size_t>(num_individuals) * num_snps) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", static_cast<size_t>(num_individuals) * num_snps,
        " cells, got ", cells.size()));
  }
  for (size_t c = 0; c < cells.size(); ++c) {
    if (Index(cells[c]) > 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid SNP value at row ", c / num_snps + 1,
                       ", column ", c % num_snps + 1));
    }
  }
  if (individual_ids.empty()) {
    for (int j = 0; j < num_individuals; ++j) {
      individual_ids.push_back(absl::StrCat("I", j + 1));
    }
  }
  if (snp_ids.empty()) {
    for (int i = 0; i < num_snps; ++i)
      snp_ids.push_back(absl::StrCat("S", i + 1));
  }
  if (individual_ids.size() != static_cast<size_t>(num_individuals) ||
      snp_ids.size() != static_cast<size_t>(num_snps)) {
    return absl::InvalidArgumentError("label counts do not match dimensions");
  }
  GenotypeMatrix m;
  m.num_individuals_ = num_individuals;
  m.num_snps_ = num_snps;
  m.cells_ = std::move(cells);
  m.individual_ids_ = std::move(individual_ids);
  m.snp_ids_ = std::move(snp_ids);
  return m;
}

absl::StatusOr<GenotypeMatrix> GenotypeMatrix::FromRows(
    const std::vector<SnpRow>& rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no rows");
  const size_t l = rows.front().size();
  std::vector<SnpValue> cells;
  cells.reserve(rows.size() * l);
  for (size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != l) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", j + 1, " has ", rows[j].size(), " SNPs, expected ", l));
    }
    cells.insert(cells.end(), rows[j].begin(), rows[j].end());
  }
  return Create(static_cast<int>(rows.size()), static_cast<int>(l),
                std::move(cells));
}

SnpRow GenotypeMatrix::Column(int snp) const {
  SnpRow column(num_individuals_);
  for (int j = 0; j < num_individuals_; ++j) column[j] = at(j, snp);
  return column;
}

GenotypeMatrix GenotypeMatrix::TakeIndividuals(int count) const {
  GenotypeMatrix m;
  m.num_individuals_ = count;
  m.num_snps_ = num_snps_;
  m.cells_.assign(cells_.begin(),
                  cells_.begin() + static_cast<size_t>(count) * num_snps_);
  m.individual_ids_.assign(individual_ids_.begin(),
                           individual_ids_.begin() + count);
  m.snp_ids_ = snp_ids_;
  return m;
}

absl::StatusOr<GenotypeMatrix> ParseGenotypeMatrix(std::istream& in) {
  std::string line;
  int n = -1;
  int l = -1;
  while (std::getline(in, line)) {
    if (IsCommentOrBlank(line)) continue;
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> l) || (header >> extra)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed header line: '", line, "'"));
    }
    break;
  }
  if (n < 1 || l < 1) {
    return absl::InvalidArgumentError(
        "missing or invalid header; expected 'n l' with n, l >= 1");
  }
  std::vector<SnpValue> cells;
  cells.reserve(static_cast<size_t>(n) * l);
  int row = 0;
  while (std::getline(in, line)) {
    if (IsCommentOrBlank(line)) continue;
    ++row;
    if (row > n) {
      return absl::InvalidArgumentError(
          absl::StrCat("more than the declared ", n, " rows"));
    }
    std::istringstream body(line);
    std::string token;
    int col = 0;
    while (body >> token) {
      ++col;
      if (col > l) {
        return absl::InvalidArgumentError(absl::StrCat(
            "row ", row, " has more than the declared ", l, " columns"));
      }
      if (token.size() != 1 || token[0] < '0' || token[0] > '2') {
        return absl::InvalidArgumentError(absl::StrCat(
            "invalid SNP value '", token, "' at row ", row, ", column ", col));
      }
      cells.push_back(SnpValueOf(token[0] - '0'));
    }
    if (col != l) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", row, " has ", col, " columns, expected ", l));
    }
  }
  if (row != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("header declares ", n, " rows but body has ", row));
  }
  return GenotypeMatrix::Create(n, l, std::move(cells));
}

absl::StatusOr<GenotypeMatrix> ReadGenotypeFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  auto parsed = ParseGenotypeMatrix(in);
  if (!parsed.ok()) {
    return absl::Status(parsed.status().code(),
                        absl::StrCat(path, ": ", parsed.status().message()));
  }
  return parsed;
}

void WriteGenotypeMatrix(const GenotypeMatrix& m, std::ostream& out) {
  out << m.num_individuals() << ' ' << m.num_snps() << '\n';
  std::string line;
  for (int j = 0; j < m.num_individuals(); ++j) {
    line.clear();
    for (int i = 0; i < m.num_snps(); ++i) {
      if (i > 0) line.push_back(' ');
      line.push_back(static_cast<char>('0' + Index(m.at(j, i))));
    }
    line.push_back('\n');
    out << line;
  }
}

absl::Status WriteGenotypeFile(const GenotypeMatrix& m,
                               const std::string& path) {
  std::ofstream out(path);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  WriteGenotypeMatrix(m, out);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace dldp
