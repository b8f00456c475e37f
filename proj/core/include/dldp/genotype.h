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

#ifndef DLDP_GENOTYPE_H_
#define DLDP_GENOTYPE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dldp {

// A SNP encoded as its number of minor alleles.
enum class SnpValue : uint8_t { kZero = 0, kOne = 1, kTwo = 2 };

inline constexpr int kNumStates = 3;
inline constexpr std::array<SnpValue, kNumStates> kAllSnpValues = {
    SnpValue::kZero, SnpValue::kOne, SnpValue::kTwo};

constexpr int Index(SnpValue v) { return static_cast<int>(v); }

// Accepts exactly 0, 1 or 2.
absl::StatusOr<SnpValue> SnpValueFromInt(int value);

// Unchecked conversion for values already known to be in range.
constexpr SnpValue SnpValueOf(int value) {
  return static_cast<SnpValue>(value);
}

using SnpRow = std::vector<SnpValue>;
using ProbabilityTriple = std::array<double, kNumStates>;

// n individuals by l SNPs, row-major. Immutable after construction.
class GenotypeMatrix {
 public:
  // Labels default to "I1".."In" and "S1".."Sl" when empty.
  static absl::StatusOr<GenotypeMatrix> Create(
      int num_individuals, int num_snps, std::vector<SnpValue> cells,
      std::vector<std::string> individual_ids = {},
      std::vector<std::string> snp_ids = {});

  static absl::StatusOr<GenotypeMatrix> FromRows(
      const std::vector<SnpRow>& rows);

  int num_individuals() const { return num_individuals_; }
  int num_snps() const { return num_snps_; }

  SnpValue at(int individual, int snp) const {
    return cells_[static_cast<size_t>(individual) * num_snps_ + snp];
  }
  std::span<const SnpValue> Row(int individual) const {
    return {cells_.data() + static_cast<size_t>(individual) * num_snps_,
            static_cast<size_t>(num_snps_)};
  }
  SnpRow Column(int snp) const;
  std::span<const SnpValue> cells() const { return cells_; }

  const std::vector<std::string>& individual_ids() const {
    return individual_ids_;
  }
  const std::vector<std::string>& snp_ids() const { return snp_ids_; }

  // First `count` individuals, labels preserved.
  GenotypeMatrix TakeIndividuals(int count) const;

  friend bool operator==(const GenotypeMatrix&,
                         const GenotypeMatrix&) = default;

 private:
  GenotypeMatrix() = default;

  int num_individuals_ = 0;
  int num_snps_ = 0;
  std::vector<SnpValue> cells_;
  std::vector<std::string> individual_ids_;
  std::vector<std::string> snp_ids_;
};

// Text format: first non-comment line "n l", then n lines of l
// whitespace-separated digits in {0,1,2}. Lines whose first non-blank
// character is '#' are ignored. Errors name the offending row and column
// (1-based).
absl::StatusOr<GenotypeMatrix> ParseGenotypeMatrix(std::istream& in);
absl::StatusOr<GenotypeMatrix> ReadGenotypeFile(const std::string& path);

void WriteGenotypeMatrix(const GenotypeMatrix& m, std::ostream& out);
absl::Status WriteGenotypeFile(const GenotypeMatrix& m,
                               const std::string& path);

}  // namespace dldp

#endif  // DLDP_GENOTYPE_H_
