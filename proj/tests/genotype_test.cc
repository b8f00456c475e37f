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

#include <sstream>

#include "absl/status/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dldp {
namespace {

using ::testing::HasSubstr;
using testing::Matrix;
using testing::Row;

absl::StatusOr<GenotypeMatrix> Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseGenotypeMatrix(in);
}

TEST(SnpValueTest, OnlyZeroOneTwo) {
  EXPECT_EQ(*SnpValueFromInt(0), SnpValue::kZero);
  EXPECT_EQ(*SnpValueFromInt(2), SnpValue::kTwo);
  EXPECT_FALSE(SnpValueFromInt(3).ok());
  EXPECT_FALSE(SnpValueFromInt(-1).ok());
}

TEST(GenotypeMatrixTest, ParsesBodyAsWritten) {
  auto m = Parse("2 2\n0 1\n2 0\n");
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_EQ(m->num_individuals(), 2);
  EXPECT_EQ(m->num_snps(), 2);
  EXPECT_EQ(m->at(0, 1), SnpValue::kOne);
  EXPECT_EQ(m->at(1, 0), SnpValue::kTwo);
  EXPECT_EQ(m->at(1, 1), SnpValue::kZero);
}

TEST(GenotypeMatrixTest, SkipsComments) {
  auto m = Parse("# cohort\n1 3\n  # row follows\n0 1 2\n");
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_EQ(m->Column(2), Row({2}));
}

TEST(GenotypeMatrixTest, BadCellNamesRowAndColumn) {
  auto m = Parse("2 2\n0 1\n0 3\n");
  ASSERT_FALSE(m.ok());
  EXPECT_EQ(m.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(m.status().message(), HasSubstr("row 2"));
  EXPECT_THAT(m.status().message(), HasSubstr("column 2"));
}

TEST(GenotypeMatrixTest, EmptyBodyIsStructuralError) {
  EXPECT_FALSE(Parse("1 2\n").ok());
  EXPECT_FALSE(Parse("2 2\n0 1\n0\n").ok());
  EXPECT_FALSE(Parse("1 2\n0 1\n1 1\n").ok());
  EXPECT_FALSE(Parse("").ok());
}

TEST(GenotypeMatrixTest, RoundTrip) {
  const GenotypeMatrix m = Matrix({{0, 1, 2}, {2, 2, 0}, {1, 0, 1}});
  std::ostringstream out;
  WriteGenotypeMatrix(m, out);
  auto back = Parse(out.str());
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->cells().size(), m.cells().size());
  EXPECT_TRUE(
      std::equal(m.cells().begin(), m.cells().end(), back->cells().begin()));
}

TEST(GenotypeMatrixTest, CreateValidatesDimensions) {
  EXPECT_FALSE(GenotypeMatrix::Create(0, 1, {}).ok());
  EXPECT_FALSE(GenotypeMatrix::Create(1, 2, {SnpValue::kZero}).ok());
  EXPECT_FALSE(
      GenotypeMatrix::Create(1, 1, {SnpValue::kZero}, {"a", "b"}).ok());
  auto m = GenotypeMatrix::Create(1, 1, {SnpValue::kOne});
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->individual_ids().size(), 1u);
  EXPECT_EQ(m->snp_ids().size(), 1u);
}

TEST(GenotypeMatrixTest, TakeIndividualsKeepsPrefix) {
  const GenotypeMatrix m = Matrix({{0, 1}, {2, 2}, {1, 0}});
  const GenotypeMatrix head = m.TakeIndividuals(2);
  EXPECT_EQ(head.num_individuals(), 2);
  EXPECT_EQ(head.at(1, 0), SnpValue::kTwo);
}

}  // namespace
}  // namespace dldp
