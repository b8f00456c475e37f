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

#ifndef DLDP_RANDOM_H_
#define DLDP_RANDOM_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace dldp {

// Seed derivation and sampling helpers.
//
// Every random draw in the library is keyed: a master seed is mixed with a
// list of integer tags (row, column, trial, ...) into a 64-bit sub-seed, and
// the sub-seed drives a SplitMix64 stream. Keyed streams make results
// independent of evaluation order and thread scheduling, so output is
// byte-identical for a fixed seed regardless of --jobs.

// Finalizer of the SplitMix64 generator (Steele, Lea, Flood 2014).
uint64_t Mix64(uint64_t x);

// Deterministically combines `seed` with `tags`. Distinct tag lists give
// statistically independent sub-seeds.
uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> tags);

// Stable tag for a floating-point value (its IEEE-754 bit pattern).
uint64_t TagOf(double value);

// SplitMix64 stream. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = uint64_t;

  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

 private:
  uint64_t state_;
};

// Uniform double in [0, 1) with 53 random bits.
double ToUnitInterval(uint64_t bits);

// Uniform integer in [0, bound) by rejection; bound must be positive.
uint64_t UniformIndex(SplitMix64& gen, uint64_t bound);

// Inverse-CDF draw from a categorical distribution given a uniform `u` in
// [0, 1). Zero-probability categories are never returned.
int SampleCategorical(std::span<const double> probs, double u);

// Fisher-Yates permutation of 0..n-1.
std::vector<int> RandomPermutation(int n, uint64_t seed);

}  // namespace dldp

#endif  // DLDP_RANDOM_H_
