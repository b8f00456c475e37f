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

#include "dldp/random.h"

#include <bit>
#include <numeric>

namespace dldp {

uint64_t Mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> tags) {
  uint64_t h = Mix64(seed + 0x9e3779b97f4a7c15ULL);
  for (uint64_t tag : tags) {
    h = Mix64(h ^ Mix64(tag + 0x632be59bd9b4e019ULL));
  }
  return h;
}

uint64_t TagOf(double value) { return std::bit_cast<uint64_t>(value); }

SplitMix64::result_type SplitMix64::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return Mix64(state_);
}

double ToUnitInterval(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

uint64_t UniformIndex(SplitMix64& gen, uint64_t bound) {
  // Reject the top partial bucket so every residue is equally likely.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % bound;
  uint64_t draw = gen();
  while (draw >= limit) draw = gen();
  return draw % bound;
}

int SampleCategorical(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  int last_positive = -1;
  for (size_t v = 0; v < probs.size(); ++v) {
    if (probs[v] <= 0.0) continue;
    last_positive = static_cast<int>(v);
    cumulative += probs[v];
    if (u < cumulative) return last_positive;
  }
  // Rounding can leave u above the accumulated mass.
  return last_positive;
}

std::vector<int> RandomPermutation(int n, uint64_t seed) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  SplitMix64 gen(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j =
        static_cast<int>(UniformIndex(gen, static_cast<uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace dldp
