// Copyright 2026 The MixTalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "mixtalk/seeding.h"


namespace mixtalk {
namespace {

constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

uint64_t HashU64(uint64_t v, uint64_t state) {
  for (int i = 0; i < 8; ++i) {
    state ^= (v >> (8 * i)) & 0xff;
    state *= kFnvPrime;
  }
  return state;
}

}  // namespace

uint64_t Fnv1a64(std::string_view bytes, uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= kFnvPrime;
  }
  return state;
}

uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t seed, std::string_view label) {
  return Mix64(Fnv1a64(label, HashU64(seed, 0xcbf29ce484222325ULL)));
}

uint64_t EntrySeed(uint64_t master_seed, std::string_view env_id,
                   std::string_view story_id, uint64_t index_in_variant) {
  uint64_t h = HashU64(master_seed, 0xcbf29ce484222325ULL);
  // Length prefixes keep ("ab", "c") and ("a", "bc") apart.
  h = HashU64(env_id.size(), h);
  h = Fnv1a64(env_id, h);
  h = HashU64(story_id.size(), h);
  h = Fnv1a64(story_id, h);
  h = HashU64(index_in_variant, h);
  return Mix64(h);
}

double Uniform01(Rng& rng) {
  // 53 random mantissa bits; avoids the implementation-defined
  // std::uniform_real_distribution.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace mixtalk
