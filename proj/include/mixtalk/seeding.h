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


// Stable seed derivation. Every random stream in a run is derived from the
// single master seed, so schedules and episodes are reproducible and adding an
// entry does not reshuffle the others.

#ifndef MIXTALK_SEEDING_H_
#define MIXTALK_SEEDING_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace mixtalk {

using Rng = std::mt19937_64;

// 64-bit FNV-1a over raw bytes, continuing from `state`.
uint64_t Fnv1a64(std::string_view bytes, uint64_t state = 0xcbf29ce484222325ULL);

// splitmix64 finalizer.
uint64_t Mix64(uint64_t x);

// Independent sub-stream of `seed` keyed by a label ("theta", "tools", ...).
uint64_t DeriveSeed(uint64_t seed, std::string_view label);

// Seed of one schedule entry: a hash of the master seed, the variant identity
// and the entry's index within that variant.
uint64_t EntrySeed(uint64_t master_seed, std::string_view env_id,
                   std::string_view story_id, uint64_t index_in_variant);

// Uniform draw in [0, 1).
double Uniform01(Rng& rng);

}  // namespace mixtalk

#endif  // MIXTALK_SEEDING_H_
