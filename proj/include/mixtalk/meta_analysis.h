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


// Rankings over a payoff tensor: Bradley-Terry, two-population alpha-Rank,
// maximin, pure Nash profiles, and the per-episode oracle with its regret.
// Every argmax tie breaks toward the lexicographically first agent name.

#ifndef MIXTALK_META_ANALYSIS_H_
#define MIXTALK_META_ANALYSIS_H_

#include <string>
#include <utility>
#include <vector>

#include "mixtalk/game_model.h"
#include "mixtalk/tournament.h"

namespace mixtalk {

inline constexpr double kDefaultAlpha = 50.0;
inline constexpr int kDefaultPopulation = 50;
inline constexpr double kBtPseudoCount = 0.5;

struct Comparison {
  std::string winner;
  std::string loser;
  double weight = 1.0;

  bool operator==(const Comparison&) const = default;
};

// Same-role pairs compared on every shared (opponent, episode). Equal
// utilities give a 0.5-weight comparison in each direction.
std::vector<Comparison> BuildComparisons(const PayoffTensor& tensor, Role role);

struct BtRatings {
  std::vector<std::string> agents;
  // Geometric mean 1.
  std::vector<double> ratings;
  // log(ratings); centered at 0 by the normalization.
  std::vector<double> log_ratings;
  int iterations = 0;
};

// Minorization-maximization fit with `pseudo_count` wins added in each
// direction for every pair. Throws NotConnected when the comparison graph is
// disconnected (only reachable with pseudo_count 0) and NonConvergence after
// the iteration cap.
BtRatings FitBradleyTerry(const std::vector<std::string>& agents,
                          const std::vector<Comparison>& comparisons,
                          double pseudo_count = kBtPseudoCount);

// Log of the fixation probability (1 - e^{-x}) / (1 - e^{-m x}), x = alpha
// * delta, evaluated without overflow for large |x|.
double LogFixation(double alpha, double delta, int m);

struct AlphaRankResult {
  std::vector<double> sender_mass;
  std::vector<double> receiver_mass;
  // Row-major over (sender, receiver) profiles.
  std::vector<double> profile_mass;
};

// u_s[s][r], u_r[s][r]: mean utilities. The stationary distribution is solved
// by Grassmann-Taksar-Heyman elimination in log space and then checked by a
// power-iteration step. Throws NonConvergence if that check fails.
AlphaRankResult AlphaRank(const Matrix& u_s, const Matrix& u_r, double alpha = kDefaultAlpha,
                          int m = kDefaultPopulation);

// Best worst case for `role`: rows are senders, columns receivers.
std::string Maximin(const Matrix& matrix, Role role, const std::vector<std::string>& names);

// Profiles (sender index, receiver index) where both play best responses.
std::vector<std::pair<int, int>> PureNash(const Matrix& u_s, const Matrix& u_r);

struct OracleCell {
  int agent = -1;  // index into the role's agent list; -1 if no data
  double utility = 0.0;
};

struct OraclePolicy {
  Role role = Role::kReceiver;
  std::vector<std::string> agents;
  std::vector<std::string> opponents;
  std::vector<std::string> episode_ids;
  // cells[opponent][episode]
  std::vector<std::vector<OracleCell>> cells;
};

OraclePolicy BuildOraclePolicy(const PayoffTensor& tensor, Role role);

// Max over opponents of the mean per-episode gap to the oracle.
double TournamentOracleRegret(const PayoffTensor& tensor, const std::string& agent, Role role);

}  // namespace mixtalk

#endif  // MIXTALK_META_ANALYSIS_H_
