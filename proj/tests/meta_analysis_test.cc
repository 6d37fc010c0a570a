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


#include "mixtalk/meta_analysis.h"

#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mixtalk/errors.h"

namespace mixtalk {
namespace {

// One sender, receivers a and b on two episodes: a = (0.5, 0.7), b = (0.6, 0.6).
PayoffTensor TwoReceiverExample() {
  PayoffTensor t({"s"}, {"a", "b"}, {"e1", "e2"});
  t.Set(0, 0, 0, 0.0, 0.5);
  t.Set(0, 0, 1, 0.0, 0.7);
  t.Set(0, 1, 0, 0.0, 0.6);
  t.Set(0, 1, 1, 0.0, 0.6);
  return t;
}

double Sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST_CASE("comparisons") {
  PayoffTensor t({"s"}, {"a", "b", "c"}, {"e1", "e2"});
  for (std::size_t e = 0; e < 2; ++e) {
    t.Set(0, 0, e, 0, 0.9);
    t.Set(0, 1, e, 0, 0.1);
    t.Set(0, 2, e, 0, e == 0 ? 0.1 : 0.5);
  }
  const auto cs = BuildComparisons(t, Role::kReceiver);
  double total = 0.0, ab = 0.0, half = 0.0;
  for (const Comparison& c : cs) {
    total += c.weight;
    if (c.winner == "a" && c.loser == "b") ab += c.weight;
    if (c.weight == 0.5) half += c.weight;
  }
  CHECK(total == doctest::Approx(6.0));
  CHECK(ab == doctest::Approx(2.0));
  // b and c tie on e1: half a win each way.
  CHECK(half == doctest::Approx(1.0));
}

TEST_CASE("Bradley-Terry") {
  SUBCASE("symmetric record gives equal ratings") {
    const auto r = FitBradleyTerry({"a", "b"}, {{"a", "b", 3}, {"b", "a", 3}});
    CHECK(r.ratings[0] == doctest::Approx(1.0));
    CHECK(r.ratings[1] == doctest::Approx(1.0));
  }
  SUBCASE("a clean sweep stays finite") {
    const auto r = FitBradleyTerry({"a", "b"}, {{"a", "b", 20}});
    CHECK(std::isfinite(r.ratings[0]));
    CHECK(r.ratings[0] > r.ratings[1]);
    CHECK(r.ratings[0] * r.ratings[1] == doctest::Approx(1.0));
    // Closed form for two agents: r_a / r_b = (20.5 / 0.5).
    CHECK(r.log_ratings[0] - r.log_ratings[1] == doctest::Approx(std::log(41.0)));
    CHECK_THROWS_AS(FitBradleyTerry({"a", "b"}, {{"a", "b", 20}}, 0.0), NotConnected);
  }
  SUBCASE("planted strengths are recovered") {
    const double strength[] = {1.0, 0.5, 0.25};
    const std::vector<std::string> names = {"x", "y", "z"};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Comparison> cs;
    for (int k = 0; k < 10000; ++k) {
      const int i = k % 3, j = (k + 1 + (k / 3) % 2) % 3;
      const bool i_wins = unif(rng) < strength[i] / (strength[i] + strength[j]);
      cs.push_back(i_wins ? Comparison{names[i], names[j]} : Comparison{names[j], names[i]});
    }
    const auto r = FitBradleyTerry(names, cs);
    CHECK(r.ratings[0] > r.ratings[1]);
    CHECK(r.ratings[1] > r.ratings[2]);
    CHECK(r.log_ratings[0] - r.log_ratings[1] == doctest::Approx(std::log(2.0)).epsilon(0.15));
    CHECK(Sum(r.log_ratings) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("log fixation") {
  CHECK(LogFixation(50, 0.0, 50) == doctest::Approx(std::log(1.0 / 50)));
  CHECK(std::exp(LogFixation(1.0, 0.3, 10)) ==
        doctest::Approx((1 - std::exp(-0.3)) / (1 - std::exp(-3.0))));
  CHECK(std::isfinite(LogFixation(50, -30.0, 50)));
  CHECK(std::isfinite(LogFixation(50, 30.0, 50)));
  CHECK(LogFixation(50, 30.0, 50) == doctest::Approx(0.0));
}

TEST_CASE("alpha-rank") {
  SUBCASE("neutral drift is uniform") {
    const auto r = AlphaRank({{0.1, 0.9}, {0.4, 0.2}}, {{0.3, 0.0}, {0.8, 0.5}}, 1e-8, 50);
    for (double m : r.profile_mass) CHECK(std::abs(m - 0.25) < 1e-6);
  }
  SUBCASE("strictly dominant profile absorbs the mass") {
    const auto r = AlphaRank({{1.0, 0.8}, {0.2, 0.0}}, {{1.0, 0.2}, {0.8, 0.0}});
    CHECK(r.profile_mass[0] > 0.99);
    CHECK(r.sender_mass[0] > 0.99);
    CHECK(r.receiver_mass[0] > 0.99);
  }
  SUBCASE("masses sum to one and ignore per-population shifts") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      Matrix us(3, std::vector<double>(2)), ur = us;
      for (auto& row : us) for (double& x : row) x = unif(rng);
      for (auto& row : ur) for (double& x : row) x = unif(rng);
      const auto a = AlphaRank(us, ur, 5.0, 20);
      CHECK(Sum(a.sender_mass) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(Sum(a.receiver_mass) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(Sum(a.profile_mass) == doctest::Approx(1.0).epsilon(1e-12));
      Matrix shifted = us;
      for (auto& row : shifted) for (double& x : row) x += 0.37;
      const auto b = AlphaRank(shifted, ur, 5.0, 20);
      for (std::size_t i = 0; i < a.profile_mass.size(); ++i) {
        CHECK(b.profile_mass[i] == doctest::Approx(a.profile_mass[i]).epsilon(1e-9));
      }
    }
  }
  CHECK_THROWS(AlphaRank({{std::nan("")}}, {{0.0}}));
}

TEST_CASE("maximin") {
  const Matrix m = {{0.5, 0.1}, {0.3, 0.3}};
  CHECK(Maximin(m, Role::kSender, {"a", "b"}) == "b");
  CHECK(Maximin({{1, 1}, {1, 1}}, Role::kSender, {"z", "y"}) == "y");
  CHECK(Maximin({{0.2}}, Role::kSender, {"only"}) == "only");
  // Receivers are columns.
  CHECK(Maximin({{0.5, 0.3}, {0.1, 0.3}}, Role::kReceiver, {"a", "b"}) == "b");
  // Positive affine maps preserve the answer.
  Matrix scaled = m;
  for (auto& row : scaled) for (double& x : row) x = 3 * x - 2;
  CHECK(Maximin(scaled, Role::kSender, {"a", "b"}) == "b");
}

TEST_CASE("pure Nash") {
  using Profiles = std::vector<std::pair<int, int>>;
  // Mutual best response at (1, 0).
  const Matrix us = {{0.1, 0.5}, {0.6, 0.2}}, ur = {{0.3, 0.2}, {0.7, 0.1}};
  CHECK(PureNash(us, ur) == Profiles{{1, 0}});
  CHECK(PureNash({{1, 1}, {1, 1}}, {{2, 2}, {2, 2}}).size() == 4);
  // Matching pennies.
  CHECK(PureNash({{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}).empty());
  Matrix us2 = us, ur2 = ur;
  for (auto& row : us2) for (double& x : row) x = 0.5 * x + 4;
  for (auto& row : ur2) for (double& x : row) x = 10 * x - 1;
  CHECK(PureNash(us2, ur2) == Profiles{{1, 0}});
}

TEST_CASE("oracle policy and regret") {
  const PayoffTensor t = TwoReceiverExample();
  const OraclePolicy p = BuildOraclePolicy(t, Role::kReceiver);
  REQUIRE(p.cells.size() == 1);
  CHECK(p.cells[0][0].agent == 1);
  CHECK(p.cells[0][1].agent == 0);
  CHECK(p.cells[0][0].utility == 0.6);
  CHECK(p.cells[0][1].utility == 0.7);
  CHECK(TournamentOracleRegret(t, "a", Role::kReceiver) == doctest::Approx(0.05));
  CHECK(TournamentOracleRegret(t, "b", Role::kReceiver) == doctest::Approx(0.05));
  CHECK_THROWS_AS(TournamentOracleRegret(t, "c", Role::kReceiver), ValidationError);
  // The sole sender is its own oracle.
  CHECK(TournamentOracleRegret(t, "s", Role::kSender) == 0.0);

  PayoffTensor dominant({"s1", "s2"}, {"a", "b"}, {"e1"});
  for (std::size_t s = 0; s < 2; ++s) {
    dominant.Set(s, 0, 0, 0, 0.9);
    dominant.Set(s, 1, 0, 0, 0.4 + 0.1 * s);
  }
  CHECK(TournamentOracleRegret(dominant, "a", Role::kReceiver) == 0.0);
  CHECK(TournamentOracleRegret(dominant, "b", Role::kReceiver) == doctest::Approx(0.5));

  // Ties go to the lexicographically first name.
  PayoffTensor tie({"s"}, {"b", "a"}, {"e1"});
  tie.Set(0, 0, 0, 0, 0.3);
  tie.Set(0, 1, 0, 0, 0.3);
  CHECK(BuildOraclePolicy(tie, Role::kReceiver).cells[0][0].agent == 1);
}

}  // namespace
}  // namespace mixtalk
