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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mixtalk/errors.h"

namespace mixtalk {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kBtTolerance = 1e-10;
constexpr int kBtMaxIterations = 10000;
constexpr double kStationaryTolerance = 1e-12;
constexpr int kPowerIterationCap = 1000000;

std::size_t OwnCount(const PayoffTensor& t, Role role) {
  return role == Role::kSender ? t.num_senders() : t.num_receivers();
}

std::size_t OpponentCount(const PayoffTensor& t, Role role) {
  return role == Role::kSender ? t.num_receivers() : t.num_senders();
}

const std::vector<std::string>& OwnNames(const PayoffTensor& t, Role role) {
  return role == Role::kSender ? t.senders() : t.receivers();
}

bool HasCell(const PayoffTensor& t, Role role, std::size_t own, std::size_t opp, std::size_t e) {
  return role == Role::kSender ? t.Has(own, opp, e) : t.Has(opp, own, e);
}

// log(e^a + e^b)
double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void CheckFinite(const Matrix& m, const char* what) {
  for (const auto& row : m) {
    for (double x : row) {
      if (!std::isfinite(x)) throw ValidationError(what, "payoff matrix has a non-finite entry");
    }
  }
}

}  // namespace

std::vector<Comparison> BuildComparisons(const PayoffTensor& tensor, Role role) {
  std::vector<Comparison> out;
  const auto& names = OwnNames(tensor, role);
  const std::size_t n = OwnCount(tensor, role);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t o = 0; o < OpponentCount(tensor, role); ++o) {
        for (std::size_t e = 0; e < tensor.num_episodes(); ++e) {
          if (!HasCell(tensor, role, a, o, e) || !HasCell(tensor, role, b, o, e)) continue;
          const double ua = tensor.Utility(role, a, o, e);
          const double ub = tensor.Utility(role, b, o, e);
          if (ua > ub) {
            out.push_back({names[a], names[b], 1.0});
          } else if (ub > ua) {
            out.push_back({names[b], names[a], 1.0});
          } else {
            out.push_back({names[a], names[b], 0.5});
            out.push_back({names[b], names[a], 0.5});
          }
        }
      }
    }
  }
  return out;
}

BtRatings FitBradleyTerry(const std::vector<std::string>& agents,
                          const std::vector<Comparison>& comparisons, double pseudo_count) {
  const std::size_t n = agents.size();
  BtRatings out;
  out.agents = agents;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[agents[i]] = i;
  // wins[i][j]: weighted wins of i over j.
  std::vector<std::vector<double>> wins(n, std::vector<double>(n, 0.0));
  for (const Comparison& c : comparisons) {
    auto w = index.find(c.winner);
    auto l = index.find(c.loser);
    if (w == index.end() || l == index.end()) {
      throw ValidationError("comparisons", "unknown agent in comparison");
    }
    if (w->second == l->second || !(c.weight > 0.0)) {
      throw ValidationError("comparisons", "self comparison or non-positive weight");
    }
    wins[w->second][l->second] += c.weight;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) wins[i][j] += pseudo_count;
    }
  }

  // Connectivity over pairs that met at least once.
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack;
  if (n > 0) {
    stack.push_back(0);
    seen[0] = true;
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (!seen[j] && wins[i][j] + wins[j][i] > 0.0) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  std::vector<double> total_wins(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) total_wins[i] += wins[i][j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i] || (n > 1 && total_wins[i] <= 0.0)) {
      throw NotConnected("comparison graph does not support finite ratings");
    }
  }

  std::vector<double> r(n, 1.0);
  bool converged = n <= 1;
  while (!converged) {
    if (out.iterations >= kBtMaxIterations) {
      throw NonConvergence("Bradley-Terry did not converge");
    }
    ++out.iterations;
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      double denom = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) denom += (wins[i][j] + wins[j][i]) / (r[i] + r[j]);
      }
      next[i] = total_wins[i] / denom;
    }
    double log_mean = 0.0;
    for (double x : next) log_mean += std::log(x);
    log_mean /= static_cast<double>(n);
    const double scale = std::exp(-log_mean);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] *= scale;
      change = std::max(change, std::abs(next[i] - r[i]) / r[i]);
    }
    r = std::move(next);
    converged = change < kBtTolerance;
  }
  out.ratings = r;
  for (double x : r) out.log_ratings.push_back(std::log(x));
  return out;
}

double LogFixation(double alpha, double delta, int m) {
  const double x = alpha * delta;
  if (x == 0.0) return -std::log(static_cast<double>(m));
  if (x > 0.0) return std::log(-std::expm1(-x)) - std::log(-std::expm1(-m * x));
  const double y = -x;
  return -(m - 1) * y + std::log(-std::expm1(-y)) - std::log(-std::expm1(-m * y));
}

AlphaRankResult AlphaRank(const Matrix& u_s, const Matrix& u_r, double alpha, int m) {
  if (!(alpha > 0.0)) throw ValidationError("alpha", "must be positive");
  if (m < 2) throw ValidationError("m", "population size must be >= 2");
  CheckFinite(u_s, "u_s");
  CheckFinite(u_r, "u_r");
  const std::size_t ns = u_s.size();
  const std::size_t nr = ns == 0 ? 0 : u_s[0].size();
  if (u_r.size() != ns || (ns > 0 && u_r[0].size() != nr)) {
    throw ValidationError("u_r", "shape differs from u_s");
  }
  AlphaRankResult out;
  const std::size_t np = ns * nr;
  if (np == 0) return out;
  out.sender_mass.assign(ns, 0.0);
  out.receiver_mass.assign(nr, 0.0);
  if (np == 1) {
    out.profile_mass = {1.0};
    out.sender_mass[0] = out.receiver_mass[0] = 1.0;
    return out;
  }

  const double log_eta = -std::log(static_cast<double>((ns - 1) + (nr - 1)));
  // Off-diagonal log transition probabilities.
  std::vector<std::vector<double>> lp(np, std::vector<double>(np, kNegInf));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t r = 0; r < nr; ++r) {
      const std::size_t from = s * nr + r;
      for (std::size_t s2 = 0; s2 < ns; ++s2) {
        if (s2 == s) continue;
        lp[from][s2 * nr + r] = log_eta + LogFixation(alpha, u_s[s2][r] - u_s[s][r], m);
      }
      for (std::size_t r2 = 0; r2 < nr; ++r2) {
        if (r2 == r) continue;
        lp[from][s * nr + r2] = log_eta + LogFixation(alpha, u_r[s][r2] - u_r[s][r], m);
      }
    }
  }

  // GTH elimination: only additions of non-negative terms, so no cancellation
  // even when rates span hundreds of orders of magnitude.
  for (std::size_t k = np - 1; k >= 1; --k) {
    double log_out = kNegInf;
    for (std::size_t j = 0; j < k; ++j) log_out = LogAdd(log_out, lp[k][j]);
    for (std::size_t i = 0; i < k; ++i) {
      if (lp[i][k] == kNegInf) continue;
      lp[i][k] -= log_out;
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j && lp[k][j] != kNegInf) lp[i][j] = LogAdd(lp[i][j], lp[i][k] + lp[k][j]);
      }
    }
  }
  std::vector<double> log_pi(np, kNegInf);
  log_pi[0] = 0.0;
  for (std::size_t k = 1; k < np; ++k) {
    for (std::size_t i = 0; i < k; ++i) log_pi[k] = LogAdd(log_pi[k], log_pi[i] + lp[i][k]);
  }
  const double log_total =
      std::accumulate(log_pi.begin(), log_pi.end(), kNegInf, [](double a, double b) {
        return LogAdd(a, b);
      });
  std::vector<double> pi(np);
  for (std::size_t k = 0; k < np; ++k) pi[k] = std::exp(log_pi[k] - log_total);

  // Check stationarity with explicit power-iteration steps.
  std::vector<std::vector<double>> p(np, std::vector<double>(np, 0.0));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t r = 0; r < nr; ++r) {
      const std::size_t from = s * nr + r;
      double stay = 1.0;
      auto add = [&](std::size_t to, double delta) {
        p[from][to] = std::exp(log_eta + LogFixation(alpha, delta, m));
        stay -= p[from][to];
      };
      for (std::size_t s2 = 0; s2 < ns; ++s2) {
        if (s2 != s) add(s2 * nr + r, u_s[s2][r] - u_s[s][r]);
      }
      for (std::size_t r2 = 0; r2 < nr; ++r2) {
        if (r2 != r) add(s * nr + r2, u_r[s][r2] - u_r[s][r]);
      }
      p[from][from] = std::max(0.0, stay);
    }
  }
  bool stationary = false;
  for (int iter = 0; iter < kPowerIterationCap && !stationary; ++iter) {
    std::vector<double> next(np, 0.0);
    for (std::size_t i = 0; i < np; ++i) {
      if (pi[i] == 0.0) continue;
      for (std::size_t j = 0; j < np; ++j) next[j] += pi[i] * p[i][j];
    }
    double total = 0.0;
    for (double x : next) total += x;
    double change = 0.0;
    for (std::size_t j = 0; j < np; ++j) {
      next[j] /= total;
      change += std::abs(next[j] - pi[j]);
    }
    if (!std::isfinite(change)) break;
    stationary = change < kStationaryTolerance;
    if (!stationary) pi = std::move(next);
  }
  if (!stationary) throw NonConvergence("alpha-Rank stationary distribution did not settle");

  out.profile_mass = pi;
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t r = 0; r < nr; ++r) {
      out.sender_mass[s] += pi[s * nr + r];
      out.receiver_mass[r] += pi[s * nr + r];
    }
  }
  return out;
}

std::string Maximin(const Matrix& matrix, Role role, const std::vector<std::string>& names) {
  CheckFinite(matrix, "matrix");
  const std::size_t rows = matrix.size();
  const std::size_t cols = rows == 0 ? 0 : matrix[0].size();
  const std::size_t own = role == Role::kSender ? rows : cols;
  const std::size_t opp = role == Role::kSender ? cols : rows;
  if (own == 0 || names.size() != own) {
    throw ValidationError("names", "need one name per strategy");
  }
  int best = -1;
  double best_value = 0.0;
  for (std::size_t i = 0; i < own; ++i) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < opp; ++j) {
      worst = std::min(worst, role == Role::kSender ? matrix[i][j] : matrix[j][i]);
    }
    if (best < 0 || worst > best_value || (worst == best_value && names[i] < names[best])) {
      best = static_cast<int>(i);
      best_value = worst;
    }
  }
  return names[best];
}

std::vector<std::pair<int, int>> PureNash(const Matrix& u_s, const Matrix& u_r) {
  CheckFinite(u_s, "u_s");
  CheckFinite(u_r, "u_r");
  std::vector<std::pair<int, int>> out;
  const std::size_t ns = u_s.size();
  const std::size_t nr = ns == 0 ? 0 : u_s[0].size();
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t r = 0; r < nr; ++r) {
      bool best = true;
      for (std::size_t s2 = 0; s2 < ns && best; ++s2) best = u_s[s2][r] <= u_s[s][r];
      for (std::size_t r2 = 0; r2 < nr && best; ++r2) best = u_r[s][r2] <= u_r[s][r];
      if (best) out.emplace_back(static_cast<int>(s), static_cast<int>(r));
    }
  }
  return out;
}

OraclePolicy BuildOraclePolicy(const PayoffTensor& tensor, Role role) {
  OraclePolicy p;
  p.role = role;
  p.agents = OwnNames(tensor, role);
  p.opponents = role == Role::kSender ? tensor.receivers() : tensor.senders();
  p.episode_ids = tensor.episode_ids();
  p.cells.assign(p.opponents.size(), std::vector<OracleCell>(tensor.num_episodes()));
  for (std::size_t o = 0; o < p.opponents.size(); ++o) {
    for (std::size_t e = 0; e < tensor.num_episodes(); ++e) {
      OracleCell& cell = p.cells[o][e];
      for (std::size_t a = 0; a < p.agents.size(); ++a) {
        if (!HasCell(tensor, role, a, o, e)) continue;
        const double u = tensor.Utility(role, a, o, e);
        if (cell.agent < 0 || u > cell.utility ||
            (u == cell.utility && p.agents[a] < p.agents[cell.agent])) {
          cell.agent = static_cast<int>(a);
          cell.utility = u;
        }
      }
    }
  }
  return p;
}

double TournamentOracleRegret(const PayoffTensor& tensor, const std::string& agent, Role role) {
  const auto& names = OwnNames(tensor, role);
  auto it = std::find(names.begin(), names.end(), agent);
  if (it == names.end()) throw ValidationError("agent", "'" + agent + "' is not in the pool");
  const std::size_t a = static_cast<std::size_t>(it - names.begin());
  const OraclePolicy oracle = BuildOraclePolicy(tensor, role);
  double tor = 0.0;
  for (std::size_t o = 0; o < oracle.opponents.size(); ++o) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t e = 0; e < tensor.num_episodes(); ++e) {
      if (!HasCell(tensor, role, a, o, e)) continue;
      sum += oracle.cells[o][e].utility - tensor.Utility(role, a, o, e);
      ++n;
    }
    if (n > 0) tor = std::max(tor, sum / static_cast<double>(n));
  }
  return tor;
}

}  // namespace mixtalk
