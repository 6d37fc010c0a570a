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


#include "mixtalk/prior_sampler.h"

#include <cmath>

#include "doctest.h"
#include "mixtalk/errors.h"
#include "mixtalk/seeding.h"
#include "test_util.h"

namespace mixtalk {
namespace {

// Frozen from tests/oracles/copula_spearman.py on variables_12_v2: exact
// population Spearman correlations of the discretized latent pairs.
constexpr double kSpearmanV3U1 = 0.540709;
constexpr double kSpearmanV4U2 = -0.358756;
constexpr double kSpearmanU5U6 = -0.449425;

PriorStructure PointMassPrior(const std::vector<int>& values) {
  PriorStructure p;
  for (std::size_t i = 0; i < values.size(); ++i) {
    p.attr_ids.push_back("A" + std::to_string(i));
    Marginal m{};
    m[values[i]] = 1.0;
    p.marginals.push_back(m);
  }
  return p;
}

// Spearman correlation with mid-ranks for tied integer values.
double Spearman(const std::vector<ThetaVector>& samples, int a, int b) {
  auto scores = [&](int idx) {
    std::array<double, kDomainSize> count{};
    for (const ThetaVector& t : samples) count[t[idx]] += 1;
    std::array<double, kDomainSize> mid{};
    double below = 0;
    for (int v = 0; v < kDomainSize; ++v) {
      mid[v] = below + (count[v] + 1) / 2.0;
      below += count[v];
    }
    return mid;
  };
  const auto ra = scores(a), rb = scores(b);
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  const double n = static_cast<double>(samples.size());
  for (const ThetaVector& t : samples) {
    const double x = ra[t[a]], y = rb[t[b]];
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  return cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
}

double Pearson(const std::vector<std::vector<double>>& rows, int a, int b) {
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    sa += r[a];
    sb += r[b];
    saa += r[a] * r[a];
    sbb += r[b] * r[b];
    sab += r[a] * r[b];
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  return cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
}

TEST_CASE("point-mass prior returns that vector") {
  const PriorStructure p = PointMassPrior({0, 4, 2, 3});
  CHECK(SampleTheta(p, 1).values == std::vector<int>{0, 4, 2, 3});
  CHECK(SampleTheta(p, 99).values == std::vector<int>{0, 4, 2, 3});
  CHECK(PriorDefault(p).values == std::vector<int>{0, 4, 2, 3});
}

TEST_CASE("prior mean") {
  PriorStructure p = PointMassPrior({4, 0});
  CHECK(PriorMean(p, "A0") == 4.0);
  p.marginals[1] = {0.2, 0.2, 0.2, 0.2, 0.2};
  CHECK(PriorMean(p, "A1") == doctest::Approx(2.0).epsilon(1e-15));
  p.marginals[1] = {0.5, 0, 0, 0, 0.5};
  CHECK(PriorMean(p, "A1") == 2.0);
  CHECK_THROWS_AS(PriorMean(p, "Z"), UnknownAttribute);
}

TEST_CASE("prior default takes the lower mode and clamps constraints") {
  const PriorStructure uniform = testing::TinyConfig().prior;
  CHECK(PriorDefault(uniform).values == std::vector<int>{0, 0, 0, 0});

  PriorStructure p;
  p.attr_ids = {"U4", "V6"};
  p.marginals = {Marginal{0.1, 0.1, 0.2, 0.5, 0.1}, Marginal{0.1, 0.5, 0.2, 0.1, 0.1}};
  p.constraints = {{"U4", "V6"}};
  CHECK(PriorDefault(p).values == std::vector<int>{1, 1});
}

TEST_CASE("sampling is a pure function of the seed") {
  const PriorStructure p = testing::ShippedConfig("variables_24_v4").prior;
  const PriorSampler sampler(p);
  for (uint64_t seed : {0ull, 1ull, 0xdeadbeefull}) {
    CHECK(sampler.Sample(seed) == sampler.Sample(seed));
    CHECK(SampleTheta(p, seed) == sampler.Sample(seed));
  }
  CHECK(sampler.Sample(1) != sampler.Sample(2));
}

TEST_CASE("unsatisfiable constraints exhaust the rejection budget") {
  PriorStructure p = PointMassPrior({4, 0});
  p.constraints = {{"A0", "A1"}};
  const PriorSampler sampler(p);
  CHECK_THROWS_AS(sampler.Sample(3), RejectionExhausted);
}

TEST_CASE("inconsistent correlation targets are repaired to a valid matrix") {
  PriorStructure p = testing::TinyConfig().prior;
  p.correlations = {{"V1", "V2", 0.9}, {"V2", "U1", 0.9}, {"V1", "U1", -0.9}};
  const PriorSampler sampler(p);
  CHECK(sampler.repaired());
  const Eigen::MatrixXd& c = sampler.latent_correlation();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  CHECK(eig.eigenvalues().minCoeff() > -1e-10);
  for (int i = 0; i < c.rows(); ++i) CHECK(c(i, i) == doctest::Approx(1.0));
  CHECK_NOTHROW(sampler.Sample(5));
}

TEST_CASE("quantile picks the first level whose CDF exceeds u") {
  const Marginal m{0.1, 0.2, 0.3, 0.2, 0.2};
  CHECK(PriorSampler::Quantile(m, 0.0) == 0);
  CHECK(PriorSampler::Quantile(m, 0.0999) == 0);
  CHECK(PriorSampler::Quantile(m, 0.1001) == 1);
  CHECK(PriorSampler::Quantile(m, 0.9999) == 4);
}

TEST_CASE("variables_12 prior: constraint, latent targets and discrete rank correlations") {
  const GameConfig c = testing::ShippedConfig("variables_12_v2");
  const PriorSampler sampler(c.prior);
  const int u4 = c.IndexOf("U4"), v6 = c.IndexOf("V6");
  std::vector<ThetaVector> samples;
  std::vector<std::vector<double>> latent;
  constexpr int kSamples = 100000;
  for (int k = 0; k < kSamples; ++k) {
    DetailedSample d = sampler.SampleDetailed(DeriveSeed(17, std::to_string(k)));
    samples.push_back(d.theta);
    latent.push_back(std::move(d.latent));
  }
  int violations = 0;
  for (const ThetaVector& t : samples) violations += t[u4] > t[v6] ? 1 : 0;
  CHECK(violations == 0);
  for (const Correlation& corr : c.prior.correlations) {
    CAPTURE(corr.a);
    CHECK(std::fabs(Pearson(latent, c.IndexOf(corr.a), c.IndexOf(corr.b)) - corr.rho) < 0.05);
  }
  CHECK(std::fabs(Spearman(samples, c.IndexOf("V3"), c.IndexOf("U1")) - kSpearmanV3U1) < 0.01);
  CHECK(std::fabs(Spearman(samples, c.IndexOf("V4"), c.IndexOf("U2")) - kSpearmanV4U2) < 0.01);
  CHECK(std::fabs(Spearman(samples, c.IndexOf("U5"), c.IndexOf("U6")) - kSpearmanU5U6) < 0.01);
}

TEST_CASE("independent attributes show no correlation") {
  const PriorStructure p = testing::TinyConfig().prior;
  const PriorSampler sampler(p);
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < 100000; ++k) {
    const ThetaVector t = sampler.Sample(DeriveSeed(3, std::to_string(k)));
    rows.push_back({double(t[0]), double(t[1]), double(t[2]), double(t[3])});
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) CHECK(std::fabs(Pearson(rows, a, b)) < 0.02);
  }
}

}  // namespace
}  // namespace mixtalk
