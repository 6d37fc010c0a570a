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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mixtalk/errors.h"
#include "mixtalk/seeding.h"

namespace mixtalk {
namespace {

constexpr double kMinEigenvalue = 1e-8;

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Box-Muller on our own uniform draws so that streams are identical across
// standard library implementations.
void FillStandardNormal(Rng& rng, std::vector<double>& out) {
  for (std::size_t i = 0; i < out.size(); i += 2) {
    double u1 = Uniform01(rng);
    while (u1 <= 0.0) u1 = Uniform01(rng);
    const double u2 = Uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    out[i] = r * std::cos(t);
    if (i + 1 < out.size()) out[i + 1] = r * std::sin(t);
  }
}

}  // namespace

Eigen::MatrixXd TargetCorrelation(const PriorStructure& prior) {
  const int n = static_cast<int>(prior.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (const Correlation& c : prior.correlations) {
    const int a = prior.IndexOf(c.a);
    const int b = prior.IndexOf(c.b);
    if (a < 0 || b < 0) {
      throw UnknownAttribute("correlation references unknown attribute " + c.a + "/" + c.b);
    }
    m(a, b) = c.rho;
    m(b, a) = c.rho;
  }
  return m;
}

Eigen::MatrixXd NearestCorrelation(const Eigen::MatrixXd& m, bool* changed) {
  if (changed != nullptr) *changed = false;
  if (m.rows() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.eigenvalues().minCoeff() >= kMinEigenvalue) return m;
  Eigen::VectorXd values = eig.eigenvalues().cwiseMax(kMinEigenvalue);
  Eigen::MatrixXd repaired =
      eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  Eigen::VectorXd scale = repaired.diagonal().cwiseSqrt().cwiseInverse();
  repaired = scale.asDiagonal() * repaired * scale.asDiagonal();
  repaired = 0.5 * (repaired + repaired.transpose());
  repaired.diagonal().setOnes();
  if (changed != nullptr) *changed = true;
  return repaired;
}

PriorSampler::PriorSampler(const PriorStructure& prior) : prior_(prior) {
  correlation_ = NearestCorrelation(TargetCorrelation(prior_), &repaired_);
  Eigen::LLT<Eigen::MatrixXd> llt(correlation_);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
  } else {
    // Numerically semi-definite after repair; fall back to the symmetric root.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(correlation_);
    factor_ = eig.eigenvectors() *
              eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  for (const Constraint& c : prior_.constraints) {
    const int lo = prior_.IndexOf(c.lower);
    const int hi = prior_.IndexOf(c.upper);
    if (lo < 0 || hi < 0) {
      throw UnknownAttribute("constraint references unknown attribute " + c.lower + "/" + c.upper);
    }
    constraints_.emplace_back(lo, hi);
  }
}

int PriorSampler::Quantile(const Marginal& marginal, double u) {
  double cdf = 0.0;
  for (int v = 0; v < kDomainMax; ++v) {
    cdf += marginal[v];
    if (u < cdf) return kDomainMin + v;
  }
  return kDomainMax;
}

bool PriorSampler::Feasible(const ThetaVector& theta) const {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const auto& c) { return theta[c.first] <= theta[c.second]; });
}

DetailedSample PriorSampler::SampleDetailed(uint64_t seed) const {
  const std::size_t n = prior_.size();
  Rng rng(seed);
  std::vector<double> z(n);
  DetailedSample out;
  out.theta.values.resize(n);
  out.latent.resize(n);
  for (int attempt = 1; attempt <= kMaxRejectionAttempts; ++attempt) {
    FillStandardNormal(rng, z);
    for (std::size_t i = 0; i < n; ++i) {
      double x = 0.0;
      for (std::size_t k = 0; k < n; ++k) x += factor_(i, k) * z[k];
      out.latent[i] = x;
      out.theta[i] = Quantile(prior_.marginals[i], NormalCdf(x));
    }
    if (Feasible(out.theta)) {
      out.attempts = attempt;
      return out;
    }
  }
  throw RejectionExhausted("no feasible sample after " +
                           std::to_string(kMaxRejectionAttempts) + " attempts");
}

ThetaVector SampleTheta(const PriorStructure& prior, uint64_t seed) {
  return PriorSampler(prior).Sample(seed);
}

double PriorMean(const PriorStructure& prior, std::string_view attr_id) {
  const int i = prior.IndexOf(attr_id);
  if (i < 0) throw UnknownAttribute("unknown attribute '" + std::string(attr_id) + "'");
  double mean = 0.0;
  for (int v = 0; v < kDomainSize; ++v) mean += (kDomainMin + v) * prior.marginals[i][v];
  return mean;
}

ThetaVector PriorDefault(const PriorStructure& prior) {
  ThetaVector out{std::vector<int>(prior.size(), kDomainMin)};
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const Marginal& m = prior.marginals[i];
    out[i] = kDomainMin + static_cast<int>(std::max_element(m.begin(), m.end()) - m.begin());
  }
  // Acyclic constraints, so at most |constraints| sweeps are needed.
  for (std::size_t sweep = 0; sweep <= prior.constraints.size(); ++sweep) {
    bool changed = false;
    for (const Constraint& c : prior.constraints) {
      const int lo = prior.IndexOf(c.lower);
      const int hi = prior.IndexOf(c.upper);
      if (lo < 0 || hi < 0) continue;
      if (out[lo] > out[hi]) {
        out[lo] = out[hi];
        changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace mixtalk
