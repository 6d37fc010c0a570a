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


// Gaussian-copula sampler for the hidden attribute vector.
//
// Correlation targets are latent-normal correlations. Each attribute's latent
// coordinate is pushed through the normal CDF and then through the inverse of
// its discrete marginal CDF, so marginals are exact before constraint
// rejection while realized rank correlations of the integer values are
// somewhat attenuated relative to the latent targets.

#ifndef MIXTALK_PRIOR_SAMPLER_H_
#define MIXTALK_PRIOR_SAMPLER_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mixtalk/game_model.h"

namespace mixtalk {

inline constexpr int kMaxRejectionAttempts = 1000;

struct DetailedSample {
  ThetaVector theta;
  // Latent normal draw that produced `theta`.
  std::vector<double> latent;
  // 1 when the first draw was accepted.
  int attempts = 0;
};

class PriorSampler {
 public:
  explicit PriorSampler(const PriorStructure& prior);

  // Throws RejectionExhausted after kMaxRejectionAttempts.
  ThetaVector Sample(uint64_t seed) const { return SampleDetailed(seed).theta; }
  DetailedSample SampleDetailed(uint64_t seed) const;

  // The correlation matrix actually used (after PSD repair).
  const Eigen::MatrixXd& latent_correlation() const { return correlation_; }
  bool repaired() const { return repaired_; }

  // Inverse marginal CDF: smallest v with u < F(v).
  static int Quantile(const Marginal& marginal, double u);

 private:
  bool Feasible(const ThetaVector& theta) const;

  PriorStructure prior_;
  Eigen::MatrixXd correlation_;
  Eigen::MatrixXd factor_;  // correlation_ = factor_ * factor_^T
  bool repaired_ = false;
  std::vector<std::pair<int, int>> constraints_;  // (lower, upper) indices
};

ThetaVector SampleTheta(const PriorStructure& prior, uint64_t seed);

// Throws UnknownAttribute.
double PriorMean(const PriorStructure& prior, std::string_view attr_id);

// Per-attribute mode (ties to the lower value), then value(a) := min(a, b)
// for every constraint a <= b until nothing changes.
ThetaVector PriorDefault(const PriorStructure& prior);

// Builds the symmetric target matrix from the pairwise list.
Eigen::MatrixXd TargetCorrelation(const PriorStructure& prior);

// Eigenvalue clipping followed by rescaling to unit diagonal. Returns the input
// unchanged when it is already positive definite.
Eigen::MatrixXd NearestCorrelation(const Eigen::MatrixXd& m, bool* changed = nullptr);

}  // namespace mixtalk

#endif  // MIXTALK_PRIOR_SAMPLER_H_
