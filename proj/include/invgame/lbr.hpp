// Copyright 2026 The invgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INVGAME_LBR_HPP_
#define INVGAME_LBR_HPP_

#include <array>
#include <cstdint>

#include "invgame/dataset.hpp"
#include "invgame/distribution.hpp"
#include "invgame/game.hpp"

namespace invgame {

// Per-player inverse temperatures. 0 is uniform play.
struct Rationality {
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  // Throws InvalidArgument unless both are finite and >= 0.
  static Rationality checked(double lambda1, double lambda2);
};

// One-step logit responses to the opponent's last action:
//   s1 = P(a1^1 | a2^1), s2 = P(a1^1 | a2^2),
//   t1 = P(a2^1 | a1^1), t2 = P(a2^1 | a1^2).
struct LogitResponses {
  double s1, s2, t1, t2;
};

// Row-stochastic; entry [k][l] is the probability of moving from a(k+1) to
// a(l+1).
using TransitionMatrix = std::array<std::array<double, 4>, 4>;

LogitResponses logit_responses(const PayoffTable& u, const Rationality& lambda);
LogitResponses logit_responses(const Game2x2& g, const Rationality& lambda);

TransitionMatrix transition_matrix(const LogitResponses& r);
TransitionMatrix transition_matrix(const Game2x2& g, const Rationality& lambda);

// Stationary distribution from the two marginal fixed-point equations and the
// product form of the joint.
JointDistribution stationary_from_responses(const LogitResponses& r);
JointDistribution stationary_closed_form(const PayoffTable& u,
                                         const Rationality& lambda);
JointDistribution stationary_closed_form(const Game2x2& g,
                                         const Rationality& lambda);

// sigma <- sigma P from the uniform distribution until the TV change between
// successive iterates is <= tol. Throws NotConverged after max_iter steps.
JointDistribution stationary_power_iteration(const TransitionMatrix& p,
                                             double tol, int max_iter);
JointDistribution stationary_power_iteration(const Game2x2& g,
                                             const Rationality& lambda,
                                             double tol, int max_iter = 100000);

// sigma P for a row vector sigma.
std::array<double, 4> step_distribution(const std::array<double, 4>& sigma,
                                        const TransitionMatrix& p);

inline constexpr int kDefaultBurnIn = 1000;

// Runs the chain from a uniformly drawn state, drops burn_in steps and records
// the next T joint actions.
Dataset simulate_chain(const Game2x2& g, const Rationality& lambda, int T,
                       std::uint64_t seed, int burn_in = kDefaultBurnIn);

}  // namespace invgame

#endif  // INVGAME_LBR_HPP_
