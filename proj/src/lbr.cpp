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

#include "invgame/lbr.hpp"

#include <cmath>
#include <random>

#include "invgame/error.hpp"

namespace invgame {

Rationality Rationality::checked(double lambda1, double lambda2) {
  for (double l : {lambda1, lambda2}) {
    if (!std::isfinite(l) || l < 0.0) {
      throw InvalidArgument("rationality must be finite and >= 0");
    }
  }
  return {lambda1, lambda2};
}

namespace {

// P(choose the option with utility ua over the one with ub) under a logit rule
// with inverse temperature lambda. Subtracts the larger exponent.
double binary_logit(double lambda, double ua, double ub) {
  const double x = lambda * (ua - ub);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

LogitResponses logit_responses(const PayoffTable& u,
                               const Rationality& lambda) {
  const auto& u1 = u[0];
  const auto& u2 = u[1];
  return {
      binary_logit(lambda.lambda1, u1[0], u1[2]),
      binary_logit(lambda.lambda1, u1[1], u1[3]),
      binary_logit(lambda.lambda2, u2[0], u2[1]),
      binary_logit(lambda.lambda2, u2[2], u2[3]),
  };
}

LogitResponses logit_responses(const Game2x2& g, const Rationality& lambda) {
  return logit_responses(g.payoffs(), lambda);
}

TransitionMatrix transition_matrix(const LogitResponses& r) {
  auto row = [](double s, double t) {
    return std::array<double, 4>{s * t, s * (1.0 - t), (1.0 - s) * t,
                                 (1.0 - s) * (1.0 - t)};
  };
  // From a(k): player 1 answers the opponent's last action, player 2 likewise.
  return {row(r.s1, r.t1), row(r.s2, r.t1), row(r.s1, r.t2), row(r.s2, r.t2)};
}

TransitionMatrix transition_matrix(const Game2x2& g,
                                   const Rationality& lambda) {
  return transition_matrix(logit_responses(g, lambda));
}

JointDistribution stationary_from_responses(const LogitResponses& r) {
  const double ds = r.s1 - r.s2;
  const double dt = r.t1 - r.t2;
  const double denom = 1.0 - ds * dt;
  if (std::abs(denom) <= 1e-15) {
    throw NumericalError("stationary denominator vanished (responses " +
                         std::to_string(r.s1) + ", " + std::to_string(r.s2) +
                         ", " + std::to_string(r.t1) + ", " +
                         std::to_string(r.t2) + ")");
  }
  const double x = (r.s2 + ds * r.t2) / denom;
  const double q = (r.t2 + dt * r.s2) / denom;
  return JointDistribution::normalized(
      {x * q, x * (1.0 - q), (1.0 - x) * q, (1.0 - x) * (1.0 - q)});
}

JointDistribution stationary_closed_form(const PayoffTable& u,
                                         const Rationality& lambda) {
  return stationary_from_responses(logit_responses(u, lambda));
}

JointDistribution stationary_closed_form(const Game2x2& g,
                                         const Rationality& lambda) {
  return stationary_closed_form(g.payoffs(), lambda);
}

std::array<double, 4> step_distribution(const std::array<double, 4>& sigma,
                                        const TransitionMatrix& p) {
  std::array<double, 4> next{};
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) next[l] += sigma[k] * p[k][l];
  }
  return next;
}

JointDistribution stationary_power_iteration(const TransitionMatrix& p,
                                             double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  std::array<double, 4> sigma{0.25, 0.25, 0.25, 0.25};
  double change = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const auto next = step_distribution(sigma, p);
    change = 0.0;
    for (int l = 0; l < 4; ++l) change += std::abs(next[l] - sigma[l]);
    change *= 0.5;
    sigma = next;
    if (change <= tol) return JointDistribution::normalized(sigma);
  }
  throw NotConverged("power iteration exceeded " + std::to_string(max_iter) +
                         " iterations",
                     {sigma.begin(), sigma.end()}, change);
}

JointDistribution stationary_power_iteration(const Game2x2& g,
                                             const Rationality& lambda,
                                             double tol, int max_iter) {
  return stationary_power_iteration(transition_matrix(g, lambda), tol,
                                    max_iter);
}

Dataset simulate_chain(const Game2x2& g, const Rationality& lambda, int T,
                       std::uint64_t seed, int burn_in) {
  if (T < 1) throw InvalidArgument("T must be >= 1");
  if (burn_in < 0) throw InvalidArgument("burn_in must be >= 0");
  const LogitResponses r = logit_responses(g, lambda);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int p1 = unit(rng) < 0.5 ? 1 : 2;
  int p2 = unit(rng) < 0.5 ? 1 : 2;
  Dataset d;
  for (int step = 0; step < burn_in + T; ++step) {
    const double s = p2 == 1 ? r.s1 : r.s2;
    const double t = p1 == 1 ? r.t1 : r.t2;
    p1 = unit(rng) < s ? 1 : 2;
    p2 = unit(rng) < t ? 1 : 2;
    if (step >= burn_in) d.add(JointAction::from_actions(p1, p2));
  }
  return d;
}

}  // namespace invgame
