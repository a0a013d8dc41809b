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

#ifndef INVGAME_EQUILIBRIUM_HPP_
#define INVGAME_EQUILIBRIUM_HPP_

#include <array>
#include <vector>

#include "invgame/distribution.hpp"
#include "invgame/game.hpp"

namespace invgame {

inline constexpr int kNumCeVertices = 5;

// Ratios of same-player payoff differences:
//   alpha = |u1(a1)-u1(a3)| / |u1(a4)-u1(a2)|
//   beta  = |u2(a1)-u2(a2)| / |u2(a4)-u2(a3)|
struct AlphaBeta {
  double alpha;
  double beta;
};

// The five extreme points of the CE polytope of a strict (anti-)coordination
// game, stored in a(1)..a(4) order.
struct CeVertexSet {
  GameClass game_class;
  std::array<JointDistribution, kNumCeVertices> vertices;
};

class MixtureWeights {
 public:
  static MixtureWeights on_simplex(const std::array<double, 5>& y);
  const std::array<double, 5>& values() const { return y_; }
  double operator[](int v) const { return y_[v]; }

 private:
  explicit MixtureWeights(const std::array<double, 5>& y) : y_(y) {}
  std::array<double, 5> y_;
};

// Throws InvalidArgument ("dominated/degenerate payoffs") when any of the four
// payoff differences is a tie.
AlphaBeta alpha_beta(const PayoffTable& u);
AlphaBeta alpha_beta(const Game2x2& g);

// Reorders a distribution listed as (a1, a4, a3, a2) into a(1)..a(4) order.
std::array<double, 4> from_table_order(const std::array<double, 4>& table_row);

// Vertex probabilities in a(1)..a(4) order without the validation wrapper.
// Requires a coordination or anti-coordination class.
std::array<std::array<double, 4>, kNumCeVertices> ce_vertex_probs(
    const PayoffTable& u, GameClass cls);

// Throws InvalidArgument for dominance and degenerate games.
CeVertexSet ce_vertices(const PayoffTable& u);
CeVertexSet ce_vertices(const Game2x2& g);

JointDistribution mixture_distribution(const CeVertexSet& v,
                                       const MixtureWeights& y);

bool is_ce(const PayoffTable& u, const JointDistribution& sigma, double tol);
bool is_ce(const Game2x2& g, const JointDistribution& sigma, double tol);

struct MaxEntropyOptions {
  // Largest CE-constraint violation accepted in the returned point.
  double feasibility_tol = 1e-10;
  int max_outer_iterations = 60;
  int max_inner_iterations = 20000;
};

struct MaxEntropyResult {
  JointDistribution distribution;
  double entropy;
  double max_violation;
  int starts_converged;
};

// Maximum-entropy correlated equilibrium: augmented-Lagrangian outer loop over
// the four CE inequalities, projected gradient ascent on the simplex inside,
// multi-started from the uniform distribution and the polytope vertices (or the
// pure profiles when the vertex formula does not apply). Throws NotConverged
// carrying the best iterate when no start reaches the feasibility tolerance.
MaxEntropyResult max_entropy_ce_detailed(const PayoffTable& u,
                                         const MaxEntropyOptions& opts = {});
JointDistribution max_entropy_ce(const PayoffTable& u,
                                 const MaxEntropyOptions& opts = {});
JointDistribution max_entropy_ce(const Game2x2& g,
                                 const MaxEntropyOptions& opts = {});

}  // namespace invgame

#endif  // INVGAME_EQUILIBRIUM_HPP_
