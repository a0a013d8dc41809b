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

#ifndef INVGAME_GAME_HPP_
#define INVGAME_GAME_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "invgame/distribution.hpp"

namespace invgame {

// Degeneracy threshold for payoff differences.
inline constexpr double kTieTolerance = 1e-9;

// Feature vectors of one player for each of the four joint actions.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // rows[l] is phi(a(l+1)); all rows must share one dimension and be finite.
  explicit FeatureMatrix(std::array<std::vector<double>, 4> rows);

  int dim() const { return static_cast<int>(rows_[0].size()); }
  const std::vector<double>& row(JointAction a) const {
    return rows_[a.offset()];
  }
  const std::array<std::vector<double>, 4>& rows() const { return rows_; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::array<std::vector<double>, 4> rows_;
};

struct FeatureMap {
  FeatureMatrix player1;
  FeatureMatrix player2;

  const FeatureMatrix& of(Player p) const {
    return p == Player::kOne ? player1 : player2;
  }
  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

// Utility weights on the probability simplex.
class WeightVector {
 public:
  // Throws InvalidArgument unless entries >= 0 and sum == 1 within 1e-9.
  static WeightVector on_simplex(std::vector<double> values);

  int dim() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](int k) const { return values_[k]; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  explicit WeightVector(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

struct WeightPair {
  WeightVector w1;
  WeightVector w2;
};

enum class GameClass { kCoordination, kAntiCoordination, kDominance, kDegenerate };

std::string to_string(GameClass c);

// Payoff table u_i(a(l)), indexed [player-1][l-1].
using PayoffTable = std::array<std::array<double, 4>, 2>;

class Game2x2 {
 public:
  const FeatureMap& features() const { return features_; }
  const WeightVector& weights(Player p) const {
    return p == Player::kOne ? w1_ : w2_;
  }
  double payoff(Player p, JointAction a) const {
    return payoffs_[static_cast<int>(p) - 1][a.offset()];
  }
  const PayoffTable& payoffs() const { return payoffs_; }

 private:
  friend Game2x2 build_game(const FeatureMap&, const WeightVector&,
                            const WeightVector&);
  Game2x2(FeatureMap f, WeightVector w1, WeightVector w2, PayoffTable u)
      : features_(std::move(f)),
        w1_(std::move(w1)),
        w2_(std::move(w2)),
        payoffs_(u) {}

  FeatureMap features_;
  WeightVector w1_;
  WeightVector w2_;
  PayoffTable payoffs_;
};

// u_i(a) = phi_i(a) . w_i. Throws InvalidArgument on dimension mismatch.
Game2x2 build_game(const FeatureMap& features, const WeightVector& w1,
                   const WeightVector& w2);

// Game whose payoffs are given directly: one-dimensional features holding the
// payoff and weight [1] for both players.
Game2x2 game_from_payoffs(const std::array<double, 4>& u1,
                          const std::array<double, 4>& u2);

double payoff(const Game2x2& g, Player p, JointAction a);

// Payoff table from features and raw weight entries, without validation of the
// simplex constraint. Used on estimator hot paths.
PayoffTable compute_payoffs(const FeatureMap& features,
                            std::span<const double> w1,
                            std::span<const double> w2);

// The four differences that decide the game class:
//   u1(a1)-u1(a3), u1(a4)-u1(a2), u2(a1)-u2(a2), u2(a4)-u2(a3).
std::array<double, 4> payoff_differences(const PayoffTable& u);

GameClass classify_payoffs(const PayoffTable& u, double tol = kTieTolerance);
GameClass classify_game(const Game2x2& g, double tol = kTieTolerance);

// Left-hand sides of the correlated-equilibrium inequalities, in the order
// (player 1: 1->2, player 1: 2->1, player 2: 1->2, player 2: 2->1).
// sigma is a CE iff all four are >= 0.
std::array<double, 4> ce_constraint_values(const PayoffTable& u,
                                           const std::array<double, 4>& sigma);
std::array<double, 4> ce_constraint_values(const Game2x2& g,
                                           const JointDistribution& sigma);

// Aligned text rendering of the bimatrix (rows: player 1, cols: player 2).
std::string format_payoff_table(const Game2x2& g);

}  // namespace invgame

#endif  // INVGAME_GAME_HPP_
