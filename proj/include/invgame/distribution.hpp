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

#ifndef INVGAME_DISTRIBUTION_HPP_
#define INVGAME_DISTRIBUTION_HPP_

#include <array>
#include <string>

namespace invgame {

inline constexpr int kNumJointActions = 4;
inline constexpr double kSimplexTolerance = 1e-9;

enum class Player { kOne = 1, kTwo = 2 };

// One of the four joint actions of a 2x2 game, enumerated
//   a(1) = (1,1), a(2) = (1,2), a(3) = (2,1), a(4) = (2,2)
// where the pair is (player-1 action, player-2 action). In the traffic
// convention action 1 is "wait" and action 2 is "go".
class JointAction {
 public:
  // index in {1,2,3,4}; throws InvalidArgument otherwise.
  static JointAction from_index(int index);
  // Each action in {1,2}.
  static JointAction from_actions(int player1_action, int player2_action);

  int index() const { return index_; }
  int offset() const { return index_ - 1; }
  int player1_action() const { return (index_ - 1) / 2 + 1; }
  int player2_action() const { return (index_ - 1) % 2 + 1; }
  int action(Player p) const {
    return p == Player::kOne ? player1_action() : player2_action();
  }

  friend bool operator==(JointAction, JointAction) = default;

 private:
  explicit constexpr JointAction(int index) : index_(index) {}
  int index_;
};

// Probability vector over a(1)..a(4), stored in that order.
class JointDistribution {
 public:
  // Validates entries >= 0 and sum == 1 within kSimplexTolerance.
  static JointDistribution from_probs(const std::array<double, 4>& probs);
  // Clips tiny negatives and renormalizes; for solver output.
  static JointDistribution normalized(const std::array<double, 4>& weights);
  static JointDistribution uniform();
  static JointDistribution point_mass(JointAction a);

  double operator[](JointAction a) const { return probs_[a.offset()]; }
  double at(int offset) const { return probs_.at(offset); }
  const std::array<double, 4>& probs() const { return probs_; }

  double entropy() const;
  // Index (1-based) of the most likely joint action; ties go to the lowest.
  JointAction argmax() const;
  std::string to_json() const;

  friend bool operator==(const JointDistribution&,
                         const JointDistribution&) = default;

 private:
  explicit JointDistribution(const std::array<double, 4>& p) : probs_(p) {}
  std::array<double, 4> probs_;
};

double tv_distance(const JointDistribution& p, const JointDistribution& q);

}  // namespace invgame

#endif  // INVGAME_DISTRIBUTION_HPP_
