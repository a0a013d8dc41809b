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

#ifndef INVGAME_SCENARIOS_HPP_
#define INVGAME_SCENARIOS_HPP_

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "invgame/dataset.hpp"
#include "invgame/distribution.hpp"
#include "invgame/estimation.hpp"
#include "invgame/game.hpp"

namespace invgame {

// Guard in the (go, go) term 1/(|delta| + eps).
inline constexpr double kCollisionEpsilon = 1e-6;
inline constexpr int kTrafficFeatureDim = 8;

// Per-player 8-dim features (action 1 = wait, action 2 = go). For player 1:
//   (wait, wait): (0,0,0,0,0,0,-|delta|,1)
//   (go, wait):   (1/tau1,1,0,0,0,0,0,0)
//   (wait, go):   (0,0,-tau1,1,0,0,0,0)
//   (go, go):     (0,0,0,0,-1/(|delta|+eps),1,0,0)
// and symmetrically for player 2 with tau2.
FeatureMap traffic_features(const KinematicState& k);
// Throws InvalidArgument unless both times are positive and finite.
FeatureMap traffic_features(const TrafficContext& c);
// Features built from each record's stored context.
FeatureSource traffic_feature_source();

// Two features per player: own advance (1 when going alone) and safety
// (1 unless both go, then -1). Interior weights give a chicken game.
FeatureMap chicken_dare_features();
// Throws InvalidArgument if the weights make the game degenerate.
Game2x2 chicken_dare_game(const WeightVector& w1, const WeightVector& w2);

WeightPair chicken_ground_truth();
WeightPair traffic_ground_truth();

// Lattice over (v1, v2, d1, d2) with `steps` evenly spaced values per range
// (steps == 1 takes the lower end). jitter > 0 perturbs every coordinate by a
// uniform relative factor in [-jitter, jitter].
struct SweepGrid {
  double v_min = 8.0, v_max = 14.0;
  int v_steps = 3;
  double d1_min = 20.0, d1_max = 40.0;
  double d2_min = 38.0, d2_max = 76.0;
  int d_steps = 3;
  double jitter = 0.05;

  static SweepGrid from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Throws InvalidArgument on an empty grid or nonpositive ranges.
std::vector<KinematicState> sweep_traffic_scenarios(const SweepGrid& grid,
                                                    std::uint64_t seed);

Dataset sample_iid(const JointDistribution& p, int T, std::uint64_t seed);

// Recommendations drawn from the device and obeyed; each record carries its
// recommendation.
Dataset signaled_sample(const JointDistribution& device, int T,
                        std::uint64_t seed);

inline constexpr double kDefaultDriverNoise = 1.0;

// One record per state: each driver independently goes with probability
// logistic((tau_other - tau_self) / noise).
Dataset uncoordinated_sample(const std::vector<KinematicState>& states,
                             double noise, std::uint64_t seed);

}  // namespace invgame

#endif  // INVGAME_SCENARIOS_HPP_
