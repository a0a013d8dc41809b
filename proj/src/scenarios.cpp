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

#include "invgame/scenarios.hpp"

#include <cmath>
#include <random>

#include "invgame/error.hpp"

namespace invgame {

using nlohmann::json;

namespace {

// go_alone is the offset of the joint action where this player goes and the
// other waits; the remaining off-diagonal action is the one where it yields.
FeatureMatrix traffic_player(double tau, double abs_delta, int go_alone) {
  std::array<std::vector<double>, 4> rows;
  rows[0] = {0, 0, 0, 0, 0, 0, -abs_delta, 1};
  rows[go_alone] = {1.0 / tau, 1, 0, 0, 0, 0, 0, 0};
  rows[3 - go_alone] = {0, 0, -tau, 1, 0, 0, 0, 0};
  rows[3] = {0, 0, 0, 0, -1.0 / (abs_delta + kCollisionEpsilon), 1, 0, 0};
  return FeatureMatrix(rows);
}

double logistic(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

JointAction draw(const JointDistribution& p, double u) {
  double cumulative = 0.0;
  for (int l = 0; l < 3; ++l) {
    cumulative += p.at(l);
    if (u < cumulative) return JointAction::from_index(l + 1);
  }
  // Skip trailing zero-probability actions reached by rounding.
  for (int l = 3; l > 0; --l) {
    if (p.at(l) > 0.0) return JointAction::from_index(l + 1);
  }
  return JointAction::from_index(1);
}

}  // namespace

FeatureMap traffic_features(const TrafficContext& c) {
  if (!(c.tau1 > 0.0) || !(c.tau2 > 0.0) || !std::isfinite(c.tau1) ||
      !std::isfinite(c.tau2)) {
    throw InvalidArgument("times to the conflict point must be positive");
  }
  const double abs_delta = std::abs(c.tau2 - c.tau1);
  // Player 1 goes alone in a(3) = (go, wait), player 2 in a(2) = (wait, go).
  return {traffic_player(c.tau1, abs_delta, 2),
          traffic_player(c.tau2, abs_delta, 1)};
}

FeatureMap traffic_features(const KinematicState& k) {
  const KinematicState v = KinematicState::checked(k.v1, k.v2, k.d1, k.d2);
  return traffic_features(TrafficContext::from_state(v));
}

FeatureSource traffic_feature_source() {
  return FeatureSource::per_record(
      [](const TrafficContext& c) { return traffic_features(c); },
      kTrafficFeatureDim, kTrafficFeatureDim);
}

FeatureMap chicken_dare_features() {
  // Rows a(1) = (wait, wait), a(2) = (wait, go), a(3) = (go, wait),
  // a(4) = (go, go); columns (advance, safety).
  FeatureMatrix p1({std::vector<double>{0, 1}, {0, 1}, {1, 1}, {0, -1}});
  FeatureMatrix p2({std::vector<double>{0, 1}, {1, 1}, {0, 1}, {0, -1}});
  return {p1, p2};
}

Game2x2 chicken_dare_game(const WeightVector& w1, const WeightVector& w2) {
  if (w1.dim() != 2 || w2.dim() != 2) {
    throw InvalidArgument("chicken-dare weights are 2-dimensional");
  }
  Game2x2 g = build_game(chicken_dare_features(), w1, w2);
  if (classify_game(g) == GameClass::kDegenerate) {
    throw InvalidArgument("chicken-dare weights give a degenerate game");
  }
  return g;
}

WeightPair chicken_ground_truth() {
  return {WeightVector::on_simplex({0.3, 0.7}),
          WeightVector::on_simplex({0.4, 0.6})};
}

WeightPair traffic_ground_truth() {
  return {WeightVector::on_simplex({0.05, 0, 0.02, 0, 0.90, 0, 0.03, 0}),
          WeightVector::on_simplex({0.01, 0, 0.04, 0, 0.94, 0, 0.01, 0})};
}

SweepGrid SweepGrid::from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("sweep grid must be a JSON object");
  SweepGrid g;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "v_min") g.v_min = value.get<double>();
      else if (key == "v_max") g.v_max = value.get<double>();
      else if (key == "v_steps") g.v_steps = value.get<int>();
      else if (key == "d1_min") g.d1_min = value.get<double>();
      else if (key == "d1_max") g.d1_max = value.get<double>();
      else if (key == "d2_min") g.d2_min = value.get<double>();
      else if (key == "d2_max") g.d2_max = value.get<double>();
      else if (key == "d_steps") g.d_steps = value.get<int>();
      else if (key == "jitter") g.jitter = value.get<double>();
      else throw InvalidArgument("unknown sweep key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("sweep grid: ") + e.what());
  }
  return g;
}

json SweepGrid::to_json() const {
  return {{"v_min", v_min},   {"v_max", v_max},   {"v_steps", v_steps},
          {"d1_min", d1_min}, {"d1_max", d1_max}, {"d2_min", d2_min},
          {"d2_max", d2_max}, {"d_steps", d_steps}, {"jitter", jitter}};
}

std::vector<KinematicState> sweep_traffic_scenarios(const SweepGrid& g,
                                                    std::uint64_t seed) {
  if (g.v_steps < 1 || g.d_steps < 1) {
    throw InvalidArgument("sweep grid is empty");
  }
  for (double x : {g.v_min, g.v_max, g.d1_min, g.d1_max, g.d2_min, g.d2_max}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidArgument("sweep ranges must be positive");
    }
  }
  if (g.v_max < g.v_min || g.d1_max < g.d1_min || g.d2_max < g.d2_min) {
    throw InvalidArgument("sweep ranges must satisfy min <= max");
  }
  if (!(g.jitter >= 0.0 && g.jitter < 1.0)) {
    throw InvalidArgument("jitter must lie in [0, 1)");
  }
  auto axis = [](double lo, double hi, int steps) {
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i) {
      v[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    }
    return v;
  };
  const auto vs = axis(g.v_min, g.v_max, g.v_steps);
  const auto d1s = axis(g.d1_min, g.d1_max, g.d_steps);
  const auto d2s = axis(g.d2_min, g.d2_max, g.d_steps);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-g.jitter, g.jitter);
  auto perturb = [&](double x) {
    return g.jitter > 0.0 ? x * (1.0 + jitter(rng)) : x;
  };
  std::vector<KinematicState> states;
  for (double v1 : vs) {
    for (double v2 : vs) {
      for (double d1 : d1s) {
        for (double d2 : d2s) {
          const double pv1 = perturb(v1);
          const double pv2 = perturb(v2);
          const double pd1 = perturb(d1);
          const double pd2 = perturb(d2);
          states.push_back(KinematicState::checked(pv1, pv2, pd1, pd2));
        }
      }
    }
  }
  return states;
}

Dataset sample_iid(const JointDistribution& p, int T, std::uint64_t seed) {
  if (T < 1) throw InvalidArgument("T must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset d;
  for (int t = 0; t < T; ++t) d.add(draw(p, unit(rng)));
  return d;
}

Dataset signaled_sample(const JointDistribution& device, int T,
                        std::uint64_t seed) {
  if (T < 1) throw InvalidArgument("T must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset d;
  for (int t = 0; t < T; ++t) {
    const JointAction recommended = draw(device, unit(rng));
    const JointAction played = recommended;  // obedient drivers
    d.add(played, std::nullopt, recommended);
  }
  return d;
}

Dataset uncoordinated_sample(const std::vector<KinematicState>& states,
                             double noise, std::uint64_t seed) {
  if (!(noise > 0.0) || !std::isfinite(noise)) {
    throw InvalidArgument("noise must be positive");
  }
  if (states.empty()) throw InvalidArgument("no scenario states");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset d;
  for (const KinematicState& k : states) {
    const double tau1 = k.tau1();
    const double tau2 = k.tau2();
    const bool go1 = unit(rng) < logistic((tau2 - tau1) / noise);
    const bool go2 = unit(rng) < logistic((tau1 - tau2) / noise);
    d.add(JointAction::from_actions(go1 ? 2 : 1, go2 ? 2 : 1),
          TrafficContext::from_state(k));
  }
  return d;
}

}  // namespace invgame
