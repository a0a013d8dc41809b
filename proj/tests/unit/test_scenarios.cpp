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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "invgame/error.hpp"
#include "invgame/estimation.hpp"
#include "invgame/scenarios.hpp"

namespace invgame {
namespace {

// Payoffs written directly from the traffic payoff table, wait = 1, go = 2.
PayoffTable traffic_table(double tau1, double tau2, const std::vector<double>& w1,
                          const std::vector<double>& w2) {
  const double ad = std::abs(tau2 - tau1);
  auto both_wait = [&](const std::vector<double>& w) { return -w[6] * ad + w[7]; };
  auto go_alone = [&](const std::vector<double>& w, double tau) {
    return w[0] / tau + w[1];
  };
  auto yield = [&](const std::vector<double>& w, double tau) {
    return -w[2] * tau + w[3];
  };
  auto both_go = [&](const std::vector<double>& w) {
    return -w[4] / (ad + kCollisionEpsilon) + w[5];
  };
  PayoffTable u;
  u[0] = {both_wait(w1), yield(w1, tau1), go_alone(w1, tau1), both_go(w1)};
  u[1] = {both_wait(w2), go_alone(w2, tau2), yield(w2, tau2), both_go(w2)};
  return u;
}

TEST(Traffic, PayoffExamples) {
  auto truth = traffic_ground_truth();
  auto g = build_game(traffic_features(KinematicState{10, 10, 20, 30}), truth.w1,
                      truth.w2);
  EXPECT_NEAR(g.payoff(Player::kOne, JointAction::from_index(4)),
              -0.9 / (1 + 1e-6), 1e-12);
  EXPECT_NEAR(g.payoff(Player::kTwo, JointAction::from_index(2)), 0.01 / 3, 1e-12);
}

TEST(Traffic, GroundTruthHasNoIntercepts) {
  auto truth = traffic_ground_truth();
  for (int k = 1; k < kTrafficFeatureDim; k += 2) {
    EXPECT_EQ(truth.w1[k], 0.0);
    EXPECT_EQ(truth.w2[k], 0.0);
  }
}

TEST(Traffic, CollisionGuardAtZeroGap) {
  auto f = traffic_features(KinematicState{10, 10, 20, 20});
  EXPECT_DOUBLE_EQ(f.player1.row(JointAction::from_index(4))[4], -1e6);
  EXPECT_DOUBLE_EQ(f.player2.row(JointAction::from_index(4))[4], -1e6);
}

TEST(Traffic, NonpositiveInputsRejected) {
  EXPECT_THROW(traffic_features(KinematicState{0, 10, 20, 20}), InvalidArgument);
  EXPECT_THROW(traffic_features(KinematicState{10, 10, 20, -5}), InvalidArgument);
}

TEST(Traffic, FeaturesMatchPayoffTable) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> v(1, 30), d(1, 200);
  std::exponential_distribution<double> e(1.0);
  auto simplex = [&] {
    std::vector<double> w(kTrafficFeatureDim);
    double s = 0;
    for (auto& x : w) s += (x = e(rng));
    for (auto& x : w) x /= s;
    return w;
  };
  for (int n = 0; n < 1000; ++n) {
    KinematicState k{v(rng), v(rng), d(rng), d(rng)};
    auto w1 = simplex(), w2 = simplex();
    auto g = build_game(traffic_features(k), WeightVector::on_simplex(w1),
                        WeightVector::on_simplex(w2));
    auto want = traffic_table(k.tau1(), k.tau2(), w1, w2);
    for (int p = 0; p < 2; ++p)
      for (int l = 0; l < 4; ++l)
        EXPECT_NEAR(g.payoffs()[p][l], want[p][l],
                    1e-12 * std::max(1.0, std::abs(want[p][l])));
  }
}

TEST(Traffic, SwappingAgentsSwapsPlayers) {
  KinematicState k{9, 12, 25, 41};
  KinematicState s{k.v2, k.v1, k.d2, k.d1};
  EXPECT_DOUBLE_EQ(s.delta(), -k.delta());
  auto f = traffic_features(k), g = traffic_features(s);
  // Player roles swap, and the joint action (x, y) becomes (y, x).
  const int swap[4] = {1, 3, 2, 4};
  for (int l = 1; l <= 4; ++l) {
    EXPECT_EQ(g.player1.row(JointAction::from_index(swap[l - 1])),
              f.player2.row(JointAction::from_index(l)));
    EXPECT_EQ(g.player2.row(JointAction::from_index(swap[l - 1])),
              f.player1.row(JointAction::from_index(l)));
  }
}

TEST(Chicken, InteriorWeightsGiveAntiCoordination) {
  auto truth = chicken_ground_truth();
  EXPECT_EQ(classify_game(chicken_dare_game(truth.w1, truth.w2)),
            GameClass::kAntiCoordination);
  auto half = WeightVector::on_simplex({0.5, 0.5});
  EXPECT_EQ(classify_game(chicken_dare_game(half, half)),
            GameClass::kAntiCoordination);
  for (int i = 1; i < 100; ++i) {
    auto w = WeightVector::on_simplex({i / 100.0, 1 - i / 100.0});
    EXPECT_EQ(classify_game(chicken_dare_game(w, half)),
              GameClass::kAntiCoordination);
  }
}

TEST(Chicken, BoundaryWeightsAreDegenerate) {
  auto half = WeightVector::on_simplex({0.5, 0.5});
  EXPECT_THROW(chicken_dare_game(WeightVector::on_simplex({1, 0}), half),
               InvalidArgument);
  EXPECT_THROW(chicken_dare_game(WeightVector::on_simplex({0.5, 0.3, 0.2}), half),
               InvalidArgument);
}

TEST(Sweep, LatticeArithmetic) {
  SweepGrid g;
  g.v_min = g.v_max = 10;
  g.v_steps = 1;
  g.d1_min = g.d2_min = 20;
  g.d1_max = g.d2_max = 30;
  g.d_steps = 2;
  g.jitter = 0;
  auto states = sweep_traffic_scenarios(g, 1);
  ASSERT_EQ(states.size(), 4u);
  for (const auto& s : states) {
    EXPECT_TRUE(s.tau1() == 2.0 || s.tau1() == 3.0);
    EXPECT_TRUE(s.tau2() == 2.0 || s.tau2() == 3.0);
  }
  EXPECT_EQ(sweep_traffic_scenarios(g, 1).size(), sweep_traffic_scenarios(g, 2).size());
  auto again = sweep_traffic_scenarios(g, 7);
  for (std::size_t i = 0; i < states.size(); ++i) {
    EXPECT_EQ(states[i].d1, again[i].d1);
    EXPECT_EQ(states[i].d2, again[i].d2);
  }
}

TEST(Sweep, EmptyOrInvalidGridRejected) {
  SweepGrid g;
  g.v_steps = 0;
  EXPECT_THROW(sweep_traffic_scenarios(g, 1), InvalidArgument);
  SweepGrid h;
  h.d1_min = -1;
  EXPECT_THROW(sweep_traffic_scenarios(h, 1), InvalidArgument);
}

TEST(Sweep, LargeSweepIsNondegenerate) {
  SweepGrid g;
  g.v_steps = 10;
  g.d_steps = 10;
  auto states = sweep_traffic_scenarios(g, 3);
  ASSERT_EQ(states.size(), 10000u);
  double sum = 0, sq = 0;
  for (const auto& s : states) {
    ASSERT_TRUE(std::isfinite(s.delta()));
    sum += std::abs(s.delta());
    sq += s.delta() * s.delta();
  }
  const double mean = sum / states.size();
  EXPECT_GT(sq / states.size() - mean * mean, 0.0);
}

TEST(Sweep, JsonRoundTrip) {
  SweepGrid g;
  g.v_steps = 4;
  g.jitter = 0.1;
  auto back = SweepGrid::from_json(g.to_json());
  EXPECT_EQ(back.v_steps, 4);
  EXPECT_EQ(back.jitter, 0.1);
}

TEST(Iid, PointMassAndUniform) {
  auto d = sample_iid(JointDistribution::point_mass(JointAction::from_index(3)), 100, 4);
  for (const auto& r : d.records()) EXPECT_EQ(r.action.index(), 3);
  auto n = counts(sample_iid(JointDistribution::uniform(), 2000, 5));
  for (long long c : n.n) {
    EXPECT_GE(c, 400);
    EXPECT_LE(c, 600);
  }
  EXPECT_EQ(sample_iid(JointDistribution::uniform(), 300, 6),
            sample_iid(JointDistribution::uniform(), 300, 6));
  for (int t = 0; t < d.size(); ++t) EXPECT_EQ(d[t].t, t + 1);
}

TEST(Signaled, VertexDeviceSupportAndObedience) {
  auto u = build_game(traffic_features(KinematicState{10, 10, 20, 30}),
                      traffic_ground_truth().w1, traffic_ground_truth().w2);
  auto device = ce_vertices(u).vertices[3];
  int zero = -1;
  for (int l = 0; l < 4; ++l)
    if (device.at(l) == 0.0) zero = l;
  ASSERT_GE(zero, 0);
  auto d = signaled_sample(device, 500, 8);
  EXPECT_EQ(counts(d).n[zero], 0);
  for (const auto& r : d.records()) {
    ASSERT_TRUE(r.recommendation.has_value());
    EXPECT_EQ(*r.recommendation, r.action);
  }
}

TEST(Signaled, SameLawAsIid) {
  auto p = JointDistribution::from_probs({0.1, 0.2, 0.3, 0.4});
  auto a = counts(signaled_sample(p, 10000, 1)).empirical();
  auto b = counts(sample_iid(p, 10000, 2)).empirical();
  EXPECT_LT(tv_distance(a, b), 0.05);
  auto uniform_signal = counts(signaled_sample(JointDistribution::uniform(), 2000, 3));
  for (long long c : uniform_signal.n) {
    EXPECT_GE(c, 400);
    EXPECT_LE(c, 600);
  }
}

TEST(Uncoordinated, EarlyArrivalGoes) {
  std::vector<KinematicState> states(200, KinematicState{10, 10, 10, 100});
  auto d = uncoordinated_sample(states, 0.01, 1);
  for (const auto& r : d.records()) EXPECT_EQ(r.action.index(), 3);  // (go, wait)
}

TEST(Uncoordinated, EqualTimesAreFairCoins) {
  std::vector<KinematicState> states(20000, KinematicState{10, 10, 30, 30});
  auto p = counts(uncoordinated_sample(states, 1.0, 2)).empirical();
  EXPECT_NEAR(p.at(3), 0.25, 0.015);
  EXPECT_NEAR(p.at(2) + p.at(3), 0.5, 0.015);
}

TEST(Uncoordinated, DefaultSweepShowsEveryAction) {
  auto states = sweep_traffic_scenarios(SweepGrid{}, 1);
  std::vector<KinematicState> cycled;
  for (int t = 0; t < 500; ++t) cycled.push_back(states[t % states.size()]);
  auto d = uncoordinated_sample(cycled, kDefaultDriverNoise, 3);
  for (long long c : counts(d).n) EXPECT_GT(c, 0);
  for (const auto& r : d.records()) ASSERT_TRUE(r.context.has_value());
  EXPECT_THROW(uncoordinated_sample(cycled, 0.0, 3), InvalidArgument);
}

}  // namespace
}  // namespace invgame
