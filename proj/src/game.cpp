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

#include "invgame/game.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "invgame/error.hpp"

namespace invgame {

FeatureMatrix::FeatureMatrix(std::array<std::vector<double>, 4> rows)
    : rows_(std::move(rows)) {
  const std::size_t d = rows_[0].size();
  if (d == 0) throw InvalidArgument("feature vectors must be non-empty");
  for (const auto& r : rows_) {
    if (r.size() != d) {
      throw InvalidArgument("feature rows differ in dimension");
    }
    for (double x : r) {
      if (!std::isfinite(x)) throw InvalidArgument("non-finite feature entry");
    }
  }
}

WeightVector WeightVector::on_simplex(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("weight vector is empty");
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("weights must be finite and non-negative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw InvalidArgument("weights must sum to 1 (got " + std::to_string(sum) +
                          ")");
  }
  return WeightVector(std::move(values));
}

std::string to_string(GameClass c) {
  switch (c) {
    case GameClass::kCoordination:
      return "coordination";
    case GameClass::kAntiCoordination:
      return "anti-coordination";
    case GameClass::kDominance:
      return "dominance";
    case GameClass::kDegenerate:
      return "degenerate";
  }
  return "unknown";
}

namespace {

double dot(const std::vector<double>& phi, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) s += phi[k] * w[k];
  return s;
}

}  // namespace

PayoffTable compute_payoffs(const FeatureMap& features,
                            std::span<const double> w1,
                            std::span<const double> w2) {
  PayoffTable u{};
  for (int l = 0; l < 4; ++l) {
    u[0][l] = dot(features.player1.rows()[l], w1);
    u[1][l] = dot(features.player2.rows()[l], w2);
  }
  return u;
}

Game2x2 build_game(const FeatureMap& features, const WeightVector& w1,
                   const WeightVector& w2) {
  if (features.player1.dim() != w1.dim()) {
    throw InvalidArgument("player 1 feature dimension " +
                          std::to_string(features.player1.dim()) +
                          " != weight dimension " + std::to_string(w1.dim()));
  }
  if (features.player2.dim() != w2.dim()) {
    throw InvalidArgument("player 2 feature dimension " +
                          std::to_string(features.player2.dim()) +
                          " != weight dimension " + std::to_string(w2.dim()));
  }
  PayoffTable u = compute_payoffs(features, w1.values(), w2.values());
  for (const auto& row : u) {
    for (double x : row) {
      if (!std::isfinite(x)) throw InvalidArgument("non-finite payoff");
    }
  }
  return Game2x2(features, w1, w2, u);
}

Game2x2 game_from_payoffs(const std::array<double, 4>& u1,
                          const std::array<double, 4>& u2) {
  auto column = [](const std::array<double, 4>& u) {
    return FeatureMatrix({std::vector<double>{u[0]}, std::vector<double>{u[1]},
                          std::vector<double>{u[2]},
                          std::vector<double>{u[3]}});
  };
  const WeightVector one = WeightVector::on_simplex({1.0});
  return build_game(FeatureMap{column(u1), column(u2)}, one, one);
}

double payoff(const Game2x2& g, Player p, JointAction a) {
  return g.payoff(p, a);
}

std::array<double, 4> payoff_differences(const PayoffTable& u) {
  return {u[0][0] - u[0][2], u[0][3] - u[0][1], u[1][0] - u[1][1],
          u[1][3] - u[1][2]};
}

GameClass classify_payoffs(const PayoffTable& u, double tol) {
  const auto d = payoff_differences(u);
  bool all_pos = true;
  bool all_neg = true;
  for (double x : d) {
    if (std::abs(x) <= tol) return GameClass::kDegenerate;
    all_pos = all_pos && x > 0.0;
    all_neg = all_neg && x < 0.0;
  }
  if (all_pos) return GameClass::kCoordination;
  if (all_neg) return GameClass::kAntiCoordination;
  return GameClass::kDominance;
}

GameClass classify_game(const Game2x2& g, double tol) {
  return classify_payoffs(g.payoffs(), tol);
}

std::array<double, 4> ce_constraint_values(const PayoffTable& u,
                                           const std::array<double, 4>& s) {
  const auto& u1 = u[0];
  const auto& u2 = u[1];
  return {
      s[0] * (u1[0] - u1[2]) + s[1] * (u1[1] - u1[3]),
      s[2] * (u1[2] - u1[0]) + s[3] * (u1[3] - u1[1]),
      s[0] * (u2[0] - u2[1]) + s[2] * (u2[2] - u2[3]),
      s[1] * (u2[1] - u2[0]) + s[3] * (u2[3] - u2[2]),
  };
}

std::array<double, 4> ce_constraint_values(const Game2x2& g,
                                           const JointDistribution& sigma) {
  return ce_constraint_values(g.payoffs(), sigma.probs());
}

std::string format_payoff_table(const Game2x2& g) {
  char buf[160];
  std::ostringstream os;
  auto cell = [&](int l) {
    std::snprintf(buf, sizeof(buf), "(%10.6f, %10.6f)", g.payoffs()[0][l],
                  g.payoffs()[1][l]);
    return std::string(buf);
  };
  std::snprintf(buf, sizeof(buf), "%-6s| %-24s  %-24s\n", "", "a2^1", "a2^2");
  os << buf;
  os << std::string(6, '-') << '+' << std::string(52, '-') << '\n';
  os << "a1^1  | " << cell(0) << "  " << cell(1) << '\n';
  os << "a1^2  | " << cell(2) << "  " << cell(3) << '\n';
  return os.str();
}

}  // namespace invgame
