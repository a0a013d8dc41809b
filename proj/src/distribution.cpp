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

#include "invgame/distribution.hpp"

#include <cmath>
#include <sstream>

#include "invgame/error.hpp"

namespace invgame {

JointAction JointAction::from_index(int index) {
  if (index < 1 || index > kNumJointActions) {
    throw InvalidArgument("joint action index must be in 1..4, got " +
                          std::to_string(index));
  }
  return JointAction(index);
}

JointAction JointAction::from_actions(int player1_action, int player2_action) {
  if (player1_action < 1 || player1_action > 2 || player2_action < 1 ||
      player2_action > 2) {
    throw InvalidArgument("player actions must be 1 or 2");
  }
  return JointAction((player1_action - 1) * 2 + player2_action);
}

JointDistribution JointDistribution::from_probs(
    const std::array<double, 4>& probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidArgument("distribution entries must be finite and >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw InvalidArgument("distribution must sum to 1 (got " +
                          std::to_string(sum) + ")");
  }
  return JointDistribution(probs);
}

JointDistribution JointDistribution::normalized(
    const std::array<double, 4>& weights) {
  std::array<double, 4> p{};
  double sum = 0.0;
  for (int l = 0; l < 4; ++l) {
    if (!std::isfinite(weights[l])) {
      throw InvalidArgument("distribution weights must be finite");
    }
    p[l] = weights[l] > 0.0 ? weights[l] : 0.0;
    sum += p[l];
  }
  if (sum <= 0.0) throw InvalidArgument("distribution weights sum to zero");
  for (double& v : p) v /= sum;
  return JointDistribution(p);
}

JointDistribution JointDistribution::uniform() {
  return JointDistribution({0.25, 0.25, 0.25, 0.25});
}

JointDistribution JointDistribution::point_mass(JointAction a) {
  std::array<double, 4> p{};
  p[a.offset()] = 1.0;
  return JointDistribution(p);
}

double JointDistribution::entropy() const {
  double h = 0.0;
  for (double p : probs_) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

JointAction JointDistribution::argmax() const {
  int best = 0;
  for (int l = 1; l < 4; ++l) {
    if (probs_[l] > probs_[best]) best = l;
  }
  return JointAction::from_index(best + 1);
}

std::string JointDistribution::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << '[' << probs_[0] << ',' << probs_[1] << ',' << probs_[2] << ','
     << probs_[3] << ']';
  return os.str();
}

double tv_distance(const JointDistribution& p, const JointDistribution& q) {
  double s = 0.0;
  for (int l = 0; l < 4; ++l) s += std::abs(p.at(l) - q.at(l));
  return 0.5 * s;
}

}  // namespace invgame
