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

#ifndef INVGAME_TESTS_ORACLES_HPP_
#define INVGAME_TESTS_ORACLES_HPP_

// Reference computations written directly from the model definitions,
// independent of the library code paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace oracle {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

// The coordination game used throughout the tests:
// u1 = (4,1,2,3), u2 = (3,1,2,4) over a1..a4.
inline constexpr Vec4 kCoordU1{4, 1, 2, 3};
inline constexpr Vec4 kCoordU2{3, 1, 2, 4};

inline double tv(const Vec4& p, const Vec4& q) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

inline double entropy(const Vec4& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

// Expected gain of obeying a recommendation over each one-step deviation:
// player 1 1->2, player 1 2->1, player 2 1->2, player 2 2->1.
inline Vec4 ce_constraints(const Vec4& u1, const Vec4& u2, const Vec4& s) {
  return {s[0] * (u1[0] - u1[2]) + s[1] * (u1[1] - u1[3]),
          s[2] * (u1[2] - u1[0]) + s[3] * (u1[3] - u1[1]),
          s[0] * (u2[0] - u2[1]) + s[2] * (u2[2] - u2[3]),
          s[1] * (u2[1] - u2[0]) + s[3] * (u2[3] - u2[2])};
}

inline bool is_ce(const Vec4& u1, const Vec4& u2, const Vec4& s, double tol) {
  for (double c : ce_constraints(u1, u2, s))
    if (c < -tol) return false;
  return true;
}

// Logit choice probability of action 1 when it pays x and action 2 pays y.
inline double logit_first(double lambda, double x, double y) {
  const double e1 = std::exp(lambda * x);
  const double e2 = std::exp(lambda * y);
  return e1 / (e1 + e2);
}

// Each player logit-responds to the opponent's current action; the next joint
// action is the product of the two responses.
inline Mat4 lbr_transition(const Vec4& u1, const Vec4& u2, double l1,
                           double l2) {
  Mat4 p{};
  for (int from = 0; from < 4; ++from) {
    const int a1 = from / 2;  // 0 or 1
    const int a2 = from % 2;
    // Player 1 against opponent action a2: compares (1,a2) with (2,a2).
    const double p1 = logit_first(l1, u1[0 * 2 + a2], u1[1 * 2 + a2]);
    // Player 2 against opponent action a1: compares (a1,1) with (a1,2).
    const double p2 = logit_first(l2, u2[a1 * 2 + 0], u2[a1 * 2 + 1]);
    for (int to = 0; to < 4; ++to) {
      const double q1 = (to / 2 == 0) ? p1 : 1.0 - p1;
      const double q2 = (to % 2 == 0) ? p2 : 1.0 - p2;
      p[from][to] = q1 * q2;
    }
  }
  return p;
}

inline Vec4 power_iteration(const Mat4& p, double tol, int max_iter = 10000000) {
  Vec4 s{0.25, 0.25, 0.25, 0.25};
  for (int it = 0; it < max_iter; ++it) {
    Vec4 n{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) n[j] += s[i] * p[i][j];
    double sum = n[0] + n[1] + n[2] + n[3];
    for (double& x : n) x /= sum;
    const double change = tv(n, s);
    s = n;
    if (change <= tol) break;
  }
  return s;
}

// Largest entropy over the CE set restricted to a regular grid of the
// simplex with the given number of divisions.
inline double grid_max_entropy_ce(const Vec4& u1, const Vec4& u2,
                                  int divisions, double tol = 1e-12) {
  double best = -1.0;
  const double h = 1.0 / divisions;
  for (int i = 0; i <= divisions; ++i)
    for (int j = 0; i + j <= divisions; ++j)
      for (int k = 0; i + j + k <= divisions; ++k) {
        const int l = divisions - i - j - k;
        const Vec4 s{i * h, j * h, k * h, l * h};
        if (is_ce(u1, u2, s, tol)) best = std::max(best, entropy(s));
      }
  return best;
}

}  // namespace oracle

#endif  // INVGAME_TESTS_ORACLES_HPP_
