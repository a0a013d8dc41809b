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

#include "invgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "invgame/error.hpp"

namespace invgame {

MixtureWeights MixtureWeights::on_simplex(const std::array<double, 5>& y) {
  double sum = 0.0;
  for (double v : y) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("mixture weights must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw InvalidArgument("mixture weights must sum to 1");
  }
  return MixtureWeights(y);
}

AlphaBeta alpha_beta(const PayoffTable& u) {
  if (classify_payoffs(u) == GameClass::kDegenerate) {
    throw InvalidArgument("dominated/degenerate payoffs");
  }
  const auto d = payoff_differences(u);
  return {std::abs(d[0]) / std::abs(d[1]), std::abs(d[2]) / std::abs(d[3])};
}

AlphaBeta alpha_beta(const Game2x2& g) { return alpha_beta(g.payoffs()); }

std::array<double, 4> from_table_order(const std::array<double, 4>& row) {
  // Vertex formulas are written in column order a(1), a(4), a(3), a(2).
  return {row[0], row[3], row[2], row[1]};
}

std::array<std::array<double, 4>, kNumCeVertices> ce_vertex_probs(
    const PayoffTable& u, GameClass cls) {
  const auto d = payoff_differences(u);
  const double a = std::abs(d[0]) / std::abs(d[1]);
  double b = std::abs(d[2]) / std::abs(d[3]);
  const bool anti = cls == GameClass::kAntiCoordination;
  if (anti) b = 1.0 / b;

  const double d3 = (1.0 + a) * (1.0 + b);
  const double d4 = 1.0 + b + a * b;
  const double d5 = 1.0 + a + a * b;
  std::array<std::array<double, 4>, kNumCeVertices> v = {{
      from_table_order({1.0, 0.0, 0.0, 0.0}),
      from_table_order({0.0, 1.0, 0.0, 0.0}),
      from_table_order({1.0 / d3, a * b / d3, b / d3, a / d3}),
      from_table_order({1.0 / d4, a * b / d4, b / d4, 0.0}),
      from_table_order({1.0 / d5, a * b / d5, 0.0, a / d5}),
  }};
  if (anti) {
    // Diagonal <-> off-diagonal: a(1) <-> a(3), a(4) <-> a(2).
    for (auto& p : v) {
      std::swap(p[0], p[2]);
      std::swap(p[3], p[1]);
    }
  }
  return v;
}

CeVertexSet ce_vertices(const PayoffTable& u) {
  const GameClass cls = classify_payoffs(u);
  if (cls != GameClass::kCoordination && cls != GameClass::kAntiCoordination) {
    throw InvalidArgument(
        "CE polytope characterization requires (anti-)coordination structure "
        "(game is " + to_string(cls) + ")");
  }
  const auto probs = ce_vertex_probs(u, cls);
  return CeVertexSet{
      cls,
      {JointDistribution::normalized(probs[0]),
       JointDistribution::normalized(probs[1]),
       JointDistribution::normalized(probs[2]),
       JointDistribution::normalized(probs[3]),
       JointDistribution::normalized(probs[4])}};
}

CeVertexSet ce_vertices(const Game2x2& g) { return ce_vertices(g.payoffs()); }

JointDistribution mixture_distribution(const CeVertexSet& v,
                                       const MixtureWeights& y) {
  std::array<double, 4> p{};
  for (int k = 0; k < kNumCeVertices; ++k) {
    for (int l = 0; l < 4; ++l) p[l] += y[k] * v.vertices[k].at(l);
  }
  return JointDistribution::normalized(p);
}

bool is_ce(const PayoffTable& u, const JointDistribution& sigma, double tol) {
  const auto c = ce_constraint_values(u, sigma.probs());
  return *std::min_element(c.begin(), c.end()) >= -tol;
}

bool is_ce(const Game2x2& g, const JointDistribution& sigma, double tol) {
  return is_ce(g.payoffs(), sigma, tol);
}

namespace {

using Vec4 = std::array<double, 4>;

// Euclidean projection onto the probability simplex.
Vec4 project_to_simplex(const Vec4& x) {
  Vec4 s = x;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (int k = 0; k < 4; ++k) {
    cumulative += s[k];
    const double t = (cumulative - 1.0) / (k + 1);
    if (s[k] - t > 0.0) theta = t;
  }
  Vec4 p;
  for (int k = 0; k < 4; ++k) p[k] = std::max(x[k] - theta, 0.0);
  return p;
}

double entropy(const Vec4& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double max_violation(const PayoffTable& u, const Vec4& p) {
  const auto c = ce_constraint_values(u, p);
  double v = 0.0;
  for (double x : c) v = std::max(v, -x);
  return v;
}

// Coefficient rows of the four constraints: value_k = coef[k] . p.
std::array<Vec4, 4> constraint_rows(const PayoffTable& u) {
  std::array<Vec4, 4> rows{};
  for (int l = 0; l < 4; ++l) {
    Vec4 e{};
    e[l] = 1.0;
    const auto c = ce_constraint_values(u, e);
    for (int k = 0; k < 4; ++k) rows[k][l] = c[k];
  }
  return rows;
}

class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const PayoffTable& u, const MaxEntropyOptions& opts)
      : u_(u), rows_(constraint_rows(u)), opts_(opts) {}

  // Returns the final iterate and its violation.
  std::pair<Vec4, double> solve(Vec4 p) const {
    Vec4 mu{};
    double rho = 10.0;
    double previous_violation = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < opts_.max_outer_iterations; ++outer) {
      p = maximize_inner(p, mu, rho);
      const double viol = max_violation(u_, p);
      for (int k = 0; k < 4; ++k) {
        mu[k] = std::max(0.0, mu[k] - rho * dot(rows_[k], p));
      }
      if (viol <= opts_.feasibility_tol) return {p, viol};
      if (viol > 0.25 * previous_violation) rho = std::min(rho * 10.0, 1e12);
      previous_violation = viol;
    }
    return {p, max_violation(u_, p)};
  }

 private:
  static double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
  }

  double value(const Vec4& p, const Vec4& mu, double rho) const {
    double v = entropy(p);
    for (int k = 0; k < 4; ++k) {
      const double s = std::max(0.0, mu[k] - rho * dot(rows_[k], p));
      v -= (s * s - mu[k] * mu[k]) / (2.0 * rho);
    }
    return v;
  }

  Vec4 gradient(const Vec4& p, const Vec4& mu, double rho) const {
    Vec4 g;
    for (int l = 0; l < 4; ++l) g[l] = -std::log(std::max(p[l], 1e-300)) - 1.0;
    for (int k = 0; k < 4; ++k) {
      const double s = std::max(0.0, mu[k] - rho * dot(rows_[k], p));
      for (int l = 0; l < 4; ++l) g[l] += s * rows_[k][l];
    }
    return g;
  }

  Vec4 maximize_inner(Vec4 p, const Vec4& mu, double rho) const {
    double step = 1e-2;
    double f = value(p, mu, rho);
    int stalled = 0;
    for (int it = 0; it < opts_.max_inner_iterations; ++it) {
      const Vec4 g = gradient(p, mu, rho);
      bool accepted = false;
      Vec4 next{};
      double f_next = f;
      for (int bt = 0; bt < 60; ++bt) {
        Vec4 trial;
        for (int l = 0; l < 4; ++l) trial[l] = p[l] + step * g[l];
        next = project_to_simplex(trial);
        f_next = value(next, mu, rho);
        double decrease = 0.0;
        for (int l = 0; l < 4; ++l) decrease += g[l] * (next[l] - p[l]);
        double dist2 = 0.0;
        for (int l = 0; l < 4; ++l) dist2 += (next[l] - p[l]) * (next[l] - p[l]);
        if (f_next >= f + 1e-4 * decrease - 1e-15 ||
            dist2 < 1e-32) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      double moved = 0.0;
      for (int l = 0; l < 4; ++l) moved += std::abs(next[l] - p[l]);
      const double gain = f_next - f;
      p = next;
      f = f_next;
      if (moved < 1e-15) break;
      stalled = gain <= 1e-15 * (1.0 + std::abs(f)) ? stalled + 1 : 0;
      if (stalled >= 3) break;
      step = std::min(step * 2.0, 1.0);
    }
    return p;
  }

  const PayoffTable& u_;
  std::array<Vec4, 4> rows_;
  MaxEntropyOptions opts_;
};

}  // namespace

MaxEntropyResult max_entropy_ce_detailed(const PayoffTable& u,
                                         const MaxEntropyOptions& opts) {
  std::vector<Vec4> starts = {{0.25, 0.25, 0.25, 0.25}};
  const GameClass cls = classify_payoffs(u);
  if (cls == GameClass::kCoordination || cls == GameClass::kAntiCoordination) {
    for (const auto& v : ce_vertex_probs(u, cls)) starts.push_back(v);
  } else {
    for (int l = 0; l < 4; ++l) {
      Vec4 e{};
      e[l] = 1.0;
      starts.push_back(e);
    }
  }

  const AugmentedLagrangian solver(u, opts);
  Vec4 best{};
  double best_entropy = -1.0;
  double best_violation = std::numeric_limits<double>::infinity();
  Vec4 fallback{};
  double fallback_violation = std::numeric_limits<double>::infinity();
  int converged = 0;
  for (const Vec4& s : starts) {
    const auto [p, viol] = solver.solve(s);
    if (viol <= opts.feasibility_tol) {
      ++converged;
      const double h = entropy(p);
      if (h > best_entropy) {
        best = p;
        best_entropy = h;
        best_violation = viol;
      }
    } else if (viol < fallback_violation) {
      fallback = p;
      fallback_violation = viol;
    }
  }
  if (converged == 0) {
    throw NotConverged("max-entropy CE solver did not reach feasibility",
                       {fallback.begin(), fallback.end()}, fallback_violation);
  }
  const JointDistribution dist = JointDistribution::normalized(best);
  return {dist, dist.entropy(), best_violation, converged};
}

JointDistribution max_entropy_ce(const PayoffTable& u,
                                 const MaxEntropyOptions& opts) {
  return max_entropy_ce_detailed(u, opts).distribution;
}

JointDistribution max_entropy_ce(const Game2x2& g,
                                 const MaxEntropyOptions& opts) {
  return max_entropy_ce(g.payoffs(), opts);
}

}  // namespace invgame
