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

#include "invgame/estimation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include "invgame/error.hpp"

namespace invgame {

using nlohmann::json;

JointDistribution CountVector::empirical() const {
  const long long t = total();
  if (t <= 0) throw InvalidArgument("empirical distribution of zero counts");
  std::array<double, 4> p;
  for (int l = 0; l < 4; ++l) p[l] = static_cast<double>(n[l]) / t;
  return JointDistribution::normalized(p);
}

CountVector& CountVector::operator+=(const CountVector& other) {
  for (int l = 0; l < 4; ++l) n[l] += other.n[l];
  return *this;
}

CountVector counts(const Dataset& d) {
  if (d.empty()) throw InvalidArgument("dataset is empty");
  CountVector c;
  for (const Record& r : d.records()) ++c.n[r.action.offset()];
  return c;
}

double nll(const std::array<double, 4>& p, const CountVector& n,
           double floor) {
  double v = 0.0;
  for (int l = 0; l < 4; ++l) {
    if (n.n[l] > 0) v -= n.n[l] * std::log(std::max(p[l], floor));
  }
  return v;
}

double nll(const JointDistribution& p, const CountVector& n, double floor) {
  return nll(p.probs(), n, floor);
}

FeatureSource FeatureSource::fixed(FeatureMap features) {
  FeatureSource s;
  s.dim1_ = features.player1.dim();
  s.dim2_ = features.player2.dim();
  s.fixed_ = std::move(features);
  return s;
}

FeatureSource FeatureSource::per_record(Builder builder, int dim1, int dim2) {
  if (!builder) throw InvalidArgument("per-record feature builder is empty");
  FeatureSource s;
  s.builder_ = std::move(builder);
  s.dim1_ = dim1;
  s.dim2_ = dim2;
  return s;
}

FeatureMap FeatureSource::features_for(const Record& r) const {
  if (fixed_) return *fixed_;
  if (!r.context) {
    throw InvalidArgument("record " + std::to_string(r.t) +
                          " has no kinematic context for per-record features");
  }
  FeatureMap f = builder_(*r.context);
  if (f.player1.dim() != dim1_ || f.player2.dim() != dim2_) {
    throw InvalidArgument("feature builder returned unexpected dimensions");
  }
  return f;
}

std::vector<ObservationCell> group_observations(const Dataset& d,
                                                const FeatureSource& source) {
  if (d.empty()) throw InvalidArgument("dataset is empty");
  if (source.is_fixed()) {
    return {ObservationCell{source.features_for(d[0]), counts(d)}};
  }
  std::vector<ObservationCell> cells;
  std::map<std::tuple<double, double, double>, std::size_t> index;
  for (const Record& r : d.records()) {
    if (!r.context) {
      throw InvalidArgument("record " + std::to_string(r.t) +
                            " has no kinematic context for per-record features");
    }
    const auto key =
        std::make_tuple(r.context->tau1, r.context->tau2, r.context->delta);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      cells.push_back({source.features_for(r), CountVector{}});
    }
    ++cells[it->second].counts.n[r.action.offset()];
  }
  return cells;
}

OptimizeConfig FitConfig::optimizer() const {
  OptimizeConfig o;
  o.restarts = restarts;
  o.max_iter = max_iter;
  o.seed = seed;
  o.parallel = parallel;
  o.jobs = jobs;
  return o;
}

FitConfig FitConfig::from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("fit config must be a JSON object");
  FitConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "restarts") {
        c.restarts = value.get<int>();
      } else if (key == "max_iter") {
        c.max_iter = value.get<int>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "lambda_grid") {
        c.lambda_grid = value.get<std::vector<double>>();
      } else if (key == "lambda_max") {
        c.lambda_max = value.get<double>();
      } else if (key == "floor") {
        c.floor = value.get<double>();
      } else if (key == "fixed_lambda") {
        if (!value.is_null()) {
          const auto l = value.get<std::vector<double>>();
          if (l.size() != 2) throw InvalidArgument("fixed_lambda needs 2 values");
          c.fixed_lambda = Rationality::checked(l[0], l[1]);
        }
      } else if (key == "jobs") {
        c.jobs = value.get<int>();
      } else if (key == "parallel") {
        c.parallel = value.get<bool>();
      } else {
        throw InvalidArgument("unknown fit config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("fit config: ") + e.what());
  }
  if (c.restarts < 1) throw InvalidArgument("restarts must be >= 1");
  if (c.max_iter < 0) throw InvalidArgument("max_iter must be >= 0");
  if (!(c.lambda_max > 0.0) || !std::isfinite(c.lambda_max)) {
    throw InvalidArgument("lambda_max must be positive and finite");
  }
  if (c.lambda_grid.empty()) throw InvalidArgument("lambda_grid is empty");
  for (double l : c.lambda_grid) {
    if (!(l >= 0.0 && l <= c.lambda_max)) {
      throw InvalidArgument("lambda_grid values must lie in [0, lambda_max]");
    }
  }
  if (!(c.floor > 0.0 && c.floor < 1.0)) {
    throw InvalidArgument("floor must lie in (0, 1)");
  }
  return c;
}

json FitConfig::to_json() const {
  json j = {{"restarts", restarts},       {"max_iter", max_iter},
            {"seed", seed},               {"lambda_grid", lambda_grid},
            {"lambda_max", lambda_max},   {"floor", floor},
            {"jobs", jobs},               {"parallel", parallel}};
  j["fixed_lambda"] = fixed_lambda
                          ? json::array({fixed_lambda->lambda1,
                                         fixed_lambda->lambda2})
                          : json(nullptr);
  return j;
}

FitConfig load_fit_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open fit config '" + path + "'");
  try {
    return FitConfig::from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

namespace {

constexpr double kInfeasibleBase = 1e10;
constexpr double kClassMargin = 1e-6;

FitDiagnostics diagnostics_of(const OptimizeResult& r) {
  return {static_cast<int>(r.restarts.size()), r.best_restart,
          r.restarts[r.best_restart].iterations, r.converged, r.trace};
}

WeightVector simplex_part(std::span<const double> x) {
  return WeightVector::on_simplex({x.begin(), x.end()});
}

// Distance of the payoff differences from the nearer of the two admissible
// sign patterns.
double class_shortfall(const PayoffTable& u) {
  const auto d = payoff_differences(u);
  double best = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    double s = 0.0;
    for (double v : d) s += std::max(0.0, kClassMargin - sign * v);
    best = std::min(best, s);
  }
  return best;
}

std::array<double, 4> mixture_probs(const PayoffTable& u, GameClass cls,
                                    std::span<const double> y) {
  const auto v = ce_vertex_probs(u, cls);
  std::array<double, 4> p{};
  for (int k = 0; k < kNumCeVertices; ++k) {
    for (int l = 0; l < 4; ++l) p[l] += y[k] * v[k][l];
  }
  return p;
}

// Count-weighted average of per-cell model distributions.
template <typename PerCell>
JointDistribution pooled(const std::vector<ObservationCell>& cells,
                         PerCell&& per_cell) {
  std::array<double, 4> p{};
  long long total = 0;
  for (const auto& c : cells) total += c.counts.total();
  for (const auto& c : cells) {
    const std::array<double, 4> q = per_cell(c);
    const double share = static_cast<double>(c.counts.total()) / total;
    for (int l = 0; l < 4; ++l) p[l] += share * q[l];
  }
  return JointDistribution::normalized(p);
}

}  // namespace

CeMlEstimate fit_ce_ml(const Dataset& d, const FeatureSource& source,
                       const FitConfig& cfg) {
  const auto cells = group_observations(d, source);
  const int d1 = source.dim(Player::kOne);
  const int d2 = source.dim(Player::kTwo);
  const double floor = cfg.floor;

  const Objective objective = [&](std::span<const double> x) {
    const auto w1 = x.subspan(0, d1);
    const auto w2 = x.subspan(d1, d2);
    const auto y = x.subspan(d1 + d2, kNumCeVertices);
    double value = 0.0;
    double shortfall = 0.0;
    bool feasible = true;
    for (const auto& c : cells) {
      const PayoffTable u = compute_payoffs(c.features, w1, w2);
      const GameClass cls = classify_payoffs(u);
      if (cls != GameClass::kCoordination &&
          cls != GameClass::kAntiCoordination) {
        feasible = false;
        shortfall += class_shortfall(u);
        continue;
      }
      value += nll(mixture_probs(u, cls, y), c.counts, floor);
    }
    return feasible ? value : kInfeasibleBase * (1.0 + shortfall);
  };

  const std::vector<ParameterBlock> blocks = {
      ParameterBlock::simplex(d1), ParameterBlock::simplex(d2),
      ParameterBlock::simplex(kNumCeVertices)};
  std::vector<double> centre;
  centre.insert(centre.end(), d1, 1.0 / d1);
  centre.insert(centre.end(), d2, 1.0 / d2);
  centre.insert(centre.end(), kNumCeVertices, 1.0 / kNumCeVertices);
  const OptimizeResult r =
      optimize(objective, blocks, cfg.optimizer(), {centre});
  if (!(r.value < kInfeasibleBase)) {
    throw NumericalError(
        "CE-ML found no weights inducing an (anti-)coordination game across " +
        std::to_string(r.restarts.size()) + " starts");
  }

  const std::span<const double> x(r.x);
  WeightPair w{simplex_part(x.subspan(0, d1)), simplex_part(x.subspan(d1, d2))};
  std::array<double, kNumCeVertices> y_raw;
  std::copy_n(x.begin() + d1 + d2, kNumCeVertices, y_raw.begin());
  double y_sum = 0.0;
  for (double v : y_raw) y_sum += v;
  for (double& v : y_raw) v /= y_sum;
  const MixtureWeights y = MixtureWeights::on_simplex(y_raw);

  const PayoffTable first =
      compute_payoffs(cells.front().features, w.w1.values(), w.w2.values());
  const JointDistribution fitted =
      cells.size() == 1
          ? mixture_distribution(ce_vertices(first), y)
          : pooled(cells, [&](const ObservationCell& c) {
              const PayoffTable u =
                  compute_payoffs(c.features, w.w1.values(), w.w2.values());
              return mixture_probs(u, classify_payoffs(u), y.values());
            });
  return {std::move(w), y, classify_payoffs(first), r.value, fitted,
          diagnostics_of(r)};
}

CeMlEstimate fit_ce_ml(const Dataset& d, const FeatureMap& features,
                       const FitConfig& cfg) {
  return fit_ce_ml(d, FeatureSource::fixed(features), cfg);
}

namespace {

double lbr_objective(const std::vector<ObservationCell>& cells,
                     std::span<const double> w1, std::span<const double> w2,
                     const Rationality& lambda, double floor) {
  double value = 0.0;
  for (const auto& c : cells) {
    const PayoffTable u = compute_payoffs(c.features, w1, w2);
    value += nll(stationary_closed_form(u, lambda).probs(), c.counts, floor);
  }
  return value;
}

}  // namespace

LbrMlEstimate fit_lbr_ml(const Dataset& d, const FeatureSource& source,
                         const FitConfig& cfg) {
  const auto cells = group_observations(d, source);
  const int d1 = source.dim(Player::kOne);
  const int d2 = source.dim(Player::kTwo);
  const double floor = cfg.floor;
  const std::vector<ParameterBlock> weight_blocks = {
      ParameterBlock::simplex(d1), ParameterBlock::simplex(d2)};

  auto weights_only = [&](const Rationality& lambda) -> Objective {
    return [&cells, d1, d2, lambda, floor](std::span<const double> x) {
      return lbr_objective(cells, x.subspan(0, d1), x.subspan(d1, d2), lambda,
                           floor);
    };
  };

  std::vector<double> x;
  Rationality lambda;
  double value = 0.0;
  FitDiagnostics diag;
  if (cfg.fixed_lambda) {
    lambda = *cfg.fixed_lambda;
    const OptimizeResult r =
        optimize(weights_only(lambda), weight_blocks, cfg.optimizer());
    x = r.x;
    value = r.value;
    diag = diagnostics_of(r);
  } else {
    // Stage 1: weights at every point of the rationality grid.
    std::vector<Rationality> grid;
    for (double l1 : cfg.lambda_grid) {
      for (double l2 : cfg.lambda_grid) grid.push_back({l1, l2});
    }
    const int per_point =
        std::max(1, cfg.restarts / static_cast<int>(grid.size()));
    std::vector<OptimizeResult> stage1(grid.size());
    const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (cfg.parallel)
    for (int g = 0; g < static_cast<int>(grid.size()); ++g) {
      OptimizeConfig oc = cfg.optimizer();
      oc.restarts = per_point;
      oc.seed = mix_seed(cfg.seed, g);
      oc.parallel = false;
      try {
        stage1[g] = optimize(weights_only(grid[g]), weight_blocks, oc);
      } catch (...) {
#pragma omp critical(invgame_lbr_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    // Stage 2: refine rationality and weights jointly from the best cells.
    std::vector<int> order(grid.size());
    for (int g = 0; g < static_cast<int>(grid.size()); ++g) order[g] = g;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return stage1[a].value < stage1[b].value;
    });
    const int keep = std::min<int>(4, static_cast<int>(order.size()));
    std::vector<std::vector<double>> starts;
    for (int k = 0; k < keep; ++k) {
      std::vector<double> s = stage1[order[k]].x;
      s.push_back(grid[order[k]].lambda1);
      s.push_back(grid[order[k]].lambda2);
      starts.push_back(std::move(s));
    }
    std::vector<ParameterBlock> blocks = weight_blocks;
    blocks.push_back(ParameterBlock::box(0.0, cfg.lambda_max, 2));
    const Objective joint = [&cells, d1, d2, floor](std::span<const double> p) {
      return lbr_objective(cells, p.subspan(0, d1), p.subspan(d1, d2),
                           {p[d1 + d2], p[d1 + d2 + 1]}, floor);
    };
    OptimizeConfig oc = cfg.optimizer();
    oc.restarts = keep;
    const OptimizeResult r = optimize(joint, blocks, oc, starts);
    x.assign(r.x.begin(), r.x.begin() + d1 + d2);
    lambda = {r.x[d1 + d2], r.x[d1 + d2 + 1]};
    value = r.value;
    diag = diagnostics_of(r);
    diag.restarts += per_point * static_cast<int>(grid.size());
    // A grid optimum that refinement could not move may still be better than
    // its boundary-clamped re-encoding.
    const OptimizeResult& top = stage1[order[0]];
    if (top.value < value) {
      x = top.x;
      lambda = grid[order[0]];
      value = top.value;
    }
  }

  const std::span<const double> xs(x);
  WeightPair w{simplex_part(xs.subspan(0, d1)), simplex_part(xs.subspan(d1, d2))};
  const JointDistribution fitted =
      pooled(cells, [&](const ObservationCell& c) {
        return stationary_closed_form(
                   compute_payoffs(c.features, w.w1.values(), w.w2.values()),
                   lambda)
            .probs();
      });
  return {std::move(w), lambda, value, fitted, std::move(diag)};
}

LbrMlEstimate fit_lbr_ml(const Dataset& d, const FeatureMap& features,
                         const FitConfig& cfg) {
  return fit_lbr_ml(d, FeatureSource::fixed(features), cfg);
}

double ice_violation(const std::vector<ObservationCell>& cells,
                     std::span<const double> w1, std::span<const double> w2) {
  long long total = 0;
  for (const auto& c : cells) total += c.counts.total();
  double v = 0.0;
  for (const auto& c : cells) {
    std::array<double, 4> share;
    for (int l = 0; l < 4; ++l) {
      share[l] = static_cast<double>(c.counts.n[l]) / total;
    }
    const auto values =
        ce_constraint_values(compute_payoffs(c.features, w1, w2), share);
    for (double k : values) v += std::max(0.0, -k);
  }
  return v;
}

IceEstimate fit_ice(const Dataset& d, const FeatureSource& source,
                    const FitConfig& cfg) {
  const auto cells = group_observations(d, source);
  const int d1 = source.dim(Player::kOne);
  const int d2 = source.dim(Player::kTwo);
  const Objective objective = [&](std::span<const double> x) {
    return ice_violation(cells, x.subspan(0, d1), x.subspan(d1, d2));
  };
  const std::vector<ParameterBlock> blocks = {ParameterBlock::simplex(d1),
                                              ParameterBlock::simplex(d2)};
  const OptimizeResult r = optimize(objective, blocks, cfg.optimizer());
  const std::span<const double> x(r.x);
  WeightPair w{simplex_part(x.subspan(0, d1)), simplex_part(x.subspan(d1, d2))};
  // Predictions come from the max-entropy CE of each cell's fitted game.
  std::vector<JointDistribution> per_cell;
  double value = 0.0;
  for (const auto& c : cells) {
    per_cell.push_back(max_entropy_ce(
        compute_payoffs(c.features, w.w1.values(), w.w2.values())));
    value += nll(per_cell.back(), c.counts, cfg.floor);
  }
  std::size_t next = 0;
  const JointDistribution fitted = pooled(
      cells, [&](const ObservationCell&) { return per_cell[next++].probs(); });
  return {std::move(w), r.value, value, fitted, diagnostics_of(r)};
}

IceEstimate fit_ice(const Dataset& d, const FeatureMap& features,
                    const FitConfig& cfg) {
  return fit_ice(d, FeatureSource::fixed(features), cfg);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kCeMl:
      return "ce-ml";
    case Method::kLbrMl:
      return "lbr-ml";
    case Method::kIce:
      return "ice";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "ce-ml") return Method::kCeMl;
  if (name == "lbr-ml") return Method::kLbrMl;
  if (name == "ice") return Method::kIce;
  throw InvalidArgument("unknown method '" + name +
                        "' (expected ce-ml, lbr-ml or ice)");
}

json EstimateResult::to_json() const {
  json j;
  j["method"] = invgame::to_string(method);
  j["w1"] = w.w1.values();
  j["w2"] = w.w2.values();
  if (y) j["y"] = y->values();
  if (lambda) j["lambda"] = {lambda->lambda1, lambda->lambda2};
  if (violation) j["violation"] = *violation;
  j["nll"] = nll;
  j["fitted_distribution"] = fitted_distribution.probs();
  j["diagnostics"] = {{"restarts", diagnostics.restarts},
                      {"best_restart", diagnostics.best_restart},
                      {"iterations", diagnostics.iterations},
                      {"converged", diagnostics.converged},
                      {"trace", diagnostics.trace}};
  return j;
}

EstimateResult to_result(const CeMlEstimate& e) {
  return {Method::kCeMl, e.w,     e.y,   std::nullopt, std::nullopt,
          e.nll,         e.fitted_distribution, e.diagnostics};
}

EstimateResult to_result(const LbrMlEstimate& e) {
  return {Method::kLbrMl, e.w,    std::nullopt, e.lambda, std::nullopt,
          e.nll,          e.fitted_distribution, e.diagnostics};
}

EstimateResult to_result(const IceEstimate& e) {
  return {Method::kIce, e.w,   std::nullopt, std::nullopt, e.violation,
          e.nll,        e.fitted_distribution, e.diagnostics};
}

EstimateResult fit(Method m, const Dataset& d, const FeatureSource& source,
                   const FitConfig& cfg) {
  switch (m) {
    case Method::kCeMl:
      return to_result(fit_ce_ml(d, source, cfg));
    case Method::kLbrMl:
      return to_result(fit_lbr_ml(d, source, cfg));
    case Method::kIce:
      return to_result(fit_ice(d, source, cfg));
  }
  throw InvalidArgument("unknown method");
}

}  // namespace invgame
