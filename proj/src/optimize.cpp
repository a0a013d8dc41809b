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

#include "invgame/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <random>

#include "invgame/error.hpp"

namespace invgame {

ParameterBlock ParameterBlock::simplex(int dim) {
  if (dim < 1) throw InvalidArgument("simplex block needs dim >= 1");
  return {Kind::kSimplex, dim, 0.0, 1.0};
}

ParameterBlock ParameterBlock::box(double lo, double hi, int dim) {
  if (dim < 1 || !(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("box block needs dim >= 1 and finite lo <= hi");
  }
  return {Kind::kBox, dim, lo, hi};
}

int total_dim(const std::vector<ParameterBlock>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.dim;
  return n;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

int total_free_dim(const std::vector<ParameterBlock>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.free_dim();
  return n;
}

void to_natural(const std::vector<ParameterBlock>& blocks, const double* z,
                double* x) {
  for (const auto& b : blocks) {
    if (b.kind == ParameterBlock::Kind::kSimplex) {
      double top = 0.0;
      for (int k = 0; k + 1 < b.dim; ++k) top = std::max(top, z[k]);
      double sum = std::exp(-top);
      for (int k = 0; k + 1 < b.dim; ++k) sum += std::exp(z[k] - top);
      for (int k = 0; k + 1 < b.dim; ++k) x[k] = std::exp(z[k] - top) / sum;
      x[b.dim - 1] = std::exp(-top) / sum;
      z += b.dim - 1;
    } else {
      for (int k = 0; k < b.dim; ++k) {
        x[k] = b.lo + (b.hi - b.lo) / (1.0 + std::exp(-z[k]));
      }
      z += b.dim;
    }
    x += b.dim;
  }
}

void to_free(const std::vector<ParameterBlock>& blocks, const double* x,
             double* z) {
  constexpr double kEdge = 1e-12;
  for (const auto& b : blocks) {
    if (b.kind == ParameterBlock::Kind::kSimplex) {
      const double last = std::log(std::max(x[b.dim - 1], kEdge));
      for (int k = 0; k + 1 < b.dim; ++k) {
        z[k] = std::log(std::max(x[k], kEdge)) - last;
      }
      z += b.dim - 1;
    } else {
      for (int k = 0; k < b.dim; ++k) {
        const double width = b.hi - b.lo;
        double u = width > 0.0 ? (x[k] - b.lo) / width : 0.5;
        u = std::clamp(u, kEdge, 1.0 - kEdge);
        z[k] = std::log(u / (1.0 - u));
      }
      z += b.dim;
    }
    x += b.dim;
  }
}

struct Evaluation {
  const Objective* objective;
  const std::vector<ParameterBlock>* blocks;
  std::vector<double> natural;

  double operator()(const double* z) {
    to_natural(*blocks, z, natural.data());
    const double v = (*objective)(natural);
    return std::isfinite(v) ? std::min(v, kDivergedValue) : kDivergedValue;
  }
};

double gsl_adapter(const gsl_vector* z, void* params) {
  return (*static_cast<Evaluation*>(params))(z->data);
}

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* s) const {
    gsl_multimin_fminimizer_free(s);
  }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

}  // namespace

std::vector<double> random_start(const std::vector<ParameterBlock>& blocks,
                                 std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x;
  for (const auto& b : blocks) {
    if (b.kind == ParameterBlock::Kind::kSimplex) {
      // Normalized exponentials are uniform on the simplex.
      std::vector<double> e(b.dim);
      double sum = 0.0;
      for (double& v : e) sum += (v = expo(rng));
      for (double v : e) x.push_back(v / sum);
    } else {
      for (int k = 0; k < b.dim; ++k) {
        x.push_back(b.lo + (b.hi - b.lo) * unit(rng));
      }
    }
  }
  return x;
}

RestartOutcome optimize_from(const Objective& objective,
                             const std::vector<ParameterBlock>& blocks,
                             const std::vector<double>& start,
                             const OptimizeConfig& cfg,
                             std::vector<double>* trace) {
  if (static_cast<int>(start.size()) != total_dim(blocks)) {
    throw InvalidArgument("start point has " + std::to_string(start.size()) +
                          " entries, blocks need " +
                          std::to_string(total_dim(blocks)));
  }
  silence_gsl();
  const int n = total_free_dim(blocks);
  Evaluation eval{&objective, &blocks, std::vector<double>(start.size())};

  std::vector<double> z0(n);
  to_free(blocks, start.data(), z0.data());
  RestartOutcome out;
  out.initial_value = eval(z0.data());
  out.x = eval.natural;
  out.value = out.initial_value;
  if (trace) trace->assign(1, out.initial_value);
  if (n == 0) {
    out.converged = true;
    return out;
  }

  gsl_multimin_function fn{&gsl_adapter, static_cast<size_t>(n), &eval};
  std::unique_ptr<gsl_vector, VectorDeleter> x0(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
  std::copy(z0.begin(), z0.end(), x0->data);
  gsl_vector_set_all(step.get(), cfg.initial_step);
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  if (gsl_multimin_fminimizer_set(s.get(), &fn, x0.get(), step.get()) !=
      GSL_SUCCESS) {
    return out;
  }
  // Nelder-Mead accepts equal-valued reflections, so on a flat objective the
  // simplex never shrinks; a long run without any change of the best value
  // counts as converged.
  const int stall_limit =
      cfg.stall_iter > 0 ? cfg.stall_iter : 50 * (n + 1);
  double best = out.initial_value;
  double last_fval = NAN;
  int stalled = 0;
  for (out.iterations = 0; out.iterations < cfg.max_iter;) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    ++out.iterations;
    best = std::min(best, s->fval);
    if (trace) trace->push_back(best);
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()),
                               cfg.size_tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
    stalled = s->fval == last_fval ? stalled + 1 : 0;
    last_fval = s->fval;
    if (stalled >= stall_limit) {
      out.converged = true;
      break;
    }
  }
  // Only strict improvements replace the start.
  if (s->fval < out.initial_value) {
    out.value = eval(s->x->data);
    out.x = eval.natural;
  }
  return out;
}

OptimizeResult optimize(const Objective& objective,
                        const std::vector<ParameterBlock>& blocks,
                        const OptimizeConfig& cfg,
                        const std::vector<std::vector<double>>& initial_points) {
  if (blocks.empty()) throw InvalidArgument("no parameter blocks");
  if (cfg.restarts < 1) throw InvalidArgument("restarts must be >= 1");
  if (cfg.max_iter < 0) throw InvalidArgument("max_iter must be >= 0");
  const int runs =
      std::max(cfg.restarts, static_cast<int>(initial_points.size()));
  std::vector<RestartOutcome> outcomes(runs);
  std::vector<std::vector<double>> traces(runs);

  auto run = [&](int r) {
    const std::vector<double> start =
        r < static_cast<int>(initial_points.size())
            ? initial_points[r]
            : random_start(blocks, cfg.seed, r);
    outcomes[r] = optimize_from(objective, blocks, start, cfg, &traces[r]);
  };

  if (cfg.parallel) {
    const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int r = 0; r < runs; ++r) {
      try {
        run(r);
      } catch (...) {
#pragma omp critical(invgame_optimize_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (int r = 0; r < runs; ++r) run(r);
  }

  int best = 0;
  for (int r = 1; r < runs; ++r) {
    if (outcomes[r].value < outcomes[best].value) best = r;
  }
  if (!(outcomes[best].value < kDivergedValue)) {
    throw NumericalError("all " + std::to_string(runs) +
                         " optimizer starts diverged");
  }
  OptimizeResult result;
  result.x = outcomes[best].x;
  result.value = outcomes[best].value;
  result.converged = outcomes[best].converged;
  result.best_restart = best;
  result.trace = std::move(traces[best]);
  result.restarts = std::move(outcomes);
  return result;
}

}  // namespace invgame
