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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invgame/dataset.hpp"
#include "invgame/equilibrium.hpp"
#include "invgame/error.hpp"
#include "invgame/estimation.hpp"
#include "invgame/experiments.hpp"
#include "invgame/game.hpp"
#include "invgame/game_spec.hpp"
#include "invgame/lbr.hpp"
#include "invgame/scenarios.hpp"

namespace {

using nlohmann::json;
using namespace invgame;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Globals {
  std::uint64_t seed = 42;
  int jobs = 0;
  std::string out = "invgame-out";
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dist_text(const JointDistribution& p) { return p.to_json(); }

json dist_json(const JointDistribution& p) { return json::parse(p.to_json()); }

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw Error("cannot create '" + p.parent_path().string() + "'");
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

// ---- eq -------------------------------------------------------------------

struct EqArgs {
  std::string spec;
  bool as_json = false;
};

int run_eq(const EqArgs& a) {
  const Game2x2 g = load_game_spec(a.spec).game();
  const GameClass cls = classify_game(g);
  json j;
  j["class"] = to_string(cls);
  j["payoffs"] = {g.payoffs()[0], g.payoffs()[1]};
  std::optional<std::string> refused;
  try {
    const AlphaBeta ab = alpha_beta(g);
    j["alpha"] = ab.alpha;
    j["beta"] = ab.beta;
  } catch (const InvalidArgument& e) {
    j["alpha"] = nullptr;
    j["beta"] = nullptr;
  }
  try {
    const CeVertexSet v = ce_vertices(g);
    j["vertices"] = json::array();
    for (const auto& p : v.vertices) j["vertices"].push_back(dist_json(p));
  } catch (const InvalidArgument& e) {
    refused = e.what();
    j["vertices"] = nullptr;
    j["vertices_error"] = *refused;
  }
  const MaxEntropyResult me = max_entropy_ce_detailed(g.payoffs());
  j["max_entropy_ce"] = dist_json(me.distribution);
  j["entropy"] = me.entropy;

  if (a.as_json) {
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "class: " << to_string(cls) << '\n'
            << format_payoff_table(g);
  if (j["alpha"].is_null()) {
    std::cout << "alpha, beta: undefined (degenerate payoffs)\n";
  } else {
    std::cout << "alpha: " << fmt(j["alpha"].get<double>()) << '\n'
              << "beta: " << fmt(j["beta"].get<double>()) << '\n';
  }
  if (refused) {
    std::cout << "vertices: refused: " << *refused << '\n';
  } else {
    std::cout << "vertices (a1, a2, a3, a4):\n";
    const CeVertexSet v = ce_vertices(g);
    for (int k = 0; k < kNumCeVertices; ++k) {
      std::cout << "  " << k + 1 << ": " << dist_text(v.vertices[k]) << '\n';
    }
  }
  std::cout << "max-entropy CE: " << dist_text(me.distribution) << '\n'
            << "entropy: " << fmt(me.entropy) << '\n';
  return 0;
}

// ---- lbr ------------------------------------------------------------------

struct LbrArgs {
  std::string spec;
  std::vector<double> lambda = {1.0, 1.0};
  double tol = 1e-14;
  int max_iter = 10000000;
  int simulate = 0;
  int burn_in = kDefaultBurnIn;
  std::string output;
  bool as_json = false;
};

int run_lbr(const LbrArgs& a, const Globals& g) {
  const Game2x2 game = load_game_spec(a.spec).game();
  const Rationality lambda = Rationality::checked(a.lambda[0], a.lambda[1]);
  const LogitResponses r = logit_responses(game, lambda);
  const TransitionMatrix p = transition_matrix(r);
  const JointDistribution closed = stationary_from_responses(r);
  const JointDistribution power =
      stationary_power_iteration(p, a.tol, a.max_iter);
  json j;
  j["lambda"] = {lambda.lambda1, lambda.lambda2};
  j["responses"] = {{"s1", r.s1}, {"s2", r.s2}, {"t1", r.t1}, {"t2", r.t2}};
  j["transition_matrix"] = p;
  j["stationary_closed_form"] = dist_json(closed);
  j["stationary_power_iteration"] = dist_json(power);
  j["tv_closed_vs_power"] = tv_distance(closed, power);
  if (a.simulate > 0) {
    const Dataset d = simulate_chain(game, lambda, a.simulate, g.seed, a.burn_in);
    const std::string path =
        a.output.empty() ? g.out + "/chain.jsonl" : a.output;
    std::ostringstream os;
    write_jsonl(os, d);
    write_text(path, os.str());
    j["simulated"] = {{"T", a.simulate},
                      {"path", path},
                      {"empirical", dist_json(counts(d).empirical())}};
  }
  if (a.as_json) {
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "responses: s1=" << fmt(r.s1) << " s2=" << fmt(r.s2)
            << " t1=" << fmt(r.t1) << " t2=" << fmt(r.t2) << '\n'
            << "transition matrix (rows/cols a1..a4):\n";
  for (const auto& row : p) {
    char line[96];
    std::snprintf(line, sizeof line, "  %.10f  %.10f  %.10f  %.10f\n", row[0],
                  row[1], row[2], row[3]);
    std::cout << line;
  }
  std::cout << "stationary (closed form):     " << dist_text(closed) << '\n'
            << "stationary (power iteration): " << dist_text(power) << '\n'
            << "TV between them: " << fmt(tv_distance(closed, power)) << '\n';
  if (a.simulate > 0) {
    std::cout << "simulated " << a.simulate << " steps -> "
              << j["simulated"]["path"].get<std::string>() << '\n';
  }
  return 0;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  int T = 1000;
  std::string output;
  std::string format = "jsonl";
  std::vector<double> w1 = {0.3, 0.7};
  std::vector<double> w2 = {0.4, 0.6};
  double v1 = 10.0, v2 = 10.0, d1 = 20.0, d2 = 30.0;
  int vertex = 4;
  double noise = kDefaultDriverNoise;
  std::string sweep;
};

void save_dataset(const Dataset& d, const GenArgs& a, const Globals& g,
                  const std::string& kind) {
  const std::string path =
      a.output.empty() ? g.out + "/" + kind + "." + a.format : a.output;
  std::ostringstream os;
  if (a.format == "csv") {
    write_csv(os, d);
  } else {
    write_jsonl(os, d);
  }
  write_text(path, os.str());
  const JointDistribution emp = counts(d).empirical();
  std::cout << "wrote " << d.size() << " records to " << path << '\n'
            << "empirical: " << dist_text(emp) << '\n';
}

int run_gen(const std::string& kind, const GenArgs& a, const Globals& g) {
  if (a.T < 1) throw InvalidArgument("--T must be >= 1");
  const KinematicState state = KinematicState::checked(a.v1, a.v2, a.d1, a.d2);
  Dataset d;
  if (kind == "chicken") {
    const Game2x2 game = chicken_dare_game(WeightVector::on_simplex(a.w1),
                                           WeightVector::on_simplex(a.w2));
    d = sample_iid(max_entropy_ce(game), a.T, g.seed);
  } else if (kind == "traffic" || kind == "signal") {
    const WeightPair truth = traffic_ground_truth();
    const Game2x2 game = build_game(traffic_features(state), truth.w1, truth.w2);
    const Dataset raw =
        kind == "traffic"
            ? sample_iid(max_entropy_ce(game), a.T, g.seed)
            : signaled_sample(ce_vertices(game).vertices.at(a.vertex - 1), a.T,
                              g.seed);
    const TrafficContext ctx = TrafficContext::from_state(state);
    for (const Record& r : raw.records()) d.add(r.action, ctx, r.recommendation);
  } else {
    SweepGrid grid;
    if (!a.sweep.empty()) {
      std::ifstream in(a.sweep);
      if (!in) throw InvalidArgument("cannot open sweep config '" + a.sweep + "'");
      try {
        grid = SweepGrid::from_json(json::parse(in));
      } catch (const json::parse_error& e) {
        throw InvalidArgument(a.sweep + ": " + e.what());
      }
    }
    const auto states = sweep_traffic_scenarios(grid, g.seed);
    std::vector<KinematicState> cycled;
    for (int t = 0; t < a.T; ++t) cycled.push_back(states[t % states.size()]);
    d = uncoordinated_sample(cycled, a.noise, g.seed);
  }
  save_dataset(d, a, g, kind);
  return 0;
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
  std::string dataset;
  std::string features;
  std::string method;
  std::string config;
  std::string output;
};

FeatureSource resolve_features(const std::string& name) {
  if (name == "chicken") return FeatureSource::fixed(chicken_dare_features());
  if (name == "traffic") return traffic_feature_source();
  return FeatureSource::fixed(load_game_spec(name).features);
}

int run_fit(const FitArgs& a, const Globals& g, bool seed_given) {
  const Method method = parse_method(a.method);
  FitConfig cfg = a.config.empty() ? FitConfig{} : load_fit_config(a.config);
  if (seed_given || a.config.empty()) cfg.seed = g.seed;
  if (g.jobs > 0) cfg.jobs = g.jobs;
  const Dataset d = read_jsonl_file(a.dataset);
  const EstimateResult e = fit(method, d, resolve_features(a.features), cfg);
  const std::string path = a.output.empty() ? g.out + "/estimate.json" : a.output;
  write_text(path, e.to_json().dump(2) + "\n");
  std::cout << "method: " << to_string(method) << '\n'
            << "nll: " << fmt(e.nll) << '\n'
            << "w1: " << json(e.w.w1.values()).dump() << '\n'
            << "w2: " << json(e.w.w2.values()).dump() << '\n';
  if (e.y) std::cout << "y: " << json(e.y->values()).dump() << '\n';
  if (e.lambda) {
    std::cout << "lambda: [" << fmt(e.lambda->lambda1) << ","
              << fmt(e.lambda->lambda2) << "]\n";
  }
  if (e.violation) std::cout << "violation: " << fmt(*e.violation) << '\n';
  std::cout << "fitted: " << dist_text(e.fitted_distribution) << '\n'
            << "wrote " << path << '\n';
  return 0;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string dataset;
  std::string estimate;
  std::string truth;
  bool as_json = false;
};

int run_eval(const EvalArgs& a) {
  const Dataset d = read_jsonl_file(a.dataset);
  std::ifstream in(a.estimate);
  if (!in) throw InvalidArgument("cannot open estimate '" + a.estimate + "'");
  json est;
  try {
    est = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(a.estimate + ": " + e.what());
  }
  if (!est.contains("fitted_distribution") || !est.contains("w1") ||
      !est.contains("w2")) {
    throw InvalidArgument(a.estimate +
                          ": expected fitted_distribution, w1 and w2");
  }
  const JointDistribution model = JointDistribution::from_probs(
      est["fitted_distribution"].get<std::array<double, 4>>());
  const CountVector c = counts(d);
  json j;
  j["T"] = c.total();
  j["empirical"] = dist_json(c.empirical());
  j["model"] = dist_json(model);
  j["tv"] = tv_distance(model, c.empirical());
  j["accuracy"] = decision_accuracy(model, d);
  j["nll"] = nll(model, c);
  j["empirical_nll"] = nll(c.empirical(), c);
  if (!a.truth.empty()) {
    const GameSpec spec = load_game_spec(a.truth);
    if (!spec.weights) throw InvalidArgument(a.truth + ": no weights");
    const WeightPair w{
        WeightVector::on_simplex(est["w1"].get<std::vector<double>>()),
        WeightVector::on_simplex(est["w2"].get<std::vector<double>>())};
    const ErrorSummary err = mae_rmse(w, *spec.weights);
    j["mae"] = err.mae;
    j["rmse"] = err.rmse;
  }
  if (a.as_json) {
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "T: " << c.total() << '\n'
            << "empirical: " << dist_text(c.empirical()) << '\n'
            << "model:     " << dist_text(model) << '\n'
            << "tv: " << fmt(j["tv"].get<double>()) << '\n'
            << "accuracy: " << fmt(j["accuracy"].get<double>()) << '\n'
            << "nll: " << fmt(j["nll"].get<double>())
            << " (empirical " << fmt(j["empirical_nll"].get<double>()) << ")\n";
  if (j.contains("mae")) {
    std::cout << "mae: " << fmt(j["mae"].get<double>()) << '\n'
              << "rmse: " << fmt(j["rmse"].get<double>()) << '\n';
  }
  return 0;
}

// ---- experiment -----------------------------------------------------------

struct ExperimentArgs {
  std::string which;
  std::string config;
  std::string configs_dir = "configs";
};

int run_experiment_cmd(const ExperimentArgs& a, const Globals& g,
                       bool seed_given) {
  std::vector<ExperimentConfig> configs;
  if (a.which == "all") {
    if (!a.config.empty()) {
      throw InvalidArgument("--config applies to a single experiment");
    }
    for (const char* id : {"e1", "e2", "e3", "e4"}) {
      const std::filesystem::path p =
          std::filesystem::path(a.configs_dir) / (std::string(id) + ".json");
      configs.push_back(std::filesystem::exists(p)
                            ? load_experiment_config(p.string())
                            : ExperimentConfig::defaults(parse_experiment_id(id)));
    }
  } else {
    const ExperimentId id = parse_experiment_id(a.which);
    if (!a.config.empty()) {
      configs.push_back(load_experiment_config(a.config));
      if (configs.back().id != id) {
        throw InvalidArgument(a.config + ": config is for experiment " +
                              to_string(configs.back().id));
      }
    } else {
      const std::filesystem::path p =
          std::filesystem::path(a.configs_dir) / (a.which + ".json");
      configs.push_back(std::filesystem::exists(p)
                            ? load_experiment_config(p.string())
                            : ExperimentConfig::defaults(id));
    }
  }
  for (ExperimentConfig& cfg : configs) {
    if (seed_given) cfg.fit.seed = g.seed;
    if (g.jobs > 0) cfg.jobs = g.jobs;
    const ExperimentReport r = run_experiment(cfg);
    std::string name = to_string(cfg.id);
    name[0] = 'e';
    const std::string dir = g.out + "/" + name;
    emit_report(r, dir);
    int failed = 0;
    for (const ReportRow& row : r.rows) {
      if (row.error) {
        ++failed;
        std::cerr << "row failed: " << r.experiment << ' ' << row.method
                  << " T=" << row.T << " seed=" << row.seed << ": "
                  << *row.error << '\n';
      }
    }
    std::cout << format_summary_table(r) << "rows: " << r.rows.size()
              << " (failed " << failed << ") -> " << dir << "\n\n";
  }
  return 0;
}

void print_error(const char* kind, const std::string& what) {
  std::cerr << json({{"error", what}, {"kind", kind}}).dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse game-theoretic learning for 2x2 games", "invgame"};
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for every stochastic path")
                       ->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads (0: all available)")
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory")
      ->envname("INVGAME_OUT_DIR")
      ->capture_default_str();

  EqArgs eq;
  auto* eq_cmd = app.add_subcommand(
      "eq", "Alpha/beta, CE vertices and the max-entropy CE of a game");
  eq_cmd->add_option("spec", eq.spec, "Game spec JSON")->required();
  eq_cmd->add_flag("--json", eq.as_json, "Print JSON instead of text");

  LbrArgs lbr;
  auto* lbr_cmd = app.add_subcommand(
      "lbr", "Logit best-response chain: responses, transitions, stationary law");
  lbr_cmd->add_option("spec", lbr.spec, "Game spec JSON")->required();
  lbr_cmd->add_option("--lambda", lbr.lambda, "Rationality of both players")
      ->expected(2)
      ->capture_default_str();
  lbr_cmd->add_option("--tol", lbr.tol, "Power-iteration tolerance (TV)")
      ->capture_default_str();
  lbr_cmd->add_option("--max-iter", lbr.max_iter, "Power-iteration step limit")
      ->capture_default_str();
  lbr_cmd->add_option("--simulate", lbr.simulate,
                      "Simulate this many recorded steps (0: none)")
      ->capture_default_str();
  lbr_cmd->add_option("--burn-in", lbr.burn_in, "Discarded initial steps")
      ->capture_default_str();
  lbr_cmd->add_option("--output", lbr.output,
                      "Simulated dataset path (default <out>/chain.jsonl)");
  lbr_cmd->add_flag("--json", lbr.as_json, "Print JSON instead of text");

  GenArgs gen;
  std::string gen_kind;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a dataset");
  gen_cmd->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--T", gen.T, "Number of records")->capture_default_str();
    c->add_option("--output", gen.output,
                  "Dataset path (default <out>/<kind>.<format>)");
    c->add_option("--format", gen.format, "jsonl or csv")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->capture_default_str();
  };
  auto add_state = [&](CLI::App* c) {
    c->add_option("--v1", gen.v1, "Speed of vehicle 1 (m/s)")->capture_default_str();
    c->add_option("--v2", gen.v2, "Speed of vehicle 2 (m/s)")->capture_default_str();
    c->add_option("--d1", gen.d1, "Distance of vehicle 1 (m)")->capture_default_str();
    c->add_option("--d2", gen.d2, "Distance of vehicle 2 (m)")->capture_default_str();
  };
  auto* gen_chicken = gen_cmd->add_subcommand(
      "chicken", "i.i.d. draws from the max-entropy CE of the chicken game");
  add_common(gen_chicken);
  gen_chicken->add_option("--w1", gen.w1, "Player 1 weights (advance, safety)")
      ->expected(2)
      ->capture_default_str();
  gen_chicken->add_option("--w2", gen.w2, "Player 2 weights (advance, safety)")
      ->expected(2)
      ->capture_default_str();
  auto* gen_traffic = gen_cmd->add_subcommand(
      "traffic", "i.i.d. draws from the max-entropy CE of the traffic game");
  add_common(gen_traffic);
  add_state(gen_traffic);
  auto* gen_signal = gen_cmd->add_subcommand(
      "signal", "Obeyed recommendations from a CE vertex of the traffic game");
  add_common(gen_signal);
  add_state(gen_signal);
  gen_signal->add_option("--vertex", gen.vertex, "CE vertex used as device (1-5)")
      ->check(CLI::Range(1, 5))
      ->capture_default_str();
  auto* gen_unc = gen_cmd->add_subcommand(
      "uncoordinated", "Independent noisy drivers over a scenario sweep");
  add_common(gen_unc);
  gen_unc->add_option("--noise", gen.noise, "Logistic scale on the arrival gap (s)")
      ->capture_default_str();
  gen_unc->add_option("--sweep", gen.sweep, "Sweep grid JSON (default grid if omitted)");
  for (auto* c : {gen_chicken, gen_traffic, gen_signal, gen_unc}) {
    c->callback([&gen_kind, c] { gen_kind = c->get_name(); });
  }

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit utility weights to a dataset");
  fit_cmd->add_option("dataset", fit_args.dataset, "Dataset JSONL")->required();
  fit_cmd->add_option("--features", fit_args.features,
                      "Game spec JSON, 'chicken', or 'traffic' (per-record)")
      ->required();
  fit_cmd->add_option("--method", fit_args.method, "ce-ml, lbr-ml or ice")
      ->required();
  fit_cmd->add_option("--config", fit_args.config, "Fit config JSON");
  fit_cmd->add_option("--output", fit_args.output,
                      "Estimate path (default <out>/estimate.json)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "eval", "Score a fitted estimate against a dataset");
  eval_cmd->add_option("dataset", eval_args.dataset, "Dataset JSONL")->required();
  eval_cmd->add_option("--estimate", eval_args.estimate, "Estimate JSON from fit")
      ->required();
  eval_cmd->add_option("--truth", eval_args.truth,
                       "Game spec with true weights (adds MAE/RMSE)");
  eval_cmd->add_flag("--json", eval_args.as_json, "Print JSON instead of text");

  ExperimentArgs exp_args;
  auto* exp_cmd = app.add_subcommand("experiment", "Run experiments E1-E4");
  exp_cmd->add_option("which", exp_args.which, "e1, e2, e3, e4 or all")
      ->required()
      ->check(CLI::IsMember({"e1", "e2", "e3", "e4", "all"}, CLI::ignore_case));
  exp_cmd->add_option("--config", exp_args.config, "Experiment config JSON");
  exp_cmd->add_option("--configs-dir", exp_args.configs_dir,
                      "Directory holding e1.json..e4.json")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const bool seed_given = seed_opt->count() > 0;
  try {
    if (*eq_cmd) return run_eq(eq);
    if (*lbr_cmd) return run_lbr(lbr, g);
    if (*gen_cmd) return run_gen(gen_kind, gen, g);
    if (*fit_cmd) return run_fit(fit_args, g, seed_given);
    if (*eval_cmd) return run_eval(eval_args);
    if (*exp_cmd) return run_experiment_cmd(exp_args, g, seed_given);
  } catch (const InvalidArgument& e) {
    print_error("invalid_argument", e.what());
    return kExitUsage;
  } catch (const NumericalError& e) {
    print_error("numerical", e.what());
    return kExitNumerical;
  } catch (const Error& e) {
    print_error("io", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
