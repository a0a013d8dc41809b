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

#include "invgame/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "invgame/equilibrium.hpp"
#include "invgame/error.hpp"

namespace invgame {

using nlohmann::json;

ErrorSummary mae_rmse(const WeightPair& estimate, const WeightPair& truth) {
  if (estimate.w1.dim() != truth.w1.dim() ||
      estimate.w2.dim() != truth.w2.dim()) {
    throw InvalidArgument("weight dimensions differ between estimate and truth");
  }
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  int n = 0;
  auto add = [&](const WeightVector& a, const WeightVector& b) {
    for (int k = 0; k < a.dim(); ++k) {
      const double r = a[k] - b[k];
      abs_sum += std::abs(r);
      sq_sum += r * r;
      ++n;
    }
  };
  add(estimate.w1, truth.w1);
  add(estimate.w2, truth.w2);
  return {abs_sum / n, std::sqrt(sq_sum / n)};
}

double decision_accuracy(const JointDistribution& model, const Dataset& d) {
  if (d.empty()) throw InvalidArgument("dataset is empty");
  const JointAction predicted = model.argmax();
  int hits = 0;
  for (const Record& r : d.records()) hits += r.action == predicted ? 1 : 0;
  return 100.0 * hits / d.size();
}

std::string to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::kE1:
      return "E1";
    case ExperimentId::kE2:
      return "E2";
    case ExperimentId::kE3:
      return "E3";
    case ExperimentId::kE4:
      return "E4";
  }
  return "?";
}

ExperimentId parse_experiment_id(const std::string& s) {
  std::string lower = s;
  for (char& c : lower) c = static_cast<char>(std::tolower(c));
  if (lower == "e1") return ExperimentId::kE1;
  if (lower == "e2") return ExperimentId::kE2;
  if (lower == "e3") return ExperimentId::kE3;
  if (lower == "e4") return ExperimentId::kE4;
  throw InvalidArgument("unknown experiment '" + s + "' (expected e1..e4)");
}

std::vector<MethodSpec> ExperimentConfig::method_specs() const {
  std::vector<MethodSpec> specs;
  for (const std::string& name : methods) {
    if (name == "lbr-ml-fixed") {
      specs.push_back({name, Method::kLbrMl, fixed_lambda});
    } else {
      specs.push_back({name, parse_method(name), std::nullopt});
    }
  }
  return specs;
}

void ExperimentConfig::validate() const {
  if (T.empty()) throw InvalidArgument("config: T list is empty");
  for (int t : T) {
    if (t < 1) throw InvalidArgument("config: T values must be >= 1");
  }
  if (seeds.empty()) throw InvalidArgument("config: seed list is empty");
  if (methods.empty()) throw InvalidArgument("config: method list is empty");
  method_specs();  // rejects unknown names
  KinematicState::checked(state.v1, state.v2, state.d1, state.d2);
  if (device_vertex < 1 || device_vertex > kNumCeVertices) {
    throw InvalidArgument("config: device_vertex must lie in 1..5");
  }
  if (!(noise > 0.0)) throw InvalidArgument("config: noise must be positive");
  Rationality::checked(fixed_lambda.lambda1, fixed_lambda.lambda2);
  if (jobs < 0) throw InvalidArgument("config: jobs must be >= 0");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentId id) {
  ExperimentConfig c;
  c.id = id;
  switch (id) {
    case ExperimentId::kE1:
    case ExperimentId::kE2:
      break;
    case ExperimentId::kE3:
      c.T = {500};
      c.methods = {"ce-ml", "ice"};
      break;
    case ExperimentId::kE4:
      c.T = {500};
      c.methods = {"lbr-ml", "lbr-ml-fixed"};
      break;
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object() || !j.contains("experiment")) {
    throw InvalidArgument("config: expected an object with an 'experiment' key");
  }
  ExperimentConfig c =
      defaults(parse_experiment_id(j["experiment"].get<std::string>()));
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") {
        continue;
      } else if (key == "T") {
        c.T = value.get<std::vector<int>>();
      } else if (key == "seeds") {
        c.seeds = value.get<std::vector<std::uint64_t>>();
      } else if (key == "methods") {
        c.methods = value.get<std::vector<std::string>>();
      } else if (key == "state") {
        c.state = {value.at("v1").get<double>(), value.at("v2").get<double>(),
                   value.at("d1").get<double>(), value.at("d2").get<double>()};
      } else if (key == "device_vertex") {
        c.device_vertex = value.get<int>();
      } else if (key == "sweep") {
        c.sweep = SweepGrid::from_json(value);
      } else if (key == "noise") {
        c.noise = value.get<double>();
      } else if (key == "fixed_lambda") {
        const auto l = value.get<std::vector<double>>();
        if (l.size() != 2) throw InvalidArgument("config: fixed_lambda needs 2 values");
        c.fixed_lambda = {l[0], l[1]};
      } else if (key == "fit") {
        c.fit = FitConfig::from_json(value);
      } else if (key == "jobs") {
        c.jobs = value.get<int>();
      } else {
        throw InvalidArgument("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  return {{"experiment", to_string(id)},
          {"T", T},
          {"seeds", seeds},
          {"methods", methods},
          {"state",
           {{"v1", state.v1}, {"v2", state.v2}, {"d1", state.d1}, {"d2", state.d2}}},
          {"device_vertex", device_vertex},
          {"sweep", sweep.to_json()},
          {"noise", noise},
          {"fixed_lambda", {fixed_lambda.lambda1, fixed_lambda.lambda2}},
          {"fit", fit.to_json()},
          {"jobs", jobs}};
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  try {
    return ExperimentConfig::from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

Spread median_iqr(std::vector<double> v) {
  if (v.empty()) throw InvalidArgument("median of an empty sample");
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * (v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
  };
  return {quantile(0.5), quantile(0.75) - quantile(0.25)};
}

std::vector<Aggregate> aggregate_rows(const std::vector<ReportRow>& rows) {
  std::vector<Aggregate> out;
  std::vector<std::vector<const ReportRow*>> groups;
  for (const ReportRow& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Aggregate& a) {
      return a.method == r.method && a.T == r.T;
    });
    if (it == out.end()) {
      out.push_back({r.method, r.T, 0, 0, {}, {}, {}, {}});
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[it - out.begin()].push_back(&r);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    std::vector<double> mae, rmse, tv, acc;
    for (const ReportRow* r : groups[g]) {
      if (r->error) {
        ++out[g].failed_rows;
        continue;
      }
      ++out[g].ok_rows;
      if (r->metrics.mae) mae.push_back(*r->metrics.mae);
      if (r->metrics.rmse) rmse.push_back(*r->metrics.rmse);
      tv.push_back(r->metrics.tv);
      acc.push_back(r->metrics.accuracy);
    }
    if (!mae.empty()) out[g].mae = median_iqr(mae);
    if (!rmse.empty()) out[g].rmse = median_iqr(rmse);
    if (!tv.empty()) out[g].tv = median_iqr(tv);
    if (!acc.empty()) out[g].accuracy = median_iqr(acc);
  }
  return out;
}

namespace {

Game2x2 traffic_truth_game(const ExperimentConfig& cfg) {
  const WeightPair truth = traffic_ground_truth();
  return build_game(traffic_features(cfg.state), truth.w1, truth.w2);
}

std::vector<KinematicState> cycle_states(const std::vector<KinematicState>& s,
                                         int T) {
  std::vector<KinematicState> out;
  out.reserve(T);
  for (int t = 0; t < T; ++t) out.push_back(s[t % s.size()]);
  return out;
}

}  // namespace

Dataset generate_experiment_data(const ExperimentConfig& cfg, int T,
                                 std::uint64_t seed) {
  switch (cfg.id) {
    case ExperimentId::kE1: {
      const WeightPair truth = chicken_ground_truth();
      return sample_iid(max_entropy_ce(chicken_dare_game(truth.w1, truth.w2)),
                        T, seed);
    }
    case ExperimentId::kE2:
      return sample_iid(max_entropy_ce(traffic_truth_game(cfg)), T, seed);
    case ExperimentId::kE3: {
      const CeVertexSet v = ce_vertices(traffic_truth_game(cfg));
      return signaled_sample(v.vertices[cfg.device_vertex - 1], T, seed);
    }
    case ExperimentId::kE4:
      return uncoordinated_sample(
          cycle_states(sweep_traffic_scenarios(cfg.sweep, seed), T), cfg.noise,
          seed);
  }
  throw InvalidArgument("unknown experiment");
}

FeatureSource experiment_features(const ExperimentConfig& cfg) {
  switch (cfg.id) {
    case ExperimentId::kE1:
      return FeatureSource::fixed(chicken_dare_features());
    case ExperimentId::kE2:
    case ExperimentId::kE3:
      return FeatureSource::fixed(traffic_features(cfg.state));
    case ExperimentId::kE4:
      return traffic_feature_source();
  }
  throw InvalidArgument("unknown experiment");
}

std::optional<WeightPair> experiment_truth(const ExperimentConfig& cfg) {
  switch (cfg.id) {
    case ExperimentId::kE1:
      return chicken_ground_truth();
    case ExperimentId::kE2:
    case ExperimentId::kE3:
      return traffic_ground_truth();
    case ExperimentId::kE4:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

ReportRow evaluate_cell(const ExperimentConfig& cfg, const MethodSpec& spec,
                        int T, std::uint64_t seed, const Dataset& data,
                        const FeatureSource& source,
                        const std::optional<WeightPair>& truth) {
  ReportRow row;
  row.method = spec.name;
  row.T = T;
  row.seed = seed;
  const auto cells = group_observations(data, source);
  const CountVector total = counts(data);
  const JointDistribution empirical = total.empirical();
  row.empirical = empirical.probs();
  for (const auto& c : cells) {
    row.empirical_nll += nll(c.counts.empirical(), c.counts);
  }

  FitConfig fc = cfg.fit;
  fc.seed = mix_seed(cfg.fit.seed, seed);
  fc.parallel = false;
  fc.fixed_lambda = spec.fixed_lambda;
  try {
    const EstimateResult e = fit(spec.method, data, source, fc);
    row.w1 = e.w.w1.values();
    row.w2 = e.w.w2.values();
    if (e.y) row.y = e.y->values();
    if (e.lambda) row.lambda = std::array{e.lambda->lambda1, e.lambda->lambda2};
    row.nll = e.nll;
    row.fitted = e.fitted_distribution.probs();
    if (truth) {
      const ErrorSummary err = mae_rmse(e.w, *truth);
      row.metrics.mae = err.mae;
      row.metrics.rmse = err.rmse;
    }
    row.metrics.tv = tv_distance(e.fitted_distribution, empirical);
    row.metrics.accuracy = decision_accuracy(e.fitted_distribution, data);
    if (spec.method == Method::kCeMl && cells.size() == 1) {
      const Game2x2 g = build_game(cells.front().features, e.w.w1, e.w.w2);
      row.fitted_is_ce = is_ce(g, e.fitted_distribution, 1e-8);
    }
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto specs = cfg.method_specs();
  const FeatureSource source = experiment_features(cfg);
  const auto truth = experiment_truth(cfg);

  struct DataCell {
    int T;
    std::uint64_t seed;
    Dataset data;
  };
  std::vector<DataCell> data;
  for (int T : cfg.T) {
    for (std::uint64_t seed : cfg.seeds) {
      data.push_back({T, seed, generate_experiment_data(cfg, T, seed)});
    }
  }

  const int n_specs = static_cast<int>(specs.size());
  const int n = static_cast<int>(data.size()) * n_specs;
  std::vector<ReportRow> rows(n);
  const int threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    const DataCell& c = data[i / n_specs];
    rows[i] = evaluate_cell(cfg, specs[i % n_specs], c.T, c.seed, c.data,
                            source, truth);
  }

  ExperimentReport r;
  r.experiment = to_string(cfg.id);
  r.rows = std::move(rows);
  r.aggregates = aggregate_rows(r.rows);
  return r;
}

namespace {

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_double(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json spread_json(const std::optional<Spread>& s) {
  if (!s) return nullptr;
  return {{"median", s->median}, {"iqr", s->iqr}};
}

std::optional<Spread> spread_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return Spread{j.at("median").get<double>(), j.at("iqr").get<double>()};
}

json row_json(const ReportRow& r) {
  json j;
  j["method"] = r.method;
  j["T"] = r.T;
  j["seed"] = r.seed;
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  j["metrics"] = {{"mae", optional_json(r.metrics.mae)},
                  {"rmse", optional_json(r.metrics.rmse)},
                  {"tv", r.metrics.tv},
                  {"accuracy", r.metrics.accuracy}};
  j["w1"] = r.w1;
  j["w2"] = r.w2;
  j["y"] = r.y ? json(*r.y) : json(nullptr);
  j["lambda"] = r.lambda ? json(*r.lambda) : json(nullptr);
  j["nll"] = r.nll;
  j["empirical_nll"] = r.empirical_nll;
  j["empirical"] = r.empirical;
  j["fitted"] = r.fitted;
  j["fitted_is_ce"] = r.fitted_is_ce ? json(*r.fitted_is_ce) : json(nullptr);
  return j;
}

ReportRow row_from(const json& j) {
  ReportRow r;
  r.method = j.at("method").get<std::string>();
  r.T = j.at("T").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("error").is_null()) r.error = j["error"].get<std::string>();
  const json& m = j.at("metrics");
  r.metrics.mae = optional_double(m.at("mae"));
  r.metrics.rmse = optional_double(m.at("rmse"));
  r.metrics.tv = m.at("tv").get<double>();
  r.metrics.accuracy = m.at("accuracy").get<double>();
  r.w1 = j.at("w1").get<std::vector<double>>();
  r.w2 = j.at("w2").get<std::vector<double>>();
  if (!j.at("y").is_null()) r.y = j["y"].get<std::array<double, 5>>();
  if (!j.at("lambda").is_null()) {
    r.lambda = j["lambda"].get<std::array<double, 2>>();
  }
  r.nll = j.at("nll").get<double>();
  r.empirical_nll = j.at("empirical_nll").get<double>();
  r.empirical = j.at("empirical").get<std::array<double, 4>>();
  r.fitted = j.at("fitted").get<std::array<double, 4>>();
  if (!j.at("fitted_is_ce").is_null()) {
    r.fitted_is_ce = j["fitted_is_ce"].get<bool>();
  }
  return r;
}

}  // namespace

json ExperimentReport::to_json() const {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = experiment;
  j["rows"] = json::array();
  for (const auto& r : rows) j["rows"].push_back(row_json(r));
  j["aggregates"] = json::array();
  for (const auto& a : aggregates) {
    j["aggregates"].push_back({{"method", a.method},
                               {"T", a.T},
                               {"ok_rows", a.ok_rows},
                               {"failed_rows", a.failed_rows},
                               {"mae", spread_json(a.mae)},
                               {"rmse", spread_json(a.rmse)},
                               {"tv", spread_json(a.tv)},
                               {"accuracy", spread_json(a.accuracy)}});
  }
  return j;
}

ExperimentReport ExperimentReport::from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw InvalidArgument("unsupported report schema version");
    }
    ExperimentReport r;
    r.experiment = j.at("experiment").get<std::string>();
    for (const auto& row : j.at("rows")) r.rows.push_back(row_from(row));
    for (const auto& a : j.at("aggregates")) {
      r.aggregates.push_back({a.at("method").get<std::string>(),
                              a.at("T").get<int>(),
                              a.at("ok_rows").get<int>(),
                              a.at("failed_rows").get<int>(),
                              spread_from(a.at("mae")),
                              spread_from(a.at("rmse")),
                              spread_from(a.at("tv")),
                              spread_from(a.at("accuracy"))});
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("report: ") + e.what());
  }
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : ""; }

template <typename Container>
std::string joined(const Container& values) {
  std::string s;
  for (double v : values) {
    if (!s.empty()) s += ';';
    s += num(v);
  }
  return s;
}

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_rows_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "experiment,method,T,seed,status,mae,rmse,tv,accuracy,nll,"
        "empirical_nll,w1,w2,y,lambda1,lambda2,fitted_is_ce,error\n";
  for (const ReportRow& row : r.rows) {
    os << r.experiment << ',' << row.method << ',' << row.T << ',' << row.seed
       << ',' << (row.error ? "failed" : "ok") << ',' << num(row.metrics.mae)
       << ',' << num(row.metrics.rmse) << ',' << num(row.metrics.tv) << ','
       << num(row.metrics.accuracy) << ',' << num(row.nll) << ','
       << num(row.empirical_nll) << ',' << joined(row.w1) << ','
       << joined(row.w2) << ',' << (row.y ? joined(*row.y) : "") << ','
       << (row.lambda ? num((*row.lambda)[0]) : "") << ','
       << (row.lambda ? num((*row.lambda)[1]) : "") << ','
       << (row.fitted_is_ce ? (*row.fitted_is_ce ? "true" : "false") : "")
       << ',' << (row.error ? csv_quote(*row.error) : "") << '\n';
  }
  return os.str();
}

std::string format_aggregates_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "experiment,method,T,ok_rows,failed_rows,mae_median,mae_iqr,"
        "rmse_median,rmse_iqr,tv_median,tv_iqr,accuracy_median,accuracy_iqr\n";
  auto cells = [](const std::optional<Spread>& s) {
    return s ? num(s->median) + ',' + num(s->iqr) : std::string(",");
  };
  for (const Aggregate& a : r.aggregates) {
    os << r.experiment << ',' << a.method << ',' << a.T << ',' << a.ok_rows
       << ',' << a.failed_rows << ',' << cells(a.mae) << ',' << cells(a.rmse)
       << ',' << cells(a.tv) << ',' << cells(a.accuracy) << '\n';
  }
  return os.str();
}

std::string format_plot_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "action_index,empirical_p,model_p,method,experiment,T\n";
  for (const Aggregate& a : r.aggregates) {
    std::array<double, 4> emp{}, model{};
    int n = 0;
    for (const ReportRow& row : r.rows) {
      if (row.method != a.method || row.T != a.T || row.error) continue;
      for (int l = 0; l < 4; ++l) {
        emp[l] += row.empirical[l];
        model[l] += row.fitted[l];
      }
      ++n;
    }
    if (n == 0) continue;
    for (int l = 0; l < 4; ++l) {
      os << l + 1 << ',' << num(emp[l] / n) << ',' << num(model[l] / n) << ','
         << a.method << ',' << r.experiment << ',' << a.T << '\n';
    }
  }
  return os.str();
}

std::string format_summary_table(const ExperimentReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-4s %-14s %6s %9s %9s %9s %9s %7s\n",
                "exp", "method", "T", "MAE", "RMSE", "TV", "acc%", "failed");
  out += line;
  auto med = [](const std::optional<Spread>& s) {
    char b[16];
    if (s) {
      std::snprintf(b, sizeof b, "%9.4f", s->median);
    } else {
      std::snprintf(b, sizeof b, "%9s", "-");
    }
    return std::string(b);
  };
  for (const Aggregate& a : r.aggregates) {
    char acc[16];
    if (a.accuracy) {
      std::snprintf(acc, sizeof acc, "%9.2f", a.accuracy->median);
    } else {
      std::snprintf(acc, sizeof acc, "%9s", "-");
    }
    std::snprintf(line, sizeof line, "%-4s %-14s %6d %s %s %s %s %7d\n",
                  r.experiment.c_str(), a.method.c_str(), a.T,
                  med(a.mae).c_str(), med(a.rmse).c_str(), med(a.tv).c_str(),
                  acc, a.failed_rows);
    out += line;
  }
  return out;
}

void emit_report(const ExperimentReport& r, const std::string& dir) {
  const std::filesystem::path root(dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw Error("cannot create '" + dir + "': " + ec.message());
  write_file(root / "rows.csv", format_rows_csv(r));
  write_file(root / "aggregates.csv", format_aggregates_csv(r));
  write_file(root / "report.json", r.to_json().dump(2) + "\n");
  write_file(root / "plot_data.csv", format_plot_csv(r));
}

}  // namespace invgame
