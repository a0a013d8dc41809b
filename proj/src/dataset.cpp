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

#include "invgame/dataset.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "invgame/error.hpp"

namespace invgame {

using nlohmann::json;

KinematicState KinematicState::checked(double v1, double v2, double d1,
                                       double d2) {
  for (double x : {v1, v2, d1, d2}) {
    if (!std::isfinite(x) || x <= 0.0) {
      throw InvalidArgument("speeds and distances must be positive");
    }
  }
  return {v1, v2, d1, d2};
}

void Dataset::add(JointAction a, std::optional<TrafficContext> context,
                  std::optional<JointAction> recommendation) {
  records_.push_back(Record{static_cast<int>(records_.size()) + 1, a, context,
                            recommendation});
}

void write_jsonl(std::ostream& os, const Dataset& d) {
  for (const Record& r : d.records()) {
    json j;
    j["t"] = r.t;
    j["a1"] = r.action.player1_action();
    j["a2"] = r.action.player2_action();
    if (r.context) {
      j["tau1"] = r.context->tau1;
      j["tau2"] = r.context->tau2;
      j["delta"] = r.context->delta;
    }
    if (r.recommendation) {
      j["r1"] = r.recommendation->player1_action();
      j["r2"] = r.recommendation->player2_action();
    }
    os << j.dump() << '\n';
  }
}

namespace {

int action_field(const json& j, const char* key, int line) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw InvalidArgument("line " + std::to_string(line) + ": missing integer '" +
                          key + "'");
  }
  const int a = j[key].get<int>();
  if (a != 1 && a != 2) {
    throw InvalidArgument("line " + std::to_string(line) + ": '" + key +
                          "' must be 1 or 2, got " + std::to_string(a));
  }
  return a;
}

}  // namespace

Dataset read_jsonl(std::istream& is) {
  Dataset d;
  std::string text;
  int line = 0;
  while (std::getline(is, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InvalidArgument("line " + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object()) {
      throw InvalidArgument("line " + std::to_string(line) +
                            ": expected a JSON object");
    }
    const JointAction a = JointAction::from_actions(action_field(j, "a1", line),
                                                    action_field(j, "a2", line));
    if (j.contains("t") &&
        (!j["t"].is_number_integer() || j["t"].get<int>() != d.size() + 1)) {
      throw InvalidArgument("line " + std::to_string(line) +
                            ": record indices must run 1..T");
    }
    std::optional<TrafficContext> ctx;
    if (j.contains("tau1") || j.contains("tau2") || j.contains("delta")) {
      for (const char* key : {"tau1", "tau2", "delta"}) {
        if (!j.contains(key) || !j[key].is_number()) {
          throw InvalidArgument("line " + std::to_string(line) +
                                ": incomplete kinematic fields");
        }
      }
      ctx = TrafficContext{j["tau1"].get<double>(), j["tau2"].get<double>(),
                           j["delta"].get<double>()};
    }
    std::optional<JointAction> rec;
    if (j.contains("r1") || j.contains("r2")) {
      rec = JointAction::from_actions(action_field(j, "r1", line),
                                      action_field(j, "r2", line));
    }
    d.add(a, ctx, rec);
  }
  return d;
}

Dataset read_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open dataset '" + path + "'");
  try {
    return read_jsonl(in);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_jsonl_file(const std::string& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset '" + path + "'");
  write_jsonl(out, d);
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_csv(std::ostream& os, const Dataset& d) {
  os << "t,a1,a2,tau1,tau2,delta\n";
  const auto old_precision = os.precision(17);
  for (const Record& r : d.records()) {
    os << r.t << ',' << r.action.player1_action() << ','
       << r.action.player2_action();
    if (r.context) {
      os << ',' << r.context->tau1 << ',' << r.context->tau2 << ','
         << r.context->delta;
    } else {
      os << ",,,";
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace invgame
