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

#ifndef INVGAME_DATASET_HPP_
#define INVGAME_DATASET_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "invgame/distribution.hpp"

namespace invgame {

// Decision-point geometry of two vehicles approaching a conflict point.
struct KinematicState {
  double v1, v2;  // speeds, m/s
  double d1, d2;  // distances to the conflict point, m

  // Throws InvalidArgument unless speeds and distances are positive.
  static KinematicState checked(double v1, double v2, double d1, double d2);

  double tau1() const { return d1 / v1; }
  double tau2() const { return d2 / v2; }
  double delta() const { return tau2() - tau1(); }
};

// Times to the conflict point as stored alongside an observation.
struct TrafficContext {
  double tau1, tau2, delta;

  static TrafficContext from_state(const KinematicState& k) {
    return {k.tau1(), k.tau2(), k.delta()};
  }
  friend bool operator==(const TrafficContext&,
                         const TrafficContext&) = default;
};

struct Record {
  int t;  // 1-based position in the dataset
  JointAction action;
  std::optional<TrafficContext> context;
  // Recommendation issued by a correlation device, when one was used.
  std::optional<JointAction> recommendation;

  friend bool operator==(const Record&, const Record&) = default;
};

class Dataset {
 public:
  Dataset() = default;

  void add(JointAction a, std::optional<TrafficContext> context = std::nullopt,
           std::optional<JointAction> recommendation = std::nullopt);

  const std::vector<Record>& records() const { return records_; }
  int size() const { return static_cast<int>(records_.size()); }
  bool empty() const { return records_.empty(); }
  const Record& operator[](int i) const { return records_[i]; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Record> records_;
};

// One JSON object per line:
//   {"t":1,"a1":1,"a2":2,"tau1":2.0,"tau2":3.0,"delta":1.0}
// Kinematic fields are optional; "r1"/"r2" carry a recommendation.
void write_jsonl(std::ostream& os, const Dataset& d);
// Throws InvalidArgument naming the offending line.
Dataset read_jsonl(std::istream& is);
Dataset read_jsonl_file(const std::string& path);
void write_jsonl_file(const std::string& path, const Dataset& d);

// Columns: t,a1,a2,tau1,tau2,delta (empty kinematic cells when absent).
void write_csv(std::ostream& os, const Dataset& d);

}  // namespace invgame

#endif  // INVGAME_DATASET_HPP_
