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

#ifndef INVGAME_ERROR_HPP_
#define INVGAME_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace invgame {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad dimensions, invalid distributions, parse failures.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed to produce a usable answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An iterative solver ran out of iterations. Carries the best iterate found
// and the residual that was still above tolerance.
class NotConverged : public NumericalError {
 public:
  NotConverged(const std::string& what, std::vector<double> best_iterate,
               double residual)
      : NumericalError(what),
        best_iterate_(std::move(best_iterate)),
        residual_(residual) {}

  const std::vector<double>& best_iterate() const { return best_iterate_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> best_iterate_;
  double residual_;
};

}  // namespace invgame

#endif  // INVGAME_ERROR_HPP_
