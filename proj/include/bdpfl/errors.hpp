// Copyright 2026 The bdpfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef BDPFL_ERRORS_HPP_
#define BDPFL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bdpfl {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature hit the refinement cap before reaching the requested
// tolerance. Carries the best estimate obtained so far; callers decide
// whether it is usable.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

// A per-(lambda, sample) privacy cost exceeded the saturation threshold.
// Callers are expected to drop the offending lambda from their grid rather
// than clamp the value.
class CostOverflowError : public Error {
 public:
  CostOverflowError(int lambda, double delta_norm, double log_value)
      : Error("cost overflow: log-value " + std::to_string(log_value) +
              " exceeds 700 at lambda=" + std::to_string(lambda) +
              ", delta_norm=" + std::to_string(delta_norm)),
        lambda_(lambda),
        delta_norm_(delta_norm) {}
  int lambda() const { return lambda_; }
  double delta_norm() const { return delta_norm_; }

 private:
  int lambda_;
  double delta_norm_;
};

// Malformed input text (config files, norm files, serialized ledgers).
// line() is 1-based; 0 means the error is not tied to a single line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace bdpfl

#endif  // BDPFL_ERRORS_HPP_
