// Copyright 2026 The Musielak Galerkin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace musielak {

/// Invalid catalog parameters or malformed construction input.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point x was supplied outside the domain Omega.
class DomainViolation : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Sizes of coefficient vectors, fields or integrands disagree.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Only intervals and rectangles can be meshed.
class UnsupportedDomain : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The conjugate maximizer kept reaching the edge of the search ball.
class SearchRadiusExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Some integrand evaluated to inf/nan during assembly.
class NonfiniteIntegrand : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Auto-fitting of growth constants failed on the sample budget.
class ConstructionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nonlinear solve ran out of budget. Carries the best iterate seen.
class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, std::vector<double> best, std::vector<double> history)
      : std::runtime_error(what), best_coefficients_(std::move(best)), residual_history_(std::move(history)) {}

  [[nodiscard]] const std::vector<double>& best_coefficients() const { return best_coefficients_; }
  [[nodiscard]] const std::vector<double>& residual_history() const { return residual_history_; }

 private:
  std::vector<double> best_coefficients_;
  std::vector<double> residual_history_;
};

}  // namespace musielak
