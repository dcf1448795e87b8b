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

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace musielak {

/// Outcome of one sampled property: worst margin seen and, on failure,
/// a printable witness. A margin below zero is a violation.
struct PropertyCheck {
  PropertyCheck() = default;
  PropertyCheck(std::string n) : name(std::move(n)) {}  // NOLINT(google-explicit-constructor)

  std::string name;
  bool passed = true;
  double worst_margin = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::string witness;

  /// Keeps the witness of the worst violation.
  void record(double margin, const std::string& where) {
    const bool worst = samples == 0 || margin < worst_margin;
    if (worst) worst_margin = margin;
    ++samples;
    if (margin < 0.0) {
      if (worst) witness = where;
      ++violations;
      passed = false;
    }
  }
};

inline bool all_passed(const std::vector<PropertyCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

}  // namespace musielak
