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

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "musielak/format.hpp"
#include "musielak/report.hpp"
#include "musielak/scalar_search.hpp"

namespace musielak {

/// Convex m : [0, inf) -> [0, inf), zero only at 0, superlinear at 0 and inf.
class YoungFunction {
 public:
  YoungFunction() = default;
  YoungFunction(std::function<double(double)> fn, std::string description)
      : fn_(std::move(fn)), description_(std::move(description)) {}

  double operator()(double t) const { return fn_(t); }
  [[nodiscard]] const std::string& description() const { return description_; }
  [[nodiscard]] explicit operator bool() const { return static_cast<bool>(fn_); }

  /// Smallest t with m(t) >= value.
  [[nodiscard]] double inverse(double value) const {
    if (value <= 0.0) return 0.0;
    return invert_increasing(fn_, value);
  }

 private:
  std::function<double(double)> fn_;
  std::string description_;
};

/// k t^e.
inline YoungFunction power_young(double k, double e) {
  return {[k, e](double t) { return k * std::pow(t, e); },
          format_short(k) + " t^" + format_short(e)};
}

/// k * max(t^lo, t^hi) for lo <= hi: t^lo on [0,1], t^hi beyond. Convex
/// because the slope jumps up from lo to hi at t = 1.
inline YoungFunction upper_two_regime(double k, double lo, double hi) {
  return {[k, lo, hi](double t) { return k * (t <= 1.0 ? std::pow(t, lo) : std::pow(t, hi)); },
          format_short(k) + " max(t^" + format_short(lo) + ", t^" + format_short(hi) + ")"};
}

/// Convex minorant of k * min(t^lo, t^hi) for lo <= hi:
///   (lo/hi) k t^hi                         on [0, 1]
///   (lo/hi) k (1 + (hi/lo) (t^lo - 1))      on (1, inf)
/// Its derivative is continuous and nondecreasing, so the map is a Young function.
inline YoungFunction lower_two_regime(double k, double lo, double hi) {
  const double r = lo / hi;
  return {[k, lo, hi, r](double t) {
            return t <= 1.0 ? r * k * std::pow(t, hi) : r * k * (1.0 + (hi / lo) * (std::pow(t, lo) - 1.0));
          },
          format_short(k) + " lower(t^" + format_short(lo) + ", t^" + format_short(hi) + ")"};
}

/// Pointwise sum of Young functions.
inline YoungFunction sum_young(std::vector<YoungFunction> parts, double outer_scale = 1.0, double arg_scale = 1.0) {
  std::string desc;
  for (const auto& p : parts) desc += (desc.empty() ? "" : " + ") + p.description();
  if (outer_scale != 1.0) desc = format_short(outer_scale) + " (" + desc + ")";
  if (arg_scale != 1.0) desc += " at t*" + format_short(arg_scale);
  return {[parts = std::move(parts), outer_scale, arg_scale](double t) {
            double s = 0.0;
            for (const auto& p : parts) s += p(t * arg_scale);
            return outer_scale * s;
          },
          desc};
}

/// Sampled Young-function axioms: m(0)=0, positivity, midpoint convexity on
/// a geometric grid, and strictly increasing m(t)/t on t = 2^k, |k| <= 30
/// as the stand-in for superlinearity at 0 and at infinity.
inline std::vector<PropertyCheck> check_young_function(const YoungFunction& m, const std::string& label) {
  PropertyCheck zero{label + ": m(0)=0"};
  zero.record(-std::abs(m(0.0)), "t=0");

  PropertyCheck positive{label + ": m(t)>0"};
  PropertyCheck convex{label + ": midpoint convexity"};
  PropertyCheck superlinear{label + ": m(t)/t increasing"};
  double prev_ratio = -1.0;
  for (int k = -30; k <= 30; ++k) {
    const double t = std::ldexp(1.0, k);
    const double v = m(t);
    positive.record(v > 0.0 ? 0.0 : -1.0, "t=" + format_short(t));
    const double ratio = v / t;
    if (prev_ratio >= 0.0) {
      superlinear.record(ratio > prev_ratio ? 0.0 : -1.0 - (prev_ratio - ratio), "t=" + format_short(t));
    }
    prev_ratio = ratio;
    for (double s : {0.0, 0.5 * t, 3.0 * t}) {
      const double mid = m(0.5 * (s + t));
      const double chord = 0.5 * (m(s) + m(t));
      convex.record(chord - mid + 1e-12 * std::abs(chord), "s=" + format_short(s) + " t=" + format_short(t));
    }
  }
  return {zero, positive, convex, superlinear};
}

}  // namespace musielak
