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
#include <limits>
#include <string>

#include "musielak/errors.hpp"

namespace musielak {

struct ScalarMax {
  double arg = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [a, b].
/// Returns the best point actually evaluated.
template <class F>
ScalarMax golden_section_maximize(F&& f, double a, double b, double rel_tol = 1e-13, int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  ScalarMax best;
  auto consider = [&](double t, double v) {
    ++best.evaluations;
    if (v > best.value) {
      best.value = v;
      best.arg = t;
    }
  };
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(b - a) <= rel_tol * (std::abs(a) + std::abs(b)) || std::abs(b - a) < 1e-300) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best;
}

/// Settings for maximizing a concave function over the half line [0, inf).
struct HalfLineSearch {
  double initial_radius = 1.0;
  int grid_size = 24;
  int max_doublings = 64;
};

/// Maximizes a concave f on [0, inf) given f(0). A geometric grid
/// t_k = R 2^-k locates the maximizer; R doubles while the best grid point
/// sits on the outer edge; golden-section then refines between neighbours.
/// Throws SearchRadiusExhausted when the doublings run out.
template <class F>
ScalarMax maximize_concave_half_line(F&& f, double f_at_zero, const HalfLineSearch& settings = {}) {
  ScalarMax best{0.0, f_at_zero, 0};
  double radius = settings.initial_radius;
  const int g = std::max(settings.grid_size, 3);
  for (int doubling = 0; doubling <= settings.max_doublings; ++doubling, radius *= 2.0) {
    int best_k = g;  // index g means t = 0
    double best_v = f_at_zero;
    for (int k = 0; k < g; ++k) {
      const double t = std::ldexp(radius, -k);
      const double v = f(t);
      ++best.evaluations;
      if (v > best_v) {
        best_v = v;
        best_k = k;
      }
    }
    if (best_k == 0 && doubling < settings.max_doublings) continue;
    if (best_k == 0) break;
    const double lo = best_k + 1 >= g ? 0.0 : std::ldexp(radius, -(best_k + 1));
    const double hi = best_k >= g ? std::ldexp(radius, -(g - 1)) : std::ldexp(radius, -(best_k - 1));
    ScalarMax refined = golden_section_maximize(f, lo, hi);
    best.evaluations += refined.evaluations;
    if (best_v > best.value) {
      best.value = best_v;
      best.arg = best_k >= g ? 0.0 : std::ldexp(radius, -best_k);
    }
    if (refined.value > best.value) {
      best.value = refined.value;
      best.arg = refined.arg;
    }
    return best;
  }
  throw SearchRadiusExhausted("half-line maximization: maximizer still on the outer radius " +
                              std::to_string(radius) + " after " + std::to_string(settings.max_doublings) +
                              " doublings");
}

/// Solves g(t) = target for continuous nondecreasing g with g(0) <= target.
/// Bracket grows geometrically from t0; plain bisection afterwards.
template <class G>
double invert_increasing(G&& g, double target, double t0 = 1.0, double rel_tol = 1e-14, int max_doublings = 2000) {
  double lo = 0.0;
  double hi = t0;
  int n = 0;
  while (g(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++n > max_doublings || !std::isfinite(hi)) {
      throw InvalidParameter("invert_increasing: target " + std::to_string(target) + " not reached");
    }
  }
  for (int it = 0; it < 400 && hi - lo > rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace musielak
