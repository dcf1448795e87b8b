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
#include <cmath>
#include <cstddef>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "musielak/errors.hpp"
#include "musielak/format.hpp"
#include "musielak/nfunction.hpp"
#include "musielak/sampling.hpp"
#include "musielak/scalar_search.hpp"
#include "musielak/vec.hpp"

namespace musielak {

/// Sampling budget for the balance condition: for every ball B in the
/// domain with |B| <= 1, every x in B and every xi with |xi| > 1 and
/// M(x, C xi) in [1, 1/|B|], sup_{y in B} M(y, xi) <= M(x, C xi).
struct BalanceProbe {
  double c_m = 2.0;
  int centers = 48;
  /// Extra centers per vanishing weight, placed on its zero set.
  int zero_set_centers = 12;
  /// Empty means the default geometric schedule down to 1e-4.
  std::vector<double> radii;
  int random_x_per_ball = 3;
  int xi_per_x = 12;
  int y_samples = 24;
  int refine_steps = 40;
  /// Keep every tested (ball, x, xi) in the report.
  bool keep_samples = false;
};

struct BalanceWitness {
  Vec center;
  double radius = 0.0;
  Vec x;
  Vec xi;
  Vec y;
  double sup_m = 0.0;        // sup over sampled y of M(y, xi)
  double m_dilated = 0.0;    // M(x, C xi)
  double violation = 0.0;    // sup_m / m_dilated - 1
};

struct BalanceSample {
  Vec center;
  double radius = 0.0;
  Vec x;
  Vec xi;
  double sup_m = 0.0;
};

struct BalanceReport {
  double c_m = 0.0;
  bool passed = true;
  std::vector<BalanceWitness> witnesses;  // worst per ball, sorted by violation
  std::size_t balls_tested = 0;
  std::size_t xi_tested = 0;
  /// (ball, x) pairs for which no sampled xi satisfied |xi| > 1.
  std::size_t empty_windows = 0;
  std::vector<BalanceSample> samples;
};

inline double ball_volume(int d, double r) {
  switch (d) {
    case 1: return 2.0 * r;
    case 2: return std::numbers::pi * r * r;
    default: return 4.0 / 3.0 * std::numbers::pi * r * r * r;
  }
}

/// Geometric radii from the largest admissible ball down to 1e-4.
inline std::vector<double> default_radii(const Box& domain) {
  double rmax = 0.5 * domain.extent(0);
  for (int i = 1; i < domain.dim(); ++i) rmax = std::min(rmax, 0.5 * domain.extent(i));
  while (ball_volume(domain.dim(), rmax) > 1.0) rmax *= 0.5;
  std::vector<double> r;
  for (double v = rmax; v >= 1e-4; v /= std::sqrt(10.0)) r.push_back(v);
  return r;
}

struct AnalyticBalance {
  bool satisfied = true;
  std::string detail;
};

/// Standard sufficient conditions: affine exponents are log-Hoelder;
/// double phase needs q/p <= 1 + alpha/d. (The condition is sometimes
/// printed with p/q on the left, which holds for every p <= q and cannot
/// be what is meant.)
inline AnalyticBalance analytic_balance(const NFunction& m) {
  AnalyticBalance a;
  switch (m.family()) {
    case Family::constant_power: a.detail = "x-independent"; return a;
    case Family::variable_exponent:
    case Family::anisotropic_variable: a.detail = "affine exponents are log-Hoelder continuous"; return a;
    case Family::custom: a.satisfied = false; a.detail = "no analytic criterion for custom integrands"; return a;
    default: break;
  }
  const double d = m.dim();
  for (const auto& ph : m.phases()) {
    const double lhs = ph.q / ph.p;
    const double rhs = 1.0 + ph.alpha / d;
    a.detail += (a.detail.empty() ? "" : "; ") + std::string("q/p = ") + format_short(lhs) +
                (lhs <= rhs ? " <= " : " > ") + "1 + alpha/d = " + format_short(rhs);
    if (lhs > rhs * (1.0 + 1e-15)) a.satisfied = false;
  }
  return a;
}

namespace detail {

inline Vec clamp_into(const Box& box, Vec c, double r) {
  for (int i = 0; i < c.dim(); ++i) c[i] = std::clamp(c[i], box.lower[i] + r, box.upper[i] - r);
  return c;
}

inline Vec project_to_ball(const Vec& center, double r, const Vec& y) {
  const Vec d = y - center;
  const double n = norm(d);
  return n <= r ? y : center + d * (r / n);
}

/// Ball centers: a Halton sequence plus points on the zero sets of
/// vanishing double-phase weights.
inline std::vector<Vec> balance_centers(const NFunction& m, const BalanceProbe& probe) {
  const Box& box = m.domain();
  std::vector<Vec> out;
  for (int i = 1; i <= probe.centers; ++i) out.push_back(halton_point(static_cast<std::uint64_t>(i), box));
  for (const auto& w : m.vanishing_weights()) {
    const Vec n = w.gradient / norm(w.gradient);
    for (int i = 1; i <= probe.zero_set_centers; ++i) {
      Vec p = halton_point(static_cast<std::uint64_t>(i), box);
      p -= n * dot(n, p - w.anchor);  // onto the hyperplane
      if (box.contains(p, 1e-12)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace detail

inline BalanceReport check_balance(const NFunction& m, const BalanceProbe& probe, Rng& rng) {
  if (!(probe.c_m > 1.0)) throw InvalidParameter("balance: C_M must exceed 1");
  const Box& box = m.domain();
  const int d = m.dim();
  const std::vector<double> radii = probe.radii.empty() ? default_radii(box) : probe.radii;
  for (double r : radii) {
    if (!(r > 0.0) || ball_volume(d, r) > 1.0) throw InvalidParameter("balance: radius " + format_short(r) + " gives |B| > 1");
    for (int i = 0; i < d; ++i)
      if (2.0 * r > box.extent(i)) throw InvalidParameter("balance: radius " + format_short(r) + " does not fit the domain");
  }
  const auto centers = detail::balance_centers(m, probe);
  std::vector<Vec> normals;
  for (const auto& w : m.vanishing_weights()) normals.push_back(w.gradient / norm(w.gradient));
  for (int i = 0; i < d; ++i) normals.push_back(Vec::unit(d, i));

  BalanceReport rep;
  rep.c_m = probe.c_m;
  for (double r : radii) {
    const double vol = ball_volume(d, r);
    for (const Vec& raw : centers) {
      const Vec c = detail::clamp_into(box, raw, r);
      ++rep.balls_tested;
      // Candidate x and starting y: center, the extreme points along the
      // axes and weight normals, and random interior points.
      std::vector<Vec> probes{c};
      for (const Vec& n : normals) {
        probes.push_back(c + n * r);
        probes.push_back(c - n * r);
      }
      std::vector<Vec> xs = probes;
      for (int k = 0; k < probe.random_x_per_ball; ++k) xs.push_back(random_point_in_ball(rng, c, r));
      std::vector<Vec> ys = probes;
      for (int k = 0; k < probe.y_samples; ++k) ys.push_back(random_point_in_ball(rng, c, r));

      BalanceWitness worst;
      bool ball_failed = false;
      for (const Vec& x : xs) {
        bool any = false;
        for (int k = 0; k < probe.xi_per_x; ++k) {
          const Vec e = random_direction(rng, d);
          const double s = 1.0 / vol > 1.0 ? log_uniform(rng, 1.0, 1.0 / vol) : 1.0;
          const double t = invert_increasing([&](double tt) { return m.value(x, e * (probe.c_m * tt)); }, s);
          if (!(t > 1.0)) continue;
          any = true;
          ++rep.xi_tested;
          const Vec xi = e * t;
          const double rhs = m.value(x, xi * probe.c_m);
          auto f = [&](const Vec& y) { return m.value(y, xi); };
          Vec best_y = c;
          double best = f(c);
          for (const Vec& y : ys) {
            const double v = f(y);
            if (v > best) {
              best = v;
              best_y = y;
            }
          }
          // Projected coordinate search from the best sample.
          double step = 0.5 * r;
          for (int it = 0; it < probe.refine_steps && step > 1e-12 * r; ++it) {
            bool moved = false;
            for (const Vec& n : normals)
              for (double sgn : {1.0, -1.0}) {
                const Vec y = detail::project_to_ball(c, r, best_y + n * (sgn * step));
                const double v = f(y);
                if (v > best) {
                  best = v;
                  best_y = y;
                  moved = true;
                }
              }
            if (!moved) step *= 0.5;
          }
          if (probe.keep_samples) rep.samples.push_back({c, r, x, xi, best});
          if (best > rhs * (1.0 + 1e-12)) {
            const double viol = best / rhs - 1.0;
            if (!ball_failed || viol > worst.violation) worst = {c, r, x, xi, best_y, best, rhs, viol};
            ball_failed = true;
          }
        }
        if (!any) ++rep.empty_windows;
      }
      if (ball_failed) rep.witnesses.push_back(worst);
    }
  }
  std::stable_sort(rep.witnesses.begin(), rep.witnesses.end(),
                   [](const BalanceWitness& a, const BalanceWitness& b) { return a.violation > b.violation; });
  rep.passed = rep.witnesses.empty();
  return rep;
}

/// Re-evaluates recorded samples at another constant (same xi, same sup).
inline std::size_t count_violations(const NFunction& m, const std::vector<BalanceSample>& samples, double c_m) {
  std::size_t n = 0;
  for (const auto& s : samples)
    if (s.sup_m > m.value(s.x, s.xi * c_m) * (1.0 + 1e-12)) ++n;
  return n;
}

struct BalanceSweep {
  std::vector<BalanceReport> reports;
  /// Smallest passing constant of the schedule, 0 if none passes.
  double smallest_passing = 0.0;
};

/// Runs the probe for each constant with the generator re-seeded, so each
/// constant sees the same ball and direction samples.
inline BalanceSweep balance_sweep(const NFunction& m, BalanceProbe probe, const std::vector<double>& schedule,
                                  std::uint64_t seed) {
  BalanceSweep out;
  for (double c : schedule) {
    probe.c_m = c;
    Rng rng(seed);
    out.reports.push_back(check_balance(m, probe, rng));
    if (out.smallest_passing == 0.0 && out.reports.back().passed) out.smallest_passing = c;
  }
  return out;
}

inline void write_witness_csv(std::ostream& os, const BalanceReport& r) {
  write_csv_row(os, {"c_m", "center", "radius", "x", "xi", "y", "sup_m", "m_dilated", "violation"});
  auto vec = [](const Vec& v) {
    std::string s;
    for (int i = 0; i < v.dim(); ++i) s += (i ? " " : "") + format_double(v[i]);
    return s;
  };
  for (const auto& w : r.witnesses)
    write_csv_row(os, {format_double(r.c_m), vec(w.center), format_double(w.radius), vec(w.x), vec(w.xi), vec(w.y),
                       format_double(w.sup_m), format_double(w.m_dilated), format_double(w.violation)});
}

}  // namespace musielak
