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
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "musielak/basis.hpp"
#include "musielak/fem.hpp"
#include "musielak/galerkin.hpp"
#include "musielak/modular.hpp"
#include "musielak/problem.hpp"

namespace musielak {

/// Fixed smooth test functions: sin(k pi t) in 1D (k = 1..5) and
/// sin(k pi t1) sin(l pi t2) in 2D (k, l = 1..3), t the rescaled coordinate.
struct TestMode {
  std::vector<int> freq;
  [[nodiscard]] std::string label() const {
    std::string s = "mode";
    for (int f : freq) s += "_" + std::to_string(f);
    return s;
  }
};

inline std::vector<TestMode> weak_form_panel(int dim) {
  std::vector<TestMode> out;
  if (dim == 1) {
    for (int k = 1; k <= 5; ++k) out.push_back({{k}});
  } else {
    for (int k = 1; k <= 3; ++k)
      for (int l = 1; l <= 3; ++l) out.push_back({{k, l}});
  }
  return out;
}

inline std::pair<double, Vec> eval_mode(const TestMode& m, const Box& box, const Vec& x) {
  const int d = box.dim();
  double v = 1.0;
  Vec g = Vec::zero(d);
  std::array<double, kMaxDim> s{};
  std::array<double, kMaxDim> ds{};
  for (int i = 0; i < d; ++i) {
    const double w = m.freq[static_cast<std::size_t>(i)] * std::numbers::pi / box.extent(i);
    const double z = w * (x[i] - box.lower[i]);
    s[static_cast<std::size_t>(i)] = std::sin(z);
    ds[static_cast<std::size_t>(i)] = w * std::cos(z);
    v *= s[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < d; ++i) {
    double p = ds[static_cast<std::size_t>(i)];
    for (int j = 0; j < d; ++j)
      if (j != i) p *= s[static_cast<std::size_t>(j)];
    g[i] = p;
  }
  return {v, g};
}

/// |int A(x, grad u).grad v + Phi(u).grad v + b(x, u) v - F.grad v| per mode.
inline std::vector<double> weak_form_residuals(const GalerkinSystem& sys, const GalerkinSolution& sol,
                                               const std::vector<TestMode>& panel, int subdivisions = 2) {
  auto q = build_quadrature(sys.basis->mesh(), subdivisions);
  const auto [u, grad] = solution_fields(sys, sol.alpha, q);
  std::vector<double> out(panel.size(), 0.0);
  for (std::size_t k = 0; k < q->size(); ++k) {
    const Vec& x = q->x[k];
    Vec flux = sys.op.a(x, grad.values[k]) + sys.op.phi(u.scalar(k)) - sys.op.f(x);
    const double bu = sys.op.b(x, u.scalar(k));
    for (std::size_t m = 0; m < panel.size(); ++m) {
      const auto [v, gv] = eval_mode(panel[m], sys.op.domain(), x);
      out[m] += q->weight[k] * (dot(flux, gv) + bu * v);
    }
  }
  for (double& r : out) r = std::abs(r);
  return out;
}

/// ||u_h - u*||_{L^2} on a refined quadrature.
inline double l2_error(const GalerkinSystem& sys, const GalerkinSolution& sol,
                       const std::function<double(const Vec&)>& exact, int subdivisions = 4) {
  auto q = build_quadrature(sys.basis->mesh(), subdivisions);
  const auto [u, grad] = solution_fields(sys, sol.alpha, q);
  double s = 0.0;
  for (std::size_t k = 0; k < q->size(); ++k) s += q->weight[k] * std::pow(u.scalar(k) - exact(q->x[k]), 2);
  return std::sqrt(s);
}

/// Least-squares slope of log y against log x.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += std::pow(std::log(x[i]) - mx, 2);
  }
  return sxy / sxx;
}

struct StudyLevel {
  int resolution = 0;
  std::size_t n = 0;
  double h = 0.0;
  GalerkinSolution solution;
  EnergyDiagnostics energy;
  DualBound dual;
  PhiLemmaCheck phi;
  /// modular_distance(grad u_level, grad u_previous, lambda) per lambda; empty at level 0.
  std::vector<double> modular_dist_prev;
  std::vector<double> weak_form;
  std::optional<double> l2_error;
};

/// Largest weak-form residual over the test panel.
inline double panel_residual(const StudyLevel& lv) {
  double m = 0.0;
  for (double w : lv.weak_form) m = std::max(m, w);
  return m;
}

struct ConvergenceReport {
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0};
  std::vector<double> truncation_levels{1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<StudyLevel> levels;
  std::vector<TestMode> panel;
  /// modular_distance(grad T_k u, grad u, 1) on the finest level, per k.
  std::vector<double> truncation;
  /// Smallest lambda whose distances decrease strictly across levels (0 if none).
  double witnessing_lambda = 0.0;
  std::optional<double> l2_slope;
  std::vector<PropertyCheck> checks;
  [[nodiscard]] bool passed() const { return all_passed(checks); }
};

struct StudySettings {
  std::vector<double> lambdas{1.0, 2.0, 4.0, 8.0};
  std::vector<double> truncation_levels{1.0, 2.0, 4.0, 8.0, 16.0};
};

/// Re-solves on each resolution from scratch and records the diagnostics.
inline ConvergenceReport convergence_study(const StructuredOperator& op, const DomainSpec& domain,
                                           const std::vector<int>& resolutions, const SolverSettings& solver = {},
                                           const StudySettings& settings = {}) {
  if (resolutions.size() < 3) throw PreconditionError("convergence_study: need at least three resolutions");
  for (std::size_t i = 1; i < resolutions.size(); ++i)
    if (resolutions[i] <= resolutions[i - 1]) throw PreconditionError("convergence_study: resolutions must increase");
  ConvergenceReport rep;
  rep.lambdas = settings.lambdas;
  rep.truncation_levels = settings.truncation_levels;
  rep.panel = weak_form_panel(op.dim());
  std::vector<GalerkinSystem> systems;
  for (int res : resolutions) {
    auto mesh = std::make_shared<const Mesh>(build_mesh(domain, res));
    auto basis = std::make_shared<const BasisSet>(mesh);
    systems.push_back(make_system(basis, op, solver));
    const GalerkinSystem& sys = systems.back();
    StudyLevel lv;
    lv.resolution = res;
    lv.n = sys.size();
    lv.h = mesh->h();
    lv.solution = solve_galerkin(sys);
    lv.energy = energy_diagnostics(sys, lv.solution);
    lv.dual = dual_bound_check(sys, lv.solution);
    lv.phi = phi_lemma_check(sys, lv.solution);
    lv.weak_form = weak_form_residuals(sys, lv.solution, rep.panel);
    if (op.f.exact) lv.l2_error = l2_error(sys, lv.solution, op.f.exact);
    if (!rep.levels.empty()) {
      // Both gradients at this (finer) level's quadrature points.
      const GalerkinSystem& prev = systems[systems.size() - 2];
      const auto [u, grad] = solution_fields(sys, lv.solution.alpha);
      DiscreteField prev_grad = grad;
      for (std::size_t k = 0; k < grad.size(); ++k)
        prev_grad.values[k] = prev.basis->gradient(rep.levels.back().solution.alpha, grad.points->x[k]);
      for (double lambda : rep.lambdas) lv.modular_dist_prev.push_back(modular_distance(op.a.m, grad, prev_grad, lambda));
    }
    rep.levels.push_back(std::move(lv));
  }
  const GalerkinSystem& finest = systems.back();
  {
    const auto [u, grad] = solution_fields(finest, rep.levels.back().solution.alpha);
    for (double k : rep.truncation_levels)
      rep.truncation.push_back(modular_distance(op.a.m, truncate_gradient(u, grad, k), grad, 1.0));
  }

  PropertyCheck lemmas{"energy, dual and Phi lemmas at every level"};
  for (const auto& lv : rep.levels) {
    const bool ok = lv.energy.passed() && lv.dual.check.passed && lv.phi.check.passed;
    lemmas.record(ok ? 0.0 : -1.0, "resolution=" + std::to_string(lv.resolution));
  }
  PropertyCheck modular_decrease{"modular distances decrease"};
  for (std::size_t li = 0; li < rep.lambdas.size(); ++li) {
    bool mono = true;
    for (std::size_t i = 2; i < rep.levels.size(); ++i)
      mono = mono && rep.levels[i].modular_dist_prev[li] < rep.levels[i - 1].modular_dist_prev[li];
    if (mono && rep.witnessing_lambda == 0.0) rep.witnessing_lambda = rep.lambdas[li];
  }
  modular_decrease.record(rep.witnessing_lambda > 0.0 ? 0.0 : -1.0, "lambdas 1..8");
  // The panel is compared through its largest mode: single modes that are
  // already at rounding level, or aliased on the coarsest mesh, carry no trend.
  PropertyCheck weak{"weak-form panel residual decreases coarsest to finest"};
  weak.record(panel_residual(rep.levels.front()) - panel_residual(rep.levels.back()), "max over modes");
  PropertyCheck trunc{"truncation distance nonincreasing in k"};
  for (std::size_t i = 1; i < rep.truncation.size(); ++i)
    trunc.record(rep.truncation[i - 1] - rep.truncation[i], "k=" + format_short(rep.truncation_levels[i]));
  rep.checks = {lemmas, modular_decrease, weak, trunc};
  if (op.f.exact) {
    std::vector<double> hs, errs;
    for (const auto& lv : rep.levels) {
      hs.push_back(lv.h);
      errs.push_back(*lv.l2_error);
    }
    rep.l2_slope = log_log_slope(hs, errs);
  }
  return rep;
}

/// One row per level; distances to the previous level are at lambda = 1.
inline void write_convergence_csv(std::ostream& os, const ConvergenceReport& r) {
  std::vector<std::string> header{"level", "n", "h", "newton_iters", "residual_inf", "energy_A", "norm_LM",
                                  "energy_b", "dual_bound_margin", "modular_dist_prev"};
  for (const auto& m : r.panel) header.push_back("weakform_residual_" + m.label());
  header.push_back("l2_error");
  write_csv_row(os, header);
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& lv = r.levels[i];
    std::vector<std::string> row{std::to_string(i),
                                 std::to_string(lv.n),
                                 format_double(lv.h),
                                 std::to_string(lv.solution.iterations),
                                 format_double(lv.solution.residual_inf),
                                 format_double(lv.energy.energy_a),
                                 format_double(lv.energy.norm_lm),
                                 format_double(lv.energy.energy_b),
                                 format_double(lv.dual.margin),
                                 lv.modular_dist_prev.empty() ? "" : format_double(lv.modular_dist_prev.front())};
    for (double w : lv.weak_form) row.push_back(format_double(w));
    row.push_back(lv.l2_error ? format_double(*lv.l2_error) : "");
    write_csv_row(os, row);
  }
}

/// Distances to the previous level for every lambda.
inline void write_modular_distance_csv(std::ostream& os, const ConvergenceReport& r) {
  write_csv_row(os, {"level", "lambda", "modular_dist_prev"});
  for (std::size_t i = 1; i < r.levels.size(); ++i)
    for (std::size_t l = 0; l < r.lambdas.size(); ++l)
      write_csv_row(os, {std::to_string(i), format_double(r.lambdas[l]), format_double(r.levels[i].modular_dist_prev[l])});
}

inline void write_truncation_csv(std::ostream& os, const ConvergenceReport& r) {
  write_csv_row(os, {"k", "modular_distance"});
  for (std::size_t i = 0; i < r.truncation.size(); ++i)
    write_csv_row(os, {format_double(r.truncation_levels[i]), format_double(r.truncation[i])});
}

}  // namespace musielak
