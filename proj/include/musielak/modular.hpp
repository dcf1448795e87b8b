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
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "musielak/conjugate.hpp"
#include "musielak/errors.hpp"
#include "musielak/field.hpp"
#include "musielak/nfunction.hpp"
#include "musielak/report.hpp"

namespace musielak {

namespace detail {

template <Integrand M>
void require_field_dim(const M& m, const DiscreteField& f) {
  f.validate();
  if (f.components != m.dim())
    throw DimensionMismatch("modular: field has " + std::to_string(f.components) + " components, M has dimension " +
                            std::to_string(m.dim()));
}

}  // namespace detail

/// Quadrature approximation of the modular, summed in point order.
template <Integrand M>
double modular(const M& m, const DiscreteField& xi) {
  detail::require_field_dim(m, xi);
  const auto& q = *xi.points;
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) s += q.weight[k] * m.value(q.x[k], xi.values[k]);
  return s;
}

/// Modular of xi / lambda without materializing the scaled field.
template <Integrand M>
double modular_scaled(const M& m, const DiscreteField& xi, double lambda) {
  const auto& q = *xi.points;
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) s += q.weight[k] * m.value(q.x[k], xi.values[k] / lambda);
  return s;
}

struct ModularReport {
  double modular = 0.0;
  double norm = 0.0;
  /// Modular of xi / norm; within [1 - tol, 1] up to rounding when norm > 0.
  double modular_at_norm = 0.0;
  int iterations = 0;
};

namespace detail {

inline double field_sup(const DiscreteField& f) {
  double s = 0.0;
  for (const Vec& v : f.values) s = std::max(s, norm(v));
  return s;
}

inline double field_mean_abs(const DiscreteField& f) {
  const auto& q = *f.points;
  double s = 0.0;
  double w = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    s += q.weight[k] * norm(f.values[k]);
    w += q.weight[k];
  }
  return s / w;
}

}  // namespace detail

/// inf { lambda > 0 : modular(xi / lambda) <= 1 } by bisection; returns the
/// upper end of the final bracket so that modular(xi / norm) <= 1 always.
template <Integrand M>
ModularReport luxemburg_norm(const M& m, const DiscreteField& xi, double rel_tol = 1e-12) {
  detail::require_field_dim(m, xi);
  ModularReport r;
  r.modular = modular(m, xi);
  const double sup = detail::field_sup(xi);
  if (sup == 0.0) return r;
  auto rho = [&](double lambda) {
    ++r.iterations;
    return modular_scaled(m, xi, lambda);
  };
  double lo = 0.0;
  double hi = 0.0;
  if constexpr (std::is_same_v<M, NFunction>) {
    // rho(xi/lambda) <= |Omega| m2(sup/lambda) and, by Jensen,
    // rho(xi/lambda) >= |Omega| m1(mean/lambda).
    const double vol = xi.points->total_weight();
    hi = sup / m.upper_envelope().inverse(1.0 / vol);
    lo = detail::field_mean_abs(xi) / m.lower_envelope().inverse(1.0 / vol);
  } else {
    lo = hi = sup;
  }
  if (!(hi > 0.0) || !std::isfinite(hi)) hi = sup;
  if (!(lo > 0.0) || !std::isfinite(lo) || lo > hi) lo = hi;
  // Validate the brackets numerically; envelopes can be loose but rounding
  // at the endpoints must not break the invariant rho(lo) > 1 >= rho(hi).
  while (rho(hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (lo > 0.0 && !(rho(lo) > 1.0)) {
    hi = std::min(hi, lo);
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) lo = 0.0;
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (rho(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.norm = hi;
  r.modular_at_norm = modular_scaled(m, xi, hi);
  return r;
}

struct ModularNormComparison {
  double modular = 0.0;
  double norm = 0.0;
  /// true when norm <= 1 (expects modular <= norm), false otherwise.
  bool unit_ball = true;
  PropertyCheck check{"modular/norm comparison"};
};

/// norm <= 1 => modular <= norm; norm > 1 => modular >= norm.
template <Integrand M>
ModularNormComparison check_modular_norm_comparison(const M& m, const DiscreteField& xi, double tol = 1e-9) {
  ModularNormComparison c;
  const ModularReport r = luxemburg_norm(m, xi);
  c.modular = r.modular;
  c.norm = r.norm;
  c.unit_ball = r.norm <= 1.0;
  const double slack = tol * std::max(1.0, r.norm);
  const double margin = c.unit_ball ? r.norm - r.modular : r.modular - r.norm;
  c.check.record(margin + slack, "norm=" + format_double(r.norm) + " modular=" + format_double(r.modular));
  return c;
}

/// modular((xi - zeta) / lambda).
template <Integrand M>
double modular_distance(const M& m, const DiscreteField& xi, const DiscreteField& zeta, double lambda) {
  if (!(lambda > 0.0)) throw InvalidParameter("modular_distance: lambda must be positive");
  DiscreteField::require_compatible(xi, zeta);
  detail::require_field_dim(m, xi);
  const auto& q = *xi.points;
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k)
    s += q.weight[k] * m.value(q.x[k], (xi.values[k] - zeta.values[k]) / lambda);
  return s;
}

/// Largest integral of |xi| over a set of measure delta, the set being a
/// union of quadrature atoms with the last one taken fractionally (which is
/// the extremal set of the greedy-by-density selection).
inline double small_set_integral(const DiscreteField& xi, double delta) {
  const auto& q = *xi.points;
  std::vector<std::size_t> order(q.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> dens(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) dens[k] = norm(xi.values[k]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dens[a] > dens[b]; });
  double measure = 0.0;
  double total = 0.0;
  for (std::size_t k : order) {
    if (measure >= delta || dens[k] == 0.0) break;
    const double take = std::min(q.weight[k], delta - measure);
    total += take * dens[k];
    measure += take;
  }
  return total;
}

struct UniformIntegrabilityReport {
  std::vector<double> levels;
  /// sup over the family of the small-set integral at each level.
  std::vector<double> sup_integral;
  double sup_modular = 0.0;
  /// sup_integral is nondecreasing in delta (equivalently shrinks with delta).
  PropertyCheck monotone{"small-set integral shrinks with delta"};
};

template <Integrand M>
UniformIntegrabilityReport uniform_integrability_probe(const M& m, const std::vector<DiscreteField>& fields,
                                                       std::vector<double> levels) {
  if (fields.empty()) throw PreconditionError("uniform_integrability_probe: empty family");
  UniformIntegrabilityReport r;
  r.levels = std::move(levels);
  for (const auto& f : fields) r.sup_modular = std::max(r.sup_modular, modular(m, f));
  for (double delta : r.levels) {
    double s = 0.0;
    for (const auto& f : fields) s = std::max(s, small_set_integral(f, delta));
    r.sup_integral.push_back(s);
  }
  for (std::size_t i = 0; i < r.levels.size(); ++i)
    for (std::size_t j = 0; j < r.levels.size(); ++j)
      if (r.levels[i] < r.levels[j])
        r.monotone.record(r.sup_integral[j] - r.sup_integral[i],
                          "delta=" + format_short(r.levels[i]) + " vs " + format_short(r.levels[j]));
  return r;
}

/// T_k(u) = max(-k, min(k, u)) pointwise.
inline DiscreteField truncate(const DiscreteField& u, double k) {
  if (!(k > 0.0)) throw InvalidParameter("truncate: k must be positive");
  if (u.components != 1) throw DimensionMismatch("truncate: scalar field expected");
  DiscreteField t = u;
  for (Vec& v : t.values) v[0] = std::clamp(v[0], -k, k);
  return t;
}

/// grad T_k(u): grad u where |u| <= k, zero elsewhere.
inline DiscreteField truncate_gradient(const DiscreteField& u, const DiscreteField& grad, double k) {
  if (!(k > 0.0)) throw InvalidParameter("truncate: k must be positive");
  if (u.size() != grad.size()) throw DimensionMismatch("truncate_gradient: field sizes differ");
  DiscreteField g = grad;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u.values[i][0]) > k) g.values[i] = Vec::zero(g.components);
  return g;
}

}  // namespace musielak
