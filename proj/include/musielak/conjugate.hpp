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
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "musielak/errors.hpp"
#include "musielak/nfunction.hpp"
#include "musielak/report.hpp"
#include "musielak/sampling.hpp"
#include "musielak/scalar_search.hpp"
#include "musielak/vec.hpp"

namespace musielak {

template <class T>
concept Integrand = requires(const T& m, const Vec& x, const Vec& xi) {
  { m.dim() } -> std::convertible_to<int>;
  { m.value(x, xi) } -> std::convertible_to<double>;
};

/// Integrands that expose a radial or separable profile.
template <class T>
concept StructuredIntegrand = Integrand<T> && requires(const T& m, const Vec& x, double t, int i) {
  { m.structure() } -> std::same_as<Structure>;
  { m.radial_value(x, t) } -> std::convertible_to<double>;
  { m.axis_value(x, i, t) } -> std::convertible_to<double>;
};

template <class T>
concept ClosedFormIntegrand = Integrand<T> && requires(const T& m, const Vec& x, const Vec& eta) {
  { m.has_closed_form_conjugate() } -> std::convertible_to<bool>;
  { m.closed_form_conjugate(x, eta) } -> std::convertible_to<double>;
};

struct ConjugateSettings {
  double initial_radius = 1.0;
  int radial_grid = 24;
  int max_doublings = 64;
  /// Documented accuracy of the returned value relative to the supremum.
  double refinement_tol = 1e-8;
  /// Coordinate ascent stops once a sweep gains less than this (relative).
  double stall_tol = 1e-15;
  int max_sweeps = 200;
  bool use_closed_form = true;
  bool use_structure = true;
};

struct ConjugateResult {
  double value = 0.0;
  Vec maximizer;
  std::int64_t evaluations = 0;
  bool closed_form = false;
};

namespace detail {

/// Maximizes a concave g on the real line given g(0); the search runs in
/// units of `width`, which is doubled until the maximum is bracketed.
template <class G>
ScalarMax line_maximize(G&& g, double g0, double width, int max_doublings, std::int64_t& evals) {
  ScalarMax best{0.0, g0, 0};
  auto eval = [&](double t) {
    const double v = g(t * width);
    ++evals;
    if (v > best.value) {
      best.value = v;
      best.arg = t * width;
    }
    return v;
  };
  double lo = -1.0;
  double hi = 1.0;
  const double gp = eval(1.0);
  const double gm = eval(-1.0);
  if (gp > g0 || gm > g0) {
    const double sign = gp > g0 ? 1.0 : -1.0;
    double inner = 0.0;
    double outer = 1.0;
    double g_outer = std::max(gp, gm);
    for (int k = 0;; ++k) {
      if (k >= max_doublings) throw SearchRadiusExhausted("line search: maximizer not bracketed");
      const double next = 2.0 * outer;
      const double gn = eval(sign * next);
      if (!(gn > g_outer)) {
        lo = inner;
        hi = next;
        break;
      }
      inner = outer;
      outer = next;
      g_outer = gn;
    }
    if (sign < 0.0) {
      const double t = lo;
      lo = -hi;
      hi = -t;
    }
  }
  constexpr int kBits = std::numeric_limits<double>::digits / 2;
  std::uintmax_t iters = 200;
  boost::math::tools::brent_find_minima([&](double t) { return -eval(t); }, lo, hi, kBits, iters);
  return best;
}

}  // namespace detail

/// Numerical Legendre-Fenchel transform M*(x, eta) = sup_xi [xi.eta - M(x, xi)].
/// The returned value is always attained by a sampled xi, so it never exceeds
/// the supremum.
template <Integrand Source>
class ConjugateEvaluator {
 public:
  explicit ConjugateEvaluator(Source source, ConjugateSettings settings = {})
      : source_(std::move(source)), settings_(settings) {}

  [[nodiscard]] const Source& source() const { return source_; }
  [[nodiscard]] const ConjugateSettings& settings() const { return settings_; }
  [[nodiscard]] int dim() const { return source_.dim(); }

  [[nodiscard]] double operator()(const Vec& x, const Vec& eta) const { return evaluate(x, eta).value; }

  [[nodiscard]] ConjugateResult evaluate(const Vec& x, const Vec& eta) const {
    if (eta.dim() != dim()) throw DimensionMismatch("conjugate: eta has dimension " + std::to_string(eta.dim()));
    ConjugateResult r;
    r.maximizer = Vec::zero(dim());
    if (norm_inf(eta) == 0.0) return r;
    if constexpr (ClosedFormIntegrand<Source>) {
      if (settings_.use_closed_form && source_.has_closed_form_conjugate()) {
        r.value = source_.closed_form_conjugate(x, eta);
        r.closed_form = true;
        return r;
      }
    }
    if constexpr (StructuredIntegrand<Source>) {
      if (settings_.use_structure && source_.structure() == Structure::radial) return radial(x, eta);
      if (settings_.use_structure && source_.structure() == Structure::separable) return separable(x, eta);
    }
    return general(x, eta);
  }

  /// sup_t [t s - m(x, t)] for the radial profile.
  [[nodiscard]] double radial_conjugate(const Vec& x, double s) const {
    if constexpr (StructuredIntegrand<Source>) {
      if constexpr (ClosedFormIntegrand<Source>) {
        if (settings_.use_closed_form && source_.has_closed_form_conjugate())
          return source_.closed_form_conjugate(x, Vec::unit(dim(), 0) * s);
      }
      std::int64_t evals = 0;
      return half_line(x, s, [&](double t) { return source_.radial_value(x, t); }, evals).value;
    } else {
      return (*this)(x, Vec::unit(dim(), 0) * s);
    }
  }

  /// sup_t [t s - m_i(x, t)] for the separable profile i.
  [[nodiscard]] double axis_conjugate(const Vec& x, int i, double s) const {
    if constexpr (StructuredIntegrand<Source>) {
      if constexpr (ClosedFormIntegrand<Source>) {
        if (settings_.use_closed_form && source_.has_closed_form_conjugate())
          return source_.closed_form_conjugate(x, Vec::unit(dim(), i) * s);
      }
      std::int64_t evals = 0;
      return half_line(x, s, [&](double t) { return source_.axis_value(x, i, t); }, evals).value;
    } else {
      return (*this)(x, Vec::unit(dim(), i) * s);
    }
  }

  [[nodiscard]] Structure structure() const {
    if constexpr (StructuredIntegrand<Source>) return source_.structure();
    return Structure::general;
  }

 private:
  template <class Profile1D>
  ScalarMax half_line(const Vec&, double s, Profile1D&& m, std::int64_t& evals) const {
    if (s <= 0.0) return {0.0, 0.0, 0};
    HalfLineSearch hs{settings_.initial_radius, settings_.radial_grid, settings_.max_doublings};
    ScalarMax best = maximize_concave_half_line([&](double t) { return t * s - m(t); }, 0.0, hs);
    evals += best.evaluations;
    return best;
  }

  ConjugateResult radial(const Vec& x, const Vec& eta) const {
    ConjugateResult r;
    const double s = norm(eta);
    const ScalarMax best = half_line(x, s, [&](double t) { return source_.radial_value(x, t); }, r.evaluations);
    r.value = best.value;
    r.maximizer = eta * (best.arg / s);
    return r;
  }

  ConjugateResult separable(const Vec& x, const Vec& eta) const {
    ConjugateResult r;
    r.maximizer = Vec::zero(dim());
    for (int i = 0; i < dim(); ++i) {
      const double s = std::abs(eta[i]);
      const ScalarMax best = half_line(x, s, [&](double t) { return source_.axis_value(x, i, t); }, r.evaluations);
      r.value += best.value;
      r.maximizer[i] = std::copysign(best.arg, eta[i]);
    }
    return r;
  }

  /// Seed along eta on a geometric radial grid, then coordinate-wise ascent
  /// with a pattern step after every sweep.
  ConjugateResult general(const Vec& x, const Vec& eta) const {
    ConjugateResult r;
    const int d = dim();
    auto f = [&](const Vec& xi) {
      ++r.evaluations;
      return dot(xi, eta) - source_.value(x, xi);
    };
    const double s = norm(eta);
    const Vec dir = eta / s;
    HalfLineSearch hs{settings_.initial_radius, settings_.radial_grid, settings_.max_doublings};
    const ScalarMax seed = maximize_concave_half_line([&](double t) { return f(dir * t); }, 0.0, hs);
    Vec xi = dir * seed.arg;
    double val = seed.value;
    const double floor_width = std::ldexp(settings_.initial_radius, -settings_.radial_grid);
    std::array<double, kMaxDim + 1> width{};
    width.fill(std::max(0.25 * seed.arg, floor_width));
    for (int sweep = 0; sweep < settings_.max_sweeps; ++sweep) {
      const double before = val;
      const Vec start = xi;
      for (int i = 0; i <= d; ++i) {
        Vec step = i < d ? Vec::unit(d, i) : xi - start;
        if (i == d) {
          const double len = norm(step);
          if (len == 0.0) break;
          step /= len;
        }
        const ScalarMax m = detail::line_maximize([&](double t) { return f(xi + step * t); }, val,
                                                  width[static_cast<std::size_t>(i)], settings_.max_doublings,
                                                  r.evaluations);
        if (m.value > val) {
          xi += step * m.arg;
          val = m.value;
        }
        width[static_cast<std::size_t>(i)] = std::max(2.0 * std::abs(m.arg), floor_width * 1e-6);
      }
      if (val - before <= settings_.stall_tol * std::max(std::abs(val), 1e-300)) break;
    }
    r.value = val;
    r.maximizer = xi;
    return r;
  }

  Source source_;
  ConjugateSettings settings_;
};

/// M* viewed as an integrand so that it can be conjugated again (M**).
/// Radial and separable structure carry over to the conjugate.
template <Integrand Source>
class ConjugateView {
 public:
  explicit ConjugateView(ConjugateEvaluator<Source> evaluator) : evaluator_(std::move(evaluator)) {}

  [[nodiscard]] int dim() const { return evaluator_.dim(); }
  [[nodiscard]] double value(const Vec& x, const Vec& eta) const { return evaluator_(x, eta); }
  [[nodiscard]] Structure structure() const { return evaluator_.structure(); }
  [[nodiscard]] double radial_value(const Vec& x, double s) const { return evaluator_.radial_conjugate(x, s); }
  [[nodiscard]] double axis_value(const Vec& x, int i, double s) const { return evaluator_.axis_conjugate(x, i, s); }

 private:
  ConjugateEvaluator<Source> evaluator_;
};

/// Conjugate as a plain integrand with the given settings.
template <Integrand Source>
ConjugateView<Source> conjugate_of(Source m, ConjugateSettings settings = {}) {
  return ConjugateView<Source>(ConjugateEvaluator<Source>(std::move(m), settings));
}

/// M**(x, xi): the search applied twice.
template <Integrand Source>
double biconjugate(const Source& m, const Vec& x, const Vec& xi, ConjugateSettings settings = {}) {
  const ConjugateEvaluator<ConjugateView<Source>> outer(conjugate_of(m, settings), settings);
  return outer(x, xi);
}

inline double eval_conjugate(const ConjugateEvaluator<NFunction>& c, const Vec& x, const Vec& eta) {
  if (!c.source().domain().contains(x)) throw DomainViolation("eval_conjugate: x = " + to_string(x) + " lies outside the domain");
  return c(x, eta);
}

struct DualitySample {
  Vec x;
  Vec xi;
  Vec eta;
};

struct FenchelYoungRow {
  DualitySample sample;
  double pairing = 0.0;  // xi . eta
  double m = 0.0;
  double m_star = 0.0;
  /// M + M* - xi.eta
  double margin = 0.0;
};

struct FenchelYoungReport {
  std::vector<FenchelYoungRow> rows;
  PropertyCheck check{"Fenchel-Young"};
};

/// xi.eta <= M(x, xi) + M*(x, eta). A row passes when its margin is at least
/// -tol max(1, M + M*), i.e. the tolerance is relative for large values.
inline FenchelYoungReport check_fenchel_young(const ConjugateEvaluator<NFunction>& c,
                                              const std::vector<DualitySample>& samples, double tol = 1e-10) {
  FenchelYoungReport rep;
  for (const auto& s : samples) {
    FenchelYoungRow row{s, dot(s.xi, s.eta), c.source().value(s.x, s.xi), c(s.x, s.eta), 0.0};
    const double rhs = row.m + row.m_star;
    row.margin = rhs - row.pairing;
    rep.check.record(row.margin / std::max(1.0, rhs) + tol, "x=" + to_string(s.x) + " xi=" + to_string(s.xi) + " eta=" + to_string(s.eta));
    rep.rows.push_back(row);
  }
  return rep;
}

struct BiconjugationRow {
  Vec x;
  Vec xi;
  double m = 0.0;
  double m_star_star = 0.0;
  double relative_deviation = 0.0;
};

struct BiconjugationReport {
  std::vector<BiconjugationRow> rows;
  PropertyCheck check{"biconjugation"};
  double worst_deviation = 0.0;
};

/// |M** - M| / max(M, 1e-12) <= tol on every sample.
inline BiconjugationReport check_biconjugation(const NFunction& m, const std::vector<std::pair<Vec, Vec>>& samples,
                                               double tol = 1e-5, ConjugateSettings settings = {}) {
  BiconjugationReport rep;
  const ConjugateEvaluator<ConjugateView<NFunction>> outer(conjugate_of(m, settings), settings);
  for (const auto& [x, xi] : samples) {
    BiconjugationRow row{x, xi, m.value(x, xi), outer(x, xi), 0.0};
    row.relative_deviation = std::abs(row.m_star_star - row.m) / std::max(row.m, 1e-12);
    rep.worst_deviation = std::max(rep.worst_deviation, row.relative_deviation);
    rep.check.record(tol - row.relative_deviation, "x=" + to_string(x) + " xi=" + to_string(xi));
    rep.rows.push_back(row);
  }
  return rep;
}

/// Seeded samples (x, xi, eta) with |xi|, |eta| log-uniform in [lo, hi].
inline std::vector<DualitySample> duality_samples(const NFunction& m, Rng& rng, int count, double lo = 0.1,
                                                  double hi = 10.0) {
  std::vector<DualitySample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    DualitySample s;
    s.x = random_point(rng, m.domain());
    s.xi = random_vector(rng, m.dim(), lo, hi);
    s.eta = random_vector(rng, m.dim(), lo, hi);
    out.push_back(s);
  }
  return out;
}

}  // namespace musielak
