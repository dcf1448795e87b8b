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
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "musielak/conjugate.hpp"
#include "musielak/errors.hpp"
#include "musielak/fem.hpp"
#include "musielak/field.hpp"
#include "musielak/modular.hpp"
#include "musielak/nfunction.hpp"
#include "musielak/report.hpp"
#include "musielak/sampling.hpp"

namespace musielak {

/// A(x, xi) together with the N-function governing it and the constants of
/// the coercivity/growth assumption
///   A.xi >= M(x, c1 xi) - h1,   c2 M*(x, c3 A) <= M(x, c4 xi) + h2.
/// h1 and h2 are constants here.
struct VectorFieldA {
  NFunction m;
  std::function<Vec(const Vec&, const Vec&)> fn;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double c4 = 1.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double eps = 0.0;
  std::string description;

  Vec operator()(const Vec& x, const Vec& xi) const { return fn(x, xi); }
};

enum class PhiKind { zero, sin, cos, arctan, tanh };

/// Phi(s)_i = coefficient_i * f_i(s) with bounded smooth f_i.
struct ConvectionPhi {
  std::vector<PhiKind> kinds;
  std::vector<double> coefficients;

  static ConvectionPhi zero(int d) { return {std::vector<PhiKind>(static_cast<std::size_t>(d), PhiKind::zero), std::vector<double>(static_cast<std::size_t>(d), 0.0)}; }

  [[nodiscard]] int dim() const { return static_cast<int>(kinds.size()); }

  [[nodiscard]] Vec operator()(double s) const {
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      v[i] = coefficients[k] * shape(kinds[k], s);
    }
    return v;
  }

  /// sup_s |Phi(s)|.
  [[nodiscard]] double bound() const {
    double s = 0.0;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      const double b = kinds[i] == PhiKind::zero ? 0.0 : kinds[i] == PhiKind::arctan ? std::numbers::pi / 2 : 1.0;
      s += std::pow(coefficients[i] * b, 2);
    }
    return std::sqrt(s);
  }

  /// Lipschitz constant (every shape has slope at most one).
  [[nodiscard]] double lipschitz() const {
    double s = 0.0;
    for (std::size_t i = 0; i < kinds.size(); ++i)
      if (kinds[i] != PhiKind::zero) s += coefficients[i] * coefficients[i];
    return std::sqrt(s);
  }

  [[nodiscard]] bool is_zero() const {
    for (std::size_t i = 0; i < kinds.size(); ++i)
      if (kinds[i] != PhiKind::zero && coefficients[i] != 0.0) return false;
    return true;
  }

  static double shape(PhiKind k, double s) {
    switch (k) {
      case PhiKind::zero: return 0.0;
      case PhiKind::sin: return std::sin(s);
      case PhiKind::cos: return std::cos(s);
      case PhiKind::arctan: return std::atan(s);
      case PhiKind::tanh: return std::tanh(s);
    }
    return 0.0;
  }
};

enum class BKind { zero, linear, cubic, arctan, piecewise };

/// b(x, s) = coefficient * (w0 + w . x) * g(s). A negative coefficient is
/// accepted so that broken data can be validated and rejected.
struct LowerOrderB {
  BKind kind = BKind::zero;
  double coefficient = 0.0;
  double weight_offset = 1.0;
  Vec weight_gradient;

  [[nodiscard]] double weight(const Vec& x) const {
    return weight_gradient.dim() == 0 ? weight_offset : weight_offset + dot(weight_gradient, x);
  }

  [[nodiscard]] double operator()(const Vec& x, double s) const {
    if (kind == BKind::zero || coefficient == 0.0) return 0.0;
    return coefficient * weight(x) * shape(kind, s);
  }

  [[nodiscard]] bool is_zero() const { return kind == BKind::zero || coefficient == 0.0; }

  /// Strictly increasing in s for every x of the box.
  [[nodiscard]] bool strictly_increasing(const Box& box) const {
    if (is_zero() || coefficient < 0.0) return false;
    bool ok = true;
    box.for_each_corner([&](const Vec& c) { ok = ok && weight(c) > 0.0; });
    return ok;
  }

  /// Identity near zero, slope one half beyond |s| = 1.
  static double shape(BKind k, double s) {
    switch (k) {
      case BKind::zero: return 0.0;
      case BKind::linear: return s;
      case BKind::cubic: return s * s * s;
      case BKind::arctan: return std::atan(s);
      case BKind::piecewise: return std::abs(s) <= 1.0 ? s : std::copysign(1.0 + 0.5 * (std::abs(s) - 1.0), s);
    }
    return 0.0;
  }
};

/// One factor of a source term along one axis.
struct SourceFactor {
  enum Kind { one, power, sin, cos } kind = one;
  /// Exponent for power, multiple of pi for sin/cos.
  double param = 1.0;

  [[nodiscard]] double operator()(double t) const {
    switch (kind) {
      case one: return 1.0;
      case power: return std::pow(t, param);
      case sin: return std::sin(param * std::numbers::pi * t);
      case cos: return std::cos(param * std::numbers::pi * t);
    }
    return 0.0;
  }
};

/// coefficient * prod_j factor_j(x_j), contributing to F_component.
struct SourceTerm {
  int component = 0;
  double coefficient = 1.0;
  std::vector<SourceFactor> factors;
};

/// F(x). Either a sum of separable terms or, for manufactured problems,
/// F = A(x, grad u*) + Phi(u*) for a known u*.
struct SourceF {
  int dim = 1;
  std::vector<SourceTerm> terms;
  std::function<Vec(const Vec&)> manufactured;
  /// Exact solution and its gradient when manufactured.
  std::function<double(const Vec&)> exact;
  std::function<Vec(const Vec&)> exact_gradient;
  std::string description = "0";

  [[nodiscard]] Vec operator()(const Vec& x) const {
    if (manufactured) return manufactured(x);
    Vec f(dim);
    for (const auto& t : terms) {
      double v = t.coefficient;
      for (std::size_t j = 0; j < t.factors.size(); ++j) v *= t.factors[j](x[static_cast<int>(j)]);
      f[t.component] += v;
    }
    return f;
  }

  [[nodiscard]] bool is_zero() const { return !manufactured && terms.empty(); }

  SourceF scaled(double s) const {
    SourceF g = *this;
    for (auto& t : g.terms) t.coefficient *= s;
    if (manufactured) {
      auto f = manufactured;
      g.manufactured = [f, s](const Vec& x) { return f(x) * s; };
      g.exact = nullptr;
      g.exact_gradient = nullptr;
    }
    g.description = format_short(s) + " * (" + description + ")";
    return g;
  }
};

/// The data (A, Phi, b, F) of the boundary value problem on one domain.
struct StructuredOperator {
  VectorFieldA a;
  ConvectionPhi phi;
  LowerOrderB b;
  SourceF f;

  [[nodiscard]] int dim() const { return a.m.dim(); }
  [[nodiscard]] const Box& domain() const { return a.m.domain(); }
};

/// u*(x) = amplitude * prod sin(pi (x_i - a_i)/(b_i - a_i)) ("sine") or
/// amplitude * prod (x_i - a_i)(b_i - x_i) ("bubble"), with its gradient.
inline std::pair<std::function<double(const Vec&)>, std::function<Vec(const Vec&)>> exact_solution(
    const std::string& kind, const Box& box, double amplitude) {
  if (kind == "sine") {
    auto f = [box](int i, double t) {
      const double l = box.extent(i);
      const double z = std::numbers::pi * (t - box.lower[i]) / l;
      return std::pair{std::sin(z), std::numbers::pi / l * std::cos(z)};
    };
    return {[f, box, amplitude](const Vec& x) {
              double v = amplitude;
              for (int i = 0; i < box.dim(); ++i) v *= f(i, x[i]).first;
              return v;
            },
            [f, box, amplitude](const Vec& x) {
              Vec g(box.dim());
              for (int i = 0; i < box.dim(); ++i) {
                double v = amplitude;
                for (int j = 0; j < box.dim(); ++j) v *= j == i ? f(j, x[j]).second : f(j, x[j]).first;
                g[i] = v;
              }
              return g;
            }};
  }
  if (kind == "bubble") {
    auto f = [box](int i, double t) {
      return std::pair{(t - box.lower[i]) * (box.upper[i] - t), box.upper[i] + box.lower[i] - 2.0 * t};
    };
    return {[f, box, amplitude](const Vec& x) {
              double v = amplitude;
              for (int i = 0; i < box.dim(); ++i) v *= f(i, x[i]).first;
              return v;
            },
            [f, box, amplitude](const Vec& x) {
              Vec g(box.dim());
              for (int i = 0; i < box.dim(); ++i) {
                double v = amplitude;
                for (int j = 0; j < box.dim(); ++j) v *= j == i ? f(j, x[j]).second : f(j, x[j]).first;
                g[i] = v;
              }
              return g;
            }};
  }
  throw InvalidParameter("exact solution must be 'sine' or 'bubble', got '" + kind + "'");
}

/// F = A(x, grad u*) + Phi(u*), so that u* solves the problem with b = 0.
inline SourceF manufactured_source(const VectorFieldA& a, const ConvectionPhi& phi, const std::string& kind,
                                   double amplitude = 1.0) {
  auto [u, grad] = exact_solution(kind, a.m.domain(), amplitude);
  SourceF f;
  f.dim = a.m.dim();
  f.exact = u;
  f.exact_gradient = grad;
  f.manufactured = [a, phi, u, grad](const Vec& x) { return a(x, grad(x)) + phi(u(x)); };
  f.description = "manufactured(" + kind + ", amplitude " + format_short(amplitude) + ")";
  return f;
}

struct StructureReport {
  std::vector<PropertyCheck> checks;
  [[nodiscard]] bool passed() const { return all_passed(checks); }
};

namespace detail {

struct A2Sample {
  Vec x;
  Vec xi;
  double pairing;                  // A.xi
  std::array<double, 4> m_star_c;  // M*(x, c A)
};

inline constexpr std::array<double, 4> kShrinkGrid{1.0, 0.5, 0.25, 0.125};
inline constexpr std::array<double, 4> kGrowGrid{1.0, 2.0, 4.0, 8.0};

inline std::vector<A2Sample> a2_samples(const VectorFieldA& a, Rng& rng, int budget) {
  const ConjugateEvaluator<NFunction> conj(a.m);
  std::vector<A2Sample> out;
  for (int k = 0; k < budget; ++k) {
    A2Sample s;
    s.x = random_point(rng, a.m.domain());
    s.xi = random_vector(rng, a.m.dim(), 1e-2, 1e2);
    const Vec ax = a(s.x, s.xi);
    s.pairing = dot(ax, s.xi);
    for (std::size_t i = 0; i < 4; ++i) s.m_star_c[i] = conj(s.x, ax * kShrinkGrid[i]);
    out.push_back(s);
  }
  return out;
}

/// Deficits of coercivity (c1, h1 = 0) and growth (c2, c3, c4, h2 = 0);
/// values within a relative 1e-10 of zero count as rounding.
inline double coercivity_deficit(const VectorFieldA& a, const A2Sample& s, double c1) {
  const double m = a.m.value(s.x, s.xi * c1);
  const double d = m - s.pairing;
  return d <= 1e-10 * std::max(std::abs(m), std::abs(s.pairing)) ? 0.0 : d;
}

inline double growth_deficit(const VectorFieldA& a, const A2Sample& s, std::size_t i2, std::size_t i3, std::size_t i4) {
  const double lhs = kShrinkGrid[i2] * s.m_star_c[i3];
  const double rhs = a.m.value(s.x, s.xi * kGrowGrid[i4]);
  const double d = lhs - rhs;
  return d <= 1e-10 * std::max(std::abs(lhs), std::abs(rhs)) ? 0.0 : d;
}

}  // namespace detail

struct A2Fit {
  double c1, c2, c3, c4, h1, h2;
};

/// First tuple of the grid (lexicographic in c1, c2, c3, c4) whose sampled
/// deficits vanish; failing that, the first tuple whose deficits stay below
/// h_cap, with h1, h2 set to the largest deficit.
inline std::optional<A2Fit> fit_a2_constants(const VectorFieldA& a, Rng& rng, int budget, double h_cap = 1e-6) {
  const auto samples = detail::a2_samples(a, rng, budget);
  for (double cap : {0.0, h_cap}) {
    for (std::size_t i1 = 0; i1 < 4; ++i1) {
      double h1 = 0.0;
      for (const auto& s : samples) h1 = std::max(h1, detail::coercivity_deficit(a, s, detail::kShrinkGrid[i1]));
      if (h1 > cap) continue;
      for (std::size_t i2 = 0; i2 < 4; ++i2)
        for (std::size_t i3 = 0; i3 < 4; ++i3)
          for (std::size_t i4 = 0; i4 < 4; ++i4) {
            double h2 = 0.0;
            for (const auto& s : samples) h2 = std::max(h2, detail::growth_deficit(a, s, i2, i3, i4));
            if (h2 > cap) continue;
            return A2Fit{detail::kShrinkGrid[i1], detail::kShrinkGrid[i2], detail::kShrinkGrid[i3],
                         detail::kGrowGrid[i4], h1, h2};
          }
    }
  }
  return std::nullopt;
}

/// A = grad_xi M_eps with M_eps the N-function with |.| smoothed to
/// sqrt(|.|^2 + eps^2) - eps; the constants are auto-fitted by sampling.
inline VectorFieldA canonical_operator(const NFunction& m, double eps, Rng& rng, int budget = 100) {
  if (!(eps >= 0.0)) throw InvalidParameter("canonical_operator: eps must be nonnegative");
  if (!m.has_gradient()) throw ConstructionFailure("canonical_operator: N-function has no gradient");
  VectorFieldA a;
  a.m = m;
  a.eps = eps;
  a.fn = [m, eps](const Vec& x, const Vec& xi) { return m.gradient(x, xi, eps); };
  a.description = "grad M_eps, M = " + m.description() + ", eps = " + format_short(eps);
  const auto fit = fit_a2_constants(a, rng, budget);
  if (!fit) throw ConstructionFailure("canonical_operator: no constants on the grid certify coercivity and growth");
  a.c1 = fit->c1;
  a.c2 = fit->c2;
  a.c3 = fit->c3;
  a.c4 = fit->c4;
  a.h1 = fit->h1;
  a.h2 = fit->h2;
  return a;
}

/// |xi|^{p-2} xi from M = |xi|^p / p; eps defaults to 1e-8 for p < 2.
inline VectorFieldA p_laplacian(const Box& box, double p, Rng& rng, std::optional<double> eps = std::nullopt,
                                int budget = 100) {
  const double e = eps.value_or(p < 2.0 ? 1e-8 : 0.0);
  VectorFieldA a = canonical_operator(constant_power(box, p, 1.0, true), e, rng, budget);
  a.description = "p-Laplacian, p = " + format_short(p) + ", eps = " + format_short(e);
  return a;
}

/// Central finite differences of M_eps against A at random (x, xi) with
/// |xi| in [lo, hi]; margin tol - |A - A_fd| / |A|.
inline PropertyCheck check_gradient_consistency(const VectorFieldA& a, Rng& rng, int samples = 100,
                                                double tol = 1e-6, double lo = 0.1, double hi = 10.0) {
  PropertyCheck c{"gradient consistency"};
  const int d = a.m.dim();
  for (int k = 0; k < samples; ++k) {
    const Vec x = random_point(rng, a.m.domain());
    const Vec xi = random_vector(rng, d, lo, hi);
    const Vec g = a(x, xi);
    Vec fd(d);
    for (int i = 0; i < d; ++i) {
      const double h = 1e-5 * (1.0 + std::abs(xi[i]));
      const Vec e = Vec::unit(d, i) * h;
      fd[i] = (a.m.smoothed_value(x, xi + e, a.eps) - a.m.smoothed_value(x, xi - e, a.eps)) / (2.0 * h);
    }
    const double rel = norm(g - fd) / std::max(norm(g), 1e-300);
    c.record(tol - rel, "x=" + to_string(x) + " xi=" + to_string(xi));
  }
  return c;
}

/// Sampled checks of every structural assumption on the data. The
/// quadrature carries the b-integrability and F-membership integrals.
inline StructureReport validate_structure(const StructuredOperator& op, const QuadraturePoints& quad, Rng& rng,
                                          int budget = 100) {
  const VectorFieldA& a = op.a;
  const NFunction& m = a.m;
  const int d = m.dim();
  if (op.phi.dim() != d || op.f.dim != d || quad.dim() != d)
    throw DimensionMismatch("validate_structure: data dimensions disagree");
  StructureReport rep;
  const ConjugateEvaluator<NFunction> conj(m);

  PropertyCheck zero{"A(x,0)=0"};
  PropertyCheck coercive{"A coercivity"};
  PropertyCheck growth{"A growth"};
  PropertyCheck monotone{"A monotonicity"};
  for (int k = 0; k < budget; ++k) {
    const Vec x = random_point(rng, m.domain());
    const Vec xi = random_vector(rng, d, 1e-2, 1e2);
    const Vec eta = random_vector(rng, d, 1e-2, 1e2);
    const std::string where = "x=" + to_string(x) + " xi=" + to_string(xi);
    zero.record(-norm(a(x, Vec::zero(d))), "x=" + to_string(x));
    const Vec ax = a(x, xi);
    const double pairing = dot(ax, xi);
    const double mc1 = m.value(x, xi * a.c1);
    coercive.record((pairing - mc1 + a.h1) + 1e-10 * std::max(std::abs(pairing), mc1), where);
    const double lhs = a.c2 * conj(x, ax * a.c3);
    const double rhs = m.value(x, xi * a.c4) + a.h2;
    growth.record((rhs - lhs) + 1e-10 * std::max(lhs, rhs), where);
    const Vec ae = a(x, eta);
    const double mono = dot(ax - ae, xi - eta);
    const double slack = 1e-12 * (norm(ax) + norm(ae)) * (norm(xi) + norm(eta));
    monotone.record(mono + slack, where + " eta=" + to_string(eta));
  }

  PropertyCheck phi_bound{"|Phi| <= bound"};
  PropertyCheck phi_lip{"Phi Lipschitz"};
  const double bound = op.phi.bound();
  const double lip = op.phi.lipschitz();
  for (int k = 0; k < budget; ++k) {
    const double s = uniform(rng, -50.0, 50.0);
    const double t = s + uniform(rng, -2.0, 2.0);
    phi_bound.record(bound * (1.0 + 1e-14) - norm(op.phi(s)), "s=" + format_short(s));
    phi_lip.record(lip * std::abs(s - t) * (1.0 + 1e-12) + 1e-15 - norm(op.phi(s) - op.phi(t)),
                   "s=" + format_short(s) + " t=" + format_short(t));
  }

  PropertyCheck b_mono{"b nondecreasing"};
  PropertyCheck b_sign{"b sign condition"};
  // Deterministic magnitudes first so that a broken sign is reported at s = 1.
  std::vector<double> ss{1.0, -1.0, 10.0, -10.0, 0.1, -0.1};
  for (int k = 0; k < budget; ++k) ss.push_back(uniform(rng, -20.0, 20.0));
  for (double s : ss) {
    const Vec x = random_point(rng, m.domain());
    const double bs = op.b(x, s);
    b_sign.record(s == 0.0 ? 0.0 : bs * (s > 0 ? 1.0 : -1.0) / std::abs(s), "s=" + format_short(s) + " x=" + to_string(x));
    const double t = s + std::abs(uniform(rng, 0.0, 2.0));
    const double bt = op.b(x, t);
    b_mono.record((bt - bs) + 1e-14 * (std::abs(bt) + std::abs(bs)), "s=" + format_short(s) + " t=" + format_short(t));
  }

  PropertyCheck b_int{"b(.,s) integrable"};
  for (double s : {1.0, -1.0, 10.0, -10.0}) {
    double integral = 0.0;
    for (std::size_t k = 0; k < quad.size(); ++k) integral += quad.weight[k] * std::abs(op.b(quad.x[k], s));
    b_int.record(std::isfinite(integral) ? 0.0 : -1.0, "s=" + format_short(s));
  }

  PropertyCheck f_member{"F in E_M* (modular of lambda F finite)"};
  {
    auto qp = std::shared_ptr<const QuadraturePoints>(&quad, [](const QuadraturePoints*) {});
    const auto field = DiscreteField::from_function(qp, d, [&](const Vec& x) { return op.f(x); });
    const auto mstar = conjugate_of(m);
    for (double lambda : {1.0, 10.0, 100.0}) {
      double v = std::numeric_limits<double>::infinity();
      try {
        v = modular(mstar, field * lambda);
      } catch (const SearchRadiusExhausted&) {
      }
      f_member.record(std::isfinite(v) ? 0.0 : -1.0, "lambda=" + format_short(lambda));
    }
  }
  rep.checks = {zero, coercive, growth, monotone, phi_bound, phi_lip, b_mono, b_sign, b_int, f_member};
  return rep;
}

}  // namespace musielak
