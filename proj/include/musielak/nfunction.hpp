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
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "musielak/errors.hpp"
#include "musielak/format.hpp"
#include "musielak/report.hpp"
#include "musielak/sampling.hpp"
#include "musielak/vec.hpp"
#include "musielak/young_function.hpp"

namespace musielak {

enum class Family {
  constant_power,
  variable_exponent,
  double_phase,
  anisotropic_variable,
  anisotropic_double_phase,
  custom,
};

inline std::string to_string(Family f) {
  switch (f) {
    case Family::constant_power: return "constant-power";
    case Family::variable_exponent: return "variable-exponent";
    case Family::double_phase: return "double-phase";
    case Family::anisotropic_variable: return "anisotropic-variable";
    case Family::anisotropic_double_phase: return "anisotropic-double-phase";
    case Family::custom: return "custom";
  }
  return "unknown";
}

/// How M depends on xi. Radial: M = m(x, |xi|). Separable: M = sum_i m_i(x, |xi_i|).
enum class Structure { radial, separable, general };

/// p(x) = clamp(base + gradient . x, lower, upper).
struct AffineExponent {
  double base = 2.0;
  Vec gradient;  // empty (dim 0) means constant
  double lower = 1.0;
  double upper = std::numeric_limits<double>::infinity();

  static AffineExponent constant(double p) { return {p, Vec{}, p, p}; }

  double operator()(const Vec& x) const {
    double v = base;
    if (gradient.dim() > 0) v += dot(gradient, x);
    return std::clamp(v, lower, upper);
  }

  /// Min and max over the box (affine, so attained at corners).
  [[nodiscard]] std::pair<double, double> range(const Box& box) const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    box.for_each_corner([&](const Vec& c) {
      const double v = (*this)(c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    });
    return {lo, hi};
  }
};

/// a(x) = offset + scale |gradient . (x - anchor)|^alpha, alpha in (0, 1].
/// Hoelder continuous with exponent alpha; vanishes on a hyperplane when offset = 0.
struct HolderWeight {
  double offset = 1.0;
  double scale = 0.0;
  Vec gradient;
  Vec anchor;
  double alpha = 1.0;

  static HolderWeight constant(double c) { return {c, 0.0, Vec{}, Vec{}, 1.0}; }

  /// a(x) = gradient . x on a domain where that is nonnegative.
  static HolderWeight linear(Vec gradient) { return {0.0, 1.0, gradient, Vec::zero(gradient.dim()), 1.0}; }

  double operator()(const Vec& x) const {
    if (scale == 0.0 || gradient.dim() == 0) return offset;
    const double s = dot(gradient, x - anchor);
    return offset + scale * (alpha == 1.0 ? std::abs(s) : std::pow(std::abs(s), alpha));
  }

  [[nodiscard]] bool has_zero_set() const { return offset == 0.0 && scale > 0.0 && gradient.dim() > 0 && norm(gradient) > 0.0; }

  [[nodiscard]] std::pair<double, double> range(const Box& box) const {
    if (scale == 0.0 || gradient.dim() == 0) return {offset, offset};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double smin = lo;
    double smax = -lo;
    box.for_each_corner([&](const Vec& c) {
      const double v = (*this)(c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      const double s = dot(gradient, c - anchor);
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    });
    if (smin <= 0.0 && smax >= 0.0) lo = offset;
    return {lo, hi};
  }
};

/// weight(x) * scale * t^{e(x)}, divided by e(x) when normalized.
struct PowerTerm {
  HolderWeight weight = HolderWeight::constant(1.0);
  AffineExponent exponent = AffineExponent::constant(2.0);
  double scale = 1.0;
  bool normalized = false;

  [[nodiscard]] double coefficient(const Vec& x, double e) const {
    const double k = weight(x) * scale;
    return normalized ? k / e : k;
  }

  [[nodiscard]] double value(const Vec& x, double t) const {
    const double e = exponent(x);
    return coefficient(x, e) * std::pow(t, e);
  }

  [[nodiscard]] double derivative(const Vec& x, double t) const {
    if (t <= 0.0) return 0.0;
    const double e = exponent(x);
    return coefficient(x, e) * e * std::pow(t, e - 1.0);
  }

  /// sup_t [t s - k t^e] = (e - 1) k (s / (k e))^{e/(e-1)} for s >= 0, k > 0.
  [[nodiscard]] double conjugate(const Vec& x, double s) const {
    if (s <= 0.0) return 0.0;
    const double e = exponent(x);
    const double k = coefficient(x, e);
    if (k <= 0.0) return std::numeric_limits<double>::infinity();
    return (e - 1.0) * k * std::pow(s / (k * e), e / (e - 1.0));
  }

  /// Envelope coefficient bounds and exponent range over the box.
  struct Bounds {
    double k_min, k_max, e_min, e_max;
  };
  [[nodiscard]] Bounds bounds(const Box& box) const {
    const auto [wmin, wmax] = weight.range(box);
    const auto [emin, emax] = exponent.range(box);
    double kmin = wmin * scale;
    double kmax = wmax * scale;
    if (normalized) {
      kmin /= emax;
      kmax /= emin;
    }
    return {kmin, kmax, emin, emax};
  }
};

/// Scalar profile t -> sum of power terms, t >= 0.
struct Profile {
  std::vector<PowerTerm> terms;

  [[nodiscard]] double value(const Vec& x, double t) const {
    double s = 0.0;
    for (const auto& term : terms) s += term.value(x, t);
    return s;
  }

  [[nodiscard]] double derivative(const Vec& x, double t) const {
    double s = 0.0;
    for (const auto& term : terms) s += term.derivative(x, t);
    return s;
  }

  [[nodiscard]] bool has_closed_form_conjugate() const { return terms.size() == 1; }

  [[nodiscard]] YoungFunction lower_envelope(const Box& box, double arg_scale = 1.0) const {
    std::vector<YoungFunction> parts;
    for (const auto& term : terms) {
      const auto b = term.bounds(box);
      if (b.k_min > 0.0) parts.push_back(lower_two_regime(b.k_min, b.e_min, b.e_max));
    }
    return sum_young(std::move(parts), 1.0, arg_scale);
  }

  [[nodiscard]] YoungFunction upper_envelope(const Box& box) const {
    std::vector<YoungFunction> parts;
    for (const auto& term : terms) {
      const auto b = term.bounds(box);
      parts.push_back(upper_two_regime(b.k_max, b.e_min, b.e_max));
    }
    return sum_young(std::move(parts));
  }
};

/// Smoothed modulus sqrt(s^2 + eps^2) - eps; equals |s| for eps = 0.
inline double smoothed_modulus(double s2, double eps) {
  if (eps == 0.0) return std::sqrt(s2);
  return s2 / (std::sqrt(s2 + eps * eps) + eps);
}

/// Callables for the custom family. value is mandatory; the rest optional.
struct CustomKernel {
  std::function<double(const Vec&, const Vec&)> value;
  /// M_eps(x, xi); defaults to value when absent.
  std::function<double(const Vec&, const Vec&, double)> smoothed_value;
  /// Gradient of M_eps in xi.
  std::function<Vec(const Vec&, const Vec&, double)> gradient;
  std::function<double(const Vec&, const Vec&)> conjugate;
};

/// Exponent data of one double-phase term, used by the balance pre-screen.
struct PhaseExponents {
  double p;
  double q;
  double alpha;
};

/// Generalized anisotropic N-function M(x, xi) on a box domain.
class NFunction {
 public:
  /// Empty placeholder; obtain usable instances from the catalog factories.
  NFunction() = default;

  [[nodiscard]] Family family() const { return family_; }
  [[nodiscard]] Structure structure() const { return structure_; }
  [[nodiscard]] int dim() const { return domain_.dim(); }
  [[nodiscard]] const Box& domain() const { return domain_; }
  [[nodiscard]] const std::string& description() const { return description_; }

  /// M(x, xi) without argument checks.
  [[nodiscard]] double value(const Vec& x, const Vec& xi) const {
    switch (structure_) {
      case Structure::radial: return profiles_[0].value(x, norm(xi));
      case Structure::separable: {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) s += profiles_[static_cast<std::size_t>(i)].value(x, std::abs(xi[i]));
        return s;
      }
      case Structure::general: return custom_.value(x, xi);
    }
    return 0.0;
  }

  /// Radial profile m(x, t) (structure radial only).
  [[nodiscard]] double radial_value(const Vec& x, double t) const { return profiles_[0].value(x, t); }

  /// Separable profile m_i(x, t) (structure separable only).
  [[nodiscard]] double axis_value(const Vec& x, int i, double t) const {
    return profiles_[static_cast<std::size_t>(i)].value(x, t);
  }

  /// M_eps: each |.| replaced by sqrt(|.|^2 + eps^2) - eps.
  [[nodiscard]] double smoothed_value(const Vec& x, const Vec& xi, double eps) const {
    switch (structure_) {
      case Structure::radial: return profiles_[0].value(x, smoothed_modulus(dot(xi, xi), eps));
      case Structure::separable: {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i)
          s += profiles_[static_cast<std::size_t>(i)].value(x, smoothed_modulus(xi[i] * xi[i], eps));
        return s;
      }
      case Structure::general:
        return custom_.smoothed_value ? custom_.smoothed_value(x, xi, eps) : custom_.value(x, xi);
    }
    return 0.0;
  }

  [[nodiscard]] bool has_gradient() const { return structure_ != Structure::general || static_cast<bool>(custom_.gradient); }

  /// Gradient of M_eps in xi; the zero subgradient is selected at xi = 0.
  [[nodiscard]] Vec gradient(const Vec& x, const Vec& xi, double eps) const {
    Vec g(dim());
    switch (structure_) {
      case Structure::radial: {
        const double s2 = dot(xi, xi);
        const double denom = std::sqrt(s2 + eps * eps);
        if (denom == 0.0) return g;
        const double d = profiles_[0].derivative(x, smoothed_modulus(s2, eps));
        return xi * (d / denom);
      }
      case Structure::separable: {
        for (int i = 0; i < dim(); ++i) {
          const double s2 = xi[i] * xi[i];
          const double denom = std::sqrt(s2 + eps * eps);
          if (denom == 0.0) continue;
          g[i] = profiles_[static_cast<std::size_t>(i)].derivative(x, smoothed_modulus(s2, eps)) * xi[i] / denom;
        }
        return g;
      }
      case Structure::general:
        if (!custom_.gradient) throw InvalidParameter("custom N-function has no gradient");
        return custom_.gradient(x, xi, eps);
    }
    return g;
  }

  [[nodiscard]] bool has_closed_form_conjugate() const {
    switch (structure_) {
      case Structure::radial: return profiles_[0].has_closed_form_conjugate();
      case Structure::separable:
        return std::all_of(profiles_.begin(), profiles_.end(), [](const Profile& p) { return p.has_closed_form_conjugate(); });
      case Structure::general: return static_cast<bool>(custom_.conjugate);
    }
    return false;
  }

  [[nodiscard]] double closed_form_conjugate(const Vec& x, const Vec& eta) const {
    switch (structure_) {
      case Structure::radial: return profiles_[0].terms[0].conjugate(x, norm(eta));
      case Structure::separable: {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) s += profiles_[static_cast<std::size_t>(i)].terms[0].conjugate(x, std::abs(eta[i]));
        return s;
      }
      case Structure::general: return custom_.conjugate(x, eta);
    }
    return 0.0;
  }

  /// Radial profile (structure radial) or the profile of axis i (separable).
  [[nodiscard]] const Profile& profile(int i = 0) const { return profiles_.at(static_cast<std::size_t>(i)); }

  [[nodiscard]] const YoungFunction& lower_envelope() const { return lower_; }
  [[nodiscard]] const YoungFunction& upper_envelope() const { return upper_; }

  /// Weights with a nonempty zero set, for biasing balance-probe centers.
  [[nodiscard]] std::vector<HolderWeight> vanishing_weights() const {
    std::vector<HolderWeight> out;
    for (const auto& p : profiles_)
      for (const auto& t : p.terms)
        if (t.weight.has_zero_set()) out.push_back(t.weight);
    return out;
  }

  [[nodiscard]] const std::vector<PhaseExponents>& phases() const { return phases_; }

  // Catalog constructors are friends; see below.
  friend NFunction constant_power(const Box&, double, double, bool);
  friend NFunction variable_exponent(const Box&, AffineExponent, double, bool);
  friend NFunction double_phase(const Box&, double, double, HolderWeight, double, bool);
  friend NFunction anisotropic_variable(const Box&, std::vector<AffineExponent>, bool);
  friend NFunction anisotropic_double_phase(const Box&, std::vector<double>, std::vector<double>,
                                            std::vector<HolderWeight>, bool);
  friend NFunction custom_nfunction(const Box&, CustomKernel, YoungFunction, YoungFunction, std::string);

 private:
  void finish_envelopes() {
    if (structure_ == Structure::radial) {
      lower_ = profiles_[0].lower_envelope(domain_);
      upper_ = profiles_[0].upper_envelope(domain_);
      return;
    }
    // Separable: M >= max_i m_i(|xi_i|) and max_i |xi_i| >= |xi| / sqrt(d).
    double kmin = std::numeric_limits<double>::infinity();
    double emin = kmin;
    double emax = 0.0;
    std::vector<YoungFunction> uppers;
    for (const auto& p : profiles_) {
      double best_k = 0.0;
      for (const auto& term : p.terms) {
        const auto b = term.bounds(domain_);
        emin = std::min(emin, b.e_min);
        emax = std::max(emax, b.e_max);
        best_k = std::max(best_k, b.k_min);
      }
      kmin = std::min(kmin, best_k);
      uppers.push_back(p.upper_envelope(domain_));
    }
    // The lower bound only uses terms whose weight is bounded below; the
    // exponent range is widened to the global one which keeps it valid.
    lower_ = sum_young({lower_two_regime(kmin, emin, emax)}, 1.0, 1.0 / std::sqrt(static_cast<double>(dim())));
    upper_ = sum_young(std::move(uppers));
  }

  Family family_ = Family::custom;
  Structure structure_ = Structure::general;
  Box domain_;
  std::vector<Profile> profiles_;
  CustomKernel custom_;
  YoungFunction lower_;
  YoungFunction upper_;
  std::vector<PhaseExponents> phases_;
  std::string description_;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParameter(msg);
}

inline AffineExponent validated_exponent(AffineExponent p, const Box& box, const std::string& what) {
  require(p.gradient.dim() == 0 || p.gradient.dim() == box.dim(), what + ": gradient dimension mismatch");
  require(p.lower > 1.0, what + ": lower clamp must exceed 1");
  require(p.lower <= p.upper, what + ": empty clamp range");
  require(std::isfinite(p.upper), what + ": upper clamp must be finite");
  return p;
}

inline HolderWeight validated_weight(HolderWeight a, const Box& box, const std::string& what) {
  require(a.offset >= 0.0 && a.scale >= 0.0, what + ": weight must be nonnegative (offset, scale >= 0)");
  require(a.alpha > 0.0 && a.alpha <= 1.0, what + ": Hoelder exponent alpha must lie in (0, 1]");
  if (a.scale > 0.0) {
    require(a.gradient.dim() == box.dim(), what + ": weight gradient dimension mismatch");
    if (a.anchor.dim() == 0) a.anchor = Vec::zero(box.dim());
    require(a.anchor.dim() == box.dim(), what + ": weight anchor dimension mismatch");
  }
  return a;
}

}  // namespace detail

/// scale |xi|^p (divided by p when normalized).
inline NFunction constant_power(const Box& box, double p, double scale = 1.0, bool normalized = false) {
  detail::require(p > 1.0, "constant-power: p must exceed 1");
  detail::require(scale > 0.0, "constant-power: scale must be positive");
  NFunction m;
  m.family_ = Family::constant_power;
  m.structure_ = Structure::radial;
  m.domain_ = box;
  m.profiles_ = {Profile{{PowerTerm{HolderWeight::constant(1.0), AffineExponent::constant(p), scale, normalized}}}};
  m.description_ = "constant-power: " + format_short(scale) + (normalized ? "/p" : "") + " |xi|^" + format_short(p);
  m.finish_envelopes();
  return m;
}

/// |xi|^{p(x)} with p clamped to [p-, p+], 1 < p-.
inline NFunction variable_exponent(const Box& box, AffineExponent p, double scale = 1.0, bool normalized = false) {
  p = detail::validated_exponent(p, box, "variable-exponent");
  detail::require(scale > 0.0, "variable-exponent: scale must be positive");
  NFunction m;
  m.family_ = Family::variable_exponent;
  m.structure_ = Structure::radial;
  m.domain_ = box;
  m.profiles_ = {Profile{{PowerTerm{HolderWeight::constant(1.0), p, scale, normalized}}}};
  m.description_ = "variable-exponent: |xi|^p(x), p in [" + format_short(p.range(box).first) + ", " +
                   format_short(p.range(box).second) + "]";
  m.finish_envelopes();
  return m;
}

/// scale (|xi|^p + a(x) |xi|^q), 1 < p <= q, a >= 0 Hoelder.
inline NFunction double_phase(const Box& box, double p, double q, HolderWeight a, double scale = 1.0,
                              bool normalized = false) {
  detail::require(p > 1.0 && p <= q, "double-phase: need 1 < p <= q");
  detail::require(scale > 0.0, "double-phase: scale must be positive");
  a = detail::validated_weight(a, box, "double-phase");
  NFunction m;
  m.family_ = Family::double_phase;
  m.structure_ = Structure::radial;
  m.domain_ = box;
  m.profiles_ = {Profile{{PowerTerm{HolderWeight::constant(1.0), AffineExponent::constant(p), scale, normalized},
                          PowerTerm{a, AffineExponent::constant(q), scale, normalized}}}};
  m.phases_ = {{p, q, a.alpha}};
  m.description_ = "double-phase: |xi|^" + format_short(p) + " + a(x)|xi|^" + format_short(q);
  m.finish_envelopes();
  return m;
}

/// sum_i |xi_i|^{p_i(x)}.
inline NFunction anisotropic_variable(const Box& box, std::vector<AffineExponent> p, bool normalized = false) {
  detail::require(static_cast<int>(p.size()) == box.dim(), "anisotropic-variable: need one exponent per coordinate");
  NFunction m;
  m.family_ = Family::anisotropic_variable;
  m.structure_ = Structure::separable;
  m.domain_ = box;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto pi = detail::validated_exponent(p[i], box, "anisotropic-variable[" + std::to_string(i) + "]");
    m.profiles_.push_back(Profile{{PowerTerm{HolderWeight::constant(1.0), pi, 1.0, normalized}}});
  }
  m.description_ = "anisotropic-variable: sum_i |xi_i|^p_i(x)";
  m.finish_envelopes();
  return m;
}

/// sum_i (|xi_i|^{p_i} + a_i(x) |xi_i|^{q_i}).
inline NFunction anisotropic_double_phase(const Box& box, std::vector<double> p, std::vector<double> q,
                                          std::vector<HolderWeight> a, bool normalized = false) {
  const auto d = static_cast<std::size_t>(box.dim());
  detail::require(p.size() == d && q.size() == d && a.size() == d,
                  "anisotropic-double-phase: need p, q, a per coordinate");
  NFunction m;
  m.family_ = Family::anisotropic_double_phase;
  m.structure_ = Structure::separable;
  m.domain_ = box;
  for (std::size_t i = 0; i < d; ++i) {
    const std::string tag = "anisotropic-double-phase[" + std::to_string(i) + "]";
    detail::require(p[i] > 1.0 && p[i] <= q[i], tag + ": need 1 < p <= q");
    auto ai = detail::validated_weight(a[i], box, tag);
    m.profiles_.push_back(Profile{{PowerTerm{HolderWeight::constant(1.0), AffineExponent::constant(p[i]), 1.0, normalized},
                                   PowerTerm{ai, AffineExponent::constant(q[i]), 1.0, normalized}}});
    m.phases_.push_back({p[i], q[i], ai.alpha});
  }
  m.description_ = "anisotropic-double-phase: sum_i |xi_i|^p_i + a_i(x)|xi_i|^q_i";
  m.finish_envelopes();
  return m;
}

/// User-supplied N-function. The envelopes are trusted as given and are
/// checked by check_nfunction like any other family.
inline NFunction custom_nfunction(const Box& box, CustomKernel kernel, YoungFunction lower, YoungFunction upper,
                                  std::string description = "custom") {
  detail::require(static_cast<bool>(kernel.value), "custom: value callable required");
  detail::require(static_cast<bool>(lower) && static_cast<bool>(upper), "custom: both envelopes required");
  NFunction m;
  m.family_ = Family::custom;
  m.structure_ = Structure::general;
  m.domain_ = box;
  m.custom_ = std::move(kernel);
  m.lower_ = std::move(lower);
  m.upper_ = std::move(upper);
  m.description_ = std::move(description);
  return m;
}

/// Catalog entry for the custom tag: 1/2 xi^T S xi + c |xi|^q with S symmetric
/// positive definite (row-major, d*d entries). Neither radial nor separable
/// unless S is a multiple of the identity resp. diagonal.
inline NFunction quadratic_power(const Box& box, std::vector<double> s, double c, double q) {
  const int d = box.dim();
  detail::require(static_cast<int>(s.size()) == d * d, "custom quadratic-power: matrix needs d*d entries");
  detail::require(c >= 0.0 && q > 1.0, "custom quadratic-power: need c >= 0 and q > 1");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      detail::require(s[static_cast<std::size_t>(i * d + j)] == s[static_cast<std::size_t>(j * d + i)],
                      "custom quadratic-power: matrix must be symmetric");
  // Extreme eigenvalues (d <= 3) by sampling the Rayleigh quotient would be
  // inexact; use the closed forms for d = 1, 2 and Gershgorin otherwise.
  double lmin = 0.0;
  double lmax = 0.0;
  if (d == 1) {
    lmin = lmax = s[0];
  } else if (d == 2) {
    const double tr = s[0] + s[3];
    const double det = s[0] * s[3] - s[1] * s[2];
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    lmin = 0.5 * tr - disc;
    lmax = 0.5 * tr + disc;
  } else {
    lmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      double off = 0.0;
      for (int j = 0; j < d; ++j)
        if (j != i) off += std::abs(s[static_cast<std::size_t>(i * d + j)]);
      lmin = std::min(lmin, s[static_cast<std::size_t>(i * d + i)] - off);
      lmax = std::max(lmax, s[static_cast<std::size_t>(i * d + i)] + off);
    }
  }
  detail::require(lmin > 0.0, "custom quadratic-power: matrix must be positive definite");
  auto quad = [s, d](const Vec& xi) {
    double v = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v += xi[i] * s[static_cast<std::size_t>(i * d + j)] * xi[j];
    return 0.5 * v;
  };
  CustomKernel k;
  k.value = [quad, c, q](const Vec&, const Vec& xi) { return quad(xi) + c * std::pow(norm(xi), q); };
  k.smoothed_value = [quad, c, q](const Vec&, const Vec& xi, double eps) {
    return quad(xi) + c * std::pow(smoothed_modulus(dot(xi, xi), eps), q);
  };
  k.gradient = [s, d, c, q](const Vec&, const Vec& xi, double eps) {
    Vec g(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g[i] += s[static_cast<std::size_t>(i * d + j)] * xi[j];
    const double s2 = dot(xi, xi);
    const double denom = std::sqrt(s2 + eps * eps);
    if (denom > 0.0 && c > 0.0) g += xi * (c * q * std::pow(smoothed_modulus(s2, eps), q - 1.0) / denom);
    return g;
  };
  std::vector<YoungFunction> lo{power_young(0.5 * lmin, 2.0)};
  std::vector<YoungFunction> hi{power_young(0.5 * lmax, 2.0)};
  if (c > 0.0) {
    lo.push_back(power_young(c, q));
    hi.push_back(power_young(c, q));
  }
  return custom_nfunction(box, std::move(k), sum_young(std::move(lo)), sum_young(std::move(hi)),
                          "custom: 1/2 xi.S xi + " + format_short(c) + " |xi|^" + format_short(q));
}

/// M(x, xi) with the domain and dimension checks of the public contract.
inline double eval_m(const NFunction& m, const Vec& x, const Vec& xi) {
  if (xi.dim() != m.dim()) throw DimensionMismatch("eval_m: xi has dimension " + std::to_string(xi.dim()));
  if (!m.domain().contains(x)) throw DomainViolation("eval_m: x = " + to_string(x) + " lies outside the domain");
  return m.value(x, xi);
}

/// Sampled N-function axioms on the given budget: M(x,0)=0, evenness,
/// midpoint convexity in xi, the envelope sandwich and the Young-function
/// axioms of both envelopes.
inline std::vector<PropertyCheck> check_nfunction(const NFunction& m, Rng& rng, int samples = 100,
                                                  double xi_min = 1e-2, double xi_max = 1e2) {
  PropertyCheck zero{"M(x,0)=0"};
  PropertyCheck even{"M(x,xi)=M(x,-xi)"};
  PropertyCheck convex{"midpoint convexity in xi"};
  PropertyCheck sandwich{"m1(|xi|) <= M(x,xi) <= m2(|xi|)"};
  const auto& m1 = m.lower_envelope();
  const auto& m2 = m.upper_envelope();
  for (int s = 0; s < samples; ++s) {
    const Vec x = random_point(rng, m.domain());
    const Vec xi = random_vector(rng, m.dim(), xi_min, xi_max);
    const Vec eta = random_vector(rng, m.dim(), xi_min, xi_max);
    const std::string where = "x=" + to_string(x) + " xi=" + to_string(xi);
    const double v = m.value(x, xi);
    zero.record(-std::abs(m.value(x, Vec::zero(m.dim()))), "x=" + to_string(x));
    even.record(-std::abs(v - m.value(x, -xi)) + 1e-13 * v, where);
    const double mid = m.value(x, 0.5 * (xi + eta));
    const double chord = 0.5 * (v + m.value(x, eta));
    convex.record(chord - mid + 1e-12 * chord, where + " eta=" + to_string(eta));
    const double t = norm(xi);
    const double slack = 1e-12 * v;
    sandwich.record(std::min(v - m1(t), m2(t) - v) + slack, where);
  }
  std::vector<PropertyCheck> out{zero, even, convex, sandwich};
  for (auto& c : check_young_function(m1, "m1")) out.push_back(std::move(c));
  for (auto& c : check_young_function(m2, "m2")) out.push_back(std::move(c));
  return out;
}

}  // namespace musielak
