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
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "musielak/basis.hpp"
#include "musielak/conjugate.hpp"
#include "musielak/errors.hpp"
#include "musielak/field.hpp"
#include "musielak/modular.hpp"
#include "musielak/problem.hpp"
#include "musielak/report.hpp"
#include "musielak/sampling.hpp"

namespace musielak {

struct SolverSettings {
  int max_iterations = 100;
  double residual_tol = 1e-10;
  /// Jacobian step is fd_step * (1 + |alpha_k|).
  double fd_step = 1e-6;
  double armijo = 1e-4;
  int max_backtracks = 40;
  int fallback_iterations = 4000;
  /// Newton is retried from the fallback iterate every this many steps.
  int fallback_newton_period = 25;
  int sphere_directions = 32;
  std::uint64_t seed = 20240601;
};

/// Basis, problem data and solver settings; F is tabulated at the
/// quadrature points once.
struct GalerkinSystem {
  std::shared_ptr<const BasisSet> basis;
  StructuredOperator op;
  SolverSettings solver;
  std::vector<Vec> f_at_points;

  [[nodiscard]] std::size_t size() const { return basis->size(); }
  [[nodiscard]] const QuadraturePoints& quad() const { return *basis->quadrature(); }
};

inline GalerkinSystem make_system(std::shared_ptr<const BasisSet> basis, StructuredOperator op,
                                  SolverSettings solver = {}) {
  if (basis->dim() != op.dim()) throw DimensionMismatch("make_system: basis and operator dimensions differ");
  GalerkinSystem sys{std::move(basis), std::move(op), solver, {}};
  const auto& q = sys.quad();
  sys.f_at_points.reserve(q.size());
  for (const Vec& x : q.x) sys.f_at_points.push_back(sys.op.f(x));
  return sys;
}

struct GalerkinSolution {
  std::vector<double> alpha;
  double residual_inf = 0.0;
  int iterations = 0;
  bool converged = false;
  bool used_fallback = false;
  std::vector<double> history;
};

namespace detail {

/// Contribution of cell c to s_j for its local vertices, given the local
/// coefficients (zero on boundary vertices).
inline std::array<double, 3> cell_residual(const GalerkinSystem& sys, std::size_t c, const std::array<double, 3>& la) {
  const BasisSet& basis = *sys.basis;
  const QuadraturePoints& q = sys.quad();
  const int nv = basis.mesh()->vertices_per_cell();
  const auto& gl = basis.grad_lambda(c);
  Vec grad = Vec::zero(basis.dim());
  for (int a = 0; a < nv; ++a) grad += gl[static_cast<std::size_t>(a)] * la[static_cast<std::size_t>(a)];
  std::array<double, 3> out{0.0, 0.0, 0.0};
  const bool has_phi = !sys.op.phi.is_zero();
  const bool has_b = !sys.op.b.is_zero();
  for (std::size_t k = q.first[c]; k < q.first[c + 1]; ++k) {
    const Vec& x = q.x[k];
    double u = 0.0;
    for (int a = 0; a < nv; ++a) u += q.lambda[k][static_cast<std::size_t>(a)] * la[static_cast<std::size_t>(a)];
    Vec flux = sys.op.a(x, grad) - sys.f_at_points[k];
    if (has_phi) flux += sys.op.phi(u);
    const double bu = has_b ? sys.op.b(x, u) : 0.0;
    if (!all_finite(flux) || !std::isfinite(bu))
      throw NonfiniteIntegrand("residual: nonfinite integrand at x = " + to_string(x) + ", grad u = " + to_string(grad));
    const double w = q.weight[k];
    for (int a = 0; a < nv; ++a)
      out[static_cast<std::size_t>(a)] +=
          w * (dot(flux, gl[static_cast<std::size_t>(a)]) + bu * q.lambda[k][static_cast<std::size_t>(a)]);
  }
  return out;
}

inline std::array<double, 3> local_coefficients(const BasisSet& basis, std::size_t c, const std::vector<double>& alpha) {
  const auto dofs = basis.cell_dofs(c);
  std::array<double, 3> la{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < 3; ++a)
    if (dofs[a] >= 0) la[a] = alpha[static_cast<std::size_t>(dofs[a])];
  return la;
}

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

/// s_j(alpha) = int A(x, grad u).grad w_j + Phi(u).grad w_j + b(x, u) w_j - F.grad w_j,
/// assembled cell by cell in a fixed order.
inline std::vector<double> assemble_residual(const GalerkinSystem& sys, const std::vector<double>& alpha) {
  const BasisSet& basis = *sys.basis;
  if (alpha.size() != basis.size())
    throw DimensionMismatch("assemble_residual: " + std::to_string(alpha.size()) + " coefficients for " +
                            std::to_string(basis.size()) + " basis functions");
  std::vector<double> s(basis.size(), 0.0);
  for (std::size_t c = 0; c < basis.mesh()->cell_count(); ++c) {
    const auto dofs = basis.cell_dofs(c);
    const auto r = detail::cell_residual(sys, c, detail::local_coefficients(basis, c, alpha));
    for (std::size_t a = 0; a < 3; ++a)
      if (dofs[a] >= 0) s[static_cast<std::size_t>(dofs[a])] += r[a];
  }
  return s;
}

/// Central-difference Jacobian; perturbing alpha_k only touches the cells
/// in the support of w_k.
inline Eigen::SparseMatrix<double> fd_jacobian(const GalerkinSystem& sys, const std::vector<double>& alpha) {
  const BasisSet& basis = *sys.basis;
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double h = sys.solver.fd_step * (1.0 + std::abs(alpha[k]));
    for (std::size_t c : basis.cells_of_dof(k)) {
      const auto dofs = basis.cell_dofs(c);
      auto la = detail::local_coefficients(basis, c, alpha);
      std::size_t slot = 0;
      for (std::size_t a = 0; a < 3; ++a)
        if (dofs[a] == static_cast<int>(k)) slot = a;
      const double base = la[slot];
      la[slot] = base + h;
      const auto rp = detail::cell_residual(sys, c, la);
      la[slot] = base - h;
      const auto rm = detail::cell_residual(sys, c, la);
      for (std::size_t a = 0; a < 3; ++a)
        if (dofs[a] >= 0) trip.emplace_back(dofs[a], static_cast<int>(k), (rp[a] - rm[a]) / (2.0 * h));
    }
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::SparseMatrix<double> j(n, n);
  j.setFromTriplets(trip.begin(), trip.end());
  return j;
}

/// min over sampled alpha with |alpha| = R of s(alpha).alpha.
inline double sphere_pairing(const GalerkinSystem& sys, double radius, Rng& rng, int directions) {
  const std::size_t n = sys.size();
  double worst = std::numeric_limits<double>::infinity();
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < directions + 2 * static_cast<int>(std::min<std::size_t>(n, 4)); ++k) {
    std::vector<double> a(n, 0.0);
    if (k < directions) {
      for (double& v : a) v = g(rng);
    } else {
      const std::size_t axis = static_cast<std::size_t>(k - directions) / 2;
      a[axis] = (k - directions) % 2 == 0 ? 1.0 : -1.0;
    }
    const double len = detail::norm2(a);
    for (double& v : a) v *= radius / len;
    worst = std::min(worst, detail::dot(assemble_residual(sys, a), a));
  }
  return worst;
}

/// Smallest R = R0 * 2^k (k < max_growth) with s(alpha).alpha >= 0 on all
/// sampled directions of the sphere of radius R.
inline std::pair<double, int> coercivity_radius(const GalerkinSystem& sys, Rng& rng, double r0 = 1.0,
                                                int max_growth = 60) {
  double r = r0;
  for (int k = 0; k < max_growth; ++k, r *= 2.0)
    if (sphere_pairing(sys, r, rng, sys.solver.sphere_directions) >= 0.0) return {r, k};
  throw NotConverged("coercivity radius not found", {}, {});
}

namespace detail {

struct NewtonOutcome {
  bool converged = false;
  bool stagnated = false;
};

inline std::vector<double> sparse_solve(Eigen::SparseMatrix<double> j, const std::vector<double>& rhs) {
  const auto n = static_cast<Eigen::Index>(rhs.size());
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) b[i] = rhs[static_cast<std::size_t>(i)];
  double mu = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::SparseMatrix<double> m = j;
    if (mu > 0.0) {
      Eigen::SparseMatrix<double> id(n, n);
      id.setIdentity();
      m += mu * id;
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(m);
    if (lu.info() == Eigen::Success) {
      Eigen::VectorXd x = lu.solve(b);
      if (lu.info() == Eigen::Success && x.allFinite()) return {x.data(), x.data() + n};
    }
    mu = mu == 0.0 ? 1e-8 * (1.0 + j.norm()) : 10.0 * mu;
  }
  return {};
}

/// Damped Newton with Armijo backtracking on 1/2 |s|^2.
inline NewtonOutcome newton(const GalerkinSystem& sys, std::vector<double>& alpha, std::vector<double>& s,
                            GalerkinSolution& sol, int budget) {
  const auto& st = sys.solver;
  double phi = 0.5 * dot(s, s);
  for (int it = 0; it < budget; ++it) {
    if (inf_norm(s) <= st.residual_tol) return {true, false};
    const auto j = fd_jacobian(sys, alpha);
    std::vector<double> rhs(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) rhs[i] = -s[i];
    const auto delta = sparse_solve(j, rhs);
    ++sol.iterations;
    if (delta.empty()) return {false, true};
    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < st.max_backtracks; ++bt, t *= 0.5) {
      std::vector<double> trial = alpha;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += t * delta[i];
      std::vector<double> st_trial;
      try {
        st_trial = assemble_residual(sys, trial);
      } catch (const NonfiniteIntegrand&) {
        continue;
      }
      const double phi_trial = 0.5 * dot(st_trial, st_trial);
      if (phi_trial <= (1.0 - 2.0 * st.armijo * t) * phi) {
        alpha = std::move(trial);
        s = std::move(st_trial);
        phi = phi_trial;
        accepted = true;
        break;
      }
    }
    sol.history.push_back(inf_norm(s));
    if (!accepted) return {inf_norm(s) <= st.residual_tol, true};
  }
  return {inf_norm(s) <= st.residual_tol, false};
}

}  // namespace detail

/// Zero of s by damped Newton; on stagnation, projected gradient descent on
/// 1/2 |s|^2 inside the ball |alpha| <= R on whose sphere s(alpha).alpha >= 0,
/// with periodic Newton restarts. Throws NotConverged with the best iterate.
inline GalerkinSolution solve_galerkin(const GalerkinSystem& sys, std::optional<std::vector<double>> initial = std::nullopt) {
  const auto& st = sys.solver;
  GalerkinSolution sol;
  std::vector<double> alpha = initial.value_or(std::vector<double>(sys.size(), 0.0));
  if (alpha.size() != sys.size()) throw DimensionMismatch("solve_galerkin: initial guess has wrong length");
  std::vector<double> s = assemble_residual(sys, alpha);
  sol.history.push_back(detail::inf_norm(s));
  auto finish = [&](bool ok) {
    sol.alpha = alpha;
    sol.residual_inf = detail::inf_norm(s);
    sol.converged = ok;
    return sol;
  };
  const auto first = detail::newton(sys, alpha, s, sol, st.max_iterations);
  if (first.converged) return finish(true);

  sol.used_fallback = true;
  Rng rng(st.seed);
  const double radius = std::max(coercivity_radius(sys, rng, 1.0).first, 2.0 * detail::norm2(alpha));
  std::vector<double> best = alpha;
  double best_res = detail::inf_norm(s);
  double t = 1.0;
  for (int it = 0; it < st.fallback_iterations; ++it) {
    const auto j = fd_jacobian(sys, alpha);
    Eigen::VectorXd sv = Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
    Eigen::VectorXd g = j.transpose() * sv;
    const double phi = 0.5 * detail::dot(s, s);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
      std::vector<double> trial(alpha.size());
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = alpha[i] - t * g[static_cast<Eigen::Index>(i)];
      const double len = detail::norm2(trial);
      if (len > radius)
        for (double& v : trial) v *= radius / len;
      std::vector<double> s_trial;
      try {
        s_trial = assemble_residual(sys, trial);
      } catch (const NonfiniteIntegrand&) {
        continue;
      }
      double decrease = 0.0;
      for (std::size_t i = 0; i < trial.size(); ++i) decrease += g[static_cast<Eigen::Index>(i)] * (alpha[i] - trial[i]);
      if (0.5 * detail::dot(s_trial, s_trial) <= phi - st.armijo * decrease) {
        alpha = std::move(trial);
        s = std::move(s_trial);
        accepted = true;
        break;
      }
    }
    ++sol.iterations;
    sol.history.push_back(detail::inf_norm(s));
    if (detail::inf_norm(s) < best_res) {
      best_res = detail::inf_norm(s);
      best = alpha;
    }
    if (best_res <= st.residual_tol) {
      alpha = best;
      s = assemble_residual(sys, alpha);
      return finish(true);
    }
    if (!accepted) break;
    t *= 4.0;
    if ((it + 1) % st.fallback_newton_period == 0) {
      auto a2 = alpha;
      auto s2 = s;
      const auto out = detail::newton(sys, a2, s2, sol, st.max_iterations);
      if (out.converged) {
        alpha = std::move(a2);
        s = std::move(s2);
        return finish(true);
      }
    }
  }
  throw NotConverged("solve_galerkin: residual " + format_short(best_res) + " above tolerance " +
                         format_short(st.residual_tol),
                     best, sol.history);
}

/// u_h and grad u_h at the points of q (q must live on the system's mesh).
inline std::pair<DiscreteField, DiscreteField> solution_fields(const GalerkinSystem& sys, const std::vector<double>& alpha,
                                                                std::shared_ptr<const QuadraturePoints> q = nullptr) {
  return sys.basis->interpolate(alpha, q ? std::move(q) : sys.basis->quadrature());
}

/// A(x, grad u) as a field.
inline DiscreteField flux_field(const GalerkinSystem& sys, const DiscreteField& grad) {
  DiscreteField a = grad;
  for (std::size_t k = 0; k < grad.size(); ++k) a.values[k] = sys.op.a(grad.points->x[k], grad.values[k]);
  return a;
}

struct EnergyDiagnostics {
  double energy_a = 0.0;   // int A(x, grad u).grad u
  double norm_lm = 0.0;    // ||grad u||_{L_M}
  double energy_b = 0.0;   // int b(x, u) u
  double source_modular = 0.0;  // int M*(x, 4F/c1)
  double h1_l1 = 0.0;
  double constant = 0.0;   // C_F = int M*(x, 4F/c1) + ||h1||_1 / 2
  std::vector<PropertyCheck> checks;
  [[nodiscard]] bool passed() const { return all_passed(checks); }
};

/// The uniform bound of the Galerkin energy estimate. Testing with u_n gives
///   1/4 int M(x, c1 grad u) + 1/2 int A.grad u + int b u <= C_F,
/// hence int A.grad u <= 2 C_F, int b u <= C_F and
/// ||grad u||_{L_M} <= (int M(x, c1 grad u) + 1) / c1 <= (4 C_F + 1) / c1.
inline EnergyDiagnostics energy_diagnostics(const GalerkinSystem& sys, const GalerkinSolution& sol) {
  EnergyDiagnostics e;
  const auto [u, grad] = solution_fields(sys, sol.alpha);
  const auto& q = sys.quad();
  for (std::size_t k = 0; k < q.size(); ++k) {
    e.energy_a += q.weight[k] * dot(sys.op.a(q.x[k], grad.values[k]), grad.values[k]);
    e.energy_b += q.weight[k] * sys.op.b(q.x[k], u.scalar(k)) * u.scalar(k);
  }
  const NFunction& m = sys.op.a.m;
  e.norm_lm = luxemburg_norm(m, grad).norm;
  DiscreteField f{sys.basis->quadrature(), sys.op.dim(), sys.f_at_points};
  e.source_modular = modular(conjugate_of(m), f * (4.0 / sys.op.a.c1));
  e.h1_l1 = sys.op.a.h1 * q.total_weight();
  e.constant = e.source_modular + 0.5 * e.h1_l1;
  const double slack = 1e-9 * std::max(1.0, e.constant);
  PropertyCheck ea{"int A(x,grad u).grad u <= 2 C"};
  ea.record(2.0 * e.constant - e.energy_a + slack, "C=" + format_double(e.constant));
  PropertyCheck nb{"||grad u||_LM <= (4 C + 1)/c1"};
  nb.record((4.0 * e.constant + 1.0) / sys.op.a.c1 - e.norm_lm + slack, "C=" + format_double(e.constant));
  PropertyCheck eb{"int b(x,u) u <= C"};
  eb.record(e.constant - e.energy_b + slack, "C=" + format_double(e.constant));
  PropertyCheck sign{"int b(x,u) u >= 0"};
  sign.record(e.energy_b + 1e-14 * std::max(1.0, std::abs(e.energy_b)), "energy_b=" + format_double(e.energy_b));
  e.checks = {ea, nb, eb, sign};
  return e;
}

struct DualBound {
  double norm = 0.0;      // ||A(., grad u)||_{L_M*} (Luxemburg)
  double constant = 0.0;  // the assembled estimate
  double margin = 0.0;    // constant - norm
  PropertyCheck check{"||A(x,grad u)||_LM* <= K"};
};

/// The dual-norm estimate
///   K = 2 max(c1, c4) / (c1 c3) [ (1/c2 + 1) + (c1 c3 / 2 + 1)(int A.grad u + ||h1||_1 + ||h2||_1 / c2) ].
/// It bounds the Orlicz norm, which dominates the Luxemburg norm computed here.
inline DualBound dual_bound_check(const GalerkinSystem& sys, const GalerkinSolution& sol) {
  DualBound d;
  const auto [u, grad] = solution_fields(sys, sol.alpha);
  const auto flux = flux_field(sys, grad);
  const VectorFieldA& a = sys.op.a;
  const double vol = sys.quad().total_weight();
  double energy = 0.0;
  for (std::size_t k = 0; k < grad.size(); ++k) energy += sys.quad().weight[k] * dot(flux.values[k], grad.values[k]);
  d.norm = luxemburg_norm(conjugate_of(a.m), flux).norm;
  d.constant = 2.0 * std::max(a.c1, a.c4) / (a.c1 * a.c3) *
               ((1.0 / a.c2 + 1.0) + (a.c1 * a.c3 / 2.0 + 1.0) * (energy + a.h1 * vol + a.h2 * vol / a.c2));
  d.margin = d.constant - d.norm;
  d.check.record(d.margin, "norm=" + format_double(d.norm) + " K=" + format_double(d.constant));
  return d;
}

struct PhiLemmaCheck {
  double integral = 0.0;
  double tolerance = 0.0;
  PropertyCheck check{"int Phi(u).grad u = 0"};
};

/// int Phi(u).grad u on a refined quadrature; tolerance 1e-8 |Phi|_inf ||grad u||_1.
inline PhiLemmaCheck phi_lemma_check(const GalerkinSystem& sys, const GalerkinSolution& sol, int subdivisions = 4) {
  PhiLemmaCheck p;
  auto q = build_quadrature(sys.basis->mesh(), subdivisions);
  const auto [u, grad] = solution_fields(sys, sol.alpha, q);
  double l1 = 0.0;
  for (std::size_t k = 0; k < q->size(); ++k) {
    p.integral += q->weight[k] * dot(sys.op.phi(u.scalar(k)), grad.values[k]);
    l1 += q->weight[k] * norm(grad.values[k]);
  }
  p.tolerance = 1e-8 * sys.op.phi.bound() * l1;
  p.check.record(p.tolerance - std::abs(p.integral), "integral=" + format_double(p.integral));
  return p;
}

/// H_delta(t) = 0 for t < 0, t/delta on [0, delta], 1 beyond.
inline double heaviside(double delta, double t) {
  if (t < 0.0) return 0.0;
  if (t > delta) return 1.0;
  return t / delta;
}

struct UniquenessLevel {
  double delta = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;
  double j3 = 0.0;
  double j2_bound = 0.0;  // L_Phi int_band |grad (u1 - u2)|
};

struct UniquenessReport {
  std::vector<UniquenessLevel> levels;
  double l1_difference = 0.0;
  double sup_difference = 0.0;
  std::vector<PropertyCheck> checks;
  [[nodiscard]] bool passed() const { return all_passed(checks); }
};

/// Heaviside-test diagnostics for two solutions of the same system, with
/// the band {0 <= u1 - u2 <= delta} taken per quadrature point.
inline UniquenessReport uniqueness_probe(const GalerkinSystem& sys, const GalerkinSolution& s1,
                                         const GalerkinSolution& s2, std::vector<double> deltas,
                                         double j1_tol = 1e-10, double j2_tol = 1e-10, double uniqueness_tol = 1e-8) {
  if (!sys.op.b.strictly_increasing(sys.op.domain()))
    throw PreconditionError("uniqueness_probe: b must be strictly increasing");
  if (deltas.empty()) throw PreconditionError("uniqueness_probe: empty delta schedule");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  UniquenessReport r;
  const auto& q = sys.quad();
  const auto [u1, g1] = solution_fields(sys, s1.alpha);
  const auto [u2, g2] = solution_fields(sys, s2.alpha);
  const double lip = sys.op.phi.lipschitz();
  for (std::size_t k = 0; k < q.size(); ++k) r.l1_difference += q.weight[k] * std::abs(u1.scalar(k) - u2.scalar(k));
  for (std::size_t i = 0; i < s1.alpha.size(); ++i)
    r.sup_difference = std::max(r.sup_difference, std::abs(s1.alpha[i] - s2.alpha[i]));
  PropertyCheck j1c{"J1 >= -tol"};
  PropertyCheck j2b{"|J2| <= L_Phi int_band |grad w|"};
  for (double delta : deltas) {
    UniquenessLevel lv;
    lv.delta = delta;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const Vec& x = q.x[k];
      const double w = u1.scalar(k) - u2.scalar(k);
      const Vec gw = g1.values[k] - g2.values[k];
      const double wq = q.weight[k];
      lv.j3 += wq * (sys.op.b(x, u1.scalar(k)) - sys.op.b(x, u2.scalar(k))) * heaviside(delta, w);
      if (w < 0.0 || w > delta) continue;
      lv.j1 += wq * dot(sys.op.a(x, g1.values[k]) - sys.op.a(x, g2.values[k]), gw) / delta;
      lv.j2 += wq * dot(sys.op.phi(u1.scalar(k)) - sys.op.phi(u2.scalar(k)), gw) / delta;
      lv.j2_bound += wq * lip * norm(gw);
    }
    j1c.record(lv.j1 + j1_tol, "delta=" + format_short(delta));
    j2b.record(lv.j2_bound * (1.0 + 1e-12) + 1e-300 - std::abs(lv.j2), "delta=" + format_short(delta));
    r.levels.push_back(lv);
  }
  PropertyCheck decrease{"|J2(delta_min)| <= max(0.1 |J2(delta_max)|, tol)"};
  decrease.record(std::max(0.1 * std::abs(r.levels.front().j2), j2_tol) - std::abs(r.levels.back().j2),
                  "delta_min=" + format_short(r.levels.back().delta));
  PropertyCheck same{"solutions agree"};
  same.record(uniqueness_tol - std::max(r.l1_difference, r.sup_difference),
              "L1=" + format_double(r.l1_difference) + " sup=" + format_double(r.sup_difference));
  r.checks = {j1c, j2b, decrease, same};
  return r;
}

}  // namespace musielak
