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

// Subcommand pipelines behind tools/musielak_cli.cpp.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "musielak/balance.hpp"
#include "musielak/config.hpp"
#include "musielak/conjugate.hpp"
#include "musielak/galerkin.hpp"
#include "musielak/problem.hpp"
#include "musielak/study.hpp"

namespace musielak::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kConfigError = 2, kNotConverged = 3 };

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"check-nfunction", "check-balance", "validate-problem",
                                          "solve",           "converge",      "unique-probe"};
  return s;
}

struct Options {
  std::string subcommand;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// Report text (stdout unless quiet) and the output directory.
class Context {
 public:
  Context(RunConfig rc, bool quiet, std::ostream& os) : rc_(std::move(rc)), quiet_(quiet), os_(os) {
    std::filesystem::create_directories(rc_.out_dir);
  }

  [[nodiscard]] const RunConfig& config() const { return rc_; }

  template <class... T>
  void say(const T&... parts) {
    if (quiet_) return;
    (os_ << ... << parts) << '\n';
  }

  /// Prints and tallies one property check.
  void report(const PropertyCheck& c) {
    violations_ += c.passed ? 0 : 1;
    if (quiet_) return;
    os_ << (c.passed ? "  [ok]   " : "  [FAIL] ") << c.name << "  samples=" << c.samples
        << " violations=" << c.violations << " worst_margin=" << format_short(c.worst_margin, 6);
    if (!c.passed) os_ << "  witness: " << c.witness;
    os_ << '\n';
  }

  void report(const std::vector<PropertyCheck>& cs) {
    for (const auto& c : cs) report(c);
  }

  std::ofstream csv(const std::string& name) {
    const auto path = std::filesystem::path(rc_.out_dir) / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    say("  wrote ", path.string());
    return f;
  }

  [[nodiscard]] int exit_code() const { return violations_ == 0 ? kPass : kViolation; }

 private:
  RunConfig rc_;
  bool quiet_;
  std::ostream& os_;
  std::size_t violations_ = 0;
};

inline std::string vec_cell(const Vec& v) {
  std::string s;
  for (int i = 0; i < v.dim(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

inline void write_checks_csv(std::ostream& os, const std::vector<PropertyCheck>& cs) {
  write_csv_row(os, {"check", "passed", "samples", "violations", "worst_margin"});
  for (const auto& c : cs)
    write_csv_row(os, {"\"" + c.name + "\"", c.passed ? "1" : "0", std::to_string(c.samples),
                       std::to_string(c.violations), format_double(c.worst_margin)});
}

inline int check_nfunction_cmd(Context& ctx, Rng& rng) {
  const RunConfig& rc = ctx.config();
  const NFunction m = config::build_nfunction(rc.nfunction, rc.domain.box);
  ctx.say("N-function: ", m.description());
  ctx.say("axioms (", rc.axiom_samples, " samples)");
  const auto axioms = check_nfunction(m, rng, rc.axiom_samples);
  ctx.report(axioms);

  const auto samples = duality_samples(m, rng, rc.duality_samples, rc.xi_min, rc.xi_max);
  const ConjugateEvaluator<NFunction> conj(m);
  const auto fy = check_fenchel_young(conj, samples, rc.fenchel_young_tol);
  std::vector<std::pair<Vec, Vec>> pts;
  for (const auto& s : samples) pts.emplace_back(s.x, s.xi);
  const auto bi = check_biconjugation(m, pts, rc.biconjugation_tol);
  ctx.say("Fenchel-Young table (margin >= -", format_short(rc.fenchel_young_tol), ")");
  ctx.report(fy.check);
  ctx.say("biconjugation table (relative deviation <= ", format_short(rc.biconjugation_tol), ", worst ",
          format_short(bi.worst_deviation), ")");
  ctx.report(bi.check);

  std::vector<PropertyCheck> all = axioms;
  all.push_back(fy.check);
  all.push_back(bi.check);
  if (m.has_closed_form_conjugate()) {
    ConjugateSettings numeric;
    numeric.use_closed_form = false;
    const ConjugateEvaluator<NFunction> num(m, numeric);
    PropertyCheck cf{"closed-form vs numerical conjugate"};
    auto out = ctx.csv("closed_form.csv");
    write_csv_row(out, {"x", "eta", "closed_form", "numerical", "relative_difference"});
    for (const auto& s : samples) {
      const double a = m.closed_form_conjugate(s.x, s.eta);
      const double b = num(s.x, s.eta);
      const double rel = std::abs(a - b) / std::max(1.0, std::abs(a));
      cf.record(rc.closed_form_tol - rel, "x=" + to_string(s.x) + " eta=" + to_string(s.eta));
      write_csv_row(out, {vec_cell(s.x), vec_cell(s.eta), format_double(a), format_double(b), format_double(rel)});
    }
    ctx.say("closed-form agreement (<= ", format_short(rc.closed_form_tol), ")");
    ctx.report(cf);
    all.push_back(cf);
  }
  {
    auto out = ctx.csv("fenchel_young.csv");
    write_csv_row(out, {"x", "xi", "eta", "xi_dot_eta", "M", "M_star", "margin"});
    for (const auto& r : fy.rows)
      write_csv_row(out, {vec_cell(r.sample.x), vec_cell(r.sample.xi), vec_cell(r.sample.eta), format_double(r.pairing),
                          format_double(r.m), format_double(r.m_star), format_double(r.margin)});
  }
  {
    auto out = ctx.csv("biconjugation.csv");
    write_csv_row(out, {"x", "xi", "M", "M_star_star", "relative_deviation"});
    for (const auto& r : bi.rows)
      write_csv_row(out, {vec_cell(r.x), vec_cell(r.xi), format_double(r.m), format_double(r.m_star_star),
                          format_double(r.relative_deviation)});
  }
  auto out = ctx.csv("nfunction_checks.csv");
  write_checks_csv(out, all);
  return ctx.exit_code();
}

/// A violation is any constant of the schedule with a witness.
inline int check_balance_cmd(Context& ctx) {
  const RunConfig& rc = ctx.config();
  const NFunction m = config::build_nfunction(rc.nfunction, rc.domain.box);
  ctx.say("N-function: ", m.description());
  const AnalyticBalance an = analytic_balance(m);
  ctx.say("analytic sufficient condition: ", an.satisfied ? "satisfied" : "not satisfied", " (", an.detail, ")");
  const BalanceSweep sweep = balance_sweep(m, rc.balance, rc.c_m_schedule, rc.seed);
  auto wit = ctx.csv("balance_witnesses.csv");
  auto sum = ctx.csv("balance_summary.csv");
  write_csv_row(sum, {"c_m", "passed", "balls_tested", "xi_tested", "empty_windows", "witnesses", "worst_violation"});
  bool header = true;
  for (const auto& r : sweep.reports) {
    PropertyCheck c{"balance condition at C_M=" + format_short(r.c_m)};
    c.samples = r.xi_tested;
    c.violations = r.witnesses.size();
    c.passed = r.passed;
    if (!r.witnesses.empty()) {
      const auto& w = r.witnesses.front();
      c.worst_margin = -w.violation;
      c.witness = "ball center " + to_string(w.center) + " r=" + format_short(w.radius) + " x=" + to_string(w.x) +
                  " xi=" + to_string(w.xi) + " y=" + to_string(w.y);
    }
    ctx.report(c);
    ctx.say("    balls=", r.balls_tested, " xi tested=", r.xi_tested, " empty windows=", r.empty_windows);
    std::ostringstream ss;
    write_witness_csv(ss, r);
    std::string text = ss.str();
    if (!header) text = text.substr(text.find('\n') + 1);
    header = false;
    wit << text;
    write_csv_row(sum, {format_double(r.c_m), r.passed ? "1" : "0", std::to_string(r.balls_tested),
                        std::to_string(r.xi_tested), std::to_string(r.empty_windows), std::to_string(r.witnesses.size()),
                        r.witnesses.empty() ? "0" : format_double(r.witnesses.front().violation)});
  }
  ctx.say("smallest passing C_M in schedule: ", sweep.smallest_passing == 0.0 ? std::string("none")
                                                                              : format_short(sweep.smallest_passing));
  ctx.say("(sampling finds counterexamples; a pass means none was found at this density)");
  return ctx.exit_code();
}

inline void describe_operator(Context& ctx, const StructuredOperator& op) {
  const auto& a = op.a;
  ctx.say("operator: ", a.description);
  ctx.say("  fitted constants c1=", format_short(a.c1), " c2=", format_short(a.c2), " c3=", format_short(a.c3),
          " c4=", format_short(a.c4), " h1=", format_short(a.h1), " h2=", format_short(a.h2));
  ctx.say("  F: ", op.f.description);
}

inline int validate_problem_cmd(Context& ctx, Rng& rng) {
  const RunConfig& rc = ctx.config();
  StructuredOperator op;
  try {
    op = build_operator(rc, rng);
  } catch (const ConstructionFailure& e) {
    PropertyCheck c{"coercivity/growth constants"};
    c.record(-1.0, e.what());
    ctx.report(c);
    auto out = ctx.csv("structure_checks.csv");
    write_checks_csv(out, {c});
    return ctx.exit_code();
  }
  describe_operator(ctx, op);
  auto mesh = std::make_shared<const Mesh>(build_mesh(rc.domain, rc.resolution));
  auto quad = build_quadrature(mesh);
  StructureReport rep = validate_structure(op, *quad, rng, rc.validation_budget);
  rep.checks.push_back(check_gradient_consistency(op.a, rng));
  ctx.report(rep.checks);
  auto out = ctx.csv("structure_checks.csv");
  write_checks_csv(out, rep.checks);
  return ctx.exit_code();
}

inline void report_lemmas(Context& ctx, const EnergyDiagnostics& e, const DualBound& d, const PhiLemmaCheck& p) {
  ctx.say("energy lemma (C = ", format_short(e.constant), ")");
  ctx.report(e.checks);
  ctx.say("dual bound (norm ", format_short(d.norm), ", K ", format_short(d.constant), ")");
  ctx.report(d.check);
  ctx.say("Phi lemma (integral ", format_short(p.integral), ", tolerance ", format_short(p.tolerance), ")");
  ctx.report(p.check);
}

inline int solve_cmd(Context& ctx, Rng& rng) {
  const RunConfig& rc = ctx.config();
  const StructuredOperator op = build_operator(rc, rng);
  describe_operator(ctx, op);
  auto mesh = std::make_shared<const Mesh>(build_mesh(rc.domain, rc.resolution));
  auto basis = std::make_shared<const BasisSet>(mesh);
  const GalerkinSystem sys = make_system(basis, op, rc.solver);
  const GalerkinSolution sol = solve_galerkin(sys);
  ctx.say("solved: n=", sys.size(), " iterations=", sol.iterations, " residual_inf=", format_short(sol.residual_inf),
          sol.used_fallback ? " (fallback used)" : "");
  const auto e = energy_diagnostics(sys, sol);
  const auto d = dual_bound_check(sys, sol);
  const auto p = phi_lemma_check(sys, sol);
  report_lemmas(ctx, e, d, p);
  {
    auto out = ctx.csv("mesh.csv");
    write_mesh_csv(out, *mesh);
  }
  {
    const auto [u, grad] = solution_fields(sys, sol.alpha);
    auto out = ctx.csv("solution.csv");
    write_field_csv(out, u);
    auto g = ctx.csv("gradient.csv");
    write_field_csv(g, grad);
  }
  {
    auto out = ctx.csv("coefficients.csv");
    write_csv_row(out, {"dof", "vertex", "alpha"});
    for (std::size_t k = 0; k < sol.alpha.size(); ++k)
      write_csv_row(out, {std::to_string(k), std::to_string(basis->vertex_of_dof(k)), format_double(sol.alpha[k])});
  }
  std::vector<PropertyCheck> all = e.checks;
  all.push_back(d.check);
  all.push_back(p.check);
  auto out = ctx.csv("solve_checks.csv");
  write_checks_csv(out, all);
  return ctx.exit_code();
}

inline int converge_cmd(Context& ctx, Rng& rng) {
  const RunConfig& rc = ctx.config();
  const StructuredOperator op = build_operator(rc, rng);
  describe_operator(ctx, op);
  ConvergenceReport rep = convergence_study(op, rc.domain, rc.resolutions, rc.solver, rc.study);
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const auto& lv = rep.levels[i];
    ctx.say("level ", i, ": resolution ", lv.resolution, ", n=", lv.n, ", iterations ", lv.solution.iterations,
            ", residual ", format_short(lv.solution.residual_inf));
    report_lemmas(ctx, lv.energy, lv.dual, lv.phi);
  }
  ctx.say("study");
  ctx.report(rep.checks);
  ctx.say("  modular convergence witnessed at lambda = ", format_short(rep.witnessing_lambda));
  if (rep.l2_slope) {
    ctx.say("  fitted L2 slope: ", format_short(*rep.l2_slope));
    if (rc.expected_l2_slope) {
      PropertyCheck s{"L2 slope within tolerance of " + format_short(*rc.expected_l2_slope)};
      s.record(rc.slope_tolerance - std::abs(*rep.l2_slope - *rc.expected_l2_slope), "slope=" + format_double(*rep.l2_slope));
      ctx.report(s);
      rep.checks.push_back(s);
    }
  }
  {
    auto out = ctx.csv("convergence.csv");
    write_convergence_csv(out, rep);
  }
  {
    auto out = ctx.csv("modular_distance.csv");
    write_modular_distance_csv(out, rep);
  }
  {
    auto out = ctx.csv("truncation.csv");
    write_truncation_csv(out, rep);
  }
  {
    auto out = ctx.csv("convergence_summary.csv");
    write_csv_row(out, {"l2_slope", "expected_l2_slope", "witnessing_lambda"});
    write_csv_row(out, {rep.l2_slope ? format_double(*rep.l2_slope) : "",
                        rc.expected_l2_slope ? format_double(*rc.expected_l2_slope) : "",
                        format_double(rep.witnessing_lambda)});
  }
  auto out = ctx.csv("study_checks.csv");
  write_checks_csv(out, rep.checks);
  return ctx.exit_code();
}

/// Two solves of the same system, from zero and from a seeded random start.
inline int unique_probe_cmd(Context& ctx, Rng& rng) {
  const RunConfig& rc = ctx.config();
  const StructuredOperator op = build_operator(rc, rng);
  describe_operator(ctx, op);
  if (!op.b.strictly_increasing(op.domain())) throw ConfigError("config key 'problem.b': unique-probe needs a strictly increasing b");
  auto mesh = std::make_shared<const Mesh>(build_mesh(rc.domain, rc.resolution));
  auto basis = std::make_shared<const BasisSet>(mesh);
  const GalerkinSystem sys = make_system(basis, op, rc.solver);
  std::vector<double> start(sys.size());
  for (double& v : start) v = uniform(rng, -rc.start_scale, rc.start_scale);
  const GalerkinSolution s1 = solve_galerkin(sys);
  const GalerkinSolution s2 = solve_galerkin(sys, start);
  ctx.say("start 1 (zero): iterations ", s1.iterations, ", residual ", format_short(s1.residual_inf));
  ctx.say("start 2 (random, scale ", format_short(rc.start_scale), "): iterations ", s2.iterations, ", residual ",
          format_short(s2.residual_inf));
  const UniquenessReport r = uniqueness_probe(sys, s1, s2, rc.deltas);
  ctx.report(r.checks);
  auto out = ctx.csv("uniqueness.csv");
  write_csv_row(out, {"delta", "J1", "J2", "J3", "J2_bound"});
  for (const auto& lv : r.levels)
    write_csv_row(out, {format_double(lv.delta), format_double(lv.j1), format_double(lv.j2), format_double(lv.j3),
                        format_double(lv.j2_bound)});
  auto chk = ctx.csv("uniqueness_checks.csv");
  write_checks_csv(chk, r.checks);
  return ctx.exit_code();
}

/// Runs one subcommand; diagnostics go to err, reports to out.
inline int run(const Options& o, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig rc;
  try {
    if (std::find(subcommands().begin(), subcommands().end(), o.subcommand) == subcommands().end())
      throw ConfigError("unknown subcommand '" + o.subcommand + "'");
    rc = read_config(config::parse_file(o.config_path));
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }
  if (o.seed) rc.seed = *o.seed;
  if (o.out_dir) rc.out_dir = *o.out_dir;
  rc.solver.seed = rc.seed;
  try {
    Context ctx(rc, o.quiet, out);
    Rng rng(rc.seed);
    ctx.say(o.subcommand, " (seed ", rc.seed, ")");
    int code = kPass;
    if (o.subcommand == "check-nfunction") code = check_nfunction_cmd(ctx, rng);
    if (o.subcommand == "check-balance") code = check_balance_cmd(ctx);
    if (o.subcommand == "validate-problem") code = validate_problem_cmd(ctx, rng);
    if (o.subcommand == "solve") code = solve_cmd(ctx, rng);
    if (o.subcommand == "converge") code = converge_cmd(ctx, rng);
    if (o.subcommand == "unique-probe") code = unique_probe_cmd(ctx, rng);
    ctx.say(code == kPass ? "result: PASS" : "result: VIOLATION");
    return code;
  } catch (const NotConverged& e) {
    err << "solver did not converge: " << e.what() << '\n';
    return kNotConverged;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidParameter& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnsupportedDomain& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConstructionFailure& e) {
    err << "property violation: " << e.what() << '\n';
    return kViolation;
  }
}

}  // namespace musielak::cli
