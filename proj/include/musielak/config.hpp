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

// JSON run configuration. The key schema is documented in docs/config.md.
// Needs nlohmann/json; the numerical headers do not.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "musielak/balance.hpp"
#include "musielak/fem.hpp"
#include "musielak/galerkin.hpp"
#include "musielak/nfunction.hpp"
#include "musielak/problem.hpp"
#include "musielak/study.hpp"

namespace musielak {

/// Malformed configuration; the message names the key path or line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace config {

using json = nlohmann::json;

/// Read access to one JSON object that remembers which keys were consumed,
/// so that misspelled keys are reported instead of silently ignored.
class Node {
 public:
  Node(const json* j, std::string path) : j_(j), path_(std::move(path)) {
    if (j_ && !j_->is_object()) fail("", "expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_ && j_->contains(key); }
  [[nodiscard]] const std::string& path() const { return path_; }

  Node child(const std::string& key) {
    seen_.insert(key);
    return Node(has(key) ? &j_->at(key) : nullptr, join(key));
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return required<T>(key);
  }

  template <class T>
  T required(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) fail(key, "missing required key");
    try {
      return j_->at(key).get<T>();
    } catch (const json::exception& e) {
      fail(key, std::string("wrong type (") + e.what() + ")");
    }
  }

  /// Array of objects, each wrapped as a Node.
  std::vector<Node> children(const std::string& key) {
    seen_.insert(key);
    std::vector<Node> out;
    if (!has(key)) return out;
    const json& a = j_->at(key);
    if (!a.is_array()) fail(key, "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(&a[i], join(key) + "[" + std::to_string(i) + "]");
    return out;
  }

  /// Rejects keys that were never asked for.
  void finish() const {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError("config key '" + (key.empty() ? path_ : join(key)) + "': " + msg);
  }

 private:
  [[nodiscard]] std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* j_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Parses text, turning syntax errors into line/column diagnostics.
inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

inline Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

inline Vec vec_or_empty(Node& n, const std::string& key) { return to_vec(n.get<std::vector<double>>(key, {})); }

}  // namespace config

/// Everything a subcommand needs, read from the configuration tree.
struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  DomainSpec domain;
  int resolution = 16;
  std::vector<int> resolutions{8, 16, 32, 64};

  // nfunction
  config::json nfunction;
  int axiom_samples = 100;
  int duality_samples = 100;
  double xi_min = 0.1;
  double xi_max = 10.0;
  double fenchel_young_tol = 1e-10;
  double biconjugation_tol = 1e-5;
  double closed_form_tol = 1e-6;

  // modular
  StudySettings study;

  // balance
  BalanceProbe balance;
  std::vector<double> c_m_schedule;

  // problem
  std::string operator_kind = "canonical";
  double p_laplacian_p = 2.0;
  std::optional<double> eps;
  int fit_budget = 100;
  int validation_budget = 100;
  ConvectionPhi phi;
  LowerOrderB b;
  config::json source;

  // galerkin
  SolverSettings solver;
  std::vector<double> deltas{0.5, 0.1, 0.02};
  double start_scale = 1.0;
  std::optional<double> expected_l2_slope;
  double slope_tolerance = 0.2;
};

namespace config {

inline DomainSpec read_domain(Node n) {
  DomainSpec d;
  d.kind = n.get<std::string>("kind", "interval");
  const int dim = d.kind == "rectangle" ? 2 : 1;
  if (d.kind != "interval" && d.kind != "rectangle") n.fail("kind", "must be 'interval' or 'rectangle'");
  const auto lo = n.get<std::vector<double>>("lower", std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  const auto hi = n.get<std::vector<double>>("upper", std::vector<double>(static_cast<std::size_t>(dim), 1.0));
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
    n.fail("lower", "lower/upper need " + std::to_string(dim) + " entries for a " + d.kind);
  for (int i = 0; i < dim; ++i)
    if (!(lo[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)])) n.fail("upper", "upper must exceed lower");
  d.box = Box{to_vec(lo), to_vec(hi)};
  n.finish();
  return d;
}

/// Clamps default to the range of the affine part over the box.
inline AffineExponent read_exponent(Node n, const Box& box) {
  AffineExponent e;
  e.base = n.required<double>("base");
  e.gradient = vec_or_empty(n, "gradient");
  e.lower = -std::numeric_limits<double>::infinity();
  e.upper = std::numeric_limits<double>::infinity();
  if (e.gradient.dim() != 0 && e.gradient.dim() != box.dim()) n.fail("gradient", "needs one entry per coordinate");
  const auto [lo, hi] = e.range(box);
  e.lower = n.get<double>("lower", lo);
  e.upper = n.get<double>("upper", hi);
  n.finish();
  return e;
}

inline HolderWeight read_weight(Node n) {
  HolderWeight w;
  w.offset = n.get<double>("offset", 0.0);
  w.scale = n.get<double>("scale", 1.0);
  w.gradient = vec_or_empty(n, "gradient");
  w.anchor = vec_or_empty(n, "anchor");
  if (w.anchor.dim() == 0 && w.gradient.dim() > 0) w.anchor = Vec::zero(w.gradient.dim());
  w.alpha = n.get<double>("alpha", 1.0);
  n.finish();
  return w;
}

/// Builds the N-function of the "nfunction" section on the given box.
inline NFunction build_nfunction(const json& j, const Box& box) {
  Node n(&j, "nfunction");
  const auto family = n.required<std::string>("family");
  const bool normalized = n.get<bool>("normalized", false);
  const double scale = n.get<double>("scale", 1.0);
  // Check-related keys live in the same section.
  for (const char* k : {"axiom_samples", "duality_samples", "xi_min", "xi_max", "fenchel_young_tol",
                        "biconjugation_tol", "closed_form_tol"})
    n.get<double>(k, 0.0);
  NFunction m;
  if (family == "constant-power") {
    m = constant_power(box, n.required<double>("p"), scale, normalized);
  } else if (family == "variable-exponent") {
    m = variable_exponent(box, read_exponent(n.child("exponent"), box), scale, normalized);
  } else if (family == "double-phase") {
    m = double_phase(box, n.required<double>("p"), n.required<double>("q"), read_weight(n.child("weight")), scale,
                     normalized);
  } else if (family == "anisotropic-variable") {
    std::vector<AffineExponent> ps;
    for (auto& c : n.children("exponents")) ps.push_back(read_exponent(std::move(c), box));
    m = anisotropic_variable(box, ps, normalized);
  } else if (family == "anisotropic-double-phase") {
    std::vector<HolderWeight> ws;
    for (auto& c : n.children("weights")) ws.push_back(read_weight(std::move(c)));
    m = anisotropic_double_phase(box, n.required<std::vector<double>>("p"), n.required<std::vector<double>>("q"), ws,
                                 normalized);
  } else if (family == "custom") {
    m = quadratic_power(box, n.required<std::vector<double>>("matrix"), n.required<double>("c"),
                        n.required<double>("q"));
  } else {
    n.fail("family", "unknown family '" + family + "'");
  }
  n.finish();
  return m;
}

inline PhiKind phi_kind(const std::string& s, Node& n) {
  if (s == "zero") return PhiKind::zero;
  if (s == "sin") return PhiKind::sin;
  if (s == "cos") return PhiKind::cos;
  if (s == "arctan") return PhiKind::arctan;
  if (s == "tanh") return PhiKind::tanh;
  n.fail("kinds", "unknown shape '" + s + "'");
}

inline BKind b_kind(const std::string& s, Node& n) {
  if (s == "zero") return BKind::zero;
  if (s == "linear") return BKind::linear;
  if (s == "cubic") return BKind::cubic;
  if (s == "arctan") return BKind::arctan;
  if (s == "piecewise") return BKind::piecewise;
  n.fail("kind", "unknown shape '" + s + "'");
}

inline SourceFactor source_factor(Node n) {
  SourceFactor f;
  const auto k = n.required<std::string>("kind");
  if (k == "one") {
    f.kind = SourceFactor::one;
  } else if (k == "power") {
    f.kind = SourceFactor::power;
  } else if (k == "sin") {
    f.kind = SourceFactor::sin;
  } else if (k == "cos") {
    f.kind = SourceFactor::cos;
  } else {
    n.fail("kind", "unknown factor '" + k + "'");
  }
  f.param = n.get<double>("param", 1.0);
  n.finish();
  return f;
}

}  // namespace config

/// Reads and validates the tree. Constructor validation of the N-function
/// happens here too, so that bad parameters surface as configuration errors.
inline RunConfig read_config(const config::json& root) {
  using config::Node;
  RunConfig rc;
  Node top(&root, "");

  Node cli = top.child("cli");
  rc.seed = cli.get<std::uint64_t>("seed", rc.seed);
  rc.out_dir = cli.get<std::string>("out", rc.out_dir);
  cli.finish();

  Node fem = top.child("fem");
  rc.domain = config::read_domain(fem.child("domain"));
  rc.resolution = fem.get<int>("resolution", rc.resolution);
  rc.resolutions = fem.get<std::vector<int>>("resolutions", rc.resolutions);
  if (rc.resolution < 2) fem.fail("resolution", "must be at least 2");
  fem.finish();

  if (!root.contains("nfunction")) top.fail("nfunction", "missing required section");
  top.child("nfunction");
  rc.nfunction = root.at("nfunction");
  {
    Node n(&rc.nfunction, "nfunction");
    rc.axiom_samples = n.get<int>("axiom_samples", rc.axiom_samples);
    rc.duality_samples = n.get<int>("duality_samples", rc.duality_samples);
    rc.xi_min = n.get<double>("xi_min", rc.xi_min);
    rc.xi_max = n.get<double>("xi_max", rc.xi_max);
    rc.fenchel_young_tol = n.get<double>("fenchel_young_tol", rc.fenchel_young_tol);
    rc.biconjugation_tol = n.get<double>("biconjugation_tol", rc.biconjugation_tol);
    rc.closed_form_tol = n.get<double>("closed_form_tol", rc.closed_form_tol);
    if (!(0.0 < rc.xi_min && rc.xi_min < rc.xi_max)) n.fail("xi_min", "need 0 < xi_min < xi_max");
  }
  try {
    config::build_nfunction(rc.nfunction, rc.domain.box);
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("config section 'nfunction': ") + e.what());
  }

  Node mod = top.child("modular");
  rc.study.lambdas = mod.get<std::vector<double>>("lambdas", rc.study.lambdas);
  rc.study.truncation_levels = mod.get<std::vector<double>>("truncation_levels", rc.study.truncation_levels);
  mod.finish();

  Node bal = top.child("balance");
  rc.balance.c_m = bal.get<double>("c_m", rc.balance.c_m);
  rc.c_m_schedule = bal.get<std::vector<double>>("c_m_schedule", {rc.balance.c_m});
  rc.balance.centers = bal.get<int>("centers", rc.balance.centers);
  rc.balance.zero_set_centers = bal.get<int>("zero_set_centers", rc.balance.zero_set_centers);
  rc.balance.radii = bal.get<std::vector<double>>("radii", rc.balance.radii);
  rc.balance.random_x_per_ball = bal.get<int>("random_x_per_ball", rc.balance.random_x_per_ball);
  rc.balance.xi_per_x = bal.get<int>("xi_per_x", rc.balance.xi_per_x);
  rc.balance.y_samples = bal.get<int>("y_samples", rc.balance.y_samples);
  rc.balance.refine_steps = bal.get<int>("refine_steps", rc.balance.refine_steps);
  for (double c : rc.c_m_schedule)
    if (!(c >= 1.0)) bal.fail("c_m_schedule", "constants must be at least 1");
  bal.finish();

  Node prob = top.child("problem");
  {
    Node op = prob.child("operator");
    rc.operator_kind = op.get<std::string>("kind", rc.operator_kind);
    if (rc.operator_kind == "custom")
      op.fail("kind", "custom operators are disabled; use 'canonical' or 'p-laplacian'");
    if (rc.operator_kind != "canonical" && rc.operator_kind != "p-laplacian")
      op.fail("kind", "must be 'canonical' or 'p-laplacian'");
    rc.p_laplacian_p = op.get<double>("p", rc.p_laplacian_p);
    if (op.has("eps")) rc.eps = op.required<double>("eps");
    rc.fit_budget = op.get<int>("fit_budget", rc.fit_budget);
    op.finish();

    const int d = rc.domain.box.dim();
    rc.phi = ConvectionPhi::zero(d);
    Node phi = prob.child("phi");
    if (phi.has("kinds")) {
      const auto kinds = phi.required<std::vector<std::string>>("kinds");
      const auto coef = phi.get<std::vector<double>>("coefficients", std::vector<double>(kinds.size(), 1.0));
      if (static_cast<int>(kinds.size()) != d || coef.size() != kinds.size())
        phi.fail("kinds", "need one shape and coefficient per coordinate");
      rc.phi.kinds.clear();
      for (const auto& k : kinds) rc.phi.kinds.push_back(config::phi_kind(k, phi));
      rc.phi.coefficients = coef;
    }
    phi.finish();

    Node b = prob.child("b");
    rc.b.kind = config::b_kind(b.get<std::string>("kind", "zero"), b);
    rc.b.coefficient = b.get<double>("coefficient", 1.0);
    rc.b.weight_offset = b.get<double>("weight_offset", 1.0);
    rc.b.weight_gradient = config::vec_or_empty(b, "weight_gradient");
    if (rc.b.weight_gradient.dim() != 0 && rc.b.weight_gradient.dim() != d)
      b.fail("weight_gradient", "needs one entry per coordinate");
    b.finish();

    prob.child("f");
    rc.source = root.contains("problem") && root["problem"].contains("f") ? root["problem"]["f"] : config::json::object();
    if (rc.source.is_object() && rc.source.value("kind", "zero") == "manufactured" && !rc.b.is_zero())
      prob.fail("f", "manufactured sources assume b = zero");
    rc.validation_budget = prob.get<int>("validation_budget", rc.validation_budget);
  }
  prob.finish();

  Node gal = top.child("galerkin");
  rc.solver.max_iterations = gal.get<int>("max_iterations", rc.solver.max_iterations);
  rc.solver.residual_tol = gal.get<double>("residual_tol", rc.solver.residual_tol);
  rc.solver.fd_step = gal.get<double>("fd_step", rc.solver.fd_step);
  rc.solver.armijo = gal.get<double>("armijo", rc.solver.armijo);
  rc.solver.max_backtracks = gal.get<int>("max_backtracks", rc.solver.max_backtracks);
  rc.solver.fallback_iterations = gal.get<int>("fallback_iterations", rc.solver.fallback_iterations);
  rc.solver.fallback_newton_period = gal.get<int>("fallback_newton_period", rc.solver.fallback_newton_period);
  rc.solver.sphere_directions = gal.get<int>("sphere_directions", rc.solver.sphere_directions);
  rc.deltas = gal.get<std::vector<double>>("deltas", rc.deltas);
  rc.start_scale = gal.get<double>("start_scale", rc.start_scale);
  if (gal.has("expected_l2_slope")) rc.expected_l2_slope = gal.required<double>("expected_l2_slope");
  rc.slope_tolerance = gal.get<double>("slope_tolerance", rc.slope_tolerance);
  gal.finish();

  top.finish();
  return rc;
}

/// F from the "problem.f" section; manufactured sources need the operator.
inline SourceF build_source(const config::json& j, const VectorFieldA& a, const ConvectionPhi& phi) {
  config::Node n(&j, "problem.f");
  const auto kind = n.get<std::string>("kind", "zero");
  SourceF f;
  f.dim = a.m.dim();
  if (kind == "zero") {
    // nothing
  } else if (kind == "manufactured") {
    const auto exact = n.get<std::string>("exact", "sine");
    if (exact != "sine" && exact != "bubble") n.fail("exact", "must be 'sine' or 'bubble'");
    f = manufactured_source(a, phi, exact, n.get<double>("amplitude", 1.0));
  } else if (kind == "terms") {
    std::string desc;
    for (auto& t : n.children("terms")) {
      SourceTerm term;
      term.component = t.get<int>("component", 0);
      if (term.component < 0 || term.component >= f.dim) t.fail("component", "out of range");
      term.coefficient = t.get<double>("coefficient", 1.0);
      for (auto& fac : t.children("factors")) term.factors.push_back(config::source_factor(std::move(fac)));
      if (static_cast<int>(term.factors.size()) > f.dim) t.fail("factors", "at most one factor per coordinate");
      t.finish();
      f.terms.push_back(std::move(term));
    }
    f.description = std::to_string(f.terms.size()) + " separable term(s)";
  } else {
    n.fail("kind", "must be 'zero', 'manufactured' or 'terms'");
  }
  n.finish();
  return f;
}

/// The full problem data; the operator constants are fitted with rng.
inline StructuredOperator build_operator(const RunConfig& rc, Rng& rng) {
  StructuredOperator op;
  if (rc.operator_kind == "p-laplacian") {
    op.a = p_laplacian(rc.domain.box, rc.p_laplacian_p, rng, rc.eps, rc.fit_budget);
  } else {
    op.a = canonical_operator(config::build_nfunction(rc.nfunction, rc.domain.box), rc.eps.value_or(0.0), rng,
                              rc.fit_budget);
  }
  op.phi = rc.phi;
  op.b = rc.b;
  op.f = build_source(rc.source, op.a, op.phi);
  return op;
}

}  // namespace musielak
