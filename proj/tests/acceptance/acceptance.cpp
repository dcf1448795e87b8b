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

// Acceptance suite. Usage: acceptance <cli-binary> <configs-dir> <scratch-dir> [gtest flags]
// Prints one "criterion N: PASS|FAIL" line per criterion after the run.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "musielak.hpp"

namespace musielak {
namespace {

namespace fs = std::filesystem;

std::string g_cli;
std::string g_configs;
std::string g_scratch;

const Box kSquare = Box::unit(2);
const Box kInterval = Box::unit(1);

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<NFunction> catalog() {
  return {constant_power(kSquare, 3.0, 1.0, true),
          variable_exponent(kSquare, AffineExponent{2.0, Vec{1.0, 0.0}, 1.5, 4.0}),
          double_phase(kSquare, 2.0, 3.0, HolderWeight::linear(Vec{1.0, 0.0})),
          anisotropic_variable(kSquare, {AffineExponent{2.0, Vec{0.5, 0.0}, 2.0, 2.5},
                                         AffineExponent{3.0, Vec{0.0, -0.5}, 2.5, 3.0}}),
          anisotropic_double_phase(kSquare, {2.0, 2.0}, {2.5, 3.0},
                                   {HolderWeight::linear(Vec{1.0, 0.0}), HolderWeight::constant(0.5)}),
          quadratic_power(kSquare, {2.0, 0.5, 0.5, 1.0}, 0.3, 3.0)};
}

std::shared_ptr<const QuadraturePoints> quadrature(const Box& box, int n) {
  return build_quadrature(std::make_shared<const Mesh>(build_mesh({box.dim() == 1 ? "interval" : "rectangle", box}, n)));
}

std::shared_ptr<const BasisSet> basis(const Box& box, int n) {
  return std::make_shared<const BasisSet>(
      std::make_shared<const Mesh>(build_mesh({box.dim() == 1 ? "interval" : "rectangle", box}, n)));
}

StructuredOperator zero_data(VectorFieldA a) {
  StructuredOperator op;
  const int d = a.m.dim();
  op.a = std::move(a);
  op.phi = ConvectionPhi::zero(d);
  op.f.dim = d;
  return op;
}

void expect_lemmas(const GalerkinSystem& sys, const GalerkinSolution& sol, const std::string& label) {
  const auto e = energy_diagnostics(sys, sol);
  for (const auto& c : e.checks) EXPECT_TRUE(c.passed) << label << ": " << c.name << " " << c.witness;
  const auto d = dual_bound_check(sys, sol);
  EXPECT_TRUE(d.check.passed) << label << ": " << d.check.witness;
  const auto p = phi_lemma_check(sys, sol);
  EXPECT_TRUE(p.check.passed) << label << ": " << p.check.witness;
}

// ---------------------------------------------------------------------------

TEST(Acceptance, Criterion1_ConvexDuality) {
  const Stopwatch sw;
  Rng rng(101);
  for (const auto& m : catalog()) {
    const auto samples = duality_samples(m, rng, 100, 0.1, 10.0);
    ASSERT_EQ(samples.size(), 100u);
    const ConjugateEvaluator<NFunction> conj(m);
    const auto fy = check_fenchel_young(conj, samples, 1e-10);
    EXPECT_TRUE(fy.check.passed) << m.description() << " " << fy.check.witness;
    std::vector<std::pair<Vec, Vec>> pts;
    for (const auto& s : samples) pts.emplace_back(s.x, s.xi);
    const auto bi = check_biconjugation(m, pts, 1e-5);
    EXPECT_TRUE(bi.check.passed) << m.description() << " worst " << bi.worst_deviation;
    EXPECT_LE(bi.worst_deviation, 1e-5) << m.description();
    if (m.has_closed_form_conjugate()) {
      ConjugateSettings numeric;
      numeric.use_closed_form = false;
      const ConjugateEvaluator<NFunction> num(m, numeric);
      for (const auto& s : samples) {
        const double a = m.closed_form_conjugate(s.x, s.eta);
        const double b = num(s.x, s.eta);
        EXPECT_LE(std::abs(a - b) / std::max(1.0, std::abs(a)), 1e-6)
            << m.description() << " x=" << to_string(s.x) << " eta=" << to_string(s.eta);
      }
    }
  }
  EXPECT_LT(sw.seconds(), 30.0);
}

TEST(Acceptance, Criterion2_LuxemburgNorm) {
  const auto q = quadrature(kInterval, 16);
  const double vol = q->total_weight();
  Rng rng(202);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const NFunction m = constant_power(kInterval, p);
    for (double c : {0.05, 0.3, 1.0, 2.5, 7.0}) {
      // int |c / lambda|^p = 1 on a set of measure vol.
      const double root = c * std::pow(vol, 1.0 / p);
      EXPECT_NEAR(luxemburg_norm(m, DiscreteField::constant(q, Vec{c})).norm, root, 1e-9) << "p=" << p << " c=" << c;
      EXPECT_NEAR(luxemburg_norm(m, DiscreteField::constant(q, Vec{-c})).norm, root, 1e-9) << "p=" << p << " c=-" << c;
    }
    for (int k = 0; k < 50; ++k) {
      DiscreteField u = DiscreteField::constant(q, Vec{0.0});
      DiscreteField v = u;
      const double amp = log_uniform(rng, 0.1, 10.0);
      for (std::size_t i = 0; i < q->size(); ++i) {
        u.values[i] = Vec{uniform(rng, -amp, amp)};
        v.values[i] = Vec{uniform(rng, -amp, amp)};
      }
      const double t = uniform(rng, -5.0, 5.0);
      const double nu = luxemburg_norm(m, u).norm;
      const double nv = luxemburg_norm(m, v).norm;
      EXPECT_NEAR(luxemburg_norm(m, u * t).norm, std::abs(t) * nu, 1e-8) << "p=" << p << " pair " << k;
      EXPECT_LE(luxemburg_norm(m, u + v).norm, nu + nv + 1e-8) << "p=" << p << " pair " << k;
    }
  }
}

TEST(Acceptance, Criterion3_Balance) {
  const Stopwatch sw;
  const BalanceProbe probe;  // C_M = 2
  const std::vector<std::pair<std::string, NFunction>> passing{
      {"constant power", constant_power(kSquare, 3.0)},
      {"variable exponent", variable_exponent(kSquare, AffineExponent{2.0, Vec{0.5, 0.25}, 1.5, 3.0})},
      {"anisotropic variable", anisotropic_variable(kSquare, {AffineExponent{2.0, Vec{0.5, 0.0}, 2.0, 2.5},
                                                              AffineExponent{3.0, Vec{0.0, -0.5}, 2.5, 3.0}})}};
  for (const auto& [name, m] : passing) {
    Rng rng(303);
    const auto r = check_balance(m, probe, rng);
    EXPECT_TRUE(r.passed) << name;
    EXPECT_EQ(r.witnesses.size(), 0u) << name;
  }
  // a(x) = |x_1|^{1/2}, q/p = 2 > 1 + alpha/d.
  const NFunction dp = double_phase(kSquare, 2.0, 4.0, HolderWeight{0.0, 1.0, Vec{1.0, 0.0}, Vec{0.0, 0.0}, 0.5});
  Rng rng(303);
  const auto r = check_balance(dp, probe, rng);
  EXPECT_FALSE(r.passed);
  EXPECT_GE(r.witnesses.size(), 1u);
  EXPECT_LT(sw.seconds(), 60.0);
}

TEST(Acceptance, Criterion4_Structure) {
  Rng rng(404);
  const auto q = quadrature(kSquare, 4);
  for (const auto& m : catalog()) {
    const VectorFieldA a = canonical_operator(m, 0.0, rng);
    const auto rep = validate_structure(zero_data(a), *q, rng);
    for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << m.description() << ": " << c.name << " " << c.witness;
    const auto g = check_gradient_consistency(a, rng, 100, 1e-6);
    EXPECT_EQ(g.samples, 100u);
    EXPECT_TRUE(g.passed) << m.description() << " " << g.witness;
  }
  auto op = zero_data(p_laplacian(kInterval, 2.0, rng));
  op.b = LowerOrderB{BKind::linear, -1.0, 1.0, Vec{}};
  const auto rep = validate_structure(op, *quadrature(kInterval, 8), rng);
  EXPECT_FALSE(rep.passed());
}

// Independent oracle for the 1D P1 system with A(xi) = |xi| xi, Phi = b = 0:
// interior equations force A(g_c) - Fbar_c = kappa on every cell c, where g_c
// is the cell slope and Fbar_c the cell mean of F, and u(1) = 0 gives
// sum_c g_c = 0. kappa is found by bisection; the means use a dense grid.
std::vector<double> p3_oracle(const std::function<double(double)>& f, int n) {
  const double h = 1.0 / n;
  const int dense = 4000;
  std::vector<double> fbar(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    double s = 0.0;  // composite Simpson
    for (int k = 0; k <= dense; ++k) {
      const double w = (k == 0 || k == dense) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      s += w * f(c * h + h * k / dense);
    }
    fbar[static_cast<std::size_t>(c)] = s / (3.0 * dense);
  }
  auto ainv = [](double t) { return std::copysign(std::sqrt(std::abs(t)), t); };
  auto total = [&](double kappa) {
    double s = 0.0;
    for (double fb : fbar) s += ainv(kappa + fb);
    return s;
  };
  double lo = -1.0, hi = 1.0;
  while (total(lo) > 0.0) lo *= 2.0;
  while (total(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > 0.0 ? hi : lo) = mid;
  }
  const double kappa = 0.5 * (lo + hi);
  std::vector<double> nodes;
  double u = 0.0;
  for (int c = 0; c + 1 < n; ++c) {
    u += h * ainv(kappa + fbar[static_cast<std::size_t>(c)]);
    nodes.push_back(u);
  }
  return nodes;
}

TEST(Acceptance, Criterion5_ManufacturedConvergence) {
  const Stopwatch sw;
  Rng rng(505);
  {
    auto op = zero_data(p_laplacian(kInterval, 2.0, rng));
    op.f = manufactured_source(op.a, op.phi, "sine");
    const auto rep = convergence_study(op, {"interval", kInterval}, {8, 16, 32, 64});
    ASSERT_TRUE(rep.l2_slope.has_value());
    EXPECT_NEAR(*rep.l2_slope, 2.0, 0.2);
  }
  {
    auto op = zero_data(p_laplacian(kInterval, 3.0, rng));
    op.f = manufactured_source(op.a, op.phi, "bubble");
    const auto sys = make_system(basis(kInterval, 32), op);
    const auto sol = solve_galerkin(sys);
    ASSERT_TRUE(sol.converged);
    const auto oracle = p3_oracle([](double x) { return std::abs(1.0 - 2.0 * x) * (1.0 - 2.0 * x); }, 32);
    ASSERT_EQ(oracle.size(), sol.alpha.size());
    double sup = 0.0;
    for (std::size_t k = 0; k < oracle.size(); ++k) {
      ASSERT_NEAR(sys.basis->mesh()->vertex(sys.basis->vertex_of_dof(k))[0], (k + 1) / 32.0, 1e-15);
      sup = std::max(sup, std::abs(sol.alpha[k] - oracle[k]));
    }
    EXPECT_LE(sup, 1e-6);
  }
  EXPECT_LT(sw.seconds(), 120.0);
}

TEST(Acceptance, Criterion6_LemmaDiagnostics) {
  Rng rng(606);
  SourceF f1;
  f1.terms.push_back({0, 1.0, {{SourceFactor::cos, 1.0}}});
  SourceF f2;
  f2.dim = 2;
  f2.terms.push_back({0, 0.5, {{SourceFactor::cos, 1.0}, {SourceFactor::sin, 1.0}}});
  f2.terms.push_back({1, -2.0, {{SourceFactor::power, 1.0}, {SourceFactor::power, 2.0}}});
  struct Case {
    std::string label;
    StructuredOperator op;
    int resolution;
  };
  std::vector<Case> cases;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    auto op = zero_data(p_laplacian(kInterval, p, rng));
    op.f = f1;
    op.phi = ConvectionPhi{{PhiKind::sin}, {0.1}};
    op.b = LowerOrderB{BKind::arctan, 1.0, 1.0, Vec{}};
    for (int n : {8, 32}) cases.push_back({"1D p=" + format_short(p), op, n});
  }
  for (const auto& m : catalog()) {
    auto op = zero_data(canonical_operator(m, 0.0, rng));
    op.f = f2;
    op.phi = ConvectionPhi{{PhiKind::sin, PhiKind::cos}, {0.1, 0.1}};
    op.b = LowerOrderB{BKind::cubic, 1.0, 1.0, Vec{}};
    cases.push_back({m.description(), op, 6});
  }
  for (const auto& c : cases) {
    const auto sys = make_system(basis(c.op.domain(), c.resolution), c.op);
    const auto sol = solve_galerkin(sys);
    EXPECT_TRUE(sol.converged) << c.label;
    expect_lemmas(sys, sol, c.label + " at " + std::to_string(c.resolution));
  }
}

TEST(Acceptance, Criterion7_DoublePhase2D) {
  const Stopwatch sw;
  Rng rng(707);
  auto op = zero_data(canonical_operator(double_phase(kSquare, 2.0, 3.0, HolderWeight::linear(Vec{1.0, 0.0}), 1.0, true),
                                         0.0, rng));
  op.phi = ConvectionPhi{{PhiKind::sin, PhiKind::cos}, {0.1, 0.1}};
  op.b = LowerOrderB{BKind::arctan, 1.0, 1.0, Vec{}};
  op.f.terms.push_back({0, 0.5, {{SourceFactor::cos, 1.0}, {SourceFactor::sin, 1.0}}});
  const auto rep = convergence_study(op, {"rectangle", kSquare}, {4, 8, 16});
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.witness;
  EXPECT_GT(rep.witnessing_lambda, 0.0);
  EXPECT_LT(panel_residual(rep.levels.back()), panel_residual(rep.levels.front()));
  EXPECT_LT(sw.seconds(), 300.0);
}

TEST(Acceptance, Criterion8_Uniqueness) {
  Rng rng(808);
  auto op = zero_data(p_laplacian(kInterval, 3.0, rng));
  op.phi = ConvectionPhi{{PhiKind::sin}, {0.1}};
  op.b = LowerOrderB{BKind::linear, 1.0, 1.0, Vec{}};
  op.f.terms.push_back({0, 1.0, {{SourceFactor::cos, 1.0}}});
  ASSERT_TRUE(op.b.strictly_increasing(op.domain()));
  const auto sys = make_system(basis(kInterval, 32), op);
  std::vector<double> start(sys.size());
  for (double& v : start) v = uniform(rng, -1.0, 1.0);
  const auto s1 = solve_galerkin(sys);
  const auto s2 = solve_galerkin(sys, start);
  const auto r = uniqueness_probe(sys, s1, s2, {0.5, 0.1, 0.02}, 1e-10);
  EXPECT_LE(r.sup_difference, 1e-8);
  ASSERT_EQ(r.levels.size(), 3u);
  for (const auto& lv : r.levels) EXPECT_GE(lv.j1, -1e-10) << "delta=" << lv.delta;
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.witness;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Acceptance, Criterion9_Reproducibility) {
  ASSERT_FALSE(g_cli.empty()) << "no CLI path given";
  const fs::path root = fs::path(g_scratch) / "reproducibility";
  fs::remove_all(root);
  const std::string cfg = g_configs + "/converge_2d_double_phase.json";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = "\"" + g_cli + "\" converge --config \"" + cfg + "\" --seed 2027 --quiet --out \"" +
                            (root / run).string() + "\"";
    ASSERT_EQ(std::system(cmd.c_str()), 0) << cmd;
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    if (e.path().extension() != ".csv") continue;
    const auto other = root / "b" / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
    ++compared;
  }
  EXPECT_GE(compared, 4u);
}

// Collects per-criterion verdicts and prints them after the run.
class CriterionPrinter : public ::testing::EmptyTestEventListener {
 public:
  void OnTestEnd(const ::testing::TestInfo& info) override {
    const std::string name = info.name();
    if (name.rfind("Criterion", 0) != 0) return;
    const int k = std::stoi(name.substr(9));
    verdict_[k] = {info.result()->Passed(), static_cast<double>(info.result()->elapsed_time()) / 1000.0};
  }

  void OnTestProgramEnd(const ::testing::UnitTest&) override {
    std::cout << "\n";
    for (int k = 1; k <= 9; ++k) {
      const auto it = verdict_.find(k);
      if (it == verdict_.end()) {
        std::cout << "criterion " << k << ": FAIL (not run)\n";
        continue;
      }
      std::cout << "criterion " << k << ": " << (it->second.first ? "PASS" : "FAIL") << " ("
                << format_short(it->second.second, 3) << " s)\n";
    }
    std::cout.flush();
  }

 private:
  std::map<int, std::pair<bool, double>> verdict_;
};

}  // namespace
}  // namespace musielak

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  if (argc > 1) musielak::g_cli = argv[1];
  if (argc > 2) musielak::g_configs = argv[2];
  musielak::g_scratch = argc > 3 ? argv[3] : std::filesystem::temp_directory_path().string();
  ::testing::UnitTest::GetInstance()->listeners().Append(new musielak::CriterionPrinter);
  return RUN_ALL_TESTS();
}
