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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "musielak/study.hpp"

namespace musielak {
namespace {

StructuredOperator plaplace(int d, double p) {
  Rng rng(21);
  StructuredOperator op;
  op.a = p_laplacian(Box::unit(d), p, rng);
  op.phi = ConvectionPhi::zero(d);
  op.f.dim = d;
  return op;
}

TEST(Study, ZeroDataStaysZero) {
  const auto rep = convergence_study(plaplace(1, 3.0), {"interval", Box::unit(1)}, {4, 8, 16});
  ASSERT_EQ(rep.levels.size(), 3u);
  for (const auto& lv : rep.levels) {
    for (double a : lv.solution.alpha) EXPECT_EQ(a, 0.0);
    for (double w : lv.weak_form) EXPECT_EQ(w, 0.0);
    EXPECT_TRUE(lv.energy.passed());
    EXPECT_TRUE(lv.dual.check.passed);
    EXPECT_FALSE(lv.l2_error.has_value());
  }
  EXPECT_FALSE(rep.l2_slope.has_value());
  // Distances are identically zero, so nothing decreases strictly.
  EXPECT_EQ(rep.witnessing_lambda, 0.0);
}

TEST(Study, ResolutionScheduleIsValidated) {
  const auto op = plaplace(1, 2.0);
  EXPECT_THROW(convergence_study(op, {"interval", Box::unit(1)}, {4, 8}), PreconditionError);
  EXPECT_THROW(convergence_study(op, {"interval", Box::unit(1)}, {4, 8, 8}), PreconditionError);
}

TEST(Study, TruncationAboveSupIsIdentity) {
  auto op = plaplace(1, 2.0);
  op.f = manufactured_source(op.a, op.phi, "sine");
  const auto mesh = std::make_shared<const Mesh>(build_mesh({"interval", Box::unit(1)}, 16));
  const auto sys = make_system(std::make_shared<const BasisSet>(mesh), op);
  const auto sol = solve_galerkin(sys);
  const auto [u, grad] = solution_fields(sys, sol.alpha);
  EXPECT_EQ(modular_distance(op.a.m, truncate_gradient(u, grad, 2.0), grad, 1.0), 0.0);
  EXPECT_GT(modular_distance(op.a.m, truncate_gradient(u, grad, 0.5), grad, 1.0), 0.0);
}

TEST(Study, SineProblemConvergesAtSecondOrder) {
  auto op = plaplace(1, 2.0);
  op.f = manufactured_source(op.a, op.phi, "sine");
  const auto rep = convergence_study(op, {"interval", Box::unit(1)}, {8, 16, 32, 64});
  ASSERT_TRUE(rep.l2_slope.has_value());
  EXPECT_NEAR(*rep.l2_slope, 2.0, 0.2);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.witness;
  std::vector<double> hs, r1;
  for (const auto& lv : rep.levels) {
    hs.push_back(lv.h);
    r1.push_back(lv.weak_form.front());
  }
  // Galerkin orthogonality leaves only the interpolation error of the mode.
  EXPECT_GT(log_log_slope(hs, r1), 1.8);
}

TEST(Study, LogLogSlopeOfPowerLaw) {
  EXPECT_NEAR(log_log_slope({1.0, 0.5, 0.25}, {3.0, 0.75, 0.1875}), 2.0, 1e-12);
}

TEST(Study, CsvHasOneRowPerLevel) {
  auto op = plaplace(1, 2.0);
  op.f = manufactured_source(op.a, op.phi, "sine");
  const auto rep = convergence_study(op, {"interval", Box::unit(1)}, {4, 8, 16});
  std::ostringstream a, b;
  write_convergence_csv(a, rep);
  write_convergence_csv(b, rep);
  const auto s = a.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
  EXPECT_EQ(s, b.str());
}

// Distances shrink as lambda grows, at every level of a recorded study.
TEST(Study, ModularDistanceMonotoneInLambda) {
  Rng rng(22);
  StructuredOperator op;
  op.a = canonical_operator(double_phase(Box::unit(2), 2.0, 3.0, HolderWeight::linear(Vec{1.0, 0.0}), 1.0, true), 0.0, rng);
  op.phi = ConvectionPhi{{PhiKind::sin, PhiKind::cos}, {0.1, 0.1}};
  op.f.dim = 2;
  op.f.terms.push_back({0, 0.5, {{SourceFactor::cos, 1.0}, {SourceFactor::sin, 1.0}}});
  const auto rep = convergence_study(op, {"rectangle", Box::unit(2)}, {4, 8, 16});
  for (std::size_t i = 1; i < rep.levels.size(); ++i) {
    const auto& d = rep.levels[i].modular_dist_prev;
    ASSERT_EQ(d.size(), rep.lambdas.size());
    for (std::size_t l = 1; l < d.size(); ++l) EXPECT_LE(d[l], d[l - 1]) << "level " << i;
  }
}

}  // namespace
}  // namespace musielak
