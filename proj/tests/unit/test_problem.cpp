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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "musielak/problem.hpp"

namespace musielak {
namespace {

const Box kSquare = Box::unit(2);

std::shared_ptr<const QuadraturePoints> quad(const Box& box, int n) {
  const DomainSpec spec{box.dim() == 1 ? "interval" : "rectangle", box};
  return build_quadrature(std::make_shared<const Mesh>(build_mesh(spec, n)));
}

StructuredOperator zero_data(VectorFieldA a) {
  StructuredOperator op;
  const int d = a.m.dim();
  op.a = std::move(a);
  op.phi = ConvectionPhi::zero(d);
  op.f.dim = d;
  return op;
}

const PropertyCheck& find(const StructureReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check " + name);
}

TEST(Problem, PLaplacianCoercivityWithSqrtTwo) {
  Rng rng(1);
  auto a = p_laplacian(Box::unit(1), 2.0, rng);
  a.c1 = std::numbers::sqrt2;  // M(c1 xi) = |xi|^2 = A.xi
  const auto rep = validate_structure(zero_data(a), *quad(Box::unit(1), 8), rng);
  EXPECT_TRUE(find(rep, "A coercivity").passed);
  a.c1 = 2.0;  // M(2 xi) = 2 |xi|^2 > A.xi
  const auto bad = validate_structure(zero_data(a), *quad(Box::unit(1), 8), rng);
  EXPECT_FALSE(find(bad, "A coercivity").passed);
}

TEST(Problem, ZeroDataPasses) {
  Rng rng(2);
  const auto op = zero_data(p_laplacian(kSquare, 2.0, rng));
  const auto rep = validate_structure(op, *quad(kSquare, 4), rng);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.witness;
}

TEST(Problem, NegativeBIsRejectedAtSOne) {
  Rng rng(3);
  auto op = zero_data(p_laplacian(Box::unit(1), 2.0, rng));
  op.b = LowerOrderB{BKind::linear, -1.0, 1.0, Vec{}};
  const auto rep = validate_structure(op, *quad(Box::unit(1), 8), rng);
  EXPECT_FALSE(rep.passed());
  const auto& sign = find(rep, "b sign condition");
  EXPECT_FALSE(sign.passed);
  EXPECT_EQ(sign.witness.rfind("s=1 ", 0), 0u) << sign.witness;
}

TEST(Problem, CanonicalOperatorExamples) {
  Rng rng(4);
  const Vec x{0.25, 0.75};
  const Vec xi{1.5, -0.5};
  const auto lin = canonical_operator(constant_power(kSquare, 2.0, 1.0, true), 0.0, rng);
  EXPECT_NEAR(norm(lin(x, xi) - xi), 0.0, 1e-14);
  const auto cubic = canonical_operator(constant_power(kSquare, 3.0, 1.0, true), 0.0, rng);
  EXPECT_NEAR(norm(cubic(x, xi) - xi * norm(xi)), 0.0, 1e-13);
  const auto dp = canonical_operator(double_phase(kSquare, 2.0, 3.0, HolderWeight::linear(Vec{1.0, 0.0}), 1.0, true),
                                     0.0, rng);
  const Vec expect = xi + xi * (x[0] * norm(xi));
  EXPECT_NEAR(norm(dp(x, xi) - expect), 0.0, 1e-13);
}

TEST(Problem, GradientConsistencyAcrossCatalog) {
  Rng rng(5);
  const std::vector<NFunction> fams{
      constant_power(kSquare, 1.5, 1.0, true),
      variable_exponent(kSquare, AffineExponent{2.0, Vec{1.0, 0.0}, 1.5, 4.0}),
      double_phase(kSquare, 2.0, 3.0, HolderWeight::linear(Vec{1.0, 0.0})),
      anisotropic_variable(kSquare, {AffineExponent{2.0, Vec{0.5, 0.0}, 2.0, 2.5}, AffineExponent::constant(3.0)}),
      anisotropic_double_phase(kSquare, {2.0, 2.0}, {2.5, 3.0},
                               {HolderWeight::linear(Vec{1.0, 0.0}), HolderWeight::constant(0.5)}),
      quadratic_power(kSquare, {2.0, 0.5, 0.5, 1.0}, 0.3, 3.0)};
  for (const auto& m : fams) {
    const auto a = canonical_operator(m, 1e-3, rng);
    const auto c = check_gradient_consistency(a, rng);
    EXPECT_TRUE(c.passed) << m.description() << " " << c.witness;
  }
}

TEST(Problem, FitterFindsTightestGridConstants) {
  Rng rng(6);
  // A = xi, M = |xi|^2 / 2: A.xi = |xi|^2 >= M(c1 xi) holds for c1 = 1,
  // and M*(c3 A) = |xi|^2 / 2 <= M(xi) for c2 = c3 = c4 = 1.
  const auto a = p_laplacian(kSquare, 2.0, rng);
  EXPECT_EQ(a.c1, 1.0);
  EXPECT_EQ(a.c2, 1.0);
  EXPECT_EQ(a.c3, 1.0);
  EXPECT_EQ(a.c4, 1.0);
  EXPECT_EQ(a.h1, 0.0);
  EXPECT_EQ(a.h2, 0.0);
}

TEST(Problem, ManufacturedSourceReproducesOperator) {
  Rng rng(7);
  const auto a = p_laplacian(Box::unit(1), 3.0, rng);
  const ConvectionPhi phi{{PhiKind::sin}, {0.1}};
  const auto f = manufactured_source(a, phi, "bubble", 1.0);
  for (double t : {0.1, 0.5, 0.8}) {
    const double g = 1.0 - 2.0 * t;
    const double u = t * (1.0 - t);
    EXPECT_NEAR(f(Vec{t})[0], std::abs(g) * g + 0.1 * std::sin(u), 1e-14);
    EXPECT_NEAR(f.exact(Vec{t}), u, 1e-15);
  }
  EXPECT_THROW(exact_solution("cosine", Box::unit(1), 1.0), InvalidParameter);
}

TEST(Problem, ConvectionAndLowerOrderCatalog) {
  const ConvectionPhi phi{{PhiKind::arctan, PhiKind::cos}, {2.0, 0.5}};
  EXPECT_NEAR(phi.bound(), std::hypot(std::numbers::pi, 0.5), 1e-14);
  EXPECT_NEAR(phi.lipschitz(), std::hypot(2.0, 0.5), 1e-14);
  const LowerOrderB pw{BKind::piecewise, 1.0, 1.0, Vec{}};
  EXPECT_EQ(pw(Vec{0.5}, 0.5), 0.5);
  EXPECT_EQ(pw(Vec{0.5}, -3.0), -2.0);
  EXPECT_TRUE(pw.strictly_increasing(Box::unit(1)));
  EXPECT_FALSE((LowerOrderB{BKind::linear, -1.0, 1.0, Vec{}}).strictly_increasing(Box::unit(1)));
}

}  // namespace
}  // namespace musielak
