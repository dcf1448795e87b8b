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

#include <gtest/gtest.h>

#include "musielak/modular.hpp"

namespace musielak {
namespace {

std::shared_ptr<const QuadraturePoints> unit_interval(int n) {
  return build_quadrature(std::make_shared<const Mesh>(build_mesh({"interval", Box::unit(1)}, n)));
}

std::shared_ptr<const QuadraturePoints> unit_square(int n) {
  return build_quadrature(std::make_shared<const Mesh>(build_mesh({"rectangle", Box::unit(2)}, n)));
}

TEST(Modular, Examples) {
  const auto q = unit_interval(8);
  const auto m = constant_power(Box::unit(1), 2.0);
  EXPECT_EQ(modular(m, DiscreteField::constant(q, Vec{0.0})), 0.0);
  EXPECT_NEAR(modular(m, DiscreteField::constant(q, Vec{2.0})), 4.0, 1e-14);
  const auto q2 = unit_square(4);
  const auto dp = double_phase(Box::unit(2), 2.0, 3.0, HolderWeight::linear(Vec{1.0, 0.0}));
  EXPECT_NEAR(modular(dp, DiscreteField::constant(q2, Vec{1.0, 0.0})), 1.5, 1e-14);
}

TEST(Luxemburg, Examples) {
  const auto q = unit_interval(8);
  const auto m = constant_power(Box::unit(1), 2.0);
  EXPECT_NEAR(luxemburg_norm(m, DiscreteField::constant(q, Vec{2.0})).norm, 2.0, 1e-12);
  EXPECT_NEAR(luxemburg_norm(m, DiscreteField::constant(q, Vec{0.5})).norm, 0.5, 1e-12);
  EXPECT_EQ(luxemburg_norm(m, DiscreteField::constant(q, Vec{0.0})).norm, 0.0);
}

TEST(Luxemburg, ModularAtNormIsOne) {
  Rng rng(4);
  const auto q = unit_square(6);
  const auto dp = double_phase(Box::unit(2), 2.0, 3.5, HolderWeight::linear(Vec{1.0, 1.0}));
  for (int k = 0; k < 5; ++k) {
    const double a = log_uniform(rng, 0.01, 100.0);
    const auto f = DiscreteField::from_function(q, 2, [&](const Vec& x) { return Vec{a * x[0], a * std::sin(3 * x[1])}; });
    const auto r = luxemburg_norm(dp, f);
    EXPECT_LE(r.modular_at_norm, 1.0 + 1e-12);
    EXPECT_GE(r.modular_at_norm, 1.0 - 1e-9);
  }
}

TEST(Luxemburg, HomogeneityAndTriangle) {
  Rng rng(8);
  const auto q = unit_interval(16);
  const auto m = variable_exponent(Box::unit(1), AffineExponent{1.5, Vec{2.0}, 1.5, 3.5});
  for (int k = 0; k < 10; ++k) {
    const double a = uniform(rng, -3, 3);
    const double b = uniform(rng, -3, 3);
    const auto f = DiscreteField::from_function(q, 1, [&](const Vec& x) { return Vec{a * std::cos(5 * x[0]) + b}; });
    const auto g = DiscreteField::from_function(q, 1, [&](const Vec& x) { return Vec{b * x[0] * x[0] - a}; });
    const double nf = luxemburg_norm(m, f).norm;
    const double ng = luxemburg_norm(m, g).norm;
    const double c = uniform(rng, -5, 5);
    EXPECT_NEAR(luxemburg_norm(m, f * c).norm, std::abs(c) * nf, 1e-8 * std::max(1.0, std::abs(c) * nf));
    EXPECT_LE(luxemburg_norm(m, f + g).norm, (nf + ng) * (1 + 1e-8));
  }
}

TEST(ModularNormComparison, Examples) {
  const auto q = unit_interval(8);
  const auto m = constant_power(Box::unit(1), 2.0);
  const auto big = check_modular_norm_comparison(m, DiscreteField::constant(q, Vec{2.0}));
  EXPECT_TRUE(big.check.passed);
  EXPECT_FALSE(big.unit_ball);
  EXPECT_NEAR(big.modular, 4.0, 1e-14);
  const auto small = check_modular_norm_comparison(m, DiscreteField::constant(q, Vec{0.5}));
  EXPECT_TRUE(small.check.passed);
  EXPECT_TRUE(small.unit_ball);
  EXPECT_NEAR(small.modular, 0.25, 1e-14);
  const auto zero = check_modular_norm_comparison(m, DiscreteField::constant(q, Vec{0.0}));
  EXPECT_TRUE(zero.check.passed);
  EXPECT_EQ(zero.norm, 0.0);
}

TEST(ModularDistance, Examples) {
  const auto q = unit_interval(8);
  const auto m = constant_power(Box::unit(1), 2.0);
  const auto two = DiscreteField::constant(q, Vec{2.0});
  const auto one = DiscreteField::constant(q, Vec{1.0});
  EXPECT_EQ(modular_distance(m, two, two, 0.3), 0.0);
  EXPECT_NEAR(modular_distance(m, two, one, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(modular_distance(m, two, one, 2.0), 0.25, 1e-14);
  EXPECT_THROW(modular_distance(m, two, one, 0.0), InvalidParameter);
}

// Property: modular grows along rays.
TEST(Modular, MonotoneUnderScaling) {
  const auto q = unit_square(4);
  const auto m = anisotropic_variable(Box::unit(2), {AffineExponent{2.0, Vec{1.0, 0.0}, 2.0, 3.0},
                                                     AffineExponent::constant(1.5)});
  const auto f = DiscreteField::from_function(q, 2, [](const Vec& x) { return Vec{x[0] - 0.3, 2 * x[1]}; });
  double prev = 0.0;
  for (double s : {0.1, 0.5, 1.0, 2.0, 8.0}) {
    const double v = modular(m, f * s);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(UniformIntegrability, Examples) {
  const auto q = unit_interval(144);
  const auto m = constant_power(Box::unit(1), 2.0);
  const std::vector<double> levels{0.1, 0.01, 0.001};
  const auto zero = uniform_integrability_probe(m, {DiscreteField::constant(q, Vec{0.0})}, levels);
  for (double v : zero.sup_integral) EXPECT_EQ(v, 0.0);

  const auto c = uniform_integrability_probe(m, {DiscreteField::constant(q, Vec{3.0})}, levels);
  for (std::size_t i = 0; i < levels.size(); ++i) EXPECT_NEAR(c.sup_integral[i], 3.0 * levels[i], 1e-12);

  // xi_n = n on (0, 1/n^2): modular 1, small-set integral min(delta, 1/n^2) n.
  std::vector<DiscreteField> family;
  for (int n : {2, 3, 4})
    family.push_back(DiscreteField::from_function(q, 1, [n](const Vec& x) { return Vec{x[0] < 1.0 / (n * n) ? n : 0.0}; }));
  const auto r = uniform_integrability_probe(m, family, {0.25, 0.05, 0.001});
  EXPECT_NEAR(r.sup_modular, 1.0, 1e-12);
  EXPECT_NEAR(r.sup_integral[0], 1.0 / 2.0, 1e-12);
  EXPECT_NEAR(r.sup_integral[1], 0.05 * 4, 1e-12);
  EXPECT_NEAR(r.sup_integral[2], 0.001 * 4, 1e-12);
  EXPECT_TRUE(r.monotone.passed);
}

TEST(Truncation, Examples) {
  const auto q = unit_interval(8);
  const auto five = truncate(DiscreteField::constant(q, Vec{5.0}), 3.0);
  for (std::size_t k = 0; k < five.size(); ++k) EXPECT_EQ(five.scalar(k), 3.0);
  const auto id = DiscreteField::from_function(q, 1, [](const Vec& x) { return Vec{x[0]}; });
  const auto half = truncate(id, 0.5);
  for (std::size_t k = 0; k < half.size(); ++k) EXPECT_EQ(half.scalar(k), std::min(q->x[k][0], 0.5));
  const auto same = truncate(id, 1.0);
  for (std::size_t k = 0; k < same.size(); ++k) EXPECT_EQ(same.scalar(k), id.scalar(k));
  EXPECT_THROW(truncate(id, 0.0), InvalidParameter);
}

}  // namespace
}  // namespace musielak
