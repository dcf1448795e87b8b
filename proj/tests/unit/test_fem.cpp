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

#include "musielak/basis.hpp"
#include "musielak/sampling.hpp"

namespace musielak {
namespace {

std::shared_ptr<const Mesh> mesh(const std::string& kind, int n) {
  return std::make_shared<const Mesh>(build_mesh({kind, Box::unit(kind == "interval" ? 1 : 2)}, n));
}

double total_volume(const Mesh& m) {
  double v = 0.0;
  for (std::size_t c = 0; c < m.cell_count(); ++c) v += m.cell_volume(c);
  return v;
}

std::size_t interior(const Mesh& m) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < m.vertex_count(); ++i) n += m.is_boundary(i) ? 0 : 1;
  return n;
}

TEST(Mesh, CountingExamples) {
  const auto a = mesh("interval", 4);
  EXPECT_EQ(a->cell_count(), 4u);
  EXPECT_EQ(interior(*a), 3u);
  EXPECT_DOUBLE_EQ(a->h(), 0.25);
  EXPECT_NEAR(total_volume(*a), 1.0, 1e-15);
  const auto b = mesh("rectangle", 2);
  EXPECT_EQ(b->cell_count(), 8u);
  EXPECT_EQ(interior(*b), 1u);
  EXPECT_NEAR(total_volume(*b), 1.0, 1e-15);
}

TEST(Mesh, Errors) {
  EXPECT_THROW(build_mesh({"disk", Box::unit(2)}, 4), UnsupportedDomain);
  EXPECT_THROW(build_mesh({"interval", Box::unit(1)}, 1), InvalidParameter);
}

TEST(Mesh, LocateReturnsContainingCell) {
  const auto m = mesh("rectangle", 5);
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const Vec x = random_point(rng, Box::unit(2));
    const auto loc = m->locate(x);
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
      EXPECT_GE(loc.lambda[a], -1e-12);
      s += loc.lambda[a];
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_NEAR(norm(m->map_to_cell(loc.cell, loc.lambda) - x), 0.0, 1e-12);
  }
}

// Exactness on monomials up to the rule order, checked on the unit interval and square.
TEST(Quadrature, PolynomialExactness) {
  const auto q1 = build_quadrature(mesh("interval", 3));
  for (int k = 0; k <= 9; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < q1->size(); ++i) s += q1->weight[i] * std::pow(q1->x[i][0], k);
    EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << k;
  }
  const auto q2 = build_quadrature(mesh("rectangle", 3));
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; i + j <= 5; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < q2->size(); ++k) s += q2->weight[k] * std::pow(q2->x[k][0], i) * std::pow(q2->x[k][1], j);
      EXPECT_NEAR(s, 1.0 / ((i + 1) * (j + 1)), 1e-14) << i << "," << j;
    }
  EXPECT_NEAR(build_quadrature(mesh("rectangle", 3), 4)->total_weight(), 1.0, 1e-13);
}

TEST(Basis, InterpolationExamples) {
  const auto m = mesh("interval", 2);
  const BasisSet basis(m);
  ASSERT_EQ(basis.size(), 1u);
  const auto [u0, g0] = basis.interpolate({0.0});
  for (std::size_t k = 0; k < u0.size(); ++k) {
    EXPECT_EQ(u0.scalar(k), 0.0);
    EXPECT_EQ(g0.scalar(k), 0.0);
  }
  EXPECT_DOUBLE_EQ(basis.value({1.0}, Vec{0.5}), 1.0);
  EXPECT_DOUBLE_EQ(basis.gradient({1.0}, Vec{0.25})[0], 2.0);
  EXPECT_DOUBLE_EQ(basis.gradient({1.0}, Vec{0.75})[0], -2.0);
}

TEST(Basis, Linearity) {
  const auto m = mesh("rectangle", 4);
  const BasisSet basis(m);
  Rng rng(2);
  std::vector<double> a(basis.size());
  for (double& v : a) v = uniform(rng, -1, 1);
  std::vector<double> a2 = a;
  for (double& v : a2) v *= 2.0;
  const auto [u, g] = basis.interpolate(a);
  const auto [u2, g2] = basis.interpolate(a2);
  for (std::size_t k = 0; k < u.size(); ++k) {
    EXPECT_NEAR(u2.scalar(k), 2.0 * u.scalar(k), 1e-14);
    EXPECT_NEAR(norm(g2.values[k] - g.values[k] * 2.0), 0.0, 1e-13);
  }
}

// Interior plus boundary hats sum to one: the interior hats alone equal
// one minus the boundary hats, which is 1 at the interior vertices.
TEST(Basis, PartitionOfUnity) {
  for (const std::string kind : {"interval", "rectangle"}) {
    const auto m = mesh(kind, 4);
    const BasisSet basis(m);
    const auto& q = *basis.quadrature();
    const auto [u, g] = basis.interpolate(std::vector<double>(basis.size(), 1.0));
    for (std::size_t k = 0; k < q.size(); ++k) {
      double boundary = 0.0;
      const auto& cell = m->cell(q.cell[k]);
      for (int a = 0; a < m->vertices_per_cell(); ++a)
        if (m->is_boundary(static_cast<std::size_t>(cell[a]))) boundary += q.lambda[k][a];
      EXPECT_NEAR(u.scalar(k) + boundary, 1.0, 1e-14);
    }
  }
}

TEST(Basis, MassMatrixMatchesHandAssembly) {
  const auto m = mesh("interval", 4);
  const BasisSet basis(m);
  const auto mm = basis.mass_matrix();
  const double h = 0.25;
  EXPECT_NEAR(mm.coeff(0, 0), 2.0 * h / 3.0, 1e-15);
  EXPECT_NEAR(mm.coeff(0, 1), h / 6.0, 1e-15);
  EXPECT_NEAR(mm.coeff(0, 2), 0.0, 1e-15);
}

TEST(Mesh, CsvRecordsVerticesAndCells) {
  const auto m = mesh("rectangle", 2);
  std::ostringstream os;
  write_mesh_csv(os, *m);
  const auto s = os.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), 1 + 9 + 8u);
  EXPECT_NE(s.find("vertex,4,0.5,0.5,,0"), std::string::npos);
}

// |u(x)| <= (1/2) int |d_1 u| along each line, so ||u||_1 <= ||grad u||_1 / 2
// on the unit interval and square, at every resolution.
TEST(Basis, PoincareInL1) {
  Rng rng(9);
  for (const std::string kind : {"interval", "rectangle"}) {
    double worst_prev = 0.0;
    for (int n : {4, 8, 16}) {
      const BasisSet basis(mesh(kind, n));
      const auto& q = *basis.quadrature();
      double worst = 0.0;
      for (int k = 0; k < 100; ++k) {
        std::vector<double> a(basis.size());
        for (double& v : a) v = uniform(rng, -1, 1);
        const auto [u, g] = basis.interpolate(a);
        double lu = 0.0, lg = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
          lu += q.weight[i] * std::abs(u.scalar(i));
          lg += q.weight[i] * norm(g.values[i]);
        }
        worst = std::max(worst, lu / lg);
      }
      EXPECT_LE(worst, 0.5 + 1e-12) << kind << " n=" << n;
      if (worst_prev > 0.0) {
        EXPECT_GT(worst, 0.25 * worst_prev);
      }
      worst_prev = worst;
    }
  }
}

}  // namespace
}  // namespace musielak
