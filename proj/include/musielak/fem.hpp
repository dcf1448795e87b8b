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
#include <cstddef>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "musielak/errors.hpp"
#include "musielak/format.hpp"
#include "musielak/vec.hpp"

namespace musielak {

/// "interval" (d = 1) or "rectangle" (d = 2) with the given corners.
struct DomainSpec {
  std::string kind = "interval";
  Box box = Box::unit(1);
};

/// Structured simplicial mesh of an interval or rectangle. In 2D every
/// axis-aligned cell is split along its main diagonal into two triangles.
class Mesh {
 public:
  [[nodiscard]] int dim() const { return domain_.dim(); }
  [[nodiscard]] const Box& domain() const { return domain_; }
  [[nodiscard]] int resolution() const { return resolution_; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] int vertices_per_cell() const { return dim() + 1; }

  [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
  [[nodiscard]] std::size_t cell_count() const { return cells_.size(); }
  [[nodiscard]] const Vec& vertex(std::size_t i) const { return vertices_[i]; }
  [[nodiscard]] bool is_boundary(std::size_t i) const { return boundary_[i]; }
  [[nodiscard]] const std::array<int, 3>& cell(std::size_t c) const { return cells_[c]; }

  [[nodiscard]] double cell_volume(std::size_t c) const {
    const auto& v = cells_[c];
    if (dim() == 1) return std::abs(vertices_[v[1]][0] - vertices_[v[0]][0]);
    const Vec a = vertices_[v[1]] - vertices_[v[0]];
    const Vec b = vertices_[v[2]] - vertices_[v[0]];
    return 0.5 * std::abs(a[0] * b[1] - a[1] * b[0]);
  }

  /// Point with the given barycentric coordinates in cell c.
  [[nodiscard]] Vec map_to_cell(std::size_t c, const std::array<double, 3>& lambda) const {
    Vec x = Vec::zero(dim());
    for (int a = 0; a < vertices_per_cell(); ++a) x += vertices_[cells_[c][a]] * lambda[a];
    return x;
  }

  struct Location {
    std::size_t cell;
    std::array<double, 3> lambda;
  };

  /// Cell containing x and the barycentric coordinates of x in it.
  [[nodiscard]] Location locate(const Vec& x) const {
    if (!domain_.contains(x, 1e-12)) throw DomainViolation("Mesh::locate: " + to_string(x) + " outside the mesh");
    const int n = resolution_;
    auto index = [&](int axis) {
      const double t = (x[axis] - domain_.lower[axis]) / domain_.extent(axis) * n;
      return std::clamp(static_cast<int>(std::floor(t)), 0, n - 1);
    };
    if (dim() == 1) {
      const int i = index(0);
      const double x0 = vertices_[static_cast<std::size_t>(i)][0];
      const double x1 = vertices_[static_cast<std::size_t>(i + 1)][0];
      const double l1 = (x[0] - x0) / (x1 - x0);
      return {static_cast<std::size_t>(i), {1.0 - l1, l1, 0.0}};
    }
    const int i = index(0);
    const int j = index(1);
    const double s = (x[0] - domain_.lower[0]) / domain_.extent(0) * n - i;
    const double t = (x[1] - domain_.lower[1]) / domain_.extent(1) * n - j;
    const std::size_t base = 2 * static_cast<std::size_t>(j * n + i);
    // Lower triangle (v00, v10, v11) holds s >= t.
    if (s >= t) return {base, {1.0 - s, s - t, t}};
    return {base + 1, {1.0 - t, s, t - s}};
  }

  friend Mesh build_mesh(const DomainSpec& spec, int resolution);

 private:
  Box domain_;
  int resolution_ = 0;
  double h_ = 0.0;
  std::vector<Vec> vertices_;
  std::vector<bool> boundary_;
  std::vector<std::array<int, 3>> cells_;
};

inline Mesh build_mesh(const DomainSpec& spec, int resolution) {
  if (resolution < 2) throw InvalidParameter("build_mesh: resolution must be at least 2");
  Mesh m;
  m.resolution_ = resolution;
  m.domain_ = spec.box;
  const int n = resolution;
  if (spec.kind == "interval") {
    if (spec.box.dim() != 1) throw DimensionMismatch("build_mesh: interval needs a 1D box");
    for (int i = 0; i <= n; ++i) {
      const double x = i == n ? spec.box.upper[0] : spec.box.lower[0] + spec.box.extent(0) * i / n;
      m.vertices_.push_back(Vec{x});
      m.boundary_.push_back(i == 0 || i == n);
    }
    for (int i = 0; i < n; ++i) m.cells_.push_back({i, i + 1, 0});
    m.h_ = spec.box.extent(0) / n;
    return m;
  }
  if (spec.kind == "rectangle") {
    if (spec.box.dim() != 2) throw DimensionMismatch("build_mesh: rectangle needs a 2D box");
    auto coord = [&](int axis, int i) {
      return i == n ? spec.box.upper[axis] : spec.box.lower[axis] + spec.box.extent(axis) * i / n;
    };
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        m.vertices_.push_back(Vec{coord(0, i), coord(1, j)});
        m.boundary_.push_back(i == 0 || i == n || j == 0 || j == n);
      }
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        m.cells_.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
        m.cells_.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      }
    m.h_ = std::hypot(spec.box.extent(0) / n, spec.box.extent(1) / n);
    return m;
  }
  throw UnsupportedDomain("build_mesh: unsupported domain kind '" + spec.kind + "' (interval, rectangle)");
}

/// Vertices, cells and boundary flags as one CSV table.
inline void write_mesh_csv(std::ostream& os, const Mesh& m) {
  write_csv_row(os, {"record", "index", "a", "b", "c", "boundary"});
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    const Vec& v = m.vertex(i);
    write_csv_row(os, {"vertex", std::to_string(i), format_double(v[0]), m.dim() > 1 ? format_double(v[1]) : "", "",
                       m.is_boundary(i) ? "1" : "0"});
  }
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    const auto& v = m.cell(c);
    write_csv_row(os, {"cell", std::to_string(c), std::to_string(v[0]), std::to_string(v[1]),
                       m.dim() > 1 ? std::to_string(v[2]) : "", ""});
  }
}

/// Reference rule in barycentric coordinates; weights sum to one.
struct QuadratureRule {
  std::vector<std::array<double, 3>> lambda;
  std::vector<double> weights;
  int order = 0;
};

/// 5-point Gauss-Legendre on the unit interval (exact to degree 9).
inline QuadratureRule gauss_legendre_5() {
  static constexpr double kNodes[] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                      0.9061798459386640};
  static constexpr double kWeights[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                        0.2369268850561891, 0.2369268850561891};
  QuadratureRule r;
  r.order = 9;
  for (int k = 0; k < 5; ++k) {
    const double t = 0.5 * (1.0 + kNodes[k]);
    r.lambda.push_back({1.0 - t, t, 0.0});
    r.weights.push_back(0.5 * kWeights[k]);
  }
  return r;
}

/// Symmetric 7-point rule on triangles (exact to degree 5).
inline QuadratureRule triangle_7() {
  const double s15 = std::sqrt(15.0);
  const double a1 = (9.0 - 2.0 * s15) / 21.0;
  const double b1 = (6.0 + s15) / 21.0;
  const double a2 = (9.0 + 2.0 * s15) / 21.0;
  const double b2 = (6.0 - s15) / 21.0;
  const double w1 = (155.0 + s15) / 1200.0;
  const double w2 = (155.0 - s15) / 1200.0;
  QuadratureRule r;
  r.order = 5;
  r.lambda = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
              {a2, b2, b2},               {b2, a2, b2}, {b2, b2, a2}};
  r.weights = {0.225, w1, w1, w1, w2, w2, w2};
  return r;
}

inline QuadratureRule default_rule(int dim) { return dim == 1 ? gauss_legendre_5() : triangle_7(); }

/// Splits the reference cell into s (1D) or s^2 (2D) congruent pieces and
/// applies `base` on each.
inline QuadratureRule subdivided(const QuadratureRule& base, int dim, int s) {
  if (s <= 1) return base;
  QuadratureRule r;
  r.order = base.order;
  auto push = [&](const std::array<std::array<double, 3>, 3>& corners, double scale) {
    for (std::size_t q = 0; q < base.weights.size(); ++q) {
      std::array<double, 3> l{0.0, 0.0, 0.0};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) l[b] += base.lambda[q][a] * corners[a][b];
      r.lambda.push_back(l);
      r.weights.push_back(base.weights[q] * scale);
    }
  };
  if (dim == 1) {
    for (int i = 0; i < s; ++i) {
      const double t0 = static_cast<double>(i) / s;
      const double t1 = static_cast<double>(i + 1) / s;
      push({{{1.0 - t0, t0, 0.0}, {1.0 - t1, t1, 0.0}, {0.0, 0.0, 0.0}}}, 1.0 / s);
    }
    return r;
  }
  // Lattice point (i, j) has reference coordinates (i/s, j/s).
  auto lat = [s](int i, int j) -> std::array<double, 3> {
    const double u = static_cast<double>(i) / s;
    const double v = static_cast<double>(j) / s;
    return {1.0 - u - v, u, v};
  };
  const double scale = 1.0 / (static_cast<double>(s) * s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i + j < s; ++i) {
      push({lat(i, j), lat(i + 1, j), lat(i, j + 1)}, scale);
      if (i + j + 1 < s) push({lat(i + 1, j), lat(i + 1, j + 1), lat(i, j + 1)}, scale);
    }
  return r;
}

/// Physical quadrature points of a mesh, grouped by cell in cell order.
struct QuadraturePoints {
  std::shared_ptr<const Mesh> mesh;
  QuadratureRule rule;
  std::vector<Vec> x;
  std::vector<double> weight;
  std::vector<std::size_t> cell;
  std::vector<std::array<double, 3>> lambda;
  /// Points of cell c are [first[c], first[c + 1]).
  std::vector<std::size_t> first;

  [[nodiscard]] std::size_t size() const { return x.size(); }
  [[nodiscard]] int dim() const { return mesh->dim(); }

  /// |Omega| up to rounding.
  [[nodiscard]] double total_weight() const {
    double s = 0.0;
    for (double w : weight) s += w;
    return s;
  }
};

inline std::shared_ptr<const QuadraturePoints> build_quadrature(std::shared_ptr<const Mesh> mesh,
                                                                const QuadratureRule& rule) {
  auto q = std::make_shared<QuadraturePoints>();
  q->rule = rule;
  const std::size_t per = rule.weights.size();
  q->x.reserve(mesh->cell_count() * per);
  for (std::size_t c = 0; c < mesh->cell_count(); ++c) {
    q->first.push_back(q->x.size());
    const double vol = mesh->cell_volume(c);
    for (std::size_t k = 0; k < per; ++k) {
      q->x.push_back(mesh->map_to_cell(c, rule.lambda[k]));
      q->weight.push_back(rule.weights[k] * vol);
      q->cell.push_back(c);
      q->lambda.push_back(rule.lambda[k]);
    }
  }
  q->first.push_back(q->x.size());
  q->mesh = std::move(mesh);
  return q;
}

inline std::shared_ptr<const QuadraturePoints> build_quadrature(std::shared_ptr<const Mesh> mesh, int subdivisions = 1) {
  const int d = mesh->dim();
  return build_quadrature(std::move(mesh), subdivided(default_rule(d), d, subdivisions));
}

}  // namespace musielak
