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

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "musielak/errors.hpp"
#include "musielak/fem.hpp"
#include "musielak/field.hpp"
#include "musielak/vec.hpp"

namespace musielak {

/// P1 hat functions w_1..w_n on the interior vertices, numbered in vertex order.
class BasisSet {
 public:
  explicit BasisSet(std::shared_ptr<const Mesh> mesh, std::shared_ptr<const QuadraturePoints> quad = nullptr)
      : mesh_(std::move(mesh)) {
    quad_ = quad ? std::move(quad) : build_quadrature(mesh_);
    if (quad_->mesh != mesh_) throw InvalidParameter("BasisSet: quadrature belongs to another mesh");
    dof_of_vertex_.assign(mesh_->vertex_count(), -1);
    for (std::size_t v = 0; v < mesh_->vertex_count(); ++v) {
      if (mesh_->is_boundary(v)) continue;
      dof_of_vertex_[v] = static_cast<int>(vertex_of_dof_.size());
      vertex_of_dof_.push_back(v);
    }
    cells_of_dof_.resize(vertex_of_dof_.size());
    grad_lambda_.reserve(mesh_->cell_count());
    for (std::size_t c = 0; c < mesh_->cell_count(); ++c) {
      grad_lambda_.push_back(barycentric_gradients(c));
      for (int a = 0; a < mesh_->vertices_per_cell(); ++a) {
        const int k = dof_of_vertex_[static_cast<std::size_t>(mesh_->cell(c)[a])];
        if (k >= 0) cells_of_dof_[static_cast<std::size_t>(k)].push_back(c);
      }
    }
  }

  [[nodiscard]] std::size_t size() const { return vertex_of_dof_.size(); }
  [[nodiscard]] int dim() const { return mesh_->dim(); }
  [[nodiscard]] const std::shared_ptr<const Mesh>& mesh() const { return mesh_; }
  [[nodiscard]] const std::shared_ptr<const QuadraturePoints>& quadrature() const { return quad_; }
  [[nodiscard]] int dof_of_vertex(std::size_t v) const { return dof_of_vertex_[v]; }
  [[nodiscard]] std::size_t vertex_of_dof(std::size_t k) const { return vertex_of_dof_[k]; }
  [[nodiscard]] const std::vector<std::size_t>& cells_of_dof(std::size_t k) const { return cells_of_dof_[k]; }

  /// Degree of freedom of each local vertex of cell c, -1 on the boundary.
  [[nodiscard]] std::array<int, 3> cell_dofs(std::size_t c) const {
    std::array<int, 3> out{-1, -1, -1};
    for (int a = 0; a < mesh_->vertices_per_cell(); ++a)
      out[static_cast<std::size_t>(a)] = dof_of_vertex_[static_cast<std::size_t>(mesh_->cell(c)[a])];
    return out;
  }

  /// Constant gradients of the barycentric coordinates of cell c.
  [[nodiscard]] const std::array<Vec, 3>& grad_lambda(std::size_t c) const { return grad_lambda_[c]; }

  /// u and grad u at the points of q (which must live on this mesh).
  [[nodiscard]] std::pair<DiscreteField, DiscreteField> interpolate(const std::vector<double>& alpha,
                                                                    std::shared_ptr<const QuadraturePoints> q) const {
    check_length(alpha);
    if (q->mesh != mesh_) throw InvalidParameter("interpolate: quadrature belongs to another mesh");
    DiscreteField u{q, 1, std::vector<Vec>(q->size(), Vec{0.0})};
    DiscreteField g{q, dim(), std::vector<Vec>(q->size(), Vec::zero(dim()))};
    for (std::size_t c = 0; c < mesh_->cell_count(); ++c) {
      const auto dofs = cell_dofs(c);
      Vec grad = Vec::zero(dim());
      for (int a = 0; a < mesh_->vertices_per_cell(); ++a)
        if (dofs[a] >= 0) grad += grad_lambda_[c][a] * alpha[static_cast<std::size_t>(dofs[a])];
      for (std::size_t k = q->first[c]; k < q->first[c + 1]; ++k) {
        double v = 0.0;
        for (int a = 0; a < mesh_->vertices_per_cell(); ++a)
          if (dofs[a] >= 0) v += q->lambda[k][a] * alpha[static_cast<std::size_t>(dofs[a])];
        u.values[k][0] = v;
        g.values[k] = grad;
      }
    }
    return {std::move(u), std::move(g)};
  }

  [[nodiscard]] std::pair<DiscreteField, DiscreteField> interpolate(const std::vector<double>& alpha) const {
    return interpolate(alpha, quad_);
  }

  /// u(x) at an arbitrary point of the domain.
  [[nodiscard]] double value(const std::vector<double>& alpha, const Vec& x) const {
    check_length(alpha);
    const auto loc = mesh_->locate(x);
    const auto dofs = cell_dofs(loc.cell);
    double v = 0.0;
    for (int a = 0; a < mesh_->vertices_per_cell(); ++a)
      if (dofs[a] >= 0) v += loc.lambda[a] * alpha[static_cast<std::size_t>(dofs[a])];
    return v;
  }

  /// grad u(x); on cell interfaces the gradient of the located cell.
  [[nodiscard]] Vec gradient(const std::vector<double>& alpha, const Vec& x) const {
    check_length(alpha);
    const auto loc = mesh_->locate(x);
    const auto dofs = cell_dofs(loc.cell);
    Vec g = Vec::zero(dim());
    for (int a = 0; a < mesh_->vertices_per_cell(); ++a)
      if (dofs[a] >= 0) g += grad_lambda_[loc.cell][a] * alpha[static_cast<std::size_t>(dofs[a])];
    return g;
  }

  /// Mass matrix (w_i, w_j) by quadrature.
  [[nodiscard]] Eigen::SparseMatrix<double> mass_matrix() const {
    std::vector<Eigen::Triplet<double>> trip;
    const auto& q = *quad_;
    for (std::size_t c = 0; c < mesh_->cell_count(); ++c) {
      const auto dofs = cell_dofs(c);
      for (std::size_t k = q.first[c]; k < q.first[c + 1]; ++k)
        for (int a = 0; a < mesh_->vertices_per_cell(); ++a)
          for (int b = 0; b < mesh_->vertices_per_cell(); ++b)
            if (dofs[a] >= 0 && dofs[b] >= 0)
              trip.emplace_back(dofs[a], dofs[b], q.weight[k] * q.lambda[k][a] * q.lambda[k][b]);
    }
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

 private:
  void check_length(const std::vector<double>& alpha) const {
    if (alpha.size() != size())
      throw DimensionMismatch("BasisSet: " + std::to_string(alpha.size()) + " coefficients for " +
                              std::to_string(size()) + " basis functions");
  }

  [[nodiscard]] std::array<Vec, 3> barycentric_gradients(std::size_t c) const {
    const auto& v = mesh_->cell(c);
    if (dim() == 1) {
      const double len = mesh_->vertex(static_cast<std::size_t>(v[1]))[0] - mesh_->vertex(static_cast<std::size_t>(v[0]))[0];
      return {Vec{-1.0 / len}, Vec{1.0 / len}, Vec{}};
    }
    const Vec& p0 = mesh_->vertex(static_cast<std::size_t>(v[0]));
    const Vec& p1 = mesh_->vertex(static_cast<std::size_t>(v[1]));
    const Vec& p2 = mesh_->vertex(static_cast<std::size_t>(v[2]));
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const Vec g1{(p2[1] - p0[1]) / det, -(p2[0] - p0[0]) / det};
    const Vec g2{-(p1[1] - p0[1]) / det, (p1[0] - p0[0]) / det};
    return {-(g1 + g2), g1, g2};
  }

  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const QuadraturePoints> quad_;
  std::vector<int> dof_of_vertex_;
  std::vector<std::size_t> vertex_of_dof_;
  std::vector<std::vector<std::size_t>> cells_of_dof_;
  std::vector<std::array<Vec, 3>> grad_lambda_;
};

}  // namespace musielak
