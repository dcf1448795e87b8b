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

#include <cstddef>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "musielak/errors.hpp"
#include "musielak/fem.hpp"
#include "musielak/format.hpp"
#include "musielak/vec.hpp"

namespace musielak {

/// Values of a scalar (components = 1) or vector field at quadrature points.
struct DiscreteField {
  std::shared_ptr<const QuadraturePoints> points;
  int components = 1;
  std::vector<Vec> values;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] double scalar(std::size_t i) const { return values[i][0]; }

  static DiscreteField constant(std::shared_ptr<const QuadraturePoints> q, const Vec& c) {
    DiscreteField f{q, c.dim(), std::vector<Vec>(q->size(), c)};
    return f;
  }

  static DiscreteField from_function(std::shared_ptr<const QuadraturePoints> q, int components,
                                     const std::function<Vec(const Vec&)>& fn) {
    DiscreteField f{q, components, {}};
    f.values.reserve(q->size());
    for (const Vec& x : q->x) {
      Vec v = fn(x);
      if (v.dim() != components) throw DimensionMismatch("DiscreteField: function returned wrong dimension");
      f.values.push_back(v);
    }
    return f;
  }

  /// Throws unless the value count and dimensions match the quadrature.
  void validate() const {
    if (!points) throw InvalidParameter("DiscreteField: no quadrature attached");
    if (values.size() != points->size())
      throw DimensionMismatch("DiscreteField: " + std::to_string(values.size()) + " values for " +
                              std::to_string(points->size()) + " quadrature points");
    for (const Vec& v : values)
      if (v.dim() != components) throw DimensionMismatch("DiscreteField: component count differs");
  }

  DiscreteField& operator*=(double s) {
    for (Vec& v : values) v *= s;
    return *this;
  }
  friend DiscreteField operator*(DiscreteField f, double s) { return f *= s; }
  friend DiscreteField operator*(double s, DiscreteField f) { return f *= s; }
  friend DiscreteField operator/(DiscreteField f, double s) { return f *= 1.0 / s; }

  friend DiscreteField operator+(DiscreteField a, const DiscreteField& b) {
    require_compatible(a, b);
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
    return a;
  }
  friend DiscreteField operator-(DiscreteField a, const DiscreteField& b) {
    require_compatible(a, b);
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] -= b.values[i];
    return a;
  }

  static void require_compatible(const DiscreteField& a, const DiscreteField& b) {
    if (a.values.size() != b.values.size() || a.components != b.components)
      throw DimensionMismatch("DiscreteField: incompatible operands");
  }
};

/// One row per quadrature point: coordinates, weight, value components.
inline void write_field_csv(std::ostream& os, const DiscreteField& f) {
  std::vector<std::string> header;
  for (int i = 0; i < f.points->dim(); ++i) header.push_back("x" + std::to_string(i));
  header.push_back("weight");
  for (int i = 0; i < f.components; ++i) header.push_back("v" + std::to_string(i));
  write_csv_row(os, header);
  for (std::size_t k = 0; k < f.size(); ++k) {
    std::vector<std::string> row;
    for (int i = 0; i < f.points->dim(); ++i) row.push_back(format_double(f.points->x[k][i]));
    row.push_back(format_double(f.points->weight[k]));
    for (int i = 0; i < f.components; ++i) row.push_back(format_double(f.values[k][i]));
    write_csv_row(os, row);
  }
}

}  // namespace musielak
