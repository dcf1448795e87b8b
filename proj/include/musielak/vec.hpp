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
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace musielak {

/// Largest spatial / gradient dimension handled by the library.
inline constexpr int kMaxDim = 3;

/// Small fixed-capacity vector used for points x and gradient values xi.
/// Value type; never allocates.
class Vec {
 public:
  Vec() = default;

  explicit Vec(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxDim) {
      throw std::invalid_argument("Vec: dimension " + std::to_string(dim) +
                                  " outside [0, " + std::to_string(kMaxDim) + "]");
    }
  }

  Vec(std::initializer_list<double> xs) : Vec(static_cast<int>(xs.size())) {
    std::copy(xs.begin(), xs.end(), c_.begin());
  }

  static Vec zero(int dim) { return Vec(dim); }

  static Vec unit(int dim, int axis) {
    Vec v(dim);
    v[axis] = 1.0;
    return v;
  }

  [[nodiscard]] int dim() const { return dim_; }

  double& operator[](int i) {
    assert(i >= 0 && i < dim_);
    return c_[static_cast<std::size_t>(i)];
  }
  double operator[](int i) const {
    assert(i >= 0 && i < dim_);
    return c_[static_cast<std::size_t>(i)];
  }

  [[nodiscard]] std::span<const double> span() const {
    return {c_.data(), static_cast<std::size_t>(dim_)};
  }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }
  Vec& operator/=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] /= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a /= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
  assert(a.dim() == b.dim());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

inline bool all_finite(const Vec& a) {
  for (int i = 0; i < a.dim(); ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

/// Axis-aligned box; stands in for the bounded domain Omega.
struct Box {
  Vec lower;
  Vec upper;

  Box() = default;
  Box(Vec lo, Vec hi) : lower(lo), upper(hi) {
    if (lo.dim() != hi.dim() || lo.dim() < 1) {
      throw std::invalid_argument("Box: corner dimensions disagree");
    }
    for (int i = 0; i < lo.dim(); ++i) {
      if (!(lo[i] < hi[i])) throw std::invalid_argument("Box: empty extent on axis " + std::to_string(i));
    }
  }

  static Box unit(int dim) {
    Vec lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) hi[i] = 1.0;
    return {lo, hi};
  }

  [[nodiscard]] int dim() const { return lower.dim(); }

  [[nodiscard]] double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= upper[i] - lower[i];
    return v;
  }

  [[nodiscard]] double extent(int axis) const { return upper[axis] - lower[axis]; }

  [[nodiscard]] bool contains(const Vec& x, double tol = 1e-12) const {
    if (x.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
    }
    return true;
  }

  /// Distance from an interior point to the boundary.
  [[nodiscard]] double inner_distance(const Vec& x) const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i) d = std::min({d, x[i] - lower[i], upper[i] - x[i]});
    return d;
  }

  /// The 2^d corners.
  template <class Fn>
  void for_each_corner(Fn&& fn) const {
    const int n = 1 << dim();
    for (int mask = 0; mask < n; ++mask) {
      Vec c(dim());
      for (int i = 0; i < dim(); ++i) c[i] = (mask >> i) & 1 ? upper[i] : lower[i];
      fn(c);
    }
  }
};

}  // namespace musielak
