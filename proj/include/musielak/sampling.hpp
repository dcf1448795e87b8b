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

#include <cmath>
#include <cstdint>
#include <random>

#include "musielak/vec.hpp"

namespace musielak {

/// The one generator type threaded through every sampling routine.
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline Vec random_point(Rng& rng, const Box& box) {
  Vec x(box.dim());
  for (int i = 0; i < box.dim(); ++i) x[i] = uniform(rng, box.lower[i], box.upper[i]);
  return x;
}

inline Vec random_direction(Rng& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = g(rng);
    const double n = norm(v);
    if (n > 1e-12) return v / n;
  }
}

/// Random vector with log-uniform length in [lo, hi].
inline Vec random_vector(Rng& rng, int dim, double lo, double hi) {
  return random_direction(rng, dim) * log_uniform(rng, lo, hi);
}

/// Uniform point in the ball B(center, radius).
inline Vec random_point_in_ball(Rng& rng, const Vec& center, double radius) {
  const int d = center.dim();
  const double r = radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / d);
  return center + random_direction(rng, d) * r;
}

/// Radical-inverse (Halton) coordinate for index i in the given prime base.
inline double radical_inverse(std::uint64_t i, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

/// Halton point with index i (1-based is customary) mapped into box.
inline Vec halton_point(std::uint64_t i, const Box& box) {
  static constexpr unsigned kPrimes[] = {2, 3, 5};
  Vec x(box.dim());
  for (int k = 0; k < box.dim(); ++k) {
    x[k] = box.lower[k] + box.extent(k) * radical_inverse(i, kPrimes[k]);
  }
  return x;
}

}  // namespace musielak
