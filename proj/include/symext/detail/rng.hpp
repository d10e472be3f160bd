// Copyright 2026 The symext Authors
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

#ifndef SYMEXT_DETAIL_RNG_HPP
#define SYMEXT_DETAIL_RNG_HPP

// Deterministic random source for state generation and product-state
// sampling.  The uniform/Gaussian transforms are spelled out here instead of
// using std::uniform_real_distribution / std::normal_distribution because the
// standard leaves those implementation-defined; with a fixed seed this
// generator produces the same stream under any conforming standard library.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "symext/linalg.hpp"

namespace symext::detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1); never returns an exact endpoint.
  double uniform() {
    const std::uint64_t x = engine_();
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller with a cached spare.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  Complex cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
  }

  // Haar-random unit vector (normalized complex Gaussian).
  CVector haar_ket(int dim) {
    CVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cgaussian();
    v /= v.norm();
    return v;
  }

  // Uniform point on the probability simplex (normalized exponentials).
  std::vector<double> simplex_weights(int k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      w[i] = -std::log(uniform());
      total += w[i];
    }
    for (int i = 0; i < k; ++i) w[i] /= total;
    return w;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace symext::detail

#endif  // SYMEXT_DETAIL_RNG_HPP
