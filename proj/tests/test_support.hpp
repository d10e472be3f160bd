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

#ifndef SYMEXT_TESTS_TEST_SUPPORT_HPP
#define SYMEXT_TESTS_TEST_SUPPORT_HPP

// Deterministic random inputs for tests: fixed-seed mt19937_64 plus a
// hand-rolled Box-Muller transform so sequences are identical across
// standard-library implementations.

#include <cmath>
#include <random>

#include "symext/linalg.hpp"

namespace symext::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // in (0, 1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Complex cgaussian() { return Complex(gaussian(), gaussian()); }

  std::uint64_t integer() { return engine_(); }

  // Uniform draw from {0, ..., bound - 1}; bound must be positive.
  std::uint64_t integer(std::uint64_t bound) { return engine_() % bound; }

  CMatrix matrix(int rows, int cols) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cgaussian();
    return m;
  }

  CMatrix hermitian(int n) {
    const CMatrix g = matrix(n, n);
    return CMatrix(0.5 * (g + g.adjoint()));
  }

  CMatrix psd(int n) {
    const CMatrix g = matrix(n, n);
    return CMatrix(g * g.adjoint());
  }

  CVector ket(int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = cgaussian();
    v /= v.norm();
    return v;
  }

  CMatrix density(int n) {
    CMatrix p = psd(n);
    return CMatrix(p / p.trace());
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace symext::testing

#endif  // SYMEXT_TESTS_TEST_SUPPORT_HPP
