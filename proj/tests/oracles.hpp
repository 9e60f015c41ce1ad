/*
 * Copyright (c) 2026, The seed-forecast Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Test-only reference computations. Nothing here calls into the library's
// math routines; each oracle is a direct loop over the definition.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seed/rng.hpp"
#include "seed/tensor.hpp"

namespace seed::testing {

inline Tensor random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Vector v(static_cast<Eigen::Index>(shape_numel(shape)));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(lo, hi);
  return Tensor(std::move(shape), std::move(v));
}

inline RowMatrix random_matrix(Index rows, Index cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  RowMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  return m;
}

/// Triple-loop product of row-major p x q and q x r arrays.
inline std::vector<double> matmul_oracle(const std::vector<double>& a, const std::vector<double>& b,
                                         Index p, Index q, Index r) {
  std::vector<double> c(p * r, 0.0);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < r; ++j) {
      double s = 0.0;
      for (Index k = 0; k < q; ++k) s += a[i * q + k] * b[k * r + j];
      c[i * r + j] = s;
    }
  return c;
}

/// Softmax in long double without max subtraction.
inline std::vector<long double> softmax_oracle(const std::vector<double>& x) {
  std::vector<long double> e(x.size());
  long double total = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    e[i] = std::exp(static_cast<long double>(x[i]));
    total += e[i];
  }
  for (auto& v : e) v /= total;
  return e;
}

inline std::vector<double> to_std(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

inline bool bitwise_equal(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return false;
  for (Index i = 0; i < a.numel(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.data()[i]) != std::bit_cast<std::uint64_t>(b.data()[i]))
      return false;
  }
  return true;
}

}  // namespace seed::testing
