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

#pragma once

#include <functional>
#include <span>

#include "seed/tensor.hpp"

namespace seed {

struct GradCheckReport {
  double max_rel_error = 0.0;
  Index coordinates = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

/**
 * Compares reverse-mode gradients with central differences of step h.
 * Error per coordinate is |a - n| / (|a| + |n| + 1e-12); the maximum over
 * all coordinates is reported.
 */
GradCheckReport gradcheck(const std::function<Tensor(const Tensor&)>& f, const Tensor& x,
                          double h = 1e-5);

/// Same check with respect to tensors perturbed in place (model parameters).
/// `loss` must rebuild its graph on every call; values are restored exactly.
GradCheckReport gradcheck(const std::function<Tensor()>& loss, std::span<const Tensor> wrt,
                          double h = 1e-5);

inline double finite_difference_check(const std::function<Tensor(const Tensor&)>& f,
                                      const Tensor& x, double h = 1e-5) {
  return gradcheck(f, x, h).max_rel_error;
}

}  // namespace seed
