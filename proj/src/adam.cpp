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

#include "seed/adam.hpp"

#include <cmath>

#include "seed/errors.hpp"

namespace seed {

void adam_step(ParameterSet& params, AdamState& state) {
  for (const Parameter& p : params.items()) {
    if (!p.frozen && !p.tensor.has_grad()) {
      throw ContractError("adam_step: trainable parameter " + p.name + " has no gradient");
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (Parameter& p : params.items()) {
    if (p.frozen) continue;
    const Vector& g = p.tensor.grad();
    Vector& m = state.m[p.name];
    Vector& v = state.v[p.name];
    if (m.size() == 0) {
      m = Vector::Zero(g.size());
      v = Vector::Zero(g.size());
    }
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    Vector& w = p.tensor.mutable_values();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      w[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

}  // namespace seed
