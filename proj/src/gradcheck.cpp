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

#include "seed/gradcheck.hpp"

#include <cmath>
#include <vector>

#include "seed/errors.hpp"

namespace seed {

namespace {

void record(GradCheckReport& report, double analytic, double numeric) {
  const double err = std::abs(analytic - numeric) / (std::abs(analytic) + std::abs(numeric) + 1e-12);
  if (report.coordinates == 0 || err > report.max_rel_error) {
    report.max_rel_error = err;
    report.worst_analytic = analytic;
    report.worst_numeric = numeric;
  }
  ++report.coordinates;
}

}  // namespace

GradCheckReport gradcheck(const std::function<Tensor(const Tensor&)>& f, const Tensor& x,
                          double h) {
  Tensor probe = x.detach();
  probe.set_requires_grad(true);
  const Tensor loss = f(probe);
  if (loss.numel() != 1) throw ContractError("gradcheck: function must return a scalar");
  loss.backward();
  const Vector analytic = probe.has_grad() ? probe.grad() : Vector::Zero(probe.numel());

  GradCheckReport report;
  NoGradGuard no_grad;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    Tensor plus = x.detach();
    Tensor minus = x.detach();
    plus.mutable_values()[i] += h;
    minus.mutable_values()[i] -= h;
    const double numeric = (f(plus).item() - f(minus).item()) / (2.0 * h);
    record(report, analytic[i], numeric);
  }
  return report;
}

GradCheckReport gradcheck(const std::function<Tensor()>& loss, std::span<const Tensor> wrt,
                          double h) {
  std::vector<Tensor> targets(wrt.begin(), wrt.end());
  for (Tensor& t : targets) {
    if (!t.requires_grad()) throw ContractError("gradcheck: target does not require a gradient");
    t.zero_grad();
  }
  loss().backward();
  std::vector<Vector> analytic;
  for (const Tensor& t : targets) analytic.push_back(t.grad());

  GradCheckReport report;
  NoGradGuard no_grad;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    Vector& w = targets[k].mutable_values();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + h;
      const double up = loss().item();
      w[i] = saved - h;
      const double down = loss().item();
      w[i] = saved;
      record(report, analytic[k][i], (up - down) / (2.0 * h));
    }
  }
  return report;
}

}  // namespace seed
