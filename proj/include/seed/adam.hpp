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

#include <cstdint>
#include <map>
#include <string>

#include "seed/parameter.hpp"

namespace seed {

/// Moments and hyperparameters of an Adam run.
struct AdamState {
  std::uint64_t step = 0;
  std::map<std::string, Vector> m;
  std::map<std::string, Vector> v;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/**
 * One bias-corrected Adam update on every non-frozen parameter.
 * Frozen parameters are skipped regardless of any gradient they carry.
 * Throws ContractError when a trainable parameter has no gradient.
 */
void adam_step(ParameterSet& params, AdamState& state);

}  // namespace seed
