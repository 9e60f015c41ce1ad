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

#include <string>
#include <string_view>
#include <vector>

#include "seed/config.hpp"
#include "seed/gradcheck.hpp"

namespace seed {

/// N=3, L=8, d=8, d_lm=8, K=4, P=4, H=3: small enough for exhaustive
/// central differences.
ExperimentConfig toy_config();

struct ModuleGradCheck {
  std::string module;
  GradCheckReport report;
};

inline constexpr std::string_view kGradCheckModules[] = {"encoder",        "patching", "reprogramming",
                                                         "output_head",    "value_embedding", "pipeline"};

/**
 * Central-difference checks of every trainable module of the toy model
 * against a random-probe loss, or of one module by name. ConfigError for an
 * unknown name.
 * Trainable weights are redrawn uniform(-1, 1) first.
 */
std::vector<ModuleGradCheck> gradient_checks(std::string_view module = "all", std::uint64_t seed = 5);

}  // namespace seed
