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

#include "seed/diagnostics.hpp"

#include <algorithm>

#include "seed/errors.hpp"
#include "seed/model.hpp"
#include "seed/ops.hpp"

namespace seed {

ExperimentConfig toy_config() {
  ExperimentConfig c;
  c.window = 8;
  c.horizon = 3;
  c.encoder.window = 8;
  c.encoder.d_model = 8;
  c.encoder.num_layers = 1;
  c.encoder.num_heads = 2;
  c.encoder.ffn_dim = 16;
  c.encoder.channels = 2;
  c.patch.patch_len = 4;
  c.patch.max_patches = 2;
  c.patch.d_lm = 8;
  c.decoder.d_lm = 8;
  c.decoder.num_layers = 1;
  c.decoder.num_heads = 2;
  c.decoder.ffn_dim = 16;
  c.reprog.num_prototypes = 4;
  c.reprog.task_len = 2;
  return c;
}

namespace {

Tensor random_like(Shape shape, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(shape_numel(shape)));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
  return Tensor(std::move(shape), std::move(v));
}

std::vector<Tensor> tensors_with_prefix(const ParameterSet& params, std::string_view prefix) {
  std::vector<Tensor> out;
  for (const Parameter& p : params.items()) {
    if (!p.frozen && p.name.rfind(prefix, 0) == 0) out.push_back(p.tensor);
  }
  return out;
}

}  // namespace

std::vector<ModuleGradCheck> gradient_checks(std::string_view module, std::uint64_t seed) {
  const bool all = module == "all";
  if (!all && std::find(std::begin(kGradCheckModules), std::end(kGradCheckModules), module) ==
                  std::end(kGradCheckModules)) {
    std::string names = "all";
    for (auto m : kGradCheckModules) names += ", " + std::string(m);
    throw ConfigError("unknown gradcheck module '" + std::string(module) + "' (expected " + names + ")");
  }
  const ExperimentConfig config = toy_config();
  const Index n = 3;
  SeedModel model(config, n);
  Rng rng(seed);
  for (Parameter& p : model.params().items()) {
    if (p.frozen) continue;
    Vector& v = p.tensor.mutable_values();
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
  }
  RowMatrix x(config.window, n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);

  std::vector<ModuleGradCheck> out;
  const auto run = [&](std::string_view name, const std::function<Tensor()>& loss, const std::vector<Tensor>& wrt) {
    if (all || module == name) out.push_back({std::string(name), gradcheck(loss, wrt)});
  };

  const Tensor xt = Tensor::from_matrix(x);
  const Tensor feature_probe = random_like({n, config.encoder.channels, config.window}, rng);
  run("encoder",
      [&] { return sum(mul(encode(xt, model.encoder_config(), model.encoder()), feature_probe)); },
      tensors_with_prefix(model.params(), "encoder."));

  Tensor features;
  {
    NoGradGuard guard;
    features = encode(xt, model.encoder_config(), model.encoder());
  }
  const Index patches = config.window / config.patch.patch_len;
  const Tensor patch_probe = random_like({patches, config.decoder.d_lm}, rng);
  run("patching", [&] { return sum(mul(embed_patches(features, model.patching(), config.patch).tokens, patch_probe)); },
      tensors_with_prefix(model.params(), "patching."));

  const Index seq_len = config.reprog.task_len + patches;
  const Tensor seq_probe = random_like({seq_len, config.decoder.d_lm}, rng);
  run("reprogramming", [&] { return sum(mul(model.sequence(x).tokens, seq_probe)); },
      tensors_with_prefix(model.params(), "reprog."));

  const Tensor y_probe = random_like({config.horizon, n}, rng);
  const auto forecast_loss = [&] { return sum(mul(model.forward(x), y_probe)); };
  run("output_head", forecast_loss, tensors_with_prefix(model.params(), "head.output"));
  run("value_embedding", forecast_loss, tensors_with_prefix(model.params(), "head.value_embedding"));

  RowMatrix target(config.horizon, n);
  for (Eigen::Index i = 0; i < target.size(); ++i) target.data()[i] = rng.uniform(-1.0, 1.0);
  const Tensor yt = Tensor::from_matrix(target);
  run("pipeline", [&] { return mse_loss(model.forward(x), yt); }, tensors_with_prefix(model.params(), ""));
  return out;
}

}  // namespace seed
