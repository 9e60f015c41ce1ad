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
#include <string>
#include <string_view>
#include <vector>

#include "seed/rng.hpp"
#include "seed/tensor.hpp"

namespace seed {

/// A named model tensor. Frozen parameters never change under the optimizer.
struct Parameter {
  std::string name;
  Tensor tensor;
  bool frozen = false;
};

/**
 * Ordered registry of every parameter of a model, keyed by unique dotted
 * name ("encoder.layer0.wq"). Insertion order is the checkpoint order.
 */
class ParameterSet {
 public:
  /// Registers `tensor` under `name`; trainable tensors get requires_grad,
  /// frozen ones do not. Returns the shared handle.
  Tensor add(std::string name, Tensor tensor, bool frozen = false);

  const std::vector<Parameter>& items() const { return items_; }
  std::vector<Parameter>& items() { return items_; }
  std::size_t size() const { return items_.size(); }

  const Parameter* find(std::string_view name) const;
  Parameter* find(std::string_view name);

  /// Scalar counts.
  std::size_t trainable_count() const;
  std::size_t frozen_count() const;

  /// Zero-filled grads on trainable parameters; frozen grads are dropped.
  void zero_grad();

  std::vector<Vector> snapshot() const;
  void restore(const std::vector<Vector>& values);

  /// FNV-1a 64 over name, shape and value bytes of every parameter whose
  /// name starts with `prefix`.
  std::uint64_t digest(std::string_view prefix = "") const;

 private:
  std::vector<Parameter> items_;
};

/// Uniform(-bound, +bound) entries drawn in row-major order.
Tensor uniform_tensor(Shape shape, double bound, Rng& rng);
/// Standard normal entries times `scale`, row-major order.
Tensor normal_tensor(Shape shape, double scale, Rng& rng);

}  // namespace seed
