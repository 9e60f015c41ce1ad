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

#include "seed/parameter.hpp"

#include <bit>
#include <cstring>

#include "seed/errors.hpp"

namespace seed {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  fnv_bytes(h, bytes, 8);
}

}  // namespace

Tensor ParameterSet::add(std::string name, Tensor tensor, bool frozen) {
  if (name.empty()) throw ContractError("parameter name must not be empty");
  if (find(name) != nullptr) throw ContractError("duplicate parameter name: " + name);
  tensor.set_requires_grad(!frozen);
  items_.push_back({std::move(name), tensor, frozen});
  return tensor;
}

const Parameter* ParameterSet::find(std::string_view name) const {
  for (const Parameter& p : items_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Parameter* ParameterSet::find(std::string_view name) {
  for (Parameter& p : items_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::size_t ParameterSet::trainable_count() const {
  std::size_t n = 0;
  for (const Parameter& p : items_) n += p.frozen ? 0 : p.tensor.numel();
  return n;
}

std::size_t ParameterSet::frozen_count() const {
  std::size_t n = 0;
  for (const Parameter& p : items_) n += p.frozen ? p.tensor.numel() : 0;
  return n;
}

void ParameterSet::zero_grad() {
  for (Parameter& p : items_) {
    if (p.frozen) {
      p.tensor.clear_grad();
    } else {
      p.tensor.zero_grad();
    }
  }
}

std::vector<Vector> ParameterSet::snapshot() const {
  std::vector<Vector> out;
  out.reserve(items_.size());
  for (const Parameter& p : items_) out.push_back(p.tensor.values());
  return out;
}

void ParameterSet::restore(const std::vector<Vector>& values) {
  if (values.size() != items_.size()) throw ContractError("snapshot does not match parameter set");
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (values[i].size() != items_[i].tensor.values().size()) {
      throw ContractError("snapshot size mismatch for " + items_[i].name);
    }
    items_[i].tensor.mutable_values() = values[i];
  }
}

std::uint64_t ParameterSet::digest(std::string_view prefix) const {
  std::uint64_t h = kFnvOffset;
  for (const Parameter& p : items_) {
    if (!p.name.starts_with(prefix)) continue;
    fnv_bytes(h, p.name.data(), p.name.size());
    fnv_u64(h, p.tensor.rank());
    for (Index e : p.tensor.shape()) fnv_u64(h, e);
    for (double v : p.tensor.data()) fnv_u64(h, std::bit_cast<std::uint64_t>(v));
  }
  return h;
}

Tensor uniform_tensor(Shape shape, double bound, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(shape_numel(shape)));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-bound, bound);
  return Tensor(std::move(shape), std::move(v));
}

Tensor normal_tensor(Shape shape, double scale, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(shape_numel(shape)));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = scale * rng.normal();
  return Tensor(std::move(shape), std::move(v));
}

}  // namespace seed
