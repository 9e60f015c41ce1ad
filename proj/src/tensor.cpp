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

#include "seed/tensor.hpp"

#include <sstream>
#include <unordered_set>
#include <utility>

#include "seed/errors.hpp"

namespace seed {

namespace {

thread_local bool g_grad_enabled = true;

void check_shape(const Shape& shape, Index size) {
  for (Index extent : shape) {
    if (extent == 0) throw DimensionError("tensor extents must be >= 1, got " + shape_string(shape));
  }
  if (shape_numel(shape) != size) {
    throw DimensionError("shape " + shape_string(shape) + " does not hold " +
                         std::to_string(size) + " values");
  }
}

}  // namespace

Index shape_numel(const Shape& shape) {
  Index n = 1;
  for (Index extent : shape) n *= extent;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << '(';
  for (Index i = 0; i < shape.size(); ++i) {
    if (i) out << ',';
    out << shape[i];
  }
  out << ')';
  return out.str();
}

Tensor::Tensor(Shape shape, Vector values, bool requires_grad) {
  check_shape(shape, static_cast<Index>(values.size()));
  node_ = std::make_shared<detail::Node>();
  node_->shape = std::move(shape);
  node_->value = std::move(values);
  node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  const auto n = static_cast<Eigen::Index>(shape_numel(shape));
  return Tensor(std::move(shape), Vector::Zero(n), requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  const auto n = static_cast<Eigen::Index>(shape_numel(shape));
  return Tensor(std::move(shape), Vector::Constant(n, value), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor({}, Vector::Constant(1, value), requires_grad);
}

Tensor Tensor::from_matrix(const RowMatrix& m, bool requires_grad) {
  Vector flat = Eigen::Map<const Vector>(m.data(), m.size());
  return Tensor({static_cast<Index>(m.rows()), static_cast<Index>(m.cols())}, std::move(flat),
                requires_grad);
}

Tensor Tensor::from_values(Shape shape, std::initializer_list<double> values, bool requires_grad) {
  Vector flat(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) flat[i++] = v;
  return Tensor(std::move(shape), std::move(flat), requires_grad);
}

const Shape& Tensor::shape() const {
  if (!node_) throw ContractError("use of an undefined tensor");
  return node_->shape;
}

Index Tensor::dim(Index axis) const {
  if (axis >= rank()) {
    throw DimensionError("axis " + std::to_string(axis) + " out of range for shape " +
                         shape_string(shape()));
  }
  return shape()[axis];
}

const Vector& Tensor::values() const {
  if (!node_) throw ContractError("use of an undefined tensor");
  return node_->value;
}

Vector& Tensor::mutable_values() {
  if (!node_) throw ContractError("use of an undefined tensor");
  return node_->value;
}

double Tensor::item() const {
  if (numel() != 1) throw ContractError("item() on tensor of shape " + shape_string(shape()));
  return values()[0];
}

double Tensor::at(std::initializer_list<Index> index) const {
  const Shape& s = shape();
  if (index.size() != s.size()) throw DimensionError("index rank mismatch for " + shape_string(s));
  Index flat = 0;
  Index axis = 0;
  for (Index i : index) {
    if (i >= s[axis]) throw DimensionError("index out of range for " + shape_string(s));
    flat = flat * s[axis] + i;
    ++axis;
  }
  return values()[static_cast<Eigen::Index>(flat)];
}

Eigen::Map<const RowMatrix> Tensor::matrix() const {
  const Shape& s = shape();
  if (s.size() == 1) return {values().data(), 1, static_cast<Eigen::Index>(s[0])};
  if (s.size() != 2) throw DimensionError("matrix view needs rank <= 2, got " + shape_string(s));
  return {values().data(), static_cast<Eigen::Index>(s[0]), static_cast<Eigen::Index>(s[1])};
}

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

void Tensor::set_requires_grad(bool flag) {
  if (!node_) throw ContractError("use of an undefined tensor");
  node_->requires_grad = flag;
}

bool Tensor::has_grad() const { return node_ && node_->grad.size() != 0; }

const Vector& Tensor::grad() const {
  if (!has_grad()) throw ContractError("tensor has no gradient");
  return node_->grad;
}

void Tensor::zero_grad() {
  if (!node_) return;
  node_->grad = Vector::Zero(node_->value.size());
}

void Tensor::clear_grad() {
  if (node_) node_->grad.resize(0);
}

Tensor Tensor::detach() const { return Tensor(shape(), values(), false); }

void Tensor::backward() const {
  if (!node_) throw ContractError("backward on an undefined tensor");
  if (numel() != 1) {
    throw ContractError("backward needs a scalar loss, got shape " + shape_string(shape()));
  }
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  std::vector<std::pair<detail::Node*, Index>> stack;
  stack.emplace_back(node_.get(), 0);
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      detail::Node* child = node->inputs[next++].get();
      if (child->requires_grad && seen.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  detail::accumulate(*node_, Vector::Ones(1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node& node = **it;
    if (node.backward && node.grad.size() != 0) node.backward(node);
  }
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }

NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool grad_enabled() { return g_grad_enabled; }

namespace detail {

Tensor make_result(Shape shape, Vector values, const std::vector<Tensor>& inputs,
                   BackwardFn backward) {
  Tensor out(std::move(shape), std::move(values), false);
  if (!g_grad_enabled) return out;
  bool needs = false;
  for (const Tensor& t : inputs) needs = needs || t.requires_grad();
  if (!needs) return out;
  Node& node = *out.node();
  node.requires_grad = true;
  node.inputs.reserve(inputs.size());
  for (const Tensor& t : inputs) node.inputs.push_back(t.node());
  node.backward = std::move(backward);
  return out;
}

Tensor make_result(Shape shape, Vector values, std::initializer_list<Tensor> inputs,
                   BackwardFn backward) {
  return make_result(std::move(shape), std::move(values), std::vector<Tensor>(inputs),
                     std::move(backward));
}

}  // namespace detail

}  // namespace seed
