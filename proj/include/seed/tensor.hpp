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

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace seed {

using Index = std::size_t;
using Shape = std::vector<Index>;

template <typename Scalar>
using RowMatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RowMatrix = RowMatrixX<double>;
using Vector = VectorX<double>;

Index shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

namespace detail {

/// One recorded value in the dynamic graph.
struct Node {
  Shape shape;
  Vector value;
  Vector grad;  // size 0 until a gradient arrives
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node&)> backward;
};

}  // namespace detail

/**
 * Dense row-major array of doubles with optional reverse-mode gradient.
 *
 * A Tensor is a handle: copies share the same storage and graph node.
 * Operations never mutate their operands; they return new tensors and,
 * when any operand requires a gradient, record how to propagate one back.
 * Parameters are the only tensors mutated in place (by initializers and
 * the optimizer) through mutable_values().
 */
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, Vector values, bool requires_grad = false);
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor from_matrix(const RowMatrix& m, bool requires_grad = false);
  static Tensor from_values(Shape shape, std::initializer_list<double> values,
                            bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  Index rank() const { return shape().size(); }
  Index dim(Index axis) const;
  Index numel() const { return static_cast<Index>(values().size()); }

  const Vector& values() const;
  Vector& mutable_values();
  std::span<const double> data() const {
    return {values().data(), static_cast<std::size_t>(values().size())};
  }
  double item() const;
  double at(std::initializer_list<Index> index) const;

  /// Rank-2 view (rank-1 views as a single row).
  Eigen::Map<const RowMatrix> matrix() const;
  RowMatrix to_matrix() const { return matrix(); }

  bool requires_grad() const;
  void set_requires_grad(bool flag);
  bool has_grad() const;
  const Vector& grad() const;
  void zero_grad();
  void clear_grad();

  /// Copy of the values with no graph history.
  Tensor detach() const;

  /// Reverse sweep from this scalar; populates grad on every reachable
  /// tensor that requires one. Leaf gradients accumulate across calls.
  void backward() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Disables graph recording on this thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

namespace detail {

using BackwardFn = std::function<void(Node&)>;

/// Builds an op result, recording `inputs` only when one needs a gradient.
Tensor make_result(Shape shape, Vector values, std::initializer_list<Tensor> inputs,
                   BackwardFn backward);
Tensor make_result(Shape shape, Vector values, const std::vector<Tensor>& inputs,
                   BackwardFn backward);

/// grad += g on `node`, allocating grad on first use. No-op when the node
/// does not require a gradient.
template <typename Derived>
void accumulate(Node& node, const Eigen::MatrixBase<Derived>& g) {
  if (!node.requires_grad) return;
  if (node.grad.size() == 0) {
    node.grad = g;
  } else {
    node.grad += g;
  }
}

}  // namespace detail

}  // namespace seed
