// Copyright (c) 2026 The ascl-vits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASCL_NN_TENSOR_H_
#define ASCL_NN_TENSOR_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ascl::nn {

using Shape = std::vector<int64_t>;

int64_t numel_of(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

struct Node {
  std::vector<double> value;
  std::vector<double> grad;
  Shape shape;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node&)> backward_fn;

  std::vector<double>& ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
    return grad;
  }
};

}  // namespace detail

// Dense row-major double tensor with reverse-mode autodiff. Copies share the
// underlying node; leaves created with parameter() accumulate gradients
// across backward() calls until zero_grad().
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor parameter(Shape shape, std::vector<double> values);
  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int rank() const { return static_cast<int>(node_->shape.size()); }
  int64_t dim(int i) const;
  int64_t numel() const { return static_cast<int64_t>(node_->value.size()); }

  std::span<const double> data() const { return node_->value; }
  // Mutating a tensor that already feeds a recorded graph invalidates the
  // graph; only leaves should be written through this.
  std::span<double> mutable_data() { return node_->value; }
  const std::vector<double>& values() const { return node_->value; }

  bool has_grad() const { return node_->grad.size() == node_->value.size(); }
  // Zeros when no gradient has reached this tensor.
  std::vector<double> grad() const;
  void zero_grad() { node_->grad.clear(); }

  double item() const;
  double at(int64_t i) const { return node_->value[i]; }
  double at(int64_t r, int64_t c) const {
    return node_->value[r * node_->shape.back() + c];
  }

  bool requires_grad() const { return node_->requires_grad; }
  // Seeds d(this)/d(this) = 1; this must hold a single element.
  void backward() const;
  // Same values, no gradient path to the producers.
  Tensor detach() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }
  static Tensor from_node(std::shared_ptr<detail::Node> node);

 private:
  std::shared_ptr<detail::Node> node_;
};

// Builds the output node of an op. The graph edge is recorded only when
// grad mode is on and some input requires grad.
Tensor make_result(Shape shape, std::vector<double> value,
                   const std::vector<Tensor>& inputs,
                   std::function<void(detail::Node&)> backward_fn);

bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// While alive, records every value produced by Tensor::detach(); after
// replay(), the same sequence of detach() calls returns the recorded values
// instead. A finite-difference check run under replay evaluates the exact
// objective that backward() differentiates, with detached inputs held at
// their recorded values. Not thread-safe; one tape at a time.
class DetachTape {
 public:
  DetachTape();
  ~DetachTape();
  DetachTape(const DetachTape&) = delete;
  DetachTape& operator=(const DetachTape&) = delete;

  // Switches to replay and rewinds to the first recorded value.
  void replay();
  size_t size() const { return values_.size(); }

  // Used by Tensor::detach().
  void process(std::vector<double>& value);

 private:
  std::vector<std::vector<double>> values_;
  size_t cursor_ = 0;
  bool replaying_ = false;
  DetachTape* previous_ = nullptr;
};

// Accumulate src into the grad of t when t participates in autodiff.
void accumulate_grad(const Tensor& t, std::span<const double> src);

}  // namespace ascl::nn

#endif  // ASCL_NN_TENSOR_H_
