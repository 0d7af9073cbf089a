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

#include "ascl/nn/tensor.h"

#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ascl::nn {

namespace {
thread_local bool g_grad_enabled = true;
thread_local DetachTape* g_detach_tape = nullptr;
}  // namespace

int64_t numel_of(const Shape& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d < 0) throw std::invalid_argument("negative dimension");
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, double fill) : node_(std::make_shared<detail::Node>()) {
  node_->value.assign(numel_of(shape), fill);
  node_->shape = std::move(shape);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : node_(std::make_shared<detail::Node>()) {
  if (numel_of(shape) != static_cast<int64_t>(values.size())) {
    throw std::invalid_argument("Tensor: " + shape_str(shape) + " does not hold " +
                                std::to_string(values.size()) + " values");
  }
  node_->value = std::move(values);
  node_->shape = std::move(shape);
}

Tensor Tensor::parameter(Shape shape, std::vector<double> values) {
  Tensor t(std::move(shape), std::move(values));
  t.node_->requires_grad = true;
  return t;
}

Tensor Tensor::from_node(std::shared_ptr<detail::Node> node) {
  Tensor t;
  t.node_ = std::move(node);
  return t;
}

int64_t Tensor::dim(int i) const {
  const int r = rank();
  if (i < 0) i += r;
  if (i < 0 || i >= r) throw std::out_of_range("Tensor::dim");
  return node_->shape[i];
}

std::vector<double> Tensor::grad() const {
  if (has_grad()) return node_->grad;
  return std::vector<double>(node_->value.size(), 0.0);
}

double Tensor::item() const {
  if (numel() != 1) {
    throw std::logic_error("Tensor::item on shape " + shape_str(shape()));
  }
  return node_->value[0];
}

void Tensor::backward() const {
  if (numel() != 1) throw std::logic_error("backward() needs a scalar");
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      detail::Node* p = n->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  node_->ensure_grad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    if (n->backward_fn && n->grad.size() == n->value.size()) n->backward_fn(*n);
  }
}

Tensor Tensor::detach() const {
  Tensor t;
  t.node_ = std::make_shared<detail::Node>();
  t.node_->value = node_->value;
  t.node_->shape = node_->shape;
  if (g_detach_tape != nullptr) g_detach_tape->process(t.node_->value);
  return t;
}

DetachTape::DetachTape() : previous_(g_detach_tape) { g_detach_tape = this; }
DetachTape::~DetachTape() { g_detach_tape = previous_; }

void DetachTape::replay() {
  replaying_ = true;
  cursor_ = 0;
}

void DetachTape::process(std::vector<double>& value) {
  if (!replaying_) {
    values_.push_back(value);
    return;
  }
  if (cursor_ >= values_.size() || values_[cursor_].size() != value.size()) {
    throw std::logic_error("DetachTape: replay diverged from the recorded detach() sequence");
  }
  value = values_[cursor_++];
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

Tensor make_result(Shape shape, std::vector<double> value,
                   const std::vector<Tensor>& inputs,
                   std::function<void(detail::Node&)> backward_fn) {
  auto node = std::make_shared<detail::Node>();
  node->value = std::move(value);
  node->shape = std::move(shape);
  if (numel_of(node->shape) != static_cast<int64_t>(node->value.size())) {
    throw std::logic_error("make_result: shape/value mismatch");
  }
  if (g_grad_enabled) {
    bool any = false;
    for (const Tensor& t : inputs) any = any || (t.defined() && t.requires_grad());
    if (any) {
      node->requires_grad = true;
      for (const Tensor& t : inputs) {
        if (t.defined() && t.requires_grad()) node->parents.push_back(t.node());
      }
      node->backward_fn = std::move(backward_fn);
    }
  }
  return Tensor::from_node(std::move(node));
}

void accumulate_grad(const Tensor& t, std::span<const double> src) {
  if (!t.defined() || !t.requires_grad()) return;
  auto& g = t.node()->ensure_grad();
  for (size_t i = 0; i < src.size(); ++i) g[i] += src[i];
}

}  // namespace ascl::nn
