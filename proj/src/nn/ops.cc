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

#include "ascl/nn/ops.h"

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ascl/error.h"

namespace ascl::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapR = Eigen::Map<RowMat>;
using CMapR = Eigen::Map<const RowMat>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kShapeMismatch, what);
}

void require_same(const Tensor& a, const Tensor& b, const char* op) {
  require(a.shape() == b.shape(), std::string(op) + ": " + shape_str(a.shape()) +
                                      " vs " + shape_str(b.shape()));
}

template <typename Fwd, typename Deriv>
Tensor unary(const Tensor& a, Fwd fwd, Deriv deriv) {
  const auto& x = a.values();
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = fwd(x[i]);
  return make_result(a.shape(), std::move(y), {a}, [a, deriv](detail::Node& self) {
    const auto& xv = a.values();
    std::vector<double> g(xv.size());
    for (size_t i = 0; i < xv.size(); ++i) g[i] = self.grad[i] * deriv(xv[i], self.value[i]);
    accumulate_grad(a, g);
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  require_same(a, b, "add");
  std::vector<double> y(a.values());
  const auto& bv = b.values();
  for (size_t i = 0; i < y.size(); ++i) y[i] += bv[i];
  return make_result(a.shape(), std::move(y), {a, b}, [a, b](detail::Node& self) {
    accumulate_grad(a, self.grad);
    accumulate_grad(b, self.grad);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same(a, b, "sub");
  std::vector<double> y(a.values());
  const auto& bv = b.values();
  for (size_t i = 0; i < y.size(); ++i) y[i] -= bv[i];
  return make_result(a.shape(), std::move(y), {a, b}, [a, b](detail::Node& self) {
    accumulate_grad(a, self.grad);
    if (b.requires_grad()) {
      std::vector<double> g(self.grad.size());
      for (size_t i = 0; i < g.size(); ++i) g[i] = -self.grad[i];
      accumulate_grad(b, g);
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same(a, b, "mul");
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> y(av.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = av[i] * bv[i];
  return make_result(a.shape(), std::move(y), {a, b}, [a, b](detail::Node& self) {
    const auto& av = a.values();
    const auto& bv = b.values();
    std::vector<double> g(av.size());
    if (a.requires_grad()) {
      for (size_t i = 0; i < g.size(); ++i) g[i] = self.grad[i] * bv[i];
      accumulate_grad(a, g);
    }
    if (b.requires_grad()) {
      for (size_t i = 0; i < g.size(); ++i) g[i] = self.grad[i] * av[i];
      accumulate_grad(b, g);
    }
  });
}

Tensor scale(const Tensor& a, double s) {
  return unary(a, [s](double x) { return x * s; }, [s](double, double) { return s; });
}

Tensor add_scalar(const Tensor& a, double s) {
  return unary(a, [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}

Tensor add_channel(const Tensor& x, const Tensor& v) {
  const int64_t c = x.dim(0);
  require(v.numel() == c, "add_channel: " + shape_str(x.shape()) + " + " +
                              shape_str(v.shape()));
  const int64_t inner = x.numel() / c;
  std::vector<double> y(x.values());
  const auto& vv = v.values();
  for (int64_t i = 0; i < c; ++i) {
    for (int64_t j = 0; j < inner; ++j) y[i * inner + j] += vv[i];
  }
  return make_result(x.shape(), std::move(y), {x, v}, [x, v, c, inner](detail::Node& self) {
    accumulate_grad(x, self.grad);
    if (v.requires_grad()) {
      std::vector<double> g(c, 0.0);
      for (int64_t i = 0; i < c; ++i) {
        for (int64_t j = 0; j < inner; ++j) g[i] += self.grad[i * inner + j];
      }
      accumulate_grad(v, g);
    }
  });
}

Tensor mul_channel(const Tensor& x, const Tensor& v) {
  const int64_t c = x.dim(0);
  require(v.numel() == c, "mul_channel: " + shape_str(x.shape()) + " * " +
                              shape_str(v.shape()));
  const int64_t inner = x.numel() / c;
  std::vector<double> y(x.values());
  const auto& vv = v.values();
  for (int64_t i = 0; i < c; ++i) {
    for (int64_t j = 0; j < inner; ++j) y[i * inner + j] *= vv[i];
  }
  return make_result(x.shape(), std::move(y), {x, v}, [x, v, c, inner](detail::Node& self) {
    const auto& xv = x.values();
    const auto& vv = v.values();
    if (x.requires_grad()) {
      std::vector<double> g(self.grad.size());
      for (int64_t i = 0; i < c; ++i) {
        for (int64_t j = 0; j < inner; ++j) g[i * inner + j] = self.grad[i * inner + j] * vv[i];
      }
      accumulate_grad(x, g);
    }
    if (v.requires_grad()) {
      std::vector<double> g(c, 0.0);
      for (int64_t i = 0; i < c; ++i) {
        for (int64_t j = 0; j < inner; ++j) g[i] += self.grad[i * inner + j] * xv[i * inner + j];
      }
      accumulate_grad(v, g);
    }
  });
}

Tensor exp(const Tensor& a) {
  return unary(a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
  return unary(a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Tensor log_clamp(const Tensor& a, double floor) {
  return unary(
      a, [floor](double x) { return std::log(std::max(x, floor)); },
      [floor](double x, double) { return x > floor ? 1.0 / x : 0.0; });
}

Tensor sqrt(const Tensor& a) {
  return unary(a, [](double x) { return std::sqrt(x); },
               [](double, double y) { return y > 0.0 ? 0.5 / y : 0.0; });
}

Tensor tanh(const Tensor& a) {
  return unary(a, [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
               [](double, double y) { return y * (1.0 - y); });
}

Tensor relu(const Tensor& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& a, double slope) {
  return unary(a, [slope](double x) { return x > 0.0 ? x : slope * x; },
               [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Tensor square(const Tensor& a) {
  return unary(a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Tensor abs(const Tensor& a) {
  return unary(a, [](double x) { return std::abs(x); },
               [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  return unary(a, [lo, hi](double x) { return std::min(std::max(x, lo), hi); },
               [lo, hi](double x, double) { return (x > lo && x < hi) ? 1.0 : 0.0; });
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return make_result({1}, {s}, {a}, [a](detail::Node& self) {
    std::vector<double> g(a.numel(), self.grad[0]);
    accumulate_grad(a, g);
  });
}

Tensor mean(const Tensor& a) {
  require(a.numel() > 0, "mean of empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(a.numel()));
}

Tensor reshape(const Tensor& a, Shape shape) {
  require(numel_of(shape) == a.numel(), "reshape " + shape_str(a.shape()) + " -> " +
                                            shape_str(shape));
  return make_result(std::move(shape), a.values(), {a},
                     [a](detail::Node& self) { accumulate_grad(a, self.grad); });
}

Tensor transpose(const Tensor& a) {
  require(a.rank() == 2, "transpose needs rank 2");
  const int64_t r = a.dim(0), c = a.dim(1);
  std::vector<double> y(a.numel());
  MapR(y.data(), c, r) = CMapR(a.values().data(), r, c).transpose();
  return make_result({c, r}, std::move(y), {a}, [a, r, c](detail::Node& self) {
    std::vector<double> g(a.numel());
    MapR(g.data(), r, c) = CMapR(self.grad.data(), c, r).transpose();
    accumulate_grad(a, g);
  });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require(a.rank() == 2 && b.rank() == 2 && a.dim(1) == b.dim(0),
          "matmul " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
  const int64_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  std::vector<double> y(m * n);
  MapR(y.data(), m, n).noalias() = CMapR(a.values().data(), m, k) * CMapR(b.values().data(), k, n);
  return make_result({m, n}, std::move(y), {a, b}, [a, b, m, k, n](detail::Node& self) {
    CMapR dy(self.grad.data(), m, n);
    if (a.requires_grad()) {
      std::vector<double> g(m * k);
      MapR(g.data(), m, k).noalias() = dy * CMapR(b.values().data(), k, n).transpose();
      accumulate_grad(a, g);
    }
    if (b.requires_grad()) {
      std::vector<double> g(k * n);
      MapR(g.data(), k, n).noalias() = CMapR(a.values().data(), m, k).transpose() * dy;
      accumulate_grad(b, g);
    }
  });
}

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  const bool vec = x.rank() == 1;
  Tensor x2 = vec ? reshape(x, {x.numel(), 1}) : x;
  Tensor y = matmul(weight, x2);
  if (bias.defined()) y = add_channel(y, bias);
  return vec ? reshape(y, {weight.dim(0)}) : y;
}

int64_t conv1d_output_length(int64_t length, int64_t kernel, const ConvOptions& opt) {
  return (length + 2 * opt.padding - opt.dilation * (kernel - 1) - 1) / opt.stride + 1;
}

Tensor conv1d(const Tensor& x, const Tensor& weight, const Tensor& bias,
              const ConvOptions& opt) {
  require(x.rank() == 2 && weight.rank() == 3, "conv1d ranks");
  const int64_t cin = x.dim(0), len = x.dim(1);
  const int64_t cout = weight.dim(0), cg = weight.dim(1), k = weight.dim(2);
  const int64_t groups = opt.groups;
  require(cg * groups == cin && cout % groups == 0,
          "conv1d channels: input " + shape_str(x.shape()) + " weight " +
              shape_str(weight.shape()) + " groups " + std::to_string(groups));
  const int64_t lout = conv1d_output_length(len, k, opt);
  require(lout >= 1, "conv1d: input length " + std::to_string(len) + " too short");
  if (bias.defined()) require(bias.numel() == cout, "conv1d bias");
  const int64_t og = cout / groups;
  const int64_t rows = cg * k;
  const int64_t s = opt.stride, p = opt.padding, d = opt.dilation;

  auto cols = std::make_shared<std::vector<double>>(groups * rows * lout, 0.0);
  const auto& xv = x.values();
  for (int64_t g = 0; g < groups; ++g) {
    double* col = cols->data() + g * rows * lout;
    for (int64_t c = 0; c < cg; ++c) {
      const double* xrow = xv.data() + (g * cg + c) * len;
      for (int64_t kk = 0; kk < k; ++kk) {
        double* out = col + (c * k + kk) * lout;
        const int64_t off = kk * d - p;
        for (int64_t t = 0; t < lout; ++t) {
          const int64_t pos = t * s + off;
          out[t] = (pos >= 0 && pos < len) ? xrow[pos] : 0.0;
        }
      }
    }
  }
  std::vector<double> y(cout * lout);
  const auto& wv = weight.values();
  for (int64_t g = 0; g < groups; ++g) {
    MapR(y.data() + g * og * lout, og, lout).noalias() =
        CMapR(wv.data() + g * og * rows, og, rows) *
        CMapR(cols->data() + g * rows * lout, rows, lout);
  }
  if (bias.defined()) {
    const auto& bv = bias.values();
    for (int64_t o = 0; o < cout; ++o) {
      for (int64_t t = 0; t < lout; ++t) y[o * lout + t] += bv[o];
    }
  }

  return make_result(
      {cout, lout}, std::move(y), {x, weight, bias},
      [=](detail::Node& self) {
        const double* dy = self.grad.data();
        if (weight.requires_grad()) {
          std::vector<double> gw(cout * rows);
          for (int64_t g = 0; g < groups; ++g) {
            MapR(gw.data() + g * og * rows, og, rows).noalias() =
                CMapR(dy + g * og * lout, og, lout) *
                CMapR(cols->data() + g * rows * lout, rows, lout).transpose();
          }
          accumulate_grad(weight, gw);
        }
        if (bias.defined() && bias.requires_grad()) {
          std::vector<double> gb(cout, 0.0);
          for (int64_t o = 0; o < cout; ++o) {
            for (int64_t t = 0; t < lout; ++t) gb[o] += dy[o * lout + t];
          }
          accumulate_grad(bias, gb);
        }
        if (x.requires_grad()) {
          std::vector<double> dcol(rows * lout);
          std::vector<double> gx(cin * len, 0.0);
          const auto& wv = weight.values();
          for (int64_t g = 0; g < groups; ++g) {
            MapR(dcol.data(), rows, lout).noalias() =
                CMapR(wv.data() + g * og * rows, og, rows).transpose() *
                CMapR(dy + g * og * lout, og, lout);
            for (int64_t c = 0; c < cg; ++c) {
              double* gxrow = gx.data() + (g * cg + c) * len;
              for (int64_t kk = 0; kk < k; ++kk) {
                const double* src = dcol.data() + (c * k + kk) * lout;
                const int64_t off = kk * d - p;
                for (int64_t t = 0; t < lout; ++t) {
                  const int64_t pos = t * s + off;
                  if (pos >= 0 && pos < len) gxrow[pos] += src[t];
                }
              }
            }
          }
          accumulate_grad(x, gx);
        }
      });
}

Tensor conv_transpose1d(const Tensor& x, const Tensor& weight, const Tensor& bias,
                        int64_t stride, int64_t padding) {
  require(x.rank() == 2 && weight.rank() == 3 && weight.dim(0) == x.dim(0),
          "conv_transpose1d: input " + shape_str(x.shape()) + " weight " +
              shape_str(weight.shape()));
  const int64_t cin = x.dim(0), len = x.dim(1);
  const int64_t cout = weight.dim(1), k = weight.dim(2);
  const int64_t lout = (len - 1) * stride - 2 * padding + k;
  require(lout >= 1, "conv_transpose1d: empty output");
  if (bias.defined()) require(bias.numel() == cout, "conv_transpose1d bias");
  const int64_t rows = cout * k;

  std::vector<double> col(rows * len);
  MapR(col.data(), rows, len).noalias() =
      CMapR(weight.values().data(), cin, rows).transpose() * CMapR(x.values().data(), cin, len);
  std::vector<double> y(cout * lout, 0.0);
  for (int64_t o = 0; o < cout; ++o) {
    for (int64_t kk = 0; kk < k; ++kk) {
      const double* src = col.data() + (o * k + kk) * len;
      for (int64_t t = 0; t < len; ++t) {
        const int64_t pos = t * stride + kk - padding;
        if (pos >= 0 && pos < lout) y[o * lout + pos] += src[t];
      }
    }
  }
  if (bias.defined()) {
    const auto& bv = bias.values();
    for (int64_t o = 0; o < cout; ++o) {
      for (int64_t t = 0; t < lout; ++t) y[o * lout + t] += bv[o];
    }
  }
  return make_result(
      {cout, lout}, std::move(y), {x, weight, bias}, [=](detail::Node& self) {
        const double* dy = self.grad.data();
        std::vector<double> dcol(rows * len, 0.0);
        for (int64_t o = 0; o < cout; ++o) {
          for (int64_t kk = 0; kk < k; ++kk) {
            double* dst = dcol.data() + (o * k + kk) * len;
            for (int64_t t = 0; t < len; ++t) {
              const int64_t pos = t * stride + kk - padding;
              if (pos >= 0 && pos < lout) dst[t] = dy[o * lout + pos];
            }
          }
        }
        if (x.requires_grad()) {
          std::vector<double> gx(cin * len);
          MapR(gx.data(), cin, len).noalias() =
              CMapR(weight.values().data(), cin, rows) * CMapR(dcol.data(), rows, len);
          accumulate_grad(x, gx);
        }
        if (weight.requires_grad()) {
          std::vector<double> gw(cin * rows);
          MapR(gw.data(), cin, rows).noalias() =
              CMapR(x.values().data(), cin, len) * CMapR(dcol.data(), rows, len).transpose();
          accumulate_grad(weight, gw);
        }
        if (bias.defined() && bias.requires_grad()) {
          std::vector<double> gb(cout, 0.0);
          for (int64_t o = 0; o < cout; ++o) {
            for (int64_t t = 0; t < lout; ++t) gb[o] += dy[o * lout + t];
          }
          accumulate_grad(bias, gb);
        }
      });
}

Tensor conv2d(const Tensor& x, const Tensor& weight, const Tensor& bias, int64_t stride,
              int64_t padding) {
  require(x.rank() == 3 && weight.rank() == 4 && weight.dim(1) == x.dim(0),
          "conv2d: input " + shape_str(x.shape()) + " weight " + shape_str(weight.shape()));
  const int64_t cin = x.dim(0), h = x.dim(1), w = x.dim(2);
  const int64_t cout = weight.dim(0), kh = weight.dim(2), kw = weight.dim(3);
  const int64_t ho = (h + 2 * padding - kh) / stride + 1;
  const int64_t wo = (w + 2 * padding - kw) / stride + 1;
  require(ho >= 1 && wo >= 1, "conv2d: input too small");
  const int64_t rows = cin * kh * kw, n = ho * wo;

  auto cols = std::make_shared<std::vector<double>>(rows * n, 0.0);
  const auto& xv = x.values();
  for (int64_t c = 0; c < cin; ++c) {
    for (int64_t a = 0; a < kh; ++a) {
      for (int64_t b = 0; b < kw; ++b) {
        double* dst = cols->data() + ((c * kh + a) * kw + b) * n;
        for (int64_t i = 0; i < ho; ++i) {
          const int64_t r = i * stride + a - padding;
          for (int64_t j = 0; j < wo; ++j) {
            const int64_t q = j * stride + b - padding;
            dst[i * wo + j] =
                (r >= 0 && r < h && q >= 0 && q < w) ? xv[(c * h + r) * w + q] : 0.0;
          }
        }
      }
    }
  }
  std::vector<double> y(cout * n);
  MapR(y.data(), cout, n).noalias() =
      CMapR(weight.values().data(), cout, rows) * CMapR(cols->data(), rows, n);
  if (bias.defined()) {
    const auto& bv = bias.values();
    for (int64_t o = 0; o < cout; ++o) {
      for (int64_t t = 0; t < n; ++t) y[o * n + t] += bv[o];
    }
  }
  return make_result(
      {cout, ho, wo}, std::move(y), {x, weight, bias}, [=](detail::Node& self) {
        const double* dy = self.grad.data();
        if (weight.requires_grad()) {
          std::vector<double> gw(cout * rows);
          MapR(gw.data(), cout, rows).noalias() =
              CMapR(dy, cout, n) * CMapR(cols->data(), rows, n).transpose();
          accumulate_grad(weight, gw);
        }
        if (bias.defined() && bias.requires_grad()) {
          std::vector<double> gb(cout, 0.0);
          for (int64_t o = 0; o < cout; ++o) {
            for (int64_t t = 0; t < n; ++t) gb[o] += dy[o * n + t];
          }
          accumulate_grad(bias, gb);
        }
        if (x.requires_grad()) {
          std::vector<double> dcol(rows * n);
          MapR(dcol.data(), rows, n).noalias() =
              CMapR(weight.values().data(), cout, rows).transpose() * CMapR(dy, cout, n);
          std::vector<double> gx(cin * h * w, 0.0);
          for (int64_t c = 0; c < cin; ++c) {
            for (int64_t a = 0; a < kh; ++a) {
              for (int64_t b = 0; b < kw; ++b) {
                const double* src = dcol.data() + ((c * kh + a) * kw + b) * n;
                for (int64_t i = 0; i < ho; ++i) {
                  const int64_t r = i * stride + a - padding;
                  if (r < 0 || r >= h) continue;
                  for (int64_t j = 0; j < wo; ++j) {
                    const int64_t q = j * stride + b - padding;
                    if (q >= 0 && q < w) gx[(c * h + r) * w + q] += src[i * wo + j];
                  }
                }
              }
            }
          }
          accumulate_grad(x, gx);
        }
      });
}

Tensor slice_rows(const Tensor& x, int64_t start, int64_t count) {
  require(x.rank() == 2 && start >= 0 && count >= 0 && start + count <= x.dim(0),
          "slice_rows out of range");
  const int64_t cols = x.dim(1);
  std::vector<double> y(x.values().begin() + start * cols,
                        x.values().begin() + (start + count) * cols);
  return make_result({count, cols}, std::move(y), {x}, [x, start, cols](detail::Node& self) {
    std::vector<double> g(x.numel(), 0.0);
    std::copy(self.grad.begin(), self.grad.end(), g.begin() + start * cols);
    accumulate_grad(x, g);
  });
}

Tensor slice_cols(const Tensor& x, int64_t start, int64_t count) {
  require(x.rank() == 2 && start >= 0 && count >= 0 && start + count <= x.dim(1),
          "slice_cols out of range");
  const int64_t rows = x.dim(0), cols = x.dim(1);
  std::vector<double> y(rows * count);
  for (int64_t r = 0; r < rows; ++r) {
    std::copy_n(x.values().begin() + r * cols + start, count, y.begin() + r * count);
  }
  return make_result({rows, count}, std::move(y), {x},
                     [x, start, rows, cols, count](detail::Node& self) {
                       std::vector<double> g(x.numel(), 0.0);
                       for (int64_t r = 0; r < rows; ++r) {
                         std::copy_n(self.grad.begin() + r * count, count,
                                     g.begin() + r * cols + start);
                       }
                       accumulate_grad(x, g);
                     });
}

Tensor concat_rows(const Tensor& a, const Tensor& b) {
  require(a.rank() == 2 && b.rank() == 2 && a.dim(1) == b.dim(1), "concat_rows");
  std::vector<double> y(a.values());
  y.insert(y.end(), b.values().begin(), b.values().end());
  const int64_t na = a.numel();
  return make_result({a.dim(0) + b.dim(0), a.dim(1)}, std::move(y), {a, b},
                     [a, b, na](detail::Node& self) {
                       accumulate_grad(a, std::span<const double>(self.grad).first(na));
                       accumulate_grad(b, std::span<const double>(self.grad).subspan(na));
                     });
}

Tensor flip_rows(const Tensor& x) {
  require(x.rank() == 2, "flip_rows needs rank 2");
  const int64_t rows = x.dim(0), cols = x.dim(1);
  std::vector<double> y(x.numel());
  for (int64_t r = 0; r < rows; ++r) {
    std::copy_n(x.values().begin() + r * cols, cols, y.begin() + (rows - 1 - r) * cols);
  }
  return make_result(x.shape(), std::move(y), {x}, [x, rows, cols](detail::Node& self) {
    std::vector<double> g(x.numel());
    for (int64_t r = 0; r < rows; ++r) {
      std::copy_n(self.grad.begin() + r * cols, cols, g.begin() + (rows - 1 - r) * cols);
    }
    accumulate_grad(x, g);
  });
}

Tensor gather_cols(const Tensor& x, std::span<const int64_t> index) {
  require(x.rank() == 2, "gather_cols needs rank 2");
  const int64_t rows = x.dim(0), cols = x.dim(1);
  const int64_t n = static_cast<int64_t>(index.size());
  std::vector<int64_t> idx(index.begin(), index.end());
  for (int64_t j : idx) require(j >= 0 && j < cols, "gather_cols index out of range");
  std::vector<double> y(rows * n);
  const auto& xv = x.values();
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t j = 0; j < n; ++j) y[r * n + j] = xv[r * cols + idx[j]];
  }
  return make_result({rows, n}, std::move(y), {x}, [x, idx, rows, cols, n](detail::Node& self) {
    std::vector<double> g(x.numel(), 0.0);
    for (int64_t r = 0; r < rows; ++r) {
      for (int64_t j = 0; j < n; ++j) g[r * cols + idx[j]] += self.grad[r * n + j];
    }
    accumulate_grad(x, g);
  });
}

Tensor reflect_pad_cols(const Tensor& x, int64_t left, int64_t right) {
  require(x.rank() == 2, "reflect_pad_cols needs rank 2");
  const int64_t cols = x.dim(1);
  require(left < cols && right < cols, "reflect padding wider than the signal");
  std::vector<int64_t> idx;
  idx.reserve(left + cols + right);
  for (int64_t i = left; i >= 1; --i) idx.push_back(i);
  for (int64_t i = 0; i < cols; ++i) idx.push_back(i);
  for (int64_t i = 1; i <= right; ++i) idx.push_back(cols - 1 - i);
  return gather_cols(x, idx);
}

Tensor embedding(const Tensor& table, std::span<const int> ids) {
  require(table.rank() == 2, "embedding table needs rank 2");
  const int64_t v = table.dim(0), h = table.dim(1);
  const int64_t n = static_cast<int64_t>(ids.size());
  std::vector<int> idv(ids.begin(), ids.end());
  for (int id : idv) require(id >= 0 && id < v, "embedding id out of range");
  std::vector<double> y(h * n);
  const auto& tv = table.values();
  for (int64_t j = 0; j < n; ++j) {
    for (int64_t c = 0; c < h; ++c) y[c * n + j] = tv[idv[j] * h + c];
  }
  return make_result({h, n}, std::move(y), {table}, [table, idv, h, n](detail::Node& self) {
    std::vector<double> g(table.numel(), 0.0);
    for (int64_t j = 0; j < n; ++j) {
      for (int64_t c = 0; c < h; ++c) g[idv[j] * h + c] += self.grad[c * n + j];
    }
    accumulate_grad(table, g);
  });
}

Tensor l1_loss(const Tensor& a, const Tensor& b) { return mean(abs(sub(a, b))); }

Tensor mse_loss(const Tensor& a, const Tensor& b) { return mean(square(sub(a, b))); }

}  // namespace ascl::nn
