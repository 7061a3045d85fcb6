/* Copyright 2026 The NoiseKWS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "nn/layers.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>

namespace nkws::nn {

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;

struct ConvGeometry {
  std::size_t n, cin, h, w, cout, kh, kw, stride, pad_h, pad_w, oh, ow;
  std::size_t patch() const { return cin * kh * kw; }
};

template <typename T>
ConvGeometry conv_geometry(const Tensor<T>& input, const Tensor<T>& kernels,
                           int stride) {
  expect_rank(input, 4, "conv2d input");
  expect_rank(kernels, 4, "conv2d kernels");
  if (stride < 1) fail(ErrorCode::kShapeMismatch, "conv2d stride must be >= 1");
  ConvGeometry g{};
  g.n = input.dim(0);
  g.cin = input.dim(1);
  g.h = input.dim(2);
  g.w = input.dim(3);
  g.cout = kernels.dim(0);
  g.kh = kernels.dim(2);
  g.kw = kernels.dim(3);
  if (kernels.dim(1) != g.cin) {
    fail(ErrorCode::kShapeMismatch,
         "conv2d kernels expect " + std::to_string(kernels.dim(1)) +
             " input channels, input has " + std::to_string(g.cin));
  }
  if (g.kh % 2 == 0 || g.kw % 2 == 0) {
    fail(ErrorCode::kShapeMismatch, "same padding needs odd kernel sizes");
  }
  if (g.h < g.kh || g.w < g.kw) {
    fail(ErrorCode::kShapeMismatch, "conv2d input smaller than kernel");
  }
  g.stride = static_cast<std::size_t>(stride);
  g.pad_h = (g.kh - 1) / 2;
  g.pad_w = (g.kw - 1) / 2;
  g.oh = (g.h + 2 * g.pad_h - g.kh) / g.stride + 1;
  g.ow = (g.w + 2 * g.pad_w - g.kw) / g.stride + 1;
  return g;
}

// cols[(c*kh + i)*kw + j][oy*ow + ox] = x[c][oy*s + i - ph][ox*s + j - pw]
template <typename T>
void im2col(const T* x, const ConvGeometry& g, T* cols) {
  const std::size_t plane = g.oh * g.ow;
  for (std::size_t c = 0; c < g.cin; ++c) {
    for (std::size_t i = 0; i < g.kh; ++i) {
      for (std::size_t j = 0; j < g.kw; ++j) {
        T* row = cols + ((c * g.kh + i) * g.kw + j) * plane;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const auto y = static_cast<long long>(oy * g.stride + i) -
                         static_cast<long long>(g.pad_h);
          T* dst = row + oy * g.ow;
          if (y < 0 || y >= static_cast<long long>(g.h)) {
            std::fill(dst, dst + g.ow, T{0});
            continue;
          }
          const T* src = x + (c * g.h + static_cast<std::size_t>(y)) * g.w;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const auto xx = static_cast<long long>(ox * g.stride + j) -
                            static_cast<long long>(g.pad_w);
            dst[ox] = (xx < 0 || xx >= static_cast<long long>(g.w))
                          ? T{0}
                          : src[static_cast<std::size_t>(xx)];
          }
        }
      }
    }
  }
}

template <typename T>
void col2im(const T* cols, const ConvGeometry& g, T* x) {
  const std::size_t plane = g.oh * g.ow;
  std::fill(x, x + g.cin * g.h * g.w, T{0});
  for (std::size_t c = 0; c < g.cin; ++c) {
    for (std::size_t i = 0; i < g.kh; ++i) {
      for (std::size_t j = 0; j < g.kw; ++j) {
        const T* row = cols + ((c * g.kh + i) * g.kw + j) * plane;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const auto y = static_cast<long long>(oy * g.stride + i) -
                         static_cast<long long>(g.pad_h);
          if (y < 0 || y >= static_cast<long long>(g.h)) continue;
          T* dst = x + (c * g.h + static_cast<std::size_t>(y)) * g.w;
          const T* src = row + oy * g.ow;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const auto xx = static_cast<long long>(ox * g.stride + j) -
                            static_cast<long long>(g.pad_w);
            if (xx < 0 || xx >= static_cast<long long>(g.w)) continue;
            dst[static_cast<std::size_t>(xx)] += src[ox];
          }
        }
      }
    }
  }
}

struct ChannelLayout {
  std::size_t n, c, plane;
};

template <typename T>
ChannelLayout channel_layout(const Tensor<T>& t, const char* what) {
  expect_rank(t, 4, what);
  return {t.dim(0), t.dim(1), t.dim(2) * t.dim(3)};
}

}  // namespace

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& kernels,
                         const Tensor<T>& bias, int stride) {
  const ConvGeometry g = conv_geometry(input, kernels, stride);
  expect_dims(bias, {g.cout}, "conv2d bias");
  Tensor<T> out({g.n, g.cout, g.oh, g.ow});
  const std::size_t plane = g.oh * g.ow;
  std::vector<T> cols(g.patch() * plane);
  const ConstMatMap<T> w(kernels.data(), static_cast<Eigen::Index>(g.cout),
                         static_cast<Eigen::Index>(g.patch()));
  for (std::size_t n = 0; n < g.n; ++n) {
    im2col(input.data() + n * g.cin * g.h * g.w, g, cols.data());
    const ConstMatMap<T> c(cols.data(), static_cast<Eigen::Index>(g.patch()),
                           static_cast<Eigen::Index>(plane));
    MatMap<T> o(out.data() + n * g.cout * plane, static_cast<Eigen::Index>(g.cout),
                static_cast<Eigen::Index>(plane));
    o.noalias() = w * c;
    for (std::size_t co = 0; co < g.cout; ++co) {
      o.row(static_cast<Eigen::Index>(co)).array() += bias[co];
    }
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& kernels,
                             const Tensor<T>& grad_out, int stride) {
  const ConvGeometry g = conv_geometry(input, kernels, stride);
  expect_dims(grad_out, {g.n, g.cout, g.oh, g.ow}, "conv2d grad_out");
  const std::size_t plane = g.oh * g.ow;
  ConvGrads<T> grads{Tensor<T>(input.dims()), Tensor<T>(kernels.dims()),
                     Tensor<T>({g.cout})};
  std::vector<T> cols(g.patch() * plane);
  std::vector<T> grad_cols(g.patch() * plane);
  const ConstMatMap<T> w(kernels.data(), static_cast<Eigen::Index>(g.cout),
                         static_cast<Eigen::Index>(g.patch()));
  MatMap<T> gw(grads.kernels.data(), static_cast<Eigen::Index>(g.cout),
               static_cast<Eigen::Index>(g.patch()));
  for (std::size_t n = 0; n < g.n; ++n) {
    im2col(input.data() + n * g.cin * g.h * g.w, g, cols.data());
    const ConstMatMap<T> c(cols.data(), static_cast<Eigen::Index>(g.patch()),
                           static_cast<Eigen::Index>(plane));
    const ConstMatMap<T> go(grad_out.data() + n * g.cout * plane,
                            static_cast<Eigen::Index>(g.cout),
                            static_cast<Eigen::Index>(plane));
    gw.noalias() += go * c.transpose();
    for (std::size_t co = 0; co < g.cout; ++co) {
      double acc = 0.0;
      const T* row = go.data() + co * plane;
      for (std::size_t p = 0; p < plane; ++p) acc += row[p];
      grads.bias[co] += static_cast<T>(acc);
    }
    MatMap<T> gc(grad_cols.data(), static_cast<Eigen::Index>(g.patch()),
                 static_cast<Eigen::Index>(plane));
    gc.noalias() = w.transpose() * go;
    col2im(grad_cols.data(), g, grads.input.data() + n * g.cin * g.h * g.w);
  }
  return grads;
}

template <typename T>
Tensor<T> batchnorm_forward(const Tensor<T>& input, const Tensor<T>& gamma,
                            const Tensor<T>& beta, Tensor<T>& running_mean,
                            Tensor<T>& running_var, Mode mode, double momentum,
                            double eps, BatchNormCache<T>* cache) {
  const ChannelLayout L = channel_layout(input, "batchnorm input");
  expect_dims(gamma, {L.c}, "batchnorm gamma");
  expect_dims(beta, {L.c}, "batchnorm beta");
  expect_dims(running_mean, {L.c}, "batchnorm running_mean");
  expect_dims(running_var, {L.c}, "batchnorm running_var");
  if (mode == Mode::kInfer) {
    return batchnorm_infer(input, gamma, beta, running_mean, running_var, eps);
  }
  const std::size_t m = L.n * L.plane;
  if (m < 2) {
    fail(ErrorCode::kDegenerateBatch,
         "batch statistics need more than one value per channel");
  }
  Tensor<T> out(input.dims());
  if (cache) {
    cache->x_hat = Tensor<T>(input.dims());
    cache->inv_std.assign(L.c, 0.0);
  }
  for (std::size_t c = 0; c < L.c; ++c) {
    double sum = 0.0;
    for (std::size_t n = 0; n < L.n; ++n) {
      const T* x = input.data() + (n * L.c + c) * L.plane;
      for (std::size_t p = 0; p < L.plane; ++p) sum += x[p];
    }
    const double mean = sum / static_cast<double>(m);
    double sq = 0.0;
    for (std::size_t n = 0; n < L.n; ++n) {
      const T* x = input.data() + (n * L.c + c) * L.plane;
      for (std::size_t p = 0; p < L.plane; ++p) {
        const double d = x[p] - mean;
        sq += d * d;
      }
    }
    const double var = sq / static_cast<double>(m);
    const double inv_std = 1.0 / std::sqrt(var + eps);
    const double gm = gamma[c];
    const double bt = beta[c];
    for (std::size_t n = 0; n < L.n; ++n) {
      const std::size_t off = (n * L.c + c) * L.plane;
      const T* x = input.data() + off;
      T* y = out.data() + off;
      T* xh = cache ? cache->x_hat.data() + off : nullptr;
      for (std::size_t p = 0; p < L.plane; ++p) {
        const double h = (x[p] - mean) * inv_std;
        if (xh) xh[p] = static_cast<T>(h);
        y[p] = static_cast<T>(gm * h + bt);
      }
    }
    if (cache) cache->inv_std[c] = inv_std;
    const double unbiased = sq / static_cast<double>(m - 1);
    running_mean[c] = static_cast<T>((1.0 - momentum) * running_mean[c] + momentum * mean);
    running_var[c] = static_cast<T>((1.0 - momentum) * running_var[c] + momentum * unbiased);
  }
  return out;
}

template <typename T>
Tensor<T> batchnorm_infer(const Tensor<T>& input, const Tensor<T>& gamma,
                          const Tensor<T>& beta, const Tensor<T>& running_mean,
                          const Tensor<T>& running_var, double eps) {
  const ChannelLayout L = channel_layout(input, "batchnorm input");
  expect_dims(gamma, {L.c}, "batchnorm gamma");
  expect_dims(beta, {L.c}, "batchnorm beta");
  expect_dims(running_mean, {L.c}, "batchnorm running_mean");
  expect_dims(running_var, {L.c}, "batchnorm running_var");
  Tensor<T> out(input.dims());
  for (std::size_t c = 0; c < L.c; ++c) {
    const double scale = gamma[c] / std::sqrt(static_cast<double>(running_var[c]) + eps);
    const double shift = beta[c] - running_mean[c] * scale;
    const T s = static_cast<T>(scale);
    const T b = static_cast<T>(shift);
    for (std::size_t n = 0; n < L.n; ++n) {
      const std::size_t off = (n * L.c + c) * L.plane;
      const T* x = input.data() + off;
      T* y = out.data() + off;
      for (std::size_t p = 0; p < L.plane; ++p) y[p] = x[p] * s + b;
    }
  }
  return out;
}

template <typename T>
BatchNormGrads<T> batchnorm_backward(const Tensor<T>& grad_out,
                                     const Tensor<T>& gamma,
                                     const BatchNormCache<T>& cache) {
  const ChannelLayout L = channel_layout(grad_out, "batchnorm grad_out");
  expect_dims(cache.x_hat, grad_out.dims(), "batchnorm cache");
  expect_dims(gamma, {L.c}, "batchnorm gamma");
  if (cache.inv_std.size() != L.c) {
    fail(ErrorCode::kShapeMismatch, "batchnorm cache channel count");
  }
  const auto m = static_cast<double>(L.n * L.plane);
  BatchNormGrads<T> grads{Tensor<T>(grad_out.dims()), Tensor<T>({L.c}),
                          Tensor<T>({L.c})};
  for (std::size_t c = 0; c < L.c; ++c) {
    double sum_dy = 0.0;
    double sum_dy_xh = 0.0;
    for (std::size_t n = 0; n < L.n; ++n) {
      const std::size_t off = (n * L.c + c) * L.plane;
      const T* dy = grad_out.data() + off;
      const T* xh = cache.x_hat.data() + off;
      for (std::size_t p = 0; p < L.plane; ++p) {
        sum_dy += dy[p];
        sum_dy_xh += static_cast<double>(dy[p]) * xh[p];
      }
    }
    grads.beta[c] = static_cast<T>(sum_dy);
    grads.gamma[c] = static_cast<T>(sum_dy_xh);
    const double k = gamma[c] * cache.inv_std[c] / m;
    for (std::size_t n = 0; n < L.n; ++n) {
      const std::size_t off = (n * L.c + c) * L.plane;
      const T* dy = grad_out.data() + off;
      const T* xh = cache.x_hat.data() + off;
      T* dx = grads.input.data() + off;
      for (std::size_t p = 0; p < L.plane; ++p) {
        dx[p] = static_cast<T>(k * (m * dy[p] - sum_dy - xh[p] * sum_dy_xh));
      }
    }
  }
  return grads;
}

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input) {
  Tensor<T> out(input.dims());
  for (std::size_t i = 0; i < input.size(); ++i) {
    out[i] = input[i] > T{0} ? input[i] : T{0};
  }
  return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out) {
  expect_dims(grad_out, input.dims(), "relu grad_out");
  Tensor<T> out(input.dims());
  for (std::size_t i = 0; i < input.size(); ++i) {
    out[i] = input[i] > T{0} ? grad_out[i] : T{0};
  }
  return out;
}

template <typename T>
Tensor<T> global_avg_pool_forward(const Tensor<T>& input) {
  const ChannelLayout L = channel_layout(input, "global_avg_pool input");
  if (L.plane == 0) fail(ErrorCode::kShapeMismatch, "global_avg_pool on empty map");
  Tensor<T> out({L.n, L.c});
  for (std::size_t i = 0; i < L.n * L.c; ++i) {
    const T* x = input.data() + i * L.plane;
    double acc = 0.0;
    for (std::size_t p = 0; p < L.plane; ++p) acc += x[p];
    out[i] = static_cast<T>(acc / static_cast<double>(L.plane));
  }
  return out;
}

template <typename T>
Tensor<T> global_avg_pool_backward(const Tensor<T>& grad_out, std::size_t height,
                                   std::size_t width) {
  expect_rank(grad_out, 2, "global_avg_pool grad_out");
  const std::size_t plane = height * width;
  Tensor<T> out({grad_out.dim(0), grad_out.dim(1), height, width});
  for (std::size_t i = 0; i < grad_out.size(); ++i) {
    const T g = static_cast<T>(grad_out[i] / static_cast<double>(plane));
    std::fill(out.data() + i * plane, out.data() + (i + 1) * plane, g);
  }
  return out;
}

template <typename T>
Tensor<T> fc_forward(const Tensor<T>& features, const Tensor<T>& weights,
                     const Tensor<T>& bias) {
  expect_rank(features, 2, "fc features");
  expect_rank(weights, 2, "fc weights");
  const std::size_t n = features.dim(0);
  const std::size_t c = features.dim(1);
  const std::size_t k = weights.dim(0);
  if (weights.dim(1) != c) {
    fail(ErrorCode::kShapeMismatch,
         "fc weights expect " + std::to_string(weights.dim(1)) +
             " features, got " + std::to_string(c));
  }
  expect_dims(bias, {k}, "fc bias");
  Tensor<T> out({n, k});
  for (std::size_t i = 0; i < n; ++i) {
    const T* f = features.data() + i * c;
    for (std::size_t j = 0; j < k; ++j) {
      const T* w = weights.data() + j * c;
      double acc = bias[j];
      for (std::size_t q = 0; q < c; ++q) acc += static_cast<double>(w[q]) * f[q];
      out[i * k + j] = static_cast<T>(acc);
    }
  }
  return out;
}

template <typename T>
FcGrads<T> fc_backward(const Tensor<T>& features, const Tensor<T>& weights,
                       const Tensor<T>& grad_logits) {
  expect_rank(features, 2, "fc features");
  const std::size_t n = features.dim(0);
  const std::size_t c = features.dim(1);
  expect_rank(weights, 2, "fc weights");
  const std::size_t k = weights.dim(0);
  expect_dims(weights, {k, c}, "fc weights");
  expect_dims(grad_logits, {n, k}, "fc grad_logits");
  FcGrads<T> grads{Tensor<T>({n, c}), Tensor<T>({k, c}), Tensor<T>({k})};
  for (std::size_t j = 0; j < k; ++j) {
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) gb += grad_logits[i * k + j];
    grads.bias[j] = static_cast<T>(gb);
    for (std::size_t q = 0; q < c; ++q) {
      double gw = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        gw += static_cast<double>(grad_logits[i * k + j]) * features[i * c + q];
      }
      grads.weights[j * c + q] = static_cast<T>(gw);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < c; ++q) {
      double gf = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        gf += static_cast<double>(grad_logits[i * k + j]) * weights[j * c + q];
      }
      grads.features[i * c + q] = static_cast<T>(gf);
    }
  }
  return grads;
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& logits) {
  expect_rank(logits, 2, "softmax logits");
  const std::size_t n = logits.dim(0);
  const std::size_t k = logits.dim(1);
  Tensor<T> out(logits.dims());
  for (std::size_t i = 0; i < n; ++i) {
    const T* z = logits.data() + i * k;
    const double mx = *std::max_element(z, z + k);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += std::exp(z[j] - mx);
    for (std::size_t j = 0; j < k; ++j) {
      out[i * k + j] = static_cast<T>(std::exp(z[j] - mx) / sum);
    }
  }
  return out;
}

template <typename T>
LossAndGrad<T> softmax_cross_entropy(const Tensor<T>& logits,
                                     std::span<const int> labels) {
  expect_rank(logits, 2, "cross-entropy logits");
  const std::size_t n = logits.dim(0);
  const std::size_t k = logits.dim(1);
  if (labels.size() != n) {
    fail(ErrorCode::kShapeMismatch, "cross-entropy needs one label per row");
  }
  LossAndGrad<T> result{0.0, Tensor<T>(logits.dims())};
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= k) {
      fail(ErrorCode::kShapeMismatch, "label " + std::to_string(y) + " out of range");
    }
    const T* z = logits.data() + i * k;
    const double mx = *std::max_element(z, z + k);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += std::exp(z[j] - mx);
    const double log_sum = std::log(sum) + mx;
    total += log_sum - z[y];
    for (std::size_t j = 0; j < k; ++j) {
      const double p = std::exp(z[j] - log_sum);
      const double onehot = static_cast<int>(j) == y ? 1.0 : 0.0;
      result.grad_logits[i * k + j] = static_cast<T>((p - onehot) / static_cast<double>(n));
    }
  }
  result.loss = total / static_cast<double>(n);
  return result;
}

#define NKWS_INSTANTIATE_LAYERS(T)                                              \
  template Tensor<T> conv2d_forward(const Tensor<T>&, const Tensor<T>&,         \
                                    const Tensor<T>&, int);                     \
  template ConvGrads<T> conv2d_backward(const Tensor<T>&, const Tensor<T>&,     \
                                        const Tensor<T>&, int);                 \
  template Tensor<T> batchnorm_forward(const Tensor<T>&, const Tensor<T>&,      \
                                       const Tensor<T>&, Tensor<T>&,            \
                                       Tensor<T>&, Mode, double, double,        \
                                       BatchNormCache<T>*);                     \
  template Tensor<T> batchnorm_infer(const Tensor<T>&, const Tensor<T>&,        \
                                     const Tensor<T>&, const Tensor<T>&,        \
                                     const Tensor<T>&, double);                 \
  template BatchNormGrads<T> batchnorm_backward(                                \
      const Tensor<T>&, const Tensor<T>&, const BatchNormCache<T>&);            \
  template Tensor<T> relu_forward(const Tensor<T>&);                            \
  template Tensor<T> relu_backward(const Tensor<T>&, const Tensor<T>&);         \
  template Tensor<T> global_avg_pool_forward(const Tensor<T>&);                 \
  template Tensor<T> global_avg_pool_backward(const Tensor<T>&, std::size_t,    \
                                              std::size_t);                     \
  template Tensor<T> fc_forward(const Tensor<T>&, const Tensor<T>&,             \
                                const Tensor<T>&);                              \
  template FcGrads<T> fc_backward(const Tensor<T>&, const Tensor<T>&,           \
                                  const Tensor<T>&);                            \
  template Tensor<T> softmax(const Tensor<T>&);                                 \
  template LossAndGrad<T> softmax_cross_entropy(const Tensor<T>&,               \
                                                std::span<const int>);

NKWS_INSTANTIATE_LAYERS(float)
NKWS_INSTANTIATE_LAYERS(double)

#undef NKWS_INSTANTIATE_LAYERS

}  // namespace nkws::nn
