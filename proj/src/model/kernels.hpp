// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense row-major kernels used by the transformer. Weights are stored
// [in x out] so a linear layer is y = x W.

#pragma once

#include <cmath>
#include <cstddef>

namespace slam::model::kernels {

// C[M x N] = A[M x K] * B[K x N]
inline void matmul(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// D[K x N] += A[M x K]^T * G[M x N]
inline void matmul_tn_acc(const double* a, const double* g, double* d, std::size_t m,
                          std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    const double* grow = g + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      double* drow = d + p * n;
      for (std::size_t j = 0; j < n; ++j) drow[j] += av * grow[j];
    }
  }
}

// C[M x K] (+)= G[M x N] * B[K x N]^T
inline void matmul_nt(const double* g, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* grow = g + i * n;
    double* crow = c + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double* brow = b + p * n;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += grow[j] * brow[j];
      crow[p] = accumulate ? crow[p] + s : s;
    }
  }
}

inline constexpr double kRmsEps = 1e-5;

// y = x / rms(x) * gain, row-wise over [rows x dim]. Stores 1/rms per row.
inline void rms_norm(const double* x, const double* gain, double* y, double* inv_rms,
                     std::size_t rows, std::size_t dim) {
  for (std::size_t t = 0; t < rows; ++t) {
    const double* xr = x + t * dim;
    double ms = 0.0;
    for (std::size_t i = 0; i < dim; ++i) ms += xr[i] * xr[i];
    ms /= static_cast<double>(dim);
    const double r = 1.0 / std::sqrt(ms + kRmsEps);
    inv_rms[t] = r;
    double* yr = y + t * dim;
    for (std::size_t i = 0; i < dim; ++i) yr[i] = xr[i] * r * gain[i];
  }
}

// Backward of rms_norm: dx += dL/dx, dgain += dL/dgain.
inline void rms_norm_backward(const double* x, const double* gain, const double* inv_rms,
                              const double* dy, double* dx, double* dgain,
                              std::size_t rows, std::size_t dim) {
  for (std::size_t t = 0; t < rows; ++t) {
    const double* xr = x + t * dim;
    const double* dyr = dy + t * dim;
    double* dxr = dx + t * dim;
    const double r = inv_rms[t];
    double dot = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      dgain[i] += dyr[i] * xr[i] * r;
      dot += dyr[i] * gain[i] * xr[i];
    }
    const double coef = r * r * r * dot / static_cast<double>(dim);
    for (std::size_t i = 0; i < dim; ++i) dxr[i] += r * gain[i] * dyr[i] - coef * xr[i];
  }
}

inline double gelu(double u) { return 0.5 * u * (1.0 + std::erf(u * M_SQRT1_2)); }

inline double gelu_grad(double u) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return 0.5 * (1.0 + std::erf(u * M_SQRT1_2)) + u * kInvSqrt2Pi * std::exp(-0.5 * u * u);
}

}  // namespace slam::model::kernels
