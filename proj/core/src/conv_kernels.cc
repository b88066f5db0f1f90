// Copyright 2026 The lightconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "conv_kernels.h"

#include <algorithm>
#include <cstring>
#include <utility>
#include <vector>

namespace lightconv::internal {
namespace {

using Vec = double __attribute__((vector_size(64)));
constexpr std::size_t kLanes = 8;
constexpr std::size_t kTileVecs = 4;  // forward tile: 32 samples
constexpr std::size_t kTile = kLanes * kTileVecs;
constexpr int kMaxLagBlock = 12;
constexpr std::size_t kGradChunk = 1024;  // samples, a multiple of kLanes

inline Vec Load(const double* p) {
  Vec v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

inline void Store(double* p, Vec v) { std::memcpy(p, &v, sizeof(v)); }

inline double HorizontalSum(Vec v) {
  double s = 0.0;
#pragma GCC unroll 8
  for (std::size_t l = 0; l < kLanes; ++l) s += v[l];
  return s;
}

std::size_t RoundUp(std::size_t n, std::size_t m) { return (n + m - 1) / m * m; }

template <int OB>
void ForwardBlock(const double* weight, int in_channels, int kernel,
                  const PaddedSignal& px, std::size_t tiled_len,
                  const char* active, double* tmp) {
  const std::size_t row_stride = static_cast<std::size_t>(in_channels) * kernel;
  for (std::size_t t = 0; t < tiled_len; t += kTile) {
    Vec acc[OB][kTileVecs] = {};
    for (int i = 0; i < in_channels; ++i) {
      if (!active[i]) continue;
      const double* xi = px.row(i) + t;
      const double* wi = weight + static_cast<std::size_t>(i) * kernel;
      for (int k = 0; k < kernel; ++k) {
        Vec xv[kTileVecs];
#pragma GCC unroll 4
        for (std::size_t c = 0; c < kTileVecs; ++c) xv[c] = Load(xi + k + c * kLanes);
#pragma GCC unroll 4
        for (int q = 0; q < OB; ++q) {
          const double wv = wi[q * row_stride + k];
#pragma GCC unroll 4
          for (std::size_t c = 0; c < kTileVecs; ++c) acc[q][c] += wv * xv[c];
        }
      }
    }
#pragma GCC unroll 4
    for (int q = 0; q < OB; ++q) {
#pragma GCC unroll 4
      for (std::size_t c = 0; c < kTileVecs; ++c) {
        Store(tmp + q * tiled_len + t + c * kLanes, acc[q][c]);
      }
    }
  }
}

template <int OB, int KB>
void GradTile(const PaddedSignal& pg, std::size_t o0, const double* xi,
              std::size_t t0, std::size_t t1, int lag0, double* const* dst) {
  Vec acc[OB][KB] = {};
  for (std::size_t t = t0; t < t1; t += kLanes) {
    Vec g[OB];
#pragma GCC unroll 2
    for (int q = 0; q < OB; ++q) g[q] = Load(pg.row(o0 + q) + t);
#pragma GCC unroll 12
    for (int kk = 0; kk < KB; ++kk) {
      const Vec xv = Load(xi + t + lag0 + kk);
#pragma GCC unroll 2
      for (int q = 0; q < OB; ++q) acc[q][kk] += g[q] * xv;
    }
  }
#pragma GCC unroll 2
  for (int q = 0; q < OB; ++q) {
#pragma GCC unroll 12
    for (int kk = 0; kk < KB; ++kk) dst[q][lag0 + kk] += HorizontalSum(acc[q][kk]);
  }
}

template <int OB, int... KBs>
void GradTileDispatch(int kb, std::integer_sequence<int, KBs...>,
                      const PaddedSignal& pg, std::size_t o0, const double* xi,
                      std::size_t t0, std::size_t t1, int lag0, double* const* dst) {
  (void)((kb == KBs + 1 ? (GradTile<OB, KBs + 1>(pg, o0, xi, t0, t1, lag0, dst), true)
                        : false) ||
         ...);
}

template <int OB>
void GradBlock(const PaddedSignal& pg, const PaddedSignal& px, std::size_t o0,
               int in_channels, int kernel, std::size_t t0, std::size_t t1,
               std::span<double> dweight) {
  const std::size_t row_stride = static_cast<std::size_t>(in_channels) * kernel;
  for (int i = 0; i < in_channels; ++i) {
    double* dst[OB];
    for (int q = 0; q < OB; ++q) {
      dst[q] = dweight.data() + (o0 + q) * row_stride +
               static_cast<std::size_t>(i) * kernel;
    }
    for (int lag0 = 0; lag0 < kernel; lag0 += kMaxLagBlock) {
      const int kb = std::min(kMaxLagBlock, kernel - lag0);
      GradTileDispatch<OB>(kb, std::make_integer_sequence<int, kMaxLagBlock>{}, pg,
                           o0, px.row(i), t0, t1, lag0, dst);
    }
  }
}

bool RowIsZero(const Array2D& a, std::size_t r) {
  const auto row = a.row(r);
  return std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; });
}

}  // namespace

PaddedSignal::PaddedSignal(const Array2D& x, std::size_t lead,
                           std::size_t min_row_len)
    : rows_(x.rows()),
      stride_(RoundUp(std::max(min_row_len, lead + x.cols()) + kLanes, kLanes)),
      data_(rows_ * stride_, 0.0) {
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto src = x.row(r);
    std::copy(src.begin(), src.end(), data_.begin() + r * stride_ + lead);
  }
}

void ConvForward(std::span<const double> weight, int out_channels,
                 int in_channels, int kernel, const Array2D& x, Array2D& out) {
  const std::size_t len = x.cols();
  const std::size_t pad = static_cast<std::size_t>(kernel - 1) / 2;
  const std::size_t tiled_len = RoundUp(std::max<std::size_t>(len, 1), kTile);
  const PaddedSignal px(x, pad, tiled_len + kernel - 1);
  const std::size_t row_stride = static_cast<std::size_t>(in_channels) * kernel;

  out = Array2D(out_channels, len);
  std::vector<double> tmp(4 * tiled_len);
  std::vector<char> active(in_channels);

  auto run = [&](auto block_size, int o0) {
    constexpr int OB = decltype(block_size)::value;
    for (int i = 0; i < in_channels; ++i) {
      bool any = false;
      for (int q = 0; q < OB && !any; ++q) {
        const double* w = weight.data() + (o0 + q) * row_stride +
                          static_cast<std::size_t>(i) * kernel;
        any = std::any_of(w, w + kernel, [](double v) { return v != 0.0; });
      }
      active[i] = any;
    }
    ForwardBlock<OB>(weight.data() + o0 * row_stride, in_channels, kernel, px,
                     tiled_len, active.data(), tmp.data());
    for (int q = 0; q < OB; ++q) {
      std::copy_n(tmp.data() + q * tiled_len, len, out.row(o0 + q).begin());
    }
  };

  int o = 0;
  for (; o + 4 <= out_channels; o += 4) run(std::integral_constant<int, 4>{}, o);
  for (; o + 2 <= out_channels; o += 2) run(std::integral_constant<int, 2>{}, o);
  for (; o < out_channels; ++o) run(std::integral_constant<int, 1>{}, o);
}

void ConvWeightGrad(const Array2D& grad, const Array2D& x, int kernel,
                    std::span<double> dweight) {
  const std::size_t len = x.cols();
  const int out_channels = static_cast<int>(grad.rows());
  const int in_channels = static_cast<int>(x.rows());
  const std::size_t pad = static_cast<std::size_t>(kernel - 1) / 2;
  const std::size_t vec_len = RoundUp(std::max<std::size_t>(len, 1), kLanes);
  const PaddedSignal pg(grad, 0, vec_len);
  const PaddedSignal px(x, pad, vec_len + kernel - 1);
  const std::size_t row_stride = static_cast<std::size_t>(in_channels) * kernel;

  std::vector<int> live;
  for (int o = 0; o < out_channels; ++o) {
    std::fill_n(dweight.begin() + o * row_stride, row_stride, 0.0);
    if (!RowIsZero(grad, o)) live.push_back(o);
  }
  // Time is processed in chunks so the gradient rows stay in L1 while every
  // input row streams past; pairs of consecutive live rows share x loads.
  for (std::size_t t0 = 0; t0 < vec_len; t0 += kGradChunk) {
    const std::size_t t1 = std::min(vec_len, t0 + kGradChunk);
    std::size_t j = 0;
    while (j < live.size()) {
      if (j + 1 < live.size() && live[j + 1] == live[j] + 1) {
        GradBlock<2>(pg, px, live[j], in_channels, kernel, t0, t1, dweight);
        j += 2;
      } else {
        GradBlock<1>(pg, px, live[j], in_channels, kernel, t0, t1, dweight);
        j += 1;
      }
    }
  }
}

}  // namespace lightconv::internal
