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

// Blocked convolution kernels shared by the forward pass, the weight gradient
// and the probes. Written against GCC/Clang vector extensions; the compiler
// lowers them to whatever SIMD width the target supports.

#ifndef LIGHTCONV_SRC_CONV_KERNELS_H_
#define LIGHTCONV_SRC_CONV_KERNELS_H_

#include <cstddef>
#include <span>

#include "lightconv/array2d.h"

namespace lightconv::internal {

// Input rows copied into a zero-filled buffer with `lead` zeros in front and
// enough trailing zeros for full-width vector loads.
class PaddedSignal {
 public:
  PaddedSignal(const Array2D& x, std::size_t lead, std::size_t min_row_len);

  const double* row(std::size_t r) const { return data_.data() + r * stride_; }
  std::size_t rows() const { return rows_; }
  std::size_t stride() const { return stride_; }

 private:
  std::size_t rows_;
  std::size_t stride_;
  std::vector<double> data_;
};

// out[o][t] = sum_{i,k} weight[o][i][k] * x[i][t + k - pad] for t in [0, T).
// Weight rows that are entirely zero for a group of outputs are skipped.
void ConvForward(std::span<const double> weight, int out_channels,
                 int in_channels, int kernel, const Array2D& x, Array2D& out);

// dweight[o][i][k] = sum_t grad[o][t] * x[i][t + k - pad].
void ConvWeightGrad(const Array2D& grad, const Array2D& x, int kernel,
                    std::span<double> dweight);

}  // namespace lightconv::internal

#endif  // LIGHTCONV_SRC_CONV_KERNELS_H_
