// Copyright 2026 The vspike Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VSPIKE_IMAGING_H_
#define VSPIKE_IMAGING_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "vspike/pgm.h"

namespace vspike {

// Source image as a matrix of +1 (black) and -1 (white).
class SignedImage {
 public:
  SignedImage() = default;
  // All pixels white.
  SignedImage(int width, int height);
  // Throws kInvalidArgument unless every entry is +1 or -1 and rows are
  // rectangular.
  static SignedImage FromRows(const std::vector<std::vector<int>>& rows);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  int at(int row, int col) const { return values_[Index(row, col)]; }
  void set(int row, int col, bool black) {
    values_[Index(row, col)] = black ? 1 : -1;
  }

  SignedImage Negated() const;
  // Quarter turn clockwise: result(r, c) = this(height - 1 - c, r).
  SignedImage RotatedClockwise() const;
  // Black -> 0, white -> maxval.
  GrayImage ToGray(int maxval = 255) const;

  friend bool operator==(const SignedImage&, const SignedImage&) = default;

 private:
  std::size_t Index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::int8_t> values_;
};

struct Kernel2x2 {
  std::array<std::array<int, 2>, 2> weights{};
  std::optional<int> id;

  int at(int m, int n) const { return weights[m][n]; }
  Kernel2x2 Negated() const;
  Kernel2x2 RotatedClockwise() const;
  Kernel2x2 RotatedCounterClockwise() const;
  // Sum of |weights|; the largest response magnitude on a +-1 image.
  int L1Norm() const;

  // Compares weights only.
  friend bool operator==(const Kernel2x2& a, const Kernel2x2& b) {
    return a.weights == b.weights;
  }
};

enum class MapKind { kSingleKernel, kGradientMagnitude };

// Real-valued destination map, one cell smaller than the source per axis.
class ValueMap {
 public:
  ValueMap() = default;
  ValueMap(int width, int height, MapKind kind);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  MapKind kind() const { return kind_; }

  double at(int row, int col) const { return values_[Index(row, col)]; }
  double& at(int row, int col) { return values_[Index(row, col)]; }
  // Row-major cell order, which is also the serialization order.
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t Index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  MapKind kind_ = MapKind::kSingleKernel;
  std::vector<double> values_;
};

// Luminance strictly below the threshold is black (+1). The default threshold
// is the midpoint of [0, maxval].
SignedImage Binarize(const GrayImage& image,
                     std::optional<double> threshold = std::nullopt);

// g[p][q] = sum_{m,n in {0,1}} f[p+m][q+n] * K[m][n], no padding.
ValueMap Convolve2x2(const SignedImage& image, const Kernel2x2& kernel);

// Kernels 1-4 are the vertical and horizontal pairs; 5-8 are diagonal.
Kernel2x2 BuiltinKernel(int id);

// True when b is a quarter turn of a in either direction.
bool IsRotationPair(const Kernel2x2& a, const Kernel2x2& b);

// Element-wise sqrt(gx^2 + gy^2).
ValueMap GradientMagnitude(const ValueMap& gx, const ValueMap& gy);

// Plain-text 2x2 matrix of four integers; '#' starts a comment.
Kernel2x2 ParseKernel(std::string_view text);
Kernel2x2 LoadKernel(const std::filesystem::path& path);

}  // namespace vspike

#endif  // VSPIKE_IMAGING_H_
