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

#include "vspike/imaging.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "vspike/error.h"

namespace vspike {

SignedImage::SignedImage(int width, int height)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative image dimensions");
  }
  values_.assign(static_cast<std::size_t>(width) * height, -1);
}

SignedImage SignedImage::FromRows(const std::vector<std::vector<int>>& rows) {
  const int height = static_cast<int>(rows.size());
  const int width = height == 0 ? 0 : static_cast<int>(rows.front().size());
  SignedImage image(width, height);
  for (int r = 0; r < height; ++r) {
    if (static_cast<int>(rows[r].size()) != width) {
      throw Error(ErrorCode::kInvalidArgument, "ragged image rows");
    }
    for (int c = 0; c < width; ++c) {
      const int v = rows[r][c];
      if (v != 1 && v != -1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "signed image entries must be +1 or -1");
      }
      image.set(r, c, v == 1);
    }
  }
  return image;
}

SignedImage SignedImage::Negated() const {
  SignedImage out = *this;
  for (auto& v : out.values_) v = static_cast<std::int8_t>(-v);
  return out;
}

SignedImage SignedImage::RotatedClockwise() const {
  SignedImage out(height_, width_);
  for (int r = 0; r < out.height_; ++r) {
    for (int c = 0; c < out.width_; ++c) {
      out.values_[out.Index(r, c)] = values_[Index(height_ - 1 - c, r)];
    }
  }
  return out;
}

GrayImage SignedImage::ToGray(int maxval) const {
  GrayImage gray;
  gray.width = width_;
  gray.height = height_;
  gray.maxval = maxval;
  gray.pixels.reserve(values_.size());
  for (auto v : values_) {
    gray.pixels.push_back(v > 0 ? 0 : static_cast<std::uint16_t>(maxval));
  }
  return gray;
}

Kernel2x2 Kernel2x2::Negated() const {
  Kernel2x2 out;
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) out.weights[m][n] = -weights[m][n];
  }
  return out;
}

Kernel2x2 Kernel2x2::RotatedClockwise() const {
  Kernel2x2 out;
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) out.weights[m][n] = weights[1 - n][m];
  }
  return out;
}

Kernel2x2 Kernel2x2::RotatedCounterClockwise() const {
  Kernel2x2 out;
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) out.weights[m][n] = weights[n][1 - m];
  }
  return out;
}

int Kernel2x2::L1Norm() const {
  int sum = 0;
  for (const auto& row : weights) {
    for (int w : row) sum += std::abs(w);
  }
  return sum;
}

ValueMap::ValueMap(int width, int height, MapKind kind)
    : width_(width), height_(height), kind_(kind) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative map dimensions");
  }
  values_.assign(static_cast<std::size_t>(width) * height, 0.0);
}

SignedImage Binarize(const GrayImage& image, std::optional<double> threshold) {
  if (image.empty()) throw Error(ErrorCode::kEmptyImage, "empty source image");
  const double level = threshold.value_or(image.maxval / 2.0);
  if (level < 0.0 || level > image.maxval) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold outside the image level range");
  }
  SignedImage out(image.width, image.height);
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) {
      out.set(r, c, image.at(r, c) < level);
    }
  }
  return out;
}

ValueMap Convolve2x2(const SignedImage& image, const Kernel2x2& kernel) {
  if (image.width() < 2 || image.height() < 2) {
    throw Error(ErrorCode::kImageTooSmall,
                "2x2 convolution needs at least a 2x2 source");
  }
  ValueMap out(image.width() - 1, image.height() - 1, MapKind::kSingleKernel);
  const int k00 = kernel.at(0, 0), k01 = kernel.at(0, 1);
  const int k10 = kernel.at(1, 0), k11 = kernel.at(1, 1);
  for (int p = 0; p < out.height(); ++p) {
    for (int q = 0; q < out.width(); ++q) {
      const int g = image.at(p, q) * k00 + image.at(p, q + 1) * k01 +
                    image.at(p + 1, q) * k10 + image.at(p + 1, q + 1) * k11;
      out.at(p, q) = g;
    }
  }
  return out;
}

Kernel2x2 BuiltinKernel(int id) {
  Kernel2x2 k;
  // clang-format off
  switch (id) {
    // Vertical white -> black, then its inverse.
    case 1: k.weights = {{{-1, 1}, {-1, 1}}}; break;
    case 2: k.weights = {{{1, -1}, {1, -1}}}; break;
    // Horizontal white -> black, then its inverse.
    case 3: k.weights = {{{-1, -1}, {1, 1}}}; break;
    case 4: k.weights = {{{1, 1}, {-1, -1}}}; break;
    // Diagonals.
    case 5: k.weights = {{{1, 0}, {0, -1}}}; break;
    case 6: k.weights = {{{0, 1}, {-1, 0}}}; break;
    case 7: k.weights = {{{-1, 0}, {0, 1}}}; break;
    case 8: k.weights = {{{0, -1}, {1, 0}}}; break;
    default:
      throw Error(ErrorCode::kUnknownKernelId,
                  "kernel id " + std::to_string(id) + " not in 1..8");
  }
  // clang-format on
  k.id = id;
  return k;
}

bool IsRotationPair(const Kernel2x2& a, const Kernel2x2& b) {
  return b == a.RotatedClockwise() || b == a.RotatedCounterClockwise();
}

ValueMap GradientMagnitude(const ValueMap& gx, const ValueMap& gy) {
  if (gx.width() != gy.width() || gx.height() != gy.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "gradient components differ in size");
  }
  ValueMap out(gx.width(), gx.height(), MapKind::kGradientMagnitude);
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      out.at(r, c) = std::hypot(gx.at(r, c), gy.at(r, c));
    }
  }
  return out;
}

Kernel2x2 ParseKernel(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  bool comment = false;
  for (char ch : text) {
    if (ch == '#') comment = true;
    if (ch == '\n') comment = false;
    cleaned.push_back(comment ? ' ' : ch);
  }
  std::istringstream in(cleaned);
  Kernel2x2 k;
  for (int i = 0; i < 4; ++i) {
    if (!(in >> k.weights[i / 2][i % 2])) {
      throw Error(ErrorCode::kParse, "kernel file needs four integers");
    }
  }
  std::string extra;
  if (in >> extra) {
    throw Error(ErrorCode::kParse, "kernel file has more than four entries");
  }
  return k;
}

Kernel2x2 LoadKernel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseKernel(text);
}

}  // namespace vspike
