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

#include <cmath>
#include <cstdlib>

#include "vspike/pipeline.h"

namespace vspike {

SignedImage MakeCross() {
  constexpr int kSize = 28;
  SignedImage image(kSize, kSize);
  for (int r = 0; r < kSize; ++r) {
    for (int c = 0; c < kSize; ++c) {
      const bool vertical = r >= 3 && r <= 24 && (c == 13 || c == 14);
      const bool horizontal = c >= 3 && c <= 24 && (r == 13 || r == 14);
      image.set(r, c, vertical || horizontal);
    }
  }
  return image;
}

SignedImage MakeSaltire() {
  constexpr int kSize = 28;
  SignedImage image(kSize, kSize);
  for (int r = 0; r < kSize; ++r) {
    for (int c = 0; c < kSize; ++c) {
      image.set(r, c,
                std::abs(r - c) <= 1 || std::abs(r + c - (kSize - 1)) <= 1);
    }
  }
  return image;
}

SignedImage MakeRingLogo() {
  constexpr int kSize = 50;
  constexpr double kCentre = 24.5;
  SignedImage image(kSize, kSize);
  for (int r = 0; r < kSize; ++r) {
    for (int c = 0; c < kSize; ++c) {
      const double d = std::hypot(r - kCentre, c - kCentre);
      const bool ring = d >= 11.0 && d <= 16.0;
      const bool stem = r >= 12 && r <= 37 && c >= 23 && c <= 26;
      const bool base = r >= 44 && r <= 46 && c >= 8 && c <= 41;
      image.set(r, c, ring || stem || base);
    }
  }
  return image;
}

std::vector<NamedImage> MakeTestImages() {
  return {{"cross", MakeCross()},
          {"saltire", MakeSaltire()},
          {"logo", MakeRingLogo()}};
}

void WriteTestImages(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, image] : MakeTestImages()) {
    WritePgm(dir / (name + ".pgm"), image.ToGray(), PgmFormat::kAscii);
  }
}

}  // namespace vspike
