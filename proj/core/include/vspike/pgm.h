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

#ifndef VSPIKE_PGM_H_
#define VSPIKE_PGM_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vspike {

// Row-major 8/16-bit greyscale raster. 0 is black, maxval is white.
struct GrayImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels;

  std::uint16_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  std::uint16_t& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  bool empty() const { return width == 0 || height == 0; }
};

enum class PgmFormat { kAscii, kBinary };  // P2, P5

// Parses P2 or P5 data. Comments ('#' to end of line) are allowed anywhere in
// the header. Throws Error(kParse) on malformed input.
GrayImage ParsePgm(std::string_view data);
GrayImage ReadPgm(const std::filesystem::path& path);

std::string FormatPgm(const GrayImage& image, PgmFormat format);
void WritePgm(const std::filesystem::path& path, const GrayImage& image,
              PgmFormat format = PgmFormat::kAscii);

}  // namespace vspike

#endif  // VSPIKE_PGM_H_
