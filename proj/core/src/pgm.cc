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

#include "vspike/pgm.h"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vspike/error.h"

namespace vspike {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view data) : data_(data) {}

  int ReadInt() {
    SkipSpaceAndComments();
    if (pos_ >= data_.size() || !std::isdigit(Peek())) {
      throw Error(ErrorCode::kParse, "expected integer in PGM header");
    }
    long value = 0;
    while (pos_ < data_.size() && std::isdigit(Peek())) {
      value = value * 10 + (data_[pos_++] - '0');
      if (value > 1'000'000'000) {
        throw Error(ErrorCode::kParse, "PGM header value too large");
      }
    }
    return static_cast<int>(value);
  }

  std::string_view ReadMagic() {
    if (data_.size() < 2) throw Error(ErrorCode::kParse, "truncated PGM");
    pos_ = 2;
    return data_.substr(0, 2);
  }

  // Exactly one whitespace byte separates maxval from P5 raster data.
  void ConsumeSingleWhitespace() {
    if (pos_ >= data_.size() || !std::isspace(Peek())) {
      throw Error(ErrorCode::kParse, "missing whitespace before raster");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  unsigned char Peek() const { return static_cast<unsigned char>(data_[pos_]); }

  void SkipSpaceAndComments() {
    while (pos_ < data_.size()) {
      if (std::isspace(Peek())) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage ParsePgm(std::string_view data) {
  HeaderReader reader(data);
  const std::string_view magic = reader.ReadMagic();
  const bool binary = magic == "P5";
  if (!binary && magic != "P2") {
    throw Error(ErrorCode::kParse, "not a P2/P5 PGM file");
  }
  GrayImage image;
  image.width = reader.ReadInt();
  image.height = reader.ReadInt();
  image.maxval = reader.ReadInt();
  if (image.maxval <= 0 || image.maxval > 65535) {
    throw Error(ErrorCode::kParse, "PGM maxval out of range");
  }
  const std::size_t count =
      static_cast<std::size_t>(image.width) * image.height;
  image.pixels.resize(count);
  if (binary) {
    reader.ConsumeSingleWhitespace();
    const std::size_t bytes_per = image.maxval < 256 ? 1 : 2;
    const std::size_t start = reader.pos();
    if (data.size() < start + count * bytes_per) {
      throw Error(ErrorCode::kParse, "truncated P5 raster");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto* p =
          reinterpret_cast<const unsigned char*>(data.data() + start);
      image.pixels[i] =
          bytes_per == 1
              ? p[i]
              : static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      image.pixels[i] = static_cast<std::uint16_t>(reader.ReadInt());
    }
  }
  for (auto v : image.pixels) {
    if (v > image.maxval) {
      throw Error(ErrorCode::kParse, "PGM sample exceeds maxval");
    }
  }
  return image;
}

GrayImage ReadPgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParsePgm(data);
}

std::string FormatPgm(const GrayImage& image, PgmFormat format) {
  std::ostringstream out;
  out << (format == PgmFormat::kBinary ? "P5" : "P2") << '\n'
      << image.width << ' ' << image.height << '\n'
      << image.maxval << '\n';
  if (format == PgmFormat::kBinary) {
    for (auto v : image.pixels) {
      if (image.maxval < 256) {
        out.put(static_cast<char>(v));
      } else {
        out.put(static_cast<char>(v >> 8));
        out.put(static_cast<char>(v & 0xff));
      }
    }
    return out.str();
  }
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) {
      if (c > 0) out << ' ';
      out << image.at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

void WritePgm(const std::filesystem::path& path, const GrayImage& image,
              PgmFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << FormatPgm(image, format);
}

}  // namespace vspike
