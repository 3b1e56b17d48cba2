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

#include <gtest/gtest.h>

#include <string>

#include "test_util.h"
#include "vspike/error.h"

namespace vspike {
namespace {

GrayImage Sample(int maxval) {
  GrayImage img;
  img.width = 3;
  img.height = 2;
  img.maxval = maxval;
  img.pixels = {0, 1, 2, static_cast<std::uint16_t>(maxval), 7, 3};
  return img;
}

void ExpectSame(const GrayImage& a, const GrayImage& b) {
  EXPECT_EQ(a.width, b.width);
  EXPECT_EQ(a.height, b.height);
  EXPECT_EQ(a.maxval, b.maxval);
  EXPECT_EQ(a.pixels, b.pixels);
}

TEST(PgmTest, AsciiRoundTrip) {
  const GrayImage img = Sample(255);
  ExpectSame(ParsePgm(FormatPgm(img, PgmFormat::kAscii)), img);
}

TEST(PgmTest, BinaryRoundTrip) {
  const GrayImage img = Sample(255);
  const std::string bytes = FormatPgm(img, PgmFormat::kBinary);
  EXPECT_EQ(bytes.substr(0, 2), "P5");
  ExpectSame(ParsePgm(bytes), img);
}

TEST(PgmTest, SixteenBitBinaryRoundTrip) {
  const GrayImage img = Sample(65535);
  ExpectSame(ParsePgm(FormatPgm(img, PgmFormat::kBinary)), img);
}

TEST(PgmTest, CommentsInHeader) {
  const GrayImage img = ParsePgm("P2\n# made by hand\n2 1 # size\n9\n0 9\n");
  EXPECT_EQ(img.width, 2);
  EXPECT_EQ(img.maxval, 9);
  EXPECT_EQ(img.at(0, 1), 9);
}

TEST(PgmTest, RejectsMalformed) {
  EXPECT_THROW(ParsePgm("P3\n1 1\n255\n0 0 0\n"), Error);
  EXPECT_THROW(ParsePgm("P2\n2 2\n255\n0 0 0\n"), Error);
  EXPECT_THROW(ParsePgm("P2\n1 1\n9\n10\n"), Error);
  EXPECT_THROW(ParsePgm("P5\n2 2\n255\nab"), Error);
  EXPECT_THROW(ParsePgm(""), Error);
}

TEST(PgmTest, FileRoundTrip) {
  const auto dir = testing::ScratchDir("pgm");
  const GrayImage img = Sample(255);
  WritePgm(dir / "a.pgm", img, PgmFormat::kBinary);
  ExpectSame(ReadPgm(dir / "a.pgm"), img);
  try {
    ReadPgm(dir / "missing.pgm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace vspike
