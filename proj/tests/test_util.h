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

#ifndef VSPIKE_TESTS_TEST_UTIL_H_
#define VSPIKE_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "vspike/imaging.h"

namespace vspike::testing {

inline SignedImage RandomImage(std::mt19937_64& rng, int width, int height) {
  std::bernoulli_distribution coin(0.5);
  SignedImage image(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) image.set(r, c, coin(rng));
  }
  return image;
}

// Straight double loop over the window, kept apart from the library code.
inline double BruteForceCell(const SignedImage& img, const Kernel2x2& k, int p,
                             int q) {
  double sum = 0.0;
  for (int m = 0; m <= 1; ++m) {
    for (int n = 0; n <= 1; ++n) sum += img.at(p + m, q + n) * k.weights[m][n];
  }
  return sum;
}

inline std::filesystem::path ScratchDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("vspike_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace vspike::testing

#endif  // VSPIKE_TESTS_TEST_UTIL_H_
