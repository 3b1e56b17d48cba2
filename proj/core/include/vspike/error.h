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

#ifndef VSPIKE_ERROR_H_
#define VSPIKE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vspike {

enum class ErrorCode {
  kInvalidArgument,
  kNonFinite,
  kNotLocked,
  kEmptyImage,
  kImageTooSmall,
  kUnknownKernelId,
  kDimensionMismatch,
  kEmptyMap,
  kInvalidParams,
  kOutOfRange,
  kEmptyTrajectory,
  kThresholdInsideNoiseBand,
  kSpikeOutOfRange,
  kNotASpike,
  kCalibrationFailed,
  kIo,
  kParse,
};

std::string_view ErrorCodeName(ErrorCode code);

// Base exception for every failure raised by the library. The code lets
// callers branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// The integrator left the finite range; time_ns is where it happened.
class NonFiniteError : public Error {
 public:
  NonFiniteError(double time_ns, const std::string& message);

  double time_ns() const noexcept { return time_ns_; }

 private:
  double time_ns_;
};

enum class CalibrationStage { kLocking, kModDepth, kThreshold };

std::string_view CalibrationStageName(CalibrationStage stage);

class CalibrationError : public Error {
 public:
  CalibrationError(CalibrationStage stage, const std::string& message);

  CalibrationStage stage() const noexcept { return stage_; }

 private:
  CalibrationStage stage_;
};

}  // namespace vspike

#endif  // VSPIKE_ERROR_H_
