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

#include "vspike/error.h"

namespace vspike {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kNonFinite:
      return "NonFinite";
    case ErrorCode::kNotLocked:
      return "NotLocked";
    case ErrorCode::kEmptyImage:
      return "EmptyImage";
    case ErrorCode::kImageTooSmall:
      return "ImageTooSmall";
    case ErrorCode::kUnknownKernelId:
      return "UnknownKernelId";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kEmptyMap:
      return "EmptyMap";
    case ErrorCode::kInvalidParams:
      return "InvalidParams";
    case ErrorCode::kOutOfRange:
      return "OutOfRange";
    case ErrorCode::kEmptyTrajectory:
      return "EmptyTrajectory";
    case ErrorCode::kThresholdInsideNoiseBand:
      return "ThresholdInsideNoiseBand";
    case ErrorCode::kSpikeOutOfRange:
      return "SpikeOutOfRange";
    case ErrorCode::kNotASpike:
      return "NotASpike";
    case ErrorCode::kCalibrationFailed:
      return "CalibrationFailed";
    case ErrorCode::kIo:
      return "Io";
    case ErrorCode::kParse:
      return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

NonFiniteError::NonFiniteError(double time_ns, const std::string& message)
    : Error(ErrorCode::kNonFinite,
            message + " (t = " + std::to_string(time_ns) + " ns)"),
      time_ns_(time_ns) {}

std::string_view CalibrationStageName(CalibrationStage stage) {
  switch (stage) {
    case CalibrationStage::kLocking:
      return "locking";
    case CalibrationStage::kModDepth:
      return "mod_depth";
    case CalibrationStage::kThreshold:
      return "threshold";
  }
  return "unknown";
}

CalibrationError::CalibrationError(CalibrationStage stage,
                                   const std::string& message)
    : Error(ErrorCode::kCalibrationFailed,
            std::string(CalibrationStageName(stage)) + " stage: " + message),
      stage_(stage) {}

}  // namespace vspike
