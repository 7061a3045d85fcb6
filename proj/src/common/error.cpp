/* Copyright 2026 The NoiseKWS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "common/error.hpp"

namespace nkws {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUsage: return "Usage";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptHeader: return "CorruptHeader";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kUnknownWord: return "UnknownWord";
    case ErrorCode::kMissingListFile: return "MissingListFile";
    case ErrorCode::kMissingBackgroundNoise: return "MissingBackgroundNoise";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kSourceTooShort: return "SourceTooShort";
    case ErrorCode::kZeroPowerSignal: return "ZeroPowerSignal";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDegenerateBatch: return "DegenerateBatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace nkws
