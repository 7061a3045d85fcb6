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

#ifndef NOISEKWS_COMMON_ERROR_HPP_
#define NOISEKWS_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace nkws {

enum class ErrorCode {
  kInvalidArgument,
  kUsage,
  kUnsupportedFormat,
  kCorruptHeader,
  kConfigInvalid,
  kUnknownWord,
  kMissingListFile,
  kMissingBackgroundNoise,
  kEmptyCorpus,
  kSourceTooShort,
  kZeroPowerSignal,
  kInsufficientSamples,
  kShapeMismatch,
  kDegenerateBatch,
  kIoError,
  kFormatVersionMismatch,
  kChecksumMismatch,
  kInternal,
};

const char* error_code_name(ErrorCode code);

// Every failure raised by the core library carries one of the codes above so
// the C API can map it onto a stable status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace nkws

#endif  // NOISEKWS_COMMON_ERROR_HPP_
