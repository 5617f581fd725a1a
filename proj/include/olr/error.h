// olr/error.h

// Copyright 2026  The OLR Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef OLR_ERROR_H_
#define OLR_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace olr {

enum class Errc {
  kMalformedLine,
  kArityMismatch,
  kDuplicateSegment,
  kNaNScore,
  kUnknownLanguage,
  kEmptyTrialSet,
  kMissingSegment,
  kInconsistentLanguageSet,
  kTooShort,
  kInvalidConfig,
  kUnsupportedAudio,
  kAllFramesRemoved,
  kTooFewFrames,
  kNonFiniteLoss,
  kCorruptModel,
  kDimMismatch,
  kNoUsableReferences,
  kZeroNormVector,
  kInvalidProfile,
  kInvalidPlan,
  kIo,
};

const char *ErrcName(Errc code);

/// Every failure in the toolkit is reported as an olr::Error. `line()` is the
/// 1-based input line for parse errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &message, std::size_t line = 0)
      : std::runtime_error(message), code_(code), line_(line) {}

  Errc code() const { return code_; }
  std::size_t line() const { return line_; }

 private:
  Errc code_;
  std::size_t line_;
};

/// True for errors that signal numerical trouble rather than bad input.
inline bool IsNumericalError(Errc code) {
  return code == Errc::kNonFiniteLoss || code == Errc::kZeroNormVector;
}

}  // namespace olr

#endif  // OLR_ERROR_H_
