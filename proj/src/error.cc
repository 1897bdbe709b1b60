/* Copyright 2026 The HoughVote Authors. All Rights Reserved.

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

#include "houghvote/error.h"

namespace houghvote {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kUnknownBackend: return "UnknownBackend";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kNotAPermutation: return "NotAPermutation";
    case ErrorCode::kImageSizeMismatch: return "ImageSizeMismatch";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kUnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace houghvote
