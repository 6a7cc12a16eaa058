// Copyright 2026 The Zigzag Authors. All Rights Reserved.
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

#include "zigzag/errors.hpp"

namespace zigzag {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSize: return "invalid-size";
    case ErrorKind::UnsupportedParity: return "unsupported-parity";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::DegenerateSpectrum: return "degenerate-spectrum";
    case ErrorKind::DegenerateSecant: return "degenerate-secant";
    case ErrorKind::BasisMismatch: return "basis-mismatch";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Invariant: return "invariant";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace zigzag
