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

#ifndef ZIGZAG_ERRORS_HPP
#define ZIGZAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zigzag {

enum class ErrorKind {
  InvalidSize,
  UnsupportedParity,
  Precondition,
  DegenerateSpectrum,
  DegenerateSecant,
  BasisMismatch,
  Resolution,
  Invariant,
  OutOfRange,
  Schema,
  Io,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace zigzag

#endif  // ZIGZAG_ERRORS_HPP
