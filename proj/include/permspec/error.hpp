// Copyright 2026 The permspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace permspec {

enum class ErrorKind {
  InvalidArgument,
  ParseError,
  UnsupportedFunction,
  OutOfRange,
  SeriesTooShort,
  InvalidCycleType,
  TooLarge,
  HorizonTooSmall,
  WrongRegime,
  DegenerateLaw,
  CannotMeetTolerance,
  EmptySample,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnsupportedFunction: return "UnsupportedFunction";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SeriesTooShort: return "SeriesTooShort";
    case ErrorKind::InvalidCycleType: return "InvalidCycleType";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::HorizonTooSmall: return "HorizonTooSmall";
    case ErrorKind::WrongRegime: return "WrongRegime";
    case ErrorKind::DegenerateLaw: return "DegenerateLaw";
    case ErrorKind::CannotMeetTolerance: return "CannotMeetTolerance";
    case ErrorKind::EmptySample: return "EmptySample";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the named kinds above;
/// the CLI prints the name and exits with status 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace permspec
