// Copyright 2026 The optosqueeze Authors
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

#ifndef OPTOSQUEEZE_ERRORS_HPP
#define OPTOSQUEEZE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optosqueeze {

/// Raised when an input violates a documented precondition (bad parameter,
/// unknown mode label, malformed config). The CLI maps it to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot meet its numerical quality bounds
/// (off-grid mass, normalization drift, singular maps). CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace optosqueeze

#endif  // OPTOSQUEEZE_ERRORS_HPP
