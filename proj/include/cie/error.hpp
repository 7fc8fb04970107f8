// Copyright 2026 The Authors.
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

#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace cie {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A statistic queried where it is not defined (Count(ci) = 0, M_q = 0, ...).
class UndefinedMeasureError : public Error {
 public:
  using Error::Error;
};

// No feasible explanation exists under the size/item/length bounds.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

// Instance lookup failed.
class UnknownInstanceError : public Error {
 public:
  using Error::Error;
};

// Non-fatal diagnostics go through one process-wide sink (stderr by
// default). Tests swap it to capture messages.
using WarningSink = std::function<void(const std::string&)>;
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace cie
