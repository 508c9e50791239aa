// Copyright 2026 The steinrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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

namespace steinrep {

/// Root of every error raised by the library. `kind()` is the stable
/// name used in CLI diagnostics (e.g. "SmoothnessViolation").
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& what)
      : std::runtime_error(std::string(kind) + ": " + what), kind_(kind) {}

  std::string_view kind() const noexcept { return kind_; }

 private:
  std::string_view kind_;
};

#define STEINREP_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

STEINREP_DEFINE_ERROR(NotPositiveDefinite);
STEINREP_DEFINE_ERROR(NotSpd);
STEINREP_DEFINE_ERROR(DomainError);
STEINREP_DEFINE_ERROR(DimensionMismatch);
STEINREP_DEFINE_ERROR(DegenerateSkew);
STEINREP_DEFINE_ERROR(InvalidShape);
STEINREP_DEFINE_ERROR(NonzeroAlpha);
STEINREP_DEFINE_ERROR(OutOfSupport);
STEINREP_DEFINE_ERROR(SingularTriangle);
STEINREP_DEFINE_ERROR(AsymmetricA);
STEINREP_DEFINE_ERROR(SmoothnessViolation);
STEINREP_DEFINE_ERROR(MissingSampler);
STEINREP_DEFINE_ERROR(MissingMoments);
STEINREP_DEFINE_ERROR(NotConverged);
STEINREP_DEFINE_ERROR(InvalidConfig);
STEINREP_DEFINE_ERROR(ConfigError);

#undef STEINREP_DEFINE_ERROR

}  // namespace steinrep
