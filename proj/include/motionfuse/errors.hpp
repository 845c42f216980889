// Copyright 2026 The motionfuse Authors.
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

namespace motionfuse {

// All library failures derive from Error so callers (the CLI in particular)
// can map them onto exit codes with a single catch.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MOTIONFUSE_DEFINE_ERROR(Name) \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

MOTIONFUSE_DEFINE_ERROR(InsufficientPoints);
MOTIONFUSE_DEFINE_ERROR(DegenerateInput);
MOTIONFUSE_DEFINE_ERROR(InsufficientSamples);
MOTIONFUSE_DEFINE_ERROR(EmptyInput);
MOTIONFUSE_DEFINE_ERROR(EigenFailure);
MOTIONFUSE_DEFINE_ERROR(NotEnoughEvidence);
MOTIONFUSE_DEFINE_ERROR(FormatError);
MOTIONFUSE_DEFINE_ERROR(ManifestError);
MOTIONFUSE_DEFINE_ERROR(ShapeMismatch);
MOTIONFUSE_DEFINE_ERROR(BehindCamera);
MOTIONFUSE_DEFINE_ERROR(InvalidSpec);
MOTIONFUSE_DEFINE_ERROR(ConfigError);
MOTIONFUSE_DEFINE_ERROR(InvalidBundle);

#undef MOTIONFUSE_DEFINE_ERROR

}  // namespace motionfuse
