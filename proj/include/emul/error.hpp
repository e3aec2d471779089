// Copyright 2025 The emul Authors
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

#include <stdexcept>
#include <string>

namespace emul {

enum class ErrorKind {
  kNonPlanarEmbedding,
  kNegativeWeight,
  kDisconnectedInput,
  kUnreachable,
  kPathNotOnOuterStructure,
  kMalformedPath,
  kCrossingPairs,
  kInvalidPortalSet,
  kInconsistentCopyLabels,
  kNoBalancedPair,
  kHierarchyInconsistent,
  kDistortionBudgetExceeded,
  kSameHoleEndpoints,
  kTerminalOnPathInterior,
  kRTooSmall,
  kPreconditionKTooLarge,
  kUnknownTerminal,
  kTerminalMismatch,
  kBadSpec,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace emul
