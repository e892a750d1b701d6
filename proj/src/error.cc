// Copyright (c) 2026 The spkaware Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spkaware/error.h"

namespace spkaware {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "invalid-input";
    case ErrorKind::kContractViolation:
      return "contract-violation";
    case ErrorKind::kParse:
      return "parse-error";
    case ErrorKind::kStorage:
      return "storage-error";
    case ErrorKind::kConfiguration:
      return "configuration-error";
    case ErrorKind::kConsistency:
      return "consistency-error";
    case ErrorKind::kNumeric:
      return "numeric-error";
  }
  return "unknown-error";
}

void Throw(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace spkaware
