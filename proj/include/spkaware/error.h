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

#ifndef SPKAWARE_ERROR_H_
#define SPKAWARE_ERROR_H_

#include <stdexcept>
#include <string>

namespace spkaware {

// Failure categories. The C API maps each one to a status code and the CLI
// maps those to process exit codes.
enum class ErrorKind {
  kInvalidInput,
  kContractViolation,
  kParse,
  kStorage,
  kConfiguration,
  kConsistency,
  kNumeric,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Throw(ErrorKind kind, const std::string& message);

}  // namespace spkaware

#endif  // SPKAWARE_ERROR_H_
