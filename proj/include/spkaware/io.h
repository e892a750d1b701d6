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

#ifndef SPKAWARE_IO_H_
#define SPKAWARE_IO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spkaware {

// Splits on runs of spaces/tabs; empty fields are dropped.
std::vector<std::string> SplitWhitespace(std::string_view line);
// Splits on a single delimiter; empty fields are kept.
std::vector<std::string> Split(std::string_view line, char delim);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view Trim(std::string_view s);

// Shortest text that parses back to the same double (%.17g).
std::string FormatDouble(double v);
std::string FormatFixed(double v, int decimals);

// Strict numeric parsing; the whole field must be consumed.
bool ParseDouble(std::string_view text, double* out);
bool ParseInt(std::string_view text, long long* out);

std::string ReadFileToString(const std::string& path);
std::vector<std::string> ReadLines(const std::string& path);
bool PathExists(const std::string& path);

// Collects output files and publishes them together: everything is written
// to temporaries first and renamed into place only on Commit(). Temporaries
// left by an uncommitted transaction are removed on destruction.
class OutputTransaction {
 public:
  OutputTransaction() = default;
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;
  ~OutputTransaction();

  void Add(std::string path, std::string content);
  void Commit();

 private:
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<std::string> temporaries_;
  bool committed_ = false;
};

void WriteFileAtomic(const std::string& path, const std::string& content);

}  // namespace spkaware

#endif  // SPKAWARE_IO_H_
