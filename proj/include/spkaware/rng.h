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

#ifndef SPKAWARE_RNG_H_
#define SPKAWARE_RNG_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spkaware {

uint64_t Fnv1a64(std::string_view bytes, uint64_t basis = 0xcbf29ce484222325ULL);
uint64_t SplitMix64(uint64_t x);

// Labeled, splittable random stream. Every random draw in the toolkit goes
// through one of these so that a single top-level seed reproduces a whole
// pipeline. The engine is std::mt19937_64 (fully specified by the standard);
// the distributions are implemented here because the standard library's
// distributions are implementation-defined.
class RngStream {
 public:
  static constexpr std::string_view kVersion = "mt19937_64+splitmix64/v1";

  RngStream(uint64_t seed, std::string_view label);

  // Independent child stream; depends only on (seed, label path).
  RngStream Split(std::string_view label) const;

  uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

  uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform integer on [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  template <typename T>
  void Shuffle(std::vector<T>* items) {
    for (size_t i = items->size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(i));
      std::swap((*items)[i - 1], (*items)[j]);
    }
  }

  // k distinct indices from [0, n), in draw order.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

 private:
  uint64_t seed_;
  std::string label_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spkaware

#endif  // SPKAWARE_RNG_H_
