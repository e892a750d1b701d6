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

#ifndef SPKAWARE_FEATURES_H_
#define SPKAWARE_FEATURES_H_

#include <map>
#include <string>
#include <vector>

namespace spkaware {

// Precomputed time-frequency frames of one utterance, stored bin-major:
// data[bin * frames + frame].
struct Frames {
  int bins = 0;
  int frames = 0;
  std::vector<float> data;

  float at(int bin, int frame) const { return data[static_cast<size_t>(bin) * frames + frame]; }
  bool empty() const { return bins == 0 || frames == 0; }
};

// Binary container of per-utterance frames (little-endian):
//   "SAFEAT01" | u32 count | count x { u32 id_len | id | u32 bins |
//   u32 frames | f32[bins * frames] }
class FeatureArchive {
 public:
  static constexpr char kMagic[9] = "SAFEAT01";

  void Add(const std::string& utterance_id, Frames frames);
  const Frames* Find(const std::string& utterance_id) const;
  const Frames& Get(const std::string& utterance_id) const;  // throws kConsistency
  size_t size() const { return items_.size(); }
  const std::map<std::string, Frames>& items() const { return items_; }

  std::string Serialize() const;
  static FeatureArchive Deserialize(const std::string& bytes, const std::string& source);
  void Save(const std::string& path) const;
  static FeatureArchive Load(const std::string& path);

 private:
  std::map<std::string, Frames> items_;
};

}  // namespace spkaware

#endif  // SPKAWARE_FEATURES_H_
