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

#ifndef SPKAWARE_PROTOCOLS_H_
#define SPKAWARE_PROTOCOLS_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace spkaware {

enum class Key { kBonafide, kSpoof };
enum class Partition { kTrain, kDev, kEval };

const char* KeyName(Key k);
const char* PartitionName(Partition p);
Partition ParsePartition(const std::string& name);  // throws kInvalidInput

// One evaluation unit. `claimed_speaker_id` is the identity whose enrollment
// is presented to the countermeasure; in the Main protocol it always equals
// `true_speaker_id`. `source` is empty for corpus-native trials and names the
// external corpus for pooled bonafide data.
struct Trial {
  std::string utterance_id;
  std::string claimed_speaker_id;
  std::string true_speaker_id;
  Key key = Key::kBonafide;
  std::string attack_id = "-";
  Partition partition = Partition::kTrain;
  std::string source;

  bool external() const { return !source.empty(); }
  friend bool operator==(const Trial&, const Trial&) = default;
};

// Ordered key/value record of how a protocol was built.
class Provenance {
 public:
  void Set(const std::string& key, const std::string& value);
  void Set(const std::string& key, long long value) { Set(key, std::to_string(value)); }
  std::optional<std::string> Get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  // key=value per line.
  std::string Format() const;
  static Provenance Parse(const std::string& content, const std::string& source);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Protocol {
  std::string name;
  std::vector<Trial> trials;
  Provenance provenance;

  std::vector<Trial> Partition(spkaware::Partition p) const;
  size_t Count(spkaware::Partition p) const;
};

// CM protocol lines, space-delimited:
//   speaker utterance field3 attack key
// field3 is "-" in the original corpus files. Files written by this toolkit
// reuse it: a speaker id there is the claimed (enrollment) speaker when it
// differs from the true speaker, and "@corpus" marks pooled external data.
std::vector<Trial> ParseCmProtocol(std::istream& in, Partition partition,
                                   const std::string& source_name);
std::vector<Trial> ParseCmProtocol(const std::string& path, Partition partition);
std::string FormatCmProtocol(const std::vector<Trial>& trials);

// ASV enrollment list: "speaker utt1,utt2,..." per line.
std::map<std::string, std::vector<std::string>> ReadAsvEnrollmentList(const std::string& path);

enum class Sex { kFemale, kMale };
// "speaker f|m" per line.
std::map<std::string, Sex> ReadSpk2Gender(const std::string& path);
std::string FormatSpk2Gender(const std::map<std::string, Sex>& sexes);

using EnrollmentSets = std::map<std::string, std::vector<std::string>>;

// Samples n_female / n_male distinct bonafide utterances per speaker with a
// seeded stream. Speakers are those with bonafide trials in `trials`.
EnrollmentSets BuildEnrollmentSets(const std::vector<Trial>& trials,
                                   const std::map<std::string, Sex>& sexes, uint64_t seed,
                                   int n_female = 11, int n_male = 19);

// Removes bonafide trials whose speaker has no enrollment. Spoof trials are
// kept; a spoof trial targeting a non-enrollable speaker is a consistency
// error.
Protocol BuildMainProtocol(const Protocol& original,
                           const std::set<std::string>& enrollable_speakers);

// Same trials as `main`, with the claimed speaker of every trial redrawn
// uniformly from the other speakers of the same partition.
Protocol BuildAblationProtocol(const Protocol& main, uint64_t seed);

struct ManifestEntry {
  std::string corpus_id;
  std::string speaker_id;
  std::string utterance_id;
  std::string audio_path;
};

// corpus_id \t speaker_id \t utterance_id \t audio_path
std::vector<ManifestEntry> ReadCorpusManifest(const std::string& path);
std::string FormatCorpusManifest(const std::vector<ManifestEntry>& entries);

inline constexpr int kReferenceCmTrainSize = 25380;

// Appends k external bonafide training trials sampled without replacement.
Protocol AugmentBonafide(const Protocol& train, const std::vector<ManifestEntry>& manifest,
                         int k, uint64_t seed);

std::string ExternalSpeakerId(const ManifestEntry& e);

}  // namespace spkaware

#endif  // SPKAWARE_PROTOCOLS_H_
