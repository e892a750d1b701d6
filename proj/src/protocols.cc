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

#include "spkaware/protocols.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spkaware/error.h"
#include "spkaware/io.h"
#include "spkaware/rng.h"

namespace spkaware {

const char* KeyName(Key k) { return k == Key::kBonafide ? "bonafide" : "spoof"; }

const char* PartitionName(Partition p) {
  switch (p) {
    case Partition::kTrain:
      return "train";
    case Partition::kDev:
      return "dev";
    case Partition::kEval:
      return "eval";
  }
  return "unknown";
}

Partition ParsePartition(const std::string& name) {
  if (name == "train") return Partition::kTrain;
  if (name == "dev") return Partition::kDev;
  if (name == "eval") return Partition::kEval;
  Throw(ErrorKind::kInvalidInput, "unknown partition '" + name + "' (train, dev or eval)");
}

void Provenance::Set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

std::optional<std::string> Provenance::Get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Provenance::Format() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

Provenance Provenance::Parse(const std::string& content, const std::string& source) {
  Provenance p;
  std::istringstream in(content);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      Throw(ErrorKind::kParse, source + ":" + std::to_string(line_no) + ": expected key=value");
    }
    p.Set(std::string(Trim(line.substr(0, eq))), std::string(Trim(line.substr(eq + 1))));
  }
  return p;
}

std::vector<Trial> Protocol::Partition(spkaware::Partition p) const {
  std::vector<Trial> out;
  for (const auto& t : trials) {
    if (t.partition == p) out.push_back(t);
  }
  return out;
}

size_t Protocol::Count(spkaware::Partition p) const {
  return static_cast<size_t>(std::count_if(trials.begin(), trials.end(),
                                           [p](const Trial& t) { return t.partition == p; }));
}

std::vector<Trial> ParseCmProtocol(std::istream& in, Partition partition,
                                   const std::string& source_name) {
  std::vector<Trial> trials;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no) + ": ";
    auto f = SplitWhitespace(line);
    if (f.size() != 5) {
      Throw(ErrorKind::kParse, where + "expected 5 fields (speaker utterance - attack key), got " +
                                   std::to_string(f.size()));
    }
    Trial t;
    t.true_speaker_id = f[0];
    t.utterance_id = f[1];
    t.attack_id = f[3];
    t.partition = partition;
    if (f[4] == "bonafide") {
      t.key = Key::kBonafide;
      if (t.attack_id != "-") {
        Throw(ErrorKind::kConsistency, where + "bonafide trial " + t.utterance_id +
                                           " carries attack id " + t.attack_id);
      }
    } else if (f[4] == "spoof") {
      t.key = Key::kSpoof;
      if (t.attack_id == "-") {
        Throw(ErrorKind::kConsistency, where + "spoof trial " + t.utterance_id +
                                           " has no attack id");
      }
    } else {
      Throw(ErrorKind::kParse, where + "unknown key '" + f[4] + "'");
    }
    if (f[2] == "-") {
      t.claimed_speaker_id = t.true_speaker_id;
    } else if (f[2][0] == '@') {
      t.claimed_speaker_id = t.true_speaker_id;
      t.source = f[2].substr(1);
      if (t.source.empty()) Throw(ErrorKind::kParse, where + "empty corpus tag");
    } else {
      t.claimed_speaker_id = f[2];
    }
    if (!seen.insert(t.utterance_id).second) {
      Throw(ErrorKind::kConsistency, where + "duplicate utterance " + t.utterance_id);
    }
    trials.push_back(std::move(t));
  }
  if (in.bad()) Throw(ErrorKind::kStorage, "read failed: " + source_name);
  return trials;
}

std::vector<Trial> ParseCmProtocol(const std::string& path, Partition partition) {
  std::ifstream in(path);
  if (!in) Throw(ErrorKind::kStorage, "cannot open protocol " + path);
  return ParseCmProtocol(in, partition, path);
}

std::string FormatCmProtocol(const std::vector<Trial>& trials) {
  std::string out;
  for (const auto& t : trials) {
    std::string third = "-";
    if (t.external()) {
      third = "@" + t.source;
    } else if (t.claimed_speaker_id != t.true_speaker_id) {
      third = t.claimed_speaker_id;
    }
    out += t.true_speaker_id + " " + t.utterance_id + " " + third + " " + t.attack_id + " " +
           KeyName(t.key) + "\n";
  }
  return out;
}

std::map<std::string, std::vector<std::string>> ReadAsvEnrollmentList(const std::string& path) {
  std::map<std::string, std::vector<std::string>> lists;
  auto lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    auto f = SplitWhitespace(lines[i]);
    const std::string where = path + ":" + std::to_string(i + 1) + ": ";
    if (f.size() != 2) Throw(ErrorKind::kParse, where + "expected 'speaker utt1,utt2,...'");
    auto utts = Split(f[1], ',');
    for (const auto& u : utts) {
      if (u.empty()) Throw(ErrorKind::kParse, where + "empty utterance id");
    }
    auto& dst = lists[f[0]];
    dst.insert(dst.end(), utts.begin(), utts.end());
  }
  return lists;
}

std::map<std::string, Sex> ReadSpk2Gender(const std::string& path) {
  std::map<std::string, Sex> sexes;
  auto lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    auto f = SplitWhitespace(lines[i]);
    const std::string where = path + ":" + std::to_string(i + 1) + ": ";
    if (f.size() != 2 || (f[1] != "f" && f[1] != "m")) {
      Throw(ErrorKind::kParse, where + "expected 'speaker f|m'");
    }
    sexes[f[0]] = f[1] == "f" ? Sex::kFemale : Sex::kMale;
  }
  return sexes;
}

std::string FormatSpk2Gender(const std::map<std::string, Sex>& sexes) {
  std::string out;
  for (const auto& [spk, sex] : sexes) out += spk + (sex == Sex::kFemale ? " f\n" : " m\n");
  return out;
}

EnrollmentSets BuildEnrollmentSets(const std::vector<Trial>& trials,
                                   const std::map<std::string, Sex>& sexes, uint64_t seed,
                                   int n_female, int n_male) {
  if (n_female < 1 || n_male < 1) {
    Throw(ErrorKind::kConfiguration, "enrollment sizes must be positive");
  }
  std::map<std::string, std::vector<std::string>> bonafide;
  for (const auto& t : trials) {
    if (t.key == Key::kBonafide && !t.external()) {
      bonafide[t.true_speaker_id].push_back(t.utterance_id);
    }
  }
  if (bonafide.empty()) Throw(ErrorKind::kInvalidInput, "no bonafide trials to enroll from");
  EnrollmentSets sets;
  RngStream root(seed, "enrollment");
  for (auto& [speaker, utts] : bonafide) {
    auto sex = sexes.find(speaker);
    if (sex == sexes.end()) {
      Throw(ErrorKind::kConfiguration, "no sex metadata for speaker " + speaker);
    }
    const int n = sex->second == Sex::kFemale ? n_female : n_male;
    if (static_cast<int>(utts.size()) < n) {
      Throw(ErrorKind::kConfiguration,
            "speaker " + speaker + " has " + std::to_string(utts.size()) +
                " bonafide utterances, " + std::to_string(n) + " required for enrollment");
    }
    std::sort(utts.begin(), utts.end());
    RngStream rng = root.Split(speaker);
    std::vector<std::string> chosen;
    for (size_t idx : rng.SampleWithoutReplacement(utts.size(), static_cast<size_t>(n))) {
      chosen.push_back(utts[idx]);
    }
    sets[speaker] = std::move(chosen);
  }
  return sets;
}

namespace {

std::map<std::string, size_t> SpoofCountsByAttack(const std::vector<Trial>& trials,
                                                  Partition p) {
  std::map<std::string, size_t> counts;
  for (const auto& t : trials) {
    if (t.partition == p && t.key == Key::kSpoof) ++counts[t.attack_id];
  }
  return counts;
}

}  // namespace

Protocol BuildMainProtocol(const Protocol& original,
                           const std::set<std::string>& enrollable_speakers) {
  Protocol main;
  main.name = "main";
  std::map<Partition, size_t> removed;
  for (const auto& t : original.trials) {
    const bool enrollable = enrollable_speakers.count(t.true_speaker_id) > 0;
    if (t.key == Key::kBonafide) {
      if (!enrollable) {
        ++removed[t.partition];
        continue;
      }
    } else if (!enrollable) {
      Throw(ErrorKind::kConsistency, "spoof trial " + t.utterance_id +
                                         " targets speaker " + t.true_speaker_id +
                                         ", who has no enrollment");
    }
    Trial kept = t;
    kept.claimed_speaker_id = kept.true_speaker_id;
    main.trials.push_back(std::move(kept));
  }
  if (main.trials.empty()) {
    Throw(ErrorKind::kConfiguration, "main protocol is empty: no trial has an enrollable speaker");
  }
  main.provenance = original.provenance;
  main.provenance.Set("setup", "main");
  main.provenance.Set("enrollable_speakers", static_cast<long long>(enrollable_speakers.size()));
  for (Partition p : {Partition::kTrain, Partition::kDev, Partition::kEval}) {
    const size_t before = original.Count(p);
    if (before == 0) continue;
    const std::string prefix = std::string(PartitionName(p)) + ".";
    main.provenance.Set(prefix + "original_trials", static_cast<long long>(before));
    main.provenance.Set(prefix + "trials", static_cast<long long>(main.Count(p)));
    main.provenance.Set(prefix + "removed_bonafide", static_cast<long long>(removed[p]));
    if (SpoofCountsByAttack(original.trials, p) != SpoofCountsByAttack(main.trials, p)) {
      Throw(ErrorKind::kConsistency, "spoof counts changed while building main protocol");
    }
  }
  return main;
}

Protocol BuildAblationProtocol(const Protocol& main, uint64_t seed) {
  Protocol ablation = main;
  ablation.name = "ablation";
  RngStream root(seed, "ablation");
  for (Partition p : {Partition::kTrain, Partition::kDev, Partition::kEval}) {
    std::set<std::string> speaker_set;
    bool any = false;
    for (const auto& t : main.trials) {
      if (t.partition != p) continue;
      any = true;
      if (!t.external()) speaker_set.insert(t.true_speaker_id);
    }
    if (!any) continue;
    if (speaker_set.size() < 2) {
      Throw(ErrorKind::kInvalidInput,
            std::string("ablation needs at least 2 speakers in the ") + PartitionName(p) +
                " partition");
    }
    const std::vector<std::string> speakers(speaker_set.begin(), speaker_set.end());
    RngStream rng = root.Split(PartitionName(p));
    for (auto& t : ablation.trials) {
      if (t.partition != p || t.external()) continue;
      const auto self = std::lower_bound(speakers.begin(), speakers.end(), t.true_speaker_id);
      const size_t self_index = static_cast<size_t>(self - speakers.begin());
      size_t pick = static_cast<size_t>(rng.UniformInt(speakers.size() - 1));
      if (pick >= self_index) ++pick;
      t.claimed_speaker_id = speakers[pick];
    }
  }
  ablation.provenance.Set("setup", "ablation");
  ablation.provenance.Set("ablation.seed", std::to_string(seed));
  ablation.provenance.Set("ablation.resample", "per-trial");
  ablation.provenance.Set("rng", std::string(RngStream::kVersion));
  return ablation;
}

std::vector<ManifestEntry> ReadCorpusManifest(const std::string& path) {
  std::vector<ManifestEntry> entries;
  auto lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    auto f = Split(lines[i], '\t');
    if (f.size() != 4 || f[0].empty() || f[1].empty() || f[2].empty()) {
      Throw(ErrorKind::kParse, path + ":" + std::to_string(i + 1) +
                                   ": expected corpus_id<TAB>speaker_id<TAB>utterance_id<TAB>audio_path");
    }
    entries.push_back({f[0], f[1], f[2], f[3]});
  }
  return entries;
}

std::string FormatCorpusManifest(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += e.corpus_id + "\t" + e.speaker_id + "\t" + e.utterance_id + "\t" + e.audio_path + "\n";
  }
  return out;
}

std::string ExternalSpeakerId(const ManifestEntry& e) { return e.corpus_id + "_" + e.speaker_id; }

Protocol AugmentBonafide(const Protocol& train, const std::vector<ManifestEntry>& manifest,
                         int k, uint64_t seed) {
  if (k < 0) Throw(ErrorKind::kInvalidInput, "k must be non-negative");
  if (static_cast<size_t>(k) > manifest.size()) {
    Throw(ErrorKind::kInvalidInput, "k=" + std::to_string(k) + " exceeds the " +
                                        std::to_string(manifest.size()) +
                                        " utterances in the external manifest");
  }
  Protocol out = train;
  std::set<std::string> seen;
  for (const auto& t : train.trials) seen.insert(t.utterance_id);
  RngStream rng(seed, "augment");
  auto picks = rng.SampleWithoutReplacement(manifest.size(), static_cast<size_t>(k));
  std::sort(picks.begin(), picks.end());
  for (size_t idx : picks) {
    const ManifestEntry& e = manifest[idx];
    if (!seen.insert(e.utterance_id).second) {
      Throw(ErrorKind::kConsistency, "external utterance " + e.utterance_id +
                                         " collides with an existing trial");
    }
    Trial t;
    t.utterance_id = e.utterance_id;
    t.true_speaker_id = ExternalSpeakerId(e);
    t.claimed_speaker_id = t.true_speaker_id;
    t.key = Key::kBonafide;
    t.attack_id = "-";
    t.partition = Partition::kTrain;
    t.source = e.corpus_id;
    out.trials.push_back(std::move(t));
  }
  std::set<std::string> corpora;
  for (size_t idx : picks) corpora.insert(manifest[idx].corpus_id);
  out.provenance.Set("augment.k", static_cast<long long>(k));
  out.provenance.Set("augment.seed", std::to_string(seed));
  out.provenance.Set("augment.manifest_size", static_cast<long long>(manifest.size()));
  out.provenance.Set("augment.corpora", Join({corpora.begin(), corpora.end()}, ","));
  out.provenance.Set("augment.reference_cm_train_size",
                     static_cast<long long>(kReferenceCmTrainSize));
  out.provenance.Set("augment.k_over_reference",
                     FormatFixed(static_cast<double>(k) / kReferenceCmTrainSize, 4));
  return out;
}

}  // namespace spkaware
