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

#ifndef SPKAWARE_SYNTHETIC_H_
#define SPKAWARE_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spkaware/embeddings.h"
#include "spkaware/features.h"
#include "spkaware/protocols.h"

namespace spkaware {

// Small corpus laid out like the ASVspoof 2019 LA metadata, for desk-scale
// experiments. Each speaker has a latent vector z_s; an utterance with latent
// z produces frames B z + noise (replicated over time) and an embedding
// A z / sqrt(k) + noise. Bonafide utterances jitter around z_s, spoofed ones
// sit at a fixed distance from it in a random direction, so whether a sample
// matches its speaker is informative while no single spectral shape marks a
// spoof.
struct SynthCorpusConfig {
  uint64_t seed = 1;
  int latent_dim = 4;
  int bins = 46;
  int frames = 58;
  int d_embed = kDefaultEmbedDim;

  int train_speakers = 20;
  int train_female = 12;
  int train_bonafide = 22;  // per speaker
  int train_spoof = 22;
  int dev_speakers = 10;
  int dev_female = 6;
  int dev_bonafide = 20;
  int dev_spoof = 20;
  int eval_speakers = 10;
  int eval_female = 6;
  int eval_bonafide = 30;
  int eval_spoof = 30;
  // Dev/eval speakers with bonafide trials but no enrollment list.
  int unenrolled_speakers = 2;
  int unenrolled_bonafide = 10;
  int n_female_enroll = 11;
  int n_male_enroll = 19;

  double bonafide_jitter = 0.2;
  double spoof_displacement = 2.0;
  double frame_noise = 1.0;
  double embedding_noise = 1.0;

  int external_corpora = 2;
  int external_speakers = 20;  // per corpus
  int external_utterances = 15;  // per speaker

  void Validate() const;  // throws kConfiguration
};

struct SyntheticCorpus {
  std::vector<Trial> train, dev, eval;
  // partition name ("dev"/"eval") -> sex ("female"/"male") -> list
  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<std::string>>>>
      asv_enrollment;
  std::map<std::string, Sex> sexes;
  EmbeddingTable embeddings;
  FeatureArchive features;
  std::vector<ManifestEntry> external;
};

SyntheticCorpus GenerateSyntheticCorpus(const SynthCorpusConfig& config);

// File names used by the generator and looked up by protocol discovery.
inline constexpr const char* kCmTrainFile = "ASVspoof2019.LA.cm.train.trn.txt";
inline constexpr const char* kCmDevFile = "ASVspoof2019.LA.cm.dev.trl.txt";
inline constexpr const char* kCmEvalFile = "ASVspoof2019.LA.cm.eval.trl.txt";
std::string AsvEnrollmentFileName(const std::string& partition, const std::string& sex);

// Writes the corpus under `dir`:
//   ASVspoof2019_LA_cm_protocols/  CM protocols
//   ASVspoof2019_LA_asv_protocols/ ASV enrollment lists
//   spk2gender, embeddings.txt, features.bin, external_manifest.tsv
void WriteSyntheticCorpus(const SyntheticCorpus& corpus, const std::string& dir);

}  // namespace spkaware

#endif  // SPKAWARE_SYNTHETIC_H_
