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

#ifndef SPKAWARE_EMBEDDINGS_H_
#define SPKAWARE_EMBEDDINGS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace spkaware {

inline constexpr int kDefaultEmbedDim = 192;

struct SpeakerEmbedding {
  std::string utterance_id;
  std::string speaker_id;
  std::vector<double> values;
};

// Averaged embedding of one speaker's enrollment utterances.
struct EnrollmentProfile {
  std::string speaker_id;
  std::vector<double> embedding;
  std::vector<std::string> source_utterances;

  int n() const { return static_cast<int>(source_utterances.size()); }
};

struct AudioInput {
  std::string utterance_id;
  std::string speaker_id;
  std::vector<float> samples;
  int sample_rate = 16000;
};

// Produces a fixed-length speaker embedding for one utterance. Implementations
// must be deterministic and safe to call concurrently.
class EmbeddingExtractor {
 public:
  virtual ~EmbeddingExtractor() = default;
  virtual int dim() const = 0;
  virtual std::vector<double> Compute(const AudioInput& audio) const = 0;
};

// Serves embeddings that an external ASV model computed ahead of time,
// keyed by utterance id.
class FileBackedExtractor : public EmbeddingExtractor {
 public:
  FileBackedExtractor(std::map<std::string, SpeakerEmbedding> table, int dim);
  static FileBackedExtractor FromFile(const std::string& path);

  int dim() const override { return dim_; }
  std::vector<double> Compute(const AudioInput& audio) const override;

 private:
  std::map<std::string, SpeakerEmbedding> table_;
  int dim_;
};

// Test provider: per-speaker Gaussian centroid plus per-utterance Gaussian
// noise. The output is a pure function of (audio, seed).
class SyntheticExtractor : public EmbeddingExtractor {
 public:
  SyntheticExtractor(int dim, uint64_t seed, double noise_std = 1.0,
                     double centroid_std = 1.0);

  // Pins the centroid of one speaker instead of drawing it from the seed.
  void SetCentroid(const std::string& speaker_id, std::vector<double> centroid);
  std::vector<double> Centroid(const std::string& speaker_id) const;

  int dim() const override { return dim_; }
  std::vector<double> Compute(const AudioInput& audio) const override;

 private:
  int dim_;
  uint64_t seed_;
  double noise_std_;
  double centroid_std_;
  std::map<std::string, std::vector<double>> centroids_;
};

SpeakerEmbedding ExtractEmbedding(const AudioInput& audio,
                                  const EmbeddingExtractor& extractor);

// Arithmetic mean of the given embeddings. No length normalization unless
// requested.
EnrollmentProfile AggregateEnrollment(std::span<const SpeakerEmbedding> embeddings,
                                      const std::string& speaker_id,
                                      bool length_normalize = false);

// Enrollment store: one record per line,
//   speaker_id \t n \t utt1,utt2,... \t v1 v2 ... vD
void StoreProfiles(const std::vector<EnrollmentProfile>& profiles,
                   const std::string& path);
std::string FormatProfiles(const std::vector<EnrollmentProfile>& profiles);
std::vector<EnrollmentProfile> LoadProfiles(const std::string& path);
std::vector<EnrollmentProfile> ParseProfiles(const std::string& content,
                                             const std::string& source_name);

// Precomputed per-utterance embeddings: utterance_id \t speaker_id \t v1 ... vD
using EmbeddingTable = std::map<std::string, SpeakerEmbedding>;
EmbeddingTable ReadEmbeddingTable(const std::string& path);
std::string FormatEmbeddingTable(const EmbeddingTable& table);

// Element-wise mean of all profiles; the fallback enrollment for trials whose
// speaker has no profile of their own (e.g. pooled external bonafide data).
std::vector<double> CorpusMeanEmbedding(const std::vector<EnrollmentProfile>& profiles);

}  // namespace spkaware

#endif  // SPKAWARE_EMBEDDINGS_H_
