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

#include "spkaware/embeddings.h"

#include <cmath>
#include <cstring>

#include "spkaware/error.h"
#include "spkaware/io.h"
#include "spkaware/rng.h"

namespace spkaware {

namespace {

bool AllFinite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::vector<double> ParseVector(const std::string& field, bool* ok) {
  std::vector<double> values;
  for (const auto& tok : SplitWhitespace(field)) {
    double v;
    if (!ParseDouble(tok, &v) || !std::isfinite(v)) {
      *ok = false;
      return {};
    }
    values.push_back(v);
  }
  *ok = true;
  return values;
}

std::string FormatVector(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += FormatDouble(v[i]);
  }
  return out;
}

}  // namespace

FileBackedExtractor::FileBackedExtractor(std::map<std::string, SpeakerEmbedding> table,
                                         int dim)
    : table_(std::move(table)), dim_(dim) {}

FileBackedExtractor FileBackedExtractor::FromFile(const std::string& path) {
  EmbeddingTable table = ReadEmbeddingTable(path);
  int dim = table.empty() ? kDefaultEmbedDim
                          : static_cast<int>(table.begin()->second.values.size());
  return FileBackedExtractor(std::move(table), dim);
}

std::vector<double> FileBackedExtractor::Compute(const AudioInput& audio) const {
  auto it = table_.find(audio.utterance_id);
  if (it == table_.end()) {
    Throw(ErrorKind::kInvalidInput,
          "no precomputed embedding for utterance " + audio.utterance_id);
  }
  return it->second.values;
}

SyntheticExtractor::SyntheticExtractor(int dim, uint64_t seed, double noise_std,
                                       double centroid_std)
    : dim_(dim), seed_(seed), noise_std_(noise_std), centroid_std_(centroid_std) {
  if (dim <= 0) Throw(ErrorKind::kInvalidInput, "embedding dimension must be positive");
}

void SyntheticExtractor::SetCentroid(const std::string& speaker_id,
                                     std::vector<double> centroid) {
  if (static_cast<int>(centroid.size()) != dim_) {
    Throw(ErrorKind::kContractViolation, "centroid dimension mismatch for " + speaker_id);
  }
  centroids_[speaker_id] = std::move(centroid);
}

std::vector<double> SyntheticExtractor::Centroid(const std::string& speaker_id) const {
  auto it = centroids_.find(speaker_id);
  if (it != centroids_.end()) return it->second;
  RngStream rng(seed_, "synthetic-extractor/centroid/" + speaker_id);
  std::vector<double> c(dim_);
  for (auto& x : c) x = rng.Normal(0.0, centroid_std_);
  return c;
}

std::vector<double> SyntheticExtractor::Compute(const AudioInput& audio) const {
  std::string_view bytes(reinterpret_cast<const char*>(audio.samples.data()),
                         audio.samples.size() * sizeof(float));
  uint64_t audio_hash = Fnv1a64(bytes, Fnv1a64(audio.utterance_id));
  RngStream rng(seed_ ^ audio_hash, "synthetic-extractor/noise/" + audio.speaker_id);
  std::vector<double> v = Centroid(audio.speaker_id);
  for (auto& x : v) x += rng.Normal(0.0, noise_std_);
  return v;
}

SpeakerEmbedding ExtractEmbedding(const AudioInput& audio,
                                  const EmbeddingExtractor& extractor) {
  if (audio.samples.empty()) {
    Throw(ErrorKind::kInvalidInput, "empty audio for utterance " + audio.utterance_id);
  }
  if (audio.sample_rate <= 0) {
    Throw(ErrorKind::kInvalidInput, "non-positive sample rate for " + audio.utterance_id);
  }
  std::vector<double> values = extractor.Compute(audio);
  if (static_cast<int>(values.size()) != extractor.dim()) {
    Throw(ErrorKind::kContractViolation,
          "extractor returned " + std::to_string(values.size()) +
              " values, expected " + std::to_string(extractor.dim()));
  }
  if (!AllFinite(values)) {
    Throw(ErrorKind::kContractViolation,
          "extractor returned non-finite values for " + audio.utterance_id);
  }
  return SpeakerEmbedding{audio.utterance_id, audio.speaker_id, std::move(values)};
}

EnrollmentProfile AggregateEnrollment(std::span<const SpeakerEmbedding> embeddings,
                                      const std::string& speaker_id,
                                      bool length_normalize) {
  if (embeddings.empty()) {
    Throw(ErrorKind::kInvalidInput, "no enrollment embeddings for speaker " + speaker_id);
  }
  const size_t dim = embeddings.front().values.size();
  if (dim == 0) Throw(ErrorKind::kInvalidInput, "zero-length enrollment embedding");
  EnrollmentProfile profile;
  profile.speaker_id = speaker_id;
  profile.embedding.assign(dim, 0.0);
  for (const auto& e : embeddings) {
    if (e.speaker_id != speaker_id) {
      Throw(ErrorKind::kContractViolation,
            "embedding " + e.utterance_id + " belongs to " + e.speaker_id +
                ", not " + speaker_id);
    }
    if (e.values.size() != dim) {
      Throw(ErrorKind::kContractViolation,
            "embedding " + e.utterance_id + " has dimension " +
                std::to_string(e.values.size()) + ", expected " + std::to_string(dim));
    }
    double scale = 1.0;
    if (length_normalize) {
      double norm = 0.0;
      for (double x : e.values) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) {
        Throw(ErrorKind::kNumeric, "cannot length-normalize zero embedding " + e.utterance_id);
      }
      scale = 1.0 / norm;
    }
    for (size_t j = 0; j < dim; ++j) profile.embedding[j] += scale * e.values[j];
    profile.source_utterances.push_back(e.utterance_id);
  }
  const double n = static_cast<double>(embeddings.size());
  for (auto& x : profile.embedding) x /= n;
  return profile;
}

std::string FormatProfiles(const std::vector<EnrollmentProfile>& profiles) {
  std::string out;
  for (const auto& p : profiles) {
    out += p.speaker_id;
    out += '\t';
    out += std::to_string(p.n());
    out += '\t';
    out += Join(p.source_utterances, ",");
    out += '\t';
    out += FormatVector(p.embedding);
    out += '\n';
  }
  return out;
}

void StoreProfiles(const std::vector<EnrollmentProfile>& profiles,
                   const std::string& path) {
  for (const auto& p : profiles) {
    if (p.n() < 1) {
      Throw(ErrorKind::kContractViolation, "profile " + p.speaker_id + " has no utterances");
    }
  }
  WriteFileAtomic(path, FormatProfiles(profiles));
}

std::vector<EnrollmentProfile> ParseProfiles(const std::string& content,
                                             const std::string& source_name) {
  std::vector<EnrollmentProfile> profiles;
  size_t dim = 0;
  size_t pos = 0;
  int line_no = 0;
  while (pos < content.size()) {
    ++line_no;
    size_t eol = content.find('\n', pos);
    bool terminated = eol != std::string::npos;
    std::string line = content.substr(pos, terminated ? eol - pos : std::string::npos);
    pos = terminated ? eol + 1 : content.size();
    if (line.empty()) continue;

    auto fail = [&](const std::string& why) {
      std::string record = line.substr(0, line.find('\t'));
      Throw(ErrorKind::kParse, source_name + ":" + std::to_string(line_no) +
                                   ": record '" + record + "': " + why);
    };
    if (!terminated) fail("truncated record (missing end of line)");
    auto fields = Split(line, '\t');
    if (fields.size() != 4) fail("expected 4 tab-separated fields, got " +
                                 std::to_string(fields.size()));
    EnrollmentProfile p;
    p.speaker_id = fields[0];
    if (p.speaker_id.empty()) fail("empty speaker id");
    long long n;
    if (!ParseInt(fields[1], &n) || n < 1) fail("invalid utterance count '" + fields[1] + "'");
    p.source_utterances = Split(fields[2], ',');
    if (static_cast<long long>(p.source_utterances.size()) != n) {
      fail("count " + std::to_string(n) + " does not match " +
           std::to_string(p.source_utterances.size()) + " listed utterances");
    }
    bool ok;
    p.embedding = ParseVector(fields[3], &ok);
    if (!ok) fail("malformed embedding values");
    if (p.embedding.empty()) fail("empty embedding");
    if (dim == 0) dim = p.embedding.size();
    if (p.embedding.size() != dim) {
      fail("embedding has " + std::to_string(p.embedding.size()) + " values, expected " +
           std::to_string(dim));
    }
    profiles.push_back(std::move(p));
  }
  return profiles;
}

std::vector<EnrollmentProfile> LoadProfiles(const std::string& path) {
  return ParseProfiles(ReadFileToString(path), path);
}

EmbeddingTable ReadEmbeddingTable(const std::string& path) {
  EmbeddingTable table;
  auto lines = ReadLines(path);
  size_t dim = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    auto where = path + ":" + std::to_string(i + 1) + ": ";
    auto fields = Split(lines[i], '\t');
    if (fields.size() != 3) Throw(ErrorKind::kParse, where + "expected 3 tab-separated fields");
    bool ok;
    SpeakerEmbedding e{fields[0], fields[1], ParseVector(fields[2], &ok)};
    if (!ok || e.values.empty()) Throw(ErrorKind::kParse, where + "malformed embedding values");
    if (dim == 0) dim = e.values.size();
    if (e.values.size() != dim) Throw(ErrorKind::kParse, where + "inconsistent embedding dimension");
    if (!table.emplace(e.utterance_id, e).second) {
      Throw(ErrorKind::kParse, where + "duplicate utterance " + e.utterance_id);
    }
  }
  return table;
}

std::string FormatEmbeddingTable(const EmbeddingTable& table) {
  std::string out;
  for (const auto& [utt, e] : table) {
    out += utt;
    out += '\t';
    out += e.speaker_id;
    out += '\t';
    out += FormatVector(e.values);
    out += '\n';
  }
  return out;
}

std::vector<double> CorpusMeanEmbedding(const std::vector<EnrollmentProfile>& profiles) {
  if (profiles.empty()) Throw(ErrorKind::kInvalidInput, "no profiles to average");
  std::vector<double> mean(profiles.front().embedding.size(), 0.0);
  for (const auto& p : profiles) {
    if (p.embedding.size() != mean.size()) {
      Throw(ErrorKind::kContractViolation, "profile dimension mismatch: " + p.speaker_id);
    }
    for (size_t j = 0; j < mean.size(); ++j) mean[j] += p.embedding[j];
  }
  for (auto& x : mean) x /= static_cast<double>(profiles.size());
  return mean;
}

}  // namespace spkaware
