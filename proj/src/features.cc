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

#include "spkaware/features.h"

#include <cstdint>
#include <cstring>

#include "spkaware/error.h"
#include "spkaware/io.h"

namespace spkaware {

namespace {

void PutU32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& source)
      : bytes_(bytes), source_(source) {}

  void Need(size_t n) const {
    if (pos_ + n > bytes_.size()) {
      Throw(ErrorKind::kParse, source_ + ": truncated feature archive at byte " +
                                   std::to_string(pos_));
    }
  }
  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::string Bytes(size_t n) {
    Need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  float F32() {
    uint32_t bits = U32();
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    return f;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  const std::string& source_;
  size_t pos_ = 0;
};

}  // namespace

void FeatureArchive::Add(const std::string& utterance_id, Frames frames) {
  if (frames.data.size() != static_cast<size_t>(frames.bins) * frames.frames) {
    Throw(ErrorKind::kContractViolation, "frames size mismatch for " + utterance_id);
  }
  if (!items_.emplace(utterance_id, std::move(frames)).second) {
    Throw(ErrorKind::kConsistency, "duplicate utterance in feature archive: " + utterance_id);
  }
}

const Frames* FeatureArchive::Find(const std::string& utterance_id) const {
  auto it = items_.find(utterance_id);
  return it == items_.end() ? nullptr : &it->second;
}

const Frames& FeatureArchive::Get(const std::string& utterance_id) const {
  const Frames* f = Find(utterance_id);
  if (!f) Throw(ErrorKind::kConsistency, "no features for utterance " + utterance_id);
  return *f;
}

std::string FeatureArchive::Serialize() const {
  std::string out(kMagic, 8);
  PutU32(&out, static_cast<uint32_t>(items_.size()));
  for (const auto& [id, f] : items_) {
    PutU32(&out, static_cast<uint32_t>(id.size()));
    out += id;
    PutU32(&out, static_cast<uint32_t>(f.bins));
    PutU32(&out, static_cast<uint32_t>(f.frames));
    for (float x : f.data) {
      uint32_t bits;
      std::memcpy(&bits, &x, sizeof(bits));
      PutU32(&out, bits);
    }
  }
  return out;
}

FeatureArchive FeatureArchive::Deserialize(const std::string& bytes,
                                           const std::string& source) {
  Reader r(bytes, source);
  if (r.Bytes(8) != std::string(kMagic, 8)) {
    Throw(ErrorKind::kParse, source + ": not a feature archive (bad magic)");
  }
  FeatureArchive archive;
  uint32_t count = r.U32();
  for (uint32_t i = 0; i < count; ++i) {
    std::string id = r.Bytes(r.U32());
    Frames f;
    f.bins = static_cast<int>(r.U32());
    f.frames = static_cast<int>(r.U32());
    size_t n = static_cast<size_t>(f.bins) * f.frames;
    r.Need(n * 4);
    f.data.resize(n);
    for (size_t k = 0; k < n; ++k) f.data[k] = r.F32();
    archive.Add(id, std::move(f));
  }
  if (!r.AtEnd()) Throw(ErrorKind::kParse, source + ": trailing bytes after feature archive");
  return archive;
}

void FeatureArchive::Save(const std::string& path) const { WriteFileAtomic(path, Serialize()); }

FeatureArchive FeatureArchive::Load(const std::string& path) {
  return Deserialize(ReadFileToString(path), path);
}

}  // namespace spkaware
