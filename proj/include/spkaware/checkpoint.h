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

#ifndef SPKAWARE_CHECKPOINT_H_
#define SPKAWARE_CHECKPOINT_H_

#include <string>

#include "json.hpp"
#include "spkaware/backbone.h"
#include "spkaware/trainer.h"

namespace spkaware {

inline constexpr const char* kCheckpointFormat = "spkaware-checkpoint";
inline constexpr int kCheckpointVersion = 1;

nlohmann::json ConfigToJson(const BackboneConfig& config);
// Missing fields keep the values already in `config`; unknown fields are
// rejected.
void ConfigFromJson(const nlohmann::json& j, BackboneConfig* config);

nlohmann::json ModelToJson(const ReferenceBackbone& model);
ReferenceBackbone ModelFromJson(const BackboneConfig& config, const nlohmann::json& j);

struct Checkpoint {
  BackboneConfig config;
  uint64_t seed = 0;
  int best_epoch = 0;
  std::vector<EpochLog> log;
  std::string external_enrollment = "corpus-mean";
  nlohmann::json weights_final;
  nlohmann::json weights_best;

  ReferenceBackbone FinalModel() const { return ModelFromJson(config, weights_final); }
  ReferenceBackbone BestModel() const { return ModelFromJson(config, weights_best); }
};

Checkpoint MakeCheckpoint(const BackboneConfig& config, const TrainResult& result);
std::string FormatCheckpoint(const Checkpoint& ckpt);
Checkpoint ParseCheckpoint(const std::string& content, const std::string& source);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace spkaware

#endif  // SPKAWARE_CHECKPOINT_H_
