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

#ifndef SPKAWARE_TRAINER_H_
#define SPKAWARE_TRAINER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spkaware/backbone.h"
#include "spkaware/embeddings.h"
#include "spkaware/features.h"
#include "spkaware/protocols.h"

namespace spkaware {

inline constexpr int kLabelBonafide = 0;
inline constexpr int kLabelSpoof = 1;

struct TrainingExample {
  std::string utterance_id;
  const Frames* frames = nullptr;  // owned by the feature archive
  std::vector<double> enrollment;  // empty when the strategy ignores it
  int label = kLabelBonafide;
};

struct OptimizerSettings {
  int epochs = 30;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void Validate() const;  // throws kConfiguration
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_eer = 0.0;  // percent; NaN without a dev set
};

struct TrainResult {
  ReferenceBackbone final_model;
  ReferenceBackbone best_model;  // lowest dev EER, earliest epoch on ties
  int best_epoch = 0;
  std::vector<EpochLog> log;
  uint64_t seed = 0;
};

// What to present as enrollment for pooled external bonafide trials, whose
// speakers have no enrollment profile.
enum class ExternalEnrollment { kCorpusMean, kZero };

ExternalEnrollment ParseExternalEnrollment(const std::string& name);
const char* ExternalEnrollmentName(ExternalEnrollment e);

using ProfileMap = std::map<std::string, EnrollmentProfile>;
ProfileMap IndexProfiles(const std::vector<EnrollmentProfile>& profiles);

// Pairs each trial with its features and the enrollment of its claimed
// speaker. With `need_enrollment` false the enrollment vectors stay empty.
std::vector<TrainingExample> BuildExamples(const std::vector<Trial>& trials,
                                           const ProfileMap& profiles,
                                           const FeatureArchive& features, int d_embed,
                                           bool need_enrollment,
                                           ExternalEnrollment external = ExternalEnrollment::kCorpusMean);

// Mini-batch Adam on the class-weighted cross-entropy. Batching order and
// initialization derive from `seed` only.
TrainResult Train(const BackboneConfig& config, const std::vector<TrainingExample>& train,
                  const std::vector<TrainingExample>& dev, const OptimizerSettings& opt,
                  uint64_t seed, const std::function<void(const EpochLog&)>& progress = {});

std::vector<std::pair<std::string, double>> ScoreExamples(
    const CountermeasureBackbone& model, const std::vector<TrainingExample>& examples);

// Pooled EER in percent of scored examples.
double ExamplesEer(const CountermeasureBackbone& model,
                   const std::vector<TrainingExample>& examples);

}  // namespace spkaware

#endif  // SPKAWARE_TRAINER_H_
