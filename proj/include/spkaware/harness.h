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

#ifndef SPKAWARE_HARNESS_H_
#define SPKAWARE_HARNESS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "spkaware/backbone.h"
#include "spkaware/metrics.h"
#include "spkaware/protocols.h"
#include "spkaware/synthetic.h"
#include "spkaware/trainer.h"

namespace spkaware {

// Progress and warnings from long-running commands.
using LogSink = std::function<void(const std::string&)>;
void SetLogSink(LogSink sink);
void LogMessage(const std::string& message);

// Default data root for commands that read corpus metadata.
inline constexpr const char* kDataRootEnv = "SPKAWARE_DATA_ROOT";
std::string DefaultDataRoot();

// Experiment description, stored as JSON. Command-line flags override the
// fields they name; every command that trains writes the effective config
// next to its outputs.
struct ExperimentConfig {
  std::optional<uint64_t> seed;
  std::vector<Strategy> strategies;
  BackboneConfig backbone;
  OptimizerSettings optimizer;
  TdcfCosts costs;
  std::vector<int> k_list;
  std::string external_enrollment = "corpus-mean";
  // metadata_dir, train_protocol, dev_protocol, eval_protocol, enrollment,
  // features, embeddings, spk2gender, corpus_manifest, asv_rates, output_dir
  std::map<std::string, std::string> paths;

  std::string Path(const std::string& key) const;
};

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j, const std::string& source);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// build-protocol
struct BuildProtocolOptions {
  std::string metadata_dir;
  std::string setup = "main";  // main | ablation
  std::optional<uint64_t> seed;
  std::string out_dir;
};
struct BuildProtocolResult {
  Protocol protocol;
  std::map<std::string, std::string> files;  // partition -> path, plus "provenance"
};
// Finds the ASVspoof 2019 LA CM protocols and ASV enrollment lists anywhere
// below `metadata_dir`.
struct MetadataFiles {
  std::string cm_train, cm_dev, cm_eval;
  std::vector<std::string> asv_enrollment;
};
MetadataFiles DiscoverMetadata(const std::string& metadata_dir);
Protocol LoadOriginalProtocol(const MetadataFiles& files);
std::set<std::string> EnrollableSpeakers(const Protocol& original, const MetadataFiles& files);
BuildProtocolResult RunBuildProtocol(const BuildProtocolOptions& options);

// enroll
struct EnrollOptions {
  std::vector<std::string> protocols;  // speakers sampled from bonafide trials
  std::vector<std::string> asv_enrollment;  // speakers enrolled from fixed lists
  std::string embeddings;
  std::string spk2gender;
  std::optional<uint64_t> seed;
  int n_female = 11;
  int n_male = 19;
  bool length_normalize = false;
  std::string out;
};
std::vector<EnrollmentProfile> RunEnroll(const EnrollOptions& options);

// train
struct TrainOptions {
  std::string config;
  std::optional<Strategy> strategy;
  std::string train_protocol;
  std::string dev_protocol;
  std::string enrollment;
  std::string features;
  std::optional<uint64_t> seed;
  std::optional<int> epochs;
  std::optional<double> learning_rate;
  std::string external_enrollment;
  std::string out;  // checkpoint path
};
struct TrainSummary {
  std::string checkpoint;
  int best_epoch = 0;
  double best_dev_eer = 0.0;
  std::vector<EpochLog> log;
};
TrainSummary RunTrain(const TrainOptions& options);

// score
struct ScoreOptions {
  std::string checkpoint;
  std::optional<Strategy> strategy;
  std::string protocol;
  std::string enrollment;
  std::string features;
  bool use_final = false;
  std::string out;
};
std::vector<std::pair<std::string, double>> RunScore(const ScoreOptions& options);

// evaluate
struct EvaluateOptions {
  std::string scores;
  std::string protocol;
  std::string asv_rates;
  std::string baseline_report;
  std::string name;
  std::string config;  // optional, for metric constants
  bool per_attack_asv = false;
  std::string out;  // prefix: <out>.report.txt, <out>.table.txt, <out>.csv
};
EvalReport RunEvaluate(const EvaluateOptions& options);

// augment-sweep
struct AugmentSweepOptions {
  std::string config;
  std::optional<Strategy> strategy;
  std::string corpus_manifest;
  std::vector<int> k_list;
  std::string train_protocol;
  std::string dev_protocol;
  std::string eval_protocol;
  std::string enrollment;
  std::string features;
  std::string asv_rates;  // optional
  std::string baseline_report;  // optional
  std::string reference_report;  // optional
  std::optional<uint64_t> seed;
  std::optional<int> epochs;
  std::string out_dir;
};
struct SweepRow {
  int k = 0;
  bool skipped = false;
  std::string note;
  size_t n_bonafide_train = 0;
  size_t n_spoof_train = 0;
  size_t n_external = 0;
  double eval_eer = 0.0;
  std::optional<double> min_tdcf;
};
std::vector<SweepRow> RunAugmentSweep(const AugmentSweepOptions& options);
std::string FormatSweepTable(const std::vector<SweepRow>& rows);
// EER against k with optional horizontal reference lines.
std::string RenderSweepSvg(const std::vector<SweepRow>& rows, std::optional<double> baseline_eer,
                           std::optional<double> reference_eer, const std::string& strategy);

// synth-corpus
void RunSynthCorpus(const SynthCorpusConfig& config, const std::string& out_dir);

}  // namespace spkaware

#endif  // SPKAWARE_HARNESS_H_
