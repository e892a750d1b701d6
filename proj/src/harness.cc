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

#include "spkaware/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>

#include "spkaware/checkpoint.h"
#include "spkaware/error.h"
#include "spkaware/features.h"
#include "spkaware/io.h"

namespace spkaware {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::mutex g_log_mutex;
LogSink g_log_sink;

void RequireFlag(const std::string& value, const std::string& flag) {
  if (value.empty()) Throw(ErrorKind::kConfiguration, "missing " + flag);
}

void RequireFile(const std::string& path, const std::string& what) {
  if (!fs::is_regular_file(path)) Throw(ErrorKind::kStorage, what + " not found: " + path);
}

std::string Pick(const std::string& flag_value, const ExperimentConfig& cfg,
                 const std::string& key) {
  return flag_value.empty() ? cfg.Path(key) : flag_value;
}

uint64_t RequireSeed(const std::optional<uint64_t>& flag, const ExperimentConfig& cfg) {
  if (flag) return *flag;
  if (cfg.seed) return *cfg.seed;
  Throw(ErrorKind::kConfiguration, "no seed given: pass --seed or set \"seed\" in the config");
}

void EnsureParentDir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) Throw(ErrorKind::kStorage, "cannot create " + parent.string() + ": " + ec.message());
}

ExperimentConfig LoadOrDefault(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  RequireFile(path, "config file");
  return LoadExperimentConfig(path);
}

std::string FormatLog(const std::vector<EpochLog>& log) {
  std::string out = "epoch\ttrain_loss\tdev_eer\n";
  for (const auto& e : log) {
    out += std::to_string(e.epoch) + "\t" + FormatDouble(e.train_loss) + "\t" +
           (std::isnan(e.dev_eer) ? std::string("nan") : FormatDouble(e.dev_eer)) + "\n";
  }
  return out;
}

void LogEpoch(const std::string& tag, const EpochLog& e) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s epoch %d loss %.4f dev_eer %.2f", tag.c_str(), e.epoch,
                e.train_loss, e.dev_eer);
  LogMessage(buf);
}

}  // namespace

void SetLogSink(LogSink sink) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  g_log_sink = std::move(sink);
}

void LogMessage(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  if (g_log_sink) g_log_sink(message);
}

std::string DefaultDataRoot() {
  const char* v = std::getenv(kDataRootEnv);
  return v ? std::string(v) : std::string();
}

std::string ExperimentConfig::Path(const std::string& key) const {
  auto it = paths.find(key);
  return it == paths.end() ? std::string() : it->second;
}

json ExperimentConfigToJson(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  json strategies = json::array();
  for (Strategy s : c.strategies) strategies.push_back(std::string(StrategyName(s)));
  j["strategies"] = strategies;
  j["backbone"] = ConfigToJson(c.backbone);
  j["optimizer"] = json{{"epochs", c.optimizer.epochs},
                        {"learning_rate", c.optimizer.learning_rate},
                        {"weight_decay", c.optimizer.weight_decay},
                        {"beta1", c.optimizer.beta1},
                        {"beta2", c.optimizer.beta2},
                        {"epsilon", c.optimizer.epsilon}};
  j["metrics"] = json{{"p_target", c.costs.p_target},     {"p_nontarget", c.costs.p_nontarget},
                      {"p_spoof", c.costs.p_spoof},       {"c_miss_asv", c.costs.c_miss_asv},
                      {"c_fa_asv", c.costs.c_fa_asv},     {"c_miss_cm", c.costs.c_miss_cm},
                      {"c_fa_cm", c.costs.c_fa_cm}};
  j["augmentation"] = json{{"k_list", c.k_list}};
  j["external_enrollment"] = c.external_enrollment;
  j["paths"] = c.paths;
  return j;
}

ExperimentConfig ExperimentConfigFromJson(const json& j, const std::string& source) {
  if (!j.is_object()) Throw(ErrorKind::kParse, source + ": config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        if (!value.is_null()) c.seed = value.get<uint64_t>();
      } else if (key == "strategies") {
        for (const auto& s : value) c.strategies.push_back(ParseStrategy(s.get<std::string>()));
      } else if (key == "backbone") {
        ConfigFromJson(value, &c.backbone);
      } else if (key == "optimizer") {
        for (const auto& [k, v] : value.items()) {
          if (k == "epochs") c.optimizer.epochs = v.get<int>();
          else if (k == "learning_rate") c.optimizer.learning_rate = v.get<double>();
          else if (k == "weight_decay") c.optimizer.weight_decay = v.get<double>();
          else if (k == "beta1") c.optimizer.beta1 = v.get<double>();
          else if (k == "beta2") c.optimizer.beta2 = v.get<double>();
          else if (k == "epsilon") c.optimizer.epsilon = v.get<double>();
          else Throw(ErrorKind::kParse, source + ": unknown optimizer field '" + k + "'");
        }
      } else if (key == "metrics") {
        for (const auto& [k, v] : value.items()) {
          const double d = v.get<double>();
          if (k == "p_target") c.costs.p_target = d;
          else if (k == "p_nontarget") c.costs.p_nontarget = d;
          else if (k == "p_spoof") c.costs.p_spoof = d;
          else if (k == "c_miss_asv") c.costs.c_miss_asv = d;
          else if (k == "c_fa_asv") c.costs.c_fa_asv = d;
          else if (k == "c_miss_cm") c.costs.c_miss_cm = d;
          else if (k == "c_fa_cm") c.costs.c_fa_cm = d;
          else Throw(ErrorKind::kParse, source + ": unknown metrics field '" + k + "'");
        }
      } else if (key == "augmentation") {
        for (const auto& [k, v] : value.items()) {
          if (k == "k_list") c.k_list = v.get<std::vector<int>>();
          else Throw(ErrorKind::kParse, source + ": unknown augmentation field '" + k + "'");
        }
      } else if (key == "external_enrollment") {
        c.external_enrollment = value.get<std::string>();
        ParseExternalEnrollment(c.external_enrollment);
      } else if (key == "paths") {
        c.paths = value.get<std::map<std::string, std::string>>();
      } else {
        Throw(ErrorKind::kParse, source + ": unknown config field '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    Throw(ErrorKind::kParse, source + ": " + e.what());
  }
  c.backbone.Validate();
  c.optimizer.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadFileToString(path));
  } catch (const json::exception& e) {
    Throw(ErrorKind::kParse, path + ": not valid JSON: " + e.what());
  }
  return ExperimentConfigFromJson(j, path);
}

MetadataFiles DiscoverMetadata(const std::string& metadata_dir) {
  if (metadata_dir.empty()) {
    Throw(ErrorKind::kConfiguration, std::string("no metadata directory: pass --metadata-dir or set ") +
                                         kDataRootEnv);
  }
  if (!fs::is_directory(metadata_dir)) {
    Throw(ErrorKind::kStorage, "metadata directory not found: " + metadata_dir);
  }
  std::map<std::string, std::vector<std::string>> found;
  std::vector<std::string> asv;
  for (const auto& entry : fs::recursive_directory_iterator(metadata_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == kCmTrainFile || name == kCmDevFile || name == kCmEvalFile) {
      found[name].push_back(entry.path().string());
    }
    for (const char* part : {"dev", "eval"}) {
      for (const char* sex : {"female", "male"}) {
        if (name == AsvEnrollmentFileName(part, sex)) asv.push_back(entry.path().string());
      }
    }
  }
  auto one = [&](const char* name) {
    auto it = found.find(name);
    if (it == found.end()) {
      Throw(ErrorKind::kStorage, std::string("no ") + name + " below " + metadata_dir);
    }
    if (it->second.size() > 1) {
      Throw(ErrorKind::kConsistency, std::string("several copies of ") + name + " below " +
                                         metadata_dir);
    }
    return it->second.front();
  };
  MetadataFiles files;
  files.cm_train = one(kCmTrainFile);
  files.cm_dev = one(kCmDevFile);
  files.cm_eval = one(kCmEvalFile);
  std::sort(asv.begin(), asv.end());
  files.asv_enrollment = asv;
  return files;
}

Protocol LoadOriginalProtocol(const MetadataFiles& files) {
  Protocol p;
  p.name = "original";
  for (auto [path, part] : {std::pair{files.cm_train, Partition::kTrain},
                            std::pair{files.cm_dev, Partition::kDev},
                            std::pair{files.cm_eval, Partition::kEval}}) {
    auto trials = ParseCmProtocol(path, part);
    p.trials.insert(p.trials.end(), trials.begin(), trials.end());
  }
  return p;
}

std::set<std::string> EnrollableSpeakers(const Protocol& original, const MetadataFiles& files) {
  std::set<std::string> speakers;
  for (const auto& t : original.trials) {
    if (t.partition == Partition::kTrain) speakers.insert(t.true_speaker_id);
  }
  for (const auto& path : files.asv_enrollment) {
    for (const auto& [spk, utts] : ReadAsvEnrollmentList(path)) {
      if (!utts.empty()) speakers.insert(spk);
    }
  }
  return speakers;
}

BuildProtocolResult RunBuildProtocol(const BuildProtocolOptions& o) {
  if (o.setup != "main" && o.setup != "ablation") {
    Throw(ErrorKind::kInvalidInput, "unknown setup '" + o.setup + "' (expected main or ablation)");
  }
  RequireFlag(o.out_dir, "--out");
  if (o.setup == "ablation" && !o.seed) {
    Throw(ErrorKind::kConfiguration, "the ablation setup needs --seed");
  }
  const std::string dir = o.metadata_dir.empty() ? DefaultDataRoot() : o.metadata_dir;
  const MetadataFiles files = DiscoverMetadata(dir);
  const Protocol original = LoadOriginalProtocol(files);
  Protocol protocol = BuildMainProtocol(original, EnrollableSpeakers(original, files));
  if (o.setup == "ablation") protocol = BuildAblationProtocol(protocol, *o.seed);
  protocol.provenance.Set("source.cm_train", files.cm_train);
  protocol.provenance.Set("source.cm_dev", files.cm_dev);
  protocol.provenance.Set("source.cm_eval", files.cm_eval);
  protocol.provenance.Set("source.asv_enrollment", Join(files.asv_enrollment, ","));

  BuildProtocolResult result;
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) Throw(ErrorKind::kStorage, "cannot create " + o.out_dir + ": " + ec.message());
  OutputTransaction tx;
  for (Partition p : {Partition::kTrain, Partition::kDev, Partition::kEval}) {
    const std::string path =
        (fs::path(o.out_dir) / (o.setup + "." + PartitionName(p) + ".txt")).string();
    tx.Add(path, FormatCmProtocol(protocol.Partition(p)));
    result.files[PartitionName(p)] = path;
  }
  const std::string prov = (fs::path(o.out_dir) / (o.setup + ".provenance.txt")).string();
  tx.Add(prov, protocol.provenance.Format());
  result.files["provenance"] = prov;
  tx.Commit();
  result.protocol = std::move(protocol);
  return result;
}

std::vector<EnrollmentProfile> RunEnroll(const EnrollOptions& o) {
  RequireFlag(o.embeddings, "--embeddings");
  RequireFlag(o.out, "--out");
  if (o.protocols.empty() && o.asv_enrollment.empty()) {
    Throw(ErrorKind::kConfiguration, "enroll needs --protocol and/or --asv-enrollment");
  }
  RequireFile(o.embeddings, "embedding table");
  for (const auto& p : o.protocols) RequireFile(p, "protocol");
  for (const auto& p : o.asv_enrollment) RequireFile(p, "ASV enrollment list");
  if (!o.protocols.empty()) {
    RequireFlag(o.spk2gender, "--spk2gender");
    RequireFile(o.spk2gender, "spk2gender file");
    if (!o.seed) Throw(ErrorKind::kConfiguration, "sampling enrollment utterances needs --seed");
  }

  EnrollmentSets sets;
  if (!o.protocols.empty()) {
    std::vector<Trial> trials;
    for (const auto& path : o.protocols) {
      auto t = ParseCmProtocol(path, Partition::kTrain);
      trials.insert(trials.end(), t.begin(), t.end());
    }
    std::vector<Trial> native;
    for (auto& t : trials) {
      if (!t.external()) native.push_back(std::move(t));
    }
    sets = BuildEnrollmentSets(native, ReadSpk2Gender(o.spk2gender), *o.seed, o.n_female,
                               o.n_male);
  }
  for (const auto& path : o.asv_enrollment) {
    for (auto& [spk, utts] : ReadAsvEnrollmentList(path)) {
      if (sets.count(spk)) {
        Throw(ErrorKind::kConsistency, "speaker " + spk + " is enrolled twice (" + path + ")");
      }
      sets[spk] = std::move(utts);
    }
  }

  const EmbeddingTable table = ReadEmbeddingTable(o.embeddings);
  std::vector<EnrollmentProfile> profiles;
  for (const auto& [spk, utts] : sets) {
    std::vector<SpeakerEmbedding> embs;
    for (const auto& utt : utts) {
      auto it = table.find(utt);
      if (it == table.end()) {
        Throw(ErrorKind::kConsistency, "no embedding for enrollment utterance " + utt +
                                           " of speaker " + spk);
      }
      SpeakerEmbedding e = it->second;
      e.speaker_id = spk;
      embs.push_back(std::move(e));
    }
    profiles.push_back(AggregateEnrollment(embs, spk, o.length_normalize));
  }
  EnsureParentDir(o.out);
  OutputTransaction tx;
  tx.Add(o.out, FormatProfiles(profiles));
  tx.Commit();
  return profiles;
}

namespace {

struct TrainingData {
  FeatureArchive features;
  ProfileMap profiles;
};

TrainingData LoadTrainingData(const std::string& features, const std::string& enrollment,
                              bool need_enrollment) {
  TrainingData d;
  d.features = FeatureArchive::Load(features);
  if (need_enrollment) d.profiles = IndexProfiles(LoadProfiles(enrollment));
  return d;
}

}  // namespace

TrainSummary RunTrain(const TrainOptions& o) {
  ExperimentConfig cfg = LoadOrDefault(o.config);
  if (o.strategy) cfg.backbone.strategy = *o.strategy;
  if (o.epochs) cfg.optimizer.epochs = *o.epochs;
  if (o.learning_rate) cfg.optimizer.learning_rate = *o.learning_rate;
  if (!o.external_enrollment.empty()) cfg.external_enrollment = o.external_enrollment;
  const uint64_t seed = RequireSeed(o.seed, cfg);
  cfg.seed = seed;
  cfg.strategies = {cfg.backbone.strategy};
  const std::string train_path = Pick(o.train_protocol, cfg, "train_protocol");
  const std::string dev_path = Pick(o.dev_protocol, cfg, "dev_protocol");
  const std::string features = Pick(o.features, cfg, "features");
  const std::string enrollment = Pick(o.enrollment, cfg, "enrollment");
  const bool need_enrollment = cfg.backbone.strategy != Strategy::kBaseline;
  RequireFlag(o.out, "--out");
  RequireFlag(train_path, "--train-protocol");
  RequireFlag(features, "--features");
  RequireFile(train_path, "train protocol");
  if (!dev_path.empty()) RequireFile(dev_path, "dev protocol");
  RequireFile(features, "feature archive");
  if (need_enrollment) {
    RequireFlag(enrollment, "--enrollment");
    RequireFile(enrollment, "enrollment store");
  }
  cfg.paths["train_protocol"] = train_path;
  if (!dev_path.empty()) cfg.paths["dev_protocol"] = dev_path;
  cfg.paths["features"] = features;
  if (!enrollment.empty()) cfg.paths["enrollment"] = enrollment;
  cfg.backbone.Validate();
  cfg.optimizer.Validate();
  const ExternalEnrollment external = ParseExternalEnrollment(cfg.external_enrollment);

  const TrainingData data = LoadTrainingData(features, enrollment, need_enrollment);
  const auto train_trials = ParseCmProtocol(train_path, Partition::kTrain);
  const auto train = BuildExamples(train_trials, data.profiles, data.features,
                                   cfg.backbone.d_embed, need_enrollment, external);
  std::vector<TrainingExample> dev;
  if (!dev_path.empty()) {
    dev = BuildExamples(ParseCmProtocol(dev_path, Partition::kDev), data.profiles, data.features,
                        cfg.backbone.d_embed, need_enrollment, external);
  }
  const std::string tag(StrategyName(cfg.backbone.strategy));
  TrainResult result = Train(cfg.backbone, train, dev, cfg.optimizer, seed,
                             [&](const EpochLog& e) { LogEpoch(tag, e); });

  Checkpoint ckpt = MakeCheckpoint(cfg.backbone, result);
  ckpt.external_enrollment = cfg.external_enrollment;
  EnsureParentDir(o.out);
  OutputTransaction tx;
  tx.Add(o.out, FormatCheckpoint(ckpt));
  tx.Add(o.out + ".log.tsv", FormatLog(result.log));
  tx.Add(o.out + ".config.json", ExperimentConfigToJson(cfg).dump(2) + "\n");
  tx.Commit();

  TrainSummary s;
  s.checkpoint = o.out;
  s.best_epoch = result.best_epoch;
  s.log = result.log;
  s.best_dev_eer = result.best_epoch > 0 ? result.log[result.best_epoch - 1].dev_eer : NAN;
  return s;
}

std::vector<std::pair<std::string, double>> RunScore(const ScoreOptions& o) {
  RequireFlag(o.checkpoint, "--checkpoint");
  RequireFlag(o.protocol, "--protocol");
  RequireFlag(o.features, "--features");
  RequireFlag(o.out, "--out");
  RequireFile(o.checkpoint, "checkpoint");
  RequireFile(o.protocol, "protocol");
  RequireFile(o.features, "feature archive");
  const Checkpoint ckpt = LoadCheckpoint(o.checkpoint);
  if (o.strategy && *o.strategy != ckpt.config.strategy) {
    Throw(ErrorKind::kConfiguration,
          "checkpoint " + o.checkpoint + " was trained for strategy '" +
              std::string(StrategyName(ckpt.config.strategy)) + "' but --strategy is '" +
              std::string(StrategyName(*o.strategy)) + "'");
  }
  const bool need_enrollment = ckpt.config.strategy != Strategy::kBaseline;
  if (need_enrollment) {
    RequireFlag(o.enrollment, "--enrollment");
    RequireFile(o.enrollment, "enrollment store");
  }
  const ReferenceBackbone model = o.use_final ? ckpt.FinalModel() : ckpt.BestModel();
  const TrainingData data = LoadTrainingData(o.features, o.enrollment, need_enrollment);
  const auto examples =
      BuildExamples(ParseCmProtocol(o.protocol, Partition::kEval), data.profiles, data.features,
                    ckpt.config.d_embed, need_enrollment,
                    ParseExternalEnrollment(ckpt.external_enrollment));
  auto scores = ScoreExamples(model, examples);
  EnsureParentDir(o.out);
  OutputTransaction tx;
  tx.Add(o.out, FormatScoreFile(scores));
  tx.Commit();
  return scores;
}

EvalReport RunEvaluate(const EvaluateOptions& o) {
  RequireFlag(o.scores, "--scores");
  RequireFlag(o.protocol, "--protocol");
  RequireFlag(o.out, "--out");
  if (o.asv_rates.empty()) {
    Throw(ErrorKind::kConfiguration,
          "evaluate needs the ASV operating point for t-DCF: pass --asv-rates FILE "
          "(p_fa_asv, p_miss_asv, p_miss_spoof_asv)");
  }
  RequireFile(o.scores, "score file");
  RequireFile(o.protocol, "protocol");
  RequireFile(o.asv_rates, "ASV rates file");
  if (!o.baseline_report.empty()) RequireFile(o.baseline_report, "baseline report");
  const ExperimentConfig cfg = LoadOrDefault(o.config);

  const AsvOperatingPoint asv = ReadAsvOperatingPoint(o.asv_rates);
  const ScoreMap scores = ReadScoreFile(o.scores);
  const auto trials = ParseCmProtocol(o.protocol, Partition::kEval);
  EvalReport report = PerAttackReport(scores, trials, &asv, cfg.costs, o.per_attack_asv);
  report.name = o.name.empty() ? fs::path(o.scores).stem().string() : o.name;
  std::vector<EvalReport> rows;
  if (!o.baseline_report.empty()) {
    EvalReport base = ParseReportKeyValue(ReadFileToString(o.baseline_report), o.baseline_report);
    if (base.name.empty()) base.name = "baseline";
    AddRelativeImprovements(base, &report);
    rows.push_back(base);
  }
  rows.push_back(report);

  EnsureParentDir(o.out);
  OutputTransaction tx;
  tx.Add(o.out + ".report.txt", FormatReportKeyValue(report));
  tx.Add(o.out + ".table.txt", FormatReportTable(rows));
  tx.Add(o.out + ".csv", FormatReportDelimited(report));
  tx.Commit();
  return report;
}

std::string FormatSweepTable(const std::vector<SweepRow>& rows) {
  std::string out = "k\tstatus\tn_bonafide_train\tn_spoof_train\tn_external\teval_eer\tmin_tdcf\tnote\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k) + "\t" + (r.skipped ? "skipped" : "ok") + "\t";
    if (r.skipped) {
      out += "-\t-\t-\t-\t-\t";
    } else {
      out += std::to_string(r.n_bonafide_train) + "\t" + std::to_string(r.n_spoof_train) + "\t" +
             std::to_string(r.n_external) + "\t" + FormatFixed(r.eval_eer, 2) + "\t" +
             (r.min_tdcf ? FormatFixed(*r.min_tdcf, 3) : std::string("-")) + "\t";
    }
    out += (r.note.empty() ? "-" : r.note) + "\n";
  }
  return out;
}

std::string RenderSweepSvg(const std::vector<SweepRow>& rows, std::optional<double> baseline_eer,
                           std::optional<double> reference_eer, const std::string& strategy) {
  const double w = 640, h = 400, left = 70, right = 170, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  std::vector<const SweepRow*> done;
  for (const auto& r : rows) {
    if (!r.skipped) done.push_back(&r);
  }
  double kmin = 0, kmax = 1, ymin = INFINITY, ymax = -INFINITY;
  if (!done.empty()) {
    kmin = done.front()->k;
    kmax = done.front()->k;
  }
  for (const auto* r : done) {
    kmin = std::min<double>(kmin, r->k);
    kmax = std::max<double>(kmax, r->k);
    ymin = std::min(ymin, r->eval_eer);
    ymax = std::max(ymax, r->eval_eer);
  }
  for (auto ref : {baseline_eer, reference_eer}) {
    if (ref) {
      ymin = std::min(ymin, *ref);
      ymax = std::max(ymax, *ref);
    }
  }
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (kmax == kmin) kmax = kmin + 1;
  const double pad = std::max(0.05 * (ymax - ymin), 0.1);
  ymin = std::max(0.0, ymin - pad);
  ymax += pad;
  auto x_of = [&](double k) { return left + pw * (k - kmin) / (kmax - kmin); };
  auto y_of = [&](double e) { return top + ph * (1.0 - (e - ymin) / (ymax - ymin)); };

  std::string s;
  char buf[512];
  auto add = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    s += buf;
  };
  add("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n", w, h);
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  add("<text x=\"%.0f\" y=\"20\" text-anchor=\"middle\">Eval EER vs additional bonafide "
      "utterances (%s)</text>\n", left + pw / 2, strategy.c_str());
  add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", left,
      top + ph, left + pw, top + ph);
  add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", left, top,
      left, top + ph);
  for (int i = 0; i <= 4; ++i) {
    const double e = ymin + (ymax - ymin) * i / 4.0;
    const double k = kmin + (kmax - kmin) * i / 4.0;
    add("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.2f</text>\n", left - 6, y_of(e) + 4, e);
    add("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.0f</text>\n", x_of(k),
        top + ph + 18, k);
  }
  add("<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"middle\">k (external bonafide utterances)</text>\n",
      left + pw / 2, h - 15);
  add("<text x=\"18\" y=\"%.0f\" transform=\"rotate(-90 18 %.0f)\" text-anchor=\"middle\">"
      "EER (%%)</text>\n", top + ph / 2, top + ph / 2);

  double legend_y = top + 10;
  auto hline = [&](double e, const char* color, const char* label) {
    add("<line class=\"reference\" x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
        "stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n", left, y_of(e), left + pw, y_of(e), color);
    add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" stroke-width=\"2\" "
        "stroke-dasharray=\"6 4\"/>\n", left + pw + 10, legend_y, left + pw + 35, legend_y, color);
    add("<text x=\"%.1f\" y=\"%.1f\">%s %.2f</text>\n", left + pw + 40, legend_y + 4, label, e);
    legend_y += 20;
  };
  if (baseline_eer) hline(*baseline_eer, "green", "baseline");
  if (reference_eer) hline(*reference_eer, "hotpink", "best system");

  if (!done.empty()) {
    s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto* r : done) add("%.1f,%.1f ", x_of(r->k), y_of(r->eval_eer));
    s += "\"/>\n";
    for (const auto* r : done) {
      add("<circle cx=\"%.1f\" cy=\"%.1f\" r=\"4\" fill=\"steelblue\"/>\n", x_of(r->k),
          y_of(r->eval_eer));
    }
    add("<circle cx=\"%.1f\" cy=\"%.1f\" r=\"4\" fill=\"steelblue\"/>\n", left + pw + 22, legend_y);
    add("<text x=\"%.1f\" y=\"%.1f\">%s</text>\n", left + pw + 40, legend_y + 4, strategy.c_str());
  }
  s += "</svg>\n";
  return s;
}

std::vector<SweepRow> RunAugmentSweep(const AugmentSweepOptions& o) {
  ExperimentConfig cfg = LoadOrDefault(o.config);
  if (o.strategy) cfg.backbone.strategy = *o.strategy;
  if (o.epochs) cfg.optimizer.epochs = *o.epochs;
  if (!o.k_list.empty()) cfg.k_list = o.k_list;
  const uint64_t seed = RequireSeed(o.seed, cfg);
  cfg.seed = seed;
  cfg.strategies = {cfg.backbone.strategy};
  const std::string manifest_path = Pick(o.corpus_manifest, cfg, "corpus_manifest");
  const std::string train_path = Pick(o.train_protocol, cfg, "train_protocol");
  const std::string dev_path = Pick(o.dev_protocol, cfg, "dev_protocol");
  const std::string eval_path = Pick(o.eval_protocol, cfg, "eval_protocol");
  const std::string features = Pick(o.features, cfg, "features");
  const std::string enrollment = Pick(o.enrollment, cfg, "enrollment");
  const std::string asv_path = Pick(o.asv_rates, cfg, "asv_rates");
  const std::string out_dir = o.out_dir.empty() ? cfg.Path("output_dir") : o.out_dir;
  const bool need_enrollment = cfg.backbone.strategy != Strategy::kBaseline;

  if (cfg.k_list.empty()) Throw(ErrorKind::kInvalidInput, "--k-list is empty");
  for (int k : cfg.k_list) {
    if (k < 0) Throw(ErrorKind::kInvalidInput, "k must be >= 0, got " + std::to_string(k));
  }
  RequireFlag(manifest_path, "--corpus-manifest");
  RequireFlag(train_path, "--train-protocol");
  RequireFlag(eval_path, "--eval-protocol");
  RequireFlag(features, "--features");
  RequireFlag(out_dir, "--out");
  RequireFile(manifest_path, "corpus manifest");
  RequireFile(train_path, "train protocol");
  RequireFile(eval_path, "eval protocol");
  if (!dev_path.empty()) RequireFile(dev_path, "dev protocol");
  RequireFile(features, "feature archive");
  if (need_enrollment) {
    RequireFlag(enrollment, "--enrollment");
    RequireFile(enrollment, "enrollment store");
  }
  if (!asv_path.empty()) RequireFile(asv_path, "ASV rates file");
  if (!o.baseline_report.empty()) RequireFile(o.baseline_report, "baseline report");
  if (!o.reference_report.empty()) RequireFile(o.reference_report, "reference report");
  cfg.paths["corpus_manifest"] = manifest_path;
  cfg.paths["train_protocol"] = train_path;
  if (!dev_path.empty()) cfg.paths["dev_protocol"] = dev_path;
  cfg.paths["eval_protocol"] = eval_path;
  cfg.paths["features"] = features;
  if (!enrollment.empty()) cfg.paths["enrollment"] = enrollment;
  if (!asv_path.empty()) cfg.paths["asv_rates"] = asv_path;
  cfg.paths["output_dir"] = out_dir;
  cfg.backbone.Validate();
  cfg.optimizer.Validate();
  const ExternalEnrollment external = ParseExternalEnrollment(cfg.external_enrollment);

  const auto manifest = ReadCorpusManifest(manifest_path);
  const TrainingData data = LoadTrainingData(features, enrollment, need_enrollment);
  Protocol train;
  train.name = "train";
  train.trials = ParseCmProtocol(train_path, Partition::kTrain);
  std::vector<TrainingExample> dev;
  if (!dev_path.empty()) {
    dev = BuildExamples(ParseCmProtocol(dev_path, Partition::kDev), data.profiles, data.features,
                        cfg.backbone.d_embed, need_enrollment, external);
  }
  const auto eval_trials = ParseCmProtocol(eval_path, Partition::kEval);
  const auto eval = BuildExamples(eval_trials, data.profiles, data.features, cfg.backbone.d_embed,
                                  need_enrollment, external);
  std::optional<AsvOperatingPoint> asv;
  if (!asv_path.empty()) asv = ReadAsvOperatingPoint(asv_path);

  fs::create_directories(out_dir);
  OutputTransaction tx;
  std::vector<SweepRow> rows;
  const std::string tag(StrategyName(cfg.backbone.strategy));
  for (int k : cfg.k_list) {
    SweepRow row;
    row.k = k;
    if (static_cast<size_t>(k) > manifest.size()) {
      row.skipped = true;
      row.note = "k exceeds the " + std::to_string(manifest.size()) + " manifest utterances";
      LogMessage("warning: skipping k=" + std::to_string(k) + ": " + row.note);
      rows.push_back(row);
      continue;
    }
    const Protocol augmented = AugmentBonafide(train, manifest, k, seed);
    for (const auto& t : augmented.trials) {
      if (t.key == Key::kBonafide) row.n_bonafide_train++;
      else row.n_spoof_train++;
      if (t.external()) row.n_external++;
    }
    const auto examples = BuildExamples(augmented.trials, data.profiles, data.features,
                                        cfg.backbone.d_embed, need_enrollment, external);
    const std::string ktag = tag + " k=" + std::to_string(k);
    TrainResult result = Train(cfg.backbone, examples, dev, cfg.optimizer, seed,
                               [&](const EpochLog& e) { LogEpoch(ktag, e); });
    const auto scores = ScoreExamples(result.best_model, eval);
    EvalReport report = PerAttackReport(ScoreMap(scores.begin(), scores.end()), eval_trials,
                                        asv ? &*asv : nullptr, cfg.costs);
    report.name = tag + "_k" + std::to_string(k);
    row.eval_eer = report.pooled_eer;
    row.min_tdcf = report.min_tdcf;
    rows.push_back(row);

    Checkpoint ckpt = MakeCheckpoint(cfg.backbone, result);
    ckpt.external_enrollment = cfg.external_enrollment;
    const fs::path kdir = fs::path(out_dir) / ("k" + std::to_string(k));
    fs::create_directories(kdir);
    tx.Add((kdir / "train.txt").string(), FormatCmProtocol(augmented.trials));
    tx.Add((kdir / "train.provenance.txt").string(), augmented.provenance.Format());
    tx.Add((kdir / "checkpoint.json").string(), FormatCheckpoint(ckpt));
    tx.Add((kdir / "eval.scores.txt").string(), FormatScoreFile(scores));
    tx.Add((kdir / "eval.report.txt").string(), FormatReportKeyValue(report));
  }

  std::optional<double> baseline_eer, reference_eer;
  if (!o.baseline_report.empty()) {
    baseline_eer = ParseReportKeyValue(ReadFileToString(o.baseline_report), o.baseline_report)
                       .pooled_eer;
  }
  if (!o.reference_report.empty()) {
    reference_eer = ParseReportKeyValue(ReadFileToString(o.reference_report), o.reference_report)
                        .pooled_eer;
  } else {
    // Without an explicit reference, the system trained without extra data
    // is the reference; failing that, the best row of the sweep.
    for (const auto& r : rows) {
      if (!r.skipped && r.k == 0) reference_eer = r.eval_eer;
    }
    if (!reference_eer) {
      for (const auto& r : rows) {
        if (!r.skipped && (!reference_eer || r.eval_eer < *reference_eer)) reference_eer = r.eval_eer;
      }
    }
  }
  tx.Add((fs::path(out_dir) / "sweep.tsv").string(), FormatSweepTable(rows));
  tx.Add((fs::path(out_dir) / "sweep.svg").string(),
         RenderSweepSvg(rows, baseline_eer, reference_eer, tag));
  tx.Add((fs::path(out_dir) / "config.json").string(), ExperimentConfigToJson(cfg).dump(2) + "\n");
  tx.Commit();
  return rows;
}

void RunSynthCorpus(const SynthCorpusConfig& config, const std::string& out_dir) {
  RequireFlag(out_dir, "--out");
  config.Validate();
  WriteSyntheticCorpus(GenerateSyntheticCorpus(config), out_dir);
}

}  // namespace spkaware
