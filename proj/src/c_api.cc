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

#include "spkaware/spkaware.h"

#include <cmath>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "spkaware/checkpoint.h"
#include "spkaware/error.h"
#include "spkaware/harness.h"
#include "spkaware/metrics.h"
#include "spkaware/protocols.h"

struct sa_protocol {
  std::vector<spkaware::Trial> trials;
};

struct sa_model {
  spkaware::Checkpoint checkpoint;
  std::unique_ptr<spkaware::ReferenceBackbone> model;
  std::string strategy;
};

namespace {

using spkaware::ErrorKind;

thread_local std::string g_last_error;

sa_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return SA_ERR_INVALID_INPUT;
    case ErrorKind::kContractViolation: return SA_ERR_CONTRACT_VIOLATION;
    case ErrorKind::kParse: return SA_ERR_PARSE;
    case ErrorKind::kStorage: return SA_ERR_STORAGE;
    case ErrorKind::kConfiguration: return SA_ERR_CONFIGURATION;
    case ErrorKind::kConsistency: return SA_ERR_CONSISTENCY;
    case ErrorKind::kNumeric: return SA_ERR_NUMERIC;
  }
  return SA_ERR_INTERNAL;
}

sa_status Fail(sa_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
sa_status Guard(F&& body) {
  try {
    body();
    return SA_OK;
  } catch (const spkaware::Error& e) {
    return Fail(StatusOf(e.kind()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return Fail(SA_ERR_STORAGE, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SA_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(SA_ERR_INTERNAL, "unknown error");
  }
}

std::string Str(const char* s) { return s ? std::string(s) : std::string(); }

std::optional<spkaware::Strategy> OptStrategy(const char* s) {
  if (!s || !*s) return std::nullopt;
  return spkaware::ParseStrategy(s);
}

std::vector<std::string> StrList(const char* const* items, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    if (items && items[i]) out.emplace_back(items[i]);
  }
  return out;
}

std::vector<spkaware::ScoredTrial> ToTrials(const double* scores, const int* is_bonafide,
                                            size_t n) {
  std::vector<spkaware::ScoredTrial> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i] = {scores[i], is_bonafide[i] ? spkaware::Key::kBonafide : spkaware::Key::kSpoof};
  }
  return out;
}

#define SA_REQUIRE(ptr)                                                        \
  do {                                                                         \
    if (!(ptr)) return Fail(SA_ERR_NULL_ARGUMENT, "null argument: " #ptr);     \
  } while (0)

}  // namespace

extern "C" {

const char* sa_version(void) { return "0.1.0"; }

const char* sa_status_name(sa_status status) {
  switch (status) {
    case SA_OK: return "ok";
    case SA_ERR_INVALID_INPUT: return "invalid-input";
    case SA_ERR_CONTRACT_VIOLATION: return "contract-violation";
    case SA_ERR_PARSE: return "parse-error";
    case SA_ERR_STORAGE: return "storage-error";
    case SA_ERR_CONFIGURATION: return "configuration-error";
    case SA_ERR_CONSISTENCY: return "consistency-error";
    case SA_ERR_NUMERIC: return "numeric-error";
    case SA_ERR_NULL_ARGUMENT: return "null-argument";
    case SA_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* sa_last_error(void) { return g_last_error.c_str(); }

int sa_status_exit_code(sa_status status) {
  switch (status) {
    case SA_OK: return 0;
    case SA_ERR_NULL_ARGUMENT: return 1;
    case SA_ERR_NUMERIC: return 3;
    default: return 2;
  }
}

void sa_set_log_callback(sa_log_fn fn, void* user_data) {
  if (!fn) {
    spkaware::SetLogSink(nullptr);
    return;
  }
  spkaware::SetLogSink([fn, user_data](const std::string& m) { fn(m.c_str(), user_data); });
}

void sa_tdcf_costs_default(sa_tdcf_costs* costs) {
  if (!costs) return;
  const spkaware::TdcfCosts d;
  *costs = {d.p_target, d.p_nontarget, d.p_spoof, d.c_miss_asv,
            d.c_fa_asv, d.c_miss_cm,   d.c_fa_cm};
}

sa_status sa_compute_eer(const double* scores, const int* is_bonafide, size_t n, double* eer,
                         double* threshold) {
  SA_REQUIRE(eer);
  if (n > 0) {
    SA_REQUIRE(scores);
    SA_REQUIRE(is_bonafide);
  }
  return Guard([&] {
    const auto r = spkaware::ComputeEer(ToTrials(scores, is_bonafide, n));
    *eer = r.eer;
    if (threshold) *threshold = r.threshold;
  });
}

sa_status sa_compute_min_tdcf(const double* scores, const int* is_bonafide, size_t n,
                              const sa_asv_rates* asv, const sa_tdcf_costs* costs,
                              double* min_tdcf) {
  SA_REQUIRE(asv);
  SA_REQUIRE(min_tdcf);
  if (n > 0) {
    SA_REQUIRE(scores);
    SA_REQUIRE(is_bonafide);
  }
  return Guard([&] {
    spkaware::AsvOperatingPoint op;
    op.p_fa_asv = asv->p_fa_asv;
    op.p_miss_asv = asv->p_miss_asv;
    op.p_miss_spoof_asv = asv->p_miss_spoof_asv;
    spkaware::TdcfCosts c;
    if (costs) {
      c = {costs->p_target, costs->p_nontarget, costs->p_spoof, costs->c_miss_asv,
           costs->c_fa_asv, costs->c_miss_cm,   costs->c_fa_cm};
    }
    *min_tdcf = spkaware::ComputeMinTdcf(ToTrials(scores, is_bonafide, n), op, c);
  });
}

sa_status sa_relative_improvement(double baseline, double system, double* percent) {
  SA_REQUIRE(percent);
  return Guard([&] { *percent = spkaware::RelativeImprovement(baseline, system); });
}

size_t sa_strategy_count(void) { return spkaware::AllStrategies().size(); }

const char* sa_strategy_name(size_t index) {
  const auto& all = spkaware::AllStrategies();
  if (index >= all.size()) return nullptr;
  return spkaware::StrategyName(all[index]).data();
}

sa_status sa_protocol_load(const char* path, sa_protocol** out) {
  SA_REQUIRE(path);
  SA_REQUIRE(out);
  *out = nullptr;
  return Guard([&] {
    auto p = std::make_unique<sa_protocol>();
    p->trials = spkaware::ParseCmProtocol(std::string(path), spkaware::Partition::kEval);
    *out = p.release();
  });
}

size_t sa_protocol_size(const sa_protocol* protocol) {
  return protocol ? protocol->trials.size() : 0;
}

sa_status sa_protocol_trial(const sa_protocol* protocol, size_t index, sa_trial* out) {
  SA_REQUIRE(protocol);
  SA_REQUIRE(out);
  if (index >= protocol->trials.size()) {
    return Fail(SA_ERR_INVALID_INPUT, "trial index " + std::to_string(index) + " out of range");
  }
  const spkaware::Trial& t = protocol->trials[index];
  out->utterance_id = t.utterance_id.c_str();
  out->claimed_speaker_id = t.claimed_speaker_id.c_str();
  out->true_speaker_id = t.true_speaker_id.c_str();
  out->attack_id = t.attack_id.c_str();
  out->is_bonafide = t.key == spkaware::Key::kBonafide;
  out->is_external = t.external();
  return SA_OK;
}

void sa_protocol_free(sa_protocol* protocol) { delete protocol; }

sa_status sa_model_load(const char* checkpoint_path, int use_final, sa_model** out) {
  SA_REQUIRE(checkpoint_path);
  SA_REQUIRE(out);
  *out = nullptr;
  return Guard([&] {
    auto m = std::make_unique<sa_model>();
    m->checkpoint = spkaware::LoadCheckpoint(checkpoint_path);
    m->model = std::make_unique<spkaware::ReferenceBackbone>(
        use_final ? m->checkpoint.FinalModel() : m->checkpoint.BestModel());
    m->strategy = std::string(spkaware::StrategyName(m->checkpoint.config.strategy));
    *out = m.release();
  });
}

const char* sa_model_strategy(const sa_model* model) {
  return model ? model->strategy.c_str() : nullptr;
}

int sa_model_embed_dim(const sa_model* model) {
  return model ? model->checkpoint.config.d_embed : 0;
}

int sa_model_input_bins(const sa_model* model) {
  return model ? model->checkpoint.config.input_bins() : 0;
}

sa_status sa_model_score(const sa_model* model, const float* frames, int bins, int n_frames,
                         const double* enrollment, size_t enrollment_dim, double* score) {
  SA_REQUIRE(model);
  SA_REQUIRE(score);
  if (bins > 0 && n_frames > 0) SA_REQUIRE(frames);
  if (enrollment_dim > 0) SA_REQUIRE(enrollment);
  return Guard([&] {
    if (bins < 0 || n_frames < 0) {
      spkaware::Throw(ErrorKind::kInvalidInput, "negative frame dimensions");
    }
    spkaware::Frames f;
    f.bins = bins;
    f.frames = n_frames;
    f.data.assign(frames, frames + static_cast<size_t>(bins) * n_frames);
    const std::vector<double> e(enrollment, enrollment + enrollment_dim);
    const double s = spkaware::Forward(*model->model, f, e);
    if (!std::isfinite(s)) spkaware::Throw(ErrorKind::kNumeric, "non-finite score");
    *score = s;
  });
}

void sa_model_free(sa_model* model) { delete model; }

void sa_build_protocol_args_init(sa_build_protocol_args* args) {
  if (args) *args = {nullptr, "main", 0, 0, nullptr};
}

sa_status sa_build_protocol(const sa_build_protocol_args* args, sa_protocol_counts* counts) {
  SA_REQUIRE(args);
  return Guard([&] {
    spkaware::BuildProtocolOptions o;
    o.metadata_dir = Str(args->metadata_dir);
    o.setup = args->setup ? args->setup : "main";
    if (args->has_seed) o.seed = args->seed;
    o.out_dir = Str(args->out_dir);
    const auto r = spkaware::RunBuildProtocol(o);
    if (counts) {
      counts->train = r.protocol.Count(spkaware::Partition::kTrain);
      counts->dev = r.protocol.Count(spkaware::Partition::kDev);
      counts->eval = r.protocol.Count(spkaware::Partition::kEval);
    }
  });
}

void sa_enroll_args_init(sa_enroll_args* args) {
  if (!args) return;
  *args = sa_enroll_args{};
  args->n_female = 11;
  args->n_male = 19;
}

sa_status sa_enroll(const sa_enroll_args* args, size_t* n_profiles) {
  SA_REQUIRE(args);
  return Guard([&] {
    spkaware::EnrollOptions o;
    o.protocols = StrList(args->protocols, args->n_protocols);
    o.asv_enrollment = StrList(args->asv_enrollment, args->n_asv_enrollment);
    o.embeddings = Str(args->embeddings);
    o.spk2gender = Str(args->spk2gender);
    if (args->has_seed) o.seed = args->seed;
    o.n_female = args->n_female;
    o.n_male = args->n_male;
    o.length_normalize = args->length_normalize != 0;
    o.out = Str(args->out);
    const auto profiles = spkaware::RunEnroll(o);
    if (n_profiles) *n_profiles = profiles.size();
  });
}

void sa_train_args_init(sa_train_args* args) {
  if (!args) return;
  *args = sa_train_args{};
  args->epochs = -1;
  args->learning_rate = 0.0;
}

sa_status sa_train(const sa_train_args* args, sa_train_summary* summary) {
  SA_REQUIRE(args);
  return Guard([&] {
    spkaware::TrainOptions o;
    o.config = Str(args->config);
    o.strategy = OptStrategy(args->strategy);
    o.train_protocol = Str(args->train_protocol);
    o.dev_protocol = Str(args->dev_protocol);
    o.enrollment = Str(args->enrollment);
    o.features = Str(args->features);
    if (args->has_seed) o.seed = args->seed;
    if (args->epochs >= 0) o.epochs = args->epochs;
    if (args->learning_rate > 0.0) o.learning_rate = args->learning_rate;
    o.external_enrollment = Str(args->external_enrollment);
    o.out = Str(args->out);
    const auto s = spkaware::RunTrain(o);
    if (summary) {
      summary->epochs = static_cast<int>(s.log.size());
      summary->best_epoch = s.best_epoch;
      summary->best_dev_eer = s.best_dev_eer;
      summary->final_train_loss = s.log.empty() ? NAN : s.log.back().train_loss;
    }
  });
}

void sa_score_args_init(sa_score_args* args) {
  if (args) *args = sa_score_args{};
}

sa_status sa_score(const sa_score_args* args, size_t* n_scored) {
  SA_REQUIRE(args);
  return Guard([&] {
    spkaware::ScoreOptions o;
    o.checkpoint = Str(args->checkpoint);
    o.strategy = OptStrategy(args->strategy);
    o.protocol = Str(args->protocol);
    o.enrollment = Str(args->enrollment);
    o.features = Str(args->features);
    o.use_final = args->use_final != 0;
    o.out = Str(args->out);
    const auto scores = spkaware::RunScore(o);
    if (n_scored) *n_scored = scores.size();
  });
}

void sa_evaluate_args_init(sa_evaluate_args* args) {
  if (args) *args = sa_evaluate_args{};
}

sa_status sa_evaluate(const sa_evaluate_args* args, sa_eval_summary* summary) {
  SA_REQUIRE(args);
  return Guard([&] {
    spkaware::EvaluateOptions o;
    o.scores = Str(args->scores);
    o.protocol = Str(args->protocol);
    o.asv_rates = Str(args->asv_rates);
    o.baseline_report = Str(args->baseline_report);
    o.name = Str(args->name);
    o.config = Str(args->config);
    o.per_attack_asv = args->per_attack_asv != 0;
    o.out = Str(args->out);
    const auto r = spkaware::RunEvaluate(o);
    if (summary) {
      summary->pooled_eer = r.pooled_eer;
      summary->min_tdcf = r.min_tdcf.value_or(NAN);
      auto eer = r.relative_improvements.find("pooled_eer");
      auto tdcf = r.relative_improvements.find("min_tdcf");
      summary->has_relative = eer != r.relative_improvements.end();
      summary->relative_eer = summary->has_relative ? eer->second : NAN;
      summary->relative_tdcf = tdcf != r.relative_improvements.end() ? tdcf->second : NAN;
    }
  });
}

void sa_augment_sweep_args_init(sa_augment_sweep_args* args) {
  if (!args) return;
  *args = sa_augment_sweep_args{};
  args->epochs = -1;
}

sa_status sa_augment_sweep(const sa_augment_sweep_args* args, size_t* n_rows) {
  SA_REQUIRE(args);
  if (args->n_k > 0) SA_REQUIRE(args->k_list);
  return Guard([&] {
    spkaware::AugmentSweepOptions o;
    o.config = Str(args->config);
    o.strategy = OptStrategy(args->strategy);
    o.corpus_manifest = Str(args->corpus_manifest);
    o.k_list.assign(args->k_list, args->k_list + args->n_k);
    o.train_protocol = Str(args->train_protocol);
    o.dev_protocol = Str(args->dev_protocol);
    o.eval_protocol = Str(args->eval_protocol);
    o.enrollment = Str(args->enrollment);
    o.features = Str(args->features);
    o.asv_rates = Str(args->asv_rates);
    o.baseline_report = Str(args->baseline_report);
    o.reference_report = Str(args->reference_report);
    if (args->has_seed) o.seed = args->seed;
    if (args->epochs >= 0) o.epochs = args->epochs;
    o.out_dir = Str(args->out_dir);
    const auto rows = spkaware::RunAugmentSweep(o);
    if (n_rows) *n_rows = rows.size();
  });
}

void sa_synth_corpus_args_init(sa_synth_corpus_args* args) {
  if (!args) return;
  const spkaware::SynthCorpusConfig d;
  *args = sa_synth_corpus_args{};
  args->seed = d.seed;
  args->train_speakers = d.train_speakers;
  args->dev_speakers = d.dev_speakers;
  args->eval_speakers = d.eval_speakers;
  args->train_bonafide = d.train_bonafide;
  args->train_spoof = d.train_spoof;
  args->dev_bonafide = d.dev_bonafide;
  args->dev_spoof = d.dev_spoof;
  args->eval_bonafide = d.eval_bonafide;
  args->eval_spoof = d.eval_spoof;
  args->external_corpora = d.external_corpora;
  args->external_speakers = d.external_speakers;
  args->external_utterances = d.external_utterances;
  args->spoof_displacement = d.spoof_displacement;
}

sa_status sa_synth_corpus(const sa_synth_corpus_args* args) {
  SA_REQUIRE(args);
  return Guard([&] {
    spkaware::SynthCorpusConfig c;
    c.seed = args->seed;
    c.train_speakers = args->train_speakers;
    c.dev_speakers = args->dev_speakers;
    c.eval_speakers = args->eval_speakers;
    // Keep the female share of the default corpus.
    c.train_female = args->train_speakers * 3 / 5;
    c.dev_female = args->dev_speakers * 3 / 5;
    c.eval_female = args->eval_speakers * 3 / 5;
    c.train_bonafide = args->train_bonafide;
    c.train_spoof = args->train_spoof;
    c.dev_bonafide = args->dev_bonafide;
    c.dev_spoof = args->dev_spoof;
    c.eval_bonafide = args->eval_bonafide;
    c.eval_spoof = args->eval_spoof;
    c.external_corpora = args->external_corpora;
    c.external_speakers = args->external_speakers;
    c.external_utterances = args->external_utterances;
    c.spoof_displacement = args->spoof_displacement;
    spkaware::RunSynthCorpus(c, Str(args->out_dir));
  });
}

}  // extern "C"
