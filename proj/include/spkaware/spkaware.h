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

/* C interface of the speaker-aware anti-spoofing toolkit. Every function
 * that can fail returns an sa_status; the message of the last failure on
 * the calling thread is available from sa_last_error(). Objects are opaque
 * handles released with the matching *_free function. Strings returned by
 * the library stay valid until the owning handle is freed (or, for
 * sa_last_error, until the next failing call on the same thread). */

#ifndef SPKAWARE_SPKAWARE_H_
#define SPKAWARE_SPKAWARE_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SA_API __attribute__((visibility("default")))
#else
#define SA_API
#endif

typedef enum sa_status {
  SA_OK = 0,
  SA_ERR_INVALID_INPUT = 1,
  SA_ERR_CONTRACT_VIOLATION = 2,
  SA_ERR_PARSE = 3,
  SA_ERR_STORAGE = 4,
  SA_ERR_CONFIGURATION = 5,
  SA_ERR_CONSISTENCY = 6,
  SA_ERR_NUMERIC = 7,
  SA_ERR_NULL_ARGUMENT = 8,
  SA_ERR_INTERNAL = 9
} sa_status;

SA_API const char* sa_version(void);
SA_API const char* sa_status_name(sa_status status);
SA_API const char* sa_last_error(void);
/* Process exit code for a status: 0 success, 1 usage, 2 data or
 * consistency problem, 3 numeric failure. */
SA_API int sa_status_exit_code(sa_status status);

/* Receives progress lines and warnings of long-running commands. */
typedef void (*sa_log_fn)(const char* message, void* user_data);
SA_API void sa_set_log_callback(sa_log_fn fn, void* user_data);

/* ---- metrics ---------------------------------------------------------- */

typedef struct sa_tdcf_costs {
  double p_target;
  double p_nontarget;
  double p_spoof;
  double c_miss_asv;
  double c_fa_asv;
  double c_miss_cm;
  double c_fa_cm;
} sa_tdcf_costs;

typedef struct sa_asv_rates {
  double p_fa_asv;
  double p_miss_asv;
  double p_miss_spoof_asv;
} sa_asv_rates;

SA_API void sa_tdcf_costs_default(sa_tdcf_costs* costs);

/* Scores: higher means more bonafide. is_bonafide[i] is 1 or 0. eer is a
 * fraction in [0, 1]. threshold may be NULL. */
SA_API sa_status sa_compute_eer(const double* scores, const int* is_bonafide, size_t n,
                                double* eer, double* threshold);
/* costs may be NULL for the standard constants. */
SA_API sa_status sa_compute_min_tdcf(const double* scores, const int* is_bonafide, size_t n,
                                     const sa_asv_rates* asv, const sa_tdcf_costs* costs,
                                     double* min_tdcf);
/* Percent, truncated to one decimal. */
SA_API sa_status sa_relative_improvement(double baseline, double system, double* percent);

/* ---- strategies ------------------------------------------------------- */

SA_API size_t sa_strategy_count(void);
SA_API const char* sa_strategy_name(size_t index);

/* ---- protocols -------------------------------------------------------- */

typedef struct sa_protocol sa_protocol;

typedef struct sa_trial {
  const char* utterance_id;
  const char* claimed_speaker_id;
  const char* true_speaker_id;
  const char* attack_id;
  int is_bonafide;
  int is_external;
} sa_trial;

SA_API sa_status sa_protocol_load(const char* path, sa_protocol** out);
SA_API size_t sa_protocol_size(const sa_protocol* protocol);
SA_API sa_status sa_protocol_trial(const sa_protocol* protocol, size_t index, sa_trial* out);
SA_API void sa_protocol_free(sa_protocol* protocol);

/* ---- trained models --------------------------------------------------- */

typedef struct sa_model sa_model;

/* Loads the best-dev weights, or the final ones when use_final != 0. */
SA_API sa_status sa_model_load(const char* checkpoint_path, int use_final, sa_model** out);
SA_API const char* sa_model_strategy(const sa_model* model);
SA_API int sa_model_embed_dim(const sa_model* model);
SA_API int sa_model_input_bins(const sa_model* model);
/* frames: bins x n_frames, bin-major. enrollment may be NULL for the
 * baseline strategy. */
SA_API sa_status sa_model_score(const sa_model* model, const float* frames, int bins,
                                int n_frames, const double* enrollment, size_t enrollment_dim,
                                double* score);
SA_API void sa_model_free(sa_model* model);

/* ---- pipeline commands ------------------------------------------------ */
/* NULL or empty strings mean "not given". Call the *_init function first. */

typedef struct sa_build_protocol_args {
  const char* metadata_dir; /* default: $SPKAWARE_DATA_ROOT */
  const char* setup;        /* "main" or "ablation" */
  int has_seed;
  uint64_t seed;
  const char* out_dir;
} sa_build_protocol_args;

typedef struct sa_protocol_counts {
  size_t train;
  size_t dev;
  size_t eval;
} sa_protocol_counts;

SA_API void sa_build_protocol_args_init(sa_build_protocol_args* args);
SA_API sa_status sa_build_protocol(const sa_build_protocol_args* args, sa_protocol_counts* counts);

typedef struct sa_enroll_args {
  const char* const* protocols;
  size_t n_protocols;
  const char* const* asv_enrollment;
  size_t n_asv_enrollment;
  const char* embeddings;
  const char* spk2gender;
  int has_seed;
  uint64_t seed;
  int n_female;
  int n_male;
  int length_normalize;
  const char* out;
} sa_enroll_args;

SA_API void sa_enroll_args_init(sa_enroll_args* args);
SA_API sa_status sa_enroll(const sa_enroll_args* args, size_t* n_profiles);

typedef struct sa_train_args {
  const char* config;
  const char* strategy;
  const char* train_protocol;
  const char* dev_protocol;
  const char* enrollment;
  const char* features;
  int has_seed;
  uint64_t seed;
  int epochs;           /* < 0: from config */
  double learning_rate; /* <= 0: from config */
  const char* external_enrollment; /* "corpus-mean" or "zero" */
  const char* out;
} sa_train_args;

typedef struct sa_train_summary {
  int epochs;
  int best_epoch;
  double best_dev_eer; /* percent; NaN without a dev protocol */
  double final_train_loss;
} sa_train_summary;

SA_API void sa_train_args_init(sa_train_args* args);
SA_API sa_status sa_train(const sa_train_args* args, sa_train_summary* summary);

typedef struct sa_score_args {
  const char* checkpoint;
  const char* strategy; /* optional; must match the checkpoint */
  const char* protocol;
  const char* enrollment;
  const char* features;
  int use_final;
  const char* out;
} sa_score_args;

SA_API void sa_score_args_init(sa_score_args* args);
SA_API sa_status sa_score(const sa_score_args* args, size_t* n_scored);

typedef struct sa_evaluate_args {
  const char* scores;
  const char* protocol;
  const char* asv_rates;
  const char* baseline_report;
  const char* name;
  const char* config;
  int per_attack_asv;
  const char* out;
} sa_evaluate_args;

typedef struct sa_eval_summary {
  double pooled_eer; /* percent */
  double min_tdcf;
  int has_relative;
  double relative_eer;  /* percent */
  double relative_tdcf; /* percent */
} sa_eval_summary;

SA_API void sa_evaluate_args_init(sa_evaluate_args* args);
SA_API sa_status sa_evaluate(const sa_evaluate_args* args, sa_eval_summary* summary);

typedef struct sa_augment_sweep_args {
  const char* config;
  const char* strategy;
  const char* corpus_manifest;
  const int* k_list;
  size_t n_k;
  const char* train_protocol;
  const char* dev_protocol;
  const char* eval_protocol;
  const char* enrollment;
  const char* features;
  const char* asv_rates;
  const char* baseline_report;
  const char* reference_report;
  int has_seed;
  uint64_t seed;
  int epochs; /* < 0: from config */
  const char* out_dir;
} sa_augment_sweep_args;

SA_API void sa_augment_sweep_args_init(sa_augment_sweep_args* args);
/* n_rows counts skipped k values as well. */
SA_API sa_status sa_augment_sweep(const sa_augment_sweep_args* args, size_t* n_rows);

typedef struct sa_synth_corpus_args {
  const char* out_dir;
  uint64_t seed;
  int train_speakers;
  int dev_speakers;
  int eval_speakers;
  int train_bonafide;
  int train_spoof;
  int dev_bonafide;
  int dev_spoof;
  int eval_bonafide;
  int eval_spoof;
  int external_corpora;
  int external_speakers;
  int external_utterances;
  double spoof_displacement;
} sa_synth_corpus_args;

SA_API void sa_synth_corpus_args_init(sa_synth_corpus_args* args);
SA_API sa_status sa_synth_corpus(const sa_synth_corpus_args* args);

#ifdef __cplusplus
}
#endif

#endif /* SPKAWARE_SPKAWARE_H_ */
