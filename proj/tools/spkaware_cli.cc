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

// Command-line front end. Talks to the toolkit through the C interface only.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spkaware/spkaware.h"

namespace {

constexpr int kExitUsage = 1;

int Report(sa_status status) {
  if (status == SA_OK) return 0;
  std::fprintf(stderr, "error (%s): %s\n", sa_status_name(status), sa_last_error());
  return sa_status_exit_code(status);
}

void PrintLog(const char* message, void*) { std::fprintf(stderr, "%s\n", message); }

const char* CStr(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

std::vector<const char*> CStrs(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

std::string StrategyHelp() {
  std::string s;
  for (size_t i = 0; i < sa_strategy_count(); ++i) {
    s += (i ? ", " : "") + std::string(sa_strategy_name(i));
  }
  return s;
}

std::vector<int> ParseKList(const std::string& text) {
  std::vector<int> out;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
    if (!item.empty()) {
      size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size()) throw CLI::ValidationError("--k-list", "bad value '" + item + "'");
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speaker-aware spoofing countermeasure toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sa_version()));

  // build-protocol
  sa_build_protocol_args bp;
  sa_build_protocol_args_init(&bp);
  std::string bp_metadata, bp_setup = "main", bp_out;
  uint64_t bp_seed = 0;
  auto* build = app.add_subcommand("build-protocol", "Build the Main or Ablation protocol");
  build->add_option("--metadata-dir", bp_metadata,
                    "ASVspoof 2019 LA metadata root (default: $SPKAWARE_DATA_ROOT)");
  build->add_option("--setup", bp_setup, "main or ablation")
      ->check(CLI::IsMember({"main", "ablation"}));
  auto* bp_seed_opt = build->add_option("--seed", bp_seed, "Seed for the ablation swaps");
  build->add_option("--out", bp_out, "Output directory")->required();

  // enroll
  std::vector<std::string> en_protocols, en_lists;
  std::string en_embeddings, en_spk2gender, en_out;
  uint64_t en_seed = 0;
  int en_female = 11, en_male = 19;
  bool en_norm = false;
  auto* enroll = app.add_subcommand("enroll", "Average speaker embeddings into enrollment profiles");
  enroll->add_option("--protocol", en_protocols, "CM protocol(s) to sample enrollment from");
  enroll->add_option("--asv-enrollment", en_lists, "ASV enrollment list(s) used as given");
  enroll->add_option("--embeddings", en_embeddings, "Per-utterance embedding table")->required();
  enroll->add_option("--spk2gender", en_spk2gender, "Speaker sex map (needed with --protocol)");
  auto* en_seed_opt = enroll->add_option("--seed", en_seed, "Sampling seed");
  enroll->add_option("--n-female", en_female, "Utterances per female speaker")->check(CLI::PositiveNumber);
  enroll->add_option("--n-male", en_male, "Utterances per male speaker")->check(CLI::PositiveNumber);
  enroll->add_flag("--length-normalize", en_norm, "Length-normalize the averaged embedding");
  enroll->add_option("--out", en_out, "Enrollment store to write")->required();

  // train
  std::string tr_config, tr_strategy, tr_train, tr_dev, tr_enroll, tr_features, tr_external, tr_out;
  uint64_t tr_seed = 0;
  int tr_epochs = -1;
  double tr_lr = 0.0;
  auto* train = app.add_subcommand("train", "Train a countermeasure for one strategy");
  train->add_option("--config", tr_config, "Experiment config (JSON)");
  train->add_option("--strategy", tr_strategy, StrategyHelp());
  train->add_option("--train-protocol", tr_train, "Training CM protocol");
  train->add_option("--dev-protocol", tr_dev, "Development CM protocol (model selection)");
  train->add_option("--enrollment", tr_enroll, "Enrollment store");
  train->add_option("--features", tr_features, "Feature archive");
  auto* tr_seed_opt = train->add_option("--seed", tr_seed, "Seed");
  train->add_option("--epochs", tr_epochs, "Epochs")->check(CLI::NonNegativeNumber);
  train->add_option("--lr", tr_lr, "Learning rate")->check(CLI::PositiveNumber);
  train->add_option("--external-enrollment", tr_external,
                    "Enrollment for pooled external bonafide: corpus-mean or zero");
  train->add_option("--checkpoint,--out", tr_out, "Checkpoint to write")->required();

  // score
  std::string sc_ckpt, sc_strategy, sc_protocol, sc_enroll, sc_features, sc_out;
  bool sc_final = false;
  auto* score = app.add_subcommand("score", "Score a protocol with a trained checkpoint");
  score->add_option("--checkpoint", sc_ckpt, "Checkpoint")->required();
  score->add_option("--strategy", sc_strategy, "Expected strategy of the checkpoint");
  score->add_option("--protocol", sc_protocol, "CM protocol to score")->required();
  score->add_option("--enrollment", sc_enroll, "Enrollment store");
  score->add_option("--features", sc_features, "Feature archive")->required();
  score->add_flag("--final", sc_final, "Use final weights instead of the best-dev ones");
  score->add_option("--scores,--out", sc_out, "Score file to write")->required();

  // evaluate
  std::string ev_scores, ev_protocol, ev_asv, ev_baseline, ev_name, ev_config, ev_out;
  bool ev_per_attack = false;
  auto* evaluate = app.add_subcommand("evaluate", "Compute EER / min t-DCF reports");
  evaluate->add_option("--scores", ev_scores, "Score file")->required();
  evaluate->add_option("--protocol", ev_protocol, "CM protocol")->required();
  evaluate->add_option("--asv-rates", ev_asv, "ASV operating point (key=value)");
  evaluate->add_option("--baseline-report", ev_baseline, "Report to compute relative improvements against");
  evaluate->add_option("--name", ev_name, "System name in the report");
  evaluate->add_option("--config", ev_config, "Experiment config (metric constants)");
  evaluate->add_flag("--per-attack-asv", ev_per_attack, "Use per-attack ASV spoof miss rates");
  evaluate->add_option("--out", ev_out, "Output prefix")->required();

  // augment-sweep
  std::string as_config, as_strategy, as_manifest, as_klist, as_train, as_dev, as_eval, as_enroll,
      as_features, as_asv, as_baseline, as_reference, as_out;
  uint64_t as_seed = 0;
  int as_epochs = -1;
  auto* sweep = app.add_subcommand("augment-sweep", "Train with k extra external bonafide utterances");
  sweep->add_option("--config", as_config, "Experiment config (JSON)");
  sweep->add_option("--strategy", as_strategy, StrategyHelp());
  sweep->add_option("--corpus-manifest", as_manifest, "External bonafide manifest");
  sweep->add_option("--k-list", as_klist, "Comma-separated k values");
  sweep->add_option("--train-protocol", as_train, "Training CM protocol");
  sweep->add_option("--dev-protocol", as_dev, "Development CM protocol");
  sweep->add_option("--eval-protocol", as_eval, "Evaluation CM protocol (Main)");
  sweep->add_option("--enrollment", as_enroll, "Enrollment store");
  sweep->add_option("--features", as_features, "Feature archive");
  sweep->add_option("--asv-rates", as_asv, "ASV operating point for t-DCF");
  sweep->add_option("--baseline-report", as_baseline, "Baseline report (reference line)");
  sweep->add_option("--reference-report", as_reference, "Best-system report (reference line)");
  auto* as_seed_opt = sweep->add_option("--seed", as_seed, "Seed");
  sweep->add_option("--epochs", as_epochs, "Epochs")->check(CLI::NonNegativeNumber);
  sweep->add_option("--out", as_out, "Output directory");

  // synth-corpus
  sa_synth_corpus_args sy;
  sa_synth_corpus_args_init(&sy);
  std::string sy_out;
  auto* synth = app.add_subcommand("synth-corpus", "Write a small synthetic corpus");
  synth->add_option("--out", sy_out, "Output directory")->required();
  synth->add_option("--seed", sy.seed, "Seed");
  synth->add_option("--train-speakers", sy.train_speakers, "Training speakers");
  synth->add_option("--dev-speakers", sy.dev_speakers, "Development speakers");
  synth->add_option("--eval-speakers", sy.eval_speakers, "Evaluation speakers");
  synth->add_option("--train-bonafide", sy.train_bonafide, "Bonafide utterances per training speaker");
  synth->add_option("--train-spoof", sy.train_spoof, "Spoofed utterances per training speaker");
  synth->add_option("--eval-bonafide", sy.eval_bonafide, "Bonafide utterances per evaluation speaker");
  synth->add_option("--eval-spoof", sy.eval_spoof, "Spoofed utterances per evaluation speaker");
  synth->add_option("--external-speakers", sy.external_speakers, "Speakers per external corpus");
  synth->add_option("--spoof-displacement", sy.spoof_displacement, "Distance of spoofs from the speaker");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  sa_set_log_callback(PrintLog, nullptr);

  if (*build) {
    bp.metadata_dir = CStr(bp_metadata);
    bp.setup = bp_setup.c_str();
    bp.has_seed = *bp_seed_opt ? 1 : 0;
    bp.seed = bp_seed;
    bp.out_dir = bp_out.c_str();
    sa_protocol_counts counts;
    const sa_status st = sa_build_protocol(&bp, &counts);
    if (st == SA_OK) {
      std::printf("train %zu\ndev %zu\neval %zu\n", counts.train, counts.dev, counts.eval);
    }
    return Report(st);
  }
  if (*enroll) {
    auto protocols = CStrs(en_protocols);
    auto lists = CStrs(en_lists);
    sa_enroll_args a;
    sa_enroll_args_init(&a);
    a.protocols = protocols.data();
    a.n_protocols = protocols.size();
    a.asv_enrollment = lists.data();
    a.n_asv_enrollment = lists.size();
    a.embeddings = en_embeddings.c_str();
    a.spk2gender = CStr(en_spk2gender);
    a.has_seed = *en_seed_opt ? 1 : 0;
    a.seed = en_seed;
    a.n_female = en_female;
    a.n_male = en_male;
    a.length_normalize = en_norm ? 1 : 0;
    a.out = en_out.c_str();
    size_t n = 0;
    const sa_status st = sa_enroll(&a, &n);
    if (st == SA_OK) std::printf("profiles %zu\n", n);
    return Report(st);
  }
  if (*train) {
    sa_train_args a;
    sa_train_args_init(&a);
    a.config = CStr(tr_config);
    a.strategy = CStr(tr_strategy);
    a.train_protocol = CStr(tr_train);
    a.dev_protocol = CStr(tr_dev);
    a.enrollment = CStr(tr_enroll);
    a.features = CStr(tr_features);
    a.has_seed = *tr_seed_opt ? 1 : 0;
    a.seed = tr_seed;
    a.epochs = tr_epochs;
    a.learning_rate = tr_lr;
    a.external_enrollment = CStr(tr_external);
    a.out = tr_out.c_str();
    sa_train_summary s;
    const sa_status st = sa_train(&a, &s);
    if (st == SA_OK) {
      std::printf("epochs %d\nbest_epoch %d\nbest_dev_eer %.4f\n", s.epochs, s.best_epoch,
                  s.best_dev_eer);
    }
    return Report(st);
  }
  if (*score) {
    sa_score_args a;
    sa_score_args_init(&a);
    a.checkpoint = sc_ckpt.c_str();
    a.strategy = CStr(sc_strategy);
    a.protocol = sc_protocol.c_str();
    a.enrollment = CStr(sc_enroll);
    a.features = sc_features.c_str();
    a.use_final = sc_final ? 1 : 0;
    a.out = sc_out.c_str();
    size_t n = 0;
    const sa_status st = sa_score(&a, &n);
    if (st == SA_OK) std::printf("scored %zu\n", n);
    return Report(st);
  }
  if (*evaluate) {
    sa_evaluate_args a;
    sa_evaluate_args_init(&a);
    a.scores = ev_scores.c_str();
    a.protocol = ev_protocol.c_str();
    a.asv_rates = CStr(ev_asv);
    a.baseline_report = CStr(ev_baseline);
    a.name = CStr(ev_name);
    a.config = CStr(ev_config);
    a.per_attack_asv = ev_per_attack ? 1 : 0;
    a.out = ev_out.c_str();
    sa_eval_summary s;
    const sa_status st = sa_evaluate(&a, &s);
    if (st == SA_OK) {
      std::printf("pooled_eer %.2f\nmin_tdcf %.3f\n", s.pooled_eer, s.min_tdcf);
      if (s.has_relative) {
        std::printf("relative_eer %.1f\nrelative_tdcf %.1f\n", s.relative_eer, s.relative_tdcf);
      }
    }
    return Report(st);
  }
  if (*sweep) {
    std::vector<int> ks;
    try {
      ks = ParseKList(as_klist);
    } catch (const CLI::ParseError& e) {
      std::fprintf(stderr, "%s\n", e.what());
      return kExitUsage;
    }
    sa_augment_sweep_args a;
    sa_augment_sweep_args_init(&a);
    a.config = CStr(as_config);
    a.strategy = CStr(as_strategy);
    a.corpus_manifest = CStr(as_manifest);
    a.k_list = ks.data();
    a.n_k = ks.size();
    a.train_protocol = CStr(as_train);
    a.dev_protocol = CStr(as_dev);
    a.eval_protocol = CStr(as_eval);
    a.enrollment = CStr(as_enroll);
    a.features = CStr(as_features);
    a.asv_rates = CStr(as_asv);
    a.baseline_report = CStr(as_baseline);
    a.reference_report = CStr(as_reference);
    a.has_seed = *as_seed_opt ? 1 : 0;
    a.seed = as_seed;
    a.epochs = as_epochs;
    a.out_dir = CStr(as_out);
    size_t rows = 0;
    const sa_status st = sa_augment_sweep(&a, &rows);
    if (st == SA_OK) std::printf("rows %zu\n", rows);
    return Report(st);
  }
  if (*synth) {
    sy.out_dir = sy_out.c_str();
    return Report(sa_synth_corpus(&sy));
  }
  return kExitUsage;
}
