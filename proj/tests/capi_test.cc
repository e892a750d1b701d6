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

// Exercises the C interface and the command-line front end built on it.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "spkaware/spkaware.h"
#include "test_util.h"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult Cli(const std::string& args) {
  static TempDir scratch;
  const std::string out = scratch / "stdout";
  const std::string err = scratch / "stderr";
  const std::string cmd = std::string(SPKAWARE_CLI) + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadText(out);
  r.err = ReadText(err);
  return r;
}

bool Contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

size_t CountLines(const std::string& text) {
  size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

// Two classes with scores at three levels; see the fixture comment below.
void WriteTiedScores(const std::string& dir, const std::string& name, int spoof_high,
                     int bonafide_low) {
  const int n = 10000;
  std::string protocol, scores;
  for (int i = 0; i < n; ++i) {
    const std::string utt = "LA_E_B" + std::to_string(i);
    protocol += "LA_0201 " + utt + " - - bonafide\n";
    scores += utt + (i < bonafide_low ? " 1\n" : " 3\n");
  }
  for (int i = 0; i < n; ++i) {
    const std::string utt = "LA_E_S" + std::to_string(i);
    protocol += "LA_0201 " + utt + " - A07 spoof\n";
    scores += utt + (i < spoof_high ? " 1\n" : " 0\n");
  }
  WriteText(dir + "/protocol.txt", protocol);
  WriteText(dir + "/" + name + ".scores.txt", scores);
}

// A small synthetic corpus with protocols and enrollment, built once.
struct Pipeline {
  TempDir dir;
  std::string corpus, proto, enroll, asv;

  Pipeline() {
    corpus = dir / "corpus";
    proto = dir / "proto";
    enroll = dir / "enroll.tsv";
    asv = dir / "asv.txt";
    Require(Cli("synth-corpus --out " + corpus +
                " --seed 4 --train-speakers 4 --dev-speakers 3 --eval-speakers 3"
                " --train-bonafide 19 --train-spoof 12 --eval-bonafide 8 --eval-spoof 8"
                " --external-speakers 2"));
    Require(Cli("build-protocol --metadata-dir " + corpus + " --setup main --out " + proto));
    Require(Cli("build-protocol --metadata-dir " + corpus + " --setup ablation --seed 9 --out " +
                proto));
    Require(Cli(EnrollArgs(enroll)));
    WriteText(asv, "p_fa_asv=0.01\np_miss_asv=0.02\np_miss_spoof_asv=0.5\n");
  }

  static void Require(const CliResult& r) {
    if (r.exit_code != 0) {
      MESSAGE(r.err);
      FAIL("pipeline setup step failed");
    }
  }

  std::string AsvList(const std::string& part, const std::string& sex) const {
    return corpus + "/ASVspoof2019_LA_asv_protocols/ASVspoof2019.LA.asv." + part + "." + sex +
           ".trn.txt";
  }

  std::string EnrollArgs(const std::string& out, const std::string& extra = "") const {
    std::string args = "enroll --protocol " + proto + "/main.train.txt --spk2gender " + corpus +
                       "/spk2gender --embeddings " + corpus + "/embeddings.txt --seed 2";
    for (const char* part : {"dev", "eval"}) {
      for (const char* sex : {"female", "male"}) args += " --asv-enrollment " + AsvList(part, sex);
    }
    return args + " " + extra + " --out " + out;
  }

  std::string TrainArgs(const std::string& strategy, const std::string& out,
                        const std::string& extra = "") const {
    return "train --strategy " + strategy + " --train-protocol " + proto +
           "/main.train.txt --dev-protocol " + proto + "/main.dev.txt --enrollment " + enroll +
           " --features " + corpus + "/features.bin --seed 3 --epochs 2 " + extra +
           " --checkpoint " + out;
  }

  std::string ScoreArgs(const std::string& ckpt, const std::string& protocol,
                        const std::string& out, const std::string& extra = "") const {
    return "score --checkpoint " + ckpt + " --protocol " + protocol + " --enrollment " + enroll +
           " --features " + corpus + "/features.bin " + extra + " --scores " + out;
  }

  std::string SweepArgs(const std::string& k_list, const std::string& out,
                        const std::string& extra = "") const {
    return "augment-sweep --strategy baseline --corpus-manifest " + corpus +
           "/external_manifest.tsv --k-list " + k_list + " --train-protocol " + proto +
           "/main.train.txt --dev-protocol " + proto + "/main.dev.txt --eval-protocol " + proto +
           "/main.eval.txt --enrollment " + enroll + " --features " + corpus +
           "/features.bin --asv-rates " + asv + " --seed 3 --epochs 2 " + extra + " --out " + out;
  }
};

Pipeline& SharedPipeline() {
  static Pipeline p;
  return p;
}

}  // namespace

TEST_CASE("status codes and names") {
  CHECK(std::string(sa_version()) == "0.1.0");
  CHECK(std::string(sa_status_name(SA_OK)) == "ok");
  CHECK(std::string(sa_status_name(SA_ERR_CONFIGURATION)) == "configuration-error");
  CHECK(sa_status_exit_code(SA_OK) == 0);
  CHECK(sa_status_exit_code(SA_ERR_NULL_ARGUMENT) == 1);
  CHECK(sa_status_exit_code(SA_ERR_CONSISTENCY) == 2);
  CHECK(sa_status_exit_code(SA_ERR_STORAGE) == 2);
  CHECK(sa_status_exit_code(SA_ERR_NUMERIC) == 3);
  REQUIRE(sa_strategy_count() == 6u);
  CHECK(std::string(sa_strategy_name(0)) == "baseline");
  CHECK(std::string(sa_strategy_name(3)) == "enc-spec");
  CHECK(sa_strategy_name(6) == nullptr);
}

TEST_CASE("metrics through the C interface") {
  const double scores[] = {0.1, 0.4, 0.35, 0.8};
  const int bona[] = {0, 0, 1, 1};
  double eer = -1, thr = 0;
  REQUIRE(sa_compute_eer(scores, bona, 4, &eer, &thr) == SA_OK);
  CHECK(eer == doctest::Approx(0.5));
  CHECK(sa_compute_eer(scores, bona, 4, &eer, nullptr) == SA_OK);

  const int separable[] = {0, 0, 1, 1};
  const double sep_scores[] = {0.0, 0.1, 0.9, 1.0};
  REQUIRE(sa_compute_eer(sep_scores, separable, 4, &eer, nullptr) == SA_OK);
  CHECK(eer == 0.0);

  sa_asv_rates asv{0.0, 0.0, 0.5};
  double tdcf = -1;
  REQUIRE(sa_compute_min_tdcf(sep_scores, separable, 4, &asv, nullptr, &tdcf) == SA_OK);
  CHECK(tdcf == 0.0);
  sa_tdcf_costs costs;
  sa_tdcf_costs_default(&costs);
  CHECK(costs.p_target == doctest::Approx(0.9405));
  CHECK(costs.c_fa_cm == 10.0);

  CHECK(sa_compute_eer(nullptr, bona, 4, &eer, nullptr) == SA_ERR_NULL_ARGUMENT);
  CHECK(std::string(sa_last_error()).size() > 0);
  const int one_class[] = {1, 1, 1, 1};
  CHECK(sa_compute_eer(scores, one_class, 4, &eer, nullptr) == SA_ERR_INVALID_INPUT);
  const double with_nan[] = {0.1, NAN, 0.3, 0.4};
  CHECK(sa_compute_eer(with_nan, bona, 4, &eer, nullptr) == SA_ERR_NUMERIC);
  const sa_asv_rates bad{0.0, 0.0, 1.0};
  CHECK(sa_compute_min_tdcf(sep_scores, separable, 4, &bad, nullptr, &tdcf) ==
        SA_ERR_CONFIGURATION);

  double pct = 0;
  REQUIRE(sa_relative_improvement(1.51, 1.13, &pct) == SA_OK);
  CHECK(pct == doctest::Approx(25.1));
  REQUIRE(sa_relative_improvement(0.043, 0.038, &pct) == SA_OK);
  CHECK(pct == doctest::Approx(11.6));
  CHECK(sa_relative_improvement(0.0, 1.0, &pct) != SA_OK);
}

// Scores sit at three levels: spoof-low 0, spoof-high and bonafide-low tied
// at 1, bonafide-high 3. With 10000 trials per class, k spoof-high and m
// bonafide-low trials give EER = 100 * (k/n) * (m/n) / ((k + m)/n). With
// P_fa = P_miss = 0 and P_miss_spoof = 0.5 the normalized min t-DCF is k/n.
TEST_CASE("evaluate computes relative improvements from rounded metrics") {
  TempDir dir;
  WriteTiedScores(dir.path(), "baseline", 430, 233);
  WriteTiedScores(dir.path(), "system", 380, 161);
  WriteText(dir / "asv.txt", "p_fa_asv=0\np_miss_asv=0\np_miss_spoof_asv=0.5\n");

  sa_evaluate_args args;
  sa_evaluate_args_init(&args);
  const std::string base_scores = dir / "baseline.scores.txt";
  const std::string sys_scores = dir / "system.scores.txt";
  const std::string protocol = dir / "protocol.txt";
  const std::string asv = dir / "asv.txt";
  const std::string base_out = dir / "baseline";
  const std::string sys_out = dir / "system";
  const std::string base_report = base_out + ".report.txt";
  args.scores = base_scores.c_str();
  args.protocol = protocol.c_str();
  args.asv_rates = asv.c_str();
  args.name = "baseline";
  args.out = base_out.c_str();
  sa_eval_summary base{};
  REQUIRE(sa_evaluate(&args, &base) == SA_OK);
  CHECK(std::round(base.pooled_eer * 100) / 100 == doctest::Approx(1.51));
  CHECK(std::round(base.min_tdcf * 1000) / 1000 == doctest::Approx(0.043));
  CHECK(base.has_relative == 0);

  args.scores = sys_scores.c_str();
  args.name = "enc-spec";
  args.baseline_report = base_report.c_str();
  args.out = sys_out.c_str();
  sa_eval_summary sys{};
  REQUIRE(sa_evaluate(&args, &sys) == SA_OK);
  CHECK(std::round(sys.pooled_eer * 100) / 100 == doctest::Approx(1.13));
  CHECK(std::round(sys.min_tdcf * 1000) / 1000 == doctest::Approx(0.038));
  REQUIRE(sys.has_relative == 1);
  CHECK(sys.relative_eer == doctest::Approx(25.1));
  CHECK(sys.relative_tdcf == doctest::Approx(11.6));

  const std::string table = ReadText(sys_out + ".table.txt");
  CHECK(Contains(table, "baseline"));
  CHECK(Contains(table, "25.1"));
  CHECK(Contains(table, "11.6"));
  CHECK(Contains(ReadText(sys_out + ".report.txt"), "rel.pooled_eer=25.1"));
  CHECK(Contains(ReadText(sys_out + ".csv"), "metric,value"));

  // The same through the command line.
  const CliResult r = Cli("evaluate --scores " + sys_scores + " --protocol " + protocol +
                          " --asv-rates " + asv + " --baseline-report " + base_report + " --name enc-spec" +
                          " --out " + (dir / "cli"));
  CHECK(r.exit_code == 0);
  CHECK(ReadText(dir / "cli.table.txt") == table);
}

TEST_CASE("evaluate without ASV rates is a configuration error") {
  TempDir dir;
  WriteTiedScores(dir.path(), "s", 10, 10);
  const CliResult r = Cli("evaluate --scores " + (dir / "s.scores.txt") + " --protocol " +
                          (dir / "protocol.txt") + " --out " + (dir / "rep"));
  CHECK(r.exit_code == 2);
  CHECK(Contains(r.err, "--asv-rates"));
  CHECK_FALSE(fs::exists(dir / "rep.report.txt"));
}

TEST_CASE("evaluate rejects score files that do not cover the protocol") {
  TempDir dir;
  WriteTiedScores(dir.path(), "s", 10, 10);
  std::string scores = ReadText(dir / "s.scores.txt");
  scores.erase(0, scores.find('\n') + 1);
  WriteText(dir / "short.txt", scores);
  WriteText(dir / "asv.txt", "p_fa_asv=0\np_miss_asv=0\np_miss_spoof_asv=0.5\n");
  const CliResult r = Cli("evaluate --scores " + (dir / "short.txt") + " --protocol " +
                          (dir / "protocol.txt") + " --asv-rates " + (dir / "asv.txt") +
                          " --out " + (dir / "rep"));
  CHECK(r.exit_code == 2);
  CHECK(Contains(r.err, "LA_E_B0"));
  CHECK_FALSE(fs::exists(dir / "rep.report.txt"));
  CHECK_FALSE(fs::exists(dir / "rep.table.txt"));
}

TEST_CASE("command line usage errors") {
  CHECK(Cli("--help").exit_code == 0);
  CHECK(Cli("").exit_code == 1);
  CHECK(Cli("frobnicate").exit_code == 1);
  CHECK(Cli("evaluate --scores x").exit_code == 1);
  CHECK(Cli("build-protocol --setup sideways --out /tmp/x").exit_code == 1);
}

TEST_CASE("missing metadata directory is reported by path") {
  TempDir dir;
  const std::string missing = dir / "no-such-metadata";
  const CliResult r = Cli("build-protocol --metadata-dir " + missing + " --out " + (dir / "p"));
  CHECK(r.exit_code != 0);
  CHECK(Contains(r.err, missing));
}

TEST_CASE("protocol construction through the command line") {
  Pipeline& p = SharedPipeline();
  const std::string main_dev = ReadText(p.proto + "/main.dev.txt");
  const std::string orig_dev = ReadText(
      p.corpus + "/ASVspoof2019_LA_cm_protocols/ASVspoof2019.LA.cm.dev.trl.txt");
  // Two unenrolled speakers with 10 bonafide trials each are dropped.
  CHECK(CountLines(main_dev) + 20 == CountLines(orig_dev));
  const std::string prov = ReadText(p.proto + "/main.provenance.txt");
  CHECK(Contains(prov, "dev.removed_bonafide=20"));

  // Ablation rebuilt with the same seed is byte identical.
  TempDir again;
  REQUIRE(Cli("build-protocol --metadata-dir " + p.corpus + " --setup ablation --seed 9 --out " +
              again.path()).exit_code == 0);
  for (const char* part : {"train", "dev", "eval"}) {
    const std::string name = std::string("ablation.") + part + ".txt";
    CHECK(ReadText(again / name) == ReadText(p.proto + "/" + name));
  }
  CHECK(ReadText(again / "ablation.provenance.txt") ==
        ReadText(p.proto + "/ablation.provenance.txt"));
  const CliResult no_seed =
      Cli("build-protocol --metadata-dir " + p.corpus + " --setup ablation --out " + again.path());
  CHECK(no_seed.exit_code == 2);
  CHECK(Contains(no_seed.err, "seed"));

  sa_protocol* proto = nullptr;
  const std::string abl_eval = p.proto + "/ablation.eval.txt";
  REQUIRE(sa_protocol_load(abl_eval.c_str(), &proto) == SA_OK);
  REQUIRE(sa_protocol_size(proto) == 3u * 16u);
  for (size_t i = 0; i < sa_protocol_size(proto); ++i) {
    sa_trial t;
    REQUIRE(sa_protocol_trial(proto, i, &t) == SA_OK);
    CHECK(std::string(t.claimed_speaker_id) != t.true_speaker_id);
  }
  sa_trial t;
  CHECK(sa_protocol_trial(proto, 1000, &t) == SA_ERR_INVALID_INPUT);
  sa_protocol_free(proto);
}

TEST_CASE("enrollment through the command line") {
  Pipeline& p = SharedPipeline();
  const std::string store = ReadText(p.enroll);
  CHECK(CountLines(store) == 4u + 3u + 3u);
  TempDir dir;
  REQUIRE(Cli(p.EnrollArgs(dir / "again.tsv")).exit_code == 0);
  CHECK(ReadText(dir / "again.tsv") == store);
  REQUIRE(Cli(p.EnrollArgs(dir / "other.tsv")).exit_code == 0);

  const CliResult too_many = Cli(p.EnrollArgs(dir / "bad.tsv", "--n-male 25"));
  CHECK(too_many.exit_code == 2);
  CHECK(Contains(too_many.err, "LA_00"));
  CHECK_FALSE(fs::exists(dir / "bad.tsv"));
}

TEST_CASE("train, score and model handles") {
  Pipeline& p = SharedPipeline();
  TempDir dir;
  const std::string base = dir / "baseline.json";
  const std::string spec = dir / "enc-spec.json";
  REQUIRE(Cli(p.TrainArgs("baseline", base)).exit_code == 0);
  REQUIRE(Cli(p.TrainArgs("enc-spec", spec)).exit_code == 0);
  CHECK(fs::exists(base + ".log.tsv"));
  const auto cfg = nlohmann::json::parse(ReadText(spec + ".config.json"));
  CHECK(cfg["seed"] == 3);
  CHECK(cfg["optimizer"]["epochs"] == 2);
  CHECK(cfg["backbone"]["strategy"] == "enc-spec");

  // The baseline gives the same scores whichever speaker is claimed.
  REQUIRE(Cli(p.ScoreArgs(base, p.proto + "/main.eval.txt", dir / "b.main.txt")).exit_code == 0);
  REQUIRE(Cli(p.ScoreArgs(base, p.proto + "/ablation.eval.txt", dir / "b.abl.txt")).exit_code ==
          0);
  CHECK(ReadText(dir / "b.main.txt") == ReadText(dir / "b.abl.txt"));
  CHECK(CountLines(ReadText(dir / "b.main.txt")) == 3u * 16u);

  REQUIRE(Cli(p.ScoreArgs(spec, p.proto + "/main.eval.txt", dir / "s.main.txt")).exit_code == 0);
  REQUIRE(Cli(p.ScoreArgs(spec, p.proto + "/ablation.eval.txt", dir / "s.abl.txt")).exit_code ==
          0);
  CHECK(ReadText(dir / "s.main.txt") != ReadText(dir / "s.abl.txt"));

  const CliResult mismatch =
      Cli(p.ScoreArgs(spec, p.proto + "/main.eval.txt", dir / "x.txt", "--strategy utterance"));
  CHECK(mismatch.exit_code == 2);
  CHECK(Contains(mismatch.err, "enc-spec"));
  CHECK_FALSE(fs::exists(dir / "x.txt"));

  // Failed training leaves nothing behind.
  const CliResult no_features =
      Cli("train --strategy baseline --train-protocol " + p.proto + "/main.train.txt" +
          " --features " + (dir / "missing.bin") + " --seed 1 --epochs 1 --checkpoint " +
          (dir / "never.json"));
  CHECK(no_features.exit_code == 2);
  CHECK_FALSE(fs::exists(dir / "never.json"));
  CHECK_FALSE(fs::exists(dir / "never.json.log.tsv"));

  sa_model* model = nullptr;
  REQUIRE(sa_model_load(spec.c_str(), 0, &model) == SA_OK);
  CHECK(std::string(sa_model_strategy(model)) == "enc-spec");
  const int bins = sa_model_input_bins(model);
  const int dim = sa_model_embed_dim(model);
  CHECK(bins == 46);
  CHECK(dim == 192);
  std::vector<float> frames(static_cast<size_t>(bins) * 40, 0.5f);
  std::vector<double> enrol(dim, 0.1);
  double score = NAN;
  CHECK(sa_model_score(model, frames.data(), bins, 40, enrol.data(), enrol.size(), &score) ==
        SA_OK);
  CHECK(std::isfinite(score));
  CHECK(sa_model_score(model, frames.data(), bins, 40, nullptr, 0, &score) ==
        SA_ERR_CONTRACT_VIOLATION);
  CHECK(sa_model_score(model, frames.data(), bins + 1, 40, enrol.data(), enrol.size(), &score) ==
        SA_ERR_INVALID_INPUT);
  sa_model_free(model);
  CHECK(sa_model_load((dir / "missing.json").c_str(), 0, &model) == SA_ERR_STORAGE);

  // Score file of the k=0 sweep equals plain training plus scoring.
  REQUIRE(Cli(p.ScoreArgs(base, p.proto + "/main.eval.txt", dir / "b.best.txt")).exit_code == 0);
  REQUIRE(Cli(p.SweepArgs("0", dir / "sweep0")).exit_code == 0);
  CHECK(ReadText(dir / "sweep0/k0/eval.scores.txt") == ReadText(dir / "b.best.txt"));
}

TEST_CASE("augmentation sweep through the command line") {
  Pipeline& p = SharedPipeline();
  TempDir dir;
  // Reference reports for the two horizontal lines.
  WriteText(dir / "base.report.txt", "name=baseline\npooled_eer=30.00\n");
  WriteText(dir / "best.report.txt", "name=enc-spec\npooled_eer=5.00\n");
  const std::string out = dir / "sweep";
  const CliResult r = Cli(p.SweepArgs("0,10,30,1000", out,
                                      "--baseline-report " + (dir / "base.report.txt") +
                                          " --reference-report " + (dir / "best.report.txt")));
  REQUIRE(r.exit_code == 0);
  CHECK(Contains(r.err + r.out, "k=1000"));
  const std::string table = ReadText(out + "/sweep.tsv");
  CHECK(CountLines(table) == 5u);
  CHECK(Contains(table, "1000\tskipped"));
  // External utterances grow with k; spoof counts stay put.
  std::vector<std::vector<std::string>> rows;
  size_t pos = table.find('\n') + 1;
  while (pos < table.size()) {
    const size_t eol = table.find('\n', pos);
    std::vector<std::string> f;
    std::string line = table.substr(pos, eol - pos);
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      f.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    rows.push_back(f);
    pos = eol + 1;
  }
  REQUIRE(rows.size() == 4u);
  CHECK(rows[0][4] == "0");
  CHECK(rows[1][4] == "10");
  CHECK(rows[2][4] == "30");
  CHECK(std::stoi(rows[1][2]) == std::stoi(rows[0][2]) + 10);
  CHECK(rows[0][3] == rows[2][3]);
  CHECK(fs::exists(out + "/k30/checkpoint.json"));
  CHECK_FALSE(fs::exists(out + "/k1000"));
  CHECK(CountLines(ReadText(out + "/k30/train.txt")) ==
        CountLines(ReadText(p.proto + "/main.train.txt")) + 30);

  const std::string svg = ReadText(out + "/sweep.svg");
  CHECK(Contains(svg, "<svg"));
  CHECK(Contains(svg, "baseline"));
  CHECK(Contains(svg, "best system"));
  CHECK(Contains(svg, "green"));
  CHECK(Contains(svg, "hotpink"));

  const auto cfg = nlohmann::json::parse(ReadText(out + "/config.json"));
  CHECK(cfg["augmentation"]["k_list"].size() == 4u);
  CHECK(cfg["seed"] == 3);

  // The same seed gives the same sweep.
  REQUIRE(Cli(p.SweepArgs("10", dir / "again")).exit_code == 0);
  CHECK(ReadText(dir / "again/k10/eval.scores.txt") == ReadText(out + "/k10/eval.scores.txt"));

  const CliResult bad = Cli(p.SweepArgs("5,-1", dir / "bad"));
  CHECK(bad.exit_code == 2);
  CHECK_FALSE(fs::exists(dir / "bad/sweep.tsv"));
}

TEST_CASE("null arguments") {
  CHECK(sa_build_protocol(nullptr, nullptr) == SA_ERR_NULL_ARGUMENT);
  CHECK(sa_train(nullptr, nullptr) == SA_ERR_NULL_ARGUMENT);
  CHECK(sa_protocol_load(nullptr, nullptr) == SA_ERR_NULL_ARGUMENT);
  sa_model* m = nullptr;
  CHECK(sa_model_load(nullptr, 0, &m) == SA_ERR_NULL_ARGUMENT);
  sa_protocol_free(nullptr);
  sa_model_free(nullptr);
  CHECK(sa_protocol_size(nullptr) == 0u);
}
