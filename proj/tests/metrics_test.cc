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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "spkaware/error.h"
#include "spkaware/metrics.h"
#include "spkaware/rng.h"
#include "test_util.h"

using namespace spkaware;

namespace {

std::vector<ScoredTrial> Make(const std::vector<double>& bona, const std::vector<double>& spoof) {
  std::vector<ScoredTrial> t;
  for (double s : bona) t.push_back({s, Key::kBonafide});
  for (double s : spoof) t.push_back({s, Key::kSpoof});
  return t;
}

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kInvalidInput;
}

Trial MakeTrial(const std::string& utt, const std::string& spk, Key key, const std::string& atk) {
  Trial t;
  t.utterance_id = utt;
  t.claimed_speaker_id = t.true_speaker_id = spk;
  t.key = key;
  t.attack_id = atk;
  t.partition = Partition::kEval;
  return t;
}

}  // namespace

TEST_CASE("eer of separated and inverted scores") {
  CHECK(ComputeEer(Make({3, 4, 5}, {0, 1, 2})).eer == 0.0);
  CHECK(ComputeEer(Make({0, 1, 2}, {3, 4, 5})).eer == doctest::Approx(1.0));
  CHECK(ComputeEer(Make({1, 1}, {1, 1})).eer == doctest::Approx(0.5));
}

TEST_CASE("eer hand example") {
  // accept-all (0,1); u=1: (0.5,1); u=2: (0.5,0.5) -> crossing at 0.5.
  CHECK(ComputeEer(Make({1, 3}, {2, 4})).eer == doctest::Approx(0.5));
  // Bonafide {2,4,6,8}, spoof {1,3,5,7}: u=3 gives (0.25,0.5), u=4 (0.5,0.5).
  const auto r = ComputeEer(Make({2, 4, 6, 8}, {1, 3, 5, 7}));
  CHECK(r.eer == doctest::Approx(0.5));
  CHECK(r.threshold == 4.0);
}

TEST_CASE("eer matches brute force on random fixtures") {
  RngStream rng(11, "metrics-test");
  for (int f = 0; f < 60; ++f) {
    const auto trials = oracle::RandomTrials(rng, 10 + rng.UniformInt(300));
    CHECK(std::fabs(ComputeEer(trials).eer - oracle::BruteForceEer(trials)) < 1e-9);
  }
}

TEST_CASE("eer is invariant to monotone score transforms") {
  RngStream rng(3, "monotone");
  auto trials = oracle::RandomTrials(rng, 200);
  const double before = ComputeEer(trials).eer;
  for (auto& t : trials) t.score = std::exp(0.5 * t.score) * 3.0 - 7.0;
  CHECK(ComputeEer(trials).eer == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("eer needs both classes and finite scores") {
  CHECK(KindOf([] { ComputeEer(Make({1, 2}, {})); }) == ErrorKind::kInvalidInput);
  CHECK(KindOf([] { ComputeEer(Make({}, {1})); }) == ErrorKind::kInvalidInput);
  CHECK(KindOf([] { ComputeEer(Make({NAN}, {1})); }) == ErrorKind::kNumeric);
}

TEST_CASE("t-DCF constants") {
  AsvOperatingPoint asv;
  asv.p_fa_asv = 0.01;
  asv.p_miss_asv = 0.02;
  asv.p_miss_spoof_asv = 0.5;
  const auto k = ComputeTdcfConstants(asv, TdcfCosts{});
  CHECK(k.c1 == doctest::Approx(0.9405 * 0.98 - 0.0095 * 10 * 0.01));
  CHECK(k.c2 == doctest::Approx(0.25));
}

TEST_CASE("min t-DCF properties and oracle") {
  RngStream rng(5, "tdcf-test");
  for (int f = 0; f < 60; ++f) {
    const auto trials = oracle::RandomTrials(rng, 10 + rng.UniformInt(300));
    const auto asv = oracle::RandomAsv(rng);
    const double v = ComputeMinTdcf(trials, asv, TdcfCosts{});
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(std::fabs(v - oracle::BruteForceMinTdcf(trials, asv, TdcfCosts{})) < 1e-9);
  }
  AsvOperatingPoint asv;
  CHECK(ComputeMinTdcf(Make({3, 4}, {1, 2}), asv, TdcfCosts{}) == 0.0);
}

TEST_CASE("degenerate t-DCF constants are a configuration error") {
  AsvOperatingPoint asv;
  asv.p_miss_spoof_asv = 1.0;  // C2 = 0
  CHECK(KindOf([&] { ComputeMinTdcf(Make({1}, {0}), asv, TdcfCosts{}); }) ==
        ErrorKind::kConfiguration);
  TdcfCosts zero;
  zero.p_target = 0.0;
  zero.p_nontarget = 0.0;
  zero.p_spoof = 0.0;
  CHECK(KindOf([&] { ComputeMinTdcf(Make({1}, {0}), AsvOperatingPoint{}, zero); }) ==
        ErrorKind::kConfiguration);
  asv.p_miss_spoof_asv = 1.5;
  CHECK(KindOf([&] { asv.Validate(); }) == ErrorKind::kInvalidInput);
}

TEST_CASE("relative improvement as printed") {
  CHECK(RelativeImprovement(1.51, 1.13) == 25.1);
  CHECK(RelativeImprovement(0.043, 0.038) == 11.6);
  CHECK(RelativeImprovement(1.0, 0.9) == 10.0);
  CHECK(RelativeImprovement(1.0, 1.0) == 0.0);
  CHECK(RelativeImprovement(1.13, 1.47) == -30.0);
  CHECK(KindOf([] { RelativeImprovement(0.0, 1.0); }) == ErrorKind::kInvalidInput);
}

TEST_CASE("per-attack report pools bonafide with each attack") {
  std::vector<Trial> proto = {MakeTrial("b1", "s1", Key::kBonafide, "-"),
                              MakeTrial("b2", "s2", Key::kBonafide, "-"),
                              MakeTrial("x1", "s1", Key::kSpoof, "A07"),
                              MakeTrial("x2", "s2", Key::kSpoof, "A07"),
                              MakeTrial("y1", "s1", Key::kSpoof, "A08")};
  ScoreMap scores = {{"b1", 2.0}, {"b2", 3.0}, {"x1", 0.0}, {"x2", 1.0}, {"y1", 5.0}};
  const auto r = PerAttackReport(scores, proto);
  CHECK(r.n_bonafide == 2);
  CHECK(r.n_spoof == 3);
  CHECK(r.per_attack_eer.at("A07") == 0.0);
  CHECK(r.per_attack_eer.at("A08") == doctest::Approx(100.0));
  CHECK(r.pooled_eer == doctest::Approx(100.0 * oracle::BruteForceEer(
                                                    Make({2, 3}, {0, 1, 5}))));
  CHECK_FALSE(r.min_tdcf.has_value());

  ScoreMap missing = scores;
  missing.erase("x2");
  CHECK(KindOf([&] { PerAttackReport(missing, proto); }) == ErrorKind::kConsistency);
  ScoreMap extra = scores;
  extra["zz"] = 0.0;
  try {
    PerAttackReport(extra, proto);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConsistency);
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }
}

TEST_CASE("relative improvements use reported precision") {
  EvalReport base, sys;
  base.name = "baseline";
  base.pooled_eer = 1.5149;
  base.min_tdcf = 0.04251;
  sys.pooled_eer = 1.1251;
  sys.min_tdcf = 0.03849;
  AddRelativeImprovements(base, &sys);
  CHECK(sys.baseline_name == "baseline");
  CHECK(sys.relative_improvements.at("pooled_eer") == 25.1);
  CHECK(sys.relative_improvements.at("min_tdcf") == 11.6);
}

TEST_CASE("report key-value round trip and table") {
  EvalReport r;
  r.name = "enc-spec";
  r.pooled_eer = 1.13;
  r.min_tdcf = 0.038;
  r.per_attack_eer = {{"A07", 0.1}, {"A17", 2.5}};
  r.n_bonafide = 7355;
  r.n_spoof = 63882;
  r.baseline_name = "baseline";
  r.relative_improvements = {{"pooled_eer", 25.1}};
  const auto back = ParseReportKeyValue(FormatReportKeyValue(r), "mem");
  CHECK(back.name == r.name);
  CHECK(back.pooled_eer == r.pooled_eer);
  CHECK(*back.min_tdcf == *r.min_tdcf);
  CHECK(back.per_attack_eer == r.per_attack_eer);
  CHECK(back.n_spoof == r.n_spoof);
  CHECK(back.relative_improvements == r.relative_improvements);
  const std::string table = FormatReportTable({r});
  CHECK(table.find("1.13") != std::string::npos);
  CHECK(table.find("0.038") != std::string::npos);
  CHECK(table.find("A17") != std::string::npos);
  CHECK(FormatReportDelimited(r).find("rel.pooled_eer,25.1") != std::string::npos);
  CHECK(KindOf([] { ParseReportKeyValue("name=x\n", "mem"); }) == ErrorKind::kParse);
}

TEST_CASE("score and ASV files") {
  TempDir dir;
  WriteText(dir / "s.txt", "u1 0.5\nu2 -1e3\n");
  const auto s = ReadScoreFile(dir / "s.txt");
  CHECK(s.at("u2") == -1000.0);
  WriteText(dir / "dup.txt", "u1 0.5\nu1 1\n");
  CHECK(KindOf([&] { ReadScoreFile(dir / "dup.txt"); }) == ErrorKind::kConsistency);
  WriteText(dir / "bad.txt", "u1\n");
  CHECK(KindOf([&] { ReadScoreFile(dir / "bad.txt"); }) == ErrorKind::kParse);
  WriteText(dir / "nan.txt", "u1 nan\n");
  CHECK(KindOf([&] { ReadScoreFile(dir / "nan.txt"); }) == ErrorKind::kNumeric);

  WriteText(dir / "asv.txt", "p_fa_asv=0.01\np_miss_asv=0.02\np_miss_spoof_asv=0.4\n"
                             "p_miss_spoof_asv.A07=0.3\n");
  const auto asv = ReadAsvOperatingPoint(dir / "asv.txt");
  CHECK(asv.p_miss_spoof_asv == 0.4);
  CHECK(asv.per_attack_p_miss_spoof.at("A07") == 0.3);
  WriteText(dir / "asv2.txt", "p_fa_asv=0.01\n");
  CHECK(KindOf([&] { ReadAsvOperatingPoint(dir / "asv2.txt"); }) == ErrorKind::kParse);
}
