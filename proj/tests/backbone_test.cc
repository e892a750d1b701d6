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
#include <cstring>
#include <limits>
#include <vector>

#include "doctest.h"
#include "gradcheck.h"
#include "spkaware/backbone.h"
#include "spkaware/error.h"
#include "spkaware/rng.h"

using namespace spkaware;

namespace {

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kInvalidInput;
}

BackboneConfig SmallConfig(Strategy s) {
  BackboneConfig cfg;
  cfg.d_c = 6;
  cfg.d_s = 4;
  cfg.d_t = 5;
  cfg.utterance_dim = 12;
  cfg.mix_channels = 4;
  cfg.d_embed = 7;
  cfg.conv1_channels = 3;
  cfg.conv2_channels = 4;
  cfg.projection_init_std = 0.5;
  cfg.strategy = s;
  return cfg;
}

BackboneConfig FullConfig(Strategy s) {
  BackboneConfig cfg;
  cfg.strategy = s;
  return cfg;
}

Frames ConstantFrames(int bins, int frames, float v) {
  Frames f;
  f.bins = bins;
  f.frames = frames;
  f.data.assign(static_cast<size_t>(bins) * frames, v);
  return f;
}

}  // namespace

TEST_CASE("forward shapes for all strategies") {
  struct Expect {
    Strategy s;
    Shape3 conditioned;
    int fc;
  };
  const Expect table[] = {
      {Strategy::kBaseline, {64, 23, 29}, 160},
      {Strategy::kEncChan, {256, 23, 29}, 160},
      {Strategy::kEncChanReduced, {128, 23, 29}, 160},
      {Strategy::kEncSpec, {64, 215, 29}, 160},
      {Strategy::kEncSpecReduced, {64, 46, 29}, 160},
      {Strategy::kUtterance, {64, 23, 29}, 352},
  };
  RngStream rng(5, "shapes");
  for (const auto& e : table) {
    CAPTURE(StrategyName(e.s));
    const BackboneConfig cfg = FullConfig(e.s);
    CHECK(cfg.conditioned_shape() == e.conditioned);
    CHECK(cfg.fc_input_dim() == e.fc);
    ReferenceBackbone model(cfg, 11);
    const auto frames = gradcheck::RandomFrames(rng, cfg.input_bins(), 70);
    const auto enrol = gradcheck::RandomVector(rng, cfg.d_embed);
    ForwardTrace trace;
    const double score = Forward(model, frames, enrol, &trace);
    CHECK(std::isfinite(score));
    CHECK(trace.encoder_output == Shape3{64, 23, 29});
    CHECK(trace.conditioned == e.conditioned);
    CHECK(trace.utterance_dim == 160);
    CHECK(trace.fc_input_dim == e.fc);
    CHECK((model.projection() != nullptr) == (cfg.projection_dim() > 0));
  }
}

TEST_CASE("encoder is deterministic and validates its input") {
  const BackboneConfig cfg = SmallConfig(Strategy::kBaseline);
  ReferenceBackbone model(cfg, 3);
  RngStream rng(6, "enc");
  const auto frames = gradcheck::RandomFrames(rng, cfg.input_bins(), 13);
  const FeatureMap a = model.Encode(frames);
  const FeatureMap b = model.Encode(frames);
  REQUIRE(a.shape() == cfg.encoder_shape());
  CHECK(std::memcmp(a.data().data(), b.data().data(), a.data().size() * sizeof(double)) == 0);

  ReferenceBackbone same(cfg, 3);
  const FeatureMap c = same.Encode(frames);
  CHECK(std::memcmp(a.data().data(), c.data().data(), a.data().size() * sizeof(double)) == 0);

  CHECK(KindOf([&] { model.Encode(Frames{}); }) == ErrorKind::kInvalidInput);
  CHECK(KindOf([&] { model.Encode(ConstantFrames(cfg.input_bins() + 1, 10, 0.f)); }) ==
        ErrorKind::kInvalidInput);
  Frames bad = ConstantFrames(cfg.input_bins(), 10, 0.f);
  bad.data.pop_back();
  CHECK(KindOf([&] { model.Encode(bad); }) == ErrorKind::kInvalidInput);
}

TEST_CASE("pooling output length and degenerate maps") {
  for (Strategy s : {Strategy::kBaseline, Strategy::kEncChan, Strategy::kEncSpec}) {
    CAPTURE(StrategyName(s));
    const BackboneConfig cfg = FullConfig(s);
    ReferenceBackbone model(cfg, 2);
    const FeatureMap zero(cfg.conditioned_shape());
    const auto v = model.PoolToUtterance(zero);
    REQUIRE(v.size() == 160u);
    for (double x : v) CHECK(x == 0.0);

    FeatureMap nan(cfg.conditioned_shape());
    nan.at(0, 1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK(KindOf([&] { model.PoolToUtterance(nan); }) == ErrorKind::kNumeric);

    const FeatureMap wrong(Shape3{cfg.d_c + 1, cfg.d_s, cfg.d_t});
    CHECK(KindOf([&] { model.PoolToUtterance(wrong); }) == ErrorKind::kContractViolation);
  }
}

TEST_CASE("classifier input length and zero weights") {
  const BackboneConfig cfg = SmallConfig(Strategy::kUtterance);
  ReferenceBackbone model(cfg, 4);
  std::vector<double> v(cfg.fc_input_dim(), 0.3);
  CHECK(std::isfinite(model.Classify(v)));
  v.pop_back();
  CHECK(KindOf([&] { model.Classify(v); }) == ErrorKind::kContractViolation);

  auto dense = model.dense();
  for (auto& m : dense) m.setZero();
  ReferenceBackbone zero(cfg, dense, ProjectionMatrix::Identity(cfg.d_embed));
  RngStream rng(1, "zero");
  const auto frames = gradcheck::RandomFrames(rng, cfg.input_bins(), cfg.input_frames());
  const auto enrol = gradcheck::RandomVector(rng, cfg.d_embed);
  CHECK(Forward(zero, frames, enrol) == 0.0);
}

TEST_CASE("enrollment dimension is checked for conditioned strategies") {
  for (Strategy s : AllStrategies()) {
    if (s == Strategy::kBaseline) continue;
    CAPTURE(StrategyName(s));
    const BackboneConfig cfg = SmallConfig(s);
    ReferenceBackbone model(cfg, 4);
    const Frames f = ConstantFrames(cfg.input_bins(), 10, 1.f);
    std::vector<double> short_enrol(cfg.d_embed - 1, 0.0);
    CHECK(KindOf([&] { Forward(model, f, short_enrol); }) == ErrorKind::kContractViolation);
  }
}

TEST_CASE("baseline ignores the enrollment embedding") {
  const BackboneConfig cfg = SmallConfig(Strategy::kBaseline);
  ReferenceBackbone model(cfg, 8);
  RngStream rng(2, "baseline");
  for (int i = 0; i < 20; ++i) {
    const auto frames = gradcheck::RandomFrames(rng, cfg.input_bins(), 10 + i);
    const auto a = gradcheck::RandomVector(rng, cfg.d_embed);
    const auto b = gradcheck::RandomVector(rng, cfg.d_embed, 100.0);
    const double sa = Forward(model, frames, a);
    const double sb = Forward(model, frames, b);
    const double sc = Forward(model, frames, std::vector<double>{});
    CHECK(std::memcmp(&sa, &sb, sizeof sa) == 0);
    CHECK(std::memcmp(&sa, &sc, sizeof sa) == 0);
  }
}

TEST_CASE("forward pass matches the composition of the stages") {
  RngStream rng(3, "compose");
  for (Strategy s : AllStrategies()) {
    CAPTURE(StrategyName(s));
    const BackboneConfig cfg = SmallConfig(s);
    ReferenceBackbone model(cfg, 9);
    const auto frames = gradcheck::RandomFrames(rng, cfg.input_bins(), cfg.input_frames());
    const auto enrol = gradcheck::RandomVector(rng, cfg.d_embed);
    const Eigen::Vector2d logits = model.ForwardLogits(frames, enrol, nullptr);
    const double score = Forward(model, frames, enrol);
    CHECK(score == doctest::Approx(logits(0) - logits(1)).epsilon(1e-12));
  }
}

TEST_CASE("utterance strategy score depends on the appended enrollment") {
  const BackboneConfig cfg = SmallConfig(Strategy::kUtterance);
  ReferenceBackbone model(cfg, 12);
  RngStream rng(4, "utt");
  const auto frames = gradcheck::RandomFrames(rng, cfg.input_bins(), cfg.input_frames());
  auto enrol = gradcheck::RandomVector(rng, cfg.d_embed);
  const double h = 1e-5;
  double norm2 = 0.0;
  for (int i = 0; i < cfg.d_embed; ++i) {
    const double saved = enrol[i];
    enrol[i] = saved + h;
    const double up = Forward(model, frames, enrol);
    enrol[i] = saved - h;
    const double down = Forward(model, frames, enrol);
    enrol[i] = saved;
    const double g = (up - down) / (2 * h);
    // The score is linear in the appended block.
    const Eigen::MatrixXd& w = model.dense()[ReferenceBackbone::kFcW];
    const int row = cfg.utterance_dim + i;
    CHECK(g == doctest::Approx(w(row, 0) - w(row, 1)).epsilon(1e-6));
    norm2 += g * g;
  }
  CHECK(norm2 > 0.0);
}

TEST_CASE("analytic gradients match finite differences") {
  RngStream rng(21, "grad");
  for (Strategy s : AllStrategies()) {
    const BackboneConfig cfg = SmallConfig(s);
    ReferenceBackbone model(cfg, 31);
    gradcheck::RandomizeBiases(&model, rng);
    const auto batch = gradcheck::RandomBatch(rng, cfg, 4);
    const size_t n = model.TrainableParameters().size();
    CHECK(n == (IsReduced(s) ? 11u : 10u));
    for (size_t i = 0; i < n; ++i) {
      const auto r = gradcheck::CheckTensor(&model, batch, i);
      CAPTURE(StrategyName(s));
      CAPTURE(r.name);
      CHECK(r.relative_error < 1e-4);
    }
  }
}

TEST_CASE("scores stay finite for extreme inputs") {
  for (Strategy s : AllStrategies()) {
    CAPTURE(StrategyName(s));
    const BackboneConfig cfg = SmallConfig(s);
    ReferenceBackbone model(cfg, 5);
    const std::vector<double> enrol(cfg.d_embed, 1.0);
    for (float v : {0.f, 1.f, 1e3f, -1e3f}) {
      CHECK(std::isfinite(Forward(model, ConstantFrames(cfg.input_bins(), 17, v), enrol)));
    }
  }
}

TEST_CASE("weighted cross entropy") {
  Eigen::Vector2d d;
  const double loss = WeightedCrossEntropy(Eigen::Vector2d(0.0, 0.0), 0, 2.0, &d);
  CHECK(loss == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(d(0) == doctest::Approx(-1.0));
  CHECK(d(1) == doctest::Approx(1.0));
  const double big = WeightedCrossEntropy(Eigen::Vector2d(800.0, -800.0), 1, 1.0, &d);
  CHECK(big == doctest::Approx(1600.0));
  CHECK(std::isfinite(d(0)));
}

TEST_CASE("config validation") {
  BackboneConfig cfg;
  cfg.mix_channels = 7;
  CHECK(KindOf([&] { cfg.Validate(); }) == ErrorKind::kConfiguration);
  cfg = BackboneConfig{};
  cfg.d_embed = 0;
  CHECK(KindOf([&] { cfg.Validate(); }) == ErrorKind::kConfiguration);
}
