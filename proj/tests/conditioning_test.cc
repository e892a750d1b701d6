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

#include <cstring>
#include <vector>

#include "doctest.h"
#include "spkaware/conditioning.h"
#include "spkaware/error.h"
#include "spkaware/rng.h"

using namespace spkaware;

namespace {

std::vector<double> RandomVector(RngStream& rng, int n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.Normal();
  return v;
}

FeatureMap RandomMap(RngStream& rng, Shape3 shape) {
  FeatureMap fm(shape);
  for (auto& x : fm.mutable_data()) x = rng.Normal();
  return fm;
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

bool BitEqual(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("strategy names round trip") {
  for (Strategy s : AllStrategies()) CHECK(ParseStrategy(StrategyName(s)) == s);
  CHECK(StrategyName(Strategy::kEncSpecReduced) == "enc-spec-reduced");
  CHECK(KindOf([] { ParseStrategy("enc_spec"); }) == ErrorKind::kInvalidInput);
  CHECK_FALSE(InsertionPointOf(Strategy::kBaseline).has_value());
  CHECK(InsertionPointOf(Strategy::kUtterance) == InsertionPoint::kFcInput);
  CHECK(AttachAxisOf(Strategy::kEncChanReduced) == Axis::kChannel);
}

TEST_CASE("rep expand shapes and zero variance along replicated axes") {
  RngStream rng(1, "rep");
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = RandomVector(rng, 192);
    const auto ch = RepExpand(e, Axis::kChannel, 64, 23, 29);
    CHECK(ch.map.shape() == Shape3{192, 23, 29});
    CHECK(ch.embed_dim() == 192);
    const auto sp = RepExpand(e, Axis::kSpectral, 64, 23, 29);
    CHECK(sp.map.shape() == Shape3{64, 192, 29});
    for (int d = 0; d < 192; ++d) {
      for (int a = 0; a < 23; ++a)
        for (int t = 0; t < 29; ++t) REQUIRE(BitEqual(ch.map.at(d, a, t), e[d]));
      for (int c = 0; c < 64; ++c)
        for (int t = 0; t < 29; ++t) REQUIRE(BitEqual(sp.map.at(c, d, t), e[d]));
    }
  }
  CHECK(KindOf([] { RepExpand(std::vector<double>{}, Axis::kChannel, 4, 4, 4); }) ==
        ErrorKind::kInvalidInput);
}

TEST_CASE("attach keeps the original slice bit-exact") {
  RngStream rng(2, "attach");
  const FeatureMap fm = RandomMap(rng, {64, 23, 29});
  const auto e = RandomVector(rng, 192);

  const FeatureMap chan = Attach(fm, RepExpand(e, Axis::kChannel, 64, 23, 29));
  CHECK(chan.shape() == Shape3{256, 23, 29});
  const FeatureMap spec = Attach(fm, RepExpand(e, Axis::kSpectral, 64, 23, 29));
  CHECK(spec.shape() == Shape3{64, 215, 29});
  for (int c = 0; c < 64; ++c)
    for (int s = 0; s < 23; ++s)
      for (int t = 0; t < 29; ++t) {
        REQUIRE(BitEqual(chan.at(c, s, t), fm.at(c, s, t)));
        REQUIRE(BitEqual(spec.at(c, s, t), fm.at(c, s, t)));
      }
  for (int d = 0; d < 192; ++d) {
    CHECK(BitEqual(chan.at(64 + d, 5, 7), e[d]));
    CHECK(BitEqual(spec.at(3, 23 + d, 7), e[d]));
  }
}

TEST_CASE("attach rejects mismatched non-attach axes") {
  RngStream rng(3, "mismatch");
  const FeatureMap fm = RandomMap(rng, {64, 23, 29});
  const auto e = RandomVector(rng, 8);
  try {
    Attach(fm, RepExpand(e, Axis::kChannel, 64, 22, 29));
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::kContractViolation);
    CHECK(std::string(err.what()).find("spectral") != std::string::npos);
  }
  CHECK(KindOf([&] { Attach(fm, RepExpand(e, Axis::kSpectral, 64, 23, 30)); }) ==
        ErrorKind::kContractViolation);
}

TEST_CASE("identity projection is bit-exact, reduced has the right width") {
  RngStream rng(4, "proj");
  const ProjectionMatrix id = ProjectionMatrix::Identity(192);
  CHECK_FALSE(id.trainable);
  for (int trial = 0; trial < 10; ++trial) {
    const auto e = RandomVector(rng, 192);
    const auto p = Project(e, id);
    REQUIRE(p.size() == e.size());
    for (size_t i = 0; i < e.size(); ++i) REQUIRE(BitEqual(p[i], e[i]));
  }
  RngStream init(4, "init");
  const ProjectionMatrix spec = ProjectionMatrix::Reduced(192, 23, init);
  CHECK(spec.trainable);
  CHECK(Project(RandomVector(rng, 192), spec).size() == 23);
  const ProjectionMatrix chan = ProjectionMatrix::Reduced(192, 64, init);
  CHECK(Project(RandomVector(rng, 192), chan).size() == 64);
  CHECK(KindOf([&] { Project(RandomVector(rng, 100), chan); }) == ErrorKind::kContractViolation);
}

TEST_CASE("utterance concatenation") {
  RngStream rng(5, "concat");
  const auto phi = RandomVector(rng, 160);
  const auto e = RandomVector(rng, 192);
  const auto v = ConcatUtterance(phi, e);
  REQUIRE(v.size() == 352);
  CHECK(BitEqual(v[0], phi[0]));
  CHECK(BitEqual(v[159], phi[159]));
  CHECK(BitEqual(v[160], e[0]));
  CHECK(BitEqual(v[351], e[191]));
  CHECK(KindOf([&] { ConcatUtterance(RandomVector(rng, 150), e); }) ==
        ErrorKind::kContractViolation);
}

TEST_CASE("apply strategy at each insertion point") {
  RngStream rng(6, "apply");
  const FeatureMap fm = RandomMap(rng, {64, 23, 29});
  const auto e = RandomVector(rng, 192);
  RngStream init(6, "init");
  const auto red_c = ProjectionMatrix::Reduced(192, 64, init);
  const auto red_s = ProjectionMatrix::Reduced(192, 23, init);
  const auto id = ProjectionMatrix::Identity(192);

  auto shape_of = [&](Strategy s, const ProjectionMatrix* p) {
    return std::get<FeatureMap>(ApplyStrategy(s, InsertionPoint::kEncoderOutput, fm, e, p))
        .shape();
  };
  CHECK(shape_of(Strategy::kBaseline, nullptr) == Shape3{64, 23, 29});
  CHECK(shape_of(Strategy::kEncChan, &id) == Shape3{256, 23, 29});
  CHECK(shape_of(Strategy::kEncSpec, &id) == Shape3{64, 215, 29});
  CHECK(shape_of(Strategy::kEncChanReduced, &red_c) == Shape3{128, 23, 29});
  CHECK(shape_of(Strategy::kEncSpecReduced, &red_s) == Shape3{64, 46, 29});

  const auto phi = RandomVector(rng, 160);
  const auto v = std::get<std::vector<double>>(
      ApplyStrategy(Strategy::kUtterance, InsertionPoint::kFcInput, phi, e));
  CHECK(v.size() == 352);
  const auto same = std::get<std::vector<double>>(
      ApplyStrategy(Strategy::kBaseline, InsertionPoint::kFcInput, phi, e));
  CHECK(same == phi);

  CHECK(KindOf([&] {
          ApplyStrategy(Strategy::kUtterance, InsertionPoint::kEncoderOutput, fm, e);
        }) == ErrorKind::kContractViolation);
  CHECK(KindOf([&] {
          ApplyStrategy(Strategy::kEncSpec, InsertionPoint::kFcInput, phi, e, &id);
        }) == ErrorKind::kContractViolation);
  CHECK(KindOf([&] {
          ApplyStrategy(Strategy::kEncSpecReduced, InsertionPoint::kEncoderOutput, fm, e,
                        nullptr);
        }) == ErrorKind::kContractViolation);
}

TEST_CASE("feature map validation") {
  CHECK(KindOf([] { FeatureMap(Shape3{0, 2, 2}); }) == ErrorKind::kInvalidInput);
  FeatureMap fm(Shape3{2, 2, 2}, 1.0);
  CHECK(fm.AllFinite());
  fm.at(1, 1, 1) = NAN;
  CHECK_FALSE(fm.AllFinite());
}
