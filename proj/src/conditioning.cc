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

#include "spkaware/conditioning.h"

#include <cmath>
#include <cstring>

#include "spkaware/error.h"
#include "spkaware/rng.h"

namespace spkaware {

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kBaseline:
      return "baseline";
    case Strategy::kEncChan:
      return "enc-chan";
    case Strategy::kEncChanReduced:
      return "enc-chan-reduced";
    case Strategy::kEncSpec:
      return "enc-spec";
    case Strategy::kEncSpecReduced:
      return "enc-spec-reduced";
    case Strategy::kUtterance:
      return "utterance";
  }
  return "unknown";
}

const std::array<Strategy, 6>& AllStrategies() {
  static const std::array<Strategy, 6> kAll = {
      Strategy::kBaseline,       Strategy::kEncChan,  Strategy::kEncChanReduced,
      Strategy::kEncSpec,        Strategy::kEncSpecReduced, Strategy::kUtterance};
  return kAll;
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : AllStrategies()) {
    if (StrategyName(s) == name) return s;
  }
  Throw(ErrorKind::kInvalidInput,
        "unknown strategy '" + std::string(name) +
            "' (expected baseline, enc-chan, enc-chan-reduced, enc-spec, "
            "enc-spec-reduced or utterance)");
}

std::optional<InsertionPoint> InsertionPointOf(Strategy s) {
  switch (s) {
    case Strategy::kBaseline:
      return std::nullopt;
    case Strategy::kUtterance:
      return InsertionPoint::kFcInput;
    default:
      return InsertionPoint::kEncoderOutput;
  }
}

std::optional<Axis> AttachAxisOf(Strategy s) {
  switch (s) {
    case Strategy::kEncChan:
    case Strategy::kEncChanReduced:
      return Axis::kChannel;
    case Strategy::kEncSpec:
    case Strategy::kEncSpecReduced:
      return Axis::kSpectral;
    default:
      return std::nullopt;
  }
}

bool IsReduced(Strategy s) {
  return s == Strategy::kEncChanReduced || s == Strategy::kEncSpecReduced;
}

std::string ToString(const Shape3& s) {
  return "(" + std::to_string(s.channel) + "," + std::to_string(s.spectral) + "," +
         std::to_string(s.temporal) + ")";
}

FeatureMap::FeatureMap(Shape3 shape, double fill) : shape_(shape) {
  if (shape.channel < 1 || shape.spectral < 1 || shape.temporal < 1) {
    Throw(ErrorKind::kInvalidInput, "feature map dimensions must be >= 1, got " +
                                        ToString(shape));
  }
  data_.assign(shape.size(), fill);
}

FeatureMap::FeatureMap(Shape3 shape, std::vector<double> data)
    : FeatureMap(shape) {
  if (data.size() != shape.size()) {
    Throw(ErrorKind::kContractViolation, "feature map data size does not match " +
                                             ToString(shape));
  }
  data_ = std::move(data);
}

bool FeatureMap::AllFinite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

ProjectionMatrix ProjectionMatrix::Identity(int d_embed) {
  if (d_embed < 1) Throw(ErrorKind::kInvalidInput, "projection size must be >= 1");
  ProjectionMatrix p;
  p.weights = Eigen::MatrixXd::Identity(d_embed, d_embed);
  p.trainable = false;
  p.identity = true;
  return p;
}

ProjectionMatrix ProjectionMatrix::Reduced(int d_embed, int out_dim, RngStream& rng,
                                           double stddev) {
  if (d_embed < 1 || out_dim < 1) {
    Throw(ErrorKind::kInvalidInput, "projection dimensions must be >= 1");
  }
  ProjectionMatrix p;
  p.weights.resize(d_embed, out_dim);
  for (int i = 0; i < d_embed; ++i) {
    for (int j = 0; j < out_dim; ++j) p.weights(i, j) = rng.Normal(0.0, stddev);
  }
  p.trainable = true;
  p.identity = false;
  return p;
}

std::vector<double> Project(std::span<const double> embedding, const ProjectionMatrix& p) {
  if (static_cast<int>(embedding.size()) != p.rows()) {
    Throw(ErrorKind::kContractViolation,
          "projection expects a " + std::to_string(p.rows()) + "-d embedding, got " +
              std::to_string(embedding.size()));
  }
  if (p.identity) return std::vector<double>(embedding.begin(), embedding.end());
  std::vector<double> out(p.cols(), 0.0);
  for (int j = 0; j < p.cols(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < p.rows(); ++i) acc += embedding[i] * p.weights(i, j);
    out[j] = acc;
  }
  return out;
}

ConditioningTensor RepExpand(std::span<const double> embedding, Axis kind, int d_c,
                             int d_s, int d_t) {
  const int d = static_cast<int>(embedding.size());
  if (d < 1) Throw(ErrorKind::kInvalidInput, "Rep: empty embedding");
  if (d_t < 1 || (kind == Axis::kChannel && d_s < 1) ||
      (kind == Axis::kSpectral && d_c < 1)) {
    Throw(ErrorKind::kInvalidInput, "Rep: target dimensions must be positive");
  }
  ConditioningTensor out;
  out.kind = kind;
  if (kind == Axis::kChannel) {
    out.map = FeatureMap({d, d_s, d_t});
    for (int i = 0; i < d; ++i)
      for (int s = 0; s < d_s; ++s)
        for (int t = 0; t < d_t; ++t) out.map.at(i, s, t) = embedding[i];
  } else {
    out.map = FeatureMap({d_c, d, d_t});
    for (int c = 0; c < d_c; ++c)
      for (int j = 0; j < d; ++j)
        for (int t = 0; t < d_t; ++t) out.map.at(c, j, t) = embedding[j];
  }
  return out;
}

FeatureMap Attach(const FeatureMap& feature_map, const ConditioningTensor& cond) {
  const Shape3& a = feature_map.shape();
  const Shape3& b = cond.map.shape();
  if (a.temporal != b.temporal) {
    Throw(ErrorKind::kContractViolation,
          "attach: temporal axis mismatch (" + std::to_string(a.temporal) + " vs " +
              std::to_string(b.temporal) + ")");
  }
  if (cond.kind == Axis::kChannel) {
    if (a.spectral != b.spectral) {
      Throw(ErrorKind::kContractViolation,
            "attach: spectral axis mismatch (" + std::to_string(a.spectral) + " vs " +
                std::to_string(b.spectral) + ")");
    }
    // Channel-major layout: the two blocks are contiguous.
    std::vector<double> data;
    data.reserve(a.size() + b.size());
    data.insert(data.end(), feature_map.data().begin(), feature_map.data().end());
    data.insert(data.end(), cond.map.data().begin(), cond.map.data().end());
    return FeatureMap({a.channel + b.channel, a.spectral, a.temporal}, std::move(data));
  }
  if (a.channel != b.channel) {
    Throw(ErrorKind::kContractViolation,
          "attach: channel axis mismatch (" + std::to_string(a.channel) + " vs " +
              std::to_string(b.channel) + ")");
  }
  Shape3 out_shape{a.channel, a.spectral + b.spectral, a.temporal};
  FeatureMap out(out_shape);
  const size_t block_a = static_cast<size_t>(a.spectral) * a.temporal;
  const size_t block_b = static_cast<size_t>(b.spectral) * b.temporal;
  double* dst = out.mutable_data().data();
  for (int c = 0; c < a.channel; ++c) {
    std::memcpy(dst, feature_map.data().data() + c * block_a, block_a * sizeof(double));
    dst += block_a;
    std::memcpy(dst, cond.map.data().data() + c * block_b, block_b * sizeof(double));
    dst += block_b;
  }
  return out;
}

std::vector<double> ConcatUtterance(std::span<const double> phi_test,
                                    std::span<const double> phi_enrol, int utterance_dim,
                                    int d_embed) {
  if (static_cast<int>(phi_test.size()) != utterance_dim) {
    Throw(ErrorKind::kContractViolation,
          "utterance vector has length " + std::to_string(phi_test.size()) +
              ", expected " + std::to_string(utterance_dim));
  }
  if (static_cast<int>(phi_enrol.size()) != d_embed) {
    Throw(ErrorKind::kContractViolation,
          "enrollment vector has length " + std::to_string(phi_enrol.size()) +
              ", expected " + std::to_string(d_embed));
  }
  std::vector<double> out(phi_test.begin(), phi_test.end());
  out.insert(out.end(), phi_enrol.begin(), phi_enrol.end());
  return out;
}

Payload ApplyStrategy(Strategy strategy, InsertionPoint point, Payload payload,
                      std::span<const double> enrollment,
                      const ProjectionMatrix* projection, int utterance_dim) {
  auto where = InsertionPointOf(strategy);
  if (!where) return payload;
  if (*where != point) {
    Throw(ErrorKind::kContractViolation,
          std::string(StrategyName(strategy)) + " cannot be applied at the " +
              (point == InsertionPoint::kFcInput ? "FC input" : "encoder output"));
  }
  if (point == InsertionPoint::kFcInput) {
    auto* v = std::get_if<std::vector<double>>(&payload);
    if (!v) Throw(ErrorKind::kContractViolation, "FC-input payload must be a vector");
    return ConcatUtterance(*v, enrollment, utterance_dim,
                           static_cast<int>(enrollment.size()));
  }
  auto* fm = std::get_if<FeatureMap>(&payload);
  if (!fm) Throw(ErrorKind::kContractViolation, "encoder-output payload must be a feature map");
  std::vector<double> vec;
  if (IsReduced(strategy)) {
    if (!projection) {
      Throw(ErrorKind::kContractViolation,
            std::string(StrategyName(strategy)) + " requires a projection matrix");
    }
    vec = Project(enrollment, *projection);
  } else {
    vec.assign(enrollment.begin(), enrollment.end());
  }
  const Shape3& shape = fm->shape();
  Axis axis = *AttachAxisOf(strategy);
  ConditioningTensor cond =
      RepExpand(vec, axis, shape.channel, shape.spectral, shape.temporal);
  return Attach(*fm, cond);
}

}  // namespace spkaware
