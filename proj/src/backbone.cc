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

#include "spkaware/backbone.h"

#include <cmath>

#include "spkaware/error.h"
#include "spkaware/rng.h"

namespace spkaware {

void BackboneConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) Throw(ErrorKind::kConfiguration, "backbone config: " + what);
  };
  require(d_c >= 1 && d_s >= 1 && d_t >= 1, "d_c, d_s, d_t must be positive");
  require(utterance_dim >= 1, "utterance_dim must be positive");
  require(d_embed >= 1, "d_embed must be positive");
  require(batch_size >= 1, "batch_size must be positive");
  require(conv1_channels >= 1 && conv2_channels >= 1, "conv channels must be positive");
  require(mix_channels >= 1 && utterance_dim % mix_channels == 0,
          "mix_channels must be positive and divide utterance_dim");
  require(projection_init_std > 0.0, "projection_init_std must be positive");
}

Shape3 BackboneConfig::conditioned_shape() const {
  Shape3 s = encoder_shape();
  switch (strategy) {
    case Strategy::kEncChan:
      s.channel += d_embed;
      break;
    case Strategy::kEncChanReduced:
      s.channel += d_c;
      break;
    case Strategy::kEncSpec:
      s.spectral += d_embed;
      break;
    case Strategy::kEncSpecReduced:
      s.spectral += d_s;
      break;
    default:
      break;
  }
  return s;
}

int BackboneConfig::fc_input_dim() const {
  return strategy == Strategy::kUtterance ? utterance_dim + d_embed : utterance_dim;
}

int BackboneConfig::projection_dim() const {
  switch (strategy) {
    case Strategy::kEncChan:
    case Strategy::kEncSpec:
      return d_embed;
    case Strategy::kEncChanReduced:
      return d_c;
    case Strategy::kEncSpecReduced:
      return d_s;
    default:
      return 0;
  }
}

double Forward(const CountermeasureBackbone& model, const Frames& input,
               std::span<const double> enrollment, ForwardTrace* trace) {
  const BackboneConfig& cfg = model.config();
  const Strategy strategy = cfg.strategy;
  if (strategy != Strategy::kBaseline &&
      static_cast<int>(enrollment.size()) != cfg.d_embed) {
    Throw(ErrorKind::kContractViolation,
          "enrollment has dimension " + std::to_string(enrollment.size()) +
              ", model expects " + std::to_string(cfg.d_embed));
  }
  FeatureMap fm = model.Encode(input);
  if (trace) trace->encoder_output = fm.shape();
  if (InsertionPointOf(strategy) == InsertionPoint::kEncoderOutput) {
    fm = std::get<FeatureMap>(ApplyStrategy(strategy, InsertionPoint::kEncoderOutput,
                                            std::move(fm), enrollment, model.projection(),
                                            cfg.utterance_dim));
  }
  if (trace) trace->conditioned = fm.shape();
  std::vector<double> v = model.PoolToUtterance(fm);
  if (trace) trace->utterance_dim = static_cast<int>(v.size());
  if (InsertionPointOf(strategy) == InsertionPoint::kFcInput) {
    v = std::get<std::vector<double>>(ApplyStrategy(strategy, InsertionPoint::kFcInput,
                                                    std::move(v), enrollment, nullptr,
                                                    cfg.utterance_dim));
  }
  if (trace) trace->fc_input_dim = static_cast<int>(v.size());
  return model.Classify(v);
}

CmScore Forward(const CountermeasureBackbone& model, const std::string& utterance_id,
                const Frames& input, const EnrollmentProfile& enrollment) {
  return CmScore{utterance_id, Forward(model, input, enrollment.embedding)};
}

namespace {

Eigen::MatrixXd RandomNormal(int rows, int cols, double stddev, RngStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.Normal(0.0, stddev);
  return m;
}

Eigen::MatrixXd Relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd ReluMask(const Eigen::MatrixXd& z) {
  return (z.array() > 0.0).cast<double>().matrix();
}

}  // namespace

ReferenceBackbone::ReferenceBackbone(const BackboneConfig& config, uint64_t seed)
    : config_(config) {
  config_.Validate();
  RngStream rng(seed, "backbone-init");
  const int c1 = config_.conv1_channels;
  const int c2 = config_.conv2_channels;
  const Shape3 cond = config_.conditioned_shape();
  const int hc = config_.mix_channels;
  const int hs = config_.mix_spectral();
  const int d = config_.fc_input_dim();

  dense_.resize(kNumDenseParams);
  dense_[kConv1W] = RandomNormal(4, c1, std::sqrt(2.0 / 4.0), rng);
  dense_[kConv1B] = Eigen::MatrixXd::Zero(1, c1);
  dense_[kConv2W] = RandomNormal(3 * c1, c2, std::sqrt(2.0 / (3.0 * c1)), rng);
  dense_[kConv2B] = Eigen::MatrixXd::Zero(1, c2);
  dense_[kConv3W] = RandomNormal(c2, config_.d_c, std::sqrt(2.0 / c2), rng);
  dense_[kConv3B] = Eigen::MatrixXd::Zero(1, config_.d_c);
  dense_[kMixChannel] = RandomNormal(cond.channel, hc, 1.0 / std::sqrt(cond.channel), rng);
  dense_[kMixSpectral] = RandomNormal(cond.spectral, hs, 1.0 / std::sqrt(cond.spectral), rng);
  dense_[kFcW] = RandomNormal(d, 2, 1.0 / std::sqrt(d), rng);
  dense_[kFcB] = Eigen::MatrixXd::Zero(1, 2);

  if (AttachAxisOf(config_.strategy)) {
    has_projection_ = true;
    if (IsReduced(config_.strategy)) {
      RngStream prng = rng.Split("projection");
      projection_ = ProjectionMatrix::Reduced(config_.d_embed, config_.projection_dim(), prng,
                                              config_.projection_init_std);
    } else {
      projection_ = ProjectionMatrix::Identity(config_.d_embed);
    }
  }
  CheckShapes();
}

ReferenceBackbone::ReferenceBackbone(const BackboneConfig& config,
                                     std::vector<Eigen::MatrixXd> dense,
                                     ProjectionMatrix projection)
    : config_(config), dense_(std::move(dense)), projection_(std::move(projection)) {
  config_.Validate();
  has_projection_ = AttachAxisOf(config_.strategy).has_value();
  if (!has_projection_) projection_ = ProjectionMatrix{};
  CheckShapes();
}

void ReferenceBackbone::CheckShapes() const {
  const int c1 = config_.conv1_channels;
  const int c2 = config_.conv2_channels;
  const Shape3 cond = config_.conditioned_shape();
  const int expected[kNumDenseParams][2] = {
      {4, c1},
      {1, c1},
      {3 * c1, c2},
      {1, c2},
      {c2, config_.d_c},
      {1, config_.d_c},
      {cond.channel, config_.mix_channels},
      {cond.spectral, config_.mix_spectral()},
      {config_.fc_input_dim(), 2},
      {1, 2},
  };
  if (dense_.size() != kNumDenseParams) {
    Throw(ErrorKind::kConsistency, "backbone has " + std::to_string(dense_.size()) +
                                       " weight arrays, expected " +
                                       std::to_string(kNumDenseParams));
  }
  const auto names = ParameterNames();
  for (int i = 0; i < kNumDenseParams; ++i) {
    if (dense_[i].rows() != expected[i][0] || dense_[i].cols() != expected[i][1]) {
      Throw(ErrorKind::kConsistency,
            "weight '" + names[i] + "' has shape " + std::to_string(dense_[i].rows()) + "x" +
                std::to_string(dense_[i].cols()) + ", expected " +
                std::to_string(expected[i][0]) + "x" + std::to_string(expected[i][1]));
    }
  }
  if (has_projection_ &&
      (projection_.rows() != config_.d_embed || projection_.cols() != config_.projection_dim())) {
    Throw(ErrorKind::kConsistency, "projection matrix shape does not match the strategy");
  }
  if (has_projection_ && projection_.trainable != IsReduced(config_.strategy)) {
    Throw(ErrorKind::kConsistency,
          "projection must be trainable exactly for the reduced strategies");
  }
}

const ProjectionMatrix* ReferenceBackbone::projection() const {
  return has_projection_ ? &projection_ : nullptr;
}

void ReferenceBackbone::EncodeInto(const Frames& input, Cache* cache) const {
  if (input.empty()) Throw(ErrorKind::kInvalidInput, "empty encoder input");
  if (input.bins != config_.input_bins()) {
    Throw(ErrorKind::kInvalidInput,
          "encoder expects " + std::to_string(config_.input_bins()) +
              " frequency bins, got " + std::to_string(input.bins));
  }
  if (input.data.size() != static_cast<size_t>(input.bins) * input.frames) {
    Throw(ErrorKind::kInvalidInput, "frame data size does not match bins x frames");
  }
  const int S = config_.d_s;
  const int T = config_.d_t;
  const int ST = S * T;
  const int c1 = config_.conv1_channels;
  // Short inputs are tiled, long inputs truncated, to 2 * d_t frames.
  auto frame = [&](int f) { return f % input.frames; };

  cache->p1.resize(ST, 4);
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      const int r = s * T + t;
      cache->p1(r, 0) = input.at(2 * s, frame(2 * t));
      cache->p1(r, 1) = input.at(2 * s, frame(2 * t + 1));
      cache->p1(r, 2) = input.at(2 * s + 1, frame(2 * t));
      cache->p1(r, 3) = input.at(2 * s + 1, frame(2 * t + 1));
    }
  }
  cache->z1.noalias() = cache->p1 * dense_[kConv1W];
  cache->z1.rowwise() += dense_[kConv1B].row(0);
  const Eigen::MatrixXd a1 = Relu(cache->z1);

  cache->p2.setZero(ST, 3 * c1);
  for (int s = 0; s < S; ++s) {
    for (int k = 0; k < 3; ++k) {
      const int src = s + k - 1;
      if (src < 0 || src >= S) continue;
      cache->p2.block(s * T, k * c1, T, c1) = a1.block(src * T, 0, T, c1);
    }
  }
  cache->z2.noalias() = cache->p2 * dense_[kConv2W];
  cache->z2.rowwise() += dense_[kConv2B].row(0);
  cache->a2 = Relu(cache->z2);
  cache->z3.noalias() = cache->a2 * dense_[kConv3W];
  cache->z3.rowwise() += dense_[kConv3B].row(0);
}

FeatureMap ReferenceBackbone::ToFeatureMap(const Eigen::MatrixXd& z3) const {
  const int S = config_.d_s;
  const int T = config_.d_t;
  FeatureMap fm(config_.encoder_shape());
  for (int c = 0; c < config_.d_c; ++c)
    for (int s = 0; s < S; ++s)
      for (int t = 0; t < T; ++t) fm.at(c, s, t) = std::max(0.0, z3(s * T + t, c));
  return fm;
}

FeatureMap ReferenceBackbone::Encode(const Frames& input) const {
  Cache cache;
  EncodeInto(input, &cache);
  return ToFeatureMap(cache.z3);
}

void ReferenceBackbone::PoolInto(const FeatureMap& fm, Cache* cache) const {
  const Shape3& shape = fm.shape();
  const Eigen::MatrixXd& wc = dense_[kMixChannel];
  const Eigen::MatrixXd& ws = dense_[kMixSpectral];
  if (shape.channel != wc.rows() || shape.spectral != ws.rows()) {
    Throw(ErrorKind::kContractViolation,
          "pooling is configured for " + std::to_string(wc.rows()) + " channels x " +
              std::to_string(ws.rows()) + " spectral bins, got " + ToString(shape));
  }
  if (!fm.AllFinite()) Throw(ErrorKind::kNumeric, "non-finite value in feature map");
  cache->pooled.resize(shape.channel, shape.spectral);
  const double inv_t = 1.0 / shape.temporal;
  const double* src = fm.data().data();
  for (int c = 0; c < shape.channel; ++c) {
    for (int s = 0; s < shape.spectral; ++s) {
      double acc = 0.0;
      for (int t = 0; t < shape.temporal; ++t) acc += *src++;
      cache->pooled(c, s) = acc * inv_t;
    }
  }
  cache->mixed_c.noalias() = wc.transpose() * cache->pooled;
  cache->mixed.noalias() = cache->mixed_c * ws;
}

namespace {

std::vector<double> FlattenRelu(const Eigen::MatrixXd& mixed) {
  std::vector<double> v(mixed.size());
  size_t i = 0;
  for (int h = 0; h < mixed.rows(); ++h)
    for (int k = 0; k < mixed.cols(); ++k) v[i++] = std::max(0.0, mixed(h, k));
  return v;
}

Eigen::Vector2d FcLogits(const Eigen::MatrixXd& w, const Eigen::MatrixXd& b,
                         std::span<const double> v) {
  Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::Vector2d logits = w.transpose() * x;
  logits += b.row(0).transpose();
  return logits;
}

}  // namespace

std::vector<double> ReferenceBackbone::PoolToUtterance(const FeatureMap& fm) const {
  Cache cache;
  PoolInto(fm, &cache);
  return FlattenRelu(cache.mixed);
}

double ReferenceBackbone::Classify(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != dense_[kFcW].rows()) {
    Throw(ErrorKind::kContractViolation,
          "FC layer expects " + std::to_string(dense_[kFcW].rows()) + " inputs, got " +
              std::to_string(v.size()));
  }
  Eigen::Vector2d logits = FcLogits(dense_[kFcW], dense_[kFcB], v);
  return logits(0) - logits(1);
}

Eigen::Vector2d ReferenceBackbone::ForwardLogits(const Frames& input,
                                                 std::span<const double> enrollment,
                                                 Cache* cache) const {
  Cache local;
  if (!cache) cache = &local;
  const Strategy strategy = config_.strategy;
  if (strategy != Strategy::kBaseline &&
      static_cast<int>(enrollment.size()) != config_.d_embed) {
    Throw(ErrorKind::kContractViolation,
          "enrollment has dimension " + std::to_string(enrollment.size()) +
              ", model expects " + std::to_string(config_.d_embed));
  }
  EncodeInto(input, cache);
  FeatureMap fm = ToFeatureMap(cache->z3);
  if (InsertionPointOf(strategy) == InsertionPoint::kEncoderOutput) {
    fm = std::get<FeatureMap>(ApplyStrategy(strategy, InsertionPoint::kEncoderOutput,
                                            std::move(fm), enrollment, &projection_,
                                            config_.utterance_dim));
  }
  PoolInto(fm, cache);
  std::vector<double> v = FlattenRelu(cache->mixed);
  if (strategy == Strategy::kUtterance) {
    v = ConcatUtterance(v, enrollment, config_.utterance_dim, config_.d_embed);
  }
  cache->fc_input = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  if (strategy == Strategy::kBaseline) {
    cache->enrollment.clear();
  } else {
    cache->enrollment.assign(enrollment.begin(), enrollment.end());
  }
  if (static_cast<int>(v.size()) != dense_[kFcW].rows()) {
    Throw(ErrorKind::kContractViolation, "FC input size mismatch");
  }
  return FcLogits(dense_[kFcW], dense_[kFcB], v);
}

void ReferenceBackbone::Backward(const Cache& cache, const Eigen::Vector2d& dlogits,
                                 std::vector<Eigen::MatrixXd>* grads) const {
  auto& g = *grads;
  const int S = config_.d_s;
  const int T = config_.d_t;
  const int c1 = config_.conv1_channels;

  // FC head.
  g[kFcW].noalias() += cache.fc_input * dlogits.transpose();
  g[kFcB] += dlogits.transpose();
  const Eigen::VectorXd du = dense_[kFcW] * dlogits;

  // Mixing layer; only the first utterance_dim inputs come from the pooling.
  const Eigen::MatrixXd& wc = dense_[kMixChannel];
  const Eigen::MatrixXd& ws = dense_[kMixSpectral];
  const int hc = static_cast<int>(cache.mixed.rows());
  const int hs = static_cast<int>(cache.mixed.cols());
  Eigen::MatrixXd dmixed(hc, hs);
  for (int h = 0; h < hc; ++h)
    for (int k = 0; k < hs; ++k)
      dmixed(h, k) = cache.mixed(h, k) > 0.0 ? du(h * hs + k) : 0.0;
  g[kMixSpectral].noalias() += cache.mixed_c.transpose() * dmixed;
  const Eigen::MatrixXd dmixed_c = dmixed * ws.transpose();
  g[kMixChannel].noalias() += cache.pooled * dmixed_c.transpose();
  const Eigen::MatrixXd dpooled = wc * dmixed_c;

  // Attached block -> projection. The enrollment itself is a constant.
  if (has_projection_ && projection_.trainable) {
    const int dp = projection_.cols();
    Eigen::VectorXd dproj(dp);
    if (AttachAxisOf(config_.strategy) == Axis::kChannel) {
      dproj = dpooled.block(config_.d_c, 0, dp, S).rowwise().sum();
    } else {
      dproj = dpooled.block(0, S, config_.d_c, dp).colwise().sum().transpose();
    }
    Eigen::Map<const Eigen::VectorXd> e(cache.enrollment.data(),
                                        static_cast<Eigen::Index>(cache.enrollment.size()));
    g[kNumDenseParams].noalias() += e * dproj.transpose();
  }

  // Temporal mean -> encoder output (d_c x d_s block of the pooled map).
  Eigen::MatrixXd dz3(S * T, config_.d_c);
  const double inv_t = 1.0 / T;
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      const int r = s * T + t;
      for (int c = 0; c < config_.d_c; ++c) {
        dz3(r, c) = cache.z3(r, c) > 0.0 ? dpooled(c, s) * inv_t : 0.0;
      }
    }
  }
  g[kConv3W].noalias() += cache.a2.transpose() * dz3;
  g[kConv3B] += dz3.colwise().sum();
  Eigen::MatrixXd dz2 = (dz3 * dense_[kConv3W].transpose()).cwiseProduct(ReluMask(cache.z2));
  g[kConv2W].noalias() += cache.p2.transpose() * dz2;
  g[kConv2B] += dz2.colwise().sum();
  const Eigen::MatrixXd dp2 = dz2 * dense_[kConv2W].transpose();
  Eigen::MatrixXd da1 = Eigen::MatrixXd::Zero(S * T, c1);
  for (int s = 0; s < S; ++s) {
    for (int k = 0; k < 3; ++k) {
      const int src = s + k - 1;
      if (src < 0 || src >= S) continue;
      da1.block(src * T, 0, T, c1) += dp2.block(s * T, k * c1, T, c1);
    }
  }
  const Eigen::MatrixXd dz1 = da1.cwiseProduct(ReluMask(cache.z1));
  g[kConv1W].noalias() += cache.p1.transpose() * dz1;
  g[kConv1B] += dz1.colwise().sum();
}

std::vector<Eigen::MatrixXd*> ReferenceBackbone::TrainableParameters() {
  std::vector<Eigen::MatrixXd*> out;
  for (auto& m : dense_) out.push_back(&m);
  if (has_projection_ && projection_.trainable) out.push_back(&projection_.weights);
  return out;
}

std::vector<const Eigen::MatrixXd*> ReferenceBackbone::TrainableParameters() const {
  std::vector<const Eigen::MatrixXd*> out;
  for (const auto& m : dense_) out.push_back(&m);
  if (has_projection_ && projection_.trainable) out.push_back(&projection_.weights);
  return out;
}

std::vector<std::string> ReferenceBackbone::ParameterNames() const {
  std::vector<std::string> names = {"conv1.weight", "conv1.bias",  "conv2.weight",
                                    "conv2.bias",   "conv3.weight", "conv3.bias",
                                    "mix.channel",  "mix.spectral", "fc.weight",
                                    "fc.bias"};
  if (has_projection_ && projection_.trainable) names.push_back("projection");
  return names;
}

std::vector<Eigen::MatrixXd> ReferenceBackbone::ZeroGradients() const {
  std::vector<Eigen::MatrixXd> grads;
  for (const auto* p : TrainableParameters()) {
    grads.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
  }
  return grads;
}

double WeightedCrossEntropy(const Eigen::Vector2d& logits, int label, double weight,
                            Eigen::Vector2d* dlogits) {
  const double m = logits.maxCoeff();
  const double e0 = std::exp(logits(0) - m);
  const double e1 = std::exp(logits(1) - m);
  const double z = e0 + e1;
  const Eigen::Vector2d p(e0 / z, e1 / z);
  const double loss = -(logits(label) - m - std::log(z));
  if (dlogits) {
    *dlogits = p;
    (*dlogits)(label) -= 1.0;
    *dlogits *= weight;
  }
  return weight * loss;
}

}  // namespace spkaware
