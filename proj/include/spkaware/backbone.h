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

#ifndef SPKAWARE_BACKBONE_H_
#define SPKAWARE_BACKBONE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spkaware/conditioning.h"
#include "spkaware/embeddings.h"
#include "spkaware/features.h"

namespace spkaware {

struct BackboneConfig {
  // Encoder output shape.
  int d_c = 64;
  int d_s = 23;
  int d_t = 29;
  // Length of the utterance-level vector feeding the FC layer.
  int utterance_dim = 160;
  int d_embed = kDefaultEmbedDim;
  int batch_size = 12;
  Strategy strategy = Strategy::kBaseline;

  // Reference backbone internals.
  int conv1_channels = 8;
  int conv2_channels = 16;
  int mix_channels = 8;  // must divide utterance_dim
  double projection_init_std = 0.02;

  void Validate() const;  // throws kConfiguration

  int input_bins() const { return 2 * d_s; }
  int input_frames() const { return 2 * d_t; }
  int mix_spectral() const { return utterance_dim / mix_channels; }
  Shape3 encoder_shape() const { return {d_c, d_s, d_t}; }
  // Shape after the encoder-output hook of the configured strategy.
  Shape3 conditioned_shape() const;
  int fc_input_dim() const;
  // Output dimension of the projection for enc-* strategies, 0 otherwise.
  int projection_dim() const;
};

struct CmScore {
  std::string utterance_id;
  double score = 0.0;  // higher means more bonafide
};

// Countermeasure contract with the two strategy insertion points. A real
// AASIST implementation can be wired in by implementing this interface.
class CountermeasureBackbone {
 public:
  virtual ~CountermeasureBackbone() = default;
  virtual const BackboneConfig& config() const = 0;
  virtual FeatureMap Encode(const Frames& input) const = 0;
  virtual std::vector<double> PoolToUtterance(const FeatureMap& fm) const = 0;
  // logit(bonafide) - logit(spoof).
  virtual double Classify(std::span<const double> v) const = 0;
  // Projection applied before attachment; null for baseline and utterance.
  virtual const ProjectionMatrix* projection() const = 0;
};

struct ForwardTrace {
  Shape3 encoder_output;
  Shape3 conditioned;
  int utterance_dim = 0;
  int fc_input_dim = 0;
};

// encode -> encoder-output hook -> pool -> FC-input hook -> classify.
// The baseline never reads `enrollment`.
double Forward(const CountermeasureBackbone& model, const Frames& input,
               std::span<const double> enrollment, ForwardTrace* trace = nullptr);
CmScore Forward(const CountermeasureBackbone& model, const std::string& utterance_id,
                const Frames& input, const EnrollmentProfile& enrollment);

// Small trainable countermeasure:
//   conv 2x2/2 (1 -> conv1) -> ReLU -> conv 3x1 (conv1 -> conv2) -> ReLU ->
//   conv 1x1 (conv2 -> d_c) -> ReLU                    => (d_c, d_s, d_t)
//   [encoder-output hook]
//   temporal mean -> G (C' x S'); phi = ReLU(Wc^T G Ws) flattened
//                                                      => utterance_dim
//   [FC-input hook]
//   linear -> 2 logits; score = logit(bonafide) - logit(spoof)
// The mixing matrices Wc (C' x mix_channels) and Ws (S' x mix_spectral) are
// sized for the post-attachment extents C', S' of the configured strategy.
class ReferenceBackbone : public CountermeasureBackbone {
 public:
  enum ParamIndex {
    kConv1W, kConv1B, kConv2W, kConv2B, kConv3W, kConv3B,
    kMixChannel, kMixSpectral, kFcW, kFcB, kNumDenseParams
  };

  ReferenceBackbone(const BackboneConfig& config, uint64_t seed);
  ReferenceBackbone(const BackboneConfig& config, std::vector<Eigen::MatrixXd> dense,
                    ProjectionMatrix projection);

  const BackboneConfig& config() const override { return config_; }
  FeatureMap Encode(const Frames& input) const override;
  std::vector<double> PoolToUtterance(const FeatureMap& fm) const override;
  double Classify(std::span<const double> v) const override;
  const ProjectionMatrix* projection() const override;

  // Intermediates of one forward pass, kept for back-propagation.
  struct Cache {
    Eigen::MatrixXd p1, z1, p2, z2, a2, z3;
    Eigen::MatrixXd pooled;   // G
    Eigen::MatrixXd mixed_c;  // Wc^T G
    Eigen::MatrixXd mixed;    // Wc^T G Ws (pre-activation)
    Eigen::VectorXd fc_input;
    std::vector<double> enrollment;
  };

  // Logits (bonafide, spoof). `cache` may be null.
  Eigen::Vector2d ForwardLogits(const Frames& input, std::span<const double> enrollment,
                                Cache* cache) const;
  // Accumulates d(loss)/d(param) into `grads` (aligned with ParameterNames()).
  void Backward(const Cache& cache, const Eigen::Vector2d& dlogits,
                std::vector<Eigen::MatrixXd>* grads) const;

  // Trainable tensors in a fixed order; the projection is included only for
  // the reduced strategies.
  std::vector<Eigen::MatrixXd*> TrainableParameters();
  std::vector<const Eigen::MatrixXd*> TrainableParameters() const;
  std::vector<std::string> ParameterNames() const;
  std::vector<Eigen::MatrixXd> ZeroGradients() const;

  const std::vector<Eigen::MatrixXd>& dense() const { return dense_; }
  std::vector<Eigen::MatrixXd>& mutable_dense() { return dense_; }
  const ProjectionMatrix& projection_matrix() const { return projection_; }
  ProjectionMatrix& mutable_projection() { return projection_; }
  bool has_projection() const { return has_projection_; }

 private:
  void CheckShapes() const;
  // Encoder body; fills p1/z1/p2/z2/a2/z3 in `cache`.
  void EncodeInto(const Frames& input, Cache* cache) const;
  FeatureMap ToFeatureMap(const Eigen::MatrixXd& z3) const;
  void PoolInto(const FeatureMap& fm, Cache* cache) const;

  BackboneConfig config_;
  std::vector<Eigen::MatrixXd> dense_;
  ProjectionMatrix projection_;
  bool has_projection_ = false;
};

// Softmax cross-entropy of one example, weighted; returns the loss and writes
// d(loss)/d(logits).
double WeightedCrossEntropy(const Eigen::Vector2d& logits, int label, double weight,
                            Eigen::Vector2d* dlogits);

}  // namespace spkaware

#endif  // SPKAWARE_BACKBONE_H_
