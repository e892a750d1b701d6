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

#ifndef SPKAWARE_CONDITIONING_H_
#define SPKAWARE_CONDITIONING_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace spkaware {

class RngStream;

// Speaker-information integration strategies. Names are the exact strings
// used in config files, CLI flags, checkpoints and reports.
enum class Strategy {
  kBaseline,
  kEncChan,
  kEncChanReduced,
  kEncSpec,
  kEncSpecReduced,
  kUtterance,
};

std::string_view StrategyName(Strategy s);
Strategy ParseStrategy(std::string_view name);  // throws kInvalidInput
const std::array<Strategy, 6>& AllStrategies();

enum class Axis { kChannel, kSpectral };
enum class InsertionPoint { kEncoderOutput, kFcInput };

// Where a strategy modifies the forward pass; nullopt for the baseline.
std::optional<InsertionPoint> InsertionPointOf(Strategy s);
std::optional<Axis> AttachAxisOf(Strategy s);
bool IsReduced(Strategy s);

struct Shape3 {
  int channel = 0;
  int spectral = 0;
  int temporal = 0;

  size_t size() const {
    return static_cast<size_t>(channel) * spectral * temporal;
  }
  friend bool operator==(const Shape3&, const Shape3&) = default;
};

std::string ToString(const Shape3& s);

// Encoder output with explicit (channel, spectral, temporal) axes, stored
// channel-major: index = (c * spectral + s) * temporal + t.
class FeatureMap {
 public:
  FeatureMap() = default;
  explicit FeatureMap(Shape3 shape, double fill = 0.0);
  FeatureMap(Shape3 shape, std::vector<double> data);

  const Shape3& shape() const { return shape_; }
  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }

  double at(int c, int s, int t) const { return data_[Index(c, s, t)]; }
  double& at(int c, int s, int t) { return data_[Index(c, s, t)]; }

  bool AllFinite() const;

 private:
  size_t Index(int c, int s, int t) const {
    return (static_cast<size_t>(c) * shape_.spectral + s) * shape_.temporal + t;
  }

  Shape3 shape_;
  std::vector<double> data_;
};

// A vector replicated along the two axes it does not occupy.
struct ConditioningTensor {
  Axis kind = Axis::kChannel;
  FeatureMap map;

  int embed_dim() const {
    return kind == Axis::kChannel ? map.shape().channel : map.shape().spectral;
  }
};

// Maps an enrollment embedding (d_embed) to the attached dimension. The
// identity variant is frozen; the reduced variant is learned jointly with
// the countermeasure.
struct ProjectionMatrix {
  Eigen::MatrixXd weights;  // rows = d_embed, cols = output dimension
  bool trainable = false;
  bool identity = false;

  static ProjectionMatrix Identity(int d_embed);
  // Entries i.i.d. N(0, stddev^2).
  static ProjectionMatrix Reduced(int d_embed, int out_dim, RngStream& rng,
                                  double stddev = 0.02);

  int rows() const { return static_cast<int>(weights.rows()); }
  int cols() const { return static_cast<int>(weights.cols()); }
};

// Row-vector times matrix. The identity variant returns the input bit-exactly.
std::vector<double> Project(std::span<const double> embedding, const ProjectionMatrix& p);

// Rep(): channel kind -> (d', d_s, d_t); spectral kind -> (d_c, d', d_t).
// For the channel kind d_c is ignored, for the spectral kind d_s is ignored.
ConditioningTensor RepExpand(std::span<const double> embedding, Axis kind, int d_c,
                             int d_s, int d_t);

// Concatenates along the conditioning axis, original features first.
FeatureMap Attach(const FeatureMap& feature_map, const ConditioningTensor& cond);

// [phi_test, phi_enrol].
std::vector<double> ConcatUtterance(std::span<const double> phi_test,
                                    std::span<const double> phi_enrol,
                                    int utterance_dim = 160, int d_embed = 192);

using Payload = std::variant<FeatureMap, std::vector<double>>;

// Applies `strategy` at `point`. The baseline is the identity at both points;
// an enc-* strategy is only valid at the encoder output and `utterance` only
// at the FC input. `projection` is required for the reduced strategies and
// ignored otherwise.
Payload ApplyStrategy(Strategy strategy, InsertionPoint point, Payload payload,
                      std::span<const double> enrollment,
                      const ProjectionMatrix* projection = nullptr,
                      int utterance_dim = 160);

}  // namespace spkaware

#endif  // SPKAWARE_CONDITIONING_H_
