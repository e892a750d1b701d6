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

// Central finite-difference check of the reference backbone gradients.

#ifndef SPKAWARE_TESTS_GRADCHECK_H_
#define SPKAWARE_TESTS_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spkaware/backbone.h"
#include "spkaware/rng.h"

namespace gradcheck {

struct Example {
  spkaware::Frames frames;
  std::vector<double> enrollment;
  int label = 0;
  double weight = 1.0;
};

inline spkaware::Frames RandomFrames(spkaware::RngStream& rng, int bins, int frames) {
  spkaware::Frames f;
  f.bins = bins;
  f.frames = frames;
  f.data.resize(static_cast<size_t>(bins) * frames);
  for (auto& x : f.data) x = static_cast<float>(rng.Normal());
  return f;
}

inline std::vector<double> RandomVector(spkaware::RngStream& rng, int n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * rng.Normal();
  return v;
}

inline std::vector<Example> RandomBatch(spkaware::RngStream& rng,
                                        const spkaware::BackboneConfig& cfg, int n) {
  std::vector<Example> batch;
  for (int i = 0; i < n; ++i) {
    Example e;
    e.frames = RandomFrames(rng, cfg.input_bins(), cfg.input_frames());
    e.enrollment = RandomVector(rng, cfg.d_embed);
    e.label = i % 2;
    e.weight = 0.5 + rng.Uniform();
    batch.push_back(std::move(e));
  }
  return batch;
}

// Biases start at zero, which puts all-zero ReLU inputs exactly on the kink.
// Moving every bias off zero gives a point where the loss is differentiable.
inline void RandomizeBiases(spkaware::ReferenceBackbone* model, spkaware::RngStream& rng) {
  using RB = spkaware::ReferenceBackbone;
  for (int i : {RB::kConv1B, RB::kConv2B, RB::kConv3B, RB::kFcB}) {
    for (Eigen::Index k = 0; k < model->mutable_dense()[i].size(); ++k) {
      model->mutable_dense()[i].data()[k] = 0.1 * rng.Normal();
    }
  }
}

inline double BatchLoss(const spkaware::ReferenceBackbone& model,
                        const std::vector<Example>& batch) {
  double loss = 0.0;
  for (const auto& e : batch) {
    const Eigen::Vector2d logits = model.ForwardLogits(e.frames, e.enrollment, nullptr);
    loss += spkaware::WeightedCrossEntropy(logits, e.label, e.weight, nullptr);
  }
  return loss;
}

inline std::vector<Eigen::MatrixXd> AnalyticGradients(const spkaware::ReferenceBackbone& model,
                                                      const std::vector<Example>& batch) {
  auto grads = model.ZeroGradients();
  spkaware::ReferenceBackbone::Cache cache;
  for (const auto& e : batch) {
    const Eigen::Vector2d logits = model.ForwardLogits(e.frames, e.enrollment, &cache);
    Eigen::Vector2d d;
    spkaware::WeightedCrossEntropy(logits, e.label, e.weight, &d);
    model.Backward(cache, d, &grads);
  }
  return grads;
}

struct Result {
  std::string name;
  double relative_error = 0.0;
  size_t checked = 0;
};

// Relative error ||analytic - numeric|| / max(||analytic||, ||numeric||)
// over the checked entries of tensor `index`. At most `max_entries` entries
// are visited (evenly strided) when the tensor is larger.
inline Result CheckTensor(spkaware::ReferenceBackbone* model, const std::vector<Example>& batch,
                          size_t index, size_t max_entries = 1u << 30, double h = 1e-6) {
  const auto analytic = AnalyticGradients(*model, batch);
  auto params = model->TrainableParameters();
  Eigen::MatrixXd& p = *params[index];
  const size_t total = static_cast<size_t>(p.size());
  const size_t stride = std::max<size_t>(1, (total + max_entries - 1) / max_entries);
  double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
  Result r;
  r.name = model->ParameterNames()[index];
  for (size_t k = 0; k < total; k += stride) {
    double& w = p.data()[k];
    const double saved = w;
    w = saved + h;
    const double up = BatchLoss(*model, batch);
    w = saved - h;
    const double down = BatchLoss(*model, batch);
    w = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double a = analytic[index].data()[k];
    diff2 += (a - numeric) * (a - numeric);
    a2 += a * a;
    n2 += numeric * numeric;
    ++r.checked;
  }
  const double denom = std::max({std::sqrt(a2), std::sqrt(n2), 1e-300});
  r.relative_error = std::sqrt(diff2) / denom;
  return r;
}

}  // namespace gradcheck

#endif  // SPKAWARE_TESTS_GRADCHECK_H_
