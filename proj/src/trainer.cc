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

#include "spkaware/trainer.h"

#include <cmath>
#include <numeric>
#include <set>

#include "spkaware/error.h"
#include "spkaware/metrics.h"
#include "spkaware/rng.h"

namespace spkaware {

void OptimizerSettings::Validate() const {
  if (epochs < 0) Throw(ErrorKind::kConfiguration, "epochs must be >= 0");
  if (!(learning_rate > 0.0)) Throw(ErrorKind::kConfiguration, "learning rate must be positive");
  if (!(weight_decay >= 0.0)) Throw(ErrorKind::kConfiguration, "weight decay must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    Throw(ErrorKind::kConfiguration, "Adam betas must be in [0,1)");
  }
  if (!(epsilon > 0.0)) Throw(ErrorKind::kConfiguration, "Adam epsilon must be positive");
}

ExternalEnrollment ParseExternalEnrollment(const std::string& name) {
  if (name == "corpus-mean") return ExternalEnrollment::kCorpusMean;
  if (name == "zero") return ExternalEnrollment::kZero;
  Throw(ErrorKind::kInvalidInput,
        "unknown external enrollment '" + name + "' (expected corpus-mean or zero)");
}

const char* ExternalEnrollmentName(ExternalEnrollment e) {
  return e == ExternalEnrollment::kCorpusMean ? "corpus-mean" : "zero";
}

ProfileMap IndexProfiles(const std::vector<EnrollmentProfile>& profiles) {
  ProfileMap map;
  for (const auto& p : profiles) {
    if (!map.emplace(p.speaker_id, p).second) {
      Throw(ErrorKind::kConsistency, "duplicate enrollment profile for " + p.speaker_id);
    }
  }
  return map;
}

std::vector<TrainingExample> BuildExamples(const std::vector<Trial>& trials,
                                           const ProfileMap& profiles,
                                           const FeatureArchive& features, int d_embed,
                                           bool need_enrollment, ExternalEnrollment external) {
  std::vector<double> external_vec;
  std::set<std::string> missing;
  if (need_enrollment) {
    for (const auto& t : trials) {
      if (!t.external() && !profiles.count(t.claimed_speaker_id)) missing.insert(t.claimed_speaker_id);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
      Throw(ErrorKind::kConfiguration, "no enrollment profile for speakers: " + list);
    }
    for (const auto& [spk, p] : profiles) {
      if (static_cast<int>(p.embedding.size()) != d_embed) {
        Throw(ErrorKind::kContractViolation,
              "enrollment of " + spk + " has dimension " + std::to_string(p.embedding.size()) +
                  ", model expects " + std::to_string(d_embed));
      }
    }
    if (external == ExternalEnrollment::kZero || profiles.empty()) {
      external_vec.assign(d_embed, 0.0);
    } else {
      std::vector<EnrollmentProfile> all;
      for (const auto& [spk, p] : profiles) all.push_back(p);
      external_vec = CorpusMeanEmbedding(all);
    }
  }

  std::vector<TrainingExample> out;
  out.reserve(trials.size());
  for (const auto& t : trials) {
    TrainingExample ex;
    ex.utterance_id = t.utterance_id;
    ex.frames = &features.Get(t.utterance_id);
    ex.label = t.key == Key::kBonafide ? kLabelBonafide : kLabelSpoof;
    if (need_enrollment) {
      ex.enrollment = t.external() ? external_vec : profiles.at(t.claimed_speaker_id).embedding;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<std::pair<std::string, double>> ScoreExamples(
    const CountermeasureBackbone& model, const std::vector<TrainingExample>& examples) {
  std::vector<std::pair<std::string, double>> scores;
  scores.reserve(examples.size());
  for (const auto& ex : examples) {
    const double s = Forward(model, *ex.frames, ex.enrollment);
    if (!std::isfinite(s)) Throw(ErrorKind::kNumeric, "non-finite score for " + ex.utterance_id);
    scores.emplace_back(ex.utterance_id, s);
  }
  return scores;
}

double ExamplesEer(const CountermeasureBackbone& model,
                   const std::vector<TrainingExample>& examples) {
  const auto scores = ScoreExamples(model, examples);
  std::vector<ScoredTrial> st(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    st[i] = {scores[i].second, examples[i].label == kLabelBonafide ? Key::kBonafide : Key::kSpoof};
  }
  return 100.0 * ComputeEer(st).eer;
}

namespace {

struct AdamState {
  std::vector<Eigen::MatrixXd> m, v;
  long long step = 0;
};

void AdamUpdate(const OptimizerSettings& opt, const std::vector<Eigen::MatrixXd>& grads,
                std::vector<Eigen::MatrixXd*> params, AdamState* state) {
  if (state->m.empty()) {
    for (auto* p : params) {
      state->m.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
      state->v.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
    }
  }
  state->step++;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(state->step));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(state->step));
  for (size_t i = 0; i < params.size(); ++i) {
    Eigen::MatrixXd g = grads[i] + opt.weight_decay * (*params[i]);
    state->m[i] = opt.beta1 * state->m[i] + (1.0 - opt.beta1) * g;
    state->v[i] = opt.beta2 * state->v[i] + (1.0 - opt.beta2) * g.cwiseProduct(g);
    const Eigen::ArrayXXd denom = (state->v[i].array() / bc2).sqrt() + opt.epsilon;
    *params[i] -= (opt.learning_rate * (state->m[i].array() / bc1) / denom).matrix();
  }
}

}  // namespace

TrainResult Train(const BackboneConfig& config, const std::vector<TrainingExample>& train,
                  const std::vector<TrainingExample>& dev, const OptimizerSettings& opt,
                  uint64_t seed, const std::function<void(const EpochLog&)>& progress) {
  config.Validate();
  opt.Validate();
  if (train.empty()) Throw(ErrorKind::kInvalidInput, "training set is empty");
  size_t count[2] = {0, 0};
  for (const auto& ex : train) {
    if (ex.label != kLabelBonafide && ex.label != kLabelSpoof) {
      Throw(ErrorKind::kInvalidInput, "bad label for " + ex.utterance_id);
    }
    count[ex.label]++;
  }
  if (count[0] == 0 || count[1] == 0) {
    Throw(ErrorKind::kInvalidInput, "training set must contain both bonafide and spoof trials");
  }
  const double n = static_cast<double>(train.size());
  const double class_weight[2] = {n / (2.0 * count[0]), n / (2.0 * count[1])};

  RngStream root(seed, "train");
  ReferenceBackbone model(config, seed);
  RngStream batching = root.Split("batching");
  AdamState adam;

  TrainResult result{model, model, 0, {}, seed};
  double best_eer = INFINITY;
  const bool has_dev = !dev.empty();

  std::vector<size_t> order(train.size());
  const size_t batch = static_cast<size_t>(config.batch_size);
  ReferenceBackbone::Cache cache;
  for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    batching.Shuffle(&order);
    double epoch_loss = 0.0, epoch_weight = 0.0;
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      double wsum = 0.0;
      for (size_t i = start; i < end; ++i) wsum += class_weight[train[order[i]].label];
      auto grads = model.ZeroGradients();
      double batch_loss = 0.0;
      for (size_t i = start; i < end; ++i) {
        const TrainingExample& ex = train[order[i]];
        const Eigen::Vector2d logits = model.ForwardLogits(*ex.frames, ex.enrollment, &cache);
        Eigen::Vector2d dlogits;
        batch_loss += WeightedCrossEntropy(logits, ex.label, class_weight[ex.label] / wsum, &dlogits);
        model.Backward(cache, dlogits, &grads);
      }
      if (!std::isfinite(batch_loss)) {
        Throw(ErrorKind::kNumeric, "loss became non-finite in epoch " + std::to_string(epoch));
      }
      epoch_loss += batch_loss * wsum;
      epoch_weight += wsum;
      AdamUpdate(opt, grads, model.TrainableParameters(), &adam);
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss / epoch_weight;
    entry.dev_eer = has_dev ? ExamplesEer(model, dev) : NAN;
    result.log.push_back(entry);
    if (!has_dev || entry.dev_eer < best_eer) {
      best_eer = has_dev ? entry.dev_eer : best_eer;
      result.best_model = model;
      result.best_epoch = epoch;
    }
    if (progress) progress(entry);
  }
  result.final_model = model;
  return result;
}

}  // namespace spkaware
