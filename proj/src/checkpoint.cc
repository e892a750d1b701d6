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

#include "spkaware/checkpoint.h"

#include <cmath>

#include "spkaware/error.h"
#include "spkaware/io.h"

namespace spkaware {

using nlohmann::json;

json ConfigToJson(const BackboneConfig& c) {
  return json{{"d_c", c.d_c},
              {"d_s", c.d_s},
              {"d_t", c.d_t},
              {"utterance_dim", c.utterance_dim},
              {"d_embed", c.d_embed},
              {"batch_size", c.batch_size},
              {"strategy", std::string(StrategyName(c.strategy))},
              {"conv1_channels", c.conv1_channels},
              {"conv2_channels", c.conv2_channels},
              {"mix_channels", c.mix_channels},
              {"projection_init_std", c.projection_init_std}};
}

void ConfigFromJson(const json& j, BackboneConfig* c) {
  if (!j.is_object()) Throw(ErrorKind::kParse, "backbone config must be an object");
  for (const auto& [key, value] : j.items()) {
    auto as_int = [&, &key = key, &value = value]() {
      if (!value.is_number_integer()) Throw(ErrorKind::kParse, "config field '" + key + "' must be an integer");
      return value.get<int>();
    };
    if (key == "d_c") c->d_c = as_int();
    else if (key == "d_s") c->d_s = as_int();
    else if (key == "d_t") c->d_t = as_int();
    else if (key == "utterance_dim") c->utterance_dim = as_int();
    else if (key == "d_embed") c->d_embed = as_int();
    else if (key == "batch_size") c->batch_size = as_int();
    else if (key == "conv1_channels") c->conv1_channels = as_int();
    else if (key == "conv2_channels") c->conv2_channels = as_int();
    else if (key == "mix_channels") c->mix_channels = as_int();
    else if (key == "projection_init_std") {
      if (!value.is_number()) Throw(ErrorKind::kParse, "config field 'projection_init_std' must be a number");
      c->projection_init_std = value.get<double>();
    } else if (key == "strategy") {
      if (!value.is_string()) Throw(ErrorKind::kParse, "config field 'strategy' must be a string");
      c->strategy = ParseStrategy(value.get<std::string>());
    } else {
      Throw(ErrorKind::kParse, "unknown backbone config field '" + key + "'");
    }
  }
}

namespace {

json MatrixToJson(const Eigen::MatrixXd& m) {
  std::vector<double> data(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data[r * m.cols() + c] = m(r, c);
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd MatrixFromJson(const json& j, const std::string& name) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<size_t>(rows * cols) != data.size()) {
      Throw(ErrorKind::kParse, "weight '" + name + "' has inconsistent size");
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
    return m;
  } catch (const json::exception& e) {
    Throw(ErrorKind::kParse, "weight '" + name + "': " + e.what());
  }
}

}  // namespace

json ModelToJson(const ReferenceBackbone& model) {
  json j = json::object();
  static const char* kNames[] = {"conv1.weight", "conv1.bias", "conv2.weight", "conv2.bias",
                                 "conv3.weight", "conv3.bias", "mix.channel", "mix.spectral",
                                 "fc.weight", "fc.bias"};
  for (int i = 0; i < ReferenceBackbone::kNumDenseParams; ++i) {
    j[kNames[i]] = MatrixToJson(model.dense()[i]);
  }
  if (model.has_projection()) {
    const ProjectionMatrix& p = model.projection_matrix();
    if (p.identity) {
      j["projection"] = json{{"kind", "identity"}, {"dim", p.rows()}};
    } else {
      json pj = MatrixToJson(p.weights);
      pj["kind"] = "reduced";
      pj["trainable"] = p.trainable;
      j["projection"] = pj;
    }
  }
  return j;
}

ReferenceBackbone ModelFromJson(const BackboneConfig& config, const json& j) {
  static const char* kNames[] = {"conv1.weight", "conv1.bias", "conv2.weight", "conv2.bias",
                                 "conv3.weight", "conv3.bias", "mix.channel", "mix.spectral",
                                 "fc.weight", "fc.bias"};
  if (!j.is_object()) Throw(ErrorKind::kParse, "weights must be an object");
  std::vector<Eigen::MatrixXd> dense;
  for (const char* name : kNames) {
    if (!j.contains(name)) Throw(ErrorKind::kParse, std::string("missing weight '") + name + "'");
    dense.push_back(MatrixFromJson(j.at(name), name));
  }
  ProjectionMatrix projection;
  if (j.contains("projection")) {
    const json& pj = j.at("projection");
    const std::string kind = pj.value("kind", "");
    if (kind == "identity") {
      projection = ProjectionMatrix::Identity(pj.value("dim", 0));
    } else if (kind == "reduced") {
      projection.weights = MatrixFromJson(pj, "projection");
      projection.trainable = pj.value("trainable", true);
    } else {
      Throw(ErrorKind::kParse, "unknown projection kind '" + kind + "'");
    }
  } else if (AttachAxisOf(config.strategy)) {
    Throw(ErrorKind::kParse, "weights lack the projection required by " +
                                 std::string(StrategyName(config.strategy)));
  }
  return ReferenceBackbone(config, std::move(dense), std::move(projection));
}

Checkpoint MakeCheckpoint(const BackboneConfig& config, const TrainResult& result) {
  Checkpoint c;
  c.config = config;
  c.seed = result.seed;
  c.best_epoch = result.best_epoch;
  c.log = result.log;
  c.weights_final = ModelToJson(result.final_model);
  c.weights_best = ModelToJson(result.best_model);
  return c;
}

std::string FormatCheckpoint(const Checkpoint& c) {
  json log = json::array();
  for (const auto& e : c.log) {
    log.push_back(json{{"epoch", e.epoch},
                       {"train_loss", e.train_loss},
                       {"dev_eer", std::isnan(e.dev_eer) ? json(nullptr) : json(e.dev_eer)}});
  }
  json j{{"format", kCheckpointFormat},
         {"version", kCheckpointVersion},
         {"strategy", std::string(StrategyName(c.config.strategy))},
         {"seed", c.seed},
         {"config", ConfigToJson(c.config)},
         {"external_enrollment", c.external_enrollment},
         {"best_epoch", c.best_epoch},
         {"log", log},
         {"weights", json{{"final", c.weights_final}, {"best", c.weights_best}}}};
  return j.dump(1) + "\n";
}

Checkpoint ParseCheckpoint(const std::string& content, const std::string& source) {
  json j;
  try {
    j = json::parse(content);
  } catch (const json::exception& e) {
    Throw(ErrorKind::kParse, source + ": not valid JSON: " + e.what());
  }
  try {
    if (j.value("format", "") != kCheckpointFormat) {
      Throw(ErrorKind::kParse, source + ": not a checkpoint file");
    }
    if (!j.contains("version")) Throw(ErrorKind::kParse, source + ": checkpoint has no version");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      Throw(ErrorKind::kParse, source + ": unsupported checkpoint version " +
                                   std::to_string(version));
    }
    Checkpoint c;
    ConfigFromJson(j.at("config"), &c.config);
    if (j.at("strategy").get<std::string>() != StrategyName(c.config.strategy)) {
      Throw(ErrorKind::kConsistency, source + ": strategy field disagrees with config");
    }
    c.seed = j.at("seed").get<uint64_t>();
    c.best_epoch = j.at("best_epoch").get<int>();
    c.external_enrollment = j.value("external_enrollment", "corpus-mean");
    for (const auto& e : j.at("log")) {
      EpochLog entry;
      entry.epoch = e.at("epoch").get<int>();
      entry.train_loss = e.at("train_loss").get<double>();
      entry.dev_eer = e.at("dev_eer").is_null() ? NAN : e.at("dev_eer").get<double>();
      c.log.push_back(entry);
    }
    c.weights_final = j.at("weights").at("final");
    c.weights_best = j.at("weights").at("best");
    c.config.Validate();
    return c;
  } catch (const json::exception& e) {
    Throw(ErrorKind::kParse, source + ": malformed checkpoint: " + e.what());
  }
}

Checkpoint LoadCheckpoint(const std::string& path) {
  return ParseCheckpoint(ReadFileToString(path), path);
}

}  // namespace spkaware
