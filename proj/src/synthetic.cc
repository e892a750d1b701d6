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

#include "spkaware/synthetic.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <Eigen/Dense>

#include "spkaware/error.h"
#include "spkaware/io.h"
#include "spkaware/rng.h"

namespace spkaware {

void SynthCorpusConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) Throw(ErrorKind::kConfiguration, "synthetic corpus: " + what);
  };
  require(latent_dim >= 1 && bins >= 2 && frames >= 2 && d_embed >= 1, "dimensions must be positive");
  require(train_speakers >= 2 && dev_speakers >= 2 && eval_speakers >= 2,
          "each partition needs at least two enrolled speakers");
  require(train_female >= 0 && train_female <= train_speakers && dev_female >= 0 &&
              dev_female <= dev_speakers && eval_female >= 0 && eval_female <= eval_speakers,
          "female counts out of range");
  require(train_bonafide >= std::max(n_female_enroll, n_male_enroll),
          "train_bonafide must cover the enrollment sample size");
  require(train_spoof >= 1 && dev_bonafide >= 1 && dev_spoof >= 1 && eval_bonafide >= 1 &&
              eval_spoof >= 1,
          "every partition needs bonafide and spoof trials");
  require(unenrolled_speakers >= 0 && unenrolled_bonafide >= 1, "bad unenrolled speaker counts");
  require(n_female_enroll >= 1 && n_male_enroll >= 1, "enrollment sizes must be positive");
  require(external_corpora >= 0 && external_speakers >= 0 && external_utterances >= 0,
          "external counts must be >= 0");
}

std::string AsvEnrollmentFileName(const std::string& partition, const std::string& sex) {
  return "ASVspoof2019.LA.asv." + partition + "." + sex + ".trn.txt";
}

namespace {

struct Generator {
  const SynthCorpusConfig& cfg;
  Eigen::MatrixXd a;  // d_embed x k
  Eigen::MatrixXd b;  // bins x k
  RngStream rng;
  SyntheticCorpus* out;

  Eigen::VectorXd Latent(RngStream& r) {
    Eigen::VectorXd z(cfg.latent_dim);
    for (int i = 0; i < z.size(); ++i) z(i) = r.Normal();
    return z;
  }

  Frames MakeFrames(const Eigen::VectorXd& z, RngStream& r) {
    const Eigen::VectorXd env = b * z;
    Frames f;
    f.bins = cfg.bins;
    f.frames = cfg.frames;
    f.data.resize(static_cast<size_t>(cfg.bins) * cfg.frames);
    for (int i = 0; i < cfg.bins; ++i)
      for (int t = 0; t < cfg.frames; ++t)
        f.data[static_cast<size_t>(i) * cfg.frames + t] =
            static_cast<float>(env(i) + cfg.frame_noise * r.Normal());
    return f;
  }

  void AddEmbedding(const std::string& utt, const std::string& spk, const Eigen::VectorXd& z,
                    RngStream& r) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.latent_dim));
    const Eigen::VectorXd e = a * z;
    SpeakerEmbedding emb;
    emb.utterance_id = utt;
    emb.speaker_id = spk;
    emb.values.resize(cfg.d_embed);
    for (int i = 0; i < cfg.d_embed; ++i) {
      emb.values[i] = scale * (e(i) + cfg.embedding_noise * r.Normal());
    }
    out->embeddings[utt] = std::move(emb);
  }

  void AddPartition(Partition part, const std::string& prefix, int first_speaker, int n_speakers,
                 int n_female, int n_bonafide, int n_spoof, int n_unenrolled,
                 const std::vector<std::string>& attacks, std::vector<Trial>* trials) {
    const std::string pname = PartitionName(part);
    RngStream prng = rng.Split(pname);
    int counter = 1000001;
    auto next_id = [&] { return prefix + std::to_string(counter++); };

    std::map<std::string, double> attack_scale;
    RngStream arng = rng.Split("attacks");
    for (const auto& atk : attacks) attack_scale[atk] = 0.8 + 0.4 * arng.Split(atk).Uniform();

    const int total = n_speakers + n_unenrolled;
    for (int s = 0; s < total; ++s) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "LA_%04d", first_speaker + s);
      const std::string spk = buf;
      const bool enrolled = s < n_speakers;
      const bool female = enrolled ? s < n_female : s % 2 == 0;
      out->sexes[spk] = female ? Sex::kFemale : Sex::kMale;
      RngStream srng = prng.Split(spk);
      const Eigen::VectorXd z_s = Latent(srng);

      const int n_bon = enrolled ? n_bonafide : cfg.unenrolled_bonafide;
      for (int u = 0; u < n_bon; ++u) {
        const Eigen::VectorXd z = z_s + cfg.bonafide_jitter * Latent(srng);
        Trial t;
        t.utterance_id = next_id();
        t.claimed_speaker_id = t.true_speaker_id = spk;
        t.key = Key::kBonafide;
        t.partition = part;
        out->features.Add(t.utterance_id, MakeFrames(z, srng));
        AddEmbedding(t.utterance_id, spk, z, srng);
        trials->push_back(std::move(t));
      }
      if (!enrolled) continue;
      for (int u = 0; u < n_spoof; ++u) {
        const std::string& atk = attacks[(s + u) % attacks.size()];
        Eigen::VectorXd dir = Latent(srng);
        dir /= std::max(dir.norm(), 1e-12);
        const Eigen::VectorXd z = z_s + cfg.spoof_displacement * attack_scale[atk] * dir;
        Trial t;
        t.utterance_id = next_id();
        t.claimed_speaker_id = t.true_speaker_id = spk;
        t.key = Key::kSpoof;
        t.attack_id = atk;
        t.partition = part;
        out->features.Add(t.utterance_id, MakeFrames(z, srng));
        AddEmbedding(t.utterance_id, spk, z, srng);
        trials->push_back(std::move(t));
      }
      if (part == Partition::kTrain) continue;
      // Separate enrollment recordings, as in the ASV enrollment lists.
      const int n_enroll = female ? cfg.n_female_enroll : cfg.n_male_enroll;
      std::vector<std::string>& list =
          out->asv_enrollment[pname][female ? "female" : "male"][spk];
      for (int u = 0; u < n_enroll; ++u) {
        const Eigen::VectorXd z = z_s + cfg.bonafide_jitter * Latent(srng);
        const std::string utt = next_id();
        AddEmbedding(utt, spk, z, srng);
        list.push_back(utt);
      }
    }
  }

  void External() {
    RngStream erng = rng.Split("external");
    for (int c = 0; c < cfg.external_corpora; ++c) {
      const std::string corpus = "EXT" + std::to_string(c + 1);
      for (int s = 0; s < cfg.external_speakers; ++s) {
        char spk[16];
        std::snprintf(spk, sizeof(spk), "s%03d", s + 1);
        RngStream srng = erng.Split(corpus + "/" + spk);
        const Eigen::VectorXd z_s = Latent(srng);
        for (int u = 0; u < cfg.external_utterances; ++u) {
          char utt[48];
          std::snprintf(utt, sizeof(utt), "%s_%s_%04d", corpus.c_str(), spk, u + 1);
          const Eigen::VectorXd z = z_s + cfg.bonafide_jitter * Latent(srng);
          out->features.Add(utt, MakeFrames(z, srng));
          out->external.push_back({corpus, spk, utt, std::string("synthetic://") + utt});
        }
      }
    }
  }
};

std::vector<std::string> AttackRange(int first, int last) {
  std::vector<std::string> out;
  for (int i = first; i <= last; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "A%02d", i);
    out.push_back(buf);
  }
  return out;
}

}  // namespace

SyntheticCorpus GenerateSyntheticCorpus(const SynthCorpusConfig& cfg) {
  cfg.Validate();
  SyntheticCorpus corpus;
  RngStream root(cfg.seed, "synthetic-corpus");
  Generator g{cfg, Eigen::MatrixXd(cfg.d_embed, cfg.latent_dim),
              Eigen::MatrixXd(cfg.bins, cfg.latent_dim), root, &corpus};
  RngStream mrng = root.Split("mixing");
  const double b_scale = 1.0 / std::sqrt(static_cast<double>(cfg.latent_dim));
  for (int i = 0; i < g.a.rows(); ++i)
    for (int j = 0; j < g.a.cols(); ++j) g.a(i, j) = mrng.Normal();
  for (int i = 0; i < g.b.rows(); ++i)
    for (int j = 0; j < g.b.cols(); ++j) g.b(i, j) = b_scale * mrng.Normal();

  const auto train_attacks = AttackRange(1, 6);
  const auto eval_attacks = AttackRange(7, 19);
  g.AddPartition(Partition::kTrain, "LA_T_", 1, cfg.train_speakers, cfg.train_female,
              cfg.train_bonafide, cfg.train_spoof, 0, train_attacks, &corpus.train);
  g.AddPartition(Partition::kDev, "LA_D_", 101, cfg.dev_speakers, cfg.dev_female, cfg.dev_bonafide,
              cfg.dev_spoof, cfg.unenrolled_speakers, train_attacks, &corpus.dev);
  g.AddPartition(Partition::kEval, "LA_E_", 201, cfg.eval_speakers, cfg.eval_female,
              cfg.eval_bonafide, cfg.eval_spoof, cfg.unenrolled_speakers, eval_attacks,
              &corpus.eval);
  g.External();
  return corpus;
}

void WriteSyntheticCorpus(const SyntheticCorpus& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  const fs::path cm = root / "ASVspoof2019_LA_cm_protocols";
  const fs::path asv = root / "ASVspoof2019_LA_asv_protocols";
  std::error_code ec;
  fs::create_directories(cm, ec);
  fs::create_directories(asv, ec);
  if (ec) Throw(ErrorKind::kStorage, "cannot create " + cm.string() + ": " + ec.message());

  OutputTransaction tx;
  tx.Add((cm / kCmTrainFile).string(), FormatCmProtocol(corpus.train));
  tx.Add((cm / kCmDevFile).string(), FormatCmProtocol(corpus.dev));
  tx.Add((cm / kCmEvalFile).string(), FormatCmProtocol(corpus.eval));
  for (const auto& [part, by_sex] : corpus.asv_enrollment) {
    for (const auto& [sex, lists] : by_sex) {
      std::string text;
      for (const auto& [spk, utts] : lists) text += spk + " " + Join(utts, ",") + "\n";
      tx.Add((asv / AsvEnrollmentFileName(part, sex)).string(), text);
    }
  }
  tx.Add((root / "spk2gender").string(), FormatSpk2Gender(corpus.sexes));
  tx.Add((root / "embeddings.txt").string(), FormatEmbeddingTable(corpus.embeddings));
  tx.Add((root / "features.bin").string(), corpus.features.Serialize());
  tx.Add((root / "external_manifest.tsv").string(), FormatCorpusManifest(corpus.external));
  tx.Commit();
}

}  // namespace spkaware
