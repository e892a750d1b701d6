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

#ifndef SPKAWARE_METRICS_H_
#define SPKAWARE_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spkaware/protocols.h"

namespace spkaware {

struct ScoredTrial {
  double score = 0.0;  // higher means more bonafide
  Key key = Key::kBonafide;
};

struct EerResult {
  double eer = 0.0;        // fraction
  double threshold = 0.0;  // score closing the bracket that contains the crossing
};

// Sweeps every distinct score as a threshold (reject score <= tau) plus the
// accept-all point, and linearly interpolates the crossing of the miss and
// false-alarm rates between the two operating points that bracket it.
EerResult ComputeEer(std::span<const ScoredTrial> trials);

// Constants of the constrained-ASV tandem detection cost.
struct TdcfCosts {
  double p_target = 0.9405;
  double p_nontarget = 0.0095;
  double p_spoof = 0.05;
  double c_miss_asv = 1.0;
  double c_fa_asv = 10.0;
  double c_miss_cm = 1.0;
  double c_fa_cm = 10.0;
};

// Error rates of the fixed ASV system the countermeasure is paired with.
struct AsvOperatingPoint {
  double p_fa_asv = 0.0;
  double p_miss_asv = 0.0;
  double p_miss_spoof_asv = 0.0;
  std::string source;
  // Optional per-attack spoof miss rates, used when requested.
  std::map<std::string, double> per_attack_p_miss_spoof;

  void Validate() const;  // throws kInvalidInput
};

struct TdcfConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

TdcfConstants ComputeTdcfConstants(const AsvOperatingPoint& asv, const TdcfCosts& costs);

// min over CM thresholds of (C1 * Pmiss_cm + C2 * Pfa_cm) / min(C1, C2).
double ComputeMinTdcf(std::span<const ScoredTrial> trials, const AsvOperatingPoint& asv,
                      const TdcfCosts& costs);

// 100 * (baseline - system) / baseline, truncated toward zero to one decimal.
double RelativeImprovement(double baseline, double system);

struct EvalReport {
  std::string name;
  double pooled_eer = 0.0;          // percent
  std::optional<double> min_tdcf;   // present when ASV rates were supplied
  std::map<std::string, double> per_attack_eer;        // percent
  std::map<std::string, double> per_attack_min_tdcf;   // only with per-attack ASV rates
  size_t n_bonafide = 0;
  size_t n_spoof = 0;
  std::string baseline_name;
  std::map<std::string, double> relative_improvements;  // metric -> percent
};

using ScoreMap = std::map<std::string, double>;

// Pooled metrics over all trials; per attack A, bonafide trials pooled with
// the spoof trials of A only.
EvalReport PerAttackReport(const ScoreMap& scores, const std::vector<Trial>& protocol,
                           const AsvOperatingPoint* asv = nullptr,
                           const TdcfCosts& costs = {}, bool per_attack_asv = false);

// Fills report.relative_improvements against `baseline`, using the values
// as they are reported (EER to two decimals, t-DCF to three).
void AddRelativeImprovements(const EvalReport& baseline, EvalReport* report);

// Score files: "utterance_id score" per line.
ScoreMap ReadScoreFile(const std::string& path);
std::string FormatScoreFile(const std::vector<std::pair<std::string, double>>& scores);

// key=value ASV operating point file (p_fa_asv, p_miss_asv, p_miss_spoof_asv,
// optional p_miss_spoof_asv.<attack>).
AsvOperatingPoint ReadAsvOperatingPoint(const std::string& path);

// Report serialization.
std::string FormatReportKeyValue(const EvalReport& report);
EvalReport ParseReportKeyValue(const std::string& content, const std::string& source);
std::string FormatReportTable(const std::vector<EvalReport>& reports);
std::string FormatReportDelimited(const EvalReport& report, char delim = ',');

double RoundTo(double v, int decimals);

}  // namespace spkaware

#endif  // SPKAWARE_METRICS_H_
