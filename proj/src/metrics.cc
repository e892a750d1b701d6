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

#include "spkaware/metrics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "spkaware/error.h"
#include "spkaware/io.h"

namespace spkaware {

namespace {

struct OperatingPoint {
  double p_miss;  // bonafide rejected
  double p_fa;    // spoof accepted
  double threshold;
};

// Operating points of the sweep, ordered by increasing threshold: the
// accept-all point followed by "reject score <= u" for each distinct u.
std::vector<OperatingPoint> SweepOperatingPoints(std::span<const ScoredTrial> trials) {
  size_t n_bon = 0, n_spf = 0;
  for (const auto& t : trials) {
    if (!std::isfinite(t.score)) Throw(ErrorKind::kNumeric, "non-finite score");
    (t.key == Key::kBonafide ? n_bon : n_spf)++;
  }
  if (n_bon == 0 || n_spf == 0) {
    Throw(ErrorKind::kInvalidInput,
          "need at least one bonafide and one spoof score (got " + std::to_string(n_bon) +
              " bonafide, " + std::to_string(n_spf) + " spoof)");
  }
  std::vector<ScoredTrial> sorted(trials.begin(), trials.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredTrial& a, const ScoredTrial& b) { return a.score < b.score; });
  std::vector<OperatingPoint> points;
  points.reserve(sorted.size() + 1);
  points.push_back({0.0, 1.0, -INFINITY});
  size_t bon_le = 0, spf_le = 0;
  for (size_t i = 0; i < sorted.size();) {
    const double u = sorted[i].score;
    while (i < sorted.size() && sorted[i].score == u) {
      (sorted[i].key == Key::kBonafide ? bon_le : spf_le)++;
      ++i;
    }
    points.push_back({static_cast<double>(bon_le) / n_bon,
                      static_cast<double>(n_spf - spf_le) / n_spf, u});
  }
  return points;
}

}  // namespace

EerResult ComputeEer(std::span<const ScoredTrial> trials) {
  const auto points = SweepOperatingPoints(trials);
  // p_miss - p_fa is non-decreasing along the sweep, from -1 to +1.
  for (size_t i = 1; i < points.size(); ++i) {
    const double d_cur = points[i].p_miss - points[i].p_fa;
    if (d_cur < 0.0) continue;
    const OperatingPoint& a = points[i - 1];
    const OperatingPoint& b = points[i];
    const double d_prev = a.p_miss - a.p_fa;
    const double w = -d_prev / (d_cur - d_prev);
    return {a.p_miss + w * (b.p_miss - a.p_miss), b.threshold};
  }
  // Unreachable: the last point always has p_miss = 1, p_fa = 0.
  Throw(ErrorKind::kNumeric, "EER sweep did not cross");
}

void AsvOperatingPoint::Validate() const {
  auto check = [](double v, const std::string& name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      Throw(ErrorKind::kInvalidInput, "ASV rate " + name + " must be in [0,1], got " +
                                          FormatDouble(v));
    }
  };
  check(p_fa_asv, "p_fa_asv");
  check(p_miss_asv, "p_miss_asv");
  check(p_miss_spoof_asv, "p_miss_spoof_asv");
  for (const auto& [attack, v] : per_attack_p_miss_spoof) check(v, "p_miss_spoof_asv." + attack);
}

TdcfConstants ComputeTdcfConstants(const AsvOperatingPoint& asv, const TdcfCosts& costs) {
  asv.Validate();
  TdcfConstants k;
  k.c1 = costs.p_target * (costs.c_miss_cm - costs.c_miss_asv * asv.p_miss_asv) -
         costs.p_nontarget * costs.c_fa_asv * asv.p_fa_asv;
  k.c2 = costs.c_fa_cm * costs.p_spoof * (1.0 - asv.p_miss_spoof_asv);
  return k;
}

double ComputeMinTdcf(std::span<const ScoredTrial> trials, const AsvOperatingPoint& asv,
                      const TdcfCosts& costs) {
  const TdcfConstants k = ComputeTdcfConstants(asv, costs);
  if (k.c1 == 0.0 && k.c2 == 0.0) {
    Throw(ErrorKind::kConfiguration, "t-DCF constants C1 and C2 are both zero");
  }
  if (k.c1 <= 0.0 || k.c2 <= 0.0) {
    Throw(ErrorKind::kConfiguration,
          "t-DCF constants must be positive (C1=" + FormatDouble(k.c1) +
              ", C2=" + FormatDouble(k.c2) + "); check the ASV operating point and costs");
  }
  const auto points = SweepOperatingPoints(trials);
  double best = INFINITY;
  for (const auto& p : points) best = std::min(best, k.c1 * p.p_miss + k.c2 * p.p_fa);
  return best / std::min(k.c1, k.c2);
}

double RelativeImprovement(double baseline, double system) {
  if (!(baseline > 0.0)) {
    Throw(ErrorKind::kInvalidInput, "relative improvement needs a positive baseline");
  }
  const double pct = 100.0 * (baseline - system) / baseline;
  // Nudge before truncating so that values such as 9.999999999999998 land on 10.0.
  const double scaled = pct * 10.0 + (pct >= 0.0 ? 1e-9 : -1e-9);
  return std::trunc(scaled) / 10.0;
}

double RoundTo(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

EvalReport PerAttackReport(const ScoreMap& scores, const std::vector<Trial>& protocol,
                           const AsvOperatingPoint* asv, const TdcfCosts& costs,
                           bool per_attack_asv) {
  std::map<std::string, const Trial*> by_utt;
  for (const auto& t : protocol) by_utt[t.utterance_id] = &t;

  std::vector<std::string> unknown;
  for (const auto& [utt, s] : scores) {
    if (!by_utt.count(utt)) unknown.push_back(utt);
  }
  auto list_ids = [](const std::vector<std::string>& ids) {
    std::string s;
    for (size_t i = 0; i < ids.size() && i < 10; ++i) s += (i ? ", " : "") + ids[i];
    if (ids.size() > 10) s += ", ... (" + std::to_string(ids.size()) + " total)";
    return s;
  };
  if (!unknown.empty()) {
    Throw(ErrorKind::kConsistency, "scored utterances absent from the protocol: " +
                                       list_ids(unknown));
  }
  std::vector<std::string> missing;
  for (const auto& t : protocol) {
    if (!scores.count(t.utterance_id)) missing.push_back(t.utterance_id);
  }
  if (!missing.empty()) {
    Throw(ErrorKind::kConsistency, "protocol trials without a score: " + list_ids(missing));
  }

  std::vector<ScoredTrial> pooled, bonafide;
  std::map<std::string, std::vector<ScoredTrial>> spoof_by_attack;
  for (const auto& t : protocol) {
    ScoredTrial st{scores.at(t.utterance_id), t.key};
    pooled.push_back(st);
    if (t.key == Key::kBonafide) {
      bonafide.push_back(st);
    } else {
      spoof_by_attack[t.attack_id].push_back(st);
    }
  }

  EvalReport report;
  report.n_bonafide = bonafide.size();
  report.n_spoof = pooled.size() - bonafide.size();
  report.pooled_eer = 100.0 * ComputeEer(pooled).eer;
  if (asv) report.min_tdcf = ComputeMinTdcf(pooled, *asv, costs);
  for (const auto& [attack, spoofs] : spoof_by_attack) {
    std::vector<ScoredTrial> subset = bonafide;
    subset.insert(subset.end(), spoofs.begin(), spoofs.end());
    report.per_attack_eer[attack] = 100.0 * ComputeEer(subset).eer;
    if (asv && per_attack_asv) {
      auto it = asv->per_attack_p_miss_spoof.find(attack);
      if (it == asv->per_attack_p_miss_spoof.end()) {
        Throw(ErrorKind::kConfiguration, "no per-attack ASV spoof miss rate for " + attack);
      }
      AsvOperatingPoint local = *asv;
      local.p_miss_spoof_asv = it->second;
      report.per_attack_min_tdcf[attack] = ComputeMinTdcf(subset, local, costs);
    }
  }
  return report;
}

void AddRelativeImprovements(const EvalReport& baseline, EvalReport* report) {
  report->baseline_name = baseline.name;
  report->relative_improvements.clear();
  auto add = [&](const std::string& metric, double base, double sys) {
    if (base > 0.0) report->relative_improvements[metric] = RelativeImprovement(base, sys);
  };
  add("pooled_eer", RoundTo(baseline.pooled_eer, 2), RoundTo(report->pooled_eer, 2));
  if (baseline.min_tdcf && report->min_tdcf) {
    add("min_tdcf", RoundTo(*baseline.min_tdcf, 3), RoundTo(*report->min_tdcf, 3));
  }
  for (const auto& [attack, eer] : report->per_attack_eer) {
    auto it = baseline.per_attack_eer.find(attack);
    if (it != baseline.per_attack_eer.end()) {
      add("eer." + attack, RoundTo(it->second, 2), RoundTo(eer, 2));
    }
  }
}

ScoreMap ReadScoreFile(const std::string& path) {
  ScoreMap scores;
  auto lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1) + ": ";
    auto f = SplitWhitespace(lines[i]);
    double v;
    if (f.size() != 2 || !ParseDouble(f[1], &v)) {
      Throw(ErrorKind::kParse, where + "expected 'utterance_id score'");
    }
    if (!std::isfinite(v)) Throw(ErrorKind::kNumeric, where + "non-finite score");
    if (!scores.emplace(f[0], v).second) {
      Throw(ErrorKind::kConsistency, where + "duplicate score for " + f[0]);
    }
  }
  return scores;
}

std::string FormatScoreFile(const std::vector<std::pair<std::string, double>>& scores) {
  std::string out;
  for (const auto& [utt, s] : scores) out += utt + " " + FormatDouble(s) + "\n";
  return out;
}

AsvOperatingPoint ReadAsvOperatingPoint(const std::string& path) {
  Provenance kv = Provenance::Parse(ReadFileToString(path), path);
  AsvOperatingPoint asv;
  asv.source = path;
  auto get = [&](const std::string& key) {
    auto v = kv.Get(key);
    double d;
    if (!v) Throw(ErrorKind::kParse, path + ": missing " + key);
    if (!ParseDouble(*v, &d)) Throw(ErrorKind::kParse, path + ": malformed " + key);
    return d;
  };
  asv.p_fa_asv = get("p_fa_asv");
  asv.p_miss_asv = get("p_miss_asv");
  asv.p_miss_spoof_asv = get("p_miss_spoof_asv");
  const std::string prefix = "p_miss_spoof_asv.";
  for (const auto& [k, v] : kv.entries()) {
    if (k.rfind(prefix, 0) == 0) asv.per_attack_p_miss_spoof[k.substr(prefix.size())] = get(k);
    if (k == "source") asv.source = v;
  }
  asv.Validate();
  return asv;
}

std::string FormatReportKeyValue(const EvalReport& r) {
  Provenance kv;
  kv.Set("name", r.name);
  kv.Set("pooled_eer", FormatDouble(r.pooled_eer));
  if (r.min_tdcf) kv.Set("min_tdcf", FormatDouble(*r.min_tdcf));
  kv.Set("n_bonafide", static_cast<long long>(r.n_bonafide));
  kv.Set("n_spoof", static_cast<long long>(r.n_spoof));
  for (const auto& [a, v] : r.per_attack_eer) kv.Set("eer." + a, FormatDouble(v));
  for (const auto& [a, v] : r.per_attack_min_tdcf) kv.Set("tdcf." + a, FormatDouble(v));
  if (!r.baseline_name.empty()) kv.Set("baseline", r.baseline_name);
  for (const auto& [m, v] : r.relative_improvements) kv.Set("rel." + m, FormatFixed(v, 1));
  return kv.Format();
}

EvalReport ParseReportKeyValue(const std::string& content, const std::string& source) {
  Provenance kv = Provenance::Parse(content, source);
  EvalReport r;
  auto num = [&](const std::string& key, const std::string& text) {
    double d;
    if (!ParseDouble(text, &d)) Throw(ErrorKind::kParse, source + ": malformed " + key);
    return d;
  };
  bool has_eer = false;
  for (const auto& [k, v] : kv.entries()) {
    if (k == "name") {
      r.name = v;
    } else if (k == "pooled_eer") {
      r.pooled_eer = num(k, v);
      has_eer = true;
    } else if (k == "min_tdcf") {
      r.min_tdcf = num(k, v);
    } else if (k == "n_bonafide") {
      r.n_bonafide = static_cast<size_t>(num(k, v));
    } else if (k == "n_spoof") {
      r.n_spoof = static_cast<size_t>(num(k, v));
    } else if (k.rfind("eer.", 0) == 0) {
      r.per_attack_eer[k.substr(4)] = num(k, v);
    } else if (k.rfind("tdcf.", 0) == 0) {
      r.per_attack_min_tdcf[k.substr(5)] = num(k, v);
    } else if (k == "baseline") {
      r.baseline_name = v;
    } else if (k.rfind("rel.", 0) == 0) {
      r.relative_improvements[k.substr(4)] = num(k, v);
    }
  }
  if (!has_eer) Throw(ErrorKind::kParse, source + ": report has no pooled_eer");
  return r;
}

std::string FormatReportTable(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  size_t name_w = 6;
  for (const auto& r : reports) name_w = std::max(name_w, r.name.size());
  out << std::left << std::setw(static_cast<int>(name_w)) << "Method" << "  "
      << std::right << std::setw(7) << "EER(%)" << "  " << std::setw(7) << "tDCF";
  bool any_rel = false;
  for (const auto& r : reports) any_rel |= !r.relative_improvements.empty();
  if (any_rel) out << "  " << std::setw(9) << "relEER(%)" << "  " << std::setw(10) << "reltDCF(%)";
  out << "\n";
  for (const auto& r : reports) {
    out << std::left << std::setw(static_cast<int>(name_w)) << r.name << "  " << std::right
        << std::setw(7) << FormatFixed(r.pooled_eer, 2) << "  " << std::setw(7)
        << (r.min_tdcf ? FormatFixed(*r.min_tdcf, 3) : std::string("-"));
    if (any_rel) {
      auto rel = [&](const std::string& m) {
        auto it = r.relative_improvements.find(m);
        return it == r.relative_improvements.end() ? std::string("-") : FormatFixed(it->second, 1);
      };
      out << "  " << std::setw(9) << rel("pooled_eer") << "  " << std::setw(10) << rel("min_tdcf");
    }
    out << "\n";
  }

  std::set<std::string> attacks;
  for (const auto& r : reports)
    for (const auto& [a, v] : r.per_attack_eer) attacks.insert(a);
  if (attacks.empty()) return out.str();
  out << "\n" << std::left << std::setw(static_cast<int>(name_w)) << "Method";
  for (const auto& a : attacks) out << "  " << std::right << std::setw(6) << a;
  out << "\n";
  for (const auto& r : reports) {
    out << std::left << std::setw(static_cast<int>(name_w)) << r.name;
    for (const auto& a : attacks) {
      auto it = r.per_attack_eer.find(a);
      out << "  " << std::right << std::setw(6)
          << (it == r.per_attack_eer.end() ? std::string("-") : FormatFixed(it->second, 2));
    }
    out << "\n";
  }
  return out.str();
}

std::string FormatReportDelimited(const EvalReport& r, char delim) {
  std::string out = std::string("metric") + delim + "value\n";
  auto row = [&](const std::string& k, const std::string& v) { out += k + delim + v + "\n"; };
  row("pooled_eer", FormatFixed(r.pooled_eer, 2));
  if (r.min_tdcf) row("min_tdcf", FormatFixed(*r.min_tdcf, 3));
  for (const auto& [a, v] : r.per_attack_eer) row("eer." + a, FormatFixed(v, 2));
  for (const auto& [a, v] : r.per_attack_min_tdcf) row("tdcf." + a, FormatFixed(v, 3));
  for (const auto& [m, v] : r.relative_improvements) row("rel." + m, FormatFixed(v, 1));
  return out;
}

}  // namespace spkaware
