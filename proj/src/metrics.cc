// src/metrics.cc

// Copyright 2026  The OLR Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "olr/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "olr/error.h"

namespace olr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void CheckLanguage(const TrialTable &table, int lang) {
  if (lang < 0 || static_cast<std::size_t>(lang) >= table.num_languages())
    throw Error(Errc::kUnknownLanguage,
                "language index " + std::to_string(lang) + " out of range");
}

void CheckAllLanguagesPresent(const TrialTable &table) {
  for (std::size_t l = 0; l < table.num_languages(); ++l) {
    if (table.count(static_cast<int>(l)) == 0)
      throw Error(Errc::kEmptyTrialSet,
                  "no trials for language index " + std::to_string(l));
  }
}

// C_avg from integer counts. miss[t] counts rejected targets of t;
// accepted[t * N + n] counts accepted segments of true language n on column t.
// Arithmetic matches CavgFromPairwise term for term.
double CavgFromCounts(const TrialTable &table,
                      const std::vector<std::size_t> &miss,
                      const std::vector<std::size_t> &accepted,
                      const EvalConfig &config) {
  const std::size_t n_lang = table.num_languages();
  const double p_nt = config.p_nontarget();
  double total = 0.0;
  for (std::size_t t = 0; t < n_lang; ++t) {
    double p_miss = static_cast<double>(miss[t]) /
                    static_cast<double>(table.count(static_cast<int>(t)));
    double term = config.p_target * p_miss;
    for (std::size_t n = 0; n < n_lang; ++n) {
      if (n == t) continue;
      double p_fa = static_cast<double>(accepted[t * n_lang + n]) /
                    static_cast<double>(table.count(static_cast<int>(n)));
      term += p_nt * p_fa;
    }
    total += term;
  }
  return total / static_cast<double>(n_lang);
}

struct SweepResult {
  double cavg;
  double threshold;
};

// Single global threshold swept over every distinct score plus both
// infinities; ties keep the lowest threshold.
SweepResult MinSweep(const TrialTable &table, const EvalConfig &config) {
  const std::size_t n_lang = table.num_languages();
  struct Event {
    double value;
    int column;
    int label;
  };
  std::vector<Event> events;
  events.reserve(table.num_segments() * n_lang);
  for (std::size_t s = 0; s < table.num_segments(); ++s) {
    int label = table.label(s);
    if (label == kOutOfSet) continue;
    for (std::size_t t = 0; t < n_lang; ++t)
      events.push_back({table.score(s, t), static_cast<int>(t), label});
  }
  std::sort(events.begin(), events.end(),
            [](const Event &a, const Event &b) { return a.value < b.value; });

  std::vector<double> candidates;
  candidates.reserve(events.size() + 2);
  candidates.push_back(-kInf);
  for (const auto &e : events)
    if (e.value != candidates.back()) candidates.push_back(e.value);
  if (candidates.back() != kInf) candidates.push_back(kInf);

  // At -inf every trial is accepted.
  std::vector<std::size_t> miss(n_lang, 0);
  std::vector<std::size_t> accepted(n_lang * n_lang, 0);
  for (std::size_t t = 0; t < n_lang; ++t)
    for (std::size_t n = 0; n < n_lang; ++n)
      if (n != t) accepted[t * n_lang + n] = table.count(static_cast<int>(n));

  SweepResult best{kInf, -kInf};
  std::size_t next = 0;
  for (double theta : candidates) {
    while (next < events.size() && events[next].value < theta) {
      const auto &e = events[next++];
      if (e.label == e.column)
        ++miss[e.column];
      else
        --accepted[e.column * n_lang + e.label];
    }
    double cost = CavgFromCounts(table, miss, accepted, config);
    if (cost < best.cavg) best = {cost, theta};
  }
  return best;
}

}  // namespace

void EvalConfig::Validate() const {
  if (!(p_target > 0.0 && p_target < 1.0))
    throw Error(Errc::kInvalidConfig, "p_target must lie in (0, 1)");
  if (num_languages < 2)
    throw Error(Errc::kInvalidConfig, "need at least two languages");
}

TrialTable::TrialTable(const std::vector<ScoreRecord> &scores,
                       const TrialKey &key)
    : num_languages_(key.num_languages()),
      labels_(key.entries().size()),
      scores_(key.entries().size() * key.num_languages()),
      counts_(key.num_languages(), 0) {
  std::vector<bool> seen(key.entries().size(), false);
  for (const auto &record : scores) {
    auto idx = key.Find(record.segment_id);
    if (!idx) continue;
    if (record.scores.size() != num_languages_)
      throw Error(Errc::kInconsistentLanguageSet,
                  "segment '" + record.segment_id + "' has " +
                      std::to_string(record.scores.size()) +
                      " scores, key declares " + std::to_string(num_languages_));
    seen[*idx] = true;
    std::copy(record.scores.begin(), record.scores.end(),
              scores_.begin() + static_cast<std::ptrdiff_t>(*idx * num_languages_));
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    const auto &entry = key.entries()[i];
    if (!seen[i])
      throw Error(Errc::kMissingSegment,
                  "no scores for segment '" + entry.segment_id + "'");
    labels_[i] = entry.language;
    if (entry.language != kOutOfSet) ++counts_[entry.language];
  }
}

PairwiseLoss ComputePairwiseLoss(const TrialTable &table, int target,
                                 int nontarget, double threshold,
                                 const EvalConfig &config) {
  CheckLanguage(table, target);
  CheckLanguage(table, nontarget);
  if (target == nontarget)
    throw Error(Errc::kUnknownLanguage, "target and non-target must differ");
  std::size_t n_target = table.count(target), n_nontarget = table.count(nontarget);
  if (n_target == 0 || n_nontarget == 0)
    throw Error(Errc::kEmptyTrialSet, "pair has no target or non-target trials");

  std::size_t misses = 0, false_alarms = 0;
  for (std::size_t s = 0; s < table.num_segments(); ++s) {
    double score = table.score(s, static_cast<std::size_t>(target));
    if (table.label(s) == target && score < threshold) ++misses;
    if (table.label(s) == nontarget && score >= threshold) ++false_alarms;
  }
  PairwiseLoss loss;
  loss.target = target;
  loss.nontarget = nontarget;
  loss.p_miss = static_cast<double>(misses) / static_cast<double>(n_target);
  loss.p_fa = static_cast<double>(false_alarms) / static_cast<double>(n_nontarget);
  loss.cost = config.p_target * loss.p_miss + (1.0 - config.p_target) * loss.p_fa;
  return loss;
}

PairwiseLoss ComputePairwiseLoss(const std::vector<ScoreRecord> &scores,
                                 const TrialKey &key, int target, int nontarget,
                                 double threshold, const EvalConfig &config) {
  return ComputePairwiseLoss(TrialTable(scores, key), target, nontarget,
                             threshold, config);
}

double CavgFromPairwise(const std::vector<PairwiseLoss> &pairwise,
                        const EvalConfig &config) {
  const std::size_t n_lang = config.num_languages;
  const double p_nt = config.p_nontarget();
  std::vector<double> p_miss(n_lang, 0.0);
  std::vector<double> fa_sum(n_lang, 0.0);
  for (const auto &pair : pairwise) p_miss[pair.target] = pair.p_miss;
  // Pairs are expected in (target, nontarget) row-major order.
  double total = 0.0;
  std::size_t i = 0;
  for (std::size_t t = 0; t < n_lang; ++t) {
    double term = config.p_target * p_miss[t];
    for (; i < pairwise.size() && pairwise[i].target == static_cast<int>(t); ++i)
      term += p_nt * pairwise[i].p_fa;
    total += term;
  }
  return total / static_cast<double>(n_lang);
}

PooledTrials PoolTrials(const TrialTable &table) {
  PooledTrials pooled;
  for (std::size_t s = 0; s < table.num_segments(); ++s) {
    for (std::size_t l = 0; l < table.num_languages(); ++l) {
      if (table.label(s) == static_cast<int>(l))
        pooled.target.push_back(table.score(s, l));
      else
        pooled.nontarget.push_back(table.score(s, l));
    }
  }
  return pooled;
}

std::vector<DetPoint> DetCurve(const PooledTrials &trials) {
  if (trials.target.empty() || trials.nontarget.empty())
    throw Error(Errc::kEmptyTrialSet,
                "DET curve needs at least one target and one non-target trial");
  std::vector<double> tgt = trials.target, non = trials.nontarget;
  std::sort(tgt.begin(), tgt.end());
  std::sort(non.begin(), non.end());
  std::vector<double> values;
  values.reserve(tgt.size() + non.size());
  std::merge(tgt.begin(), tgt.end(), non.begin(), non.end(),
             std::back_inserter(values));
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const double n_tgt = static_cast<double>(tgt.size());
  const double n_non = static_cast<double>(non.size());
  std::vector<DetPoint> det;
  det.reserve(values.size() + 2);
  det.push_back({0.0, 1.0});
  for (double v : values) {
    auto below_t = std::lower_bound(tgt.begin(), tgt.end(), v) - tgt.begin();
    auto below_n = std::lower_bound(non.begin(), non.end(), v) - non.begin();
    det.push_back({static_cast<double>(below_t) / n_tgt,
                   static_cast<double>(non.size() - below_n) / n_non});
  }
  det.push_back({1.0, 0.0});
  return det;
}

std::vector<DetPoint> DetCurve(const std::vector<ScoreRecord> &scores,
                               const TrialKey &key) {
  return DetCurve(PoolTrials(TrialTable(scores, key)));
}

double EerFromDet(const std::vector<DetPoint> &det) {
  for (std::size_t i = 0; i < det.size(); ++i) {
    double d = det[i].p_miss - det[i].p_fa;
    if (d < 0.0) continue;
    if (d == 0.0 || i == 0) return det[i].p_miss;
    const DetPoint &a = det[i - 1], &b = det[i];
    double da = a.p_miss - a.p_fa;
    double alpha = -da / (d - da);
    return a.p_miss + alpha * (b.p_miss - a.p_miss);
  }
  return det.empty() ? 0.0 : det.back().p_miss;
}

double ComputeEer(const PooledTrials &trials) {
  return EerFromDet(DetCurve(trials));
}

double ComputeEer(const std::vector<ScoreRecord> &scores, const TrialKey &key) {
  return ComputeEer(PoolTrials(TrialTable(scores, key)));
}

EvalReport ComputeCavg(const TrialTable &table, const EvalConfig &config) {
  config.Validate();
  if (table.num_languages() != config.num_languages)
    throw Error(Errc::kInconsistentLanguageSet,
                "config declares " + std::to_string(config.num_languages) +
                    " languages, key has " +
                    std::to_string(table.num_languages()));
  CheckAllLanguagesPresent(table);

  EvalReport report;
  report.p_target = config.p_target;
  if (config.policy.kind == ThresholdPolicy::Kind::kMinSweep) {
    report.threshold_used = MinSweep(table, config).threshold;
    report.swept = true;
  } else {
    report.threshold_used = config.policy.theta;
  }
  const int n_lang = static_cast<int>(table.num_languages());
  for (int t = 0; t < n_lang; ++t)
    for (int n = 0; n < n_lang; ++n)
      if (n != t)
        report.pairwise.push_back(
            ComputePairwiseLoss(table, t, n, report.threshold_used, config));
  report.cavg = CavgFromPairwise(report.pairwise, config);
  report.det_points = DetCurve(PoolTrials(table));
  report.eer = EerFromDet(report.det_points);
  return report;
}

EvalReport ComputeCavg(const std::vector<ScoreRecord> &scores,
                       const TrialKey &key, const EvalConfig &config) {
  EvalReport report = ComputeCavg(TrialTable(scores, key), config);
  report.languages = key.languages();
  return report;
}

void WriteReport(std::ostream &os, const EvalReport &report) {
  os << "cavg " << Fmt9(report.cavg) << '\n';
  os << "eer " << Fmt9(report.eer) << '\n';
  os << "threshold_policy " << (report.swept ? "min_sweep" : "fixed") << '\n';
  os << "threshold " << FormatScore(report.threshold_used) << '\n';
  os << "p_target " << Fmt9(report.p_target) << '\n';
  os << "num_det_points " << report.det_points.size() << '\n';
  auto name = [&](int idx) {
    return static_cast<std::size_t>(idx) < report.languages.size()
               ? report.languages[idx]
               : std::to_string(idx);
  };
  for (const auto &pair : report.pairwise) {
    os << "pair " << name(pair.target) << ' ' << name(pair.nontarget) << ' '
       << Fmt9(pair.p_miss) << ' ' << Fmt9(pair.p_fa) << ' ' << Fmt9(pair.cost)
       << '\n';
  }
}

void WriteDet(std::ostream &os, const std::vector<DetPoint> &det) {
  for (const auto &p : det) os << Fmt9(p.p_miss) << ' ' << Fmt9(p.p_fa) << '\n';
}

}  // namespace olr
