// olr/metrics.h

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

#ifndef OLR_METRICS_H_
#define OLR_METRICS_H_

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "olr/submission.h"

namespace olr {

struct ThresholdPolicy {
  enum class Kind { kFixed, kMinSweep };

  Kind kind = Kind::kMinSweep;
  double theta = 0.0;  // used by kFixed only

  static ThresholdPolicy Fixed(double theta) { return {Kind::kFixed, theta}; }
  static ThresholdPolicy MinSweep() { return {Kind::kMinSweep, 0.0}; }
};

struct EvalConfig {
  double p_target = 0.5;
  std::size_t num_languages = 0;
  ThresholdPolicy policy;

  double p_nontarget() const {
    return (1.0 - p_target) / static_cast<double>(num_languages - 1);
  }
  /// Throws kInvalidConfig unless 0 < p_target < 1 and num_languages >= 2.
  void Validate() const;
};

struct PairwiseLoss {
  int target = 0;
  int nontarget = 0;
  double p_miss = 0.0;
  double p_fa = 0.0;
  double cost = 0.0;  // p_target * p_miss + (1 - p_target) * p_fa
};

struct DetPoint {
  double p_miss = 0.0;
  double p_fa = 0.0;

  bool operator==(const DetPoint &) const = default;
};

struct EvalReport {
  double cavg = 0.0;
  double eer = 0.0;
  std::vector<PairwiseLoss> pairwise;
  std::vector<DetPoint> det_points;
  double threshold_used = 0.0;
  bool swept = false;
  double p_target = 0.5;
  std::vector<std::string> languages;
};

/// Segments of `scores` joined against `key`. Scores for segments that the
/// key does not list are ignored.
class TrialTable {
 public:
  /// Throws kInconsistentLanguageSet on wrong arity, kMissingSegment when a
  /// key segment has no scores (run FillMissing first to get -inf rows).
  TrialTable(const std::vector<ScoreRecord> &scores, const TrialKey &key);

  std::size_t num_segments() const { return labels_.size(); }
  std::size_t num_languages() const { return num_languages_; }
  int label(std::size_t seg) const { return labels_[seg]; }
  double score(std::size_t seg, std::size_t lang) const {
    return scores_[seg * num_languages_ + lang];
  }
  /// Number of segments whose true language is `lang`.
  std::size_t count(int lang) const { return counts_[lang]; }

 private:
  std::size_t num_languages_;
  std::vector<int> labels_;
  std::vector<double> scores_;
  std::vector<std::size_t> counts_;
};

/// Detection errors of hypothesis `target` against trials whose true
/// language is `nontarget`, deciding "target" whenever score >= threshold.
PairwiseLoss ComputePairwiseLoss(const TrialTable &table, int target,
                                 int nontarget, double threshold,
                                 const EvalConfig &config);
PairwiseLoss ComputePairwiseLoss(const std::vector<ScoreRecord> &scores,
                                 const TrialKey &key, int target, int nontarget,
                                 double threshold, const EvalConfig &config);

/// C_avg recomputed from the pairwise entries:
///   1/N * sum_t [ p_target * P_miss(t) + sum_n p_nontarget * P_fa(t, n) ].
double CavgFromPairwise(const std::vector<PairwiseLoss> &pairwise,
                        const EvalConfig &config);

/// Full report: C_avg at the configured threshold policy, pooled EER and the
/// DET curve. Out-of-set segments enter only the pooled (EER/DET) trials,
/// as non-targets for every language.
EvalReport ComputeCavg(const std::vector<ScoreRecord> &scores,
                       const TrialKey &key, const EvalConfig &config);
EvalReport ComputeCavg(const TrialTable &table, const EvalConfig &config);

/// Pooled target/non-target trial scores (segment x hypothesis language).
struct PooledTrials {
  std::vector<double> target;
  std::vector<double> nontarget;
};
PooledTrials PoolTrials(const TrialTable &table);

/// One point per distinct pooled score plus the accept-all (0, 1) and
/// reject-all (1, 0) endpoints, ordered by increasing threshold.
std::vector<DetPoint> DetCurve(const PooledTrials &trials);
std::vector<DetPoint> DetCurve(const std::vector<ScoreRecord> &scores,
                               const TrialKey &key);

/// Equal error rate on the DET curve, linearly interpolated between the two
/// points that bracket P_miss == P_fa.
double EerFromDet(const std::vector<DetPoint> &det);
double ComputeEer(const PooledTrials &trials);
double ComputeEer(const std::vector<ScoreRecord> &scores, const TrialKey &key);

/// Flat "key value" text; pair lines are "pair <t> <n> <p_miss> <p_fa> <cost>".
void WriteReport(std::ostream &os, const EvalReport &report);
/// "p_miss p_fa" per line, 9 significant digits.
void WriteDet(std::ostream &os, const std::vector<DetPoint> &det);

}  // namespace olr

#endif  // OLR_METRICS_H_
