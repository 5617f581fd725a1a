// tests/acceptance.cc

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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Long-running end-to-end runs are timed individually.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "checks.h"
#include "olr/harness.h"
#include "olr/kernels.h"
#include "olr/metrics.h"
#include "olr/net.h"
#include "olr/submission.h"
#include "oracles.h"

using namespace olr;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void Report(const char *id, bool ok, const std::string &what, double seconds) {
  std::printf("%s [%s] %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string Fmt(const char *fmt, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

/// Runs `body`, turning any exception into a failed criterion.
void Criterion(const char *id, const std::function<void(Clock::time_point)> &body) {
  const auto start = Clock::now();
  try {
    body(start);
  } catch (const std::exception &e) {
    Report(id, false, std::string("threw: ") + e.what(), Seconds(start));
  }
}

// 1 ------------------------------------------------------------------------
void ParameterBudget() {
  Criterion("1", [](Clock::time_point start) {
    const std::size_t hand = (200 * 512 + 512) + (1536 * 512 + 512) + (1536 * 512 + 512) +
                             (512 * 512 + 512) + (512 * 1500 + 1500) + (3000 * 512 + 512);
    NetworkParams params(NetworkConfig::Standard(10));
    const std::size_t count = params.EmbeddingParameterCount();
    const double t = Seconds(start);
    Report("1", count == hand && hand == 4245468 && t < 1.0,
           "embedding parameters " + std::to_string(count) + " == " + std::to_string(hand), t);
  });
}

// 2 ------------------------------------------------------------------------
void MetricOracle() {
  Criterion("2", [](Clock::time_point start) {
    std::mt19937_64 rng(2024);
    double worst_cavg = 0.0, worst_eer = 0.0;
    EvalConfig cfg;
    cfg.num_languages = 10;
    for (int file = 0; file < 100; ++file) {
      auto t = oracle::RandomScoreTable(rng, 10, 500, file % 2 == 0);
      auto report = ComputeCavg(t.Records(), t.Key(), cfg);
      std::vector<double> tgt, non;
      oracle::PoolTable(t, &tgt, &non);
      worst_cavg = std::max(worst_cavg, std::abs(report.cavg - oracle::MinCavgSorted(t, 0.5)));
      worst_eer = std::max(worst_eer, std::abs(report.eer - oracle::EerSorted(tgt, non)));
    }
    const double secs = Seconds(start);
    Report("2", worst_cavg <= 1e-12 && worst_eer <= 1e-12 && secs < 30.0,
           Fmt("100 files 10x500: max |dCavg| %.3g, max |dEER| %.3g (tol 1e-12)", worst_cavg,
               worst_eer),
           secs);
  });
}

// 3 ------------------------------------------------------------------------
void WorkedValues() {
  Criterion("3", [](Clock::time_point start) {
    TrialKey key({"A", "B"});
    key.Add("s1", "A");
    key.Add("s3", "A");
    key.Add("s2", "B");
    std::vector<ScoreRecord> scores = {
        {"s1", {1.0, 2.0}}, {"s3", {-2.0, -1.0}}, {"s2", {-1.0, 1.0}}};
    EvalConfig cfg{0.5, 2, ThresholdPolicy::Fixed(0.0)};
    const double cavg = ComputeCavg(scores, key, cfg).cavg;
    const double eer = ComputeEer(PooledTrials{{0.9, 0.8, 0.7, 0.3}, {0.85, 0.6, 0.4, 0.2}});
    Report("3", cavg == 0.25 && eer == 0.25,
           Fmt("3-segment Cavg(theta=0) = %.17g, 4+4 EER = %.17g (expect 0.25 exactly)", cavg,
               eer),
           Seconds(start));
  });
}

// 4 ------------------------------------------------------------------------
void GradientChecks() {
  Criterion("4", [](Clock::time_point start) {
    double splice = 0.0, pool = 0.0, net = 0.0;
    for (uint64_t seed = 1; seed <= 50; ++seed) {
      splice = std::max(splice, checks::SpliceAffineGradientError(seed));
      pool = std::max(pool, checks::StatsPoolGradientError(seed));
    }
    for (uint64_t seed = 1; seed <= 20; ++seed)
      net = std::max(net, checks::NetworkGradientError(seed));
    const double secs = Seconds(start);
    Report("4", splice < 1e-4 && pool < 1e-4 && net < 1e-4 && secs < 60.0,
           Fmt("max rel err, h=1e-4: splice-affine %.3g, stats-pool %.3g, "
               "full net incl. softmax %.3g (tol 1e-4)",
               splice, pool, net),
           secs);
  });
}

// 5 ------------------------------------------------------------------------
void Pooling() {
  Criterion("5", [](Clock::time_point start) {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    auto compare = [&](const Matrix &h) {
      std::vector<double> pooled;
      kernels::StatsPoolForward(h, &pooled);
      for (std::size_t d = 0; d < h.cols(); ++d) {
        double mean = 0.0, var = 0.0;
        for (std::size_t t = 0; t < h.rows(); ++t) mean += h(t, d);
        mean /= static_cast<double>(h.rows());
        for (std::size_t t = 0; t < h.rows(); ++t) var += (h(t, d) - mean) * (h(t, d) - mean);
        var /= static_cast<double>(h.rows());
        worst = std::max(worst, std::abs(pooled[d] - mean));
        worst = std::max(worst, std::abs(pooled[h.cols() + d] - std::sqrt(var)));
      }
    };
    for (int trial = 0; trial < 50; ++trial) {
      Matrix h = checks::RandomMatrix(rng, 1 + trial * 5, 16);
      for (double &x : h.data()) x = 3.0 * x + 10.0;
      compare(h);
    }
    compare(Matrix(40, 16, 0.3));
    compare(Matrix(1, 16, -2.0));
    Report("5", worst <= 1e-10,
           Fmt("max deviation from two-pass mean/std %.3g incl. constant input (tol 1e-10)",
               worst),
           Seconds(start));
  });
}

// 6 ------------------------------------------------------------------------
void FormatRoundTrip() {
  Criterion("6", [](Clock::time_point start) {
    std::mt19937_64 rng(6);
    int mismatches = 0;
    for (int file = 0; file < 1000; ++file) {
      const std::size_t n = 1 + static_cast<std::size_t>(file % 10);
      std::ostringstream w0;
      WriteScores(w0, checks::RandomRecords(rng, n));
      std::istringstream r0(w0.str());
      auto once = ParseScores(r0, n);
      std::ostringstream w1;
      WriteScores(w1, once);
      std::istringstream r1(w1.str());
      auto twice = ParseScores(r1, n);
      std::ostringstream w2;
      WriteScores(w2, twice);
      if (!(once == twice) || w1.str() != w2.str()) ++mismatches;
    }
    std::istringstream sample("seg_1 0.5 -0.2 0.0 0.0 0.0 0.0 0.0 0.0 -0.3 0.1\n");
    auto parsed = ParseScores(sample, 10);
    const std::vector<double> expect = {0.5, -0.2, 0, 0, 0, 0, 0, 0, -0.3, 0.1};
    const bool sample_ok = parsed.size() == 1 && parsed[0].scores == expect;

    TrialKey key({"A", "B"});
    key.Add("s1", "A");
    key.Add("s2", "B");
    auto filled = FillMissing({{"s1", {0.5, -0.2}}}, key);
    const double ninf = -std::numeric_limits<double>::infinity();
    const bool fill_ok = filled.records.size() == 2 && filled.lost.size() == 1 &&
                         filled.records[1].scores == std::vector<double>{ninf, ninf};
    Report("6", mismatches == 0 && sample_ok && fill_ok,
           "1000 files parse/write/parse idempotent (" + std::to_string(mismatches) +
               " mismatches), sample line exact: " + (sample_ok ? "yes" : "no") +
               ", lost trial filled with -inf: " + (fill_ok ? "yes" : "no"),
           Seconds(start));
  });
}

// 7 and 8 ------------------------------------------------------------------
struct RunText {
  std::string scores;
  std::string report;
};

RunText TextOf(const TaskResult &r) { return {r.ScoresText(), r.ReportText()}; }

constexpr double kRunBudget = 300.0;

void EndToEnd() {
  RunText short_run, cross_run, zero_run;

  Criterion("7a", [&](Clock::time_point start) {
    auto result = RunTask(ExperimentPlan::Default(Task::kShortUtterance, 1));
    short_run = TextOf(result);
    const double secs = Seconds(start);
    Report("7a", result.report.cavg <= 0.05 && result.report.eer <= 0.05 && secs < kRunBudget,
           Fmt("short-utterance, 3 languages: Cavg %.4f (<= 0.05), EER %.2f%% (<= 5%%)",
               result.report.cavg, 100.0 * result.report.eer),
           secs);
  });

  Criterion("7b", [&](Clock::time_point start) {
    double matched = 0.0, cross = 0.0, slowest = 0.0;
    std::string per_seed;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      const auto t0 = Clock::now();
      Experiment ex(ExperimentPlan::Default(Task::kCrossChannel, seed));
      auto m = ex.RunClosedSet(Task::kShortUtterance, ChannelConfig{});
      auto c = ex.Run(Task::kCrossChannel);
      if (seed == 1) cross_run = TextOf(c);
      slowest = std::max(slowest, Seconds(t0));
      matched += m.report.cavg / 5.0;
      cross += c.report.cavg / 5.0;
      per_seed += Fmt(" %.3f/%.3f", m.report.cavg, c.report.cavg);
    }
    Report("7b", cross > matched && slowest < kRunBudget,
           Fmt("cross-channel mean Cavg %.4f > matched mean Cavg %.4f over 5 seeds;", cross,
               matched) +
               " matched/cross:" + per_seed + Fmt("; slowest seed %.1f s", slowest),
           Seconds(start));
  });

  Criterion("7c", [&](Clock::time_point start) {
    auto result = RunTask(ExperimentPlan::Default(Task::kZeroResource, 1));
    zero_run = TextOf(result);
    const double secs = Seconds(start);
    Report("7c",
           result.report.cavg <= 0.20 && result.report.cavg < 0.5 && secs < kRunBudget,
           Fmt("zero-resource, 2 unseen languages, 10 references each: Cavg %.4f (<= 0.20, "
               "chance 0.5), EER %.2f%%",
               result.report.cavg, 100.0 * result.report.eer),
           secs);
  });

  Criterion("8", [&](Clock::time_point start) {
    auto again_short = TextOf(RunTask(ExperimentPlan::Default(Task::kShortUtterance, 1)));
    auto again_cross = TextOf(RunTask(ExperimentPlan::Default(Task::kCrossChannel, 1)));
    auto again_zero = TextOf(RunTask(ExperimentPlan::Default(Task::kZeroResource, 1)));
    auto same = [](const RunText &a, const RunText &b) {
      return !a.scores.empty() && a.scores == b.scores && a.report == b.report;
    };
    const bool s = same(short_run, again_short), c = same(cross_run, again_cross),
               z = same(zero_run, again_zero);
    Report("8", s && c && z,
           std::string("repeat runs byte-identical: short-utterance ") + (s ? "yes" : "no") +
               ", cross-channel " + (c ? "yes" : "no") + ", zero-resource " +
               (z ? "yes" : "no"),
           Seconds(start));
  });
}

}  // namespace

int main() {
  ParameterBudget();
  MetricOracle();
  WorkedValues();
  GradientChecks();
  Pooling();
  FormatRoundTrip();
  EndToEnd();
  std::printf("%s: %d criterion line(s) failed\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures);
  return failures == 0 ? 0 : 1;
}
