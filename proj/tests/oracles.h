// tests/oracles.h

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

#ifndef OLR_TESTS_ORACLES_H_
#define OLR_TESTS_ORACLES_H_

// Independent reference computations used only by the tests. None of these
// call into the library code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "olr/matrix.h"
#include "olr/metrics.h"
#include "olr/net.h"
#include "olr/submission.h"

namespace olr::oracle {

/// Score file as plain arrays: labels[s] in [0, N) or -1 for out-of-set.
struct ScoreTable {
  std::size_t num_languages = 0;
  std::vector<int> labels;
  std::vector<std::vector<double>> scores;

  std::vector<ScoreRecord> Records() const {
    std::vector<ScoreRecord> out;
    for (std::size_t s = 0; s < labels.size(); ++s)
      out.push_back({"seg" + std::to_string(s), scores[s]});
    return out;
  }

  TrialKey Key() const {
    std::vector<std::string> langs;
    for (std::size_t l = 0; l < num_languages; ++l) langs.push_back("L" + std::to_string(l));
    TrialKey key(langs);
    for (std::size_t s = 0; s < labels.size(); ++s) {
      if (labels[s] < 0)
        key.AddOutOfSet("seg" + std::to_string(s));
      else
        key.Add("seg" + std::to_string(s), langs[static_cast<std::size_t>(labels[s])]);
    }
    return key;
  }
};

/// Random score table where every language has at least one segment. With
/// `ties`, scores are rounded to one decimal so many values coincide.
inline ScoreTable RandomScoreTable(std::mt19937_64 &rng, std::size_t num_languages,
                                   std::size_t num_segments, bool ties) {
  ScoreTable t;
  t.num_languages = num_languages;
  std::uniform_int_distribution<int> pick(0, static_cast<int>(num_languages) - 1);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> sep(0.0, 2.0);
  const double separation = sep(rng);
  for (std::size_t s = 0; s < num_segments; ++s) {
    int label = s < num_languages ? static_cast<int>(s) : pick(rng);
    t.labels.push_back(label);
    std::vector<double> row(num_languages);
    for (std::size_t l = 0; l < num_languages; ++l) {
      double v = noise(rng) + (static_cast<int>(l) == label ? separation : 0.0);
      row[l] = ties ? std::round(v * 10.0) / 10.0 : v;
    }
    t.scores.push_back(row);
  }
  return t;
}

/// C_avg at a fixed threshold by direct counting over the table.
inline double CavgAtThreshold(const ScoreTable &t, double theta, double p_target) {
  const std::size_t n = t.num_languages;
  const double p_nt = (1.0 - p_target) / static_cast<double>(n - 1);
  std::vector<std::size_t> count(n, 0);
  for (int l : t.labels)
    if (l >= 0) ++count[static_cast<std::size_t>(l)];
  double total = 0.0;
  for (std::size_t tl = 0; tl < n; ++tl) {
    std::size_t miss = 0;
    for (std::size_t s = 0; s < t.labels.size(); ++s)
      if (t.labels[s] == static_cast<int>(tl) && t.scores[s][tl] < theta) ++miss;
    double term = p_target * (static_cast<double>(miss) / static_cast<double>(count[tl]));
    for (std::size_t nl = 0; nl < n; ++nl) {
      if (nl == tl) continue;
      std::size_t fa = 0;
      for (std::size_t s = 0; s < t.labels.size(); ++s)
        if (t.labels[s] == static_cast<int>(nl) && t.scores[s][tl] >= theta) ++fa;
      term += p_nt * (static_cast<double>(fa) / static_cast<double>(count[nl]));
    }
    total += term;
  }
  return total / static_cast<double>(n);
}

/// Every distinct score (segments with in-set labels) plus both infinities.
inline std::vector<double> CandidateThresholds(const ScoreTable &t) {
  std::set<double> values = {-std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()};
  for (std::size_t s = 0; s < t.labels.size(); ++s)
    if (t.labels[s] >= 0)
      for (double v : t.scores[s]) values.insert(v);
  return {values.begin(), values.end()};
}

/// Minimum of CavgAtThreshold over all candidate thresholds.
inline double MinCavgBruteForce(const ScoreTable &t, double p_target) {
  double best = std::numeric_limits<double>::infinity();
  for (double theta : CandidateThresholds(t))
    best = std::min(best, CavgAtThreshold(t, theta, p_target));
  return best;
}

struct Rates {
  double p_miss;
  double p_fa;
};

/// Pooled miss/false-alarm at threshold theta (accept score >= theta).
inline Rates PooledRates(const std::vector<double> &target,
                         const std::vector<double> &nontarget, double theta) {
  std::size_t miss = 0, fa = 0;
  for (double v : target) miss += v < theta;
  for (double v : nontarget) fa += v >= theta;
  return {static_cast<double>(miss) / static_cast<double>(target.size()),
          static_cast<double>(fa) / static_cast<double>(nontarget.size())};
}

/// EER by exhaustive sweep: the rates at -inf, at every distinct score and
/// at reject-all; the first sign change of p_miss - p_fa is interpolated
/// linearly.
inline double EerBruteForce(const std::vector<double> &target,
                            const std::vector<double> &nontarget) {
  std::set<double> values(target.begin(), target.end());
  values.insert(nontarget.begin(), nontarget.end());
  std::vector<Rates> pts = {{0.0, 1.0}};
  for (double v : values) pts.push_back(PooledRates(target, nontarget, v));
  pts.push_back({1.0, 0.0});
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d0 = pts[i - 1].p_miss - pts[i - 1].p_fa;
    const double d1 = pts[i].p_miss - pts[i].p_fa;
    if (d0 < 0.0 && d1 >= 0.0) {
      if (d1 == 0.0) return pts[i].p_miss;
      const double a = d0 / (d0 - d1);
      return pts[i - 1].p_miss + a * (pts[i].p_miss - pts[i - 1].p_miss);
    }
  }
  return pts.front().p_miss;
}

/// Same minimum as MinCavgBruteForce, but every count comes from a binary
/// search over the sorted column of each (hypothesis, true language) pair,
/// so large tables stay cheap.
inline double MinCavgSorted(const ScoreTable &t, double p_target) {
  const std::size_t n = t.num_languages;
  const double p_nt = (1.0 - p_target) / static_cast<double>(n - 1);
  // cols[h][l]: sorted scores for hypothesis h over segments of language l.
  std::vector<std::vector<std::vector<double>>> cols(n, std::vector<std::vector<double>>(n));
  for (std::size_t s = 0; s < t.labels.size(); ++s)
    if (t.labels[s] >= 0)
      for (std::size_t h = 0; h < n; ++h)
        cols[h][static_cast<std::size_t>(t.labels[s])].push_back(t.scores[s][h]);
  for (auto &row : cols)
    for (auto &c : row) std::sort(c.begin(), c.end());
  auto below = [](const std::vector<double> &c, double theta) {
    return static_cast<double>(std::lower_bound(c.begin(), c.end(), theta) - c.begin());
  };
  double best = std::numeric_limits<double>::infinity();
  for (double theta : CandidateThresholds(t)) {
    double total = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
      const auto &own = cols[h][h];
      double term = p_target * (below(own, theta) / static_cast<double>(own.size()));
      for (std::size_t l = 0; l < n; ++l) {
        if (l == h) continue;
        const auto &other = cols[h][l];
        const double accepted = static_cast<double>(other.size()) - below(other, theta);
        term += p_nt * (accepted / static_cast<double>(other.size()));
      }
      total += term;
    }
    best = std::min(best, total / static_cast<double>(n));
  }
  return best;
}

/// EerBruteForce with rates from binary searches over sorted copies.
inline double EerSorted(std::vector<double> target, std::vector<double> nontarget) {
  std::sort(target.begin(), target.end());
  std::sort(nontarget.begin(), nontarget.end());
  std::vector<double> values(target);
  values.insert(values.end(), nontarget.begin(), nontarget.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  auto rates = [&](double theta) {
    const double miss = static_cast<double>(
        std::lower_bound(target.begin(), target.end(), theta) - target.begin());
    const double fa = static_cast<double>(
        nontarget.end() - std::lower_bound(nontarget.begin(), nontarget.end(), theta));
    return Rates{miss / static_cast<double>(target.size()),
                 fa / static_cast<double>(nontarget.size())};
  };
  std::vector<Rates> pts = {{0.0, 1.0}};
  for (double v : values) pts.push_back(rates(v));
  pts.push_back({1.0, 0.0});
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d0 = pts[i - 1].p_miss - pts[i - 1].p_fa;
    const double d1 = pts[i].p_miss - pts[i].p_fa;
    if (d0 < 0.0 && d1 >= 0.0) {
      if (d1 == 0.0) return pts[i].p_miss;
      const double a = d0 / (d0 - d1);
      return pts[i - 1].p_miss + a * (pts[i].p_miss - pts[i - 1].p_miss);
    }
  }
  return pts.front().p_miss;
}

/// Pooled trials straight from the table (out-of-set rows are non-targets).
inline void PoolTable(const ScoreTable &t, std::vector<double> *target,
                      std::vector<double> *nontarget) {
  for (std::size_t s = 0; s < t.labels.size(); ++s)
    for (std::size_t l = 0; l < t.num_languages; ++l)
      (t.labels[s] == static_cast<int>(l) ? target : nontarget)->push_back(t.scores[s][l]);
}

/// Straight-line forward pass of the embedding network: explicit loops, no
/// caching, no kernels. Returns {segment6 affine output, log posteriors}.
inline std::pair<std::vector<double>, std::vector<double>> NaiveForward(
    const NetworkParams &params, const Matrix &input) {
  const auto &layers = params.layers();
  const std::size_t nf = params.num_frame_layers();
  std::vector<std::vector<double>> cur(input.rows(), std::vector<double>(input.cols()));
  for (std::size_t t = 0; t < input.rows(); ++t)
    for (std::size_t d = 0; d < input.cols(); ++d) cur[t][d] = input(t, d);

  for (std::size_t l = 0; l < nf; ++l) {
    const auto &ctx = layers[l].profile.context;
    const int lo = ctx.front(), hi = ctx.back();
    std::vector<std::vector<double>> next;
    for (int t = -lo; t + hi < static_cast<int>(cur.size()); ++t) {
      std::vector<double> spliced;
      for (int off : ctx)
        for (double v : cur[static_cast<std::size_t>(t + off)]) spliced.push_back(v);
      std::vector<double> out(layers[l].profile.out_dim);
      for (std::size_t o = 0; o < out.size(); ++o) {
        double z = layers[l].bias[o];
        for (std::size_t i = 0; i < spliced.size(); ++i) z += layers[l].weight(o, i) * spliced[i];
        out[o] = z > 0.0 ? z : 0.0;
      }
      next.push_back(out);
    }
    cur = next;
  }

  const std::size_t dim = cur.front().size();
  std::vector<double> pooled(2 * dim);
  for (std::size_t d = 0; d < dim; ++d) {
    double mean = 0.0;
    for (const auto &row : cur) mean += row[d];
    mean /= static_cast<double>(cur.size());
    double var = 0.0;
    for (const auto &row : cur) var += (row[d] - mean) * (row[d] - mean);
    pooled[d] = mean;
    pooled[dim + d] = std::sqrt(var / static_cast<double>(cur.size()));
  }

  auto affine = [](const AffineLayer &layer, const std::vector<double> &x) {
    std::vector<double> y(layer.profile.out_dim);
    for (std::size_t o = 0; o < y.size(); ++o) {
      double z = layer.bias[o];
      for (std::size_t i = 0; i < x.size(); ++i) z += layer.weight(o, i) * x[i];
      y[o] = z;
    }
    return y;
  };
  auto relu = [](std::vector<double> v) {
    for (double &x : v) x = x > 0.0 ? x : 0.0;
    return v;
  };
  std::vector<double> xvec = affine(layers[nf], pooled);
  std::vector<double> h7 = relu(affine(layers[nf + 1], relu(xvec)));
  std::vector<double> logits = affine(layers[nf + 2], h7);
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  double z = 0.0;
  for (double v : logits) z += std::exp(v - m);
  std::vector<double> logp(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) logp[i] = logits[i] - m - std::log(z);
  return {xvec, logp};
}

/// |a - b| / max(|a|, |b|, floor).
inline double RelativeError(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace olr::oracle

#endif  // OLR_TESTS_ORACLES_H_
