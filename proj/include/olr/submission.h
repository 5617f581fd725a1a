// olr/submission.h

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

#ifndef OLR_SUBMISSION_H_
#define OLR_SUBMISSION_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace olr {

/// One line of a submission: a segment and its per-language confidences.
/// Column i belongs to the i-th language of the trial key header.
struct ScoreRecord {
  std::string segment_id;
  std::vector<double> scores;

  bool operator==(const ScoreRecord &) const = default;
};

/// Language index used for segments whose true language is outside the
/// evaluated set.
inline constexpr int kOutOfSet = -1;
inline constexpr const char *kOutOfSetToken = "OOS";

struct KeyEntry {
  std::string segment_id;
  int language = kOutOfSet;  // index into TrialKey::languages, or kOutOfSet

  bool operator==(const KeyEntry &) const = default;
};

/// Ground truth for an evaluation. Entries keep file order.
class TrialKey {
 public:
  TrialKey() = default;
  explicit TrialKey(std::vector<std::string> languages);

  /// Throws kUnknownLanguage or kDuplicateSegment.
  void Add(const std::string &segment_id, const std::string &language);
  void AddOutOfSet(const std::string &segment_id);

  const std::vector<std::string> &languages() const { return languages_; }
  std::size_t num_languages() const { return languages_.size(); }
  const std::vector<KeyEntry> &entries() const { return entries_; }

  /// Index of `language` in the header, or nullopt.
  std::optional<int> LanguageIndex(const std::string &language) const;
  /// Index of the segment's entry, or nullopt.
  std::optional<std::size_t> Find(const std::string &segment_id) const;

 private:
  std::vector<std::string> languages_;
  std::unordered_map<std::string, int> language_index_;
  std::vector<KeyEntry> entries_;
  std::unordered_map<std::string, std::size_t> entry_index_;
};

/// Reads a score file: one "segment_id s_1 ... s_N" line per segment. Blank
/// lines and lines starting with '#' are skipped. `source` prefixes
/// diagnostics ("file:line: message"). Throws olr::Error carrying the line.
std::vector<ScoreRecord> ParseScores(std::istream &is,
                                     std::size_t num_languages,
                                     const std::string &source = "<scores>");

/// Writes records with 9 significant digits; infinities as "inf"/"-inf".
void WriteScores(std::ostream &os, const std::vector<ScoreRecord> &records);

/// Formats one score the way WriteScores does.
std::string FormatScore(double value);

/// Reads a key: a header line listing the languages in column order, then
/// "segment_id language" lines where language may be "OOS".
TrialKey ParseKey(std::istream &is, const std::string &source = "<key>");
void WriteKey(std::ostream &os, const TrialKey &key);

struct FillResult {
  std::vector<ScoreRecord> records;
  std::vector<std::string> lost;    // key segments that had no score line
  std::vector<std::string> extras;  // score lines not in the key, dropped
};

/// Lost trials are appended with every score set to -inf; segments the key
/// does not know are dropped and reported.
FillResult FillMissing(const std::vector<ScoreRecord> &records,
                       const TrialKey &key);

}  // namespace olr

#endif  // OLR_SUBMISSION_H_
