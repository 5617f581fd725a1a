// src/submission.cc

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

#include "olr/submission.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string_view>
#include <unordered_set>

#include "olr/error.h"

namespace olr {

namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool IsSkippable(const std::vector<std::string_view> &tokens) {
  return tokens.empty() || tokens.front().front() == '#';
}

[[noreturn]] void Fail(Errc code, const std::string &source, std::size_t line,
                       const std::string &message) {
  throw Error(code, source + ":" + std::to_string(line) + ": " + message, line);
}

// Full-token parse; accepts a leading '+', which from_chars does not.
bool ParseDouble(std::string_view token, double *out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty() || token.front() == '+') return false;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), *out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

TrialKey::TrialKey(std::vector<std::string> languages)
    : languages_(std::move(languages)) {
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (languages_[i] == kOutOfSetToken)
      throw Error(Errc::kMalformedLine, "'OOS' is reserved and cannot be a language");
    if (!language_index_.emplace(languages_[i], static_cast<int>(i)).second)
      throw Error(Errc::kMalformedLine,
                  "language '" + languages_[i] + "' listed twice");
  }
}

void TrialKey::Add(const std::string &segment_id, const std::string &language) {
  if (language == kOutOfSetToken) {
    AddOutOfSet(segment_id);
    return;
  }
  auto lang = LanguageIndex(language);
  if (!lang)
    throw Error(Errc::kUnknownLanguage, "unknown language '" + language + "'");
  if (!entry_index_.emplace(segment_id, entries_.size()).second)
    throw Error(Errc::kDuplicateSegment, "duplicate segment '" + segment_id + "'");
  entries_.push_back({segment_id, *lang});
}

void TrialKey::AddOutOfSet(const std::string &segment_id) {
  if (!entry_index_.emplace(segment_id, entries_.size()).second)
    throw Error(Errc::kDuplicateSegment, "duplicate segment '" + segment_id + "'");
  entries_.push_back({segment_id, kOutOfSet});
}

std::optional<int> TrialKey::LanguageIndex(const std::string &language) const {
  auto it = language_index_.find(language);
  if (it == language_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> TrialKey::Find(const std::string &segment_id) const {
  auto it = entry_index_.find(segment_id);
  if (it == entry_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<ScoreRecord> ParseScores(std::istream &is, std::size_t num_languages,
                                     const std::string &source) {
  std::vector<ScoreRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto tokens = SplitWhitespace(line);
    if (IsSkippable(tokens)) continue;
    if (tokens.size() - 1 != num_languages) {
      Fail(Errc::kArityMismatch, source, line_no,
           "expected " + std::to_string(num_languages) + " scores, found " +
               std::to_string(tokens.size() - 1));
    }
    ScoreRecord record;
    record.segment_id = std::string(tokens[0]);
    record.scores.reserve(num_languages);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      double value = 0.0;
      if (!ParseDouble(tokens[i], &value)) {
        Fail(Errc::kMalformedLine, source, line_no,
             "bad score token '" + std::string(tokens[i]) + "'");
      }
      if (std::isnan(value))
        Fail(Errc::kNaNScore, source, line_no, "NaN score");
      record.scores.push_back(value);
    }
    if (!seen.insert(record.segment_id).second) {
      Fail(Errc::kDuplicateSegment, source, line_no,
           "duplicate segment '" + record.segment_id + "'");
    }
    records.push_back(std::move(record));
  }
  if (is.bad()) throw Error(Errc::kIo, source + ": read error");
  return records;
}

std::string FormatScore(double value) {
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void WriteScores(std::ostream &os, const std::vector<ScoreRecord> &records) {
  for (const auto &record : records) {
    os << record.segment_id;
    for (double s : record.scores) os << ' ' << FormatScore(s);
    os << '\n';
  }
}

TrialKey ParseKey(std::istream &is, const std::string &source) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<TrialKey> key;
  while (std::getline(is, line)) {
    ++line_no;
    auto tokens = SplitWhitespace(line);
    if (IsSkippable(tokens)) continue;
    if (!key) {
      std::vector<std::string> languages(tokens.begin(), tokens.end());
      try {
        key.emplace(std::move(languages));
      } catch (const Error &e) {
        Fail(e.code(), source, line_no, e.what());
      }
      continue;
    }
    if (tokens.size() != 2) {
      Fail(Errc::kMalformedLine, source, line_no,
           "expected 'segment_id language'");
    }
    try {
      key->Add(std::string(tokens[0]), std::string(tokens[1]));
    } catch (const Error &e) {
      Fail(e.code(), source, line_no, e.what());
    }
  }
  if (!key) throw Error(Errc::kMalformedLine, source + ": missing language header");
  return std::move(*key);
}

void WriteKey(std::ostream &os, const TrialKey &key) {
  const auto &langs = key.languages();
  for (std::size_t i = 0; i < langs.size(); ++i)
    os << (i ? " " : "") << langs[i];
  os << '\n';
  for (const auto &entry : key.entries()) {
    os << entry.segment_id << ' '
       << (entry.language == kOutOfSet ? std::string(kOutOfSetToken)
                                       : langs[entry.language])
       << '\n';
  }
}

FillResult FillMissing(const std::vector<ScoreRecord> &records,
                       const TrialKey &key) {
  FillResult result;
  std::vector<bool> present(key.entries().size(), false);
  for (const auto &record : records) {
    auto idx = key.Find(record.segment_id);
    if (!idx) {
      result.extras.push_back(record.segment_id);
      continue;
    }
    present[*idx] = true;
    result.records.push_back(record);
  }
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < present.size(); ++i) {
    if (present[i]) continue;
    const auto &id = key.entries()[i].segment_id;
    result.lost.push_back(id);
    result.records.push_back(
        {id, std::vector<double>(key.num_languages(), neg_inf)});
  }
  return result;
}

}  // namespace olr
