// src/config.cc

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

#include "olr/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "olr/error.h"

namespace olr {

namespace {

std::string_view Trim(std::string_view s) {
  const char *ws = " \t\r\n";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

}  // namespace

const char *ErrcName(Errc code) {
  switch (code) {
    case Errc::kMalformedLine: return "MalformedLine";
    case Errc::kArityMismatch: return "ArityMismatch";
    case Errc::kDuplicateSegment: return "DuplicateSegment";
    case Errc::kNaNScore: return "NaNScore";
    case Errc::kUnknownLanguage: return "UnknownLanguage";
    case Errc::kEmptyTrialSet: return "EmptyTrialSet";
    case Errc::kMissingSegment: return "MissingSegment";
    case Errc::kInconsistentLanguageSet: return "InconsistentLanguageSet";
    case Errc::kTooShort: return "TooShort";
    case Errc::kInvalidConfig: return "InvalidConfig";
    case Errc::kUnsupportedAudio: return "UnsupportedAudio";
    case Errc::kAllFramesRemoved: return "AllFramesRemoved";
    case Errc::kTooFewFrames: return "TooFewFrames";
    case Errc::kNonFiniteLoss: return "NonFiniteLoss";
    case Errc::kCorruptModel: return "CorruptModel";
    case Errc::kDimMismatch: return "DimMismatch";
    case Errc::kNoUsableReferences: return "NoUsableReferences";
    case Errc::kZeroNormVector: return "ZeroNormVector";
    case Errc::kInvalidProfile: return "InvalidProfile";
    case Errc::kInvalidPlan: return "InvalidPlan";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

KeyValueConfig KeyValueConfig::FromFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::kIo, "cannot open config file " + path);
  return FromStream(is, path);
}

KeyValueConfig KeyValueConfig::FromStream(std::istream &is,
                                          const std::string &source) {
  KeyValueConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = Trim(view);
    if (view.empty()) continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kInvalidConfig,
                  source + ":" + std::to_string(line_no) +
                      ": expected key = value",
                  line_no);
    }
    auto key = Trim(view.substr(0, eq));
    if (key.empty()) {
      throw Error(Errc::kInvalidConfig,
                  source + ":" + std::to_string(line_no) + ": empty key",
                  line_no);
    }
    config.Set(std::string(key), std::string(Trim(view.substr(eq + 1))));
  }
  return config;
}

void KeyValueConfig::Set(const std::string &key, const std::string &value) {
  entries_[key] = value;
}

void KeyValueConfig::SetAssignment(std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || Trim(assignment.substr(0, eq)).empty())
    throw Error(Errc::kInvalidConfig,
                "bad override '" + std::string(assignment) + "', want key=value");
  Set(std::string(Trim(assignment.substr(0, eq))),
      std::string(Trim(assignment.substr(eq + 1))));
}

bool KeyValueConfig::Has(const std::string &key) const {
  return entries_.count(key) != 0;
}

std::optional<std::string> KeyValueConfig::Get(const std::string &key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::GetString(const std::string &key,
                                      const std::string &def) const {
  return Get(key).value_or(def);
}

double KeyValueConfig::GetDouble(const std::string &key, double def) const {
  auto v = Get(key);
  if (!v) return def;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size())
    throw Error(Errc::kInvalidConfig, "config key '" + key +
                                          "' is not a number: " + *v);
  return out;
}

int64_t KeyValueConfig::GetInt(const std::string &key, int64_t def) const {
  auto v = Get(key);
  if (!v) return def;
  int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size())
    throw Error(Errc::kInvalidConfig, "config key '" + key +
                                          "' is not an integer: " + *v);
  return out;
}

bool KeyValueConfig::GetBool(const std::string &key, bool def) const {
  auto v = Get(key);
  if (!v) return def;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw Error(Errc::kInvalidConfig,
              "config key '" + key + "' is not a boolean: " + *v);
}

std::vector<std::string> KeyValueConfig::GetList(
    const std::string &key, const std::vector<std::string> &def) const {
  auto v = Get(key);
  if (!v) return def;
  std::string s = *v;
  for (char &c : s)
    if (c == ',') c = ' ';
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

uint64_t KeyValueConfig::Hash() const {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  for (const auto &[k, v] : entries_) {
    mix(k);
    mix(v);
  }
  return h;
}

std::string HexHash(uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace olr
