// olr/config.h

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

#ifndef OLR_CONFIG_H_
#define OLR_CONFIG_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace olr {

/// Flat "key = value" configuration. Blank lines and '#' comments are
/// ignored. Later assignments override earlier ones, so command-line
/// overrides are applied with Set() after Read().
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig FromFile(const std::string &path);
  static KeyValueConfig FromStream(std::istream &is,
                                   const std::string &source = "<stream>");

  void Set(const std::string &key, const std::string &value);
  /// Parses "key=value"; throws kInvalidConfig on a missing '='.
  void SetAssignment(std::string_view assignment);

  bool Has(const std::string &key) const;
  std::optional<std::string> Get(const std::string &key) const;

  std::string GetString(const std::string &key, const std::string &def) const;
  double GetDouble(const std::string &key, double def) const;
  int64_t GetInt(const std::string &key, int64_t def) const;
  bool GetBool(const std::string &key, bool def) const;
  /// Whitespace- or comma-separated list.
  std::vector<std::string> GetList(const std::string &key,
                                   const std::vector<std::string> &def) const;

  const std::map<std::string, std::string> &entries() const { return entries_; }

  /// 64-bit FNV-1a over the sorted entries; stable across platforms.
  uint64_t Hash() const;

 private:
  std::map<std::string, std::string> entries_;
};

std::string HexHash(uint64_t hash);

}  // namespace olr

#endif  // OLR_CONFIG_H_
