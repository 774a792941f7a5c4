// matdnn/config.h

// Copyright 2026  MAT-DNN project

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

#ifndef MATDNN_CONFIG_H_
#define MATDNN_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace matdnn {

// Line-oriented "key = value" configuration with dotted section prefixes.
// '#' starts a comment; unknown keys are rejected against a documented list.
class RunConfig {
 public:
  static RunConfig FromFile(const std::string& path);
  static RunConfig FromText(const std::string& text);

  bool Has(const std::string& key) const { return values_.count(key) > 0; }
  std::string GetString(const std::string& key, const std::string& def) const;
  int GetInt(const std::string& key, int def) const;
  double GetDouble(const std::string& key, double def) const;
  bool GetBool(const std::string& key, bool def) const;
  std::vector<int> GetIntList(const std::string& key, const std::vector<int>& def) const;
  void Set(const std::string& key, const std::string& value);

  // Canonical sorted "key = value" text; what the config hash covers.
  std::string Canonical() const;
  uint64_t Hash() const;

  static const std::vector<std::string>& KnownKeys();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace matdnn

#endif  // MATDNN_CONFIG_H_
