// matdnn/config.cc

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

#include "matdnn/config.h"

#include <algorithm>
#include <sstream>

#include "matdnn/common.h"
#include "matdnn/io.h"

namespace matdnn {

namespace {

std::string Trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<std::string>& RunConfig::KnownKeys() {
  static const std::vector<std::string> kKeys = {
      "corpus.dir",
      "run.dir",
      "grid.temporal",
      "grid.phonetic",
      "pipeline.iterations",
      "pipeline.mr_rounds",
      "pipeline.context_radius",
      "tokenizer.max_iters",
      "tokenizer.label_change_tol",
      "tokenizer.lm_weight",
      "tokenizer.init_seg_len",
      "mr.smooth_width",
      "mr.threshold",
      "mr.min_gap",
      "mr.lda_iterations",
      "mr.lda_beta",
      "mdnn.hidden",
      "mdnn.bottleneck",
      "mdnn.learn_rate",
      "mdnn.epochs",
      "mdnn.batch_size",
      "eval.abx",
      "eval.track2",
      "eval.abx_cap",
      "eval.collapse_context",
      "eval.boundary_tol",
      "seed",
      "threads",
  };
  return kKeys;
}

RunConfig RunConfig::FromFile(const std::string& path) {
  return FromText(ReadTextFile(path));
}

RunConfig RunConfig::FromText(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  const auto& known = KnownKeys();
  while (std::getline(is, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    MATDNN_CHECK(eq != std::string::npos,
                 "config line " << line_no << " is not 'key = value': '" << line << "'");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    MATDNN_CHECK(std::find(known.begin(), known.end(), key) != known.end(),
                 "unknown config key '" << key << "' at line " << line_no);
    cfg.values_[key] = value;
  }
  return cfg;
}

std::string RunConfig::GetString(const std::string& key, const std::string& def) const {
  auto it = values_.find(key);
  return it == values_.end() ? def : it->second;
}

int RunConfig::GetInt(const std::string& key, int def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  try {
    return std::stoi(it->second);
  } catch (...) {
    MATDNN_ERR("config key '" << key << "' is not an integer: '" << it->second << "'");
  }
}

double RunConfig::GetDouble(const std::string& key, double def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  try {
    return std::stod(it->second);
  } catch (...) {
    MATDNN_ERR("config key '" << key << "' is not a number: '" << it->second << "'");
  }
}

bool RunConfig::GetBool(const std::string& key, bool def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  MATDNN_ERR("config key '" << key << "' is not a boolean: '" << it->second << "'");
}

std::vector<int> RunConfig::GetIntList(const std::string& key,
                                       const std::vector<int>& def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  std::vector<int> out;
  std::istringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (...) {
      MATDNN_ERR("config key '" << key << "' has a non-integer entry: '" << item << "'");
    }
  }
  MATDNN_CHECK(!out.empty(), "config key '" << key << "' is an empty list");
  return out;
}

void RunConfig::Set(const std::string& key, const std::string& value) {
  const auto& known = KnownKeys();
  MATDNN_CHECK(std::find(known.begin(), known.end(), key) != known.end(),
               "unknown config key '" << key << "'");
  values_[key] = value;
}

std::string RunConfig::Canonical() const {
  std::ostringstream os;
  for (const auto& [key, value] : values_) os << key << " = " << value << "\n";
  return os.str();
}

uint64_t RunConfig::Hash() const { return Fnv1a(Canonical()); }

}  // namespace matdnn
