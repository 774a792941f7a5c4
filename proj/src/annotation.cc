// matdnn/annotation.cc

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

#include "matdnn/annotation.h"

#include <set>
#include <sstream>

#include "matdnn/common.h"
#include "matdnn/io.h"

namespace matdnn {

namespace {

void CheckTier(const std::vector<AnnSegment>& tier, const std::string& utt,
               const char* name) {
  for (size_t i = 0; i < tier.size(); ++i) {
    MATDNN_CHECK(tier[i].start < tier[i].end,
                 "utterance '" << utt << "': empty " << name << " segment at index " << i);
    if (i > 0)
      MATDNN_CHECK(tier[i].start == tier[i - 1].end,
                   "utterance '" << utt << "': " << name << " tier not contiguous at index " << i);
  }
}

}  // namespace

void CheckAnnotation(const Annotation& ann) {
  for (const auto& utt : ann) {
    CheckTier(utt.phones, utt.utterance_id, "phone");
    CheckTier(utt.words, utt.utterance_id, "word");
    if (utt.words.empty()) continue;
    std::set<int> phone_edges;
    for (const auto& p : utt.phones) {
      phone_edges.insert(p.start);
      phone_edges.insert(p.end);
    }
    for (const auto& w : utt.words) {
      MATDNN_CHECK(phone_edges.count(w.start) && phone_edges.count(w.end),
                   "utterance '" << utt.utterance_id << "': word [" << w.start
                                 << "," << w.end << ") not aligned to phone boundaries");
    }
  }
}

void WriteAnnotationCsv(const Annotation& ann, const std::string& path) {
  std::ostringstream os;
  for (const auto& utt : ann) {
    for (const auto& p : utt.phones)
      os << utt.utterance_id << ",phone," << p.start << "," << p.end << ","
         << p.symbol << "," << utt.speaker_id << "\n";
    for (const auto& w : utt.words)
      os << utt.utterance_id << ",word," << w.start << "," << w.end << ","
         << w.symbol << "," << utt.speaker_id << "\n";
  }
  WriteTextFile(path, os.str());
}

Annotation ReadAnnotationCsv(const std::string& path) {
  Annotation ann;
  int idx = -1;
  for (const auto& line : ReadLines(path)) {
    if (line.empty()) continue;
    auto f = SplitCsvLine(line);
    MATDNN_CHECK(f.size() == 6, "'" << path << "': bad annotation line '" << line << "'");
    if (idx < 0 || ann[idx].utterance_id != f[0]) {
      ann.push_back({f[0], f[5], {}, {}});
      idx = static_cast<int>(ann.size()) - 1;
    }
    AnnSegment seg{std::stoi(f[2]), std::stoi(f[3]), f[4]};
    if (f[1] == "phone") {
      ann[idx].phones.push_back(seg);
    } else if (f[1] == "word") {
      ann[idx].words.push_back(seg);
    } else {
      MATDNN_ERR("'" << path << "': unknown tier '" << f[1] << "'");
    }
  }
  CheckAnnotation(ann);
  return ann;
}

}  // namespace matdnn
