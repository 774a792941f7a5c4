// matdnn/annotation.h

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

#ifndef MATDNN_ANNOTATION_H_
#define MATDNN_ANNOTATION_H_

#include <string>
#include <vector>

namespace matdnn {

struct AnnSegment {
  int start = 0;  // frame index, inclusive
  int end = 0;    // frame index, exclusive
  std::string symbol;
};

struct UttAnnotation {
  std::string utterance_id;
  std::string speaker_id;
  std::vector<AnnSegment> phones;
  std::vector<AnnSegment> words;
};

using Annotation = std::vector<UttAnnotation>;

// Tiers must be contiguous and non-overlapping; word segments must align to
// phone segment boundaries. Throws on violation.
void CheckAnnotation(const Annotation& ann);

// CSV lines: utterance_id,tier,start_frame,end_frame,symbol,speaker_id
void WriteAnnotationCsv(const Annotation& ann, const std::string& path);
Annotation ReadAnnotationCsv(const std::string& path);

}  // namespace matdnn

#endif  // MATDNN_ANNOTATION_H_
