// matdnn/reinforce.h

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

#ifndef MATDNN_REINFORCE_H_
#define MATDNN_REINFORCE_H_

#include <map>
#include <string>
#include <vector>

#include "matdnn/grid.h"
#include "matdnn/lda.h"
#include "matdnn/tokenizer.h"

namespace matdnn {

// Binary boundary indicator per juncture j in [1, T-1]; index j-1 marks the
// boundary between frames j-1 and j.
struct BoundaryFunction {
  std::string utterance_id;
  std::vector<uint8_t> b;
};

// Weighted average of per-layer boundary functions, values in [0, 1].
struct FusedBoundary {
  std::string utterance_id;
  std::vector<double> value;
};

// A re-segmented interval viewed as a bag of (layer, token) words; word ids
// are flattened as layer_offset + token_id.
struct SegmentDocument {
  std::string utterance_id;
  int start = 0;
  int end = 0;
  std::vector<int> words;  // with multiplicity
};

struct PeakOptions {
  int smooth_width = 3;   // odd; triangular kernel
  double threshold = 0.4;
  int min_gap = 3;        // frames
};

struct ReinforceOptions {
  PeakOptions peaks;
  double lda_alpha = 0.0;  // 0: 50/K
  double lda_beta = 0.01;
  int lda_iterations = 200;
  uint64_t seed = 0;
  int num_threads = 1;
};

// Ones exactly at internal segment starts.
std::vector<BoundaryFunction> LayerBoundaries(const TokenLabeling& labeling);

// B(j) = sum over layers of w_mn * b_mn(j), with w_mn = m / sum(m). Longer
// HMMs produce fewer boundaries, so their votes weigh more.
std::vector<FusedBoundary> FuseBoundaries(
    const std::vector<std::vector<BoundaryFunction>>& per_layer,
    const LayerGrid& grid);

// Triangular-kernel smoothing, threshold plus local-peak criterion, min_gap
// pruning that keeps the higher (tie: leftmost) peak. Never selects a
// juncture where the raw B is zero; empty selection yields one segment.
std::vector<int> PickPeaks(const FusedBoundary& fb, const PeakOptions& opts);

// Intervals [start, end) per utterance implied by the picked peaks.
std::vector<std::pair<int, int>> PeaksToSegments(const std::vector<int>& peaks,
                                                 int num_frames);

// One word per (layer, token) segment overlapping the interval by >= 1 frame.
std::vector<SegmentDocument> BuildDocuments(
    const std::vector<std::vector<std::pair<int, int>>>& new_segments,
    const LayerSet& layer_set);

int VocabularySize(const LayerSet& layer_set);

// Full mutual-reinforcement round: fuse boundaries, re-segment, LDA-label
// each new segment (one run per distinct n, K = n), and emit a fresh initial
// label set per layer. Segments shorter than a layer's m are merged into
// their left neighbor for that layer only.
std::map<HyperParams, TokenLabeling> Reinforce(const LayerSet& layer_set,
                                               const Corpus& corpus,
                                               const LayerGrid& grid,
                                               const ReinforceOptions& opts);

// MR artifacts.
void WriteBoundariesCsv(const std::vector<FusedBoundary>& fbs, const std::string& path);
void WriteDocumentsCsv(const std::vector<SegmentDocument>& docs, const std::string& path);

}  // namespace matdnn

#endif  // MATDNN_REINFORCE_H_
