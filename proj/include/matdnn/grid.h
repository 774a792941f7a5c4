// matdnn/grid.h

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

#ifndef MATDNN_GRID_H_
#define MATDNN_GRID_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matdnn/tokenizer.h"

namespace matdnn {

// The M x N granularity grid: every (m, n) pair is one layer.
struct LayerGrid {
  std::vector<int> temporal;  // m values, strictly increasing
  std::vector<int> phonetic;  // n values, strictly increasing

  int NumLayers() const {
    return static_cast<int>(temporal.size() * phonetic.size());
  }
  // Layers in (m, n) sorted order.
  std::vector<HyperParams> Layers() const;
  void Check() const;

  static LayerGrid PaperDefault() { return {{3, 5, 7, 9}, {50, 100, 300, 500}}; }
};

struct LayerEntry {
  HyperParams psi;
  TokenSetModel model;
  TokenLabeling labeling;
  TrainLayerReport report;
};

struct LayerSet {
  std::vector<LayerEntry> layers;  // (m, n) sorted order
  uint64_t corpus_fingerprint = 0;

  int NumLayers() const { return static_cast<int>(layers.size()); }
  const LayerEntry& At(const HyperParams& psi) const;
};

// One TrainLayer per grid point, mutually independent; per-layer seeds derive
// from (seed, m, n) so results do not depend on scheduling.
LayerSet TrainGrid(const Corpus& corpus, const LayerGrid& grid,
                   const TokenizerOptions& opts,
                   const std::map<HyperParams, TokenLabeling>* initial_labels = nullptr);

// Directory layout: <dir>/m{m}_n{n}/model.matm and labels.csv.
void SaveLayerSet(const LayerSet& set, const std::string& dir);
LayerSet LoadLayerSet(const std::string& dir, const LayerGrid& grid,
                      const Corpus& corpus);

}  // namespace matdnn

#endif  // MATDNN_GRID_H_
