// matdnn/grid.cc

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

#include "matdnn/grid.h"

#include <filesystem>

#include "matdnn/io.h"

namespace matdnn {

namespace fs = std::filesystem;

std::vector<HyperParams> LayerGrid::Layers() const {
  std::vector<HyperParams> out;
  for (int m : temporal)
    for (int n : phonetic) out.push_back({m, n});
  return out;
}

void LayerGrid::Check() const {
  MATDNN_CHECK(!temporal.empty() && !phonetic.empty(), "grid must be non-empty");
  for (size_t i = 0; i < temporal.size(); ++i) {
    MATDNN_CHECK(temporal[i] >= 1, "temporal granularity m must be >= 1");
    if (i > 0)
      MATDNN_CHECK(temporal[i] > temporal[i - 1], "temporal values must be strictly increasing");
  }
  for (size_t i = 0; i < phonetic.size(); ++i) {
    MATDNN_CHECK(phonetic[i] >= 2, "phonetic granularity n must be >= 2");
    if (i > 0)
      MATDNN_CHECK(phonetic[i] > phonetic[i - 1], "phonetic values must be strictly increasing");
  }
}

const LayerEntry& LayerSet::At(const HyperParams& psi) const {
  for (const auto& layer : layers)
    if (layer.psi == psi) return layer;
  MATDNN_ERR("layer (m=" << psi.m << ", n=" << psi.n << ") not in layer set");
}

LayerSet TrainGrid(const Corpus& corpus, const LayerGrid& grid,
                   const TokenizerOptions& opts,
                   const std::map<HyperParams, TokenLabeling>* initial_labels) {
  grid.Check();
  const auto layers = grid.Layers();
  LayerSet set;
  set.corpus_fingerprint = corpus.Fingerprint();
  set.layers.resize(layers.size());

  ParallelFor(static_cast<int>(layers.size()), opts.num_threads, [&](int i) {
    const HyperParams psi = layers[i];
    TokenizerOptions layer_opts = opts;
    layer_opts.seed = DeriveSeed(opts.seed, static_cast<uint64_t>(psi.m),
                                 static_cast<uint64_t>(psi.n));
    // Inner per-utterance parallelism is owned by the grid loop.
    layer_opts.num_threads = 1;
    std::optional<TokenLabeling> init;
    if (initial_labels) {
      auto it = initial_labels->find(psi);
      if (it != initial_labels->end()) init = it->second;
    }
    LayerEntry entry;
    entry.psi = psi;
    try {
      auto [model, labeling] =
          TrainLayer(corpus, psi, layer_opts, init, &entry.report);
      entry.model = std::move(model);
      entry.labeling = std::move(labeling);
    } catch (const std::exception& e) {
      MATDNN_ERR("layer (m=" << psi.m << ", n=" << psi.n << ") failed: " << e.what());
    }
    set.layers[i] = std::move(entry);
  });
  return set;
}

void SaveLayerSet(const LayerSet& set, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& layer : set.layers) {
    fs::path sub = fs::path(dir) / ("m" + std::to_string(layer.psi.m) + "_n" +
                                    std::to_string(layer.psi.n));
    fs::create_directories(sub);
    WriteModel(layer.model, (sub / "model.matm").string());
    WriteLabelsCsv(layer.labeling, (sub / "labels.csv").string());
  }
}

LayerSet LoadLayerSet(const std::string& dir, const LayerGrid& grid,
                      const Corpus& corpus) {
  LayerSet set;
  set.corpus_fingerprint = corpus.Fingerprint();
  for (const HyperParams& psi : grid.Layers()) {
    fs::path sub = fs::path(dir) / ("m" + std::to_string(psi.m) + "_n" +
                                    std::to_string(psi.n));
    MATDNN_CHECK(fs::is_directory(sub), "missing layer directory '" << sub.string() << "'");
    LayerEntry entry;
    entry.psi = psi;
    entry.model = ReadModel((sub / "model.matm").string());
    MATDNN_CHECK(entry.model.psi == psi,
                 "layer directory '" << sub.string() << "' holds mismatched model");
    entry.labeling = ReadLabelsCsv((sub / "labels.csv").string());
    CheckLabeling(entry.labeling, corpus, psi);
    set.layers.push_back(std::move(entry));
  }
  return set;
}

}  // namespace matdnn
