// matdnn/pipeline.h

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

#ifndef MATDNN_PIPELINE_H_
#define MATDNN_PIPELINE_H_

#include <string>
#include <vector>

#include "matdnn/annotation.h"
#include "matdnn/config.h"
#include "matdnn/grid.h"
#include "matdnn/mdnn.h"
#include "matdnn/reinforce.h"

namespace matdnn {

struct PipelineConfig {
  std::string corpus_dir;
  std::string run_dir;
  LayerGrid grid = LayerGrid::PaperDefault();
  int iterations = 2;
  int mr_rounds = 1;
  int context_radius = 4;
  int tokenizer_max_iters = 10;
  double label_change_tol = 0.01;
  double lm_weight = 1.0;
  int init_seg_len = 0;
  PeakOptions peaks;
  int lda_iterations = 200;
  double lda_beta = 0.01;
  std::vector<int> mdnn_hidden = {256, 256};
  int mdnn_bottleneck = 39;
  double mdnn_learn_rate = 0.1;
  int mdnn_epochs = 20;
  int mdnn_batch_size = 128;
  bool eval_abx = true;
  bool eval_track2 = true;
  int abx_cap = 50;
  bool collapse_context = false;
  int boundary_tol = 2;
  uint64_t seed = 0;
  int threads = 1;

  RunConfig source;  // for the config hash and the echoed config.txt

  // MATDNN_SEED in the environment overrides the config seed.
  static PipelineConfig FromRunConfig(const RunConfig& rc);
  uint64_t Hash() const { return source.Hash(); }
  void Check() const;
};

// MDNN tandem input: stacked initial features, stacked bottleneck features
// from the previous iteration (when present), and the broadcast utterance
// summary of the initial features.
std::vector<Matrix> BuildMdnnInput(const Corpus& initial, const Corpus* prev_bnf,
                                   int context_radius);

struct RunResult {
  std::string run_dir;
  int iterations_done = 0;
};

// Executes the full iterative loop; with resume, completed stages recorded in
// the manifest are loaded instead of recomputed.
RunResult RunPipeline(const PipelineConfig& cfg, bool resume = false);

// Re-parses every artifact listed in the run manifest under its declared
// format and checks the config hash; returns the number of files checked.
int ValidateRun(const std::string& run_dir);

}  // namespace matdnn

#endif  // MATDNN_PIPELINE_H_
