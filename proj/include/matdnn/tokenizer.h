// matdnn/tokenizer.h

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

#ifndef MATDNN_TOKENIZER_H_
#define MATDNN_TOKENIZER_H_

#include <optional>
#include <string>
#include <vector>

#include "matdnn/common.h"
#include "matdnn/feature.h"

namespace matdnn {

// One grid layer's hyperparameters: m states per token HMM (temporal
// granularity), n distinct tokens (phonetic granularity).
struct HyperParams {
  int m = 3;
  int n = 50;

  bool operator==(const HyperParams&) const = default;
  bool operator<(const HyperParams& o) const {
    return m != o.m ? m < o.m : n < o.n;
  }
};

// Strict left-to-right HMM: per state a diagonal Gaussian and a self-loop /
// advance split. The last state's advance probability is the exit.
struct TokenHMM {
  int token_id = 0;
  std::vector<Vector> means;      // m entries, D each
  std::vector<Vector> variances;  // m entries, D each, floored
  std::vector<double> self_loop;  // m entries in (0, 1)

  int NumStates() const { return static_cast<int>(means.size()); }
};

struct TokenSetModel {
  HyperParams psi;
  std::vector<TokenHMM> hmms;    // exactly n, token order
  std::vector<double> token_lm;  // unigram, sums to 1
  int feature_dim = 0;

  int NumTokens() const { return static_cast<int>(hmms.size()); }
};

struct Segment {
  int token_id = 0;
  int start = 0;  // inclusive frame
  int end = 0;    // exclusive frame
};

struct UttLabeling {
  std::string utterance_id;
  std::vector<Segment> segments;
};

// Aligned with corpus order.
struct TokenLabeling {
  std::vector<UttLabeling> utts;

  int NumUtts() const { return static_cast<int>(utts.size()); }
  int64_t NumSegments() const;
};

// Contiguity, coverage and the min-duration rule (segments >= m frames, or a
// single whole-utterance segment when T < m). Throws on violation.
void CheckLabeling(const TokenLabeling& labeling, const Corpus& corpus,
                   const HyperParams& psi);

// Fraction of frames whose token id differs between two labelings of the
// same corpus.
double FrameChangeFraction(const TokenLabeling& a, const TokenLabeling& b);

struct TokenizerOptions {
  int max_iters = 10;
  double label_change_tol = 0.01;
  double lm_weight = 1.0;
  int init_seg_len = 0;  // 0: max(m, 10)
  uint64_t seed = 0;
  int num_threads = 1;
};

struct TrainLayerReport {
  // joint_loglik after every half-step, starting with the first
  // (model, initial labels) pair and alternating decode / re-estimate.
  std::vector<double> loglik_trace;
  std::vector<double> label_change_trace;  // per decode step
  int dead_token_rescues = 0;
  int iterations_run = 0;
};

// Cuts utterances into fixed-length segments and labels them by seeded
// k-means over segment means.
TokenLabeling InitializeLabels(const Corpus& corpus, const HyperParams& psi,
                               int seg_len, uint64_t seed);

// One re-estimation pass: frames of each labeled segment are assigned to
// states by Viterbi alignment under prev_model (uniform split when absent),
// then state Gaussians, transition and unigram probabilities are refit.
// Dead tokens are re-seeded from the most populated token's perturbed means.
TokenSetModel EstimateModels(const Corpus& corpus, const TokenLabeling& labeling,
                             const HyperParams& psi,
                             const std::optional<TokenSetModel>& prev_model = std::nullopt,
                             uint64_t seed = 0, int* rescued = nullptr);

// Max-likelihood token sequence per utterance via Viterbi over a token loop;
// inter-token arcs carry lm_weight * log token_lm. Ties prefer lower token
// ids, then earlier boundaries.
TokenLabeling Decode(const Corpus& corpus, const TokenSetModel& model,
                     double lm_weight = 1.0, int num_threads = 1);

// Sum over utterances of best-state-path log likelihood of every labeled
// segment plus lm_weight * log token_lm per segment. Decode maximizes exactly
// this quantity over labelings.
double JointLogLik(const Corpus& corpus, const TokenSetModel& model,
                   const TokenLabeling& labeling, double lm_weight = 1.0);

// Best-state-path log likelihood of one segment under one token HMM,
// including the exit arc for full-length segments.
double SegmentLogLik(const TokenHMM& hmm, const Matrix& frames, int start, int end);

// Alternates EstimateModels / Decode from InitializeLabels (or initial) until
// the fraction of changed frames drops below tol or max_iters is reached.
std::pair<TokenSetModel, TokenLabeling> TrainLayer(
    const Corpus& corpus, const HyperParams& psi, const TokenizerOptions& opts,
    const std::optional<TokenLabeling>& initial = std::nullopt,
    TrainLayerReport* report = nullptr);

// Labeling file: CSV lines utterance_id,start_frame,end_frame,token_id.
void WriteLabelsCsv(const TokenLabeling& labeling, const std::string& path);
TokenLabeling ReadLabelsCsv(const std::string& path);

// Model file: magic "MATM", u32 LE version (1), m, n, D; then per token:
// unigram probability, then per state mean[D], variance[D], self_loop,
// forward, all f32 LE.
void WriteModel(const TokenSetModel& model, const std::string& path);
TokenSetModel ReadModel(const std::string& path);

}  // namespace matdnn

#endif  // MATDNN_TOKENIZER_H_
