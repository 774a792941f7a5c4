// matdnn/eval.h

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

#ifndef MATDNN_EVAL_H_
#define MATDNN_EVAL_H_

#include <map>
#include <string>
#include <vector>

#include "matdnn/annotation.h"
#include "matdnn/feature.h"
#include "matdnn/tokenizer.h"

namespace matdnn {

// DTW with steps {(1,0),(0,1),(1,1)} and frame cost 1 - cosine similarity;
// returns the minimum over monotone alignments of accumulated cost divided
// by alignment length. Zero vectors cost 1 against anything nonzero, 0
// against zero.
double DtwDivergence(const Matrix& a, const Matrix& b);

double CosineDistance(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y);

struct AbxItem {
  int utt = 0;  // index into the feature corpus
  int start = 0;
  int end = 0;
  std::string phone;
  std::string prev_context;
  std::string next_context;
  std::string speaker;
};

enum class AbxMode { kWithin, kAcross };

struct AbxOptions {
  AbxMode mode = AbxMode::kAcross;
  // Sampling cap per (phone pair, speaker cell, context, direction).
  int max_triples_per_cell = 50;
  uint64_t seed = 0;
  // Collapse triphone contexts into one group; statistically necessary on
  // small corpora whose emissions carry no coarticulation.
  bool collapse_context = false;
};

struct AbxReport {
  double error_percent = 0.0;
  int64_t num_triples = 0;
  int num_pairs = 0;
  int num_cells_used = 0;
  int num_cells_skipped = 0;
};

// Phone-interval items with triphone context from the gold annotation.
std::vector<AbxItem> BuildAbxItems(const Corpus& corpus, const Annotation& gold);

// A triple is an error when dtw(X,B) < dtw(X,A), half an error on a tie.
// Averaged over triples, then contexts, then speaker cells, then phone
// pairs, both target directions symmetrized.
AbxReport AbxError(const Corpus& corpus, const std::vector<AbxItem>& items,
                   const AbxOptions& opts);

struct Interval {
  int utt = 0;  // index into the annotation
  int start = 0;
  int end = 0;
};

// token/class id -> discovered intervals.
using DiscoveredClusters = std::map<int, std::vector<Interval>>;

DiscoveredClusters ClustersFromLabeling(const TokenLabeling& labeling,
                                        const Annotation& gold);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;

  static Prf Make(int64_t matched_a, int64_t total_a, int64_t matched_b,
                  int64_t total_b);
};

struct Track2Report {
  double ned_percent = 0.0;
  double coverage_percent = 0.0;
  Prf boundary;
  Prf token;
  Prf type;
  Prf grouping;
  bool grouping_flagged = false;  // no token-matched intervals
};

// Gold phone string of an interval: phones with >= 50% of their duration
// inside, else the single maximal-overlap phone.
std::vector<std::string> TranscribeInterval(const Interval& interval,
                                            const Annotation& gold);

std::pair<double, double> NedAndCoverage(const DiscoveredClusters& clusters,
                                         const Annotation& gold);

struct ParsingResult {
  Prf boundary;
  Prf token;
  Prf type;
  // Per cluster: matched (interval index -> gold word symbol).
  std::map<int, std::vector<std::pair<int, std::string>>> token_matches;
};

ParsingResult ParsingScores(const DiscoveredClusters& clusters,
                            const Annotation& gold, int boundary_tol = 2);

Prf GroupingScores(const DiscoveredClusters& clusters, const Annotation& gold,
                   int boundary_tol = 2, bool* flagged = nullptr);

Track2Report EvalTrack2(const DiscoveredClusters& clusters, const Annotation& gold,
                        int boundary_tol = 2);

// Greedy one-to-one matching of sorted positions within +/-tol, in time
// order; for interval tolerances this attains the maximum matching.
int MatchBoundaries(const std::vector<int>& discovered, const std::vector<int>& gold,
                    int tol);

// F-score of decoded token boundaries against gold phone boundaries,
// internal boundaries only.
Prf PhoneBoundaryPrf(const TokenLabeling& labeling, const Annotation& gold, int tol);

int LevenshteinDistance(const std::vector<std::string>& a,
                        const std::vector<std::string>& b);

}  // namespace matdnn

#endif  // MATDNN_EVAL_H_
