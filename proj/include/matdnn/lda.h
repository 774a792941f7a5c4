// matdnn/lda.h

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

#ifndef MATDNN_LDA_H_
#define MATDNN_LDA_H_

#include <cstdint>
#include <vector>

namespace matdnn {

struct LdaOptions {
  int num_topics = 0;       // K; required
  double alpha = 0.0;       // 0: default 50/K
  double beta = 0.01;
  int iterations = 200;     // Gibbs sweeps
  uint64_t seed = 0;
};

struct LdaModel {
  int num_topics = 0;
  int vocab_size = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::vector<int>> topic_word_counts;  // K x V
  std::vector<std::vector<int>> assignments;        // per doc, per word token
  std::vector<std::vector<double>> doc_topic_posterior;  // per doc, K, sums to 1
  std::vector<int> most_probable_topic;             // per doc; ties -> lower id
  std::vector<int> empty_docs;                      // flagged: uniform posterior
};

// Collapsed Gibbs sampling over word-topic assignments. docs[d] lists word
// ids (with multiplicity) in [0, vocab_size). Bit-reproducible for a fixed
// seed.
LdaModel LdaGibbs(const std::vector<std::vector<int>>& docs, int vocab_size,
                  const LdaOptions& opts);

}  // namespace matdnn

#endif  // MATDNN_LDA_H_
