// matdnn/lda.cc

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

#include "matdnn/lda.h"

#include <random>

#include "matdnn/common.h"

namespace matdnn {

LdaModel LdaGibbs(const std::vector<std::vector<int>>& docs, int vocab_size,
                  const LdaOptions& opts) {
  const int K = opts.num_topics;
  const int V = vocab_size;
  const int D = static_cast<int>(docs.size());
  MATDNN_CHECK(K >= 1, "LDA needs K >= 1 topics");
  MATDNN_CHECK(V >= 1, "LDA needs a non-empty vocabulary");
  const double alpha = opts.alpha > 0.0 ? opts.alpha : 50.0 / K;
  const double beta = opts.beta;

  LdaModel model;
  model.num_topics = K;
  model.vocab_size = V;
  model.alpha = alpha;
  model.beta = beta;
  model.topic_word_counts.assign(K, std::vector<int>(V, 0));
  model.assignments.resize(D);

  std::vector<std::vector<int>> doc_topic(D, std::vector<int>(K, 0));
  std::vector<int64_t> topic_total(K, 0);

  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> topic_init(0, K - 1);
  for (int d = 0; d < D; ++d) {
    model.assignments[d].resize(docs[d].size());
    for (size_t i = 0; i < docs[d].size(); ++i) {
      const int w = docs[d][i];
      MATDNN_CHECK(w >= 0 && w < V, "word id " << w << " out of vocabulary [0," << V << ")");
      const int z = topic_init(rng);
      model.assignments[d][i] = z;
      ++model.topic_word_counts[z][w];
      ++doc_topic[d][z];
      ++topic_total[z];
    }
  }

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> p(K);
  for (int iter = 0; iter < opts.iterations && K > 1; ++iter) {
    for (int d = 0; d < D; ++d) {
      for (size_t i = 0; i < docs[d].size(); ++i) {
        const int w = docs[d][i];
        const int old_z = model.assignments[d][i];
        --model.topic_word_counts[old_z][w];
        --doc_topic[d][old_z];
        --topic_total[old_z];
        double total = 0.0;
        for (int k = 0; k < K; ++k) {
          total += (doc_topic[d][k] + alpha) *
                   (model.topic_word_counts[k][w] + beta) /
                   (topic_total[k] + V * beta);
          p[k] = total;
        }
        const double r = u01(rng) * total;
        int new_z = K - 1;
        for (int k = 0; k < K; ++k) {
          if (p[k] >= r) {
            new_z = k;
            break;
          }
        }
        model.assignments[d][i] = new_z;
        ++model.topic_word_counts[new_z][w];
        ++doc_topic[d][new_z];
        ++topic_total[new_z];
      }
    }
  }

  model.doc_topic_posterior.assign(D, std::vector<double>(K, 0.0));
  model.most_probable_topic.assign(D, 0);
  for (int d = 0; d < D; ++d) {
    const double denom = static_cast<double>(docs[d].size()) + K * alpha;
    int best = 0;
    for (int k = 0; k < K; ++k) {
      model.doc_topic_posterior[d][k] = (doc_topic[d][k] + alpha) / denom;
      if (model.doc_topic_posterior[d][k] > model.doc_topic_posterior[d][best])
        best = k;
    }
    model.most_probable_topic[d] = best;
    if (docs[d].empty()) model.empty_docs.push_back(d);
  }
  return model;
}

}  // namespace matdnn
