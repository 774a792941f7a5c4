// matdnn/reinforce.cc

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

#include "matdnn/reinforce.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

#include "matdnn/io.h"

namespace matdnn {

std::vector<BoundaryFunction> LayerBoundaries(const TokenLabeling& labeling) {
  std::vector<BoundaryFunction> out;
  out.reserve(labeling.utts.size());
  for (const auto& utt : labeling.utts) {
    MATDNN_CHECK(!utt.segments.empty(), "utterance '" << utt.utterance_id
                                                      << "' has no segments");
    const int T = utt.segments.back().end;
    BoundaryFunction bf;
    bf.utterance_id = utt.utterance_id;
    bf.b.assign(std::max(T - 1, 0), 0);
    for (size_t i = 1; i < utt.segments.size(); ++i)
      bf.b[utt.segments[i].start - 1] = 1;
    out.push_back(std::move(bf));
  }
  return out;
}

std::vector<FusedBoundary> FuseBoundaries(
    const std::vector<std::vector<BoundaryFunction>>& per_layer,
    const LayerGrid& grid) {
  const auto layers = grid.Layers();
  MATDNN_CHECK(per_layer.size() == layers.size(),
               "boundary functions for " << per_layer.size() << " layers, grid has "
                                         << layers.size());
  MATDNN_CHECK(!per_layer.empty() && !per_layer[0].empty(), "no boundary functions");
  double weight_sum = 0.0;
  for (const auto& psi : layers) weight_sum += psi.m;

  const size_t num_utts = per_layer[0].size();
  std::vector<FusedBoundary> out(num_utts);
  for (size_t u = 0; u < num_utts; ++u) {
    out[u].utterance_id = per_layer[0][u].utterance_id;
    out[u].value.assign(per_layer[0][u].b.size(), 0.0);
    for (size_t l = 0; l < layers.size(); ++l) {
      MATDNN_CHECK(per_layer[l].size() == num_utts &&
                       per_layer[l][u].utterance_id == out[u].utterance_id &&
                       per_layer[l][u].b.size() == out[u].value.size(),
                   "layer " << l << " boundary function does not cover utterance '"
                            << out[u].utterance_id << "' with matching junctures");
      const double w = layers[l].m / weight_sum;
      for (size_t j = 0; j < out[u].value.size(); ++j)
        if (per_layer[l][u].b[j]) out[u].value[j] += w;
    }
  }
  return out;
}

std::vector<int> PickPeaks(const FusedBoundary& fb, const PeakOptions& opts) {
  const int J = static_cast<int>(fb.value.size());
  if (J == 0) return {};
  MATDNN_CHECK(opts.smooth_width >= 1 && opts.smooth_width % 2 == 1,
               "smooth_width must be odd and >= 1");
  const int radius = (opts.smooth_width - 1) / 2;

  // Triangular kernel, zero-padded at the edges; an isolated unanimous
  // boundary smooths to 0.5 under the default width of 3.
  std::vector<double> kernel(2 * radius + 1);
  double ksum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    kernel[d + radius] = radius + 1 - std::abs(d);
    ksum += kernel[d + radius];
  }
  for (double& k : kernel) k /= ksum;
  std::vector<double> smooth(J, 0.0);
  for (int j = 0; j < J; ++j) {
    double acc = 0.0;
    for (int d = -radius; d <= radius; ++d) {
      int idx = j + d;
      if (idx >= 0 && idx < J) acc += kernel[d + radius] * fb.value[idx];
    }
    smooth[j] = acc;
  }

  auto at = [&](int j) { return j >= 0 && j < J ? smooth[j] : 0.0; };
  std::vector<int> candidates;
  for (int j = 0; j < J; ++j) {
    if (fb.value[j] <= 0.0) continue;  // never emit where no layer voted
    if (smooth[j] < opts.threshold) continue;
    const double second_diff = at(j - 1) - 2.0 * smooth[j] + at(j + 1);
    const bool local_peak = at(j - 1) < smooth[j] && at(j + 1) < smooth[j];
    if (second_diff < 0.0 || local_peak) candidates.push_back(j);
  }

  // min_gap pruning: higher peak wins, leftmost on ties.
  std::vector<int> order(candidates.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (smooth[candidates[a]] != smooth[candidates[b]])
      return smooth[candidates[a]] > smooth[candidates[b]];
    return candidates[a] < candidates[b];
  });
  std::vector<int> kept;
  for (int idx : order) {
    const int j = candidates[idx];
    bool blocked = false;
    for (int other : kept) {
      if (std::abs(other - j) < opts.min_gap) {
        blocked = true;
        break;
      }
    }
    if (!blocked) kept.push_back(j);
  }
  std::sort(kept.begin(), kept.end());
  // Junctures are reported as the start frame of the right-hand segment.
  for (int& j : kept) j += 1;
  return kept;
}

std::vector<std::pair<int, int>> PeaksToSegments(const std::vector<int>& peaks,
                                                 int num_frames) {
  std::vector<std::pair<int, int>> segments;
  int start = 0;
  for (int p : peaks) {
    MATDNN_CHECK(p > start && p < num_frames, "peak " << p << " out of range");
    segments.push_back({start, p});
    start = p;
  }
  segments.push_back({start, num_frames});
  return segments;
}

int VocabularySize(const LayerSet& layer_set) {
  int v = 0;
  for (const auto& layer : layer_set.layers) v += layer.psi.n;
  return v;
}

std::vector<SegmentDocument> BuildDocuments(
    const std::vector<std::vector<std::pair<int, int>>>& new_segments,
    const LayerSet& layer_set) {
  MATDNN_CHECK(!layer_set.layers.empty(), "empty layer set");
  const size_t num_utts = new_segments.size();
  std::vector<SegmentDocument> docs;
  for (size_t u = 0; u < num_utts; ++u) {
    const std::string& utt_id = layer_set.layers[0].labeling.utts[u].utterance_id;
    for (const auto& [start, end] : new_segments[u]) {
      SegmentDocument doc;
      doc.utterance_id = utt_id;
      doc.start = start;
      doc.end = end;
      int offset = 0;
      for (const auto& layer : layer_set.layers) {
        for (const auto& seg : layer.labeling.utts[u].segments) {
          if (seg.start < end && seg.end > start)  // overlap >= 1 frame
            doc.words.push_back(offset + seg.token_id);
        }
        offset += layer.psi.n;
      }
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

std::map<HyperParams, TokenLabeling> Reinforce(const LayerSet& layer_set,
                                               const Corpus& corpus,
                                               const LayerGrid& grid,
                                               const ReinforceOptions& opts) {
  MATDNN_CHECK(layer_set.NumLayers() == grid.NumLayers(),
               "layer set does not cover the grid");
  std::vector<std::vector<BoundaryFunction>> per_layer;
  per_layer.reserve(layer_set.layers.size());
  for (const auto& layer : layer_set.layers)
    per_layer.push_back(LayerBoundaries(layer.labeling));
  const auto fused = FuseBoundaries(per_layer, grid);

  std::vector<std::vector<std::pair<int, int>>> segments(fused.size());
  for (size_t u = 0; u < fused.size(); ++u) {
    const int T = corpus.utterances[u].NumFrames();
    segments[u] = PeaksToSegments(PickPeaks(fused[u], opts.peaks), T);
  }
  const auto docs = BuildDocuments(segments, layer_set);
  const int vocab = VocabularySize(layer_set);
  std::vector<std::vector<int>> bags(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) bags[d] = docs[d].words;

  // One LDA run per distinct n; all layers sharing n reuse its labels.
  std::vector<int> distinct_n = grid.phonetic;
  std::map<int, std::vector<int>> topic_by_n;  // n -> per-document topic
  ParallelFor(static_cast<int>(distinct_n.size()), opts.num_threads, [&](int i) {
    const int n = distinct_n[i];
    LdaOptions lda_opts;
    lda_opts.num_topics = n;
    lda_opts.alpha = opts.lda_alpha;
    lda_opts.beta = opts.lda_beta;
    lda_opts.iterations = opts.lda_iterations;
    lda_opts.seed = DeriveSeed(opts.seed, 0x1DA0u, static_cast<uint64_t>(n));
    LdaModel lda = LdaGibbs(bags, vocab, lda_opts);
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    topic_by_n[n] = lda.most_probable_topic;
  });

  std::map<HyperParams, TokenLabeling> out;
  for (const HyperParams& psi : grid.Layers()) {
    const auto& topics = topic_by_n.at(psi.n);
    TokenLabeling labeling;
    size_t doc_idx = 0;
    for (size_t u = 0; u < segments.size(); ++u) {
      UttLabeling ul;
      ul.utterance_id = corpus.utterances[u].utterance_id;
      for (const auto& [start, end] : segments[u]) {
        ul.segments.push_back({topics[doc_idx], start, end});
        ++doc_idx;
      }
      // Left-merge segments shorter than this layer's minimum duration.
      const int T = corpus.utterances[u].NumFrames();
      std::vector<Segment> repaired;
      for (const auto& seg : ul.segments) {
        if (!repaired.empty() && seg.end - seg.start < psi.m) {
          repaired.back().end = seg.end;
        } else {
          repaired.push_back(seg);
        }
      }
      // A short first segment has no left neighbor; merge it rightward.
      while (repaired.size() > 1 &&
             repaired.front().end - repaired.front().start < psi.m) {
        repaired[1].start = repaired[0].start;
        repaired.erase(repaired.begin());
      }
      MATDNN_CHECK(!repaired.empty() && repaired.back().end == T,
                   "segment repair broke coverage for '" << ul.utterance_id << "'");
      ul.segments = std::move(repaired);
      labeling.utts.push_back(std::move(ul));
    }
    out[psi] = std::move(labeling);
  }
  return out;
}

void WriteBoundariesCsv(const std::vector<FusedBoundary>& fbs, const std::string& path) {
  std::ostringstream os;
  char buf[64];
  for (const auto& fb : fbs) {
    for (size_t j = 0; j < fb.value.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.6f", fb.value[j]);
      os << fb.utterance_id << "," << (j + 1) << "," << buf << "\n";
    }
  }
  WriteTextFile(path, os.str());
}

void WriteDocumentsCsv(const std::vector<SegmentDocument>& docs, const std::string& path) {
  std::ostringstream os;
  for (const auto& doc : docs) {
    std::map<int, int> counts;
    for (int w : doc.words) ++counts[w];
    for (const auto& [word, count] : counts)
      os << doc.utterance_id << "," << doc.start << "," << doc.end << ","
         << word << "," << count << "\n";
  }
  WriteTextFile(path, os.str());
}

}  // namespace matdnn
