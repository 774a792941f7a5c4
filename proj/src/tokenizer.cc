// matdnn/tokenizer.cc

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

#include "matdnn/tokenizer.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "matdnn/io.h"

namespace matdnn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTransFloor = 1e-3;
constexpr double kVarFloorScale = 1e-3;
constexpr double kVarFloorAbs = 1e-8;
constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

struct EmissionParams {
  // Per state: precomputed -0.5 * sum(log(2*pi*var)) and 1/var.
  std::vector<double> log_const;
  std::vector<Vector> inv_var;

  explicit EmissionParams(const TokenHMM& hmm) {
    const int m = hmm.NumStates();
    log_const.resize(m);
    inv_var.resize(m);
    for (int s = 0; s < m; ++s) {
      log_const[s] = -0.5 * (hmm.means[s].size() * kLog2Pi +
                             hmm.variances[s].array().log().sum());
      inv_var[s] = hmm.variances[s].cwiseInverse();
    }
  }

  double LogProb(const TokenHMM& hmm, const Matrix& frames, int t, int s) const {
    Vector d = frames.row(t).transpose() - hmm.means[s];
    return log_const[s] - 0.5 * d.cwiseProduct(d).dot(inv_var[s]);
  }
};

// Best left-to-right state path through frames [start, end): starts in state
// 0, ends in state m-1 with the exit arc when the segment is long enough,
// otherwise ends anywhere without exiting. Optionally emits the state path.
double BestStatePath(const TokenHMM& hmm, const EmissionParams& ep,
                     const Matrix& frames, int start, int end,
                     std::vector<int>* path = nullptr) {
  const int m = hmm.NumStates();
  const int len = end - start;
  MATDNN_CHECK(len >= 1, "empty segment [" << start << "," << end << ")");
  std::vector<double> log_self(m), log_adv(m);
  for (int s = 0; s < m; ++s) {
    log_self[s] = std::log(hmm.self_loop[s]);
    log_adv[s] = std::log(1.0 - hmm.self_loop[s]);
  }
  std::vector<double> delta(m, kNegInf), next(m);
  std::vector<std::vector<uint8_t>> back;  // 0 = self, 1 = advance
  if (path) back.assign(len, std::vector<uint8_t>(m, 0));
  delta[0] = ep.LogProb(hmm, frames, start, 0);
  for (int t = 1; t < len; ++t) {
    for (int s = 0; s < m; ++s) {
      double best = delta[s] + log_self[s];
      uint8_t choice = 0;
      if (s > 0 && delta[s - 1] + log_adv[s - 1] > best) {
        best = delta[s - 1] + log_adv[s - 1];
        choice = 1;
      }
      next[s] = best == kNegInf ? kNegInf : best + ep.LogProb(hmm, frames, start + t, s);
      if (path) back[t][s] = choice;
    }
    delta.swap(next);
  }
  int final_state;
  double score;
  if (len >= m) {
    final_state = m - 1;
    score = delta[m - 1] + log_adv[m - 1];  // exit arc
  } else {
    final_state = 0;
    for (int s = 1; s < len; ++s)
      if (delta[s] > delta[final_state]) final_state = s;
    score = delta[final_state];
  }
  if (path) {
    path->assign(len, 0);
    int s = final_state;
    for (int t = len - 1; t >= 0; --t) {
      (*path)[t] = s;
      if (t > 0 && back[t][s] == 1) --s;
    }
  }
  return score;
}

constexpr int kKMeansRestarts = 8;

// One seeded k-means++ initialization followed by Lloyd iterations; returns
// the assignment and its within-cluster sum of squares.
double KMeansOnce(const std::vector<Vector>& points, int k, uint64_t seed,
                  std::vector<int>* assign) {
  const int num = static_cast<int>(points.size());
  const int dim = static_cast<int>(points[0].size());
  std::mt19937_64 rng(seed);
  std::vector<Vector> centers;
  std::uniform_int_distribution<int> first(0, num - 1);
  centers.push_back(points[first(rng)]);
  std::vector<double> d2(num);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < num; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centers) best = std::min(best, (points[i] - c).squaredNorm());
      d2[i] = best;
      total += best;
    }
    int pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      double r = u01(rng) * total, acc = 0.0;
      for (int i = 0; i < num; ++i) {
        acc += d2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    centers.push_back(points[pick]);
  }

  assign->assign(num, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool moved = false;
    for (int i = 0; i < num; ++i) {
      int best = 0;
      double best_d = (points[i] - centers[0]).squaredNorm();
      for (int c = 1; c < k; ++c) {
        double d = (points[i] - centers[c]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if ((*assign)[i] != best) {
        (*assign)[i] = best;
        moved = true;
      }
    }
    std::vector<Vector> sums(k, Vector::Zero(dim));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < num; ++i) {
      sums[(*assign)[i]] += points[i];
      ++counts[(*assign)[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers[c] = sums[c] / counts[c];
      } else {
        // Re-seed an empty cluster at the point farthest from its center.
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < num; ++i) {
          double d = (points[i] - centers[(*assign)[i]]).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers[c] = points[far];
        moved = true;
      }
    }
    if (!moved && iter > 0) break;
  }
  double sse = 0.0;
  for (int i = 0; i < num; ++i) sse += (points[i] - centers[(*assign)[i]]).squaredNorm();
  return sse;
}

// Seeded restarts, best within-cluster sum of squares wins (ties to the
// earliest restart).
std::vector<int> KMeans(const std::vector<Vector>& points, int k, uint64_t seed) {
  std::vector<int> best_assign, assign;
  double best_sse = std::numeric_limits<double>::max();
  for (int r = 0; r < kKMeansRestarts; ++r) {
    const double sse = KMeansOnce(points, k, DeriveSeed(seed, static_cast<uint64_t>(r)),
                                  &assign);
    if (sse < best_sse) {
      best_sse = sse;
      best_assign = assign;
    }
  }
  return best_assign;
}

// Per token per state sufficient statistics.
struct TokenStats {
  std::vector<int64_t> count;
  std::vector<Vector> sum;
  std::vector<Vector> sumsq;
  std::vector<int64_t> self_count;
  std::vector<int64_t> adv_count;
  int64_t num_segments = 0;

  TokenStats(int m, int dim)
      : count(m, 0),
        sum(m, Vector::Zero(dim)),
        sumsq(m, Vector::Zero(dim)),
        self_count(m, 0),
        adv_count(m, 0) {}
};

}  // namespace

int64_t TokenLabeling::NumSegments() const {
  int64_t total = 0;
  for (const auto& u : utts) total += static_cast<int64_t>(u.segments.size());
  return total;
}

void CheckLabeling(const TokenLabeling& labeling, const Corpus& corpus,
                   const HyperParams& psi) {
  MATDNN_CHECK(labeling.NumUtts() == corpus.Size(),
               "labeling covers " << labeling.NumUtts() << " utterances, corpus has "
                                  << corpus.Size());
  for (int i = 0; i < corpus.Size(); ++i) {
    const auto& utt = labeling.utts[i];
    const int T = corpus.utterances[i].NumFrames();
    MATDNN_CHECK(utt.utterance_id == corpus.utterances[i].utterance_id,
                 "labeling utterance order mismatch at index " << i);
    MATDNN_CHECK(!utt.segments.empty(), "utterance '" << utt.utterance_id
                                                      << "' has no segments");
    MATDNN_CHECK(utt.segments.front().start == 0 && utt.segments.back().end == T,
                 "utterance '" << utt.utterance_id << "' not fully covered");
    for (size_t j = 0; j < utt.segments.size(); ++j) {
      const auto& seg = utt.segments[j];
      MATDNN_CHECK(seg.token_id >= 0 && seg.token_id < psi.n,
                   "utterance '" << utt.utterance_id << "': token id " << seg.token_id
                                 << " out of range [0," << psi.n << ")");
      MATDNN_CHECK(seg.start < seg.end,
                   "utterance '" << utt.utterance_id << "': empty segment");
      if (j > 0)
        MATDNN_CHECK(seg.start == utt.segments[j - 1].end,
                     "utterance '" << utt.utterance_id << "': segments not contiguous");
      const bool whole_short = utt.segments.size() == 1 && T < psi.m;
      MATDNN_CHECK(seg.end - seg.start >= psi.m || whole_short,
                   "utterance '" << utt.utterance_id << "': segment ["
                                 << seg.start << "," << seg.end
                                 << ") shorter than m=" << psi.m);
    }
  }
}

double FrameChangeFraction(const TokenLabeling& a, const TokenLabeling& b) {
  MATDNN_CHECK(a.NumUtts() == b.NumUtts(), "labelings cover different corpora");
  int64_t total = 0, changed = 0;
  for (int i = 0; i < a.NumUtts(); ++i) {
    auto expand = [](const UttLabeling& u) {
      std::vector<int> ids(u.segments.back().end, -1);
      for (const auto& seg : u.segments)
        for (int t = seg.start; t < seg.end; ++t) ids[t] = seg.token_id;
      return ids;
    };
    auto ia = expand(a.utts[i]), ib = expand(b.utts[i]);
    MATDNN_CHECK(ia.size() == ib.size(),
                 "labelings disagree on frames of '" << a.utts[i].utterance_id << "'");
    total += static_cast<int64_t>(ia.size());
    for (size_t t = 0; t < ia.size(); ++t)
      if (ia[t] != ib[t]) ++changed;
  }
  return total == 0 ? 0.0 : static_cast<double>(changed) / static_cast<double>(total);
}

TokenLabeling InitializeLabels(const Corpus& corpus, const HyperParams& psi,
                               int seg_len, uint64_t seed) {
  MATDNN_CHECK(psi.m >= 1 && psi.n >= 2, "invalid hyperparameters (m=" << psi.m
                                                                       << ", n=" << psi.n << ")");
  MATDNN_CHECK(seg_len >= psi.m, "seg_len " << seg_len << " < m " << psi.m);

  TokenLabeling labeling;
  std::vector<Vector> seg_means;
  std::vector<std::pair<int, int>> seg_index;  // (utt, segment) per pooled mean
  for (int i = 0; i < corpus.Size(); ++i) {
    const auto& u = corpus.utterances[i];
    const int T = u.NumFrames();
    UttLabeling ul;
    ul.utterance_id = u.utterance_id;
    if (T < seg_len) {
      ul.segments.push_back({0, 0, T});
    } else {
      const int num_full = T / seg_len;
      for (int k = 0; k < num_full; ++k) {
        int start = k * seg_len;
        int end = (k == num_full - 1) ? T : (k + 1) * seg_len;
        ul.segments.push_back({0, start, end});
      }
    }
    for (size_t j = 0; j < ul.segments.size(); ++j) {
      const auto& seg = ul.segments[j];
      Vector mean = Vector::Zero(u.Dim());
      for (int t = seg.start; t < seg.end; ++t) mean += u.frames.row(t).transpose();
      seg_means.push_back(mean / (seg.end - seg.start));
      seg_index.push_back({i, static_cast<int>(j)});
    }
    labeling.utts.push_back(std::move(ul));
  }

  const int num_segs = static_cast<int>(seg_means.size());
  MATDNN_CHECK(num_segs >= psi.n, "corpus yields only " << num_segs
                                                        << " segments; at least n="
                                                        << psi.n << " are required");
  std::vector<int> assign = KMeans(seg_means, psi.n, seed);

  for (int i = 0; i < num_segs; ++i) {
    auto [utt, seg] = seg_index[i];
    labeling.utts[utt].segments[seg].token_id = assign[i];
  }
  return labeling;
}

TokenSetModel EstimateModels(const Corpus& corpus, const TokenLabeling& labeling,
                             const HyperParams& psi,
                             const std::optional<TokenSetModel>& prev_model,
                             uint64_t seed, int* rescued) {
  const int dim = corpus.Dim();
  const int m = psi.m, n = psi.n;
  MATDNN_CHECK(labeling.NumUtts() == corpus.Size(), "labeling does not match corpus");
  if (prev_model)
    MATDNN_CHECK(prev_model->feature_dim == dim && prev_model->psi == psi,
                 "previous model does not match corpus/hyperparameters");

  Vector floor = (corpus.GlobalVariance() * kVarFloorScale).cwiseMax(kVarFloorAbs);
  std::vector<TokenStats> stats(n, TokenStats(m, dim));
  std::vector<std::optional<EmissionParams>> ep(n);
  if (prev_model)
    for (int k = 0; k < n; ++k) ep[k].emplace(prev_model->hmms[k]);

  std::vector<int> path;
  for (int i = 0; i < corpus.Size(); ++i) {
    const Matrix& frames = corpus.utterances[i].frames;
    for (const auto& seg : labeling.utts[i].segments) {
      MATDNN_CHECK(seg.token_id >= 0 && seg.token_id < n,
                   "segment token id " << seg.token_id << " out of range");
      const int len = seg.end - seg.start;
      if (prev_model) {
        BestStatePath(prev_model->hmms[seg.token_id], *ep[seg.token_id], frames,
                      seg.start, seg.end, &path);
      } else {
        path.resize(len);
        for (int t = 0; t < len; ++t)
          path[t] = len >= m ? static_cast<int>((static_cast<int64_t>(t) * m) / len)
                             : t;
      }
      auto& st = stats[seg.token_id];
      ++st.num_segments;
      for (int t = 0; t < len; ++t) {
        Vector row = frames.row(seg.start + t).transpose();
        st.count[path[t]] += 1;
        st.sum[path[t]] += row;
        st.sumsq[path[t]] += row.cwiseProduct(row);
        if (t + 1 < len) {
          if (path[t + 1] == path[t]) {
            ++st.self_count[path[t]];
          } else {
            ++st.adv_count[path[t]];
          }
        }
      }
      if (path[len - 1] == m - 1) ++st.adv_count[m - 1];  // exit
    }
  }

  TokenSetModel model;
  model.psi = psi;
  model.feature_dim = dim;
  model.hmms.resize(n);
  model.token_lm.resize(n);
  int64_t total_segments = 0;
  for (const auto& st : stats) total_segments += st.num_segments;

  int most_populated = 0;
  for (int k = 1; k < n; ++k)
    if (stats[k].num_segments > stats[most_populated].num_segments) most_populated = k;

  for (int k = 0; k < n; ++k) {
    auto& hmm = model.hmms[k];
    hmm.token_id = k;
    hmm.means.resize(m);
    hmm.variances.resize(m);
    hmm.self_loop.resize(m);
    model.token_lm[k] = static_cast<double>(stats[k].num_segments + 1) /
                        static_cast<double>(total_segments + n);
    if (stats[k].num_segments == 0) continue;  // filled below
    for (int s = 0; s < m; ++s) {
      const auto& st = stats[k];
      if (st.count[s] > 0) {
        hmm.means[s] = st.sum[s] / static_cast<double>(st.count[s]);
        Vector var = st.sumsq[s] / static_cast<double>(st.count[s]) -
                     hmm.means[s].cwiseProduct(hmm.means[s]);
        hmm.variances[s] = var.cwiseMax(floor);
      } else if (s > 0) {
        hmm.means[s] = hmm.means[s - 1];
        hmm.variances[s] = hmm.variances[s - 1];
      } else {
        hmm.means[s] = Vector::Zero(dim);
        hmm.variances[s] = floor;
      }
      int64_t trans = st.self_count[s] + st.adv_count[s];
      double p_self = trans > 0 ? static_cast<double>(st.self_count[s]) / trans : 0.5;
      hmm.self_loop[s] = std::clamp(p_self, kTransFloor, 1.0 - kTransFloor);
    }
  }

  // Dead-token rescue: perturbed copy of the most populated token.
  for (int k = 0; k < n; ++k) {
    if (stats[k].num_segments > 0) continue;
    MATDNN_CHECK(stats[most_populated].num_segments > 0,
                 "no token has any segment; labeling is empty");
    std::mt19937_64 rng(DeriveSeed(seed, 0xDEADu, static_cast<uint64_t>(k)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto& src = model.hmms[most_populated];
    auto& hmm = model.hmms[k];
    for (int s = 0; s < m; ++s) {
      hmm.means[s] = src.means[s];
      for (int d = 0; d < dim; ++d)
        hmm.means[s](d) += gauss(rng) * std::sqrt(0.01 * src.variances[s](d));
      hmm.variances[s] = src.variances[s];
      hmm.self_loop[s] = src.self_loop[s];
    }
    if (rescued) ++(*rescued);
  }
  return model;
}

TokenLabeling Decode(const Corpus& corpus, const TokenSetModel& model,
                     double lm_weight, int num_threads) {
  MATDNN_CHECK(model.feature_dim == corpus.Dim(),
               "model feature_dim " << model.feature_dim << " does not match corpus dim "
                                    << corpus.Dim());
  const int n = model.NumTokens();
  const int m = model.psi.m;
  std::vector<EmissionParams> ep;
  ep.reserve(n);
  for (int k = 0; k < n; ++k) ep.emplace_back(model.hmms[k]);
  std::vector<double> log_lm(n), log_self(n * m), log_adv(n * m);
  for (int k = 0; k < n; ++k) {
    log_lm[k] = lm_weight * std::log(model.token_lm[k]);
    for (int s = 0; s < m; ++s) {
      log_self[k * m + s] = std::log(model.hmms[k].self_loop[s]);
      log_adv[k * m + s] = std::log(1.0 - model.hmms[k].self_loop[s]);
    }
  }

  TokenLabeling labeling;
  labeling.utts.resize(corpus.Size());

  ParallelFor(corpus.Size(), num_threads, [&](int i) {
    const auto& u = corpus.utterances[i];
    const Matrix& frames = u.frames;
    const int T = u.NumFrames();
    UttLabeling ul;
    ul.utterance_id = u.utterance_id;

    if (T < m) {
      // No complete token traversal fits; emit one degenerate segment.
      int best_k = 0;
      double best = kNegInf;
      for (int k = 0; k < n; ++k) {
        double score = BestStatePath(model.hmms[k], ep[k], frames, 0, T) + log_lm[k];
        if (score > best) {
          best = score;
          best_k = k;
        }
      }
      ul.segments.push_back({best_k, 0, T});
      labeling.utts[i] = std::move(ul);
      return;
    }

    // Token-loop Viterbi over (token, state) cells.
    // Back-pointer codes: 0 = self loop, 1 = advance, 2 = enter token.
    const int cells = n * m;
    std::vector<double> delta(cells, kNegInf), next(cells, kNegInf);
    std::vector<uint8_t> back(static_cast<size_t>(T) * cells, 0);
    std::vector<int> exit_argmax(T, -1);
    for (int k = 0; k < n; ++k) {
      delta[k * m] = log_lm[k] + ep[k].LogProb(model.hmms[k], frames, 0, 0);
      back[k * m] = 2;
    }
    for (int t = 1; t < T; ++t) {
      double best_exit = kNegInf;
      int best_exit_tok = -1;
      for (int k = 0; k < n; ++k) {
        double e = delta[k * m + m - 1] + log_adv[k * m + m - 1];
        if (e > best_exit) {
          best_exit = e;
          best_exit_tok = k;
        }
      }
      exit_argmax[t - 1] = best_exit_tok;
      uint8_t* bt = &back[static_cast<size_t>(t) * cells];
      for (int k = 0; k < n; ++k) {
        for (int s = 0; s < m; ++s) {
          double best;
          uint8_t choice;
          if (s == 0) {
            // Prefer entering on ties: boundaries land as early as possible.
            best = best_exit + log_lm[k];
            choice = 2;
            double stay = delta[k * m] + log_self[k * m];
            if (stay > best) {
              best = stay;
              choice = 0;
            }
          } else {
            best = delta[k * m + s - 1] + log_adv[k * m + s - 1];
            choice = 1;
            double stay = delta[k * m + s] + log_self[k * m + s];
            if (stay > best) {
              best = stay;
              choice = 0;
            }
          }
          next[k * m + s] = best == kNegInf
                                ? kNegInf
                                : best + ep[k].LogProb(model.hmms[k], frames, t, s);
          bt[k * m + s] = choice;
        }
      }
      delta.swap(next);
    }
    int best_k = 0;
    double best = kNegInf;
    for (int k = 0; k < n; ++k) {
      double score = delta[k * m + m - 1] + log_adv[k * m + m - 1];
      if (score > best) {
        best = score;
        best_k = k;
      }
    }

    // Backtrack; segment starts are the cells where 'enter' was taken.
    std::vector<Segment> rev;
    int k = best_k, s = m - 1, end = T;
    for (int t = T - 1; t >= 0; --t) {
      uint8_t choice = back[static_cast<size_t>(t) * cells + k * m + s];
      if (choice == 2) {
        rev.push_back({k, t, end});
        end = t;
        if (t > 0) {
          k = exit_argmax[t - 1];
          s = m - 1;
        }
      } else if (choice == 1) {
        --s;
      }
    }
    std::reverse(rev.begin(), rev.end());
    ul.segments = std::move(rev);
    labeling.utts[i] = std::move(ul);
  });
  return labeling;
}

double SegmentLogLik(const TokenHMM& hmm, const Matrix& frames, int start, int end) {
  EmissionParams ep(hmm);
  return BestStatePath(hmm, ep, frames, start, end);
}

double JointLogLik(const Corpus& corpus, const TokenSetModel& model,
                   const TokenLabeling& labeling, double lm_weight) {
  MATDNN_CHECK(labeling.NumUtts() == corpus.Size(), "labeling does not match corpus");
  std::vector<EmissionParams> ep;
  ep.reserve(model.NumTokens());
  for (int k = 0; k < model.NumTokens(); ++k) ep.emplace_back(model.hmms[k]);
  double total = 0.0;
  for (int i = 0; i < corpus.Size(); ++i) {
    const Matrix& frames = corpus.utterances[i].frames;
    for (const auto& seg : labeling.utts[i].segments) {
      total += BestStatePath(model.hmms[seg.token_id], ep[seg.token_id], frames,
                             seg.start, seg.end);
      total += lm_weight * std::log(model.token_lm[seg.token_id]);
    }
  }
  return total;
}

std::pair<TokenSetModel, TokenLabeling> TrainLayer(
    const Corpus& corpus, const HyperParams& psi, const TokenizerOptions& opts,
    const std::optional<TokenLabeling>& initial, TrainLayerReport* report) {
  MATDNN_CHECK(corpus.Size() > 0, "TrainLayer on empty corpus");
  const int seg_len = opts.init_seg_len > 0 ? opts.init_seg_len : std::max(psi.m, 10);
  int rescued = 0;

  TokenLabeling labels =
      initial ? *initial : InitializeLabels(corpus, psi, seg_len, DeriveSeed(opts.seed, 0));
  CheckLabeling(labels, corpus, psi);
  TokenSetModel model =
      EstimateModels(corpus, labels, psi, std::nullopt, DeriveSeed(opts.seed, 1), &rescued);

  TrainLayerReport local;
  TrainLayerReport* rep = report ? report : &local;
  rep->loglik_trace.clear();
  rep->label_change_trace.clear();
  rep->loglik_trace.push_back(JointLogLik(corpus, model, labels, opts.lm_weight));

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    TokenLabeling decoded = Decode(corpus, model, opts.lm_weight, opts.num_threads);
    rep->loglik_trace.push_back(JointLogLik(corpus, model, decoded, opts.lm_weight));
    double change = FrameChangeFraction(labels, decoded);
    rep->label_change_trace.push_back(change);
    labels = std::move(decoded);
    model = EstimateModels(corpus, labels, psi, model,
                           DeriveSeed(opts.seed, 1 + static_cast<uint64_t>(iter)),
                           &rescued);
    rep->loglik_trace.push_back(JointLogLik(corpus, model, labels, opts.lm_weight));
    rep->iterations_run = iter;
    if (change < opts.label_change_tol) break;
  }
  rep->dead_token_rescues = rescued;
  return {std::move(model), std::move(labels)};
}

void WriteLabelsCsv(const TokenLabeling& labeling, const std::string& path) {
  std::ostringstream os;
  for (const auto& utt : labeling.utts)
    for (const auto& seg : utt.segments)
      os << utt.utterance_id << "," << seg.start << "," << seg.end << ","
         << seg.token_id << "\n";
  WriteTextFile(path, os.str());
}

TokenLabeling ReadLabelsCsv(const std::string& path) {
  TokenLabeling labeling;
  int idx = -1;
  for (const auto& line : ReadLines(path)) {
    if (line.empty()) continue;
    auto f = SplitCsvLine(line);
    MATDNN_CHECK(f.size() == 4, "'" << path << "': bad label line '" << line << "'");
    if (idx < 0 || labeling.utts[idx].utterance_id != f[0]) {
      labeling.utts.push_back({f[0], {}});
      idx = static_cast<int>(labeling.utts.size()) - 1;
    }
    labeling.utts[idx].segments.push_back({std::stoi(f[3]), std::stoi(f[1]), std::stoi(f[2])});
  }
  return labeling;
}

void WriteModel(const TokenSetModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  MATDNN_CHECK(os.is_open(), "cannot write '" << path << "'");
  os.write("MATM", 4);
  PutU32(os, 1);
  PutU32(os, static_cast<uint32_t>(model.psi.m));
  PutU32(os, static_cast<uint32_t>(model.psi.n));
  PutU32(os, static_cast<uint32_t>(model.feature_dim));
  for (int k = 0; k < model.NumTokens(); ++k) {
    const auto& hmm = model.hmms[k];
    PutF32(os, static_cast<float>(model.token_lm[k]));
    for (int s = 0; s < model.psi.m; ++s) {
      for (int d = 0; d < model.feature_dim; ++d)
        PutF32(os, static_cast<float>(hmm.means[s](d)));
      for (int d = 0; d < model.feature_dim; ++d)
        PutF32(os, static_cast<float>(hmm.variances[s](d)));
      PutF32(os, static_cast<float>(hmm.self_loop[s]));
      PutF32(os, static_cast<float>(1.0 - hmm.self_loop[s]));
    }
  }
  MATDNN_CHECK(os.good(), "write failed for '" << path << "'");
}

TokenSetModel ReadModel(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  MATDNN_CHECK(is.is_open(), "cannot open '" << path << "'");
  char magic[4];
  is.read(magic, 4);
  MATDNN_CHECK(is.gcount() == 4 && std::string(magic, 4) == "MATM",
               "'" << path << "' is not a MATM file");
  uint32_t version = GetU32(is, path);
  MATDNN_CHECK(version == 1, "'" << path << "': unsupported MATM version " << version);
  TokenSetModel model;
  model.psi.m = static_cast<int>(GetU32(is, path));
  model.psi.n = static_cast<int>(GetU32(is, path));
  model.feature_dim = static_cast<int>(GetU32(is, path));
  MATDNN_CHECK(model.psi.m >= 1 && model.psi.n >= 2 && model.feature_dim >= 1,
               "'" << path << "': implausible MATM header");
  model.hmms.resize(model.psi.n);
  model.token_lm.resize(model.psi.n);
  double lm_sum = 0.0;
  for (int k = 0; k < model.psi.n; ++k) {
    auto& hmm = model.hmms[k];
    hmm.token_id = k;
    hmm.means.resize(model.psi.m);
    hmm.variances.resize(model.psi.m);
    hmm.self_loop.resize(model.psi.m);
    model.token_lm[k] = GetF32(is, path);
    MATDNN_CHECK(model.token_lm[k] > 0.0, "'" << path << "': non-positive unigram");
    lm_sum += model.token_lm[k];
    for (int s = 0; s < model.psi.m; ++s) {
      hmm.means[s].resize(model.feature_dim);
      hmm.variances[s].resize(model.feature_dim);
      for (int d = 0; d < model.feature_dim; ++d) hmm.means[s](d) = GetF32(is, path);
      for (int d = 0; d < model.feature_dim; ++d) {
        hmm.variances[s](d) = GetF32(is, path);
        MATDNN_CHECK(hmm.variances[s](d) > 0.0, "'" << path << "': non-positive variance");
      }
      hmm.self_loop[s] = GetF32(is, path);
      GetF32(is, path);  // forward probability, redundant with self loop
      MATDNN_CHECK(hmm.self_loop[s] > 0.0 && hmm.self_loop[s] < 1.0,
                   "'" << path << "': self-loop probability out of (0,1)");
    }
  }
  // f32 storage perturbs the unigram sum; restore the distribution invariant.
  for (double& p : model.token_lm) p /= lm_sum;
  return model;
}

}  // namespace matdnn
