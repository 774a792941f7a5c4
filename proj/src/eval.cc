// matdnn/eval.cc

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

#include "matdnn/eval.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>

namespace matdnn {

double CosineDistance(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y) {
  const double nx = x.squaredNorm();
  const double ny = y.squaredNorm();
  if (nx == 0.0 && ny == 0.0) return 0.0;
  if (nx == 0.0 || ny == 0.0) return 1.0;
  if (x == y) return 0.0;
  const double sim = x.dot(y) / std::sqrt(nx * ny);
  return std::max(0.0, 1.0 - sim);
}

double DtwDivergence(const Matrix& a, const Matrix& b) {
  const int ta = static_cast<int>(a.rows());
  const int tb = static_cast<int>(b.rows());
  MATDNN_CHECK(ta >= 1 && tb >= 1, "DTW on an empty sequence");
  MATDNN_CHECK(a.cols() == b.cols(), "DTW dimension mismatch");
  Matrix cost(ta, tb);
  for (int i = 0; i < ta; ++i)
    for (int j = 0; j < tb; ++j) cost(i, j) = CosineDistance(a.row(i), b.row(j));

  // Minimize accumulated cost / path length over all monotone alignments;
  // layered DP over the path length resolves the ratio exactly.
  const double inf = std::numeric_limits<double>::infinity();
  const int max_len = ta + tb - 1;
  Matrix prev = Matrix::Constant(ta, tb, inf);
  Matrix cur = Matrix::Constant(ta, tb, inf);
  prev(0, 0) = cost(0, 0);
  double best = prev(ta - 1, tb - 1) / 1.0;
  for (int len = 2; len <= max_len; ++len) {
    cur.setConstant(inf);
    for (int i = 0; i < ta; ++i) {
      for (int j = 0; j < tb; ++j) {
        double c = inf;
        if (i > 0) c = std::min(c, prev(i - 1, j));
        if (j > 0) c = std::min(c, prev(i, j - 1));
        if (i > 0 && j > 0) c = std::min(c, prev(i - 1, j - 1));
        if (c < inf) cur(i, j) = c + cost(i, j);
      }
    }
    if (cur(ta - 1, tb - 1) < inf)
      best = std::min(best, cur(ta - 1, tb - 1) / len);
    prev.swap(cur);
  }
  return best;
}

std::vector<AbxItem> BuildAbxItems(const Corpus& corpus, const Annotation& gold) {
  std::vector<AbxItem> items;
  for (const auto& utt : gold) {
    const int idx = corpus.IndexOf(utt.utterance_id);
    MATDNN_CHECK(idx >= 0, "utterance '" << utt.utterance_id << "' has no features");
    const int T = corpus.utterances[idx].NumFrames();
    for (size_t p = 0; p < utt.phones.size(); ++p) {
      const auto& seg = utt.phones[p];
      MATDNN_CHECK(seg.end <= T, "annotation for '" << utt.utterance_id
                                                    << "' exceeds feature frames");
      AbxItem item;
      item.utt = idx;
      item.start = seg.start;
      item.end = seg.end;
      item.phone = seg.symbol;
      item.prev_context = p > 0 ? utt.phones[p - 1].symbol : "";
      item.next_context = p + 1 < utt.phones.size() ? utt.phones[p + 1].symbol : "";
      item.speaker = utt.speaker_id;
      items.push_back(std::move(item));
    }
  }
  return items;
}

namespace {

struct TripleAccum {
  double err_sum = 0.0;
  int64_t count = 0;
};

class DtwCache {
 public:
  DtwCache(const Corpus& corpus, const std::vector<AbxItem>& items)
      : corpus_(corpus), items_(items) {}

  double Distance(int i, int j) {
    const auto key = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const auto& a = items_[key.first];
    const auto& b = items_[key.second];
    const double d = DtwDivergence(
        corpus_.utterances[a.utt].frames.middleRows(a.start, a.end - a.start),
        corpus_.utterances[b.utt].frames.middleRows(b.start, b.end - b.start));
    cache_.emplace(key, d);
    return d;
  }

 private:
  const Corpus& corpus_;
  const std::vector<AbxItem>& items_;
  std::map<std::pair<int, int>, double> cache_;
};

double TripleError(double d_xa, double d_xb) {
  if (d_xb < d_xa) return 1.0;
  if (d_xb == d_xa) return 0.5;
  return 0.0;
}

// Mean triple error for one direction: A and X drawn from the target phone,
// B from the other. Enumerates every triple up to the cap, then samples.
bool DirectionScore(const std::vector<int>& a_pool, const std::vector<int>& b_pool,
                    const std::vector<int>& x_pool, bool x_must_differ,
                    int cap, uint64_t seed, DtwCache* dtw, double* out) {
  const int na = static_cast<int>(a_pool.size());
  const int nb = static_cast<int>(b_pool.size());
  const int nx = static_cast<int>(x_pool.size());
  if (na < 1 || nb < 1 || nx < 1) return false;
  if (x_must_differ && nx < 2) return false;

  TripleAccum acc;
  const int64_t total = static_cast<int64_t>(na) * nb *
                        (x_must_differ ? nx - 1 : nx);
  if (total <= cap) {
    for (int ai = 0; ai < na; ++ai)
      for (int xi = 0; xi < nx; ++xi) {
        if (x_must_differ && x_pool[xi] == a_pool[ai]) continue;
        for (int bi = 0; bi < nb; ++bi) {
          acc.err_sum += TripleError(dtw->Distance(x_pool[xi], a_pool[ai]),
                                     dtw->Distance(x_pool[xi], b_pool[bi]));
          ++acc.count;
        }
      }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_a(0, na - 1), pick_b(0, nb - 1),
        pick_x(0, nx - 1);
    while (acc.count < cap) {
      const int ai = pick_a(rng), bi = pick_b(rng), xi = pick_x(rng);
      if (x_must_differ && x_pool[xi] == a_pool[ai]) continue;
      acc.err_sum += TripleError(dtw->Distance(x_pool[xi], a_pool[ai]),
                                 dtw->Distance(x_pool[xi], b_pool[bi]));
      ++acc.count;
    }
  }
  if (acc.count == 0) return false;
  *out = acc.err_sum / static_cast<double>(acc.count);
  return true;
}

}  // namespace

AbxReport AbxError(const Corpus& corpus, const std::vector<AbxItem>& items,
                   const AbxOptions& opts) {
  MATDNN_CHECK(!items.empty(), "no ABX items");
  DtwCache dtw(corpus, items);

  // (phone, context, speaker) -> item indices.
  auto context_of = [&](const AbxItem& it) {
    return opts.collapse_context ? std::string()
                                 : it.prev_context + "|" + it.next_context;
  };
  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<int>>>>
      pool;  // phone -> context -> speaker -> items
  std::set<std::string> speakers;
  for (size_t i = 0; i < items.size(); ++i) {
    pool[items[i].phone][context_of(items[i])][items[i].speaker].push_back(
        static_cast<int>(i));
    speakers.insert(items[i].speaker);
  }
  std::vector<std::string> phones;
  for (const auto& [phone, rest] : pool) phones.push_back(phone);

  AbxReport report;
  int64_t triples = 0;
  double pair_sum = 0.0;
  int pair_count = 0;
  for (size_t pi = 0; pi < phones.size(); ++pi) {
    for (size_t qi = pi + 1; qi < phones.size(); ++qi) {
      const auto& pools_p = pool[phones[pi]];
      const auto& pools_q = pool[phones[qi]];

      // Speaker cells: one speaker (within) or ordered pairs (across).
      std::vector<std::pair<std::string, std::string>> cells;
      for (const auto& s1 : speakers) {
        if (opts.mode == AbxMode::kWithin) {
          cells.push_back({s1, s1});
        } else {
          for (const auto& s2 : speakers)
            if (s1 != s2) cells.push_back({s1, s2});
        }
      }

      double cell_sum = 0.0;
      int cell_count = 0;
      for (const auto& [s_ab, s_x] : cells) {
        double ctx_sum = 0.0;
        int ctx_count = 0;
        std::set<std::string> contexts;
        for (const auto& [ctx, by_spk] : pools_p) contexts.insert(ctx);
        for (const auto& [ctx, by_spk] : pools_q) contexts.insert(ctx);
        for (const auto& ctx : contexts) {
          auto pool_of = [&](const std::string& phone, const std::string& spk)
              -> const std::vector<int>* {
            auto pit = pool.find(phone);
            auto cit = pit->second.find(ctx);
            if (cit == pit->second.end()) return nullptr;
            auto sit = cit->second.find(spk);
            return sit == cit->second.end() ? nullptr : &sit->second;
          };
          const auto* p_ab = pool_of(phones[pi], s_ab);
          const auto* q_ab = pool_of(phones[qi], s_ab);
          const auto* p_x = pool_of(phones[pi], s_x);
          const auto* q_x = pool_of(phones[qi], s_x);
          const bool same_spk = opts.mode == AbxMode::kWithin;

          double dir_sum = 0.0;
          int dir_count = 0;
          // Direction 1: target phone p. Direction 2: target phone q.
          struct Dir {
            const std::vector<int>*a, *b, *x;
            const char* tag;
          };
          const Dir dirs[2] = {{p_ab, q_ab, p_x, "p"}, {q_ab, p_ab, q_x, "q"}};
          for (const auto& dir : dirs) {
            if (!dir.a || !dir.b || !dir.x) {
              ++report.num_cells_skipped;
              continue;
            }
            uint64_t dir_seed = DeriveSeed(
                opts.seed,
                Fnv1a(phones[pi] + "/" + phones[qi] + "/" + s_ab + "/" + s_x + "/" +
                      ctx + "/" + dir.tag));
            double score;
            if (DirectionScore(*dir.a, *dir.b, *dir.x, same_spk,
                               opts.max_triples_per_cell, dir_seed, &dtw, &score)) {
              dir_sum += score;
              ++dir_count;
              triples += std::min<int64_t>(
                  opts.max_triples_per_cell,
                  static_cast<int64_t>(dir.a->size()) * dir.b->size() *
                      (same_spk ? dir.x->size() - 1 : dir.x->size()));
              ++report.num_cells_used;
            } else {
              ++report.num_cells_skipped;
            }
          }
          if (dir_count > 0) {
            ctx_sum += dir_sum / dir_count;
            ++ctx_count;
          }
        }
        if (ctx_count > 0) {
          cell_sum += ctx_sum / ctx_count;
          ++cell_count;
        }
      }
      if (cell_count > 0) {
        pair_sum += cell_sum / cell_count;
        ++pair_count;
      }
    }
  }
  MATDNN_CHECK(pair_count > 0, "no phone pair had enough items for ABX");
  report.error_percent = 100.0 * pair_sum / pair_count;
  report.num_pairs = pair_count;
  report.num_triples = triples;
  return report;
}

DiscoveredClusters ClustersFromLabeling(const TokenLabeling& labeling,
                                        const Annotation& gold) {
  std::map<std::string, int> gold_index;
  for (size_t i = 0; i < gold.size(); ++i)
    gold_index[gold[i].utterance_id] = static_cast<int>(i);
  DiscoveredClusters clusters;
  for (const auto& utt : labeling.utts) {
    auto it = gold_index.find(utt.utterance_id);
    MATDNN_CHECK(it != gold_index.end(),
                 "utterance '" << utt.utterance_id << "' missing from annotation");
    for (const auto& seg : utt.segments)
      clusters[seg.token_id].push_back({it->second, seg.start, seg.end});
  }
  return clusters;
}

Prf Prf::Make(int64_t matched_a, int64_t total_a, int64_t matched_b, int64_t total_b) {
  Prf prf;
  prf.precision = total_a > 0 ? static_cast<double>(matched_a) / total_a : 0.0;
  prf.recall = total_b > 0 ? static_cast<double>(matched_b) / total_b : 0.0;
  prf.f = (prf.precision > 0.0 && prf.recall > 0.0)
              ? 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall)
              : 0.0;
  return prf;
}

std::vector<std::string> TranscribeInterval(const Interval& interval,
                                            const Annotation& gold) {
  const auto& phones = gold[interval.utt].phones;
  std::vector<std::string> out;
  int best = -1;
  int best_overlap = 0;
  for (size_t i = 0; i < phones.size(); ++i) {
    const auto& p = phones[i];
    const int overlap = std::min(interval.end, p.end) - std::max(interval.start, p.start);
    if (overlap <= 0) continue;
    if (2 * overlap >= p.end - p.start) out.push_back(p.symbol);
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = static_cast<int>(i);
    }
  }
  if (out.empty() && best >= 0) out.push_back(phones[best].symbol);
  MATDNN_CHECK(!out.empty(), "interval [" << interval.start << "," << interval.end
                                          << ") overlaps no gold phone");
  return out;
}

int LevenshteinDistance(const std::vector<std::string>& a,
                        const std::vector<std::string>& b) {
  const size_t la = a.size(), lb = b.size();
  std::vector<int> prev(lb + 1), cur(lb + 1);
  for (size_t j = 0; j <= lb; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= la; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= lb; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    prev.swap(cur);
  }
  return prev[lb];
}

std::pair<double, double> NedAndCoverage(const DiscoveredClusters& clusters,
                                         const Annotation& gold) {
  MATDNN_CHECK(!clusters.empty(), "no discovered clusters");
  double ned_sum = 0.0;
  int64_t ned_pairs = 0;
  for (const auto& [id, intervals] : clusters) {
    if (intervals.size() < 2) continue;
    std::vector<std::vector<std::string>> txs;
    txs.reserve(intervals.size());
    for (const auto& iv : intervals) txs.push_back(TranscribeInterval(iv, gold));
    for (size_t i = 0; i < txs.size(); ++i) {
      for (size_t j = i + 1; j < txs.size(); ++j) {
        const int lev = LevenshteinDistance(txs[i], txs[j]);
        const size_t denom = std::max(txs[i].size(), txs[j].size());
        ned_sum += static_cast<double>(lev) / static_cast<double>(denom);
        ++ned_pairs;
      }
    }
  }
  const double ned = ned_pairs > 0 ? 100.0 * ned_sum / static_cast<double>(ned_pairs) : 0.0;

  int64_t phone_frames = 0, covered_frames = 0;
  for (size_t u = 0; u < gold.size(); ++u) {
    if (gold[u].phones.empty()) continue;
    const int lo = gold[u].phones.front().start;
    const int hi = gold[u].phones.back().end;
    std::vector<uint8_t> covered(hi - lo, 0);
    for (const auto& [id, intervals] : clusters) {
      for (const auto& iv : intervals) {
        if (iv.utt != static_cast<int>(u)) continue;
        for (int t = std::max(iv.start, lo); t < std::min(iv.end, hi); ++t)
          covered[t - lo] = 1;
      }
    }
    phone_frames += hi - lo;
    for (uint8_t c : covered) covered_frames += c;
  }
  const double coverage =
      phone_frames > 0 ? 100.0 * static_cast<double>(covered_frames) /
                             static_cast<double>(phone_frames)
                       : 0.0;
  return {ned, coverage};
}

int MatchBoundaries(const std::vector<int>& discovered, const std::vector<int>& gold,
                    int tol) {
  int matched = 0;
  size_t j = 0;
  for (int d : discovered) {
    while (j < gold.size() && gold[j] < d - tol) ++j;
    if (j < gold.size() && gold[j] <= d + tol) {
      ++matched;
      ++j;
    }
  }
  return matched;
}

namespace {

struct TokenMatchResult {
  int64_t matched = 0;
  int64_t num_intervals = 0;
  int64_t num_words = 0;
  // (cluster id, interval index within cluster) -> word symbol.
  std::map<std::pair<int, int>, std::string> assignment;
};

// Maximum one-to-one matching of intervals to words whose both edges lie
// within tol, via augmenting paths; deterministic in time order.
TokenMatchResult MatchTokens(const DiscoveredClusters& clusters,
                             const Annotation& gold, int tol) {
  struct Iv {
    int cluster;
    int index;
    Interval interval;
  };
  TokenMatchResult result;
  std::vector<std::vector<Iv>> by_utt(gold.size());
  for (const auto& [id, intervals] : clusters) {
    for (size_t i = 0; i < intervals.size(); ++i)
      by_utt[intervals[i].utt].push_back({id, static_cast<int>(i), intervals[i]});
    result.num_intervals += static_cast<int64_t>(intervals.size());
  }
  for (const auto& utt : gold) result.num_words += static_cast<int64_t>(utt.words.size());

  for (size_t u = 0; u < gold.size(); ++u) {
    auto& ivs = by_utt[u];
    std::sort(ivs.begin(), ivs.end(), [](const Iv& a, const Iv& b) {
      if (a.interval.start != b.interval.start) return a.interval.start < b.interval.start;
      if (a.interval.end != b.interval.end) return a.interval.end < b.interval.end;
      return a.cluster < b.cluster;
    });
    const auto& words = gold[u].words;
    std::vector<std::vector<int>> compat(ivs.size());
    for (size_t i = 0; i < ivs.size(); ++i)
      for (size_t w = 0; w < words.size(); ++w)
        if (std::abs(ivs[i].interval.start - words[w].start) <= tol &&
            std::abs(ivs[i].interval.end - words[w].end) <= tol)
          compat[i].push_back(static_cast<int>(w));

    std::vector<int> word_owner(words.size(), -1);
    std::vector<uint8_t> visited;
    std::function<bool(int)> augment = [&](int i) -> bool {
      for (int w : compat[i]) {
        if (visited[w]) continue;
        visited[w] = 1;
        if (word_owner[w] < 0 || augment(word_owner[w])) {
          word_owner[w] = i;
          return true;
        }
      }
      return false;
    };
    for (size_t i = 0; i < ivs.size(); ++i) {
      visited.assign(words.size(), 0);
      augment(static_cast<int>(i));
    }
    for (size_t w = 0; w < words.size(); ++w) {
      if (word_owner[w] < 0) continue;
      const auto& iv = ivs[word_owner[w]];
      result.assignment[{iv.cluster, iv.index}] = words[w].symbol;
      ++result.matched;
    }
  }
  return result;
}

}  // namespace

ParsingResult ParsingScores(const DiscoveredClusters& clusters,
                            const Annotation& gold, int boundary_tol) {
  ParsingResult result;

  // Boundary: all interval edges vs gold word edges, per utterance.
  int64_t disc_total = 0, gold_total = 0, matched_total = 0;
  std::vector<std::set<int>> disc_edges(gold.size());
  for (const auto& [id, intervals] : clusters) {
    for (const auto& iv : intervals) {
      disc_edges[iv.utt].insert(iv.start);
      disc_edges[iv.utt].insert(iv.end);
    }
  }
  for (size_t u = 0; u < gold.size(); ++u) {
    std::set<int> gold_edges;
    for (const auto& w : gold[u].words) {
      gold_edges.insert(w.start);
      gold_edges.insert(w.end);
    }
    std::vector<int> d(disc_edges[u].begin(), disc_edges[u].end());
    std::vector<int> g(gold_edges.begin(), gold_edges.end());
    disc_total += static_cast<int64_t>(d.size());
    gold_total += static_cast<int64_t>(g.size());
    matched_total += MatchBoundaries(d, g, boundary_tol);
  }
  result.boundary = Prf::Make(matched_total, disc_total, matched_total, gold_total);

  // Token: one-to-one interval/word matching with both edges in tolerance.
  TokenMatchResult tokens = MatchTokens(clusters, gold, boundary_tol);
  result.token = Prf::Make(tokens.matched, tokens.num_intervals, tokens.matched,
                           tokens.num_words);
  for (const auto& [key, symbol] : tokens.assignment)
    result.token_matches[key.first].push_back({key.second, symbol});

  // Type: each cluster claims the word type it most frequently token-matches
  // (ties to the lexicographically smallest); score the distinct claims.
  std::set<std::string> gold_types;
  for (const auto& utt : gold)
    for (const auto& w : utt.words) gold_types.insert(w.symbol);
  std::set<std::string> claimed;
  for (const auto& [cluster, matches] : result.token_matches) {
    std::map<std::string, int> counts;
    for (const auto& [idx, symbol] : matches) ++counts[symbol];
    std::string best;
    int best_count = 0;
    for (const auto& [symbol, count] : counts) {
      if (count > best_count) {
        best = symbol;
        best_count = count;
      }
    }
    if (best_count > 0) claimed.insert(best);
  }
  result.type = Prf::Make(static_cast<int64_t>(claimed.size()),
                          static_cast<int64_t>(clusters.size()),
                          static_cast<int64_t>(claimed.size()),
                          static_cast<int64_t>(gold_types.size()));
  return result;
}

Prf GroupingScores(const DiscoveredClusters& clusters, const Annotation& gold,
                   int boundary_tol, bool* flagged) {
  TokenMatchResult tokens = MatchTokens(clusters, gold, boundary_tol);
  if (flagged) *flagged = tokens.matched == 0;

  // Matched intervals, grouped by cluster and pooled by gold type.
  std::map<int, std::vector<std::string>> by_cluster;
  for (const auto& [key, symbol] : tokens.assignment)
    by_cluster[key.first].push_back(symbol);

  int64_t same_cluster_pairs = 0, same_cluster_same_type = 0;
  for (const auto& [cluster, symbols] : by_cluster) {
    for (size_t i = 0; i < symbols.size(); ++i) {
      for (size_t j = i + 1; j < symbols.size(); ++j) {
        ++same_cluster_pairs;
        if (symbols[i] == symbols[j]) ++same_cluster_same_type;
      }
    }
  }
  std::map<std::string, int64_t> type_counts;
  for (const auto& [key, symbol] : tokens.assignment) ++type_counts[symbol];
  int64_t same_type_pairs = 0;
  for (const auto& [symbol, count] : type_counts)
    same_type_pairs += count * (count - 1) / 2;

  return Prf::Make(same_cluster_same_type, same_cluster_pairs,
                   same_cluster_same_type, same_type_pairs);
}

Track2Report EvalTrack2(const DiscoveredClusters& clusters, const Annotation& gold,
                        int boundary_tol) {
  Track2Report report;
  auto [ned, coverage] = NedAndCoverage(clusters, gold);
  report.ned_percent = ned;
  report.coverage_percent = coverage;
  ParsingResult parsing = ParsingScores(clusters, gold, boundary_tol);
  report.boundary = parsing.boundary;
  report.token = parsing.token;
  report.type = parsing.type;
  report.grouping = GroupingScores(clusters, gold, boundary_tol, &report.grouping_flagged);
  return report;
}

Prf PhoneBoundaryPrf(const TokenLabeling& labeling, const Annotation& gold, int tol) {
  std::map<std::string, const UttAnnotation*> gold_index;
  for (const auto& utt : gold) gold_index[utt.utterance_id] = &utt;
  int64_t disc_total = 0, gold_total = 0, matched = 0;
  for (const auto& utt : labeling.utts) {
    auto it = gold_index.find(utt.utterance_id);
    MATDNN_CHECK(it != gold_index.end(),
                 "utterance '" << utt.utterance_id << "' missing from annotation");
    std::vector<int> d, g;
    for (size_t i = 1; i < utt.segments.size(); ++i) d.push_back(utt.segments[i].start);
    const auto& phones = it->second->phones;
    for (size_t i = 1; i < phones.size(); ++i) g.push_back(phones[i].start);
    disc_total += static_cast<int64_t>(d.size());
    gold_total += static_cast<int64_t>(g.size());
    matched += MatchBoundaries(d, g, tol);
  }
  return Prf::Make(matched, disc_total, matched, gold_total);
}

}  // namespace matdnn
