// tests/test_synth.cc

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

#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "matdnn/eval.h"
#include "matdnn/io.h"
#include "matdnn/synth.h"

using namespace matdnn;

TEST_CASE("same config and seed give identical corpora") {
  SynthConfig cfg;
  cfg.num_utterances = 10;
  cfg.seed = 42;
  SynthCorpus a = GenerateCorpus(cfg);
  SynthCorpus b = GenerateCorpus(cfg);
  REQUIRE(a.features.Size() == b.features.Size());
  for (int u = 0; u < a.features.Size(); ++u) {
    CHECK(a.features.utterances[u].frames == b.features.utterances[u].frames);
    CHECK(a.features.utterances[u].speaker_id == b.features.utterances[u].speaker_id);
  }
  CHECK(a.gold.size() == b.gold.size());
}

TEST_CASE("annotation tiers are valid and frames are fully covered") {
  SynthConfig cfg;
  cfg.num_utterances = 20;
  cfg.seed = 7;
  SynthCorpus corpus = GenerateCorpus(cfg);
  CheckAnnotation(corpus.gold);
  for (int u = 0; u < corpus.features.Size(); ++u) {
    const auto& ann = corpus.gold[u];
    int64_t phone_frames = 0;
    for (const auto& p : ann.phones) phone_frames += p.end - p.start;
    CHECK(phone_frames == corpus.features.utterances[u].NumFrames());
    CHECK(ann.phones.front().start == 0);
    CHECK(ann.words.back().end == corpus.features.utterances[u].NumFrames());
  }
}

TEST_CASE("noiseless single-speaker corpus has identical frames per phone") {
  SynthConfig cfg;
  cfg.phone_noise_std = 0.0;
  cfg.num_speakers = 1;
  cfg.num_utterances = 8;
  cfg.seed = 3;
  SynthCorpus corpus = GenerateCorpus(cfg);
  std::map<std::string, Vector> proto;
  for (int u = 0; u < corpus.features.Size(); ++u) {
    for (const auto& p : corpus.gold[u].phones) {
      for (int t = p.start; t < p.end; ++t) {
        Vector f = corpus.features.utterances[u].frames.row(t).transpose();
        auto it = proto.find(p.symbol);
        if (it == proto.end()) {
          proto[p.symbol] = f;
        } else {
          CHECK((f - it->second).cwiseAbs().maxCoeff() == 0.0);
        }
      }
    }
  }
  CHECK(proto.size() <= static_cast<size_t>(cfg.num_phones));

  SUBCASE("gold-phone ABX on those features is exactly zero") {
    AbxOptions opts;
    opts.mode = AbxMode::kWithin;
    opts.collapse_context = true;
    opts.max_triples_per_cell = 20;
    AbxReport rep = AbxError(corpus.features, BuildAbxItems(corpus.features, corpus.gold), opts);
    CHECK(rep.error_percent == 0.0);
  }
}

TEST_CASE("phone clusters separate from the noise scale under defaults") {
  SynthConfig cfg;
  cfg.seed = 11;
  SynthCorpus corpus = GenerateCorpus(cfg);
  // Within-speaker per-phone centroids; mean pairwise distance must clear
  // 4x the per-frame noise std.
  std::map<std::pair<std::string, std::string>, std::pair<Vector, int>> cells;
  for (int u = 0; u < corpus.features.Size(); ++u) {
    const auto& ann = corpus.gold[u];
    for (const auto& p : ann.phones) {
      auto key = std::make_pair(ann.speaker_id, p.symbol);
      auto it = cells.find(key);
      if (it == cells.end())
        it = cells.insert({key, {Vector::Zero(cfg.feature_dim), 0}}).first;
      for (int t = p.start; t < p.end; ++t) {
        it->second.first += corpus.features.utterances[u].frames.row(t).transpose();
        it->second.second += 1;
      }
    }
  }
  double dist_sum = 0.0;
  int dist_count = 0;
  for (auto i = cells.begin(); i != cells.end(); ++i) {
    for (auto j = std::next(i); j != cells.end(); ++j) {
      if (i->first.first != j->first.first) continue;  // same speaker only
      Vector ci = i->second.first / i->second.second;
      Vector cj = j->second.first / j->second.second;
      dist_sum += (ci - cj).norm();
      ++dist_count;
    }
  }
  REQUIRE(dist_count > 0);
  CHECK(dist_sum / dist_count >= 4.0 * cfg.phone_noise_std);
}

TEST_CASE("corpus directory round trip") {
  SynthConfig cfg;
  cfg.num_utterances = 5;
  cfg.seed = 1;
  SynthCorpus corpus = GenerateCorpus(cfg);
  auto dir = std::filesystem::temp_directory_path() / "matdnn_test_synthdir";
  std::filesystem::remove_all(dir);
  SaveSynthCorpus(corpus, dir.string());
  Corpus back = LoadFeatureDir(dir.string());
  REQUIRE(back.Size() == 5);
  Annotation gold = ReadAnnotationCsv((dir / "annotations.csv").string());
  CHECK(gold.size() == 5);
  CHECK(std::filesystem::exists(dir / "synth_config.txt"));
  // f32 per the format; values survive the round trip within f32 precision.
  for (int u = 0; u < 5; ++u)
    CHECK(back.utterances[u].frames.isApprox(corpus.features.utterances[u].frames, 1e-6));
}

TEST_CASE("stronger speaker offsets strictly raise across-speaker ABX error") {
  for (uint64_t seed : {0, 1, 2}) {
    double prev = -1.0;
    for (double offset : {0.8, 2.0, 4.0}) {
      SynthConfig cfg;
      cfg.seed = seed;
      cfg.speaker_offset_std = offset;
      SynthCorpus corpus = GenerateCorpus(cfg);
      AbxOptions opts;
      opts.mode = AbxMode::kAcross;
      opts.collapse_context = true;
      opts.max_triples_per_cell = 100;
      opts.seed = 5;
      AbxReport rep =
          AbxError(corpus.features, BuildAbxItems(corpus.features, corpus.gold), opts);
      CHECK(rep.error_percent > prev);
      prev = rep.error_percent;
    }
  }
}

TEST_CASE("trajectory mode ramps within phones") {
  SynthConfig cfg;
  cfg.trajectory = true;
  cfg.phone_noise_std = 0.0;
  cfg.num_speakers = 1;
  cfg.num_utterances = 4;
  cfg.seed = 5;
  SynthCorpus corpus = GenerateCorpus(cfg);
  bool saw_ramp = false;
  for (int u = 0; u < corpus.features.Size() && !saw_ramp; ++u) {
    for (const auto& p : corpus.gold[u].phones) {
      if (p.end - p.start < 3) continue;
      const auto& fr = corpus.features.utterances[u].frames;
      if ((fr.row(p.end - 1) - fr.row(p.start)).cwiseAbs().maxCoeff() > 1e-9) {
        saw_ramp = true;
        break;
      }
    }
  }
  CHECK(saw_ramp);
}
