// matdnn/synth.cc

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

#include "matdnn/synth.h"

#include <filesystem>
#include <random>
#include <sstream>

#include "matdnn/io.h"

namespace matdnn {

void SynthConfig::Check() const {
  MATDNN_CHECK(num_phones >= 2 && feature_dim >= 1, "need >= 2 phones and dim >= 1");
  MATDNN_CHECK(min_phone_duration >= 1 && max_phone_duration >= min_phone_duration,
               "bad phone duration range");
  MATDNN_CHECK(vocab_size >= 1 && min_word_phones >= 1 &&
                   max_word_phones >= min_word_phones,
               "bad vocabulary settings");
  MATDNN_CHECK(num_speakers >= 1 && num_utterances >= 1, "need speakers and utterances");
  MATDNN_CHECK(min_words_per_utt >= 1 && max_words_per_utt >= min_words_per_utt,
               "bad words-per-utterance range");
  MATDNN_CHECK(phone_noise_std >= 0.0 && speaker_offset_std >= 0.0, "negative std");
}

std::string SynthConfig::Echo() const {
  std::ostringstream os;
  os << "synth.num_phones = " << num_phones << "\n"
     << "synth.feature_dim = " << feature_dim << "\n"
     << "synth.phone_mean_scale = " << phone_mean_scale << "\n"
     << "synth.phone_noise_std = " << phone_noise_std << "\n"
     << "synth.min_phone_duration = " << min_phone_duration << "\n"
     << "synth.max_phone_duration = " << max_phone_duration << "\n"
     << "synth.vocab_size = " << vocab_size << "\n"
     << "synth.min_word_phones = " << min_word_phones << "\n"
     << "synth.max_word_phones = " << max_word_phones << "\n"
     << "synth.num_speakers = " << num_speakers << "\n"
     << "synth.speaker_offset_std = " << speaker_offset_std << "\n"
     << "synth.num_utterances = " << num_utterances << "\n"
     << "synth.min_words_per_utt = " << min_words_per_utt << "\n"
     << "synth.max_words_per_utt = " << max_words_per_utt << "\n"
     << "synth.trajectory = " << (trajectory ? 1 : 0) << "\n"
     << "synth.trajectory_scale = " << trajectory_scale << "\n"
     << "synth.seed = " << seed << "\n";
  return os.str();
}

SynthCorpus GenerateCorpus(const SynthConfig& cfg) {
  cfg.Check();
  SynthCorpus corpus;
  corpus.config = cfg;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Phone prototypes, per-phone trajectory directions, speaker offsets.
  std::vector<Vector> phone_means(cfg.num_phones);
  std::vector<Vector> phone_ramp(cfg.num_phones);
  for (int p = 0; p < cfg.num_phones; ++p) {
    phone_means[p].resize(cfg.feature_dim);
    phone_ramp[p].resize(cfg.feature_dim);
    for (int d = 0; d < cfg.feature_dim; ++d)
      phone_means[p](d) = gauss(rng) * cfg.phone_mean_scale;
    for (int d = 0; d < cfg.feature_dim; ++d)
      phone_ramp[p](d) = cfg.trajectory ? gauss(rng) * cfg.trajectory_scale : 0.0;
  }
  std::vector<Vector> speaker_offsets(cfg.num_speakers);
  for (int s = 0; s < cfg.num_speakers; ++s) {
    speaker_offsets[s].resize(cfg.feature_dim);
    for (int d = 0; d < cfg.feature_dim; ++d)
      speaker_offsets[s](d) = gauss(rng) * cfg.speaker_offset_std;
  }

  // Vocabulary: words of min..max phones drawn uniformly.
  std::uniform_int_distribution<int> word_len(cfg.min_word_phones, cfg.max_word_phones);
  std::uniform_int_distribution<int> phone_pick(0, cfg.num_phones - 1);
  std::vector<std::vector<int>> vocab(cfg.vocab_size);
  for (auto& word : vocab) {
    word.resize(word_len(rng));
    for (int& p : word) p = phone_pick(rng);
  }

  std::uniform_int_distribution<int> words_per_utt(cfg.min_words_per_utt,
                                                   cfg.max_words_per_utt);
  std::uniform_int_distribution<int> word_pick(0, cfg.vocab_size - 1);
  std::uniform_int_distribution<int> duration(cfg.min_phone_duration,
                                              cfg.max_phone_duration);
  std::uniform_int_distribution<int> speaker_pick(0, cfg.num_speakers - 1);

  const int id_width = static_cast<int>(std::to_string(cfg.num_utterances - 1).size());
  for (int u = 0; u < cfg.num_utterances; ++u) {
    const int speaker = speaker_pick(rng);
    std::string num = std::to_string(u);
    std::string utt_id = "utt" + std::string(id_width - num.size(), '0') + num;
    UttAnnotation ann;
    ann.utterance_id = utt_id;
    ann.speaker_id = "spk" + std::to_string(speaker);

    std::vector<Vector> frames;
    const int num_words = words_per_utt(rng);
    for (int w = 0; w < num_words; ++w) {
      const int word = word_pick(rng);
      const int word_start = static_cast<int>(frames.size());
      for (int p : vocab[word]) {
        const int dur = duration(rng);
        const int phone_start = static_cast<int>(frames.size());
        for (int t = 0; t < dur; ++t) {
          Vector f = phone_means[p] + speaker_offsets[speaker];
          if (cfg.trajectory)
            f += (static_cast<double>(t) / dur - 0.5) * phone_ramp[p];
          for (int d = 0; d < cfg.feature_dim; ++d)
            f(d) += gauss(rng) * cfg.phone_noise_std;
          frames.push_back(f);
        }
        ann.phones.push_back({phone_start, static_cast<int>(frames.size()),
                              "p" + std::to_string(p)});
      }
      ann.words.push_back({word_start, static_cast<int>(frames.size()),
                           "w" + std::to_string(word)});
    }

    FeatureSequence feat;
    feat.utterance_id = utt_id;
    feat.speaker_id = ann.speaker_id;
    feat.kind = FeatureKind::kMfcc;
    feat.frames.resize(frames.size(), cfg.feature_dim);
    for (size_t t = 0; t < frames.size(); ++t) feat.frames.row(t) = frames[t].transpose();
    corpus.features.utterances.push_back(std::move(feat));
    corpus.gold.push_back(std::move(ann));
  }
  CheckAnnotation(corpus.gold);
  return corpus;
}

void SaveSynthCorpus(const SynthCorpus& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  SaveFeatureDir(corpus.features, dir);
  WriteAnnotationCsv(corpus.gold, (fs::path(dir) / "annotations.csv").string());
  WriteTextFile((fs::path(dir) / "synth_config.txt").string(), corpus.config.Echo());
}

}  // namespace matdnn
