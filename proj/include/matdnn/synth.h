// matdnn/synth.h

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

#ifndef MATDNN_SYNTH_H_
#define MATDNN_SYNTH_H_

#include <string>

#include "matdnn/annotation.h"
#include "matdnn/feature.h"

namespace matdnn {

// Seeded feature-space corpus with gold phone/word tiers and controllable
// speaker variation; makes every pipeline claim testable without licensed
// audio.
struct SynthConfig {
  int num_phones = 8;
  int feature_dim = 8;
  double phone_mean_scale = 3.0;
  double phone_noise_std = 0.5;
  int min_phone_duration = 5;   // frames
  int max_phone_duration = 15;
  int vocab_size = 12;          // words of 2..4 phones
  int min_word_phones = 2;
  int max_word_phones = 4;
  int num_speakers = 3;
  double speaker_offset_std = 0.8;
  int num_utterances = 60;
  int min_words_per_utt = 3;
  int max_words_per_utt = 8;
  bool trajectory = false;      // linear mean ramp within each phone
  double trajectory_scale = 1.0;
  uint64_t seed = 0;

  void Check() const;
  std::string Echo() const;  // key = value lines
};

struct SynthCorpus {
  Corpus features;
  Annotation gold;
  SynthConfig config;
};

SynthCorpus GenerateCorpus(const SynthConfig& cfg);

// Emits MATF features, annotations.csv and a config echo into dir.
void SaveSynthCorpus(const SynthCorpus& corpus, const std::string& dir);

}  // namespace matdnn

#endif  // MATDNN_SYNTH_H_
