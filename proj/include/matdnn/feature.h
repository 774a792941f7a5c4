// matdnn/feature.h

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

#ifndef MATDNN_FEATURE_H_
#define MATDNN_FEATURE_H_

#include <string>
#include <vector>

#include "matdnn/common.h"

namespace matdnn {

struct Waveform {
  std::string utterance_id;
  std::string speaker_id;
  std::vector<double> samples;  // amplitudes, nominally in [-1, 1)
  int sample_rate = 16000;
};

enum class FeatureKind { kMfcc, kTandem, kBottleneck, kStacked };

std::string FeatureKindName(FeatureKind kind);
FeatureKind FeatureKindFromName(const std::string& name);

// One utterance's T x D frame matrix.
struct FeatureSequence {
  std::string utterance_id;
  std::string speaker_id;
  Matrix frames;  // T rows, D cols
  int frame_shift_ms = 10;
  FeatureKind kind = FeatureKind::kMfcc;

  int NumFrames() const { return static_cast<int>(frames.rows()); }
  int Dim() const { return static_cast<int>(frames.cols()); }
};

// A corpus is an ordered list of utterances; the order is load order (sorted
// by utterance id) and is what every per-utterance structure aligns to.
struct Corpus {
  std::vector<FeatureSequence> utterances;

  int Size() const { return static_cast<int>(utterances.size()); }
  int Dim() const { return utterances.empty() ? 0 : utterances[0].Dim(); }
  int64_t TotalFrames() const;
  int IndexOf(const std::string& utterance_id) const;  // -1 if absent
  // Per-dimension variance pooled over all frames.
  Vector GlobalVariance() const;
  uint64_t Fingerprint() const;
};

struct MfccConfig {
  double window_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  int num_mel_filters = 26;
  int num_cepstra = 12;
  bool include_energy = true;
  int delta_window = 2;
  double energy_floor = -50.0;  // log-energy lower bound
  double preemphasis = 0.97;
  int sample_rate = 16000;
};

// 39-dim MFCC under defaults: c1..c12 + log energy, with deltas and double
// deltas appended. Rejects utterances shorter than one window.
FeatureSequence ComputeMfcc(const Waveform& w, const MfccConfig& cfg);

// Appends delta and delta-delta blocks computed by the standard regression
// over +/-delta_window frames with edge replication.
Matrix AddDeltas(const Matrix& feats, int delta_window);

// Splices +/-w neighboring frames onto each frame, edge-replicated.
FeatureSequence StackContext(const FeatureSequence& f, int w);

// Frame-wise concatenation; all parts must agree on utterance_id and T.
FeatureSequence ConcatTandem(const std::vector<FeatureSequence>& parts);

// Per-dimension mean then standard deviation, concatenated (2D values).
// Stand-in for an utterance-level conditioning vector.
Vector UtteranceSummary(const FeatureSequence& f);

// Broadcasts a fixed vector to every frame as a FeatureSequence part.
FeatureSequence BroadcastVector(const Vector& v, const FeatureSequence& like);

}  // namespace matdnn

#endif  // MATDNN_FEATURE_H_
