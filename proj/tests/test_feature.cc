// tests/test_feature.cc

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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "matdnn/feature.h"

using namespace matdnn;

namespace {

// Independent static-cepstra oracle: naive DFT, its own mel filterbank and
// DCT, sharing only the documented conventions with the implementation.
std::vector<double> OracleStaticCepstra(const std::vector<double>& samples,
                                        int frame_index, const MfccConfig& cfg) {
  const int window = static_cast<int>(cfg.window_length_ms * cfg.sample_rate / 1000.0);
  const int shift = static_cast<int>(cfg.frame_shift_ms * cfg.sample_rate / 1000.0);
  const int off = frame_index * shift;
  std::vector<double> frame(samples.begin() + off, samples.begin() + off + window);

  double energy = 0.0;
  for (double s : frame) energy += s * s;
  const double log_energy =
      energy > 0.0 ? std::max(std::log(energy), cfg.energy_floor) : cfg.energy_floor;

  for (int i = window - 1; i > 0; --i) frame[i] -= cfg.preemphasis * frame[i - 1];
  frame[0] -= cfg.preemphasis * frame[0];
  for (int i = 0; i < window; ++i)
    frame[i] *= 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (window - 1));

  int nfft = 1;
  while (nfft < window) nfft *= 2;
  const int bins = nfft / 2 + 1;
  std::vector<double> power(bins);
  for (int k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < window; ++i) {
      const double ang = -2.0 * M_PI * k * i / nfft;
      re += frame[i] * std::cos(ang);
      im += frame[i] * std::sin(ang);
    }
    power[k] = re * re + im * im;
  }

  auto hz2mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto mel2hz = [](double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); };
  const int M = cfg.num_mel_filters;
  std::vector<double> centers(M + 2);
  for (int i = 0; i < M + 2; ++i) {
    const double mel = hz2mel(0.0) + (hz2mel(cfg.sample_rate / 2.0) - hz2mel(0.0)) *
                                         i / (M + 1);
    centers[i] = mel2hz(mel) * nfft / cfg.sample_rate;
  }
  std::vector<double> log_mel(M);
  for (int f = 0; f < M; ++f) {
    double acc = 0.0;
    for (int b = 0; b < bins; ++b) {
      double w = 0.0;
      if (b > centers[f] && b < centers[f + 1]) {
        w = (b - centers[f]) / (centers[f + 1] - centers[f]);
      } else if (b >= centers[f + 1] && b < centers[f + 2]) {
        w = (centers[f + 2] - b) / (centers[f + 2] - centers[f + 1]);
      }
      acc += w * power[b];
    }
    log_mel[f] = std::log(std::max(acc, 1e-10));
  }
  std::vector<double> out(cfg.num_cepstra + 1);
  for (int i = 0; i < cfg.num_cepstra; ++i) {
    double c = 0.0;
    for (int j = 0; j < M; ++j)
      c += log_mel[j] * std::cos(M_PI * (i + 1) * (j + 0.5) / M);
    out[i] = std::sqrt(2.0 / M) * c;
  }
  out[cfg.num_cepstra] = log_energy;
  return out;
}

Waveform Sine(double freq_hz, double seconds, int rate, double amplitude = 1.0) {
  Waveform w;
  w.utterance_id = "sine";
  w.speaker_id = "spk0";
  w.sample_rate = rate;
  const int n = static_cast<int>(seconds * rate);
  w.samples.resize(n);
  for (int i = 0; i < n; ++i)
    w.samples[i] = amplitude * std::sin(2.0 * M_PI * freq_hz * i / rate);
  return w;
}

FeatureSequence RandomFeatures(int T, int D, uint64_t seed, const std::string& id = "u") {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FeatureSequence f;
  f.utterance_id = id;
  f.speaker_id = "spk0";
  f.frames.resize(T, D);
  for (int t = 0; t < T; ++t)
    for (int d = 0; d < D; ++d) f.frames(t, d) = gauss(rng);
  return f;
}

}  // namespace

TEST_CASE("mfcc frame count and dimension under defaults") {
  Waveform w = Sine(440.0, 1.0, 16000);
  FeatureSequence f = ComputeMfcc(w, MfccConfig{});
  CHECK(f.NumFrames() == 98);  // floor((16000 - 400) / 160) + 1
  CHECK(f.Dim() == 39);
  CHECK(f.kind == FeatureKind::kMfcc);
}

TEST_CASE("mfcc of silence: identical frames, floored energy, zero deltas") {
  Waveform w;
  w.utterance_id = "silence";
  w.sample_rate = 16000;
  w.samples.assign(16000, 0.0);
  MfccConfig cfg;
  FeatureSequence f = ComputeMfcc(w, cfg);
  for (int t = 1; t < f.NumFrames(); ++t)
    CHECK((f.frames.row(t) - f.frames.row(0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(f.frames(0, cfg.num_cepstra) == doctest::Approx(cfg.energy_floor));
  CHECK(f.frames.rightCols(26).cwiseAbs().maxCoeff() == 0.0);  // delta blocks
}

TEST_CASE("mfcc static cepstra match the independent DFT oracle") {
  MfccConfig cfg;
  Waveform w = Sine(440.0, 0.2, 16000);
  FeatureSequence f = ComputeMfcc(w, cfg);
  REQUIRE(f.NumFrames() == 18);
  for (int t : {0, 7, 17}) {
    const auto expect = OracleStaticCepstra(w.samples, t, cfg);
    for (int d = 0; d < 13; ++d)
      CHECK(std::abs(f.frames(t, d) - expect[d]) < 1e-6);
  }
}

TEST_CASE("mfcc rejects an utterance shorter than one window") {
  Waveform w;
  w.utterance_id = "tiny";
  w.sample_rate = 16000;
  w.samples.assign(100, 0.1);
  CHECK_THROWS_WITH_AS(ComputeMfcc(w, MfccConfig{}),
                       doctest::Contains("tiny"), std::runtime_error);
}

TEST_CASE("mfcc is deterministic") {
  Waveform w = Sine(220.0, 0.5, 16000, 0.7);
  FeatureSequence a = ComputeMfcc(w, MfccConfig{});
  FeatureSequence b = ComputeMfcc(w, MfccConfig{});
  CHECK(a.frames == b.frames);
}

TEST_CASE("delta of a constant sequence is exactly zero") {
  Matrix m = Matrix::Constant(20, 5, 3.25);
  Matrix out = AddDeltas(m, 2);
  CHECK(out.cols() == 15);
  CHECK(out.rightCols(10).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stack_context") {
  FeatureSequence f = RandomFeatures(30, 39, 11);

  SUBCASE("w=0 is the identity") {
    FeatureSequence out = StackContext(f, 0);
    CHECK(out.frames == f.frames);
  }
  SUBCASE("w=4 on 39 dims gives 351") {
    CHECK(StackContext(f, 4).Dim() == 351);
  }
  SUBCASE("T=1: every block equals the single frame") {
    FeatureSequence one = RandomFeatures(1, 6, 3);
    FeatureSequence out = StackContext(one, 3);
    CHECK(out.Dim() == 42);
    for (int k = 0; k < 7; ++k)
      CHECK(out.frames.block(0, k * 6, 1, 6) == one.frames);
  }
  SUBCASE("center block equals the input row for every t and w") {
    for (int w : {1, 2, 5}) {
      FeatureSequence out = StackContext(f, w);
      for (int t = 0; t < f.NumFrames(); ++t)
        CHECK(out.frames.block(t, w * f.Dim(), 1, f.Dim()) == f.frames.row(t));
    }
  }
}

TEST_CASE("concat_tandem") {
  SUBCASE("single part is the identity") {
    FeatureSequence f = RandomFeatures(10, 8, 5);
    CHECK(ConcatTandem({f}).frames == f.frames);
  }
  SUBCASE("dims add up, 351 + 351 = 702") {
    FeatureSequence a = RandomFeatures(12, 351, 1), b = RandomFeatures(12, 351, 2);
    CHECK(ConcatTandem({a, b}).Dim() == 702);
  }
  SUBCASE("paper-shaped input: three stacked blocks plus a broadcast vector") {
    std::vector<FeatureSequence> parts;
    for (uint64_t s = 0; s < 3; ++s) parts.push_back(RandomFeatures(9, 351, s));
    parts.push_back(RandomFeatures(9, 400, 77));
    CHECK(ConcatTandem(parts).Dim() == 1453);
  }
  SUBCASE("values preserved at their column offsets") {
    FeatureSequence a = RandomFeatures(7, 3, 21), b = RandomFeatures(7, 5, 22);
    FeatureSequence out = ConcatTandem({a, b});
    CHECK(out.frames.leftCols(3) == a.frames);
    CHECK(out.frames.rightCols(5) == b.frames);
  }
  SUBCASE("mismatched T rejected") {
    FeatureSequence a = RandomFeatures(7, 3, 1), b = RandomFeatures(8, 3, 2);
    CHECK_THROWS_AS(ConcatTandem({a, b}), std::runtime_error);
  }
  SUBCASE("mismatched utterance rejected") {
    FeatureSequence a = RandomFeatures(7, 3, 1, "u1"), b = RandomFeatures(7, 3, 2, "u2");
    CHECK_THROWS_AS(ConcatTandem({a, b}), std::runtime_error);
  }
}

TEST_CASE("utterance_summary") {
  SUBCASE("constant sequence: means are the constant, stds zero") {
    FeatureSequence f;
    f.utterance_id = "c";
    f.frames = Matrix::Constant(14, 4, -2.5);
    Vector s = UtteranceSummary(f);
    CHECK(s.size() == 8);
    CHECK(s.head(4).isApproxToConstant(-2.5));
    CHECK(s.tail(4).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("39-dim input gives 78 dims") {
    CHECK(UtteranceSummary(RandomFeatures(20, 39, 9)).size() == 78);
  }
  SUBCASE("constant offset moves means only") {
    FeatureSequence a = RandomFeatures(25, 6, 42);
    FeatureSequence b = a;
    b.frames.array() += 1.75;
    Vector sa = UtteranceSummary(a), sb = UtteranceSummary(b);
    CHECK((sb.head(6) - sa.head(6)).isApproxToConstant(1.75, 1e-12));
    CHECK((sb.tail(6) - sa.tail(6)).cwiseAbs().maxCoeff() < 1e-9);
  }
}
