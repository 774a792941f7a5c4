// matdnn/feature.cc

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

#include "matdnn/feature.h"

#include <algorithm>
#include <cmath>
#include <complex>

namespace matdnn {

std::string FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kMfcc: return "mfcc";
    case FeatureKind::kTandem: return "tandem";
    case FeatureKind::kBottleneck: return "bottleneck";
    case FeatureKind::kStacked: return "stacked";
  }
  return "mfcc";
}

FeatureKind FeatureKindFromName(const std::string& name) {
  if (name == "mfcc") return FeatureKind::kMfcc;
  if (name == "tandem") return FeatureKind::kTandem;
  if (name == "bottleneck") return FeatureKind::kBottleneck;
  if (name == "stacked") return FeatureKind::kStacked;
  MATDNN_ERR("unknown feature kind '" << name << "'");
}

int64_t Corpus::TotalFrames() const {
  int64_t total = 0;
  for (const auto& u : utterances) total += u.NumFrames();
  return total;
}

int Corpus::IndexOf(const std::string& utterance_id) const {
  for (int i = 0; i < Size(); ++i)
    if (utterances[i].utterance_id == utterance_id) return i;
  return -1;
}

Vector Corpus::GlobalVariance() const {
  MATDNN_CHECK(!utterances.empty(), "GlobalVariance on empty corpus");
  const int dim = Dim();
  Vector sum = Vector::Zero(dim), sumsq = Vector::Zero(dim);
  int64_t count = 0;
  for (const auto& u : utterances) {
    for (int t = 0; t < u.NumFrames(); ++t) {
      Vector row = u.frames.row(t).transpose();
      sum += row;
      sumsq += row.cwiseProduct(row);
    }
    count += u.NumFrames();
  }
  Vector mean = sum / static_cast<double>(count);
  Vector var = sumsq / static_cast<double>(count) - mean.cwiseProduct(mean);
  return var.cwiseMax(0.0);
}

uint64_t Corpus::Fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& u : utterances) {
    h = Fnv1a(u.utterance_id, h);
    h = Fnv1a(u.speaker_id, h);
    for (int t = 0; t < u.NumFrames(); ++t) {
      for (int d = 0; d < u.Dim(); ++d) {
        float v = static_cast<float>(u.frames(t, d));
        h = Fnv1a(&v, sizeof(v), h);
      }
    }
  }
  return h;
}

namespace {

// In-place radix-2 FFT; n must be a power of two.
void Fft(std::vector<std::complex<double>>* buf) {
  auto& a = *buf;
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

size_t NextPow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular mel filterbank over FFT bins [0, nfft/2].
std::vector<std::vector<double>> MelFilterbank(int num_filters, int nfft,
                                               int sample_rate) {
  const int num_bins = nfft / 2 + 1;
  const double mel_lo = HzToMel(0.0);
  const double mel_hi = HzToMel(sample_rate / 2.0);
  std::vector<double> centers(num_filters + 2);
  for (int i = 0; i < num_filters + 2; ++i) {
    double mel = mel_lo + (mel_hi - mel_lo) * i / (num_filters + 1);
    centers[i] = MelToHz(mel) * nfft / sample_rate;
  }
  std::vector<std::vector<double>> bank(num_filters,
                                        std::vector<double>(num_bins, 0.0));
  for (int f = 0; f < num_filters; ++f) {
    const double lo = centers[f], mid = centers[f + 1], hi = centers[f + 2];
    for (int b = 0; b < num_bins; ++b) {
      if (b > lo && b < mid) {
        bank[f][b] = (b - lo) / (mid - lo);
      } else if (b >= mid && b < hi) {
        bank[f][b] = (hi - b) / (hi - mid);
      }
    }
  }
  return bank;
}

constexpr double kLogFloor = 1e-10;

}  // namespace

FeatureSequence ComputeMfcc(const Waveform& w, const MfccConfig& cfg) {
  MATDNN_CHECK(w.sample_rate > 0, "waveform '" << w.utterance_id
                                               << "': sample_rate must be > 0");
  const int window = static_cast<int>(cfg.window_length_ms * w.sample_rate / 1000.0);
  const int shift = static_cast<int>(cfg.frame_shift_ms * w.sample_rate / 1000.0);
  const int num_samples = static_cast<int>(w.samples.size());
  MATDNN_CHECK(num_samples >= window,
               "utterance '" << w.utterance_id << "' has " << num_samples
                             << " samples, shorter than one " << window
                             << "-sample window");
  MATDNN_CHECK(cfg.num_cepstra < cfg.num_mel_filters,
               "num_cepstra must be < num_mel_filters");

  const int num_frames = (num_samples - window) / shift + 1;
  const int nfft = static_cast<int>(NextPow2(static_cast<size_t>(window)));
  const auto bank = MelFilterbank(cfg.num_mel_filters, nfft, w.sample_rate);
  const int num_static = cfg.num_cepstra + (cfg.include_energy ? 1 : 0);

  // DCT-II basis, HTK scaling, rows for c1..c_numcep.
  std::vector<std::vector<double>> dct(cfg.num_cepstra,
                                       std::vector<double>(cfg.num_mel_filters));
  const double dct_scale = std::sqrt(2.0 / cfg.num_mel_filters);
  for (int i = 0; i < cfg.num_cepstra; ++i)
    for (int j = 0; j < cfg.num_mel_filters; ++j)
      dct[i][j] = dct_scale * std::cos(M_PI * (i + 1) * (j + 0.5) / cfg.num_mel_filters);

  Matrix statics(num_frames, num_static);
  std::vector<std::complex<double>> buf(nfft);
  std::vector<double> frame(window);
  for (int t = 0; t < num_frames; ++t) {
    const int off = t * shift;
    // Log frame energy of the raw frame, clamped at the floor.
    double energy = 0.0;
    for (int i = 0; i < window; ++i) {
      frame[i] = w.samples[off + i];
      energy += frame[i] * frame[i];
    }
    double log_energy =
        energy > 0.0 ? std::max(std::log(energy), cfg.energy_floor) : cfg.energy_floor;

    // Pre-emphasis then Hamming window.
    for (int i = window - 1; i > 0; --i) frame[i] -= cfg.preemphasis * frame[i - 1];
    frame[0] -= cfg.preemphasis * frame[0];
    for (int i = 0; i < window; ++i)
      frame[i] *= 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (window - 1));

    for (int i = 0; i < nfft; ++i)
      buf[i] = std::complex<double>(i < window ? frame[i] : 0.0, 0.0);
    Fft(&buf);

    std::vector<double> log_mel(cfg.num_mel_filters);
    for (int f = 0; f < cfg.num_mel_filters; ++f) {
      double acc = 0.0;
      for (int b = 0; b <= nfft / 2; ++b) {
        if (bank[f][b] != 0.0) acc += bank[f][b] * std::norm(buf[b]);
      }
      log_mel[f] = std::log(std::max(acc, kLogFloor));
    }
    for (int i = 0; i < cfg.num_cepstra; ++i) {
      double c = 0.0;
      for (int j = 0; j < cfg.num_mel_filters; ++j) c += dct[i][j] * log_mel[j];
      statics(t, i) = c;
    }
    if (cfg.include_energy) statics(t, cfg.num_cepstra) = log_energy;
  }

  FeatureSequence out;
  out.utterance_id = w.utterance_id;
  out.speaker_id = w.speaker_id;
  out.frame_shift_ms = static_cast<int>(cfg.frame_shift_ms);
  out.kind = FeatureKind::kMfcc;
  out.frames = AddDeltas(statics, cfg.delta_window);
  return out;
}

Matrix AddDeltas(const Matrix& feats, int delta_window) {
  MATDNN_CHECK(delta_window >= 1, "delta_window must be >= 1");
  const int T = static_cast<int>(feats.rows());
  const int D = static_cast<int>(feats.cols());
  double denom = 0.0;
  for (int tau = 1; tau <= delta_window; ++tau) denom += 2.0 * tau * tau;

  auto regress = [&](const Matrix& in) {
    Matrix out(T, D);
    for (int t = 0; t < T; ++t) {
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(D);
      for (int tau = 1; tau <= delta_window; ++tau) {
        int ahead = std::min(t + tau, T - 1);
        int behind = std::max(t - tau, 0);
        acc += tau * (in.row(ahead) - in.row(behind));
      }
      out.row(t) = acc / denom;
    }
    return out;
  };

  Matrix delta = regress(feats);
  Matrix delta2 = regress(delta);
  Matrix out(T, 3 * D);
  out.leftCols(D) = feats;
  out.middleCols(D, D) = delta;
  out.rightCols(D) = delta2;
  return out;
}

FeatureSequence StackContext(const FeatureSequence& f, int w) {
  MATDNN_CHECK(w >= 0, "context radius must be >= 0");
  const int T = f.NumFrames();
  const int D = f.Dim();
  FeatureSequence out = f;
  if (w == 0) return out;
  out.frames.resize(T, D * (2 * w + 1));
  for (int t = 0; t < T; ++t) {
    for (int k = -w; k <= w; ++k) {
      int src = std::clamp(t + k, 0, T - 1);
      out.frames.block(t, (k + w) * D, 1, D) = f.frames.row(src);
    }
  }
  out.kind = FeatureKind::kStacked;
  return out;
}

FeatureSequence ConcatTandem(const std::vector<FeatureSequence>& parts) {
  MATDNN_CHECK(!parts.empty(), "ConcatTandem needs at least one part");
  if (parts.size() == 1) return parts[0];
  const int T = parts[0].NumFrames();
  int dim = 0;
  for (const auto& p : parts) {
    MATDNN_CHECK(p.utterance_id == parts[0].utterance_id,
                 "tandem parts disagree on utterance_id: '"
                     << parts[0].utterance_id << "' vs '" << p.utterance_id << "'");
    MATDNN_CHECK(p.NumFrames() == T, "tandem parts for '" << p.utterance_id
                                                          << "' disagree on T: " << T
                                                          << " vs " << p.NumFrames());
    dim += p.Dim();
  }
  FeatureSequence out = parts[0];
  out.frames.resize(T, dim);
  int off = 0;
  for (const auto& p : parts) {
    out.frames.middleCols(off, p.Dim()) = p.frames;
    off += p.Dim();
  }
  out.kind = FeatureKind::kTandem;
  return out;
}

Vector UtteranceSummary(const FeatureSequence& f) {
  MATDNN_CHECK(f.NumFrames() >= 1, "UtteranceSummary needs T >= 1");
  const int D = f.Dim();
  Vector mean = f.frames.colwise().mean().transpose();
  Vector var = Vector::Zero(D);
  for (int t = 0; t < f.NumFrames(); ++t) {
    Vector d = f.frames.row(t).transpose() - mean;
    var += d.cwiseProduct(d);
  }
  var /= static_cast<double>(f.NumFrames());
  Vector out(2 * D);
  out.head(D) = mean;
  out.tail(D) = var.cwiseSqrt();
  return out;
}

FeatureSequence BroadcastVector(const Vector& v, const FeatureSequence& like) {
  FeatureSequence out;
  out.utterance_id = like.utterance_id;
  out.speaker_id = like.speaker_id;
  out.frame_shift_ms = like.frame_shift_ms;
  out.kind = FeatureKind::kTandem;
  out.frames = v.transpose().replicate(like.NumFrames(), 1);
  return out;
}

}  // namespace matdnn
