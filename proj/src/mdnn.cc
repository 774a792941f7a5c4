// matdnn/mdnn.cc

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

#include "matdnn/mdnn.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "matdnn/io.h"

namespace matdnn {

void MdnnConfig::Check() const {
  MATDNN_CHECK(layer_dims.size() >= 2, "layer_dims needs at least input and one layer");
  for (int d : layer_dims) MATDNN_CHECK(d >= 1, "layer widths must be positive");
  MATDNN_CHECK(bottleneck_index >= 1 &&
                   bottleneck_index < static_cast<int>(layer_dims.size()),
               "bottleneck_index " << bottleneck_index << " outside the trunk");
  MATDNN_CHECK(!heads.empty(), "at least one target head is required");
  for (int h : heads) MATDNN_CHECK(h >= 2, "every head needs >= 2 classes");
  MATDNN_CHECK(batch_size >= 1 && epochs >= 0, "bad batch_size/epochs");
}

Mdnn Mdnn::Zeros(const MdnnConfig& cfg) {
  cfg.Check();
  Mdnn net;
  net.config = cfg;
  const int L = static_cast<int>(cfg.layer_dims.size()) - 1;
  for (int i = 0; i < L; ++i) {
    net.trunk_weights.push_back(Matrix::Zero(cfg.layer_dims[i + 1], cfg.layer_dims[i]));
    net.trunk_biases.push_back(Vector::Zero(cfg.layer_dims[i + 1]));
  }
  const int last = cfg.layer_dims.back();
  for (int h : cfg.heads) {
    net.head_weights.push_back(Matrix::Zero(h, last));
    net.head_biases.push_back(Vector::Zero(h));
  }
  return net;
}

Mdnn Mdnn::Glorot(const MdnnConfig& cfg, uint64_t seed) {
  Mdnn net = Zeros(cfg);
  std::mt19937_64 rng(seed);
  auto fill = [&rng](Matrix& w) {
    const double r = std::sqrt(6.0 / (w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-r, r);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
  };
  for (auto& w : net.trunk_weights) fill(w);
  for (auto& w : net.head_weights) fill(w);
  return net;
}

FrameTargets MakeFrameTargets(const LayerSet& layer_set) {
  FrameTargets targets;
  MATDNN_CHECK(!layer_set.layers.empty(), "empty layer set");
  const int H = layer_set.NumLayers();
  const int num_utts = layer_set.layers[0].labeling.NumUtts();
  for (const auto& layer : layer_set.layers) targets.heads.push_back(layer.psi.n);
  targets.ids.resize(num_utts);
  for (int u = 0; u < num_utts; ++u) {
    targets.ids[u].resize(H);
    for (int h = 0; h < H; ++h) {
      const auto& utt = layer_set.layers[h].labeling.utts[u];
      const int T = utt.segments.back().end;
      auto& stream = targets.ids[u][h];
      stream.assign(T, 0);
      for (const auto& seg : utt.segments)
        for (int t = seg.start; t < seg.end; ++t) stream[t] = seg.token_id;
    }
  }
  return targets;
}

namespace {

inline Matrix Logistic(const Matrix& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

// Rows of logits -> (softmax rows, per-row log-sum-exp for the loss).
void SoftmaxRows(const Matrix& logits, Matrix* post, Vector* logsumexp) {
  post->resize(logits.rows(), logits.cols());
  if (logsumexp) logsumexp->resize(logits.rows());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double mx = logits.row(r).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      const double e = std::exp(logits(r, c) - mx);
      (*post)(r, c) = e;
      sum += e;
    }
    post->row(r) /= sum;
    if (logsumexp) (*logsumexp)(r) = mx + std::log(sum);
  }
}

struct BatchTape {
  std::vector<Matrix> activations;  // [0] = input, then per trunk layer
  std::vector<Matrix> head_logits;
};

BatchTape ForwardBatch(const Mdnn& net, const Matrix& input) {
  BatchTape tape;
  tape.activations.push_back(input);
  for (size_t i = 0; i < net.trunk_weights.size(); ++i) {
    Matrix z = tape.activations.back() * net.trunk_weights[i].transpose();
    z.rowwise() += net.trunk_biases[i].transpose();
    tape.activations.push_back(Logistic(z));
  }
  for (size_t h = 0; h < net.head_weights.size(); ++h) {
    Matrix z = tape.activations.back() * net.head_weights[h].transpose();
    z.rowwise() += net.head_biases[h].transpose();
    tape.head_logits.push_back(std::move(z));
  }
  return tape;
}

// Mean cross entropy of the batch and, when grads is given, accumulation of
// the batch-mean gradients into it.
double BackwardBatch(const Mdnn& net, const BatchTape& tape,
                     const std::vector<std::vector<int>>& batch_targets,
                     Mdnn* grads) {
  const int B = static_cast<int>(tape.activations[0].rows());
  const int H = static_cast<int>(net.head_weights.size());
  const double head_scale = 1.0 / (H * static_cast<double>(B));
  double ce_sum = 0.0;
  Matrix d_last;  // gradient wrt last trunk activation
  if (grads) d_last = Matrix::Zero(B, net.config.layer_dims.back());
  for (int h = 0; h < H; ++h) {
    Matrix post;
    Vector lse;
    SoftmaxRows(tape.head_logits[h], &post, &lse);
    for (int r = 0; r < B; ++r)
      ce_sum += lse(r) - tape.head_logits[h](r, batch_targets[h][r]);
    if (grads) {
      Matrix dz = post;
      for (int r = 0; r < B; ++r) dz(r, batch_targets[h][r]) -= 1.0;
      dz *= head_scale;
      grads->head_weights[h] += dz.transpose() * tape.activations.back();
      grads->head_biases[h] += dz.colwise().sum().transpose();
      d_last += dz * net.head_weights[h];
    }
  }
  const double loss = ce_sum * head_scale;
  if (grads) {
    Matrix da = std::move(d_last);
    for (int i = static_cast<int>(net.trunk_weights.size()) - 1; i >= 0; --i) {
      const Matrix& a = tape.activations[i + 1];
      Matrix dz = da.cwiseProduct(a.cwiseProduct(Matrix::Ones(a.rows(), a.cols()) - a));
      grads->trunk_weights[i] += dz.transpose() * tape.activations[i];
      grads->trunk_biases[i] += dz.colwise().sum().transpose();
      if (i > 0) da = dz * net.trunk_weights[i];
    }
  }
  return loss;
}

// Flattened (utterance, frame) index pairs.
std::vector<std::pair<int, int>> FrameIndex(const std::vector<Matrix>& inputs) {
  std::vector<std::pair<int, int>> idx;
  for (size_t u = 0; u < inputs.size(); ++u)
    for (int t = 0; t < inputs[u].rows(); ++t) idx.push_back({static_cast<int>(u), t});
  return idx;
}

void CheckAligned(const Mdnn& net, const std::vector<Matrix>& inputs,
                  const FrameTargets& targets) {
  MATDNN_CHECK(inputs.size() == targets.ids.size(),
               "inputs and targets cover different utterance counts");
  MATDNN_CHECK(targets.heads.size() == net.head_weights.size(),
               "network has " << net.head_weights.size() << " heads, targets have "
                              << targets.heads.size());
  for (size_t u = 0; u < inputs.size(); ++u) {
    MATDNN_CHECK(inputs[u].cols() == net.config.InputDim(),
                 "input dim " << inputs[u].cols() << " does not match network input "
                              << net.config.InputDim());
    for (size_t h = 0; h < targets.heads.size(); ++h)
      MATDNN_CHECK(static_cast<int>(targets.ids[u][h].size()) == inputs[u].rows(),
                   "target stream " << h << " does not cover utterance " << u);
  }
}

}  // namespace

ForwardResult Forward(const Mdnn& net, const Matrix& frames) {
  MATDNN_CHECK(frames.cols() == net.config.InputDim(),
               "input dim " << frames.cols() << " does not match network input "
                            << net.config.InputDim());
  BatchTape tape = ForwardBatch(net, frames);
  ForwardResult result;
  result.bottleneck = tape.activations[net.config.bottleneck_index];
  for (const auto& logits : tape.head_logits) {
    Matrix post;
    SoftmaxRows(logits, &post, nullptr);
    result.head_posteriors.push_back(std::move(post));
  }
  return result;
}

double Loss(const Mdnn& net, const std::vector<Matrix>& inputs,
            const FrameTargets& targets) {
  CheckAligned(net, inputs, targets);
  const int H = static_cast<int>(targets.heads.size());
  int64_t total_frames = 0;
  for (const auto& in : inputs) total_frames += in.rows();
  MATDNN_CHECK(total_frames > 0, "no frames");
  double total = 0.0;
  for (size_t u = 0; u < inputs.size(); ++u) {
    BatchTape tape = ForwardBatch(net, inputs[u]);
    for (int h = 0; h < H; ++h) {
      Matrix post;
      Vector lse;
      SoftmaxRows(tape.head_logits[h], &post, &lse);
      for (int t = 0; t < inputs[u].rows(); ++t)
        total += lse(t) - tape.head_logits[h](t, targets.ids[u][h][t]);
    }
  }
  return total / (static_cast<double>(H) * static_cast<double>(total_frames));
}

Mdnn LossGradients(const Mdnn& net, const std::vector<Matrix>& inputs,
                   const FrameTargets& targets) {
  CheckAligned(net, inputs, targets);
  // Single whole-set batch; gradients of the mean loss over all frames.
  const auto idx = FrameIndex(inputs);
  Matrix batch(idx.size(), net.config.InputDim());
  std::vector<std::vector<int>> bt(targets.heads.size(),
                                   std::vector<int>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) {
    batch.row(i) = inputs[idx[i].first].row(idx[i].second);
    for (size_t h = 0; h < targets.heads.size(); ++h)
      bt[h][i] = targets.ids[idx[i].first][h][idx[i].second];
  }
  Mdnn grads = Mdnn::Zeros(net.config);
  BatchTape tape = ForwardBatch(net, batch);
  BackwardBatch(net, tape, bt, &grads);
  return grads;
}

Mdnn TrainMdnn(const std::vector<Matrix>& inputs, const FrameTargets& targets,
               const MdnnConfig& cfg, TrainTrace* trace) {
  MdnnConfig checked = cfg;
  checked.heads = targets.heads;
  Mdnn net = Mdnn::Glorot(checked, DeriveSeed(cfg.seed, 0x91u));
  CheckAligned(net, inputs, targets);
  const auto idx = FrameIndex(inputs);
  MATDNN_CHECK(!idx.empty(), "empty training set");
  const int H = static_cast<int>(targets.heads.size());

  if (trace) {
    trace->epoch_loss.clear();
    trace->epoch_loss.push_back(Loss(net, inputs, targets));
  }
  std::vector<int> order(idx.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::mt19937_64 rng(DeriveSeed(cfg.seed, 0x5Fu, static_cast<uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t pos = 0; pos < order.size(); pos += cfg.batch_size) {
      const int B = static_cast<int>(
          std::min<size_t>(cfg.batch_size, order.size() - pos));
      Matrix batch(B, net.config.InputDim());
      std::vector<std::vector<int>> bt(H, std::vector<int>(B));
      for (int r = 0; r < B; ++r) {
        const auto [u, t] = idx[order[pos + r]];
        batch.row(r) = inputs[u].row(t);
        for (int h = 0; h < H; ++h) bt[h][r] = targets.ids[u][h][t];
      }
      Mdnn grads = Mdnn::Zeros(net.config);
      BatchTape tape = ForwardBatch(net, batch);
      const double batch_loss = BackwardBatch(net, tape, bt, &grads);
      MATDNN_CHECK(std::isfinite(batch_loss),
                   "non-finite loss at epoch " << epoch << ", batch " << pos / cfg.batch_size);
      for (size_t i = 0; i < net.trunk_weights.size(); ++i) {
        net.trunk_weights[i] -= cfg.learn_rate * grads.trunk_weights[i];
        net.trunk_biases[i] -= cfg.learn_rate * grads.trunk_biases[i];
      }
      for (size_t h = 0; h < net.head_weights.size(); ++h) {
        net.head_weights[h] -= cfg.learn_rate * grads.head_weights[h];
        net.head_biases[h] -= cfg.learn_rate * grads.head_biases[h];
      }
    }
    if (trace) trace->epoch_loss.push_back(Loss(net, inputs, targets));
  }
  return net;
}

FeatureSequence ExtractBnf(const Mdnn& net, const FeatureSequence& features) {
  MATDNN_CHECK(features.Dim() == net.config.InputDim(),
               "utterance '" << features.utterance_id << "' has dim " << features.Dim()
                             << ", network expects " << net.config.InputDim());
  FeatureSequence out;
  out.utterance_id = features.utterance_id;
  out.speaker_id = features.speaker_id;
  out.frame_shift_ms = features.frame_shift_ms;
  out.kind = FeatureKind::kBottleneck;
  Matrix a = features.frames;
  for (int i = 0; i < net.config.bottleneck_index; ++i) {
    Matrix z = a * net.trunk_weights[i].transpose();
    z.rowwise() += net.trunk_biases[i].transpose();
    a = Logistic(z);
  }
  out.frames = std::move(a);
  return out;
}

void WriteMdnn(const Mdnn& net, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  MATDNN_CHECK(os.is_open(), "cannot write '" << path << "'");
  os.write("MATN", 4);
  PutU32(os, 1);
  PutU32(os, static_cast<uint32_t>(net.config.layer_dims.size()));
  for (int d : net.config.layer_dims) PutU32(os, static_cast<uint32_t>(d));
  PutU32(os, static_cast<uint32_t>(net.config.bottleneck_index));
  PutU32(os, static_cast<uint32_t>(net.config.heads.size()));
  for (int h : net.config.heads) PutU32(os, static_cast<uint32_t>(h));
  auto put_tensor = [&os](const Matrix& w, const Vector& b) {
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        PutF32(os, static_cast<float>(w(i, j)));
    for (Eigen::Index i = 0; i < b.size(); ++i) PutF32(os, static_cast<float>(b(i)));
  };
  for (size_t i = 0; i < net.trunk_weights.size(); ++i)
    put_tensor(net.trunk_weights[i], net.trunk_biases[i]);
  for (size_t h = 0; h < net.head_weights.size(); ++h)
    put_tensor(net.head_weights[h], net.head_biases[h]);
  MATDNN_CHECK(os.good(), "write failed for '" << path << "'");
}

Mdnn ReadMdnn(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  MATDNN_CHECK(is.is_open(), "cannot open '" << path << "'");
  char magic[4];
  is.read(magic, 4);
  MATDNN_CHECK(is.gcount() == 4 && std::string(magic, 4) == "MATN",
               "'" << path << "' is not a MATN file");
  uint32_t version = GetU32(is, path);
  MATDNN_CHECK(version == 1, "'" << path << "': unsupported MATN version " << version);
  MdnnConfig cfg;
  cfg.layer_dims.clear();
  uint32_t num_dims = GetU32(is, path);
  MATDNN_CHECK(num_dims >= 2 && num_dims < 64, "'" << path << "': implausible trunk size");
  for (uint32_t i = 0; i < num_dims; ++i)
    cfg.layer_dims.push_back(static_cast<int>(GetU32(is, path)));
  cfg.bottleneck_index = static_cast<int>(GetU32(is, path));
  cfg.heads.clear();
  uint32_t num_heads = GetU32(is, path);
  MATDNN_CHECK(num_heads >= 1 && num_heads < 4096, "'" << path << "': implausible head count");
  for (uint32_t h = 0; h < num_heads; ++h)
    cfg.heads.push_back(static_cast<int>(GetU32(is, path)));
  Mdnn net = Mdnn::Zeros(cfg);
  auto get_tensor = [&is, &path](Matrix& w, Vector& b) {
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        w(i, j) = GetF32(is, path);
        MATDNN_CHECK(std::isfinite(w(i, j)), "'" << path << "': non-finite weight");
      }
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      b(i) = GetF32(is, path);
      MATDNN_CHECK(std::isfinite(b(i)), "'" << path << "': non-finite bias");
    }
  };
  for (size_t i = 0; i < net.trunk_weights.size(); ++i)
    get_tensor(net.trunk_weights[i], net.trunk_biases[i]);
  for (size_t h = 0; h < net.head_weights.size(); ++h)
    get_tensor(net.head_weights[h], net.head_biases[h]);
  return net;
}

}  // namespace matdnn
