// matdnn/mdnn.h

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

#ifndef MATDNN_MDNN_H_
#define MATDNN_MDNN_H_

#include <string>
#include <vector>

#include "matdnn/feature.h"
#include "matdnn/grid.h"

namespace matdnn {

struct MdnnConfig {
  // Trunk widths: input, hidden..., with the bottleneck at bottleneck_index.
  // The paper-scale default is 429-256-256-39 with the 39-wide bottleneck
  // last; wide mode swaps the bottleneck for 256 units.
  std::vector<int> layer_dims = {429, 256, 256, 39};
  int bottleneck_index = 3;
  std::vector<int> heads;  // class count per grid layer, (m, n) order
  double learn_rate = 0.1;
  int epochs = 20;
  int batch_size = 128;
  uint64_t seed = 0;

  void Check() const;
  int InputDim() const { return layer_dims.front(); }
  int BottleneckDim() const { return layer_dims[bottleneck_index]; }
};

// Feedforward trunk with logistic activations and one affine+softmax head
// per grid layer.
struct Mdnn {
  MdnnConfig config;
  std::vector<Matrix> trunk_weights;  // [out x in] per transition
  std::vector<Vector> trunk_biases;
  std::vector<Matrix> head_weights;   // [classes x last-trunk-width]
  std::vector<Vector> head_biases;

  static Mdnn Zeros(const MdnnConfig& cfg);
  // Weights ~ uniform(-r, r), r = sqrt(6 / (fan_in + fan_out)); zero biases.
  static Mdnn Glorot(const MdnnConfig& cfg, uint64_t seed);
};

// Frame-level training targets: one token-id stream per grid layer.
struct FrameTargets {
  std::vector<int> heads;                       // class count per stream
  std::vector<std::vector<std::vector<int>>> ids;  // [utt][stream][frame]
};

FrameTargets MakeFrameTargets(const LayerSet& layer_set);

struct ForwardResult {
  std::vector<Matrix> head_posteriors;  // per head: T x classes
  Matrix bottleneck;                    // T x bottleneck width
};

ForwardResult Forward(const Mdnn& net, const Matrix& frames);

// (1/H) * sum over heads of mean-per-frame cross entropy.
double Loss(const Mdnn& net, const std::vector<Matrix>& inputs,
            const FrameTargets& targets);

// Analytic gradients of Loss over the whole set, in an Mdnn-shaped container.
Mdnn LossGradients(const Mdnn& net, const std::vector<Matrix>& inputs,
                   const FrameTargets& targets);

struct TrainTrace {
  std::vector<double> epoch_loss;  // [0] is the pre-training loss
};

// Minibatch SGD with a seeded shuffle per epoch; single-threaded and
// bit-reproducible for a fixed seed.
Mdnn TrainMdnn(const std::vector<Matrix>& inputs, const FrameTargets& targets,
               const MdnnConfig& cfg, TrainTrace* trace = nullptr);

// Bottleneck activations (post-activation) of every frame.
FeatureSequence ExtractBnf(const Mdnn& net, const FeatureSequence& features);

// Model file: magic "MATN", u32 LE version (1), trunk size + dims,
// bottleneck_index, head count + class counts, then parameters f32 LE in
// trunk-then-head order, each tensor row-major with its bias following.
void WriteMdnn(const Mdnn& net, const std::string& path);
Mdnn ReadMdnn(const std::string& path);

}  // namespace matdnn

#endif  // MATDNN_MDNN_H_
