// tools/matdnn_main.cc

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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "matdnn/eval.h"
#include "matdnn/io.h"
#include "matdnn/pipeline.h"
#include "matdnn/synth.h"

namespace fs = std::filesystem;
using namespace matdnn;

namespace {

LayerGrid GridFromFlags(const std::vector<int>& temporal, const std::vector<int>& phonetic) {
  LayerGrid grid;
  grid.temporal = temporal;
  grid.phonetic = phonetic;
  grid.Check();
  return grid;
}

// Tandem recipe shared by train-mdnn and extract-bnf: stacked initial
// features, optionally stacked bottleneck features, broadcast summary.
std::vector<Matrix> TandemInput(const Corpus& initial, const std::string& bnf_dir,
                                int stack) {
  if (bnf_dir.empty()) return BuildMdnnInput(initial, nullptr, stack);
  Corpus bnf = LoadFeatureDir(bnf_dir, FeatureKind::kBottleneck);
  return BuildMdnnInput(initial, &bnf, stack);
}

void PrintAbx(const std::string& tag, const AbxReport& rep) {
  std::printf("%s: error %.2f%% over %lld triples (%d pairs, %d cells used, %d skipped)\n",
              tag.c_str(), rep.error_percent,
              static_cast<long long>(rep.num_triples), rep.num_pairs,
              rep.num_cells_used, rep.num_cells_skipped);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAT-DNN: multi-layered acoustic tokenizing deep neural network"};
  app.require_subcommand(1);

  // --- synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic evaluation corpus");
  std::string synth_out;
  SynthConfig synth_cfg;
  uint64_t synth_seed = 0;
  synth->add_option("--out", synth_out, "output corpus directory")->required();
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--num-phones", synth_cfg.num_phones, "distinct phones");
  synth->add_option("--dim", synth_cfg.feature_dim, "feature dimension");
  synth->add_option("--noise-std", synth_cfg.phone_noise_std, "per-frame noise std");
  synth->add_option("--speakers", synth_cfg.num_speakers, "number of speakers");
  synth->add_option("--speaker-offset-std", synth_cfg.speaker_offset_std,
                    "speaker offset std");
  synth->add_option("--utterances", synth_cfg.num_utterances, "number of utterances");
  synth->add_option("--vocab", synth_cfg.vocab_size, "vocabulary size");
  synth->add_flag("--trajectory", synth_cfg.trajectory, "linear mean ramp per phone");

  // --- features
  auto* features = app.add_subcommand("features", "MFCC features from 16-bit mono WAV");
  std::string feat_wav_dir, feat_out;
  MfccConfig mfcc_cfg;
  int feat_stack = 0;
  features->add_option("--wav-dir", feat_wav_dir, "directory of *.wav files")->required();
  features->add_option("--out", feat_out, "output feature directory")->required();
  features->add_option("--window-ms", mfcc_cfg.window_length_ms, "analysis window (ms)");
  features->add_option("--shift-ms", mfcc_cfg.frame_shift_ms, "frame shift (ms)");
  features->add_option("--mel-filters", mfcc_cfg.num_mel_filters, "mel filter count");
  features->add_option("--cepstra", mfcc_cfg.num_cepstra, "cepstral coefficients");
  features->add_option("--stack", feat_stack, "context radius in frames (0 = none)");

  // --- tokenize
  auto* tokenize = app.add_subcommand("tokenize", "train the acoustic token grid");
  std::string tok_features, tok_out, tok_init_dir;
  std::vector<int> tok_temporal{3, 5, 7, 9}, tok_phonetic{50, 100, 300, 500};
  TokenizerOptions tok_opts;
  tokenize->add_option("--features", tok_features, "input feature directory")->required();
  tokenize->add_option("--out", tok_out, "output layer directory")->required();
  tokenize->add_option("--temporal", tok_temporal, "m values")->delimiter(',');
  tokenize->add_option("--phonetic", tok_phonetic, "n values")->delimiter(',');
  tokenize->add_option("--max-iters", tok_opts.max_iters, "tokenizer iterations");
  tokenize->add_option("--label-change-tol", tok_opts.label_change_tol,
                       "stop when fewer frames change");
  tokenize->add_option("--lm-weight", tok_opts.lm_weight, "token unigram weight");
  tokenize->add_option("--seed", tok_opts.seed, "training seed");
  tokenize->add_option("--threads", tok_opts.num_threads, "worker threads");
  tokenize->add_option("--init-dir", tok_init_dir,
                       "directory of init_m{m}_n{n}.csv label files");

  // --- reinforce
  auto* reinforce = app.add_subcommand("reinforce",
                                       "mutual reinforcement: fresh initial labels");
  std::string mr_features, mr_layers, mr_out;
  std::vector<int> mr_temporal{3, 5, 7, 9}, mr_phonetic{50, 100, 300, 500};
  ReinforceOptions mr_opts;
  reinforce->add_option("--features", mr_features, "input feature directory")->required();
  reinforce->add_option("--layers", mr_layers, "trained layer directory")->required();
  reinforce->add_option("--out", mr_out, "output directory")->required();
  reinforce->add_option("--temporal", mr_temporal, "m values")->delimiter(',');
  reinforce->add_option("--phonetic", mr_phonetic, "n values")->delimiter(',');
  reinforce->add_option("--threshold", mr_opts.peaks.threshold, "peak threshold");
  reinforce->add_option("--min-gap", mr_opts.peaks.min_gap, "minimum peak gap");
  reinforce->add_option("--lda-iterations", mr_opts.lda_iterations, "Gibbs sweeps");
  reinforce->add_option("--seed", mr_opts.seed, "sampler seed");
  reinforce->add_option("--threads", mr_opts.num_threads, "worker threads");

  // --- train-mdnn
  auto* train = app.add_subcommand("train-mdnn", "train the multi-target network");
  std::string mdnn_features, mdnn_layers, mdnn_bnf_dir, mdnn_out;
  std::vector<int> mdnn_temporal{3, 5, 7, 9}, mdnn_phonetic{50, 100, 300, 500};
  std::vector<int> mdnn_hidden{256, 256};
  int mdnn_bottleneck = 39, mdnn_stack = 4, mdnn_epochs = 20, mdnn_batch = 128;
  double mdnn_lr = 0.1;
  uint64_t mdnn_seed = 0;
  train->add_option("--features", mdnn_features, "initial feature directory")->required();
  train->add_option("--layers", mdnn_layers, "trained layer directory")->required();
  train->add_option("--out", mdnn_out, "output .matn model path")->required();
  train->add_option("--temporal", mdnn_temporal, "m values")->delimiter(',');
  train->add_option("--phonetic", mdnn_phonetic, "n values")->delimiter(',');
  train->add_option("--bnf", mdnn_bnf_dir, "previous-iteration bottleneck directory");
  train->add_option("--hidden", mdnn_hidden, "hidden widths")->delimiter(',');
  train->add_option("--bottleneck", mdnn_bottleneck, "bottleneck width");
  train->add_option("--stack", mdnn_stack, "context radius for tandem input");
  train->add_option("--epochs", mdnn_epochs, "training epochs");
  train->add_option("--batch-size", mdnn_batch, "minibatch size");
  train->add_option("--learn-rate", mdnn_lr, "SGD learning rate");
  train->add_option("--seed", mdnn_seed, "training seed");

  // --- extract-bnf
  auto* extract = app.add_subcommand("extract-bnf", "bottleneck features from a model");
  std::string ex_model, ex_features, ex_bnf_dir, ex_out;
  int ex_stack = 4;
  extract->add_option("--model", ex_model, "trained .matn model")->required();
  extract->add_option("--features", ex_features, "initial feature directory")->required();
  extract->add_option("--out", ex_out, "output feature directory")->required();
  extract->add_option("--bnf", ex_bnf_dir, "previous-iteration bottleneck directory");
  extract->add_option("--stack", ex_stack, "context radius for tandem input");

  // --- eval-abx
  auto* abx = app.add_subcommand("eval-abx", "ABX discriminability of a feature set");
  std::string abx_features, abx_ann, abx_out;
  int abx_stack = 0, abx_cap = 50;
  bool abx_collapse = false;
  uint64_t abx_seed = 0;
  abx->add_option("--features", abx_features, "feature directory")->required();
  abx->add_option("--annotations", abx_ann, "gold annotation csv")->required();
  abx->add_option("--out", abx_out, "report csv path");
  abx->add_option("--stack", abx_stack, "context radius applied before DTW");
  abx->add_option("--cap", abx_cap, "triples per cell");
  abx->add_flag("--collapse-context", abx_collapse, "pool all contexts");
  abx->add_option("--seed", abx_seed, "sampling seed");

  // --- eval-std
  auto* std_eval = app.add_subcommand("eval-std", "track-2 unit discovery metrics");
  std::string std_labels, std_ann, std_out;
  int std_tol = 2;
  std_eval->add_option("--labels", std_labels, "token labeling csv")->required();
  std_eval->add_option("--annotations", std_ann, "gold annotation csv")->required();
  std_eval->add_option("--out", std_out, "report csv path");
  std_eval->add_option("--tol", std_tol, "boundary tolerance in frames");

  // --- run
  auto* run = app.add_subcommand("run", "full iterative pipeline from a config file");
  std::string run_config;
  bool run_resume = false, run_deterministic = false;
  int run_threads = 0;
  run->add_option("--config", run_config, "key = value config file")->required();
  run->add_flag("--resume", run_resume, "skip stages recorded in the manifest");
  run->add_flag("--deterministic", run_deterministic, "force serial execution");
  run->add_option("--threads", run_threads, "cap worker threads");

  // --- validate
  auto* validate = app.add_subcommand("validate", "re-parse every artifact of a run");
  std::string val_dir;
  validate->add_option("--run-dir", val_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      synth_cfg.seed = synth_seed;
      SaveSynthCorpus(GenerateCorpus(synth_cfg), synth_out);
      std::printf("wrote synthetic corpus to %s\n", synth_out.c_str());
    } else if (*features) {
      fs::create_directories(feat_out);
      int count = 0;
      for (const auto& path : ListFiles(feat_wav_dir, ".wav")) {
        Waveform w = ReadWav(path);
        w.speaker_id = w.utterance_id;  // unknown speakers: one per utterance
        FeatureSequence f = ComputeMfcc(w, mfcc_cfg);
        if (feat_stack > 0) f = StackContext(f, feat_stack);
        WriteMatf(f, (fs::path(feat_out) / (f.utterance_id + ".matf")).string());
        ++count;
      }
      std::printf("wrote %d feature files to %s\n", count, feat_out.c_str());
    } else if (*tokenize) {
      Corpus corpus = LoadFeatureDir(tok_features);
      LayerGrid grid = GridFromFlags(tok_temporal, tok_phonetic);
      std::map<HyperParams, TokenLabeling> init;
      if (!tok_init_dir.empty()) {
        for (const HyperParams& psi : grid.Layers()) {
          fs::path p = fs::path(tok_init_dir) / ("init_m" + std::to_string(psi.m) +
                                                 "_n" + std::to_string(psi.n) + ".csv");
          MATDNN_CHECK(fs::exists(p), "missing initial labels '" << p.string() << "'");
          init[psi] = ReadLabelsCsv(p.string());
        }
      }
      LayerSet set = TrainGrid(corpus, grid, tok_opts, init.empty() ? nullptr : &init);
      SaveLayerSet(set, tok_out);
      for (const auto& layer : set.layers)
        std::printf("layer m=%d n=%d: %d iterations, %d dead-token rescues\n",
                    layer.psi.m, layer.psi.n, layer.report.iterations_run,
                    layer.report.dead_token_rescues);
      std::printf("wrote %d layers to %s\n", set.NumLayers(), tok_out.c_str());
    } else if (*reinforce) {
      Corpus corpus = LoadFeatureDir(mr_features);
      LayerGrid grid = GridFromFlags(mr_temporal, mr_phonetic);
      LayerSet set = LoadLayerSet(mr_layers, grid, corpus);
      auto init = Reinforce(set, corpus, grid, mr_opts);
      fs::create_directories(mr_out);
      std::vector<std::vector<BoundaryFunction>> per_layer;
      for (const auto& layer : set.layers)
        per_layer.push_back(LayerBoundaries(layer.labeling));
      const auto fused = FuseBoundaries(per_layer, grid);
      WriteBoundariesCsv(fused, (fs::path(mr_out) / "boundaries.csv").string());
      std::vector<std::vector<std::pair<int, int>>> segments(fused.size());
      for (size_t u = 0; u < fused.size(); ++u)
        segments[u] = PeaksToSegments(PickPeaks(fused[u], mr_opts.peaks),
                                      corpus.utterances[u].NumFrames());
      WriteDocumentsCsv(BuildDocuments(segments, set),
                        (fs::path(mr_out) / "documents.csv").string());
      for (const auto& [psi, labeling] : init)
        WriteLabelsCsv(labeling,
                       (fs::path(mr_out) / ("init_m" + std::to_string(psi.m) + "_n" +
                                            std::to_string(psi.n) + ".csv"))
                           .string());
      std::printf("wrote mutual-reinforcement artifacts to %s\n", mr_out.c_str());
    } else if (*train) {
      Corpus corpus = LoadFeatureDir(mdnn_features);
      LayerGrid grid = GridFromFlags(mdnn_temporal, mdnn_phonetic);
      LayerSet set = LoadLayerSet(mdnn_layers, grid, corpus);
      std::vector<Matrix> input = TandemInput(corpus, mdnn_bnf_dir, mdnn_stack);
      FrameTargets targets = MakeFrameTargets(set);
      MdnnConfig cfg;
      cfg.layer_dims.clear();
      cfg.layer_dims.push_back(static_cast<int>(input[0].cols()));
      for (int h : mdnn_hidden) cfg.layer_dims.push_back(h);
      cfg.layer_dims.push_back(mdnn_bottleneck);
      cfg.bottleneck_index = static_cast<int>(cfg.layer_dims.size()) - 1;
      cfg.heads = targets.heads;
      cfg.learn_rate = mdnn_lr;
      cfg.epochs = mdnn_epochs;
      cfg.batch_size = mdnn_batch;
      cfg.seed = mdnn_seed;
      TrainTrace trace;
      Mdnn net = TrainMdnn(input, targets, cfg, &trace);
      WriteMdnn(net, mdnn_out);
      std::printf("loss %.6f -> %.6f over %d epochs; model written to %s\n",
                  trace.epoch_loss.front(), trace.epoch_loss.back(), mdnn_epochs,
                  mdnn_out.c_str());
    } else if (*extract) {
      Corpus corpus = LoadFeatureDir(ex_features);
      Mdnn net = ReadMdnn(ex_model);
      std::vector<Matrix> input = TandemInput(corpus, ex_bnf_dir, ex_stack);
      Corpus bnf;
      for (int u = 0; u < corpus.Size(); ++u) {
        FeatureSequence in = corpus.utterances[u];
        in.frames = input[u];
        bnf.utterances.push_back(ExtractBnf(net, in));
      }
      SaveFeatureDir(bnf, ex_out);
      std::printf("wrote %d-dim bottleneck features to %s\n",
                  net.config.BottleneckDim(), ex_out.c_str());
    } else if (*abx) {
      Corpus corpus = LoadFeatureDir(abx_features);
      if (abx_stack > 0) {
        for (auto& u : corpus.utterances) u = StackContext(u, abx_stack);
      }
      Annotation gold = ReadAnnotationCsv(abx_ann);
      AbxOptions opts;
      opts.max_triples_per_cell = abx_cap;
      opts.seed = abx_seed;
      opts.collapse_context = abx_collapse;
      auto items = BuildAbxItems(corpus, gold);
      opts.mode = AbxMode::kAcross;
      AbxReport across = AbxError(corpus, items, opts);
      opts.mode = AbxMode::kWithin;
      AbxReport within = AbxError(corpus, items, opts);
      PrintAbx("across", across);
      PrintAbx("within", within);
      if (!abx_out.empty()) {
        std::ostringstream os;
        os << "mode,error_percent,num_triples,num_pairs,cells_used,cells_skipped\n";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", across.error_percent);
        os << "across," << buf << "," << across.num_triples << "," << across.num_pairs
           << "," << across.num_cells_used << "," << across.num_cells_skipped << "\n";
        std::snprintf(buf, sizeof(buf), "%.6f", within.error_percent);
        os << "within," << buf << "," << within.num_triples << "," << within.num_pairs
           << "," << within.num_cells_used << "," << within.num_cells_skipped << "\n";
        WriteTextFile(abx_out, os.str());
      }
    } else if (*std_eval) {
      TokenLabeling labeling = ReadLabelsCsv(std_labels);
      Annotation gold = ReadAnnotationCsv(std_ann);
      DiscoveredClusters clusters = ClustersFromLabeling(labeling, gold);
      Track2Report rep = EvalTrack2(clusters, gold, std_tol);
      std::printf("NED %.2f  Cov. %.2f\n", rep.ned_percent, rep.coverage_percent);
      std::printf("Grouping P/R/F %.3f/%.3f/%.3f%s\n", rep.grouping.precision,
                  rep.grouping.recall, rep.grouping.f,
                  rep.grouping_flagged ? "  (no token-matched intervals)" : "");
      std::printf("Type     P/R/F %.3f/%.3f/%.3f\n", rep.type.precision,
                  rep.type.recall, rep.type.f);
      std::printf("Token    P/R/F %.3f/%.3f/%.3f\n", rep.token.precision,
                  rep.token.recall, rep.token.f);
      std::printf("Boundary P/R/F %.3f/%.3f/%.3f\n", rep.boundary.precision,
                  rep.boundary.recall, rep.boundary.f);
      if (!std_out.empty()) {
        std::ostringstream os;
        os << "metric,precision,recall,f\n";
        char buf[256];
        std::snprintf(buf, sizeof(buf), "NED,%.6f,,\nCov.,%.6f,,\n", rep.ned_percent,
                      rep.coverage_percent);
        os << buf;
        auto put = [&os](const char* name, const Prf& p) {
          char row[256];
          std::snprintf(row, sizeof(row), "%s,%.6f,%.6f,%.6f\n", name, p.precision,
                        p.recall, p.f);
          os << row;
        };
        put("Grouping", rep.grouping);
        put("Type", rep.type);
        put("Token", rep.token);
        put("Boundary", rep.boundary);
        WriteTextFile(std_out, os.str());
      }
    } else if (*run) {
      PipelineConfig cfg = PipelineConfig::FromRunConfig(RunConfig::FromFile(run_config));
      if (run_deterministic) cfg.threads = 1;
      if (run_threads > 0 && !run_deterministic) cfg.threads = run_threads;
      RunResult result = RunPipeline(cfg, run_resume);
      std::printf("run complete: %d iterations under %s\n", result.iterations_done,
                  result.run_dir.c_str());
    } else if (*validate) {
      int checked = ValidateRun(val_dir);
      std::printf("validate: %d artifacts parsed OK\n", checked);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
