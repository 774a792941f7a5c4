// matdnn/pipeline.cc

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

#include "matdnn/pipeline.h"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "matdnn/eval.h"
#include "matdnn/io.h"

namespace matdnn {

namespace fs = std::filesystem;

PipelineConfig PipelineConfig::FromRunConfig(const RunConfig& rc) {
  PipelineConfig cfg;
  cfg.source = rc;
  cfg.corpus_dir = rc.GetString("corpus.dir", "");
  cfg.run_dir = rc.GetString("run.dir", "");
  cfg.grid.temporal = rc.GetIntList("grid.temporal", cfg.grid.temporal);
  cfg.grid.phonetic = rc.GetIntList("grid.phonetic", cfg.grid.phonetic);
  cfg.iterations = rc.GetInt("pipeline.iterations", cfg.iterations);
  cfg.mr_rounds = rc.GetInt("pipeline.mr_rounds", cfg.mr_rounds);
  cfg.context_radius = rc.GetInt("pipeline.context_radius", cfg.context_radius);
  cfg.tokenizer_max_iters = rc.GetInt("tokenizer.max_iters", cfg.tokenizer_max_iters);
  cfg.label_change_tol = rc.GetDouble("tokenizer.label_change_tol", cfg.label_change_tol);
  cfg.lm_weight = rc.GetDouble("tokenizer.lm_weight", cfg.lm_weight);
  cfg.init_seg_len = rc.GetInt("tokenizer.init_seg_len", cfg.init_seg_len);
  cfg.peaks.smooth_width = rc.GetInt("mr.smooth_width", cfg.peaks.smooth_width);
  cfg.peaks.threshold = rc.GetDouble("mr.threshold", cfg.peaks.threshold);
  cfg.peaks.min_gap = rc.GetInt("mr.min_gap", cfg.peaks.min_gap);
  cfg.lda_iterations = rc.GetInt("mr.lda_iterations", cfg.lda_iterations);
  cfg.lda_beta = rc.GetDouble("mr.lda_beta", cfg.lda_beta);
  cfg.mdnn_hidden = rc.GetIntList("mdnn.hidden", cfg.mdnn_hidden);
  cfg.mdnn_bottleneck = rc.GetInt("mdnn.bottleneck", cfg.mdnn_bottleneck);
  cfg.mdnn_learn_rate = rc.GetDouble("mdnn.learn_rate", cfg.mdnn_learn_rate);
  cfg.mdnn_epochs = rc.GetInt("mdnn.epochs", cfg.mdnn_epochs);
  cfg.mdnn_batch_size = rc.GetInt("mdnn.batch_size", cfg.mdnn_batch_size);
  cfg.eval_abx = rc.GetBool("eval.abx", cfg.eval_abx);
  cfg.eval_track2 = rc.GetBool("eval.track2", cfg.eval_track2);
  cfg.abx_cap = rc.GetInt("eval.abx_cap", cfg.abx_cap);
  cfg.collapse_context = rc.GetBool("eval.collapse_context", cfg.collapse_context);
  cfg.boundary_tol = rc.GetInt("eval.boundary_tol", cfg.boundary_tol);
  cfg.seed = static_cast<uint64_t>(rc.GetInt("seed", 0));
  cfg.threads = rc.GetInt("threads", 1);
  if (const char* env = std::getenv("MATDNN_SEED")) {
    cfg.seed = std::strtoull(env, nullptr, 10);
    cfg.source.Set("seed", std::to_string(cfg.seed));
  }
  return cfg;
}

void PipelineConfig::Check() const {
  MATDNN_CHECK(!corpus_dir.empty(), "corpus.dir is required");
  MATDNN_CHECK(!run_dir.empty(), "run.dir is required");
  MATDNN_CHECK(iterations >= 1, "pipeline.iterations must be >= 1");
  MATDNN_CHECK(mr_rounds >= 0, "pipeline.mr_rounds must be >= 0");
  MATDNN_CHECK(context_radius >= 0, "pipeline.context_radius must be >= 0");
  grid.Check();
}

namespace {

std::string HashHex(uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

// Append-only record of artifacts and completed stages; every entry carries
// the config hash so artifacts from different configurations cannot mix.
class Manifest {
 public:
  Manifest(const std::string& run_dir, uint64_t config_hash)
      : path_((fs::path(run_dir) / "manifest.csv").string()),
        hash_(HashHex(config_hash)) {}

  void Load() {
    entries_.clear();
    if (!fs::exists(path_)) return;
    for (const auto& line : ReadLines(path_)) {
      if (line.empty()) continue;
      auto f = SplitCsvLine(line);
      MATDNN_CHECK(f.size() == 4, "bad manifest line '" << line << "'");
      MATDNN_CHECK(f[3] == hash_,
                   "manifest entry '" << f[2] << "' was produced under config hash "
                                      << f[3] << ", current is " << hash_
                                      << "; refusing to mix configurations");
      entries_.push_back({f[0], f[1], f[2]});
    }
  }

  bool HasStage(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.type == "stage" && e.path == name) return true;
    return false;
  }

  void AddFile(const std::string& kind, const std::string& rel_path) {
    for (const auto& e : entries_)
      if (e.type == "file" && e.path == rel_path) return;
    entries_.push_back({"file", rel_path, kind});
    Save();
  }

  void MarkStage(const std::string& name) {
    if (HasStage(name)) return;
    entries_.push_back({"stage", name, ""});
    Save();
  }

  struct Entry {
    std::string type;  // "file" or "stage"
    std::string path;  // relative path or stage name
    std::string kind;  // file format tag
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  void Save() const {
    std::ostringstream os;
    for (const auto& e : entries_)
      os << e.type << "," << e.path << "," << e.kind << "," << hash_ << "\n";
    WriteTextFile(path_, os.str());
  }

  std::string path_;
  std::string hash_;
  std::vector<Entry> entries_;
};

struct PipelineState {
  Corpus initial;
  Annotation gold;
  bool has_gold = false;
  std::vector<Vector> summaries;  // per utterance, from initial features
  Corpus prev_bnf;
  LayerSet layers;
};

std::string LayerDirName(const HyperParams& psi) {
  return "m" + std::to_string(psi.m) + "_n" + std::to_string(psi.n);
}

void Fmt(std::ostringstream& os, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  os << buf;
}

void WriteAbxCsv(const std::string& path, const std::string& features,
                 const AbxReport& across, const AbxReport& within) {
  std::ostringstream os;
  os << "features,mode,error_percent,num_triples,num_pairs,cells_used,cells_skipped\n";
  for (const auto& [mode, rep] :
       {std::make_pair(std::string("across"), across),
        std::make_pair(std::string("within"), within)}) {
    os << features << "," << mode << ",";
    Fmt(os, rep.error_percent);
    os << "," << rep.num_triples << "," << rep.num_pairs << ","
       << rep.num_cells_used << "," << rep.num_cells_skipped << "\n";
  }
  WriteTextFile(path, os.str());
}

void WriteTrack2Csv(const std::string& path,
                    const std::vector<std::pair<HyperParams, Track2Report>>& rows) {
  std::ostringstream os;
  os << "m,n,NED,Cov.,Grouping P,Grouping R,Grouping F,Type P,Type R,Type F,"
        "Token P,Token R,Token F,Boundary P,Boundary R,Boundary F\n";
  for (const auto& [psi, rep] : rows) {
    os << psi.m << "," << psi.n << ",";
    Fmt(os, rep.ned_percent);
    os << ",";
    Fmt(os, rep.coverage_percent);
    for (const Prf* prf : {&rep.grouping, &rep.type, &rep.token, &rep.boundary}) {
      os << ",";
      Fmt(os, prf->precision);
      os << ",";
      Fmt(os, prf->recall);
      os << ",";
      Fmt(os, prf->f);
    }
    os << "\n";
  }
  WriteTextFile(path, os.str());
}

AbxReport RunAbx(const Corpus& corpus, const Annotation& gold, AbxMode mode,
                 const PipelineConfig& cfg) {
  AbxOptions opts;
  opts.mode = mode;
  opts.max_triples_per_cell = cfg.abx_cap;
  opts.seed = DeriveSeed(cfg.seed, 0xAB);
  opts.collapse_context = cfg.collapse_context;
  return AbxError(corpus, BuildAbxItems(corpus, gold), opts);
}

}  // namespace

std::vector<Matrix> BuildMdnnInput(const Corpus& initial, const Corpus* prev_bnf,
                                   int context_radius) {
  std::vector<Matrix> inputs(initial.Size());
  for (int u = 0; u < initial.Size(); ++u) {
    std::vector<FeatureSequence> parts;
    parts.push_back(StackContext(initial.utterances[u], context_radius));
    if (prev_bnf) {
      MATDNN_CHECK(prev_bnf->Size() == initial.Size() &&
                       prev_bnf->utterances[u].utterance_id ==
                           initial.utterances[u].utterance_id,
                   "bottleneck features do not cover the corpus");
      parts.push_back(StackContext(prev_bnf->utterances[u], context_radius));
    }
    parts.push_back(
        BroadcastVector(UtteranceSummary(initial.utterances[u]), initial.utterances[u]));
    inputs[u] = ConcatTandem(parts).frames;
  }
  return inputs;
}

RunResult RunPipeline(const PipelineConfig& cfg, bool resume) {
  cfg.Check();
  fs::create_directories(cfg.run_dir);
  const fs::path run_dir(cfg.run_dir);
  const std::string hash_hex = HashHex(cfg.Hash());

  // Config echo and hash; a resumed run must match the original exactly.
  const fs::path hash_path = run_dir / "config.hash";
  if (resume && fs::exists(hash_path)) {
    const std::string prev = ReadTextFile(hash_path.string());
    MATDNN_CHECK(prev == hash_hex + "\n",
                 "run directory '" << cfg.run_dir << "' was produced under config hash "
                                   << prev << "; current config hashes to " << hash_hex);
  }
  if (!resume) fs::remove(run_dir / "manifest.csv");
  WriteTextFile((run_dir / "config.txt").string(), cfg.source.Canonical());
  WriteTextFile(hash_path.string(), hash_hex + "\n");

  Manifest manifest(cfg.run_dir, cfg.Hash());
  manifest.Load();
  manifest.AddFile("text", "config.txt");
  manifest.AddFile("text", "config.hash");

  PipelineState state;
  {
    Corpus source = LoadFeatureDir(cfg.corpus_dir);
    const fs::path ann_path = fs::path(cfg.corpus_dir) / "annotations.csv";
    if (fs::exists(ann_path)) {
      state.gold = ReadAnnotationCsv(ann_path.string());
      state.has_gold = true;
    }
    MATDNN_CHECK(state.has_gold || (!cfg.eval_abx && !cfg.eval_track2),
                 "evaluation requested but '" << ann_path.string() << "' is missing");

    // Initial features staged into the run; downstream stages read the copy
    // so resumed and fresh runs see bit-identical inputs.
    const fs::path feat_dir = run_dir / "features";
    if (!(resume && manifest.HasStage("features"))) {
      SaveFeatureDir(source, feat_dir.string());
      for (const auto& u : source.utterances)
        manifest.AddFile("matf", "features/" + u.utterance_id + ".matf");
      if (state.has_gold) {
        WriteAnnotationCsv(state.gold, (feat_dir / "annotations.csv").string());
        manifest.AddFile("annotations", "features/annotations.csv");
      }
      manifest.MarkStage("features");
    }
    state.initial = LoadFeatureDir(feat_dir.string());
  }
  state.summaries.resize(state.initial.Size());
  for (int u = 0; u < state.initial.Size(); ++u)
    state.summaries[u] = UtteranceSummary(state.initial.utterances[u]);

  for (int k = 1; k <= cfg.iterations; ++k) {
    const Corpus& mat_input = k == 1 ? state.initial : state.prev_bnf;
    MATDNN_CHECK(mat_input.Size() > 0,
                 "iteration " << k << " is missing its input features (previous "
                              << "bottleneck directory not loaded)");

    // --- MAT grid, with mutual reinforcement rounds.
    const std::string grid_stage = "iter" + std::to_string(k) + "/layers";
    const std::string layers_rel = "layers/iter" + std::to_string(k);
    const fs::path layers_dir = run_dir / layers_rel;
    if (resume && manifest.HasStage(grid_stage)) {
      state.layers = LoadLayerSet(layers_dir.string(), cfg.grid, mat_input);
    } else {
      TokenizerOptions topts;
      topts.max_iters = cfg.tokenizer_max_iters;
      topts.label_change_tol = cfg.label_change_tol;
      topts.lm_weight = cfg.lm_weight;
      topts.init_seg_len = cfg.init_seg_len;
      topts.num_threads = cfg.threads;
      topts.seed = DeriveSeed(cfg.seed, 0x61D, static_cast<uint64_t>(k));
      state.layers = TrainGrid(mat_input, cfg.grid, topts);
      for (int r = 1; r <= cfg.mr_rounds; ++r) {
        ReinforceOptions ropts;
        ropts.peaks = cfg.peaks;
        ropts.lda_iterations = cfg.lda_iterations;
        ropts.lda_beta = cfg.lda_beta;
        ropts.num_threads = cfg.threads;
        ropts.seed = DeriveSeed(DeriveSeed(cfg.seed, 0x312F, static_cast<uint64_t>(k)),
                                static_cast<uint64_t>(r));
        auto init = Reinforce(state.layers, mat_input, cfg.grid, ropts);

        const std::string mr_rel =
            "mr/iter" + std::to_string(k) + "/round" + std::to_string(r);
        fs::create_directories(run_dir / mr_rel);
        std::vector<std::vector<BoundaryFunction>> per_layer;
        for (const auto& layer : state.layers.layers)
          per_layer.push_back(LayerBoundaries(layer.labeling));
        const auto fused = FuseBoundaries(per_layer, cfg.grid);
        WriteBoundariesCsv(fused, (run_dir / mr_rel / "boundaries.csv").string());
        manifest.AddFile("boundaries", mr_rel + "/boundaries.csv");
        std::vector<std::vector<std::pair<int, int>>> segments(fused.size());
        for (size_t u = 0; u < fused.size(); ++u)
          segments[u] = PeaksToSegments(PickPeaks(fused[u], cfg.peaks),
                                        mat_input.utterances[u].NumFrames());
        WriteDocumentsCsv(BuildDocuments(segments, state.layers),
                          (run_dir / mr_rel / "documents.csv").string());
        manifest.AddFile("documents", mr_rel + "/documents.csv");
        for (const auto& [psi, labeling] : init) {
          const std::string name = "init_" + LayerDirName(psi) + ".csv";
          WriteLabelsCsv(labeling, (run_dir / mr_rel / name).string());
          manifest.AddFile("labels", mr_rel + "/" + name);
        }

        TokenizerOptions retrain = topts;
        retrain.seed = DeriveSeed(topts.seed, 0x6E7, static_cast<uint64_t>(r));
        state.layers = TrainGrid(mat_input, cfg.grid, retrain, &init);
      }
      SaveLayerSet(state.layers, layers_dir.string());
      for (const auto& layer : state.layers.layers) {
        manifest.AddFile("matm", layers_rel + "/" + LayerDirName(layer.psi) + "/model.matm");
        manifest.AddFile("labels", layers_rel + "/" + LayerDirName(layer.psi) + "/labels.csv");
      }
      manifest.MarkStage(grid_stage);
      state.layers = LoadLayerSet(layers_dir.string(), cfg.grid, mat_input);
    }

    // --- MDNN on tandem input.
    const std::string mdnn_stage = "iter" + std::to_string(k) + "/mdnn";
    const std::string mdnn_rel = "mdnn/iter" + std::to_string(k) + ".matn";
    fs::create_directories(run_dir / "mdnn");
    std::vector<Matrix> mdnn_input =
        BuildMdnnInput(state.initial, k == 1 ? nullptr : &state.prev_bnf,
                       cfg.context_radius);
    Mdnn net;
    if (resume && manifest.HasStage(mdnn_stage)) {
      net = ReadMdnn((run_dir / mdnn_rel).string());
    } else {
      FrameTargets targets = MakeFrameTargets(state.layers);
      MdnnConfig mcfg;
      mcfg.layer_dims.clear();
      mcfg.layer_dims.push_back(static_cast<int>(mdnn_input[0].cols()));
      for (int h : cfg.mdnn_hidden) mcfg.layer_dims.push_back(h);
      mcfg.layer_dims.push_back(cfg.mdnn_bottleneck);
      mcfg.bottleneck_index = static_cast<int>(mcfg.layer_dims.size()) - 1;
      mcfg.heads = targets.heads;
      mcfg.learn_rate = cfg.mdnn_learn_rate;
      mcfg.epochs = cfg.mdnn_epochs;
      mcfg.batch_size = cfg.mdnn_batch_size;
      mcfg.seed = DeriveSeed(cfg.seed, 0x3D, static_cast<uint64_t>(k));
      net = TrainMdnn(mdnn_input, targets, mcfg);
      WriteMdnn(net, (run_dir / mdnn_rel).string());
      manifest.AddFile("matn", mdnn_rel);
      manifest.MarkStage(mdnn_stage);
      net = ReadMdnn((run_dir / mdnn_rel).string());
    }

    // --- Bottleneck features for track 1 and the next iteration.
    const std::string bnf_stage = "iter" + std::to_string(k) + "/bnf";
    const std::string bnf_rel = "bnf/iter" + std::to_string(k);
    const fs::path bnf_dir = run_dir / bnf_rel;
    if (!(resume && manifest.HasStage(bnf_stage))) {
      Corpus bnf;
      for (int u = 0; u < state.initial.Size(); ++u) {
        FeatureSequence in = state.initial.utterances[u];
        in.frames = mdnn_input[u];
        FeatureSequence out = ExtractBnf(net, in);
        bnf.utterances.push_back(std::move(out));
      }
      SaveFeatureDir(bnf, bnf_dir.string());
      for (const auto& u : bnf.utterances)
        manifest.AddFile("matf", bnf_rel + "/" + u.utterance_id + ".matf");
      manifest.MarkStage(bnf_stage);
    }
    state.prev_bnf = LoadFeatureDir(bnf_dir.string(), FeatureKind::kBottleneck);

    // --- Per-iteration evaluation.
    const std::string eval_stage = "iter" + std::to_string(k) + "/eval";
    if (!(resume && manifest.HasStage(eval_stage))) {
      fs::create_directories(run_dir / "reports");
      if (cfg.eval_abx) {
        const std::string rel = "reports/abx_iter" + std::to_string(k) + ".csv";
        WriteAbxCsv((run_dir / rel).string(), "bnf_iter" + std::to_string(k),
                    RunAbx(state.prev_bnf, state.gold, AbxMode::kAcross, cfg),
                    RunAbx(state.prev_bnf, state.gold, AbxMode::kWithin, cfg));
        manifest.AddFile("report", rel);
      }
      if (cfg.eval_track2) {
        std::vector<std::pair<HyperParams, Track2Report>> rows;
        for (const auto& layer : state.layers.layers) {
          DiscoveredClusters clusters = ClustersFromLabeling(layer.labeling, state.gold);
          rows.push_back({layer.psi, EvalTrack2(clusters, state.gold, cfg.boundary_tol)});
        }
        const std::string rel = "reports/track2_iter" + std::to_string(k) + ".csv";
        WriteTrack2Csv((run_dir / rel).string(), rows);
        manifest.AddFile("report", rel);
      }
      manifest.MarkStage(eval_stage);
    }
  }

  // Baseline: ABX of the raw stacked initial features, the no-learning
  // reference every iteration is compared against.
  if (cfg.eval_abx && !(resume && manifest.HasStage("baseline_abx"))) {
    Corpus stacked;
    for (const auto& u : state.initial.utterances)
      stacked.utterances.push_back(StackContext(u, cfg.context_radius));
    WriteAbxCsv((run_dir / "reports/abx_baseline.csv").string(), "raw_stacked",
                RunAbx(stacked, state.gold, AbxMode::kAcross, cfg),
                RunAbx(stacked, state.gold, AbxMode::kWithin, cfg));
    manifest.AddFile("report", "reports/abx_baseline.csv");
    manifest.MarkStage("baseline_abx");
  }

  // Human-readable run summary.
  {
    std::ostringstream os;
    os << "MAT-DNN run\n";
    os << "config hash: " << hash_hex << "\n";
    os << "iterations: " << cfg.iterations
       << ", mr_rounds: " << cfg.mr_rounds << ", grid: " << cfg.grid.temporal.size()
       << "x" << cfg.grid.phonetic.size() << " layers\n";
    for (int k = 1; k <= cfg.iterations; ++k) {
      os << "iteration " << k << ": layers/iter" << k << ", mdnn/iter" << k
         << ".matn, bnf/iter" << k << "\n";
    }
    if (cfg.eval_abx) os << "ABX reports under reports/abx_*.csv\n";
    if (cfg.eval_track2) os << "Track-2 reports under reports/track2_*.csv\n";
    WriteTextFile((run_dir / "reports" / "summary.txt").string(), os.str());
    manifest.AddFile("text", "reports/summary.txt");
  }

  RunResult result;
  result.run_dir = cfg.run_dir;
  result.iterations_done = cfg.iterations;
  return result;
}

int ValidateRun(const std::string& run_dir) {
  const fs::path root(run_dir);
  MATDNN_CHECK(fs::is_directory(root), "'" << run_dir << "' is not a directory");
  MATDNN_CHECK(fs::exists(root / "config.hash"), "missing config.hash in '" << run_dir << "'");
  const std::string hash = ReadTextFile((root / "config.hash").string());
  MATDNN_CHECK(fs::exists(root / "manifest.csv"), "missing manifest.csv in '" << run_dir << "'");

  int checked = 0;
  for (const auto& line : ReadLines((root / "manifest.csv").string())) {
    if (line.empty()) continue;
    auto f = SplitCsvLine(line);
    MATDNN_CHECK(f.size() == 4, "bad manifest line '" << line << "'");
    MATDNN_CHECK(f[3] + "\n" == hash, "manifest entry '" << f[1]
                                                         << "' hash does not match config.hash");
    if (f[0] != "file") continue;
    const std::string path = (root / f[1]).string();
    MATDNN_CHECK(fs::exists(path), "missing artifact '" << f[1] << "'");
    const std::string& kind = f[2];
    if (kind == "matf") {
      ReadMatf(path);
    } else if (kind == "matm") {
      ReadModel(path);
    } else if (kind == "matn") {
      ReadMdnn(path);
    } else if (kind == "labels") {
      MATDNN_CHECK(!ReadLabelsCsv(path).utts.empty(), "empty labeling '" << f[1] << "'");
    } else if (kind == "annotations") {
      ReadAnnotationCsv(path);
    } else if (kind == "boundaries" || kind == "documents" || kind == "report") {
      for (const auto& row : ReadLines(path))
        MATDNN_CHECK(row.empty() || SplitCsvLine(row).size() >= 2,
                     "bad row in '" << f[1] << "': '" << row << "'");
    } else if (kind == "text") {
      ReadTextFile(path);
    } else {
      MATDNN_ERR("unknown artifact kind '" << kind << "' in manifest");
    }
    ++checked;
  }
  MATDNN_CHECK(checked > 0, "manifest lists no files");
  return checked;
}

}  // namespace matdnn
