// tests/test_io.cc

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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "matdnn/annotation.h"
#include "matdnn/io.h"

using namespace matdnn;
namespace fs = std::filesystem;

namespace {

fs::path TempDir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("matdnn_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void WriteTestWav(const fs::path& path, const std::vector<int16_t>& samples,
                  uint32_t rate) {
  std::ofstream os(path, std::ios::binary);
  auto u32 = [&os](uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&os](uint16_t v) { os.write(reinterpret_cast<const char*>(&v), 2); };
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  os.write("RIFF", 4);
  u32(36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  u32(16);
  u16(1);  // PCM
  u16(1);  // mono
  u32(rate);
  u32(rate * 2);
  u16(2);
  u16(16);
  os.write("data", 4);
  u32(data_bytes);
  for (int16_t s : samples) u16(static_cast<uint16_t>(s));
}

}  // namespace

TEST_CASE("wav reader: 16-bit mono PCM round trip") {
  fs::path dir = TempDir("wav");
  std::vector<int16_t> samples = {0, 16384, -16384, 32767, -32768, 100};
  WriteTestWav(dir / "toy.wav", samples, 16000);
  Waveform w = ReadWav((dir / "toy.wav").string());
  CHECK(w.utterance_id == "toy");
  CHECK(w.sample_rate == 16000);
  REQUIRE(w.samples.size() == samples.size());
  CHECK(w.samples[1] == doctest::Approx(0.5));
  CHECK(w.samples[2] == doctest::Approx(-0.5));
  CHECK(w.samples[4] == doctest::Approx(-1.0));
}

TEST_CASE("wav reader rejects non-wav input") {
  fs::path dir = TempDir("notwav");
  WriteTextFile((dir / "x.wav").string(), "definitely not audio");
  CHECK_THROWS_AS(ReadWav((dir / "x.wav").string()), std::runtime_error);
}

TEST_CASE("matf round trip preserves header fields and f32 payload") {
  fs::path dir = TempDir("matf");
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 2.0);
  FeatureSequence f;
  f.utterance_id = "utt_x";
  f.speaker_id = "spk_9";
  f.frame_shift_ms = 10;
  f.frames.resize(17, 5);
  for (int t = 0; t < 17; ++t)
    for (int d = 0; d < 5; ++d) f.frames(t, d) = static_cast<float>(gauss(rng));

  const std::string path = (dir / "utt_x.matf").string();
  WriteMatf(f, path);
  FeatureSequence g = ReadMatf(path);
  CHECK(g.utterance_id == "utt_x");
  CHECK(g.speaker_id == "spk_9");
  CHECK(g.frame_shift_ms == 10);
  CHECK(g.frames == f.frames);  // values were exactly representable in f32
}

TEST_CASE("matf header layout is pinned byte for byte") {
  fs::path dir = TempDir("matf_layout");
  FeatureSequence f;
  f.utterance_id = "ab";
  f.speaker_id = "c";
  f.frame_shift_ms = 10;
  f.frames = Matrix::Zero(1, 2);
  const std::string path = (dir / "p.matf").string();
  WriteMatf(f, path);
  const std::string bytes = ReadTextFile(path);
  REQUIRE(bytes.size() == 4 + 4 + (4 + 2) + (4 + 1) + 4 + 4 + 4 + 2 * 4);
  CHECK(bytes.substr(0, 4) == "MATF");
  CHECK(bytes[4] == 1);  // version, little-endian
  CHECK(bytes[8] == 2);  // utterance id length
  CHECK(bytes.substr(12, 2) == "ab");
  CHECK(bytes[14] == 1);  // speaker id length
  CHECK(bytes.substr(18, 1) == "c");
}

TEST_CASE("matf rejects truncation and wrong magic") {
  fs::path dir = TempDir("matf_bad");
  FeatureSequence f;
  f.utterance_id = "u";
  f.frames = Matrix::Ones(3, 2);
  const std::string path = (dir / "u.matf").string();
  WriteMatf(f, path);
  std::string bytes = ReadTextFile(path);

  WriteTextFile((dir / "short.matf").string(), bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(ReadMatf((dir / "short.matf").string()), std::runtime_error);

  bytes[0] = 'X';
  WriteTextFile((dir / "magic.matf").string(), bytes);
  CHECK_THROWS_AS(ReadMatf((dir / "magic.matf").string()), std::runtime_error);
}

TEST_CASE("feature dir loads in sorted utterance order") {
  fs::path dir = TempDir("featdir");
  for (const char* id : {"b_utt", "a_utt", "c_utt"}) {
    FeatureSequence f;
    f.utterance_id = id;
    f.frames = Matrix::Ones(2, 3);
    WriteMatf(f, (dir / (std::string(id) + ".matf")).string());
  }
  Corpus corpus = LoadFeatureDir(dir.string());
  REQUIRE(corpus.Size() == 3);
  CHECK(corpus.utterances[0].utterance_id == "a_utt");
  CHECK(corpus.utterances[2].utterance_id == "c_utt");
}

TEST_CASE("annotation csv round trip and invariants") {
  fs::path dir = TempDir("ann");
  Annotation ann;
  UttAnnotation u;
  u.utterance_id = "u0";
  u.speaker_id = "spk1";
  u.phones = {{0, 5, "p0"}, {5, 9, "p1"}, {9, 14, "p0"}};
  u.words = {{0, 9, "w0"}, {9, 14, "w1"}};
  ann.push_back(u);
  const std::string path = (dir / "annotations.csv").string();
  WriteAnnotationCsv(ann, path);
  Annotation back = ReadAnnotationCsv(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].speaker_id == "spk1");
  CHECK(back[0].phones.size() == 3);
  CHECK(back[0].words.size() == 2);
  CHECK(back[0].words[1].symbol == "w1");

  SUBCASE("word not aligned to phone boundaries is rejected") {
    ann[0].words[0].end = 7;
    ann[0].words[1].start = 7;
    CHECK_THROWS_AS(CheckAnnotation(ann), std::runtime_error);
  }
  SUBCASE("non-contiguous phone tier is rejected") {
    ann[0].phones[1].start = 6;
    CHECK_THROWS_AS(CheckAnnotation(ann), std::runtime_error);
  }
}
