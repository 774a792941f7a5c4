// matdnn/io.cc

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

#include "matdnn/io.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace matdnn {

namespace fs = std::filesystem;

void PutU32(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t GetU32(std::istream& is, const std::string& what) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  MATDNN_CHECK(is.gcount() == 4, "truncated file while reading " << what);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void PutF32(std::ostream& os, float v) {
  static_assert(sizeof(float) == 4);
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  PutU32(os, bits);
}

float GetF32(std::istream& is, const std::string& what) {
  uint32_t bits = GetU32(is, what);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

void PutString(std::ostream& os, const std::string& s) {
  PutU32(os, static_cast<uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string GetString(std::istream& is, const std::string& what) {
  uint32_t len = GetU32(is, what);
  MATDNN_CHECK(len < (1u << 20), "implausible string length in " << what);
  std::string s(len, '\0');
  is.read(s.data(), len);
  MATDNN_CHECK(static_cast<uint32_t>(is.gcount()) == len,
               "truncated file while reading " << what);
  return s;
}

namespace {

void ExpectMagic(std::istream& is, const char* magic, const std::string& path) {
  char got[4];
  is.read(got, 4);
  MATDNN_CHECK(is.gcount() == 4 && std::memcmp(got, magic, 4) == 0,
               "'" << path << "' is not a " << magic << " file");
}

uint16_t GetU16le(std::istream& is) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0]) | (static_cast<uint16_t>(b[1]) << 8);
}

uint32_t GetU32le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

Waveform ReadWav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  MATDNN_CHECK(is.is_open(), "cannot open '" << path << "'");
  char tag[4];
  is.read(tag, 4);
  MATDNN_CHECK(is.gcount() == 4 && std::memcmp(tag, "RIFF", 4) == 0,
               "'" << path << "': missing RIFF header");
  GetU32le(is);  // riff size
  is.read(tag, 4);
  MATDNN_CHECK(std::memcmp(tag, "WAVE", 4) == 0, "'" << path << "': not a WAVE file");

  Waveform w;
  w.utterance_id = fs::path(path).stem().string();
  bool have_fmt = false, have_data = false;
  uint16_t channels = 0, bits = 0;
  while (is.read(tag, 4)) {
    uint32_t chunk_size = GetU32le(is);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      uint16_t format = GetU16le(is);
      channels = GetU16le(is);
      w.sample_rate = static_cast<int>(GetU32le(is));
      GetU32le(is);  // byte rate
      GetU16le(is);  // block align
      bits = GetU16le(is);
      MATDNN_CHECK(format == 1, "'" << path << "': only PCM WAV is supported");
      MATDNN_CHECK(channels == 1, "'" << path << "': only mono WAV is supported");
      MATDNN_CHECK(bits == 16, "'" << path << "': only 16-bit WAV is supported");
      if (chunk_size > 16) is.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      MATDNN_CHECK(have_fmt, "'" << path << "': data chunk before fmt chunk");
      const uint32_t num_samples = chunk_size / 2;
      w.samples.resize(num_samples);
      for (uint32_t i = 0; i < num_samples; ++i) {
        int16_t s = static_cast<int16_t>(GetU16le(is));
        w.samples[i] = s / 32768.0;
      }
      have_data = true;
      break;
    } else {
      is.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  MATDNN_CHECK(have_data, "'" << path << "': no data chunk");
  MATDNN_CHECK(!w.samples.empty(), "'" << path << "': empty audio");
  return w;
}

void WriteMatf(const FeatureSequence& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  MATDNN_CHECK(os.is_open(), "cannot write '" << path << "'");
  os.write("MATF", 4);
  PutU32(os, 1);
  PutString(os, f.utterance_id);
  PutString(os, f.speaker_id);
  PutU32(os, static_cast<uint32_t>(f.NumFrames()));
  PutU32(os, static_cast<uint32_t>(f.Dim()));
  PutU32(os, static_cast<uint32_t>(f.frame_shift_ms));
  for (int t = 0; t < f.NumFrames(); ++t)
    for (int d = 0; d < f.Dim(); ++d)
      PutF32(os, static_cast<float>(f.frames(t, d)));
  MATDNN_CHECK(os.good(), "write failed for '" << path << "'");
}

FeatureSequence ReadMatf(const std::string& path, FeatureKind kind) {
  std::ifstream is(path, std::ios::binary);
  MATDNN_CHECK(is.is_open(), "cannot open '" << path << "'");
  ExpectMagic(is, "MATF", path);
  uint32_t version = GetU32(is, path);
  MATDNN_CHECK(version == 1, "'" << path << "': unsupported MATF version " << version);
  FeatureSequence f;
  f.utterance_id = GetString(is, path);
  f.speaker_id = GetString(is, path);
  uint32_t T = GetU32(is, path);
  uint32_t D = GetU32(is, path);
  f.frame_shift_ms = static_cast<int>(GetU32(is, path));
  MATDNN_CHECK(T >= 1 && D >= 1, "'" << path << "': empty feature matrix");
  f.frames.resize(T, D);
  for (uint32_t t = 0; t < T; ++t) {
    for (uint32_t d = 0; d < D; ++d) {
      float v = GetF32(is, path);
      MATDNN_CHECK(std::isfinite(v), "'" << path << "': non-finite value at frame "
                                         << t << " dim " << d);
      f.frames(t, d) = v;
    }
  }
  f.kind = kind;
  return f;
}

Corpus LoadFeatureDir(const std::string& dir, FeatureKind kind) {
  Corpus corpus;
  for (const auto& path : ListFiles(dir, ".matf"))
    corpus.utterances.push_back(ReadMatf(path, kind));
  MATDNN_CHECK(!corpus.utterances.empty(), "no .matf files under '" << dir << "'");
  for (const auto& u : corpus.utterances)
    MATDNN_CHECK(u.Dim() == corpus.Dim(),
                 "feature dim mismatch in '" << dir << "': utterance '"
                     << u.utterance_id << "' has D=" << u.Dim() << ", expected "
                     << corpus.Dim());
  return corpus;
}

void SaveFeatureDir(const Corpus& corpus, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& u : corpus.utterances)
    WriteMatf(u, (fs::path(dir) / (u.utterance_id + ".matf")).string());
}

std::vector<std::string> ListFiles(const std::string& dir, const std::string& ext) {
  MATDNN_CHECK(fs::is_directory(dir), "'" << dir << "' is not a directory");
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext)
      out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream is(path);
  MATDNN_CHECK(is.is_open(), "cannot open '" << path << "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  MATDNN_CHECK(os.is_open(), "cannot write '" << path << "'");
  os << content;
  MATDNN_CHECK(os.good(), "write failed for '" << path << "'");
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  MATDNN_CHECK(is.is_open(), "cannot open '" << path << "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace matdnn
