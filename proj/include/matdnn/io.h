// matdnn/io.h

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

#ifndef MATDNN_IO_H_
#define MATDNN_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "matdnn/feature.h"

namespace matdnn {

// 16-bit mono PCM WAV.
Waveform ReadWav(const std::string& path);

// MATF feature file: magic "MATF"; u32 LE version (1), utterance_id length +
// bytes, speaker_id length + bytes, T, D, frame_shift_ms; then T*D f32 LE
// row-major. The feature kind is not part of the format; readers tag it.
void WriteMatf(const FeatureSequence& f, const std::string& path);
FeatureSequence ReadMatf(const std::string& path, FeatureKind kind = FeatureKind::kMfcc);

// Loads every *.matf under dir, sorted by filename.
Corpus LoadFeatureDir(const std::string& dir, FeatureKind kind = FeatureKind::kMfcc);
void SaveFeatureDir(const Corpus& corpus, const std::string& dir);

// Low-level little-endian helpers shared by the binary formats.
void PutU32(std::ostream& os, uint32_t v);
uint32_t GetU32(std::istream& is, const std::string& what);
void PutF32(std::ostream& os, float v);
float GetF32(std::istream& is, const std::string& what);
void PutString(std::ostream& os, const std::string& s);
std::string GetString(std::istream& is, const std::string& what);

std::vector<std::string> ListFiles(const std::string& dir, const std::string& ext);
std::vector<std::string> ReadLines(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& content);
std::string ReadTextFile(const std::string& path);
std::vector<std::string> SplitCsvLine(const std::string& line);

}  // namespace matdnn

#endif  // MATDNN_IO_H_
