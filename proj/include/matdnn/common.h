// matdnn/common.h

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

#ifndef MATDNN_COMMON_H_
#define MATDNN_COMMON_H_

#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace matdnn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Throws std::runtime_error with a formatted diagnostic.
#define MATDNN_ERR(msg)                                        \
  do {                                                         \
    std::ostringstream matdnn_err_os_;                         \
    matdnn_err_os_ << msg;                                     \
    throw std::runtime_error(matdnn_err_os_.str());            \
  } while (0)

#define MATDNN_CHECK(cond, msg)                                \
  do {                                                         \
    if (!(cond)) MATDNN_ERR(msg);                              \
  } while (0)

// splitmix64; used to derive per-task seeds from a global seed so results do
// not depend on scheduling order.
inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t DeriveSeed(uint64_t seed, uint64_t tag) {
  return SplitMix64(seed ^ SplitMix64(tag));
}

inline uint64_t DeriveSeed(uint64_t seed, uint64_t tag1, uint64_t tag2) {
  return DeriveSeed(DeriveSeed(seed, tag1), tag2);
}

// FNV-1a over raw bytes; fingerprints corpora and configs.
inline uint64_t Fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t Fnv1a(const std::string& s, uint64_t h = 0xcbf29ce484222325ULL) {
  return Fnv1a(s.data(), s.size(), h);
}

// Runs fn(i) for i in [0, n). Each item writes only its own outputs, so the
// result is identical for any thread count. num_threads <= 1 runs serially.
inline void ParallelFor(int n, int num_threads, const std::function<void(int)>& fn) {
  if (num_threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  if (num_threads > n) num_threads = n;
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errs(num_threads);
  for (int w = 0; w < num_threads; ++w) {
    workers.emplace_back([&, w]() {
      try {
        for (int i = w; i < n; i += num_threads) fn(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace matdnn

#endif  // MATDNN_COMMON_H_
