// Copyright 2026 The gradissect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "gradissect/core/real_vector.hpp"

namespace gradissect {

/// Seeded random stream.
///
/// Backed by std::mt19937_64 (64-bit Mersenne Twister, MT19937-64 as
/// standardized in C++11). The engine is seeded through std::seed_seq with
/// the four 32-bit halves of (seed, stream_id), so each (seed, stream_id)
/// pair selects its own, reproducible sequence. Gaussian draws use
/// std::normal_distribution; bit-exact output is guaranteed per build.
///
/// Single owner: concurrent users must each hold their own stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal.
  double normal() { return normal_(engine_); }

  /// Derived stream: same seed, stream id mixed with `salt`.
  RngStream fork(std::uint64_t salt) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Element-wise independent Gaussian draw. stddev must be non-negative; a
/// zero stddev returns the mean exactly.
RealVector gauss_sample(RngStream& rng, const RealVector& mean, const RealVector& stddev);

/// FNV-1a over a byte string, used for stable stream ids and digests.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace gradissect
