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

#include "gradissect/core/rng.hpp"

#include "gradissect/core/error.hpp"

namespace gradissect {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream_id) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream_id),
                       static_cast<std::uint32_t>(stream_id >> 32)};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  auto seq = make_seed_seq(seed, stream_id);
  engine_.seed(seq);
}

double RngStream::uniform() {
  // 53 random mantissa bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

RngStream RngStream::fork(std::uint64_t salt) const {
  return RngStream(seed_, mix64(stream_id_ ^ mix64(salt + 0x9e3779b97f4a7c15ULL)));
}

RealVector gauss_sample(RngStream& rng, const RealVector& mean, const RealVector& stddev) {
  check_same_dim(mean, stddev, "gauss_sample");
  RealVector out(mean.dim());
  for (std::size_t i = 0; i < mean.dim(); ++i) {
    if (!(stddev[i] >= 0.0)) throw ContractError("gauss_sample: negative stddev");
    // Draw even when stddev is zero so the stream position does not depend on
    // the noise level.
    const double z = rng.normal();
    out[i] = stddev[i] == 0.0 ? mean[i] : mean[i] + stddev[i] * z;
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace gradissect
