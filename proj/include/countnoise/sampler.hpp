// Copyright 2026 The CountNoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COUNTNOISE_SAMPLER_H_
#define COUNTNOISE_SAMPLER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "countnoise/mechanism_config.hpp"
#include "countnoise/noise_pmf.hpp"

namespace countnoise {

// splitmix64: a Weyl-sequence counter pushed through a 64-bit finalizer
// (Steele, Lea & Flood's mixer). Tiny state, platform-independent output,
// and child streams can be split off deterministically, which is what the
// parallel audit relies on.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Independent child stream; advances this generator by one draw.
  SplitMix64 split() { return SplitMix64(next() ^ 0x6A09E667F3BCC909ULL); }

 private:
  uint64_t state_;
};

inline constexpr const char* kRngName = "splitmix64";

// Inverse-CDF sampler over one noise pmf. The support has at most 2D+1
// points, so a linear scan of the cumulative sums is both fast and exactly
// reproducible for a given seed.
class SamplerState {
 public:
  SamplerState(const NoisePmf& pmf, uint64_t seed);

  // One noise draw, as an offset z in [support_lo : D].
  int sample_offset();
  // One released value y = n + z.
  int sample_output() { return pmf_.true_count + sample_offset(); }

  const NoisePmf& pmf() const { return pmf_; }
  uint64_t seed() const { return seed_; }

 private:
  NoisePmf pmf_;
  std::vector<double> cumulative_;
  int last_positive_index_;
  uint64_t seed_;
  SplitMix64 rng_;
};

// Checked form: the pmf must belong to the given count and match the state.
int sample_output(int true_count, const NoisePmf& pmf, SamplerState& state);

// Empirical behaviour of the optimal mechanism over many draws, compared
// against the analytic pmf.
struct AuditReport {
  long long trials = 0;
  int support_lo = 0;
  std::vector<long long> counts;        // per offset, aligned with support_lo
  std::vector<double> empirical_mass;   // counts / trials
  double tv_distance = 0.0;             // against the analytic pmf
  double empirical_correct_rate = 0.0;  // frequency of offset 0
  double in_range_rate = 0.0;           // frequency of |offset| <= window
  std::string rng_name = kRngName;
  uint64_t seed = 0;
};

// Draws `trials` outputs of the optimal mechanism for the config at the given
// count (which must be >= D), tabulates them, and reports total-variation
// distance, correct-release frequency and the in-window rate. Work is split
// across a fixed number of child streams so the result does not depend on the
// machine's core count.
AuditReport empirical_audit(const MechanismConfig& config, int true_count,
                            long long trials, int window, uint64_t seed);

// Same audit against a caller-supplied pmf.
AuditReport empirical_audit_pmf(const NoisePmf& pmf, long long trials,
                                int window, uint64_t seed);

}  // namespace countnoise

#endif  // COUNTNOISE_SAMPLER_H_
