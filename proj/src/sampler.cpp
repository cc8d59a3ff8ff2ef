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

#include "countnoise/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "countnoise/optimal.hpp"

namespace countnoise {

namespace {

// Fixed stream count: results are identical no matter how many cores run them.
constexpr int kAuditStreams = 16;

}  // namespace

SamplerState::SamplerState(const NoisePmf& pmf, uint64_t seed)
    : pmf_(pmf), last_positive_index_(-1), seed_(seed), rng_(seed) {
  const ValidationReport report = validate_properties(pmf);
  if (!report.passed) {
    throw std::invalid_argument("refusing to sample from an invalid pmf");
  }
  cumulative_.reserve(pmf_.mass.size());
  double acc = 0.0;
  for (size_t i = 0; i < pmf_.mass.size(); ++i) {
    acc += pmf_.mass[i];
    cumulative_.push_back(acc);
    if (pmf_.mass[i] > 0.0) last_positive_index_ = static_cast<int>(i);
  }
}

int SamplerState::sample_offset() {
  const double u = rng_.next_double();
  for (size_t i = 0; i < cumulative_.size(); ++i) {
    if (u < cumulative_[i]) {
      return pmf_.support_lo + static_cast<int>(i);
    }
  }
  // u landed in the sliver between the final partial sum and 1.
  return pmf_.support_lo + last_positive_index_;
}

int sample_output(int true_count, const NoisePmf& pmf, SamplerState& state) {
  if (pmf.true_count != true_count ||
      state.pmf().true_count != true_count) {
    throw std::invalid_argument("pmf, state and true count disagree");
  }
  return state.sample_output();
}

AuditReport empirical_audit_pmf(const NoisePmf& pmf, long long trials,
                                int window, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (window < 0) throw std::invalid_argument("window must be >= 0");

  const ValidationReport validation = validate_properties(pmf);
  if (!validation.passed) {
    throw std::invalid_argument("refusing to audit an invalid pmf");
  }

  const int support = pmf.support_size();
  std::vector<double> cumulative(static_cast<size_t>(support), 0.0);
  int last_positive = 0;
  double acc = 0.0;
  for (int i = 0; i < support; ++i) {
    acc += pmf.mass[static_cast<size_t>(i)];
    cumulative[static_cast<size_t>(i)] = acc;
    if (pmf.mass[static_cast<size_t>(i)] > 0.0) last_positive = i;
  }

  SplitMix64 root(seed);
  std::vector<SplitMix64> streams;
  streams.reserve(kAuditStreams);
  for (int s = 0; s < kAuditStreams; ++s) streams.push_back(root.split());

  auto run_stream = [&cumulative, support, last_positive](
                        SplitMix64 rng, long long n) -> std::vector<long long> {
    std::vector<long long> counts(static_cast<size_t>(support), 0);
    for (long long t = 0; t < n; ++t) {
      const double u = rng.next_double();
      int idx = last_positive;
      for (int i = 0; i < support; ++i) {
        if (u < cumulative[static_cast<size_t>(i)]) {
          idx = i;
          break;
        }
      }
      ++counts[static_cast<size_t>(idx)];
    }
    return counts;
  };

  std::vector<std::future<std::vector<long long>>> futures;
  for (int s = 0; s < kAuditStreams; ++s) {
    const long long share = trials / kAuditStreams +
                            (s < trials % kAuditStreams ? 1 : 0);
    futures.push_back(std::async(std::launch::async, run_stream, streams[static_cast<size_t>(s)], share));
  }

  AuditReport report;
  report.trials = trials;
  report.support_lo = pmf.support_lo;
  report.seed = seed;
  report.counts.assign(static_cast<size_t>(support), 0);
  for (auto& f : futures) {
    const std::vector<long long> part = f.get();
    for (int i = 0; i < support; ++i) {
      report.counts[static_cast<size_t>(i)] += part[static_cast<size_t>(i)];
    }
  }

  report.empirical_mass.assign(static_cast<size_t>(support), 0.0);
  double tv = 0.0;
  for (int i = 0; i < support; ++i) {
    const double freq = static_cast<double>(report.counts[static_cast<size_t>(i)]) /
                        static_cast<double>(trials);
    report.empirical_mass[static_cast<size_t>(i)] = freq;
    tv += std::abs(freq - pmf.mass[static_cast<size_t>(i)]);
    const int z = pmf.support_lo + i;
    if (z == 0) report.empirical_correct_rate = freq;
    if (std::abs(z) <= window) report.in_range_rate += freq;
  }
  report.tv_distance = 0.5 * tv;
  return report;
}

AuditReport empirical_audit(const MechanismConfig& config, int true_count,
                            long long trials, int window, uint64_t seed) {
  const OptimalSolution solution = optimal_alphas(config);
  const NoisePmf pmf = symmetric_noise_pmf(config.eta, config.half_width,
                                           solution.alphas, true_count);
  return empirical_audit_pmf(pmf, trials, window, seed);
}

}  // namespace countnoise
