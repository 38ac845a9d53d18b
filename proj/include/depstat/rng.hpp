#pragma once

#include <cstdint>
#include <numeric>
#include <string_view>
#include <vector>

#include "depstat/normal.hpp"

namespace depstat {

/// Stable 64-bit hash of (seed, label). Streams for distinct labels are
/// independent for all practical purposes; the mapping never changes, so
/// results are reproducible across runs, platforms and thread schedules.
std::uint64_t stream_key(std::uint64_t seed, std::string_view label);

/// Deterministic random stream addressed by (seed, label).
///
/// xoshiro256++ with SplitMix64 state expansion. All variate transforms are
/// implemented here (not via <random> distributions) so that the byte-exact
/// output contract holds on every standard library.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::string_view label);
    explicit RngStream(std::uint64_t key);

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01();

    /// Uniform on (0, 1), never exactly 0 or 1.
    double uniform01_open();

    /// Uniform integer in [0, bound), unbiased (rejection sampling).
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Standard normal via the inverse-CDF transform.
    double normal() { return inverse_normal_cdf(uniform01_open()); }

    /// Standard exponential (rate 1).
    double exponential();

    /// Uniform random permutation of {0, ..., n-1} (Fisher-Yates).
    std::vector<int> permutation(int n);

  private:
    std::uint64_t s_[4];
};

}  // namespace depstat
