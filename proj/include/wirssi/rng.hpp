#pragma once

#include <cstdint>

namespace wirssi {

/// Deterministic, platform-independent random stream (splitmix64 core).
/// Streams are split by mixing a stream id into the seed, so per-path and
/// per-antenna draws stay reproducible under any evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Child stream derived from this seed and a stream id.
    Rng split(std::uint64_t stream_id) const;

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();

    /// Standard normal via Box-Muller (two uniforms per pair, cached).
    double normal();

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace wirssi
