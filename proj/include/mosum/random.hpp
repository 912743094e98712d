#pragma once

#include <cstdint>
#include <limits>

namespace mosum {

/// Counter-based generator: output i of stream (seed, stream) is
/// splitmix64(key + (i+1) * golden), so any stream can be positioned in
/// O(1) and replications are independent of scheduling order.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();
    void discard(std::uint64_t count) { counter_ += count; has_spare_ = false; }
    std::uint64_t position() const noexcept { return counter_; }

    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t z);

/// Stream id from a list of indices (scenario, level, replication, ...).
std::uint64_t stream_id(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

} // namespace mosum
