#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace cvqkd {

// splitmix64 step; the generator behind all stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

// Derive an independent 64-bit seed for a (master, stream) pair. Streams are
// keyed by block index (and a small purpose tag) so results never depend on
// how blocks are split across workers.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// One random stream. Gaussian/uniform/laplace draws are built from the raw
// mt19937_64 output (Box-Muller / inverse CDF) rather than std::distributions,
// so the numeric stream is identical across standard library implementations.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}
    Stream(std::uint64_t master, std::uint64_t stream_id)
        : eng_(derive_seed(master, stream_id)) {}

    std::uint64_t bits() { return eng_(); }
    bool bit() { return (eng_() >> 63) != 0; }

    // uniform on (0,1] and [0,1)
    double uniform_oc();
    double uniform_co();
    // uniform on [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform_co(); }

    double normal();
    // zero-mean laplace with the given standard deviation
    double laplace_sd(double sd);
    // zero-mean uniform with the given standard deviation
    double uniform_sd(double sd);

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream-id layout: every 8-dim block owns a group of consecutive stream ids,
// one per purpose, so any stage can re-derive its stream from (master, block)
// alone and results are independent of worker scheduling.
enum class StreamPurpose : std::uint64_t {
    sample = 0,   // Alice's sphere point
    channel = 1,  // channel + detector noise
    bits = 2,     // Bob's random hypercube bits
    reserved = 3,
};
constexpr std::uint64_t kStreamsPerBlock = 4;

inline Stream block_stream(std::uint64_t master, std::int64_t block, StreamPurpose p) {
    return Stream(master, static_cast<std::uint64_t>(block) * kStreamsPerBlock +
                              static_cast<std::uint64_t>(p));
}

// Deterministic block-parallel loop: runs body(i) for i in [0, n) using up to
// `workers` threads (0 = hardware concurrency). body must only write to
// per-index state; iteration order inside a worker is ascending.
void parallel_for(std::int64_t n, int workers,
                  const std::function<void(std::int64_t)>& body);

}  // namespace cvqkd
