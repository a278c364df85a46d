#include "cvqkd/rng.hpp"

#include <cmath>
#include <thread>
#include <vector>

namespace cvqkd {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    (void)splitmix64(s);
    s ^= stream * 0xD2B74407B1CE6E93ULL + 0x8BB84B93962EACC9ULL;
    std::uint64_t out = splitmix64(s);
    out ^= splitmix64(s);
    return out;
}

double Stream::uniform_oc() {
    // 53-bit mantissa, result in (0, 1]
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
}

double Stream::uniform_co() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform_oc();
    double u2 = uniform_co();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

double Stream::laplace_sd(double sd) {
    // scale b = sd / sqrt(2); inverse CDF of u in (-1/2, 1/2]
    double b = sd / std::sqrt(2.0);
    double u = uniform_oc() - 0.5;
    return u >= 0 ? -b * std::log(1.0 - 2.0 * u) : b * std::log(1.0 + 2.0 * u);
}

double Stream::uniform_sd(double sd) {
    double half = sd * std::sqrt(3.0);
    return uniform(-half, half);
}

void parallel_for(std::int64_t n, int workers,
                  const std::function<void(std::int64_t)>& body) {
    if (n <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    int w = workers > 0 ? workers : static_cast<int>(hw ? hw : 1);
    if (w > n) w = static_cast<int>(n);
    if (w <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) {
        std::int64_t lo = n * t / w, hi = n * (t + 1) / w;
        pool.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace cvqkd
