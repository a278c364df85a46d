#include "cvqkd/reconciliation.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <mutex>

#include "cvqkd/errors.hpp"
#include "cvqkd/octonion.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd {

namespace {

const std::array<std::uint32_t, 256>& crc_table() {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    return table;
}

struct GaussHermite {
    std::vector<double> nodes;    // physicists' nodes (weight e^{-x^2})
    std::vector<double> weights;
};

const GaussHermite& gauss_hermite_128() {
    static const GaussHermite gh = [] {
        constexpr int n = 128;
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
        for (int k = 1; k < n; ++k) {
            const double b = std::sqrt(k / 2.0);
            jac(k, k - 1) = b;
            jac(k - 1, k) = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
        GaussHermite out;
        out.nodes.resize(n);
        out.weights.resize(n);
        const double mu0 = std::sqrt(M_PI);  // integral of e^{-x^2}
        for (int i = 0; i < n; ++i) {
            out.nodes[i] = solver.eigenvalues()[i];
            const double v0 = solver.eigenvectors()(0, i);
            out.weights[i] = mu0 * v0 * v0;
        }
        return out;
    }();
    return gh;
}

// log2(1 + e^a), stable for large |a|
double log2_1p_exp(double a) {
    if (a > 36.0) return a / M_LN2 + std::log1p(std::exp(-a)) / M_LN2;
    return std::log1p(std::exp(a)) / M_LN2;
}

}  // namespace

double biawgn_capacity(double s) {
    if (s < 0.0) throw numeric_error("biawgn_capacity: s must be >= 0");
    if (s == 0.0) return 0.0;
    const auto& gh = gauss_hermite_128();
    const double sqrt_s = std::sqrt(s);
    double acc = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        // w = sqrt(2) * x maps the e^{-x^2} weight to a standard normal
        const double w = std::sqrt(2.0) * gh.nodes[i];
        acc += gh.weights[i] * log2_1p_exp(-2.0 * s - 2.0 * sqrt_s * w);
    }
    return 1.0 - acc / std::sqrt(M_PI);
}

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    const auto& table = crc_table();
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::uint8_t b : bytes) c = table[(c ^ b) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::uint32_t crc32_bits(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> packed((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return crc32(packed);
}

std::vector<std::uint8_t> privacy_amplification(std::span<const std::uint8_t> bits,
                                                std::uint64_t seed, std::size_t out_len) {
    const std::size_t in_len = bits.size();
    if (out_len > in_len) throw usage_error("privacy_amplification: out_len > input length");
    if (out_len == 0) return {};

    // Toeplitz matrix M[i][j] = d[i - j + in - 1]; out_i = parity of the dot of
    // d[i .. i+in-1] with the reversed input.
    const std::size_t diag_bits = in_len + out_len - 1;
    std::vector<std::uint64_t> d((diag_bits + 63) / 64 + 1, 0);
    std::uint64_t st = seed;
    for (auto& w : d) w = splitmix64(st);

    std::vector<std::uint64_t> xr(in_len / 64 + 1, 0);
    for (std::size_t j = 0; j < in_len; ++j)
        if (bits[j]) {
            const std::size_t k = in_len - 1 - j;
            xr[k / 64] |= 1ULL << (k % 64);
        }

    std::vector<std::uint8_t> out(out_len);
    const std::size_t n_words = in_len / 64 + 1;
    for (std::size_t i = 0; i < out_len; ++i) {
        const std::size_t wi = i / 64, sh = i % 64;
        int parity = 0;
        for (std::size_t w = 0; w < n_words; ++w) {
            std::uint64_t window = d[wi + w] >> sh;
            if (sh) window |= d[wi + w + 1] << (64 - sh);
            parity ^= __builtin_popcountll(window & xr[w]) & 1;
        }
        out[i] = static_cast<std::uint8_t>(parity);
    }
    return out;
}

ReconcileResult reconcile(std::span<const MeasurementRecord> bob,
                          std::span<const ModulationPoint> alice, const CodeSpec& code,
                          double t, double sigma2, std::uint64_t master_seed, int workers) {
    if (bob.size() != alice.size())
        throw usage_error("reconcile: mismatched block counts");
    if (code.ldpc == nullptr) throw usage_error("reconcile: no LDPC code");
    if (code.repetition_m < 1) throw usage_error("reconcile: repetition_m must be >= 1");
    if (code.frame_channel_bits() % 8 != 0)
        throw usage_error("reconcile: frame size must be a whole number of blocks");
    if (!(t > 0.0) || !(sigma2 > 0.0))
        throw numeric_error("reconcile: need positive (t, sigma2) from estimation");

    const LdpcCode& H = *code.ldpc;
    const int m = code.repetition_m;
    const int L = H.cols;
    const int bpf = code.blocks_per_frame();
    const std::int64_t n_blocks = static_cast<std::int64_t>(bob.size());
    const std::int64_t n_frames = n_blocks / bpf;

    ReconcileResult res;
    res.stats.frames = n_frames;
    res.stats.blocks_used = n_frames * bpf;
    res.stats.blocks_discarded = n_blocks - res.stats.blocks_used;
    res.stats.leaked_bits_per_frame =
        static_cast<std::int64_t>(m - 1) * L + H.rows + code.checksum_bits;
    res.frame_success.assign(static_cast<std::size_t>(n_frames), 0);

    // operating SNR: the sphere constraint makes the per-coordinate second
    // moment of Alice's data exactly V_A
    double va = 0.0;
    if (!alice.empty()) {
        double q2 = 0.0;
        for (double q : alice[0].q) q2 += q * q;
        va = q2 / 8.0;
    }
    const double snr = t * t * va / sigma2;
    res.stats.snr = snr;
    res.stats.capacity = biawgn_capacity(snr);

    std::vector<std::vector<std::uint8_t>> alice_frames(static_cast<std::size_t>(n_frames)),
        bob_frames(static_cast<std::size_t>(n_frames));

    parallel_for(n_frames, workers, [&](std::int64_t f) {
        std::vector<std::uint8_t> bob_bits(static_cast<std::size_t>(m) * L);
        std::vector<double> llr(static_cast<std::size_t>(m) * L);
        for (int blk = 0; blk < bpf; ++blk) {
            const std::size_t idx = static_cast<std::size_t>(f * bpf + blk);
            const MeasurementRecord& rec = bob[idx];
            Stream bits_rng = block_stream(master_seed, rec.block, StreamPurpose::bits);
            const auto byte = static_cast<std::uint8_t>(bits_rng.bits() & 0xFF);
            const double ny = norm(rec.y);
            const Vec8 u = map_bits_to_hypercube(byte, ny);
            const SideInformation si = rotation_from(rec.y, u);
            const Vec8 v = apply_rotation(si, alice[idx].q);
            const double amp = ny / (2.0 * std::sqrt(2.0));
            for (int i = 0; i < 8; ++i) {
                const std::size_t j = static_cast<std::size_t>(blk) * 8 + i;
                bob_bits[j] = static_cast<std::uint8_t>((byte >> i) & 1);
                llr[j] = 2.0 * t * amp * v[i] / sigma2;
            }
        }
        // fold repetition groups: representative = first bit of each group,
        // published diffs re-sign the remaining LLRs
        std::vector<std::uint8_t> reps(static_cast<std::size_t>(L));
        std::vector<double> group_llr(static_cast<std::size_t>(L), 0.0);
        for (int g = 0; g < L; ++g) {
            const std::size_t base = static_cast<std::size_t>(g) * m;
            reps[static_cast<std::size_t>(g)] = bob_bits[base];
            for (int r = 0; r < m; ++r) {
                const std::uint8_t diff = bob_bits[base] ^ bob_bits[base + static_cast<std::size_t>(r)];
                group_llr[static_cast<std::size_t>(g)] +=
                    (diff ? -1.0 : 1.0) * llr[base + static_cast<std::size_t>(r)];
            }
        }
        const auto synd = syndrome(H, reps);
        const std::uint32_t crc_bob = crc32_bits(reps);
        BpResult bp = decode_syndrome(H, group_llr, synd, code.bp_max_iters);
        if (bp.syndrome_ok && crc32_bits(bp.bits) == crc_bob) {
            res.frame_success[static_cast<std::size_t>(f)] = 1;
            alice_frames[static_cast<std::size_t>(f)] = std::move(bp.bits);
            bob_frames[static_cast<std::size_t>(f)] = std::move(reps);
        }
    });

    for (std::int64_t f = 0; f < n_frames; ++f) {
        if (!res.frame_success[static_cast<std::size_t>(f)]) continue;
        ++res.stats.successes;
        auto& af = alice_frames[static_cast<std::size_t>(f)];
        auto& bf = bob_frames[static_cast<std::size_t>(f)];
        res.alice_bits.insert(res.alice_bits.end(), af.begin(), af.end());
        res.bob_bits.insert(res.bob_bits.end(), bf.begin(), bf.end());
    }
    res.stats.frame_error_rate =
        n_frames > 0 ? 1.0 - static_cast<double>(res.stats.successes) / n_frames : 0.0;
    if (res.stats.capacity > 0.0 && n_frames > 0) {
        const double r_net = H.rate() / m - static_cast<double>(code.checksum_bits) / (static_cast<double>(m) * L);
        res.stats.measured_beta =
            (1.0 - res.stats.frame_error_rate) * r_net / res.stats.capacity;
        res.stats.beta_code = H.rate() / biawgn_capacity(m * snr);
    }
    return res;
}

}  // namespace cvqkd
