#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/ldpc.hpp"
#include "cvqkd/modulation.hpp"

namespace cvqkd {

// Repetition-m + LDPC concatenation used for coset decoding at low SNR.
struct CodeSpec {
    const LdpcCode* ldpc = nullptr;
    int repetition_m = 1;
    int bp_max_iters = 200;
    int checksum_bits = 32;  // CRC-32 over the frame's representative bits

    // net rate: LDPC rate divided by the repetition factor
    double rate() const { return ldpc->rate() / repetition_m; }
    int frame_channel_bits() const { return ldpc->cols * repetition_m; }
    int blocks_per_frame() const { return frame_channel_bits() / 8; }
};

struct ReconcileStats {
    std::int64_t frames = 0;
    std::int64_t successes = 0;
    std::int64_t blocks_used = 0;
    std::int64_t blocks_discarded = 0;  // trailing blocks not filling a frame
    double frame_error_rate = 0.0;
    double snr = 0.0;            // operating SNR of the coordinate channel
    double capacity = 0.0;       // C(snr), bits per coordinate
    double measured_beta = 0.0;  // (1-FER)*(R/m - crc/(m*L)) / C(s), per coordinate
    double beta_code = 0.0;      // R_ldpc / C(m*s), LDPC efficiency on the group channel
    std::int64_t leaked_bits_per_frame = 0;  // (m-1)*L + syndrome rows + checksum
};

struct ReconcileResult {
    std::vector<std::uint8_t> alice_bits;  // concatenated success-frame representatives
    std::vector<std::uint8_t> bob_bits;
    std::vector<std::uint8_t> frame_success;
    ReconcileStats stats;
};

// Reverse reconciliation. Bob (records) draws random hypercube bits per block,
// publishes rotations + ||y||, per-group XOR diffs, the LDPC syndrome of the
// group representatives and a CRC-32; Alice (points) folds her per-coordinate
// LLRs (2*t*(||y||/(2*sqrt2))*v_i / sigma2, sign-flipped by the diffs, summed
// per group) and runs syndrome-constrained BP. (t, sigma2) come from
// estimation. Frames whose CRC fails are discarded and counted in the FER.
ReconcileResult reconcile(std::span<const MeasurementRecord> bob,
                          std::span<const ModulationPoint> alice, const CodeSpec& code,
                          double t, double sigma2, std::uint64_t master_seed,
                          int workers = 1);

// BI-AWGN channel capacity C(s) = 1 - E_w log2(1 + exp(-2s - 2 sqrt(s) w)),
// w standard normal, by 128-node Gauss-Hermite quadrature.
double biawgn_capacity(double s);

// CRC-32 (IEEE 802.3, reflected polynomial 0xEDB88320).
std::uint32_t crc32(std::span<const std::uint8_t> bytes);
// CRC over a 0/1 bit vector (packed LSB-first, zero-padded).
std::uint32_t crc32_bits(std::span<const std::uint8_t> bits);

// Toeplitz universal hashing over GF(2), deterministic in seed.
std::vector<std::uint8_t> privacy_amplification(std::span<const std::uint8_t> bits,
                                                std::uint64_t seed, std::size_t out_len);

}  // namespace cvqkd
