#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cvqkd {

// Sparse binary parity-check matrix with adjacency in both directions.
struct LdpcCode {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::int32_t>> row_cols;  // checks -> variables
    std::vector<std::vector<std::int32_t>> col_rows;  // variables -> checks

    std::int64_t nnz() const;
    double rate() const { return 1.0 - static_cast<double>(rows) / cols; }
};

// Deterministic PEG-style construction: every variable gets wc edges; each new
// edge goes to the check node farthest from the variable in the current Tanner
// graph (depth-limited BFS; unreachable preferred), tie-broken by lowest
// current check degree, then by a seeded draw. Guarantees no parallel edges
// and, in practice on these sizes, girth >= 6.
LdpcCode peg_construct(int cols, int rows, int wc, std::uint64_t seed);

// Shipped registry (built on first use, cached): r12_2048, r12_4096,
// r12_16384 (rate 1/2), r14_16384 (rate 1/4), r110_16384 (rate ~1/10).
const LdpcCode& shipped_code(const std::string& id);
std::vector<std::string> shipped_code_ids();

// Text format: header "rows cols nnz", then one "row col" pair per line.
void save_code(const LdpcCode& code, const std::filesystem::path& path);
LdpcCode load_code(const std::filesystem::path& path);

std::vector<std::uint8_t> syndrome(const LdpcCode& code, std::span<const std::uint8_t> bits);

struct BpResult {
    std::vector<std::uint8_t> bits;
    bool syndrome_ok = false;
    int iterations = 0;
};

// Syndrome-constrained belief propagation (flooding schedule, tanh rule),
// early exit on syndrome match. llr[i] > 0 favors bit 0.
BpResult decode_syndrome(const LdpcCode& code, std::span<const double> llr,
                         std::span<const std::uint8_t> target_syndrome, int max_iters = 200);

}  // namespace cvqkd
