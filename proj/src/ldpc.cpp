#include "cvqkd/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>

#include "cvqkd/errors.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd {

std::int64_t LdpcCode::nnz() const {
    std::int64_t n = 0;
    for (const auto& r : row_cols) n += static_cast<std::int64_t>(r.size());
    return n;
}

namespace {

// Checks reachable from variable v within `depth` bipartite hops, with their
// distance (odd values only; a check at distance d closes a (d+1)-cycle if
// connected). Unvisited checks keep distance -1.
void bfs_check_distances(const LdpcCode& code, int v, int depth,
                         std::vector<int>& check_dist, std::vector<int>& var_dist,
                         std::vector<int>& touched_checks, std::vector<int>& touched_vars) {
    for (int c : touched_checks) check_dist[static_cast<std::size_t>(c)] = -1;
    for (int u : touched_vars) var_dist[static_cast<std::size_t>(u)] = -1;
    touched_checks.clear();
    touched_vars.clear();

    var_dist[static_cast<std::size_t>(v)] = 0;
    touched_vars.push_back(v);
    std::deque<std::pair<int, bool>> queue;  // (node, is_check)
    queue.emplace_back(v, false);
    while (!queue.empty()) {
        auto [node, is_check] = queue.front();
        queue.pop_front();
        if (is_check) {
            int d = check_dist[static_cast<std::size_t>(node)];
            if (d >= depth) continue;
            for (int u : code.row_cols[static_cast<std::size_t>(node)]) {
                if (var_dist[static_cast<std::size_t>(u)] < 0) {
                    var_dist[static_cast<std::size_t>(u)] = d + 1;
                    touched_vars.push_back(u);
                    queue.emplace_back(u, false);
                }
            }
        } else {
            int d = var_dist[static_cast<std::size_t>(node)];
            if (d >= depth) continue;
            for (int c : code.col_rows[static_cast<std::size_t>(node)]) {
                if (check_dist[static_cast<std::size_t>(c)] < 0) {
                    check_dist[static_cast<std::size_t>(c)] = d + 1;
                    touched_checks.push_back(c);
                    queue.emplace_back(c, true);
                }
            }
        }
    }
}

}  // namespace

LdpcCode peg_construct(int cols, int rows, int wc, std::uint64_t seed) {
    if (cols <= 0 || rows <= 0 || wc <= 0 || wc > rows)
        throw usage_error("peg_construct: bad dimensions");
    LdpcCode code;
    code.rows = rows;
    code.cols = cols;
    code.row_cols.resize(static_cast<std::size_t>(rows));
    code.col_rows.resize(static_cast<std::size_t>(cols));

    Stream rng(seed);
    std::vector<int> degree(static_cast<std::size_t>(rows), 0);
    std::vector<int> check_dist(static_cast<std::size_t>(rows), -1);
    std::vector<int> var_dist(static_cast<std::size_t>(cols), -1);
    std::vector<int> touched_checks, touched_vars, candidates;
    constexpr int kBfsDepth = 7;  // distance >= 7 keeps new cycles at length >= 8

    for (int v = 0; v < cols; ++v) {
        for (int e = 0; e < wc; ++e) {
            candidates.clear();
            if (e == 0) {
                int best = *std::min_element(degree.begin(), degree.end());
                for (int c = 0; c < rows; ++c)
                    if (degree[static_cast<std::size_t>(c)] == best) candidates.push_back(c);
            } else {
                bfs_check_distances(code, v, kBfsDepth, check_dist, var_dist,
                                    touched_checks, touched_vars);
                // prefer unreachable checks, else the most distant ones; among
                // those, the lowest degree
                int best_rank = -1;  // larger is better; unreachable maps to max
                int best_deg = rows * wc + 1;
                for (int c = 0; c < rows; ++c) {
                    const int dist = check_dist[static_cast<std::size_t>(c)];
                    if (dist == 1) continue;  // already adjacent
                    const int rank = dist < 0 ? (1 << 20) : dist;
                    const int deg = degree[static_cast<std::size_t>(c)];
                    if (rank > best_rank || (rank == best_rank && deg < best_deg)) {
                        best_rank = rank;
                        best_deg = deg;
                        candidates.clear();
                        candidates.push_back(c);
                    } else if (rank == best_rank && deg == best_deg) {
                        candidates.push_back(c);
                    }
                }
            }
            if (candidates.empty()) throw numeric_error("peg_construct: no candidate check");
            int pick = candidates[static_cast<std::size_t>(
                rng.bits() % candidates.size())];
            code.row_cols[static_cast<std::size_t>(pick)].push_back(v);
            code.col_rows[static_cast<std::size_t>(v)].push_back(pick);
            ++degree[static_cast<std::size_t>(pick)];
        }
    }
    for (auto& r : code.row_cols) std::sort(r.begin(), r.end());
    for (auto& c : code.col_rows) std::sort(c.begin(), c.end());
    return code;
}

const LdpcCode& shipped_code(const std::string& id) {
    static std::mutex mu;
    static std::map<std::string, LdpcCode> cache;
    struct Spec {
        int cols, rows, wc;
        std::uint64_t seed;
    };
    static const std::map<std::string, Spec> registry = {
        {"r12_2048", {2048, 1024, 3, 0x51CB1AD0201ULL}},
        {"r12_4096", {4096, 2048, 3, 0x51CB1AD0202ULL}},
        {"r12_16384", {16384, 8192, 3, 0x51CB1AD0203ULL}},
        {"r14_16384", {16384, 12288, 3, 0x51CB1AD0204ULL}},
        {"r110_16384", {16384, 14746, 3, 0x51CB1AD0205ULL}},
    };
    auto it = registry.find(id);
    if (it == registry.end()) throw usage_error("unknown code id: " + id);
    std::lock_guard<std::mutex> lock(mu);
    auto cached = cache.find(id);
    if (cached == cache.end()) {
        const Spec& s = it->second;
        cached = cache.emplace(id, peg_construct(s.cols, s.rows, s.wc, s.seed)).first;
    }
    return cached->second;
}

std::vector<std::string> shipped_code_ids() {
    return {"r12_2048", "r12_4096", "r12_16384", "r14_16384", "r110_16384"};
}

void save_code(const LdpcCode& code, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write code file: " + path.string());
    out << code.rows << ' ' << code.cols << ' ' << code.nnz() << '\n';
    for (int r = 0; r < code.rows; ++r)
        for (int c : code.row_cols[static_cast<std::size_t>(r)]) out << r << ' ' << c << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

LdpcCode load_code(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open code file: " + path.string());
    LdpcCode code;
    std::int64_t nnz = 0;
    if (!(in >> code.rows >> code.cols >> nnz) || code.rows <= 0 || code.cols <= 0 || nnz < 0)
        throw io_error("malformed code header: " + path.string());
    code.row_cols.resize(static_cast<std::size_t>(code.rows));
    code.col_rows.resize(static_cast<std::size_t>(code.cols));
    for (std::int64_t i = 0; i < nnz; ++i) {
        int r = 0, c = 0;
        if (!(in >> r >> c) || r < 0 || r >= code.rows || c < 0 || c >= code.cols)
            throw io_error("malformed code entry in " + path.string());
        code.row_cols[static_cast<std::size_t>(r)].push_back(c);
        code.col_rows[static_cast<std::size_t>(c)].push_back(r);
    }
    // canonical (sorted) adjacency, independent of the edge order on disk
    for (auto& r : code.row_cols) std::sort(r.begin(), r.end());
    for (auto& c : code.col_rows) std::sort(c.begin(), c.end());
    return code;
}

std::vector<std::uint8_t> syndrome(const LdpcCode& code, std::span<const std::uint8_t> bits) {
    if (static_cast<int>(bits.size()) != code.cols)
        throw usage_error("syndrome: bit string length != cols");
    std::vector<std::uint8_t> s(static_cast<std::size_t>(code.rows), 0);
    for (int r = 0; r < code.rows; ++r) {
        std::uint8_t acc = 0;
        for (int c : code.row_cols[static_cast<std::size_t>(r)])
            acc ^= bits[static_cast<std::size_t>(c)];
        s[static_cast<std::size_t>(r)] = acc;
    }
    return s;
}

BpResult decode_syndrome(const LdpcCode& code, std::span<const double> llr,
                         std::span<const std::uint8_t> target_syndrome, int max_iters) {
    if (static_cast<int>(llr.size()) != code.cols)
        throw usage_error("decode_syndrome: llr length != cols");
    if (static_cast<int>(target_syndrome.size()) != code.rows)
        throw usage_error("decode_syndrome: syndrome length != rows");

    // edge arrays in row-major order
    const std::size_t n_edges = static_cast<std::size_t>(code.nnz());
    std::vector<std::int32_t> edge_var(n_edges);
    std::vector<std::size_t> row_start(static_cast<std::size_t>(code.rows) + 1, 0);
    {
        std::size_t e = 0;
        for (int r = 0; r < code.rows; ++r) {
            row_start[static_cast<std::size_t>(r)] = e;
            for (int c : code.row_cols[static_cast<std::size_t>(r)])
                edge_var[e++] = c;
        }
        row_start[static_cast<std::size_t>(code.rows)] = e;
    }
    std::vector<std::vector<std::size_t>> var_edges(static_cast<std::size_t>(code.cols));
    for (std::size_t e = 0; e < n_edges; ++e)
        var_edges[static_cast<std::size_t>(edge_var[e])].push_back(e);

    std::vector<double> c2v(n_edges, 0.0), v2c(n_edges, 0.0);
    std::vector<double> posterior(static_cast<std::size_t>(code.cols));
    BpResult res;
    res.bits.assign(static_cast<std::size_t>(code.cols), 0);

    auto hard_decide_and_check = [&]() {
        for (int v = 0; v < code.cols; ++v) {
            double sum = llr[static_cast<std::size_t>(v)];
            for (std::size_t e : var_edges[static_cast<std::size_t>(v)]) sum += c2v[e];
            posterior[static_cast<std::size_t>(v)] = sum;
            res.bits[static_cast<std::size_t>(v)] = sum < 0 ? 1 : 0;
        }
        for (int r = 0; r < code.rows; ++r) {
            std::uint8_t acc = 0;
            for (std::size_t e = row_start[static_cast<std::size_t>(r)];
                 e < row_start[static_cast<std::size_t>(r) + 1]; ++e)
                acc ^= res.bits[static_cast<std::size_t>(edge_var[e])];
            if (acc != target_syndrome[static_cast<std::size_t>(r)]) return false;
        }
        return true;
    };

    constexpr double kTanhClip = 0.999999999999;
    std::vector<double> fwd, bwd;
    for (int iter = 1; iter <= max_iters; ++iter) {
        // variable -> check
        for (int v = 0; v < code.cols; ++v) {
            double total = llr[static_cast<std::size_t>(v)];
            for (std::size_t e : var_edges[static_cast<std::size_t>(v)]) total += c2v[e];
            for (std::size_t e : var_edges[static_cast<std::size_t>(v)])
                v2c[e] = total - c2v[e];
        }
        // check -> variable, extrinsic tanh products via forward/backward scans
        for (int r = 0; r < code.rows; ++r) {
            const std::size_t lo = row_start[static_cast<std::size_t>(r)];
            const std::size_t hi = row_start[static_cast<std::size_t>(r) + 1];
            const std::size_t deg = hi - lo;
            if (deg == 0) continue;
            fwd.assign(deg, 1.0);
            bwd.assign(deg, 1.0);
            for (std::size_t k = 1; k < deg; ++k)
                fwd[k] = fwd[k - 1] * std::tanh(0.5 * v2c[lo + k - 1]);
            for (std::size_t k = deg - 1; k-- > 0;)
                bwd[k] = bwd[k + 1] * std::tanh(0.5 * v2c[lo + k + 1]);
            const double sign = target_syndrome[static_cast<std::size_t>(r)] ? -1.0 : 1.0;
            for (std::size_t k = 0; k < deg; ++k) {
                double prod = std::clamp(fwd[k] * bwd[k], -kTanhClip, kTanhClip);
                c2v[lo + k] = sign * 2.0 * std::atanh(prod);
            }
        }
        res.iterations = iter;
        if (hard_decide_and_check()) {
            res.syndrome_ok = true;
            return res;
        }
    }
    res.syndrome_ok = false;
    return res;
}

}  // namespace cvqkd
