#include "cvqkd/octonion.hpp"

#include <cmath>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {
struct SignedIndex {
    int sign;
    int idx;
};

// e_i o e_j = sign * e_idx (table in the header comment)
constexpr SignedIndex kTable[8][8] = {
    {{+1, 0}, {+1, 1}, {+1, 2}, {+1, 3}, {+1, 4}, {+1, 5}, {+1, 6}, {+1, 7}},
    {{+1, 1}, {-1, 0}, {+1, 3}, {-1, 2}, {+1, 5}, {-1, 4}, {-1, 7}, {+1, 6}},
    {{+1, 2}, {-1, 3}, {-1, 0}, {+1, 1}, {+1, 6}, {+1, 7}, {-1, 4}, {-1, 5}},
    {{+1, 3}, {+1, 2}, {-1, 1}, {-1, 0}, {+1, 7}, {-1, 6}, {+1, 5}, {-1, 4}},
    {{+1, 4}, {-1, 5}, {-1, 6}, {-1, 7}, {-1, 0}, {+1, 1}, {+1, 2}, {+1, 3}},
    {{+1, 5}, {+1, 4}, {-1, 7}, {+1, 6}, {-1, 1}, {-1, 0}, {-1, 3}, {+1, 2}},
    {{+1, 6}, {+1, 7}, {+1, 4}, {-1, 5}, {-1, 2}, {+1, 3}, {-1, 0}, {-1, 1}},
    {{+1, 7}, {-1, 6}, {+1, 5}, {+1, 4}, {-1, 3}, {-1, 2}, {+1, 1}, {-1, 0}},
};
}  // namespace

Octonion octonion_multiply(const Octonion& a, const Octonion& b) {
    Octonion out;
    for (int i = 0; i < 8; ++i) {
        const double ai = a.c[i];
        if (ai == 0.0) continue;
        for (int j = 0; j < 8; ++j) {
            const auto [sign, idx] = kTable[i][j];
            out.c[idx] += sign * ai * b.c[j];
        }
    }
    return out;
}

double norm(const Vec8& v) {
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    return std::sqrt(n2);
}

SideInformation rotation_from(const Vec8& y, const Vec8& u) {
    const double ny = norm(y), nu = norm(u);
    if (!(ny > 0.0) || !(nu > 0.0))
        throw numeric_error("rotation_from: zero-norm input");
    Octonion yhat, uhat;
    for (int i = 0; i < 8; ++i) {
        yhat.c[i] = y[i] / ny;
        uhat.c[i] = u[i] / nu;
    }
    SideInformation si;
    si.norm_y = ny;
    for (int i = 0; i < 8; ++i) {
        Octonion ei;
        ei.c[i] = 1.0;
        const Vec8 frame = octonion_multiply(ei, yhat).c;
        double dot = 0.0;
        for (int j = 0; j < 8; ++j) dot += uhat.c[j] * frame[j];
        si.alpha[i] = dot;
    }
    return si;
}

Vec8 apply_rotation(const SideInformation& si, const Vec8& x) {
    Octonion w, ox;
    w.c = si.alpha;
    ox.c = x;
    return octonion_multiply(w, ox).c;
}

Vec8 map_bits_to_hypercube(std::uint8_t bits, double norm_y) {
    if (!(norm_y > 0.0)) throw numeric_error("map_bits_to_hypercube: norm_y must be > 0");
    const double mag = norm_y / (2.0 * std::sqrt(2.0));
    Vec8 u;
    for (int i = 0; i < 8; ++i) u[i] = ((bits >> i) & 1) ? -mag : mag;
    return u;
}

}  // namespace cvqkd
