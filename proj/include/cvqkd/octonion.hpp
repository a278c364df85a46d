#pragma once

#include <array>
#include <cstdint>

namespace cvqkd {

using Vec8 = std::array<double, 8>;

// Octonion with components on the basis e0..e7; e0 is the two-sided identity.
// Multiplication follows the Cayley-Dickson doubling of the quaternions,
// (a,b)(c,d) = (ac - d*b, da + bc*), with e4 = (0,1). The full signed basis
// table is frozen below and cross-checked exhaustively in the tests:
//
//        e0   e1   e2   e3   e4   e5   e6   e7
//  e0 |  e0   e1   e2   e3   e4   e5   e6   e7
//  e1 |  e1  -e0   e3  -e2   e5  -e4  -e7   e6
//  e2 |  e2  -e3  -e0   e1   e6   e7  -e4  -e5
//  e3 |  e3   e2  -e1  -e0   e7  -e6   e5  -e4
//  e4 |  e4  -e5  -e6  -e7  -e0   e1   e2   e3
//  e5 |  e5   e4  -e7   e6  -e1  -e0  -e3   e2
//  e6 |  e6   e7   e4  -e5  -e2   e3  -e0  -e1
//  e7 |  e7  -e6   e5   e4  -e3  -e2   e1  -e0
struct Octonion {
    Vec8 c{};
};

Octonion octonion_multiply(const Octonion& a, const Octonion& b);

double norm(const Vec8& v);

// Rotation coefficients published by Bob: coordinates of u/||u|| in the
// orthonormal frame {e_i o (y/||y||)}, plus ||y||. The reconstructed map
// M = sum_i alpha_i L_{e_i} is orthogonal and sends y/||y|| to u/||u||.
struct SideInformation {
    Vec8 alpha{};
    double norm_y = 0.0;
};

SideInformation rotation_from(const Vec8& y, const Vec8& u);

// M x with M = sum_i alpha_i L_{e_i}, i.e. (sum_i alpha_i e_i) o x.
Vec8 apply_rotation(const SideInformation& si, const Vec8& x);

// Hypercube point: coordinate i = (-1)^{bit_i} * norm_y / (2*sqrt(2)); the
// result has norm exactly norm_y. Bit i is (bits >> i) & 1.
Vec8 map_bits_to_hypercube(std::uint8_t bits, double norm_y);

}  // namespace cvqkd
