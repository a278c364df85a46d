#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvqkd/octonion.hpp"
#include "cvqkd/rng.hpp"
#include "oracles.hpp"

using namespace cvqkd;

namespace {

Octonion basis(int i) {
    Octonion e{};
    e.c[i] = 1.0;
    return e;
}

Vec8 random_vec(Stream& rng) {
    Vec8 v{};
    for (double& x : v) x = rng.normal();
    return v;
}

}  // namespace

TEST_CASE("all 64 basis products match the recursive Cayley-Dickson construction") {
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            Octonion p = octonion_multiply(basis(i), basis(j));
            oracles::Vec8 ref = oracles::cayley_dickson_multiply(basis(i).c, basis(j).c);
            for (int k = 0; k < 8; ++k) CHECK(p.c[k] == ref[k]);
        }
    }
}

TEST_CASE("general products match the recursive construction") {
    Stream rng(derive_seed(21, 0));
    for (int trial = 0; trial < 500; ++trial) {
        Vec8 a = random_vec(rng), b = random_vec(rng);
        Octonion p = octonion_multiply(Octonion{a}, Octonion{b});
        oracles::Vec8 ref = oracles::cayley_dickson_multiply(a, b);
        for (int k = 0; k < 8; ++k) CHECK(p.c[k] == doctest::Approx(ref[k]).epsilon(1e-12));
    }
}

TEST_CASE("multiplication is norm-preserving (composition algebra)") {
    Stream rng(derive_seed(22, 0));
    for (int trial = 0; trial < 200; ++trial) {
        Vec8 a = random_vec(rng), b = random_vec(rng);
        Octonion p = octonion_multiply(Octonion{a}, Octonion{b});
        CHECK(norm(p.c) == doctest::Approx(norm(a) * norm(b)).epsilon(1e-12));
    }
}

TEST_CASE("e0 is a two-sided identity") {
    Stream rng(derive_seed(23, 0));
    Vec8 a = random_vec(rng);
    Octonion left = octonion_multiply(basis(0), Octonion{a});
    Octonion right = octonion_multiply(Octonion{a}, basis(0));
    for (int k = 0; k < 8; ++k) {
        CHECK(left.c[k] == doctest::Approx(a[k]));
        CHECK(right.c[k] == doctest::Approx(a[k]));
    }
}

TEST_CASE("reconstruction: M y = u exactly, M orthogonal") {
    Stream rng(derive_seed(24, 0));
    for (int trial = 0; trial < 10000; ++trial) {
        Vec8 y = random_vec(rng), u = random_vec(rng);
        SideInformation si = rotation_from(y, u);
        CHECK(si.norm_y == doctest::Approx(norm(y)).epsilon(1e-14));

        // M sends y to u scaled by |u|/|y|; on the unit sphere exactly u/|u|
        Vec8 my = apply_rotation(si, y);
        for (int k = 0; k < 8; ++k)
            CHECK(my[k] == doctest::Approx(u[k] * norm(y) / norm(u)).epsilon(1e-10));

        // orthogonality: |M x| = |x| for random x, and alpha is unit-norm
        Vec8 x = random_vec(rng);
        Vec8 mx = apply_rotation(si, x);
        CHECK(norm(mx) == doctest::Approx(norm(x)).epsilon(1e-10));
        CHECK(norm(si.alpha) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rotation preserves inner products") {
    Stream rng(derive_seed(25, 0));
    Vec8 y = random_vec(rng), u = random_vec(rng);
    SideInformation si = rotation_from(y, u);
    for (int trial = 0; trial < 100; ++trial) {
        Vec8 a = random_vec(rng), b = random_vec(rng);
        Vec8 ma = apply_rotation(si, a), mb = apply_rotation(si, b);
        double ip = 0.0, mip = 0.0;
        for (int k = 0; k < 8; ++k) {
            ip += a[k] * b[k];
            mip += ma[k] * mb[k];
        }
        CHECK(mip == doctest::Approx(ip).epsilon(1e-9));
    }
}

TEST_CASE("alpha coefficients look independent of the hypercube point") {
    // Bob rotates y onto a random hypercube vertex u(bits); the published
    // alphas must not leak the bits. Compare alpha_3 samples across two fixed
    // bit patterns with a two-sample KS test at the 1% level.
    Stream rng(derive_seed(26, 0));
    const int n = 4000;
    std::vector<double> s0, s1;
    for (int i = 0; i < n; ++i) {
        Vec8 y = random_vec(rng);
        SideInformation a0 = rotation_from(y, map_bits_to_hypercube(0x00, norm(y)));
        SideInformation a1 = rotation_from(y, map_bits_to_hypercube(0xA7, norm(y)));
        s0.push_back(a0.alpha[3]);
        s1.push_back(a1.alpha[3]);
    }
    // distinct y draws keep the two samples independent
    std::vector<double> t0, t1;
    for (int i = 0; i < n; ++i) {
        t0.push_back(s0[i]);
        Vec8 y = random_vec(rng);
        t1.push_back(rotation_from(y, map_bits_to_hypercube(0xA7, norm(y))).alpha[3]);
    }
    const double d = oracles::ks_statistic(t0, t1);
    CHECK(d < oracles::ks_critical_001(n, n));
}

TEST_CASE("hypercube map") {
    Vec8 v = map_bits_to_hypercube(0b10110010, 4.0);
    const double step = 4.0 / (2.0 * std::sqrt(2.0));
    CHECK(norm(v) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(v[0] == doctest::Approx(step));
    CHECK(v[1] == doctest::Approx(-step));
    CHECK(v[2] == doctest::Approx(step));
    CHECK(v[3] == doctest::Approx(step));
    CHECK(v[4] == doctest::Approx(-step));
    CHECK(v[5] == doctest::Approx(-step));
    CHECK(v[6] == doctest::Approx(step));
    CHECK(v[7] == doctest::Approx(-step));
}
