#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvqkd/errors.hpp"
#include "cvqkd/modulation.hpp"
#include "cvqkd/rng.hpp"
#include "oracles.hpp"

using namespace cvqkd;

TEST_CASE("sphere samples sit exactly on the shell of radius sqrt(8 V_A)") {
    Stream rng(derive_seed(42, 0));
    for (double V_A : {0.25, 1.0, 3.7}) {
        for (int i = 0; i < 200; ++i) {
            ModulationPoint p = sample_sphere_point(V_A, rng);
            double r2 = 0.0;
            for (double q : p.q) r2 += q * q;
            CHECK(r2 == doctest::Approx(8.0 * V_A).epsilon(1e-12));
        }
    }
}

TEST_CASE("coordinate moments: mean 0, variance V_A, cross-covariance 0") {
    Stream rng(derive_seed(43, 0));
    const double V_A = 1.5;
    const int n = 200000;
    double mean0 = 0.0, var3 = 0.0, cov05 = 0.0, cov12 = 0.0;
    for (int i = 0; i < n; ++i) {
        ModulationPoint p = sample_sphere_point(V_A, rng);
        mean0 += p.q[0];
        var3 += p.q[3] * p.q[3];
        cov05 += p.q[0] * p.q[5];
        cov12 += p.q[1] * p.q[2];
    }
    mean0 /= n;
    var3 /= n;
    cov05 /= n;
    cov12 /= n;
    const double se = std::sqrt(V_A / n);  // MC scale
    CHECK(std::abs(mean0) < 6.0 * se);
    CHECK(var3 == doctest::Approx(V_A).epsilon(0.02));
    CHECK(std::abs(cov05) < 6.0 * V_A / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(cov12) < 6.0 * V_A / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("Z series against the direct high-precision summation") {
    for (double V_A = 0.1; V_A <= 5.0 + 1e-9; V_A += 0.1) {
        auto [z, terms] = z_correlation(V_A, 1e-13);
        const long double ref = oracles::z_series_direct(V_A);
        CHECK(std::abs(z - static_cast<double>(ref)) <= 1e-12 * static_cast<double>(ref));
        CHECK(terms >= 4);
    }
}

TEST_CASE("Z series against the entangled-state coefficient sum") {
    for (double V_A : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        auto [z, terms] = z_correlation(V_A, 1e-13);
        (void)terms;
        CHECK(z == doctest::Approx(oracles::z_state_sum(V_A)).epsilon(1e-9));
    }
}

TEST_CASE("reference values at V_A = 1") {
    CHECK(z_tms(1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    auto [z, terms] = z_correlation(1.0, 1e-13);
    (void)terms;
    CHECK(z == doctest::Approx(1.7204413397).epsilon(1e-9));
    GaussianEquivalent eq = gaussian_equivalent_channel(1.0, 0.5, 0.0);
    CHECK(eq.summary.delta_xi == doctest::Approx(0.013541).epsilon(2e-4));
}

TEST_CASE("Z < Z_TMS so the equivalent channel always loses transmittance") {
    for (double V_A = 0.1; V_A <= 5.0 + 1e-9; V_A += 0.1) {
        auto [z, terms] = z_correlation(V_A, 1e-12);
        (void)terms;
        CHECK(z < z_tms(V_A));
        CHECK(z > 0.0);
    }
}

TEST_CASE("modulation-induced excess noise is positive, below 1 SNU, strictly increasing") {
    double prev = 0.0;
    for (double V_A = 0.1; V_A <= 5.0 + 1e-9; V_A += 0.1) {
        GaussianEquivalent eq = gaussian_equivalent_channel(V_A, 0.4, 0.01);
        CHECK(eq.summary.delta_xi > prev);
        CHECK(eq.summary.delta_xi < 1.0);
        prev = eq.summary.delta_xi;
    }
}

TEST_CASE("gaussian equivalent channel bookkeeping") {
    const double V_A = 2.0, T = 0.3, xi = 0.02;
    GaussianEquivalent eq = gaussian_equivalent_channel(V_A, T, xi);
    const double F = eq.summary.F;
    CHECK(F > 1.0);
    CHECK(eq.T_G == doctest::Approx(T / F).epsilon(1e-14));
    CHECK(eq.xi_G == doctest::Approx(F * xi + (F - 1.0) * V_A).epsilon(1e-12));
    CHECK(eq.summary.delta_xi == doctest::Approx((F - 1.0) * V_A).epsilon(1e-12));
    // the equivalent channel must reproduce Bob's variance: T_G (V_A + xi_G) = T (V_A + xi)
    CHECK(eq.T_G * (V_A + eq.xi_G) == doctest::Approx(T * (V_A + xi)).epsilon(1e-12));
    CHECK(eq.summary.truncation_bound <= 1e-12 * eq.summary.Z);
}

TEST_CASE("invalid modulation inputs are rejected") {
    CHECK_THROWS_AS(z_correlation(0.0, 1e-12), numeric_error);
    CHECK_THROWS_AS(z_correlation(-1.0, 1e-12), numeric_error);
    Stream rng(1);
    CHECK_THROWS_AS(sample_sphere_point(-0.5, rng), numeric_error);
}
