#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/errors.hpp"
#include "cvqkd/figures.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/reconciliation.hpp"

using namespace cvqkd;

namespace {
const DetectorModel kFigDet{0.6, 0.0, true};
}

TEST_CASE("asymptotic report is internally consistent") {
    KeyRateReport r = asymptotic_rate(1.0, 0.1, 0.01, kFigDet, 0.8);
    CHECK(r.I_xy == doctest::Approx(biawgn_capacity(r.snr)).epsilon(1e-14));
    CHECK(r.I_block8 == doctest::Approx(8.0 * r.I_xy).epsilon(1e-14));
    CHECK(r.chi_per_coord == doctest::Approx(r.chi / 2.0).epsilon(1e-14));
    CHECK(r.K_asymptotic == doctest::Approx(0.8 * r.I_xy - r.chi / 2.0).epsilon(1e-12));
    CHECK(r.K_per_state == doctest::Approx(2.0 * r.K_asymptotic_clamped));
    CHECK(r.K_per_block8 == doctest::Approx(8.0 * r.K_asymptotic_clamped));
    CHECK(r.T_G == doctest::Approx(0.1 / r.F).epsilon(1e-13));
    CHECK(r.xi_G == doctest::Approx(r.F * 0.01 + r.delta_xi).epsilon(1e-12));
    CHECK(r.snr ==
          doctest::Approx(effective_snr(1.0, ChannelModel(0.1, 0.01), kFigDet)).epsilon(1e-14));
}

TEST_CASE("asymptotic rate reproduces the 50 km operating points") {
    // T = 0.1, xi = 0.01, eta = 0.6, trusted, per-coordinate rates
    KeyRateReport peak = asymptotic_rate(0.75, 0.1, 0.01, kFigDet, 0.8);
    CHECK(peak.K_asymptotic == doctest::Approx(0.002400).epsilon(0.02));
    KeyRateReport low = asymptotic_rate(0.25, 0.1, 0.01, kFigDet, 0.8);
    CHECK(low.K_asymptotic == doctest::Approx(0.000963).epsilon(0.02));
    KeyRateReport high = asymptotic_rate(4.0, 0.1, 0.01, kFigDet, 0.8);
    CHECK(high.K_asymptotic == doctest::Approx(-0.007384).epsilon(0.02));
    CHECK(high.K_asymptotic_clamped == 0.0);
    KeyRateReport b9 = asymptotic_rate(1.25, 0.1, 0.01, kFigDet, 0.9);
    CHECK(b9.K_asymptotic == doctest::Approx(0.004542).epsilon(0.02));
}

TEST_CASE("identity channel with perfect devices: only the modulation penalty remains") {
    DetectorModel ideal{1.0, 0.0, true};
    KeyRateReport r = asymptotic_rate(1.0, 1.0, 0.0, ideal, 1.0);
    // the constellation is not Gaussian, so T_G < 1 and chi > 0 even here
    CHECK(r.T_G < 1.0);
    CHECK(r.chi > 0.0);
    CHECK(r.K_asymptotic < biawgn_capacity(0.5));
    // shrinking V_A shrinks the penalty; the leak goes to zero with it
    KeyRateReport tiny = asymptotic_rate(0.02, 1.0, 0.0, ideal, 1.0);
    CHECK(tiny.chi < r.chi);
    CHECK(tiny.chi < 2e-4);
    CHECK(tiny.delta_xi < r.delta_xi);
}

TEST_CASE("beta = 0.9 dominates beta = 0.8 pointwise") {
    for (double va = 0.25; va <= 4.0 + 1e-9; va += 0.75) {
        KeyRateReport a = asymptotic_rate(va, 0.1, 0.01, kFigDet, 0.8);
        KeyRateReport b = asymptotic_rate(va, 0.1, 0.01, kFigDet, 0.9);
        CHECK(b.K_asymptotic > a.K_asymptotic);
    }
}

TEST_CASE("finite-size report: formula identities and N-monotonicity") {
    const double T = 0.1, xi = 0.005, V_A = 1.0, beta = 0.8;
    const EpsilonBudget eps;
    double prev = -1e9;
    for (double N : {1e8, 1e10, 1e12}) {
        const double n = N / 2.0;
        EstimationResult est = synthetic_estimate(T, xi, kFigDet, V_A, N - n);
        est = confidence_bounds(est, eps.eps_PE, kFigDet, V_A);
        KeyRateReport r = finite_rate(V_A, est, kFigDet, beta, N, n, eps.eps_bar, eps.eps_PA);

        const double expect_delta = 7.0 * std::sqrt(std::log2(2.0 / eps.eps_bar) / n) +
                                    2.0 / n * std::log2(1.0 / eps.eps_PA);
        CHECK(r.delta_n == doctest::Approx(expect_delta).epsilon(1e-13));
        CHECK(r.K_finite ==
              doctest::Approx((n / N) * (beta * r.I_xy - r.chi_per_coord - r.delta_n))
                  .epsilon(1e-12));
        // chi in the report is the worst-case one
        GaussianEquivalent eq = gaussian_equivalent_channel(V_A, est.T_min, est.xi_max);
        CHECK(r.chi == doctest::Approx(holevo_bound(V_A, eq.T_G, eq.xi_G, kFigDet)).epsilon(1e-12));
        CHECK(r.K_finite > prev);
        prev = r.K_finite;
        CHECK(r.K_finite_clamped <= r.K_asymptotic_clamped + 1e-15);
        CHECK(r.finite_size);
    }
}

TEST_CASE("worst-case chi dominates the point-estimate chi") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double V_A = 0.2 + 4.0 * u(gen);
        const double T = 0.05 + 0.9 * u(gen);
        const double xi = 0.2 * u(gen);
        const double eta = 0.4 + 0.6 * u(gen);
        DetectorModel det{eta, 0.05 * u(gen), u(gen) < 0.5};
        EstimationResult est = synthetic_estimate(T, xi, det, V_A, 1e8);
        est = confidence_bounds(est, 1e-10, det, V_A);
        REQUIRE_FALSE(est.inconclusive);
        GaussianEquivalent worst = gaussian_equivalent_channel(V_A, est.T_min, est.xi_max);
        GaussianEquivalent point = gaussian_equivalent_channel(V_A, T, xi);
        CHECK(holevo_bound(V_A, worst.T_G, worst.xi_G, det) >=
              holevo_bound(V_A, point.T_G, point.xi_G, det) - 1e-10);
    }
}

TEST_CASE("inconclusive estimation zeroes the finite rate") {
    EstimationResult est;
    est.t_hat = 1e-7;
    est.sigma2_hat = 1.0;
    est.n_samples = 1000;
    est.sum_x2 = 1000.0;
    est = confidence_bounds(est, 1e-10, DetectorModel{1.0, 0.0, true}, 1.0);
    REQUIRE(est.inconclusive);
    KeyRateReport r =
        finite_rate(1.0, est, DetectorModel{1.0, 0.0, true}, 0.8, 2000, 1000, 1e-10, 1e-10);
    CHECK(r.estimation_inconclusive);
    CHECK(r.K_finite == 0.0);
    CHECK(r.K_per_state == 0.0);
}

TEST_CASE("sweep over V_A matches direct calls") {
    SweepFixed fixed;
    fixed.det = kFigDet;
    std::vector<double> grid{0.5, 1.0, 2.0};
    auto reports = sweep(SweepAxis::V_A, grid, fixed);
    REQUIRE(reports.size() == 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        KeyRateReport direct = asymptotic_rate(grid[i], fixed.T, fixed.xi, fixed.det, fixed.beta);
        CHECK(reports[i].V_A == grid[i]);
        CHECK(reports[i].K_asymptotic == doctest::Approx(direct.K_asymptotic).epsilon(1e-14));
    }
}

TEST_CASE("sweep over distance converts to transmission") {
    SweepFixed fixed;
    fixed.det = kFigDet;
    std::vector<double> grid{0.0, 50.0, 100.0};
    auto reports = sweep(SweepAxis::distance, grid, fixed);
    CHECK(reports[0].T == doctest::Approx(1.0));
    CHECK(reports[1].T == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(reports[2].T == doctest::Approx(0.01).epsilon(1e-12));
    // longer fiber cannot help
    CHECK(reports[2].K_asymptotic < reports[1].K_asymptotic);
}

TEST_CASE("finite sweep over N splits symbols between estimation and key") {
    SweepFixed fixed;
    fixed.det = kFigDet;
    fixed.finite = true;
    fixed.xi = 0.005;
    std::vector<double> grid{1e8, 1e10};
    auto reports = sweep(SweepAxis::N, grid, fixed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(reports[i].N == grid[i]);
        CHECK(reports[i].n == doctest::Approx(grid[i] / 2.0));
        CHECK(reports[i].finite_size);
    }
    CHECK(reports[1].K_finite > reports[0].K_finite);
}

TEST_CASE("golden section finds the peak of a unimodal function") {
    auto f = [](double x) { return -(x - 2.0) * (x - 2.0); };
    CHECK(golden_section_max(f, 0.0, 5.0) == doctest::Approx(2.0).epsilon(1e-9));
    auto g = [](double x) { return asymptotic_rate(x, 0.1, 0.01, kFigDet, 0.8).K_asymptotic; };
    const double peak = golden_section_max(g, 0.25, 4.0, 60);
    CHECK(peak == doctest::Approx(0.75).epsilon(0.15));
    CHECK_THROWS_AS(golden_section_max(f, 2.0, 2.0), usage_error);
}

TEST_CASE("report JSON round-trips bit-for-bit") {
    KeyRateReport r = asymptotic_rate(1.37, 0.213, 0.0173, DetectorModel{0.81, 0.043, true}, 0.85);
    r.finite_size = true;  // exercise the flags too
    const std::string text = report_to_json(r);
    KeyRateReport back = report_from_json(text);

    auto same_bits = [](double x, double y) {
        return std::memcmp(&x, &y, sizeof(double)) == 0;
    };
    CHECK(same_bits(back.V_A, r.V_A));
    CHECK(same_bits(back.snr, r.snr));
    CHECK(same_bits(back.I_xy, r.I_xy));
    CHECK(same_bits(back.Z, r.Z));
    CHECK(same_bits(back.chi, r.chi));
    CHECK(same_bits(back.K_asymptotic, r.K_asymptotic));
    CHECK(same_bits(back.K_per_block8, r.K_per_block8));
    CHECK(back.trusted_detector == r.trusted_detector);
    CHECK(back.finite_size == r.finite_size);
    // and the serialization itself is stable
    CHECK(report_to_json(back) == text);
}

TEST_CASE("malformed report JSON raises io_error") {
    CHECK_THROWS_AS(report_from_json("{"), io_error);
    CHECK_THROWS_AS(report_from_json("{\"inputs\": {}}"), io_error);
}

TEST_CASE("figure tables have the advertised shape") {
    Fig1Spec f1;
    f1.va_max = 1.0;  // keep the unit test quick
    Table t1 = figure1(f1);
    CHECK(t1.columns == std::vector<std::string>{"V_A", "Z", "Z_TMS", "F", "delta_xi"});
    CHECK(t1.rows.size() == 10);
    double prev = 0.0;
    for (const auto& row : t1.rows) {
        CHECK(row[4] > prev);  // delta_xi strictly increasing
        prev = row[4];
    }

    Fig2Spec f2;
    f2.va_max = 1.0;
    Table t2 = figure2(f2);
    CHECK(t2.columns.size() == 3);
    CHECK(t2.columns[0] == "V_A");
    CHECK(t2.rows.size() == 4);  // 0.25..1.0 step 0.25
    for (const auto& row : t2.rows) CHECK(row[2] > row[1]);  // beta 0.9 dominates
}

TEST_CASE("csv writer emits a header and full-precision values") {
    Table t;
    t.columns = {"a", "b"};
    t.rows = {{1.0, 0.1}, {2.5, -3.0}};
    std::ostringstream out;
    write_csv(t, out);
    const std::string text = out.str();
    CHECK(text.find("a,b\r\n") == 0);
    CHECK(text.find("0.1000000000000000") != std::string::npos);  // %.17g of 0.1
    CHECK(text.find("2.5,-3\r\n") != std::string::npos);
}
