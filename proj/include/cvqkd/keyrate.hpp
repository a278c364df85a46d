#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cvqkd/estimation.hpp"
#include "cvqkd/gaussian.hpp"

namespace cvqkd {

struct EpsilonBudget {
    double eps_PE = 1e-10;
    double eps_bar = 1e-10;
    double eps_PA = 1e-10;
};

// Delta(n) = c_sqrt * sqrt(log2(2/eps_bar)/n) + (c_log/n) * log2(1/eps_PA)
struct FiniteSizeConstants {
    double c_sqrt = 7.0;
    double c_log = 2.0;
};

// Everything needed to audit one rate computation. Rates are per quadrature
// symbol (one coordinate of an 8-dim block); chi is per coherent state (two
// coordinates), so K = beta*I - chi/2 at the coordinate level. N and n count
// quadrature symbols.
struct KeyRateReport {
    // inputs
    double V_A = 0, T = 0, xi = 0;
    double eta = 1, v_el = 0;
    double beta = 0;
    double N = 0, n = 0;
    double eps_PE = 0, eps_bar = 0, eps_PA = 0;
    // intermediates
    double snr = 0;
    double I_xy = 0;        // bits per coordinate
    double I_block8 = 0;    // 8x the per-coordinate value
    double Z = 0, F = 1, delta_xi = 0;
    double T_G = 0, xi_G = 0;
    double chi = 0;             // bits per coherent state
    double chi_per_coord = 0;   // chi / 2
    double delta_n = 0;
    double T_min = 0, xi_max = 0;
    // outputs
    double K_asymptotic = 0;          // per coordinate, unclamped
    double K_asymptotic_clamped = 0;
    double K_finite = 0;              // per coordinate, unclamped
    double K_finite_clamped = 0;
    double K_per_state = 0;   // 2x the clamped headline rate
    double K_per_block8 = 0;  // 8x the clamped headline rate
    // mode flags
    bool trusted_detector = true;
    bool finite_size = false;
    bool estimation_inconclusive = false;
};

KeyRateReport asymptotic_rate(double V_A, double T, double xi, const DetectorModel& det,
                              double beta);

// K_finite = (n/N) * (beta*I - chi_worst/2 - Delta(n)) per coordinate, with
// chi_worst at (T_min, xi_max) from the estimation result (which must carry
// confidence bounds) and I at the point estimates. Inconclusive estimation
// yields K_finite = 0 with the flag set.
KeyRateReport finite_rate(double V_A, const EstimationResult& est, const DetectorModel& det,
                          double beta, double N, double n, double eps_bar, double eps_PA,
                          const FiniteSizeConstants& consts = {});

enum class SweepAxis { V_A, distance, N };

struct SweepFixed {
    double V_A = 1.0;
    double T = 0.1;
    double xi = 0.01;
    DetectorModel det;
    double beta = 0.8;
    bool finite = false;       // finite-size sweeps use synthetic estimation
    double N = 1e10;           // quadrature symbols (finite mode)
    double pe_fraction = 0.5;  // share of N disclosed for estimation
    EpsilonBudget eps;
    FiniteSizeConstants consts;
    double loss_db_per_km = 0.2;
};

std::vector<KeyRateReport> sweep(SweepAxis axis, std::span<const double> grid,
                                 const SweepFixed& fixed);

// Golden-section maximizer for the empirically unimodal clamped rate.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          int iters = 80);

// Fixed-field JSON serialization; parse(to_json(r)) reproduces every double
// bit-for-bit.
std::string report_to_json(const KeyRateReport& r);
KeyRateReport report_from_json(const std::string& text);

}  // namespace cvqkd
