#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "cvqkd/keyrate.hpp"

namespace cvqkd {

// Numeric table with a fixed column order; the CSV writers and the figure
// checks both consume this, so defaults are introspectable.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Equivalent excess noise of the non-Gaussian modulation vs V_A.
struct Fig1Spec {
    double va_min = 0.1, va_max = 5.0, va_step = 0.1;
    double rel_tol = 1e-12;
};

// Asymptotic rate at 50 km vs modulation variance, conservative and optimistic
// reconciliation efficiencies.
struct Fig2Spec {
    double T = 0.1;  // 50 km at 0.2 dB/km
    double xi = 0.01;
    double eta = 0.6;
    double v_el = 0.0;
    bool trusted = true;
    std::array<double, 2> betas{0.8, 0.9};
    double va_min = 0.25, va_max = 4.0, va_step = 0.25;
};

// Finite-size rate vs distance for a family of block lengths, V_A optimized
// per point; half the symbols go to parameter estimation.
struct Fig3Spec {
    double xi = 0.005;
    double eta = 0.6;
    double v_el = 0.0;
    bool trusted = true;
    double beta = 0.8;
    EpsilonBudget eps;  // all 1e-10
    std::array<double, 4> block_lengths{1e8, 1e10, 1e12, 1e14};
    double pe_fraction = 0.5;
    double d_min = 0.0, d_max = 160.0, d_step = 5.0;
    double loss_db_per_km = 0.2;
    double va_lo = 0.05, va_hi = 8.0;  // optimization bracket
    FiniteSizeConstants consts;
};

Table figure1(const Fig1Spec& spec = {});
Table figure2(const Fig2Spec& spec = {});
Table figure3(const Fig3Spec& spec = {});

// RFC-4180-style CSV: header row, "." decimal separator, %.17g values.
void write_csv(const Table& table, std::ostream& out);

}  // namespace cvqkd
