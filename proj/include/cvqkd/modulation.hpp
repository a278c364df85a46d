#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "cvqkd/rng.hpp"

namespace cvqkd {

// One quadruple of coherent states: 8 quadrature displacements (x1,p1,...,x4,p4)
// on the sphere sum(q_i^2) = 8*V_A. Amplitude alpha maps to quadratures
// (2*Re(alpha), 2*Im(alpha)) with vacuum variance 1, so V_A = 2*alpha^2 per
// coordinate.
struct ModulationPoint {
    std::array<double, 8> q{};
    std::int64_t block = 0;
};

struct CorrelationSummary {
    double V_A = 0;
    double Z = 0;
    double Z_TMS = 0;
    double F = 1;         // (Z_TMS / Z)^2 >= 1
    double delta_xi = 0;  // (F - 1) * V_A
    int truncation_terms = 0;
    double truncation_bound = 0;  // absolute bound on the dropped series tail
};

// Uniform point on the sphere of radius sqrt(8*V_A): eight normal draws,
// normalized (redrawn in the measure-zero degenerate case).
ModulationPoint sample_sphere_point(double V_A, Stream& rng);

// Phase-space correlation of the 8-dim constellation's entangled-state picture:
//   Z = (1/2) e^{-2 V_A} sum_k sqrt(k+4)/k! (2 V_A)^{k+1/2}
// summed by term recurrence t_{k+1} = t_k * 2V_A/(k+1) * sqrt((k+5)/(k+4)),
// truncated when a ratio-test tail bound drops below rel_tol * partial sum.
// Returns (Z, terms_used). Throws numeric_error past a 10^6-term cap.
std::pair<double, int> z_correlation(double V_A, double rel_tol = 1e-12);

// Two-mode squeezed state ceiling: Z_TMS = sqrt(V_A^2 + 2 V_A).
double z_tms(double V_A);

// Summary assembled from an externally supplied Z value (F, delta_xi fields).
CorrelationSummary correlation_summary_from(double V_A, double Z, int terms = 0,
                                            double tail_bound = 0);

struct GaussianEquivalent {
    double T_G = 1;
    double xi_G = 0;
    CorrelationSummary summary;
};

// Gaussian-equivalent channel: T_G = T/F, xi_G = F*xi + (F-1)*V_A.
GaussianEquivalent gaussian_equivalent_channel(double V_A, double T, double xi,
                                               double rel_tol = 1e-12);

}  // namespace cvqkd
