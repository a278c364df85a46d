#include "cvqkd/modulation.hpp"

#include <cmath>
#include <string>

#include "cvqkd/errors.hpp"

namespace cvqkd {

ModulationPoint sample_sphere_point(double V_A, Stream& rng) {
    if (!(V_A > 0.0)) throw numeric_error("sample_sphere_point: V_A must be > 0");
    const double radius = std::sqrt(8.0 * V_A);
    ModulationPoint p;
    for (;;) {
        double n2 = 0.0;
        for (auto& v : p.q) {
            v = rng.normal();
            n2 += v * v;
        }
        if (n2 > 1e-300) {
            const double scale = radius / std::sqrt(n2);
            for (auto& v : p.q) v *= scale;
            return p;
        }
    }
}

std::pair<double, int> z_correlation(double V_A, double rel_tol) {
    if (!(V_A > 0.0)) throw numeric_error("z_correlation: V_A must be > 0");
    if (!(rel_tol > 0.0)) throw numeric_error("z_correlation: rel_tol must be > 0");
    const double w = 2.0 * V_A;
    double term = 2.0 * std::sqrt(w);  // k = 0: sqrt(4) * w^{1/2}
    double sum = term;
    constexpr int kCap = 1000000;
    int k = 0;
    for (; k < kCap; ++k) {
        term *= w / (k + 1) * std::sqrt((k + 5.0) / (k + 4.0));
        sum += term;
        // once the term ratio r < 1 the tail is below term * r / (1 - r)
        const double r = w / (k + 2) * std::sqrt((k + 6.0) / (k + 5.0));
        if (r < 1.0) {
            const double tail = term * r / (1.0 - r);
            if (tail < rel_tol * sum) {
                const double prefactor = 0.5 * std::exp(-w);
                return {prefactor * sum, k + 2};  // terms 0..k+1 summed
            }
        }
    }
    throw numeric_error("z_correlation: series did not converge for V_A=" +
                        std::to_string(V_A));
}

double z_tms(double V_A) {
    if (V_A < 0.0) throw numeric_error("z_tms: V_A must be >= 0");
    return std::sqrt(V_A * V_A + 2.0 * V_A);
}

CorrelationSummary correlation_summary_from(double V_A, double Z, int terms,
                                            double tail_bound) {
    CorrelationSummary s;
    s.V_A = V_A;
    s.Z = Z;
    s.Z_TMS = z_tms(V_A);
    const double ratio = s.Z_TMS / Z;
    s.F = ratio * ratio;
    s.delta_xi = (s.F - 1.0) * V_A;
    s.truncation_terms = terms;
    s.truncation_bound = tail_bound;
    return s;
}

GaussianEquivalent gaussian_equivalent_channel(double V_A, double T, double xi,
                                               double rel_tol) {
    if (!(T > 0.0) || T > 1.0)
        throw numeric_error("gaussian_equivalent_channel: T must be in (0,1]");
    if (xi < 0.0) throw numeric_error("gaussian_equivalent_channel: xi must be >= 0");
    auto [z, terms] = z_correlation(V_A, rel_tol);
    const double tail = rel_tol * z;  // guaranteed below this by the stop rule
    GaussianEquivalent out;
    out.summary = correlation_summary_from(V_A, z, terms, tail);
    out.T_G = T / out.summary.F;
    out.xi_G = out.summary.F * xi + out.summary.delta_xi;
    return out;
}

}  // namespace cvqkd
