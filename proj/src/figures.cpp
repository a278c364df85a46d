#include "cvqkd/figures.hpp"

#include <cmath>
#include <cstdio>

#include "cvqkd/channel.hpp"
#include "cvqkd/modulation.hpp"

namespace cvqkd {

namespace {
std::vector<double> make_grid(double lo, double hi, double step) {
    std::vector<double> g;
    // tolerate FP drift at the top end
    for (double v = lo; v <= hi + step * 1e-9; v += step) g.push_back(v);
    return g;
}
}  // namespace

Table figure1(const Fig1Spec& spec) {
    Table t;
    t.columns = {"V_A", "Z", "Z_TMS", "F", "delta_xi"};
    for (double va : make_grid(spec.va_min, spec.va_max, spec.va_step)) {
        auto [z, terms] = z_correlation(va, spec.rel_tol);
        (void)terms;
        const CorrelationSummary s = correlation_summary_from(va, z);
        t.rows.push_back({va, s.Z, s.Z_TMS, s.F, s.delta_xi});
    }
    return t;
}

Table figure2(const Fig2Spec& spec) {
    Table t;
    t.columns = {"V_A"};
    for (double beta : spec.betas) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "K_beta%.2f", beta);
        t.columns.emplace_back(buf);
    }
    const DetectorModel det{spec.eta, spec.v_el, spec.trusted};
    for (double va : make_grid(spec.va_min, spec.va_max, spec.va_step)) {
        std::vector<double> row{va};
        for (double beta : spec.betas) {
            const KeyRateReport r = asymptotic_rate(va, spec.T, spec.xi, det, beta);
            row.push_back(r.K_asymptotic);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table figure3(const Fig3Spec& spec) {
    Table t;
    t.columns = {"distance_km"};
    for (double n_len : spec.block_lengths) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "K_finite_N%.0e", n_len);
        t.columns.emplace_back(buf);
    }
    const DetectorModel det{spec.eta, spec.v_el, spec.trusted};
    for (double d : make_grid(spec.d_min, spec.d_max, spec.d_step)) {
        const double T = distance_to_transmission(d, spec.loss_db_per_km);
        std::vector<double> row{d};
        for (double n_len : spec.block_lengths) {
            const double n_pe = n_len * spec.pe_fraction;
            const double n_key = n_len - n_pe;
            auto rate_at = [&](double va) {
                EstimationResult est = synthetic_estimate(T, spec.xi, det, va, n_pe);
                est = confidence_bounds(est, spec.eps.eps_PE, det, va);
                return finite_rate(va, est, det, spec.beta, n_len, n_key, spec.eps.eps_bar,
                                   spec.eps.eps_PA, spec.consts);
            };
            const double va_best = golden_section_max(
                [&](double va) { return rate_at(va).K_finite_clamped; }, spec.va_lo,
                spec.va_hi, 40);
            row.push_back(rate_at(va_best).K_finite);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\r\n";
    char buf[40];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\r\n";
    }
}

}  // namespace cvqkd
