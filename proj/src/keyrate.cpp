#include "cvqkd/keyrate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "cvqkd/channel.hpp"
#include "cvqkd/errors.hpp"
#include "cvqkd/modulation.hpp"
#include "cvqkd/reconciliation.hpp"

namespace cvqkd {

namespace {

void fill_equivalent_channel(KeyRateReport& r, double V_A, double T, double xi,
                             const DetectorModel& det) {
    const GaussianEquivalent eq = gaussian_equivalent_channel(V_A, T, xi);
    r.Z = eq.summary.Z;
    r.F = eq.summary.F;
    r.delta_xi = eq.summary.delta_xi;
    r.T_G = eq.T_G;
    r.xi_G = eq.xi_G;
    r.chi = holevo_bound(V_A, eq.T_G, eq.xi_G, det);
    r.chi_per_coord = r.chi / 2.0;
}

}  // namespace

KeyRateReport asymptotic_rate(double V_A, double T, double xi, const DetectorModel& det,
                              double beta) {
    if (beta < 0.0 || beta > 1.0) throw usage_error("beta must be in [0,1]");
    validate(det);
    KeyRateReport r;
    r.V_A = V_A;
    r.T = T;
    r.xi = xi;
    r.eta = det.eta;
    r.v_el = det.v_el;
    r.beta = beta;
    r.trusted_detector = det.trusted;
    r.finite_size = false;

    const ChannelModel ch(T, xi);
    r.snr = effective_snr(V_A, ch, det);
    r.I_xy = biawgn_capacity(r.snr);
    r.I_block8 = 8.0 * r.I_xy;
    fill_equivalent_channel(r, V_A, T, xi, det);

    r.K_asymptotic = beta * r.I_xy - r.chi_per_coord;
    r.K_asymptotic_clamped = std::max(r.K_asymptotic, 0.0);
    r.K_per_state = 2.0 * r.K_asymptotic_clamped;
    r.K_per_block8 = 8.0 * r.K_asymptotic_clamped;
    return r;
}

KeyRateReport finite_rate(double V_A, const EstimationResult& est, const DetectorModel& det,
                          double beta, double N, double n, double eps_bar, double eps_PA,
                          const FiniteSizeConstants& consts) {
    if (beta < 0.0 || beta > 1.0) throw usage_error("beta must be in [0,1]");
    if (!(n > 0.0) || n > N) throw usage_error("finite_rate: need 0 < n <= N");
    if (!(eps_bar > 0.0) || !(eps_PA > 0.0))
        throw usage_error("finite_rate: epsilons must be > 0");
    validate(det);

    KeyRateReport r;
    r.V_A = V_A;
    r.eta = det.eta;
    r.v_el = det.v_el;
    r.beta = beta;
    r.N = N;
    r.n = n;
    r.eps_PE = est.epsilon_PE;
    r.eps_bar = eps_bar;
    r.eps_PA = eps_PA;
    r.trusted_detector = det.trusted;
    r.finite_size = true;
    r.T_min = est.T_min;
    r.xi_max = est.xi_max;
    r.delta_n = consts.c_sqrt * std::sqrt(std::log2(2.0 / eps_bar) / n) +
                consts.c_log / n * std::log2(1.0 / eps_PA);

    const PointEstimates pe = point_estimates(est, det);
    r.T = pe.T;
    r.xi = pe.xi;
    r.snr = est.sigma2_hat > 0.0 ? est.t_hat * est.t_hat * V_A / est.sigma2_hat : 0.0;
    r.I_xy = biawgn_capacity(r.snr);
    r.I_block8 = 8.0 * r.I_xy;

    if (est.inconclusive || est.T_min <= 0.0) {
        r.estimation_inconclusive = true;
        r.K_finite = 0.0;
        r.K_finite_clamped = 0.0;
        r.K_asymptotic = 0.0;
        r.K_asymptotic_clamped = 0.0;
        return r;
    }

    // chi at the worst-case channel compatible with the data
    fill_equivalent_channel(r, V_A, std::min(est.T_min, 1.0), est.xi_max, det);

    // asymptotic reference at the point estimates (same I, chi at (T, xi))
    if (r.T > 0.0) {
        const GaussianEquivalent eq_pt = gaussian_equivalent_channel(V_A, r.T, r.xi);
        const double chi_pt = holevo_bound(V_A, eq_pt.T_G, eq_pt.xi_G, det);
        r.K_asymptotic = beta * r.I_xy - chi_pt / 2.0;
        r.K_asymptotic_clamped = std::max(r.K_asymptotic, 0.0);
    }

    r.K_finite = (n / N) * (beta * r.I_xy - r.chi_per_coord - r.delta_n);
    r.K_finite_clamped = std::max(r.K_finite, 0.0);
    r.K_per_state = 2.0 * r.K_finite_clamped;
    r.K_per_block8 = 8.0 * r.K_finite_clamped;
    return r;
}

std::vector<KeyRateReport> sweep(SweepAxis axis, std::span<const double> grid,
                                 const SweepFixed& fixed) {
    if (grid.empty()) throw usage_error("sweep: empty grid");
    std::vector<KeyRateReport> out;
    out.reserve(grid.size());
    for (double point : grid) {
        double va = fixed.V_A, T = fixed.T, N = fixed.N;
        switch (axis) {
            case SweepAxis::V_A: va = point; break;
            case SweepAxis::distance:
                T = distance_to_transmission(point, fixed.loss_db_per_km);
                break;
            case SweepAxis::N: N = point; break;
        }
        if (!fixed.finite) {
            out.push_back(asymptotic_rate(va, T, fixed.xi, fixed.det, fixed.beta));
        } else {
            const double n_pe = N * fixed.pe_fraction;
            const double n_key = N - n_pe;
            EstimationResult est = synthetic_estimate(T, fixed.xi, fixed.det, va, n_pe);
            est = confidence_bounds(est, fixed.eps.eps_PE, fixed.det, va);
            out.push_back(finite_rate(va, est, fixed.det, fixed.beta, N, n_key,
                                      fixed.eps.eps_bar, fixed.eps.eps_PA, fixed.consts));
        }
    }
    return out;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          int iters) {
    if (!(lo < hi)) throw usage_error("golden_section_max: need lo < hi");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

namespace {
using nlohmann::json;

json report_json(const KeyRateReport& r) {
    return json{
        {"inputs",
         {{"V_A", r.V_A},
          {"T", r.T},
          {"xi", r.xi},
          {"eta", r.eta},
          {"v_el", r.v_el},
          {"beta", r.beta},
          {"N", r.N},
          {"n", r.n},
          {"eps_PE", r.eps_PE},
          {"eps_bar", r.eps_bar},
          {"eps_PA", r.eps_PA}}},
        {"intermediates",
         {{"snr", r.snr},
          {"I_xy", r.I_xy},
          {"I_block8", r.I_block8},
          {"Z", r.Z},
          {"F", r.F},
          {"delta_xi", r.delta_xi},
          {"T_G", r.T_G},
          {"xi_G", r.xi_G},
          {"chi", r.chi},
          {"chi_per_coord", r.chi_per_coord},
          {"delta_n", r.delta_n},
          {"T_min", r.T_min},
          {"xi_max", r.xi_max}}},
        {"outputs",
         {{"K_asymptotic", r.K_asymptotic},
          {"K_asymptotic_clamped", r.K_asymptotic_clamped},
          {"K_finite", r.K_finite},
          {"K_finite_clamped", r.K_finite_clamped},
          {"K_per_state", r.K_per_state},
          {"K_per_block8", r.K_per_block8}}},
        {"flags",
         {{"trusted_detector", r.trusted_detector},
          {"finite_size", r.finite_size},
          {"estimation_inconclusive", r.estimation_inconclusive}}},
    };
}
}  // namespace

std::string report_to_json(const KeyRateReport& r) { return report_json(r).dump(2); }

namespace {
KeyRateReport parse_report(const json& j) {
    KeyRateReport r;
    const auto& in = j.at("inputs");
    r.V_A = in.at("V_A");
    r.T = in.at("T");
    r.xi = in.at("xi");
    r.eta = in.at("eta");
    r.v_el = in.at("v_el");
    r.beta = in.at("beta");
    r.N = in.at("N");
    r.n = in.at("n");
    r.eps_PE = in.at("eps_PE");
    r.eps_bar = in.at("eps_bar");
    r.eps_PA = in.at("eps_PA");
    const auto& mid = j.at("intermediates");
    r.snr = mid.at("snr");
    r.I_xy = mid.at("I_xy");
    r.I_block8 = mid.at("I_block8");
    r.Z = mid.at("Z");
    r.F = mid.at("F");
    r.delta_xi = mid.at("delta_xi");
    r.T_G = mid.at("T_G");
    r.xi_G = mid.at("xi_G");
    r.chi = mid.at("chi");
    r.chi_per_coord = mid.at("chi_per_coord");
    r.delta_n = mid.at("delta_n");
    r.T_min = mid.at("T_min");
    r.xi_max = mid.at("xi_max");
    const auto& out = j.at("outputs");
    r.K_asymptotic = out.at("K_asymptotic");
    r.K_asymptotic_clamped = out.at("K_asymptotic_clamped");
    r.K_finite = out.at("K_finite");
    r.K_finite_clamped = out.at("K_finite_clamped");
    r.K_per_state = out.at("K_per_state");
    r.K_per_block8 = out.at("K_per_block8");
    const auto& flags = j.at("flags");
    r.trusted_detector = flags.at("trusted_detector");
    r.finite_size = flags.at("finite_size");
    r.estimation_inconclusive = flags.at("estimation_inconclusive");
    return r;
}
}  // namespace

KeyRateReport report_from_json(const std::string& text) {
    try {
        return parse_report(json::parse(text));
    } catch (const json::exception& e) {
        throw io_error(std::string("report JSON: ") + e.what());
    }
}

}  // namespace cvqkd
