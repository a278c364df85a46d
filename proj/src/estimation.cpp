#include "cvqkd/estimation.hpp"

#include <cmath>

#include "cvqkd/errors.hpp"

namespace cvqkd {

EstimationResult estimate(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw estimation_error("estimate: length mismatch");
    const std::size_t n = xs.size();
    if (n < 2) throw estimation_error("estimate: need at least 2 samples");
    double sx2 = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx2 += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    if (!(sx2 > 0.0)) throw estimation_error("estimate: degenerate regressors (all zero)");
    EstimationResult res;
    res.t_hat = sxy / sx2;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - res.t_hat * xs[i];
        rss += r * r;
    }
    res.sigma2_hat = rss / static_cast<double>(n);
    res.n_samples = static_cast<std::int64_t>(n);
    res.sum_x2 = sx2;
    return res;
}

double normal_upper_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw numeric_error("normal_upper_quantile: p must be in (0,1)");
    // P(N > z) = erfc(z / sqrt(2)) / 2 = p; bisect on monotone erfc
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (0.5 * std::erfc(mid / std::sqrt(2.0)) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

EstimationResult confidence_bounds(EstimationResult est, double eps_PE,
                                   const DetectorModel& det, double V_A) {
    if (!(eps_PE > 0.0) || eps_PE > 1.0)
        throw usage_error("confidence_bounds: eps_PE must be in (0,1]");
    validate(det);
    if (est.n_samples < 2) throw estimation_error("confidence_bounds: empty estimate");

    // eps_PE = 1 degenerates to z = 0 (bounds collapse onto the point estimates)
    const double z = eps_PE >= 1.0 ? 0.0 : normal_upper_quantile(eps_PE / 2.0);
    const double n = static_cast<double>(est.n_samples);
    const double sx2 = est.sum_x2 > 0.0 ? est.sum_x2 : n * V_A;

    const double dt = z * std::sqrt(est.sigma2_hat / sx2);
    est.t_low = est.t_hat - dt;
    est.t_high = est.t_hat + dt;
    const double ds = z * std::sqrt(2.0 / n);
    est.sigma2_low = est.sigma2_hat * (1.0 - ds);
    est.sigma2_high = est.sigma2_hat * (1.0 + ds);
    if (est.sigma2_low < 0.0) est.sigma2_low = 0.0;

    est.epsilon_PE = eps_PE;
    const double t_floor = est.t_low > 0.0 ? est.t_low : 0.0;
    est.T_min = 2.0 * t_floor * t_floor / det.eta;
    if (est.T_min <= 0.0) {
        est.inconclusive = true;
        est.xi_max = 0.0;
        return est;
    }
    est.inconclusive = false;
    const double excess = est.sigma2_high - 1.0 - det.v_el;
    est.xi_max = excess > 0.0 ? 2.0 * excess / (det.eta * est.T_min) : 0.0;
    return est;
}

EstimationResult synthetic_estimate(double T, double xi, const DetectorModel& det,
                                    double V_A, double n_samples) {
    if (!(T > 0.0) || T > 1.0) throw usage_error("synthetic_estimate: T must be in (0,1]");
    if (xi < 0.0) throw usage_error("synthetic_estimate: xi must be >= 0");
    if (!(V_A > 0.0)) throw usage_error("synthetic_estimate: V_A must be > 0");
    if (!(n_samples >= 2.0)) throw usage_error("synthetic_estimate: n too small");
    validate(det);
    EstimationResult res;
    res.t_hat = std::sqrt(det.eta * T / 2.0);
    res.sigma2_hat = 1.0 + det.eta * T * xi / 2.0 + det.v_el;
    res.n_samples = static_cast<std::int64_t>(
        n_samples > 9.2e18 ? 9.2e18 : n_samples);
    res.sum_x2 = n_samples * V_A;
    return res;
}

PointEstimates point_estimates(const EstimationResult& est, const DetectorModel& det) {
    validate(det);
    PointEstimates p;
    const double t2 = est.t_hat * est.t_hat;
    p.T = std::min(2.0 * t2 / det.eta, 1.0);
    const double excess = est.sigma2_hat - 1.0 - det.v_el;
    p.xi = (excess > 0.0 && p.T > 0.0) ? 2.0 * excess / (det.eta * p.T) : 0.0;
    return p;
}

}  // namespace cvqkd
