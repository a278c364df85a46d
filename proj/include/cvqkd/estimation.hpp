#pragma once

#include <cstdint>
#include <span>

#include "cvqkd/gaussian.hpp"

namespace cvqkd {

struct EstimationResult {
    double t_hat = 0.0;       // regression slope of y on x
    double sigma2_hat = 0.0;  // residual variance
    std::int64_t n_samples = 0;
    double sum_x2 = 0.0;  // sum of squared regressors (carried for the t interval)

    double t_low = 0.0, t_high = 0.0;
    double sigma2_low = 0.0, sigma2_high = 0.0;
    double T_min = 0.0;   // worst-case transmission
    double xi_max = 0.0;  // worst-case excess noise
    double epsilon_PE = 0.0;
    bool inconclusive = false;  // T_min clamped to 0; no key possible
};

// t_hat = sum(xy)/sum(x^2), sigma2_hat = mean squared residual.
EstimationResult estimate(std::span<const double> xs, std::span<const double> ys);

// z with P(N(0,1) > z) = p, by bisection on erfc (p in (0,1)).
double normal_upper_quantile(double p);

// Confidence bounds at miss probability eps_PE: with z the quantile exceeded
// with probability eps_PE/2,
//   t in t_hat -/+ z*sqrt(sigma2_hat/sum_x2),
//   sigma2 in sigma2_hat*(1 -/+ z*sqrt(2/n)),
// then T_min = 2*max(t_low,0)^2/eta and xi_max from sigma2_high at T_min via
// sigma2 = 1 + eta*T*xi/2 + v_el. Negative intermediates clamp to 0; a zero
// T_min flags the estimation inconclusive. V_A substitutes for sum_x2/n when
// the estimate carries no regressor sum (synthetic results).
EstimationResult confidence_bounds(EstimationResult est, double eps_PE,
                                   const DetectorModel& det, double V_A);

// Expected-value estimation result for parameter studies at block counts too
// large to simulate: t_hat = sqrt(eta*T/2), sigma2_hat = 1 + eta*T*xi/2 + v_el,
// sum_x2 = n*V_A.
EstimationResult synthetic_estimate(double T, double xi, const DetectorModel& det,
                                    double V_A, double n_samples);

struct PointEstimates {
    double T = 0.0;
    double xi = 0.0;
};

// Back the channel parameters out of (t_hat, sigma2_hat):
// T = min(2*t_hat^2/eta, 1), xi from sigma2 = 1 + eta*T*xi/2 + v_el (clamped
// at 0 when the residual variance sits below the noise floor).
PointEstimates point_estimates(const EstimationResult& est, const DetectorModel& det);

}  // namespace cvqkd
