#pragma once

#include <utility>

namespace cvqkd {

// Two-mode covariance matrix in block form [[a*I2, c*sigma_z], [c*sigma_z, b*I2]],
// all entries in shot-noise units (vacuum = 1).
struct TwoModeCov {
    double a = 1.0;  // Alice-mode quadrature variance
    double b = 1.0;  // Bob-mode quadrature variance
    double c = 0.0;  // phase-space correlation
};

struct DetectorModel {
    double eta = 1.0;    // quantum efficiency, in (0, 1]
    double v_el = 0.0;   // electronic noise variance (SNU), >= 0
    bool trusted = true; // trusted-noise (beamsplitter + EPR ancilla) vs untrusted folding
};

void validate(const DetectorModel& det);

// Symplectic spectrum (nu1 >= nu2) from the quadratic
// x^2 - Delta*x + D = 0, Delta = a^2 + b^2 - 2c^2, D = (ab - c^2)^2.
// Throws physicality_error if a or b < 1 or nu2 < 1 beyond slack.
std::pair<double, double> symplectic_eigenvalues(const TwoModeCov& cov);

// Von Neumann entropy of a thermal state with symplectic eigenvalue nu, in bits.
// nu in [1 - tol, 1] clamps to 1 (-> 0); nu < 1 - tol throws.
double g_entropy(double nu);

// Holevo bound chi(y;E) in bits per coherent state for heterodyne detection on
// the Gaussian channel (T_G, xi_G) applied to a two-mode squeezed state of
// modulation variance V_A (a = V_A+1, b = 1 + T_G*(V_A+xi_G), c = sqrt(T_G)*Z_TMS).
//
// Untrusted detector: fold (eta, v_el) into the channel
//   T_G <- eta*T_G, xi_G <- xi_G + (1 - eta + v_el)/(eta*T_G)
// then chi = g(nu1) + g(nu2) - g(nu_cond) with heterodyne conditioning
//   Gamma_A - C (Gamma_B + I2)^-1 C^T.
//
// Trusted detector: beamsplitter of transmittance eta on Bob's mode against one
// arm of an EPR pair of variance v = 1 + 2*v_el/(1-eta); chi = g(nu1) + g(nu2)
// minus the entropy of (Alice, reflected arm, EPR partner) conditioned on
// heterodyne of the transmitted arm (6x6 symplectic spectrum). When v grows
// large (eta near 1 with v_el > 0) that route loses precision and the
// conditional entropy is computed on Eve's side of the channel purification
// instead, which is exact for any eta and regular at eta = 1.
double holevo_bound(double V_A, double T_G, double xi_G, const DetectorModel& det);

}  // namespace cvqkd
