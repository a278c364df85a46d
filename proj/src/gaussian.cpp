#include "cvqkd/gaussian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {
constexpr double kPhysSlack = 1e-9;

double xlog2x(double x) { return x > 0 ? x * std::log2(x) : 0.0; }
}  // namespace

void validate(const DetectorModel& det) {
    if (!(det.eta > 0.0) || det.eta > 1.0)
        throw physicality_error("detector eta must be in (0,1], got " + std::to_string(det.eta));
    if (!(det.v_el >= 0.0))
        throw physicality_error("detector v_el must be >= 0, got " + std::to_string(det.v_el));
}

std::pair<double, double> symplectic_eigenvalues(const TwoModeCov& cov) {
    if (cov.a < 1.0 - kPhysSlack || cov.b < 1.0 - kPhysSlack)
        throw physicality_error("mode variance below the vacuum: a=" + std::to_string(cov.a) +
                                " b=" + std::to_string(cov.b));
    const double delta = cov.a * cov.a + cov.b * cov.b - 2.0 * cov.c * cov.c;
    const double det_g = cov.a * cov.b - cov.c * cov.c;
    const double d = det_g * det_g;
    double disc = delta * delta - 4.0 * d;
    if (disc < 0) disc = 0;  // degenerate nu1 == nu2
    const double root = std::sqrt(disc);
    double nu1 = std::sqrt(std::max((delta + root) / 2.0, 0.0));
    double nu2 = std::sqrt(std::max((delta - root) / 2.0, 0.0));
    if (nu2 < 1.0 - kPhysSlack)
        throw physicality_error("non-physical covariance: nu2=" + std::to_string(nu2));
    return {nu1, nu2};
}

double g_entropy(double nu) {
    if (nu < 1.0 - kPhysSlack)
        throw numeric_error("g_entropy domain: nu=" + std::to_string(nu) + " < 1");
    if (nu <= 1.0) return 0.0;
    return xlog2x((nu + 1.0) / 2.0) - xlog2x((nu - 1.0) / 2.0);
}

namespace {

// Symplectic spectrum of a (2n x 2n) covariance matrix from the eigenvalues of
// Omega*Gamma (purely imaginary, +/- i*nu).
std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& gamma) {
    const auto n = gamma.rows();
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index m = 0; m + 1 < n; m += 2) {
        omega(m, m + 1) = 1.0;
        omega(m + 1, m) = -1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(omega * gamma, false);
    std::vector<double> nus;
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = std::abs(solver.eigenvalues()[i].imag());
        if (v > 0) nus.push_back(v);
    }
    std::sort(nus.begin(), nus.end(), std::greater<>());
    std::vector<double> out;
    for (std::size_t i = 0; i < nus.size(); i += 2) out.push_back(nus[i]);  // pairs +/- i*nu
    return out;
}

double chi_untrusted(double V_A, double t_g, double xi_g, double eta, double v_el,
                     double z_tms_va) {
    if (eta < 1.0) {
        xi_g = xi_g + (1.0 - eta + v_el) / (eta * t_g);
        t_g = eta * t_g;
    } else if (v_el > 0.0) {
        xi_g = xi_g + v_el / t_g;
    }
    TwoModeCov cov{V_A + 1.0, 1.0 + t_g * V_A + t_g * xi_g, std::sqrt(t_g) * z_tms_va};
    auto [nu1, nu2] = symplectic_eigenvalues(cov);
    const double nu_cond = cov.a - cov.c * cov.c / (cov.b + 1.0);
    return g_entropy(nu1) + g_entropy(nu2) - g_entropy(nu_cond);
}

double chi_trusted(double V_A, double t_g, double xi_g, double eta, double v_el,
                   double z_tms_va) {
    TwoModeCov cov{V_A + 1.0, 1.0 + t_g * V_A + t_g * xi_g, std::sqrt(t_g) * z_tms_va};
    auto [nu1, nu2] = symplectic_eigenvalues(cov);
    const double s_e = g_entropy(nu1) + g_entropy(nu2);

    const bool unit_eta = eta >= 1.0 - 1e-12;
    if (unit_eta && v_el <= 0.0) {
        // ideal heterodyne is rank-one, so the conditional (A,E) state is
        // pure and S(E|y) = S(A|y)
        const double nu_cond = cov.a - cov.c * cov.c / (cov.b + 1.0);
        return s_e - g_entropy(nu_cond);
    }

    const double v = unit_eta ? 1.0 : 1.0 + 2.0 * v_el / (1.0 - eta);
    if (unit_eta || v > 100.0) {
        // Near eta = 1 the ancilla variance v blows up and the 6x6 route below
        // loses precision, so condition Eve's own modes instead. The detector
        // output is y' = het(sqrt(eta) B + sqrt(1-eta) F0) with F0 independent
        // of (A, B, E), so Eve's conditional only needs
        //   Var(B') = eta*b + (1 - eta) + 2*v_el,  cov(E, B') = sqrt(eta) cov(E, B),
        // exact at any eta and continuous into eta = 1. Eve = (reflected arm,
        // EPR partner) of the channel noise source of variance w,
        // (1-t) w = 1 - t + t*xi_g.
        const double t = std::min(t_g, 1.0 - 1e-9);  // w is singular at t = 1
        const double V = V_A + 1.0;
        const double w = 1.0 + t * xi_g / (1.0 - t);
        const double bb = t * V + (1.0 - t) * w;
        const double we = std::sqrt(std::max(w * w - 1.0, 0.0));
        const Eigen::Matrix2d i2 = Eigen::Matrix2d::Identity();
        Eigen::Matrix2d zz;
        zz << 1, 0, 0, -1;
        Eigen::MatrixXd eve = Eigen::MatrixXd::Zero(4, 4);  // (E1, E2)
        eve.block<2, 2>(0, 0) = ((1.0 - t) * V + t * w) * i2;
        eve.block<2, 2>(2, 2) = w * i2;
        eve.block<2, 2>(0, 2) = std::sqrt(t) * we * zz;
        eve.block<2, 2>(2, 0) = std::sqrt(t) * we * zz;
        Eigen::MatrixXd cross(4, 2);  // cov((E1,E2), B) before the detector
        cross.topRows<2>() = std::sqrt(t * (1.0 - t)) * (w - V) * i2;
        cross.bottomRows<2>() = std::sqrt(1.0 - t) * we * zz;
        const double den = eta * bb + (1.0 - eta) + 2.0 * v_el + 1.0;
        eve -= (eta / den) * (cross * cross.transpose());
        double s_cond = 0.0;
        for (double nu : symplectic_spectrum(eve)) s_cond += g_entropy(std::max(nu, 1.0));
        return s_e - s_cond;
    }

    // Beamsplitter eta mixes Bob's mode B with arm F0 of an EPR pair (F0, G) of
    // variance v; B' = sqrt(eta) B + sqrt(1-eta) F0 is heterodyned,
    // F' = -sqrt(1-eta) B + sqrt(eta) F0 and G stay with the receiver.
    const double a = cov.a, b = cov.b, c = cov.c;
    const double fg = std::sqrt(std::max(v * v - 1.0, 0.0));

    const double bp = eta * b + (1.0 - eta) * v;              // Var B'
    const double fp = (1.0 - eta) * b + eta * v;              // Var F'
    const double c_ab = std::sqrt(eta) * c;                   // A-B' (sigma_z)
    const double c_af = -std::sqrt(1.0 - eta) * c;            // A-F' (sigma_z)
    const double c_bf = std::sqrt(eta * (1.0 - eta)) * (v - b);  // B'-F' (I2)
    const double c_bg = std::sqrt(1.0 - eta) * fg;            // B'-G (sigma_z)
    const double c_fg = std::sqrt(eta) * fg;                  // F'-G (sigma_z)

    // Condition (A, F', G) on heterodyne of B': Gamma - C (bp+1)^-1 C^T.
    // All cross blocks with B' are diagonal or sigma_z, so the algebra stays in
    // scalar (I2 / sigma_z) coefficients per 2x2 block.
    const double d = bp + 1.0;
    const double a_c = a - c_ab * c_ab / d;
    const double f_c = fp - c_bf * c_bf / d;
    const double g_c = v - c_bg * c_bg / d;
    // sigma_z*sigma_z = I2, so the conditioned A-G block lands on I2 while
    // A-F' and F'-G stay on sigma_z.
    const double af_c = c_af - c_ab * c_bf / d;
    const double ag_c = -c_ab * c_bg / d;
    const double fg_c = c_fg - c_bf * c_bg / d;

    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(6, 6);
    const Eigen::Matrix2d i2 = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d sz;
    sz << 1, 0, 0, -1;
    gamma.block<2, 2>(0, 0) = a_c * i2;
    gamma.block<2, 2>(2, 2) = f_c * i2;
    gamma.block<2, 2>(4, 4) = g_c * i2;
    gamma.block<2, 2>(0, 2) = af_c * sz;
    gamma.block<2, 2>(2, 0) = af_c * sz;
    gamma.block<2, 2>(0, 4) = ag_c * i2;
    gamma.block<2, 2>(4, 0) = ag_c * i2;
    gamma.block<2, 2>(2, 4) = fg_c * sz;
    gamma.block<2, 2>(4, 2) = fg_c * sz;

    double s_cond = 0.0;
    for (double nu : symplectic_spectrum(gamma)) s_cond += g_entropy(std::max(nu, 1.0));
    return s_e - s_cond;
}

}  // namespace

double holevo_bound(double V_A, double T_G, double xi_G, const DetectorModel& det) {
    if (!(V_A > 0.0)) throw physicality_error("holevo_bound: V_A must be > 0");
    if (!(T_G > 0.0) || T_G > 1.0)
        throw physicality_error("holevo_bound: T_G must be in (0,1], got " + std::to_string(T_G));
    if (xi_G < 0.0)
        throw physicality_error("holevo_bound: xi_G < 0 (" + std::to_string(xi_G) + ")");
    validate(det);
    const double z_tms_va = std::sqrt(V_A * V_A + 2.0 * V_A);
    double chi = det.trusted ? chi_trusted(V_A, T_G, xi_G, det.eta, det.v_el, z_tms_va)
                             : chi_untrusted(V_A, T_G, xi_G, det.eta, det.v_el, z_tms_va);
    return std::max(chi, 0.0);
}

}  // namespace cvqkd
