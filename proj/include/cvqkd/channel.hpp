#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvqkd/gaussian.hpp"
#include "cvqkd/modulation.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd {

enum class NoiseShape { gaussian, uniform, laplace };

// Linear channel X_out = g_X X_in + B_X, P_out = g_P P_in + B_P with added
// noises independent of the input. T = g^2 is the transmission; xi is the
// excess noise referred to the channel input, so the mode-level added-noise
// variance is 1 + T*xi (SNU) regardless of shape.
struct ChannelModel {
    double T = 1.0;
    double xi = 0.0;
    NoiseShape shape = NoiseShape::gaussian;
    double g_x;  // defaults to sqrt(T)
    double g_p;

    ChannelModel(double T_, double xi_, NoiseShape shape_ = NoiseShape::gaussian);
    ChannelModel(double T_, double xi_, NoiseShape shape_, double g_x_, double g_p_);

    // added-noise variance at the mode level (vacuum + excess), per quadrature
    double added_noise_variance(double gain) const { return 1.0 + gain * gain * xi; }
};

// Heterodyne outcomes for one 8-dim block, same coordinate layout as
// ModulationPoint.
struct MeasurementRecord {
    std::array<double, 8> y{};
    std::int64_t block = 0;
};

// T = 10^(-loss*d/10); default fiber loss 0.2 dB/km.
double distance_to_transmission(double d_km, double loss_db_per_km = 0.2);

// Heterodyne measurement model, per coordinate:
//   y = sqrt(eta/2) * g * q + z,  Var(z) = 1 + eta*g^2*xi/2 + v_el,  E[z] = 0,
// with g = g_x on x-coordinates (even indices) and g_p on p-coordinates, and z
// drawn from the configured shape at matched variance. For g = sqrt(T) this is
// y = sqrt(eta*T/2)*q + z with Var(z) = 1 + eta*T*xi/2 + v_el, and
// Var(y) = eta*T*(V_A+xi)/2 + 1 + v_el.
MeasurementRecord transmit_block(const ModulationPoint& p, const ChannelModel& ch,
                                 const DetectorModel& det, Stream& rng);

// Whole-sequence variant; one derived stream per block (worker-independent).
std::vector<MeasurementRecord> transmit(std::span<const ModulationPoint> points,
                                        const ChannelModel& ch, const DetectorModel& det,
                                        std::uint64_t master_seed, int workers = 1);

// s = (eta*T*V_A/2) / (1 + eta*T*xi/2 + v_el), the SNR of the coordinate-wise
// measurement channel (uses T = g_x*g_p for asymmetric gains).
double effective_snr(double V_A, const ChannelModel& ch, const DetectorModel& det);

}  // namespace cvqkd
