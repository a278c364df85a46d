#include "cvqkd/channel.hpp"

#include <cmath>
#include <string>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {
void validate_channel(double T, double xi) {
    if (!(T > 0.0) || T > 1.0)
        throw physicality_error("channel T must be in (0,1], got " + std::to_string(T));
    if (!(xi >= 0.0)) throw physicality_error("channel xi must be >= 0, got " + std::to_string(xi));
}

double draw_noise(NoiseShape shape, double sd, Stream& rng) {
    switch (shape) {
        case NoiseShape::gaussian: return sd * rng.normal();
        case NoiseShape::uniform: return rng.uniform_sd(sd);
        case NoiseShape::laplace: return rng.laplace_sd(sd);
    }
    return 0.0;
}
}  // namespace

ChannelModel::ChannelModel(double T_, double xi_, NoiseShape shape_)
    : T(T_), xi(xi_), shape(shape_), g_x(std::sqrt(T_)), g_p(std::sqrt(T_)) {
    validate_channel(T, xi);
}

ChannelModel::ChannelModel(double T_, double xi_, NoiseShape shape_, double g_x_, double g_p_)
    : T(T_), xi(xi_), shape(shape_), g_x(g_x_), g_p(g_p_) {
    validate_channel(T, xi);
    if (!(g_x > 0.0) || !(g_p > 0.0)) throw physicality_error("channel gains must be > 0");
    if (g_x * g_x > 1.0 + 1e-12 || g_p * g_p > 1.0 + 1e-12)
        throw physicality_error("channel gains must satisfy g^2 <= 1");
}

double distance_to_transmission(double d_km, double loss_db_per_km) {
    if (d_km < 0.0) throw physicality_error("distance must be >= 0");
    return std::pow(10.0, -loss_db_per_km * d_km / 10.0);
}

MeasurementRecord transmit_block(const ModulationPoint& p, const ChannelModel& ch,
                                 const DetectorModel& det, Stream& rng) {
    MeasurementRecord rec;
    rec.block = p.block;
    for (int i = 0; i < 8; ++i) {
        const double g = (i % 2 == 0) ? ch.g_x : ch.g_p;
        const double mean = std::sqrt(det.eta / 2.0) * g * p.q[i];
        const double var_z = 1.0 + det.eta * g * g * ch.xi / 2.0 + det.v_el;
        rec.y[i] = mean + draw_noise(ch.shape, std::sqrt(var_z), rng);
    }
    return rec;
}

std::vector<MeasurementRecord> transmit(std::span<const ModulationPoint> points,
                                        const ChannelModel& ch, const DetectorModel& det,
                                        std::uint64_t master_seed, int workers) {
    validate(det);
    std::vector<MeasurementRecord> out(points.size());
    parallel_for(static_cast<std::int64_t>(points.size()), workers, [&](std::int64_t i) {
        Stream rng = block_stream(master_seed, points[i].block, StreamPurpose::channel);
        out[static_cast<std::size_t>(i)] = transmit_block(points[static_cast<std::size_t>(i)], ch, det, rng);
    });
    return out;
}

double effective_snr(double V_A, const ChannelModel& ch, const DetectorModel& det) {
    if (V_A < 0.0) throw numeric_error("effective_snr: V_A must be >= 0");
    validate(det);
    const double t_eff = ch.g_x * ch.g_p;
    return (det.eta * t_eff * V_A / 2.0) / (1.0 + det.eta * t_eff * ch.xi / 2.0 + det.v_el);
}

}  // namespace cvqkd
