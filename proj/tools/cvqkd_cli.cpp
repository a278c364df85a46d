// Command-line front end: end-to-end protocol simulation, figure tables,
// reconciliation benchmarks, and standalone estimation / key-rate runs.
// Every number written out comes from a library call; the CLI only formats.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/errors.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/figures.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/ldpc.hpp"
#include "cvqkd/modulation.hpp"
#include "cvqkd/reconciliation.hpp"
#include "cvqkd/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cvqkd;

namespace {

struct RunConfig {
    std::uint64_t seed = 12345;
    int workers = 0;  // 0 = hardware concurrency

    // protocol
    double V_A = 1.0;
    std::int64_t blocks = 8192;
    std::string code_id = "r12_2048";
    int repetition = 3;
    double beta = 0.8;
    std::string rate_mode = "finite";  // "finite" | "asymptotic"

    // channel
    bool has_distance = false;
    double distance_km = 0.0;
    double T = 0.1;
    double xi = 0.01;
    NoiseShape shape = NoiseShape::gaussian;
    bool has_gains = false;
    double g_x = 0.0, g_p = 0.0;

    DetectorModel det{0.6, 0.0, true};
    EpsilonBudget eps;
    double pe_fraction = 0.5;

    // recon-bench
    std::vector<double> bench_snrs{0.25, 0.5, 1.0};
    int bench_frames = 6;
};

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw usage_error("config: unknown key \"" + key + "\" in " + where);
    }
}

NoiseShape parse_shape(const std::string& s) {
    if (s == "gaussian") return NoiseShape::gaussian;
    if (s == "uniform") return NoiseShape::uniform;
    if (s == "laplace") return NoiseShape::laplace;
    throw usage_error("config: noise_shape must be gaussian|uniform|laplace, got \"" + s + "\"");
}

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw usage_error(std::string("config: malformed JSON: ") + e.what());
    }
    try {
        check_keys(j, {"seed", "workers", "protocol", "channel", "detector", "epsilons",
                       "estimation", "bench"},
                   "top level");
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
        if (j.contains("protocol")) {
            const json& p = j.at("protocol");
            check_keys(p, {"V_A", "blocks", "code", "repetition", "beta", "rate_mode"},
                       "protocol");
            if (p.contains("V_A")) cfg.V_A = p.at("V_A").get<double>();
            if (p.contains("blocks")) cfg.blocks = p.at("blocks").get<std::int64_t>();
            if (p.contains("code")) cfg.code_id = p.at("code").get<std::string>();
            if (p.contains("repetition")) cfg.repetition = p.at("repetition").get<int>();
            if (p.contains("beta")) cfg.beta = p.at("beta").get<double>();
            if (p.contains("rate_mode")) cfg.rate_mode = p.at("rate_mode").get<std::string>();
        }
        if (j.contains("channel")) {
            const json& c = j.at("channel");
            check_keys(c, {"distance_km", "T", "xi", "noise_shape", "g_x", "g_p"}, "channel");
            if (c.contains("distance_km") && c.contains("T"))
                throw usage_error("config: give channel.distance_km or channel.T, not both");
            if (c.contains("distance_km")) {
                cfg.has_distance = true;
                cfg.distance_km = c.at("distance_km").get<double>();
            }
            if (c.contains("T")) cfg.T = c.at("T").get<double>();
            if (c.contains("xi")) cfg.xi = c.at("xi").get<double>();
            if (c.contains("noise_shape"))
                cfg.shape = parse_shape(c.at("noise_shape").get<std::string>());
            if (c.contains("g_x") != c.contains("g_p"))
                throw usage_error("config: g_x and g_p must be given together");
            if (c.contains("g_x")) {
                cfg.has_gains = true;
                cfg.g_x = c.at("g_x").get<double>();
                cfg.g_p = c.at("g_p").get<double>();
            }
        }
        if (j.contains("detector")) {
            const json& d = j.at("detector");
            check_keys(d, {"eta", "v_el", "trusted"}, "detector");
            if (d.contains("eta")) cfg.det.eta = d.at("eta").get<double>();
            if (d.contains("v_el")) cfg.det.v_el = d.at("v_el").get<double>();
            if (d.contains("trusted")) cfg.det.trusted = d.at("trusted").get<bool>();
        }
        if (j.contains("epsilons")) {
            const json& e = j.at("epsilons");
            check_keys(e, {"eps_PE", "eps_bar", "eps_PA"}, "epsilons");
            if (e.contains("eps_PE")) cfg.eps.eps_PE = e.at("eps_PE").get<double>();
            if (e.contains("eps_bar")) cfg.eps.eps_bar = e.at("eps_bar").get<double>();
            if (e.contains("eps_PA")) cfg.eps.eps_PA = e.at("eps_PA").get<double>();
        }
        if (j.contains("estimation")) {
            const json& e = j.at("estimation");
            check_keys(e, {"fraction"}, "estimation");
            if (e.contains("fraction")) cfg.pe_fraction = e.at("fraction").get<double>();
        }
        if (j.contains("bench")) {
            const json& b = j.at("bench");
            check_keys(b, {"snrs", "frames"}, "bench");
            if (b.contains("snrs")) cfg.bench_snrs = b.at("snrs").get<std::vector<double>>();
            if (b.contains("frames")) cfg.bench_frames = b.at("frames").get<int>();
        }
    } catch (const json::exception& e) {
        throw usage_error(std::string("config: wrong value type: ") + e.what());
    }
    if (cfg.rate_mode != "finite" && cfg.rate_mode != "asymptotic")
        throw usage_error("config: rate_mode must be finite|asymptotic");
    if (!(cfg.pe_fraction > 0.0) || !(cfg.pe_fraction < 1.0))
        throw usage_error("config: estimation.fraction must be in (0,1)");
    if (cfg.blocks < 2) throw usage_error("config: protocol.blocks must be >= 2");
    if (cfg.repetition < 1) throw usage_error("config: protocol.repetition must be >= 1");
    return cfg;
}

ChannelModel make_channel(const RunConfig& cfg) {
    const double T = cfg.has_distance ? distance_to_transmission(cfg.distance_km) : cfg.T;
    if (cfg.has_gains) return ChannelModel(T, cfg.xi, cfg.shape, cfg.g_x, cfg.g_p);
    return ChannelModel(T, cfg.xi, cfg.shape);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path.string());
    out << text;
    if (!out) throw io_error("write failed: " + path.string());
}

void write_key_file(const fs::path& path, const std::vector<std::uint8_t>& bits) {
    std::vector<char> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<char>(1 << (i % 8));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failed: " + path.string());
}

json estimation_to_json(const EstimationResult& est, const DetectorModel& det) {
    const PointEstimates pe = point_estimates(est, det);
    return json{{"t_hat", est.t_hat},
                {"sigma2_hat", est.sigma2_hat},
                {"n_samples", est.n_samples},
                {"T_hat", pe.T},
                {"xi_hat", pe.xi},
                {"t_low", est.t_low},
                {"t_high", est.t_high},
                {"sigma2_low", est.sigma2_low},
                {"sigma2_high", est.sigma2_high},
                {"T_min", est.T_min},
                {"xi_max", est.xi_max},
                {"eps_PE", est.epsilon_PE},
                {"inconclusive", est.inconclusive}};
}

json stats_to_json(const ReconcileStats& st) {
    return json{{"frames", st.frames},
                {"successes", st.successes},
                {"frame_error_rate", st.frame_error_rate},
                {"blocks_used", st.blocks_used},
                {"blocks_discarded", st.blocks_discarded},
                {"snr", st.snr},
                {"capacity", st.capacity},
                {"measured_beta", st.measured_beta},
                {"beta_code", st.beta_code},
                {"leaked_bits_per_frame", st.leaked_bits_per_frame}};
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, const fs::path& out_dir) {
    const ChannelModel ch = make_channel(cfg);
    validate(cfg.det);

    // Alice prepares; Bob measures. One derived stream per block.
    std::vector<ModulationPoint> points(static_cast<std::size_t>(cfg.blocks));
    parallel_for(cfg.blocks, cfg.workers, [&](std::int64_t i) {
        Stream rng = block_stream(cfg.seed, i, StreamPurpose::sample);
        points[static_cast<std::size_t>(i)] = sample_sphere_point(cfg.V_A, rng);
        points[static_cast<std::size_t>(i)].block = i;
    });
    std::vector<MeasurementRecord> records = transmit(points, ch, cfg.det, cfg.seed, cfg.workers);

    // Disclose an evenly spread pe_fraction of the blocks for estimation.
    std::vector<std::uint8_t> disclosed(static_cast<std::size_t>(cfg.blocks), 0);
    std::int64_t n_disclosed = 0;
    for (std::int64_t i = 0; i < cfg.blocks; ++i) {
        const double lo = std::floor(static_cast<double>(i) * cfg.pe_fraction);
        const double hi = std::floor(static_cast<double>(i + 1) * cfg.pe_fraction);
        if (hi > lo) {
            disclosed[static_cast<std::size_t>(i)] = 1;
            ++n_disclosed;
        }
    }
    if (n_disclosed == 0 || n_disclosed == cfg.blocks)
        throw usage_error("estimation.fraction leaves no blocks for estimation or key");

    std::vector<double> xs, ys;
    xs.reserve(static_cast<std::size_t>(n_disclosed) * 8);
    ys.reserve(static_cast<std::size_t>(n_disclosed) * 8);
    std::vector<ModulationPoint> key_points;
    std::vector<MeasurementRecord> key_records;
    for (std::int64_t i = 0; i < cfg.blocks; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (disclosed[idx]) {
            for (int k = 0; k < 8; ++k) {
                xs.push_back(points[idx].q[k]);
                ys.push_back(records[idx].y[k]);
            }
        } else {
            key_points.push_back(points[idx]);
            key_records.push_back(records[idx]);
        }
    }

    EstimationResult est = estimate(xs, ys);
    est = confidence_bounds(est, cfg.eps.eps_PE, cfg.det, cfg.V_A);

    // Reconcile the undisclosed blocks with the estimated channel.
    CodeSpec code{&shipped_code(cfg.code_id), cfg.repetition};
    ReconcileResult rec =
        reconcile(key_records, key_points, code, est.t_hat, est.sigma2_hat,
                  derive_seed(cfg.seed, 0x7265636Full), cfg.workers);
    if (rec.alice_bits != rec.bob_bits)
        throw numeric_error("invariant breach: verified frames differ between the two sides");

    // Rates: N counts all quadrature symbols, n the undisclosed ones.
    const double N_total = static_cast<double>(cfg.blocks) * 8.0;
    const double n_key = static_cast<double>(cfg.blocks - n_disclosed) * 8.0;
    KeyRateReport report;
    if (cfg.rate_mode == "finite") {
        report = finite_rate(cfg.V_A, est, cfg.det, cfg.beta, N_total, n_key, cfg.eps.eps_bar,
                             cfg.eps.eps_PA);
    } else {
        const PointEstimates pe = point_estimates(est, cfg.det);
        if (!(pe.T > 0.0)) throw estimation_error("estimated transmission is zero");
        report = asymptotic_rate(cfg.V_A, pe.T, pe.xi, cfg.det, cfg.beta);
    }
    const double k_per_coord =
        cfg.rate_mode == "finite" ? report.K_finite_clamped : report.K_asymptotic_clamped;

    // Secret key length: rate (per quadrature symbol) times the symbols that
    // survived reconciliation.
    const double coords_delivered =
        static_cast<double>(rec.stats.successes) * code.frame_channel_bits();
    const auto secret_bits = static_cast<std::size_t>(
        std::max(0.0, std::floor(k_per_coord * coords_delivered)));

    std::vector<std::uint8_t> alice_key, bob_key;
    if (secret_bits > 0) {
        const std::uint64_t pa_seed = derive_seed(cfg.seed, 0x70616D70ull);
        alice_key = privacy_amplification(rec.alice_bits, pa_seed, secret_bits);
        bob_key = privacy_amplification(rec.bob_bits, pa_seed, secret_bits);
        if (alice_key != bob_key)
            throw numeric_error("invariant breach: amplified keys differ");
    }

    fs::create_directories(out_dir);
    write_key_file(out_dir / "alice_key.bin", alice_key);
    write_key_file(out_dir / "bob_key.bin", bob_key);

    json out{{"rate_report", json::parse(report_to_json(report))},
             {"estimation", estimation_to_json(est, cfg.det)},
             {"reconciliation", stats_to_json(rec.stats)},
             {"key",
              {{"secret_bits", secret_bits},
               {"rate_mode", cfg.rate_mode},
               {"rate_per_coordinate", k_per_coord},
               {"reconciled_bits", rec.bob_bits.size()},
               {"disclosed_blocks", n_disclosed}}}};
    write_text(out_dir / "report.json", out.dump(2) + "\n");

    if (secret_bits == 0) {
        std::cout << "no positive rate: secret key length is zero\n";
    } else {
        std::cout << "secret key: " << secret_bits << " bits ("
                  << rec.stats.successes << "/" << rec.stats.frames
                  << " frames reconciled)\n";
    }
    return 0;
}

int cmd_figure(int which, const fs::path& out_dir) {
    Table t;
    std::string name;
    switch (which) {
        case 1: t = figure1(); name = "fig1.csv"; break;
        case 2: t = figure2(); name = "fig2.csv"; break;
        case 3: t = figure3(); name = "fig3.csv"; break;
        default: throw usage_error("figure id must be 1, 2 or 3");
    }
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw io_error("cannot write " + (out_dir / name).string());
    write_csv(t, out);
    if (!out) throw io_error("write failed: " + (out_dir / name).string());
    std::cout << (out_dir / name).string() << ": " << t.rows.size() << " rows\n";
    return 0;
}

int cmd_recon_bench(const RunConfig& cfg, const fs::path& out_dir) {
    CodeSpec code{&shipped_code(cfg.code_id), cfg.repetition};
    const std::int64_t blocks =
        static_cast<std::int64_t>(cfg.bench_frames) * code.blocks_per_frame();

    Table t;
    t.columns = {"snr", "frames", "fer", "measured_beta", "beta_code", "leak_bits_per_frame"};
    for (double s : cfg.bench_snrs) {
        if (!(s > 0.0)) throw usage_error("bench snr values must be > 0");
        // clean channel with V_A = 2 s hits SNR s exactly: s = V_A/2 / 1
        const double va = 2.0 * s;
        ChannelModel ch(1.0, 0.0);
        DetectorModel det{1.0, 0.0, true};
        std::vector<ModulationPoint> pts(static_cast<std::size_t>(blocks));
        parallel_for(blocks, cfg.workers, [&](std::int64_t i) {
            Stream rng = block_stream(cfg.seed, i, StreamPurpose::sample);
            pts[static_cast<std::size_t>(i)] = sample_sphere_point(va, rng);
            pts[static_cast<std::size_t>(i)].block = i;
        });
        auto recs = transmit(pts, ch, det, cfg.seed, cfg.workers);
        ReconcileResult rec = reconcile(recs, pts, code, std::sqrt(0.5), 1.0,
                                        derive_seed(cfg.seed, 0xB3ull), cfg.workers);
        t.rows.push_back({s, static_cast<double>(rec.stats.frames), rec.stats.frame_error_rate,
                          rec.stats.measured_beta, rec.stats.beta_code,
                          static_cast<double>(rec.stats.leaked_bits_per_frame)});
    }
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "recon_bench.csv", std::ios::binary);
    if (!out) throw io_error("cannot write recon_bench.csv");
    write_csv(t, out);
    std::cout << (out_dir / "recon_bench.csv").string() << ": " << t.rows.size() << " rows\n";
    return 0;
}

int cmd_keyrate(const RunConfig& cfg, const fs::path& out_dir) {
    const ChannelModel ch = make_channel(cfg);
    KeyRateReport report;
    if (cfg.rate_mode == "finite") {
        const double N_total = static_cast<double>(cfg.blocks) * 8.0;
        const double n_pe = N_total * cfg.pe_fraction;
        const double n_key = N_total - n_pe;
        EstimationResult est = synthetic_estimate(ch.T, cfg.xi, cfg.det, cfg.V_A, n_pe);
        est = confidence_bounds(est, cfg.eps.eps_PE, cfg.det, cfg.V_A);
        report = finite_rate(cfg.V_A, est, cfg.det, cfg.beta, N_total, n_key, cfg.eps.eps_bar,
                             cfg.eps.eps_PA);
    } else {
        report = asymptotic_rate(cfg.V_A, ch.T, cfg.xi, cfg.det, cfg.beta);
    }
    const std::string text = report_to_json(report);
    fs::create_directories(out_dir);
    write_text(out_dir / "report.json", text + "\n");
    std::cout << text << "\n";
    return 0;
}

int cmd_estimate(const RunConfig& cfg, const fs::path& out_dir) {
    const ChannelModel ch = make_channel(cfg);
    std::vector<ModulationPoint> pts(static_cast<std::size_t>(cfg.blocks));
    parallel_for(cfg.blocks, cfg.workers, [&](std::int64_t i) {
        Stream rng = block_stream(cfg.seed, i, StreamPurpose::sample);
        pts[static_cast<std::size_t>(i)] = sample_sphere_point(cfg.V_A, rng);
        pts[static_cast<std::size_t>(i)].block = i;
    });
    auto recs = transmit(pts, ch, cfg.det, cfg.seed, cfg.workers);
    std::vector<double> xs, ys;
    xs.reserve(pts.size() * 8);
    ys.reserve(pts.size() * 8);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (int k = 0; k < 8; ++k) {
            xs.push_back(pts[i].q[k]);
            ys.push_back(recs[i].y[k]);
        }
    }
    EstimationResult est = estimate(xs, ys);
    est = confidence_bounds(est, cfg.eps.eps_PE, cfg.det, cfg.V_A);
    const std::string text = estimation_to_json(est, cfg.det).dump(2);
    fs::create_directories(out_dir);
    write_text(out_dir / "estimate.json", text + "\n");
    std::cout << text << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"8-dimensional spherical-modulation CV-QKD simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::int64_t seed_flag = -1;
    int workers_flag = -1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed_flag, "override the config seed");
    app.add_option("--workers", workers_flag, "worker threads (0 = all cores)");
    app.add_option("--out", out_dir, "output directory");

    CLI::App* sim = app.add_subcommand("simulate", "run the full protocol once");
    int figure_id = 0;
    CLI::App* fig = app.add_subcommand("figure", "write figure data as CSV");
    fig->add_option("id", figure_id, "figure number (1, 2 or 3)")->required();
    CLI::App* bench = app.add_subcommand("recon-bench", "reconciliation FER/beta vs SNR");
    CLI::App* rate = app.add_subcommand("keyrate", "key-rate report without simulation");
    CLI::App* est = app.add_subcommand("estimate", "simulate and estimate channel parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; any parse failure is usage
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);
        if (workers_flag >= 0) cfg.workers = workers_flag;
        const fs::path out(out_dir);

        if (sim->parsed()) return cmd_simulate(cfg, out);
        if (fig->parsed()) return cmd_figure(figure_id, out);
        if (bench->parsed()) return cmd_recon_bench(cfg, out);
        if (rate->parsed()) return cmd_keyrate(cfg, out);
        if (est->parsed()) return cmd_estimate(cfg, out);
        throw usage_error("no subcommand given");
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const numeric_error& e) {  // physicality and estimation errors too
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
