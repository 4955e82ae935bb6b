// wirssi - bistatic RSSI sensing toolkit
//
// Subcommands: simulate, track, calibrate, features, eval.
// Exit codes: 0 success, 2 config error, 3 data error, 4 insufficient data /
// no temporal overlap.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "wirssi/errors.hpp"
#include "wirssi/io.hpp"
#include "wirssi/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wirssi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInsufficient = 4;

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid config JSON in " + path + ": " + e.what());
    }
    return j;
}

// config file fields are defaults; explicit flags override them
double jget(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}
int jget(const json& j, const char* key, int fallback) {
    return j.contains(key) ? j.at(key).get<int>() : fallback;
}
std::string jget(const json& j, const char* key, const std::string& fallback) {
    return j.contains(key) ? j.at(key).get<std::string>() : fallback;
}

PreprocessParams preprocess_from(const json& cfg) {
    PreprocessParams p;
    const json j = cfg.value("preprocess", json::object());
    const std::string mode = jget(j, "mode", std::string("auto"));
    if (mode == "auto")
        p.mode = ClutterMode::auto_select;
    else if (mode == "cpi_mean")
        p.mode = ClutterMode::cpi_mean;
    else if (mode == "ema")
        p.mode = ClutterMode::ema;
    else
        throw ConfigError("preprocess.mode must be auto, cpi_mean or ema");
    p.cpi_length = static_cast<std::size_t>(jget(j, "cpi_length", 128));
    p.cpi_step = static_cast<std::size_t>(jget(j, "cpi_step", 32));
    p.ema_weight = jget(j, "ema_weight", 0.3);
    p.ema_rate_threshold_hz = jget(j, "ema_rate_threshold_hz", 200.0);
    p.max_hold_gap = static_cast<std::size_t>(jget(j, "max_hold_gap", 5));
    return p;
}

SpectrumConfig spectrum_from(const json& cfg) {
    SpectrumConfig s;
    const json j = cfg.value("spectrum", json::object());
    s.doppler_bins = jget(j, "doppler_bins", 128);
    s.doppler_max_hz = jget(j, "doppler_max_hz", 100.0);
    s.aoa_bins = jget(j, "aoa_bins", 64);
    s.zero_doppler_guard_bins = jget(j, "zero_doppler_guard_bins", 2);
    s.detection_threshold_ratio = jget(j, "detection_threshold_ratio", 4.0);
    const std::string win = jget(j, "window", std::string("none"));
    if (win == "none")
        s.window = WindowFunction::none;
    else if (win == "hann")
        s.window = WindowFunction::hann;
    else
        throw ConfigError("spectrum.window must be none or hann");
    const std::string grid = jget(j, "aoa_grid", std::string("uniform_sine"));
    if (grid == "uniform_sine")
        s.aoa_grid = AoaGrid::uniform_sine;
    else if (grid == "uniform_angle")
        s.aoa_grid = AoaGrid::uniform_angle;
    else
        throw ConfigError("spectrum.aoa_grid must be uniform_sine or uniform_angle");
    return s;
}

SmootherConfig smoother_from(const json& cfg) {
    SmootherConfig s;
    const json j = cfg.value("smoother", json::object());
    s.hampel_window = jget(j, "hampel_window", 7);
    s.hampel_threshold = jget(j, "hampel_threshold", 1.0);
    s.sg_window = jget(j, "sg_window", 101);
    s.sg_order = jget(j, "sg_order", 2);
    return s;
}

TrackingParams tracking_from(const json& cfg) {
    TrackingParams p;
    p.preprocess = preprocess_from(cfg);
    p.spectrum = spectrum_from(cfg);
    p.smoother = smoother_from(cfg);
    p.max_bistatic_range_m = jget(cfg, "max_bistatic_range_m", kDefaultMaxBistaticRangeM);
    return p;
}

BistaticGeometry geometry_from(const json& cfg, const std::string& flag_path) {
    const std::string path = !flag_path.empty() ? flag_path : jget(cfg, "geometry", std::string());
    if (path.empty()) return default_geometry();
    return io::read_geometry(path);
}

json geometry_echo(const BistaticGeometry& geo) {
    return json{{"tx_m", {geo.tx_position().x, geo.tx_position().y}},
                {"rx_m", {geo.rx_origin().x, geo.rx_origin().y}},
                {"array_axis", {geo.array_axis().x, geo.array_axis().y}},
                {"num_antennas", geo.num_antennas()},
                {"antenna_spacing_m", geo.antenna_spacing_m()},
                {"carrier_hz", geo.carrier_hz()},
                {"theta_s_deg", geo.theta_s_rad() * 180.0 / 3.14159265358979323846},
                {"baseline_m", geo.baseline_m()},
                {"geometry_hash", io::geometry_hash(geo)}};
}

void print_timings(const StageTimings& t) {
    auto line = [](const char* name, const StageTimings::Stat& s) {
        std::cout << "  " << name << ": mean " << s.mean_ms << " ms, p99 " << s.p99_ms << " ms\n";
    };
    std::cout << "per-CPI processing time over " << t.cpis << " CPIs:\n";
    line("preprocess", t.preprocess);
    line("spectrum  ", t.spectrum);
    line("ranging   ", t.ranging);
    line("total     ", t.total);
}

int run_simulate(const std::string& config_path, const std::string& preset_name,
                 const std::string& geometry_path, double duration, std::uint64_t seed,
                 double quant_step, double noise_floor, double planted_gamma, int subcarriers,
                 double half_span, double speed, const std::string& out_trace,
                 const std::string& out_truth, const std::string& out_manifest,
                 const std::string& out_csi) {
    const json cfg = load_config(config_path);
    const auto geo = geometry_from(cfg, geometry_path);

    auto preset = make_preset(preset_name, geo);
    preset.planted_gamma = planted_gamma > 0.0 ? planted_gamma : jget(cfg, "planted_gamma", 0.3);
    preset.speed_mps = speed > 0.0 ? speed : jget(cfg, "speed_mps", 1.0);
    preset.channel.rssi_quantization_step_db =
        quant_step > 0.0 ? quant_step : jget(cfg, "rssi_quantization_step_db", 1.0);
    if (noise_floor < 1e9) preset.channel.noise_floor_db = noise_floor;
    if (subcarriers > 0 || half_span > 0.0) {
        const int count = subcarriers > 0 ? subcarriers : 30;
        const double span = half_span > 0.0 ? half_span : 10e6;
        preset.channel.subcarrier_hz = ChannelConfig::uniform_subcarriers(geo.carrier_hz(), count, span);
    }
    preset.channel.validate();
    if (!(duration > 0.0)) throw ConfigError("duration must be positive");

    const auto cap = simulate_preset(preset, geo, duration, seed);

    io::write_trace_csv(out_trace, trace_of(cap, 1.0 / preset.channel.sample_interval_s));
    io::write_trajectory_csv(out_truth, cap.ground_truth);
    json manifest;
    manifest["preset"] = preset.name;
    manifest["duration_s"] = duration;
    manifest["seed"] = seed;
    manifest["speed_mps"] = preset.speed_mps;
    manifest["planted_gamma_target"] = preset.planted_gamma;
    manifest["true_gamma"] = cap.true_gamma;
    manifest["gamma_s"] = preset.gamma_s;
    manifest["geometry"] = geometry_echo(geo);
    manifest["channel"] = {{"subcarriers", preset.channel.subcarrier_hz.size()},
                           {"subcarrier_min_hz", preset.channel.subcarrier_hz.front()},
                           {"subcarrier_max_hz", preset.channel.subcarrier_hz.back()},
                           {"sample_interval_s", preset.channel.sample_interval_s},
                           {"power_scale", preset.channel.power_scale},
                           {"noise_floor_db", preset.channel.noise_floor_db},
                           {"agc_walk_sigma_db", preset.channel.agc.walk_sigma_db},
                           {"rssi_quantization_step_db", preset.channel.rssi_quantization_step_db}};
    std::ofstream mf(out_manifest);
    if (!mf) throw DataError("cannot open for writing: " + out_manifest);
    mf << manifest.dump(2) << "\n";
    if (!out_csi.empty()) io::write_csi_dump(out_csi, cap.csi);

    std::cout << "simulated " << cap.timestamps.size() << " samples (" << preset.name
              << "), true_gamma " << cap.true_gamma << "\n";
    return kExitOk;
}

int run_track(const std::string& config_path, const std::string& trace_path,
              const std::string& geometry_path, const std::string& calibration_path,
              double gamma_inline, bool force, const std::string& out_raw,
              const std::string& out_smoothed, const std::string& out_timings,
              const std::string& spectrum_dump_dir) {
    const json cfg = load_config(config_path);
    const auto geo = geometry_from(cfg, geometry_path);
    const auto params = tracking_from(cfg);
    params.preprocess.validate();
    params.spectrum.validate(geo.num_antennas());
    params.smoother.validate();

    ReflectionRatio gamma;
    const std::string cal_path =
        !calibration_path.empty() ? calibration_path : jget(cfg, "calibration", std::string());
    if (gamma_inline > 0.0) {
        gamma = {gamma_inline, 1, 0.0};
    } else if (!cal_path.empty()) {
        std::string hash;
        gamma = io::read_calibration(cal_path, &hash);
        if (hash != io::geometry_hash(geo) && !force)
            throw ConfigError("calibration was made under a different geometry (rerun or --force)");
    } else if (cfg.contains("gamma")) {
        gamma = {cfg.at("gamma").get<double>(), 1, 0.0};
    } else {
        throw ConfigError("track needs --calibration or --gamma");
    }

    const auto trace = io::read_trace_csv(trace_path);
    const auto res = run_tracking(trace, geo, gamma, params);

    io::write_trajectory_csv(out_raw, res.raw);
    io::write_trajectory_csv(out_smoothed, res.smoothed);

    if (!spectrum_dump_dir.empty()) {
        fs::create_directories(spectrum_dump_dir);
        // re-run the spectra for the dump; tracking itself stays I/O-free
        std::vector<bool> poisoned;
        GapFillStats gaps;
        const auto filled = regularize_trace(trace, params.preprocess, &poisoned, &gaps);
        const auto windows = preprocess_trace(filled, params.preprocess);
        std::size_t idx = 0;
        for (const auto& w : windows) {
            auto spec = reject_mirror(aoa_fft(doppler_fft(w, params.spectrum), geo, params.spectrum), geo);
            std::ostringstream name;
            name << "cpi_" << idx++ << ".csv";
            io::write_spectrum_csv(fs::path(spectrum_dump_dir) / name.str(), spec);
        }
    }

    std::cout << "CPIs " << res.cpis_total << ", no-target " << res.cpis_no_target
              << ", range drops " << res.drops_range << ", points " << res.raw.points.size()
              << ", held samples " << res.gaps.held_samples << ", poisoned "
              << res.gaps.poisoned_samples << "\n";
    print_timings(res.timings);
    if (!out_timings.empty()) {
        json jt;
        auto stat = [](const StageTimings::Stat& s) {
            return json{{"mean_ms", s.mean_ms}, {"p99_ms", s.p99_ms}};
        };
        jt["cpis"] = res.timings.cpis;
        jt["preprocess"] = stat(res.timings.preprocess);
        jt["spectrum"] = stat(res.timings.spectrum);
        jt["ranging"] = stat(res.timings.ranging);
        jt["total"] = stat(res.timings.total);
        jt["cpis_no_target"] = res.cpis_no_target;
        jt["drops_range"] = res.drops_range;
        std::ofstream f(out_timings);
        if (!f) throw DataError("cannot open for writing: " + out_timings);
        f << jt.dump(2) << "\n";
    }
    return kExitOk;
}

int run_calibrate(const std::string& config_path, const std::string& trace_path,
                  const std::string& truth_path, const std::string& geometry_path,
                  const std::string& out_path) {
    const json cfg = load_config(config_path);
    const auto geo = geometry_from(cfg, geometry_path);
    const auto params = tracking_from(cfg);
    const auto trace = io::read_trace_csv(trace_path);
    const auto truth = io::read_trajectory_csv(truth_path, Trajectory::Kind::ground_truth);
    const auto res = run_calibration(trace, truth, geo, params);
    io::write_calibration(out_path, res.ratio, io::geometry_hash(geo));
    std::cout << "gamma " << res.ratio.gamma << " (median " << res.median_gamma << ", dispersion "
              << res.ratio.dispersion << ") from " << res.cpis_used << " CPIs\n";
    return kExitOk;
}

int run_features_cmd(const std::string& config_path, const std::string& trace_path,
                     const std::string& geometry_path, const std::string& out_path,
                     const std::string& format, bool log_scale, bool keep_mirror) {
    const json cfg = load_config(config_path);
    const auto geo = geometry_from(cfg, geometry_path);
    FeatureParams params;
    params.preprocess = preprocess_from(cfg);
    params.spectrum = spectrum_from(cfg);
    params.reject_mirror = !keep_mirror;
    const auto trace = io::read_trace_csv(trace_path);
    const auto map = run_features(trace, geo, params);
    const bool csv = format == "csv" || (format.empty() && fs::path(out_path).extension() == ".csv");
    if (csv)
        io::write_time_doppler_csv(out_path, map, log_scale);
    else
        io::write_time_doppler_binary(out_path, map, log_scale);
    std::cout << "time-doppler map " << map.values.rows << " x " << map.values.cols << "\n";
    return kExitOk;
}

int run_eval(const std::string& estimate_path, const std::string& truth_path,
             const std::string& out_report, const std::string& out_cdf,
             const std::string& out_errors) {
    const auto est = io::read_trajectory_csv(estimate_path, Trajectory::Kind::smoothed);
    const auto truth = io::read_trajectory_csv(truth_path, Trajectory::Kind::ground_truth);
    const auto rep = score(est, truth);
    if (!out_report.empty()) io::write_error_report(out_report, rep);
    if (!out_cdf.empty()) io::write_cdf_csv(out_cdf, rep);
    if (!out_errors.empty()) io::write_per_point_errors_csv(out_errors, est, rep);
    std::cout << "median X/Y/XY: " << rep.median_x << " / " << rep.median_y << " / "
              << rep.median_xy << " m\n"
              << "p90    X/Y/XY: " << rep.p90_x << " / " << rep.p90_y << " / " << rep.p90_xy
              << " m\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wirssi - bistatic RSSI sensing toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "synthesize a bistatic capture");
    std::string sim_config, sim_preset = "ellipse", sim_geometry;
    double sim_duration = 60.0, sim_quant = 0.0, sim_noise = 1e9, sim_gamma = 0.0, sim_span = 0.0,
           sim_speed = 0.0;
    int sim_subcarriers = 0;
    std::uint64_t sim_seed = 1;
    std::string sim_out_trace = "trace.csv", sim_out_truth = "truth.csv",
                sim_out_manifest = "manifest.json", sim_out_csi;
    sim->add_option("--config", sim_config, "JSON config file");
    sim->add_option("--preset", sim_preset, "ellipse | line | rectangle | pushpull");
    sim->add_option("--geometry", sim_geometry, "geometry JSON (default deployment otherwise)");
    sim->add_option("--duration", sim_duration, "capture length, seconds");
    sim->add_option("--seed", sim_seed, "random seed");
    sim->add_option("--quant-step", sim_quant, "RSSI quantization step, dB");
    sim->add_option("--noise-floor", sim_noise, "channel noise floor, dB (<=-250 disables)");
    sim->add_option("--gamma", sim_gamma, "planted reflection ratio");
    sim->add_option("--subcarriers", sim_subcarriers, "subcarrier count");
    sim->add_option("--half-span", sim_span, "subcarrier half span, Hz");
    sim->add_option("--speed", sim_speed, "target speed, m/s");
    sim->add_option("--out-trace", sim_out_trace, "RSSI trace CSV output");
    sim->add_option("--out-truth", sim_out_truth, "ground-truth trajectory CSV output");
    sim->add_option("--out-manifest", sim_out_manifest, "manifest JSON output");
    sim->add_option("--out-csi", sim_out_csi, "optional raw CSI binary dump");

    // track
    auto* trk = app.add_subcommand("track", "RSSI trace -> raw and smoothed trajectories");
    std::string trk_config, trk_trace, trk_geometry, trk_calibration, trk_raw = "raw.csv",
                trk_smoothed = "smoothed.csv", trk_timings, trk_dump;
    double trk_gamma = 0.0;
    bool trk_force = false;
    trk->add_option("--config", trk_config, "JSON config file");
    trk->add_option("--trace", trk_trace, "input RSSI trace CSV")->required();
    trk->add_option("--geometry", trk_geometry, "geometry JSON");
    trk->add_option("--calibration", trk_calibration, "calibration JSON from `calibrate`");
    trk->add_option("--gamma", trk_gamma, "inline reflection ratio (skips calibration file)");
    trk->add_flag("--force", trk_force, "accept a calibration with a mismatched geometry hash");
    trk->add_option("--out-raw", trk_raw, "raw trajectory CSV output");
    trk->add_option("--out-smoothed", trk_smoothed, "smoothed trajectory CSV output");
    trk->add_option("--out-timings", trk_timings, "stage timing JSON output");
    trk->add_option("--spectrum-dump", trk_dump, "directory for per-CPI |Y| CSV dumps");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "estimate the reflection ratio from a known track");
    std::string cal_config, cal_trace, cal_truth, cal_geometry, cal_out = "calibration.json";
    cal->add_option("--config", cal_config, "JSON config file");
    cal->add_option("--trace", cal_trace, "input RSSI trace CSV")->required();
    cal->add_option("--truth", cal_truth, "ground-truth trajectory CSV")->required();
    cal->add_option("--geometry", cal_geometry, "geometry JSON");
    cal->add_option("--out", cal_out, "calibration JSON output");

    // features
    auto* fea = app.add_subcommand("features", "RSSI trace -> time-Doppler feature map");
    std::string fea_config, fea_trace, fea_geometry, fea_out = "features.bin", fea_format;
    bool fea_log = false, fea_keep_mirror = false;
    fea->add_option("--config", fea_config, "JSON config file");
    fea->add_option("--trace", fea_trace, "input RSSI trace CSV")->required();
    fea->add_option("--geometry", fea_geometry, "geometry JSON");
    fea->add_option("--out", fea_out, "output file (.csv selects CSV, else binary)");
    fea->add_option("--format", fea_format, "force csv or binary");
    fea->add_flag("--log-scale", fea_log, "export 10 log10(1+S) instead of raw energy");
    fea->add_flag("--keep-mirror", fea_keep_mirror, "skip mirror rejection (ablation)");

    // eval
    auto* evl = app.add_subcommand("eval", "score an estimated trajectory against ground truth");
    std::string evl_est, evl_truth, evl_report = "report.json", evl_cdf, evl_errors;
    evl->add_option("--estimate", evl_est, "estimated trajectory CSV")->required();
    evl->add_option("--truth", evl_truth, "ground-truth trajectory CSV")->required();
    evl->add_option("--out-report", evl_report, "error report JSON output");
    evl->add_option("--out-cdf", evl_cdf, "CDF CSV output");
    evl->add_option("--out-errors", evl_errors, "per-point error CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed())
            return run_simulate(sim_config, sim_preset, sim_geometry, sim_duration, sim_seed,
                                sim_quant, sim_noise, sim_gamma, sim_subcarriers, sim_span,
                                sim_speed, sim_out_trace, sim_out_truth, sim_out_manifest,
                                sim_out_csi);
        if (trk->parsed())
            return run_track(trk_config, trk_trace, trk_geometry, trk_calibration, trk_gamma,
                             trk_force, trk_raw, trk_smoothed, trk_timings, trk_dump);
        if (cal->parsed())
            return run_calibrate(cal_config, cal_trace, cal_truth, cal_geometry, cal_out);
        if (fea->parsed())
            return run_features_cmd(fea_config, fea_trace, fea_geometry, fea_out, fea_format,
                                    fea_log, fea_keep_mirror);
        if (evl->parsed()) return run_eval(evl_est, evl_truth, evl_report, evl_cdf, evl_errors);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NoTemporalOverlap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficient;
    } catch (const InsufficientDetections& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficient;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitConfig;
}
