#include "wirssi/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "wirssi/dsp.hpp"
#include "wirssi/errors.hpp"

namespace wirssi::io {

using nlohmann::json;

namespace {

std::string format_double(double v, int precision = 17) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::ofstream open_out(const fs::path& path, std::ios_base::openmode mode = std::ios_base::out) {
    std::ofstream f(path, mode);
    if (!f) throw DataError("cannot open for writing: " + path.string());
    return f;
}

std::ifstream open_in(const fs::path& path, std::ios_base::openmode mode = std::ios_base::in) {
    std::ifstream f(path, mode);
    if (!f) throw DataError("cannot open for reading: " + path.string());
    return f;
}

json load_json(const fs::path& path) {
    auto f = open_in(path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_cell(const std::string& s) {
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        return std::stod(s);
    } catch (...) {
        throw DataError("cannot parse numeric cell '" + s + "'");
    }
}

void put_f32(std::ofstream& f, float v) {
    // files are little-endian; all supported targets are
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

float get_f32(std::ifstream& f) {
    float v = 0.0f;
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!f) throw DataError("unexpected end of binary payload");
    return v;
}

}  // namespace

BistaticGeometry geometry_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid geometry JSON: ") + e.what());
    }
    try {
        const auto tx = j.at("tx_m");
        const auto rx = j.at("rx_m");
        const auto ax = j.at("array_axis");
        std::optional<double> spacing;
        if (j.contains("antenna_spacing_m") && !j["antenna_spacing_m"].is_null())
            spacing = j["antenna_spacing_m"].get<double>();
        return BistaticGeometry({tx.at(0).get<double>(), tx.at(1).get<double>()},
                                {rx.at(0).get<double>(), rx.at(1).get<double>()},
                                {ax.at(0).get<double>(), ax.at(1).get<double>()},
                                j.at("num_antennas").get<int>(), spacing, j.at("carrier_hz").get<double>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("geometry JSON missing or malformed field: ") + e.what());
    }
}

BistaticGeometry read_geometry(const fs::path& path) {
    auto f = open_in(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return geometry_from_json_text(ss.str());
}

void write_geometry(const fs::path& path, const BistaticGeometry& geo) {
    json j;
    j["tx_m"] = {geo.tx_position().x, geo.tx_position().y};
    j["rx_m"] = {geo.rx_origin().x, geo.rx_origin().y};
    j["array_axis"] = {geo.array_axis().x, geo.array_axis().y};
    j["num_antennas"] = geo.num_antennas();
    j["antenna_spacing_m"] = geo.antenna_spacing_m();
    j["carrier_hz"] = geo.carrier_hz();
    open_out(path) << j.dump(2) << "\n";
}

std::string geometry_hash(const BistaticGeometry& geo) {
    std::ostringstream canon;
    canon << std::setprecision(17) << geo.tx_position().x << '|' << geo.tx_position().y << '|'
          << geo.rx_origin().x << '|' << geo.rx_origin().y << '|' << geo.array_axis().x << '|'
          << geo.array_axis().y << '|' << geo.num_antennas() << '|' << geo.antenna_spacing_m() << '|'
          << geo.carrier_hz();
    // FNV-1a 64
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon.str()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

void write_trace_csv(const fs::path& path, const RssiTrace& trace) {
    auto f = open_out(path);
    f << "t_s";
    for (std::size_t i = 0; i < trace.samples_db.rows; ++i) f << ",rssi_db_a" << (i + 1);
    f << "\n";
    f << std::setprecision(10);
    for (std::size_t k = 0; k < trace.samples_db.cols; ++k) {
        f << format_double(trace.timestamps[k]);
        for (std::size_t i = 0; i < trace.samples_db.rows; ++i) {
            const double v = trace.samples_db.at(i, k);
            f << ',';
            if (!std::isnan(v)) f << format_double(v);
        }
        f << "\n";
    }
}

RssiTrace read_trace_csv(const fs::path& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw DataError("trace CSV is empty: " + path.string());
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t_s")
        throw DataError("trace CSV must start with header t_s,rssi_db_a1,...");
    const std::size_t n = header.size() - 1;

    std::vector<double> ts;
    std::vector<std::vector<double>> cols(n);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != n + 1) throw DataError("trace CSV row has wrong column count");
        ts.push_back(parse_cell(cells[0]));
        for (std::size_t i = 0; i < n; ++i) cols[i].push_back(parse_cell(cells[i + 1]));
    }
    if (ts.size() < 2) throw DataError("trace CSV needs at least two samples");

    RssiTrace trace;
    trace.timestamps = std::move(ts);
    trace.samples_db = RealMatrix(n, trace.timestamps.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < trace.timestamps.size(); ++k) trace.samples_db.at(i, k) = cols[i][k];
    // nominal rate from the median timestamp delta
    std::vector<double> dts(trace.timestamps.size() - 1);
    for (std::size_t k = 1; k < trace.timestamps.size(); ++k) dts[k - 1] = trace.timestamps[k] - trace.timestamps[k - 1];
    const double dt = dsp::median(dts);
    if (!(dt > 0.0)) throw DataError("trace CSV timestamps are not increasing");
    trace.sample_rate_hz = 1.0 / dt;
    return trace;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
    auto f = open_out(path);
    f << "t_s,x_m,y_m\n";
    for (const auto& p : traj.points)
        f << format_double(p.t_s) << ',' << format_double(p.x_m) << ',' << format_double(p.y_m) << "\n";
}

Trajectory read_trajectory_csv(const fs::path& path, Trajectory::Kind kind) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw DataError("trajectory CSV is empty: " + path.string());
    if (split_csv_line(line) != std::vector<std::string>{"t_s", "x_m", "y_m"})
        throw DataError("trajectory CSV must start with header t_s,x_m,y_m");
    Trajectory traj;
    traj.kind = kind;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) throw DataError("trajectory CSV row has wrong column count");
        traj.points.push_back({parse_cell(cells[0]), parse_cell(cells[1]), parse_cell(cells[2])});
    }
    return traj;
}

void write_calibration(const fs::path& path, const ReflectionRatio& ratio, const std::string& geo_hash) {
    json j;
    j["gamma"] = ratio.gamma;
    j["dispersion"] = ratio.dispersion;
    j["sample_count"] = ratio.sample_count;
    j["geometry_hash"] = geo_hash;
    open_out(path) << j.dump(2) << "\n";
}

ReflectionRatio read_calibration(const fs::path& path, std::string* geo_hash_out) {
    const json j = load_json(path);
    ReflectionRatio r;
    try {
        r.gamma = j.at("gamma").get<double>();
        r.dispersion = j.at("dispersion").get<double>();
        r.sample_count = j.at("sample_count").get<std::size_t>();
        if (geo_hash_out) *geo_hash_out = j.at("geometry_hash").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError("calibration file missing field: " + std::string(e.what()));
    }
    if (!(r.gamma > 0.0)) throw ConfigError("calibration gamma must be positive");
    return r;
}

void write_error_report(const fs::path& path, const ErrorReport& rep) {
    json j;
    j["median_x_m"] = rep.median_x;
    j["median_y_m"] = rep.median_y;
    j["median_xy_m"] = rep.median_xy;
    j["p90_x_m"] = rep.p90_x;
    j["p90_y_m"] = rep.p90_y;
    j["p90_xy_m"] = rep.p90_xy;
    j["count"] = rep.err_xy_m.size();
    j["cdf"] = rep.cdf;
    open_out(path) << j.dump(2) << "\n";
}

void write_cdf_csv(const fs::path& path, const ErrorReport& rep) {
    auto f = open_out(path);
    f << "error_m,cdf\n";
    const double n = static_cast<double>(rep.cdf.size());
    for (std::size_t i = 0; i < rep.cdf.size(); ++i)
        f << format_double(rep.cdf[i], 12) << ',' << format_double((i + 1) / n, 12) << "\n";
}

void write_per_point_errors_csv(const fs::path& path, const Trajectory& est, const ErrorReport& rep) {
    auto f = open_out(path);
    f << "t_s,err_x_m,err_y_m,err_xy_m\n";
    const std::size_t n = std::min(est.points.size(), rep.err_xy_m.size());
    for (std::size_t i = 0; i < n; ++i)
        f << format_double(est.points[i].t_s, 12) << ',' << format_double(rep.err_x_m[i], 12) << ','
          << format_double(rep.err_y_m[i], 12) << ',' << format_double(rep.err_xy_m[i], 12) << "\n";
}

void write_csi_dump(const fs::path& path, const CsiTensor& csi) {
    auto f = open_out(path, std::ios_base::binary);
    f << "WIRSSI-CSI v1 " << csi.n_antennas << ' ' << csi.n_subcarriers << ' ' << csi.n_samples << "\n";
    for (const auto& v : csi.data) {
        put_f32(f, static_cast<float>(v.real()));
        put_f32(f, static_cast<float>(v.imag()));
    }
}

CsiTensor read_csi_dump(const fs::path& path) {
    auto f = open_in(path, std::ios_base::binary);
    std::string line;
    if (!std::getline(f, line)) throw DataError("CSI dump is empty");
    std::istringstream hs(line);
    std::string magic, version;
    std::size_t n = 0, l = 0, m = 0;
    hs >> magic >> version >> n >> l >> m;
    if (magic != "WIRSSI-CSI" || version != "v1" || !hs) throw DataError("bad CSI dump header");
    CsiTensor csi(n, l, m);
    for (auto& v : csi.data) {
        const float re = get_f32(f);
        const float im = get_f32(f);
        v = {re, im};
    }
    return csi;
}

namespace {

RealMatrix map_payload(const TimeDopplerMap& map, bool log_scale) {
    return log_scale ? log_scaled(map.values) : map.values;
}

}  // namespace

void write_time_doppler_binary(const fs::path& path, const TimeDopplerMap& map, bool log_scale) {
    auto f = open_out(path, std::ios_base::binary);
    f << "WIRSSI-TD v1 " << map.values.rows << ' ' << map.values.cols << "\n";
    const RealMatrix payload = map_payload(map, log_scale);
    for (double v : payload.data) put_f32(f, static_cast<float>(v));
}

TimeDopplerMap read_time_doppler_binary(const fs::path& path) {
    auto f = open_in(path, std::ios_base::binary);
    std::string line;
    if (!std::getline(f, line)) throw DataError("time-Doppler file is empty");
    std::istringstream hs(line);
    std::string magic, version;
    std::size_t t = 0, nf = 0;
    hs >> magic >> version >> t >> nf;
    if (magic != "WIRSSI-TD" || version != "v1" || !hs) throw DataError("bad time-Doppler header");
    TimeDopplerMap map;
    map.values = RealMatrix(t, nf);
    for (auto& v : map.values.data) v = get_f32(f);
    return map;
}

void write_time_doppler_csv(const fs::path& path, const TimeDopplerMap& map, bool log_scale) {
    auto f = open_out(path);
    f << "t_s";
    for (double fr : map.doppler_axis_hz) f << ',' << format_double(fr, 12);
    f << "\n";
    const RealMatrix payload = map_payload(map, log_scale);
    for (std::size_t r = 0; r < payload.rows; ++r) {
        f << format_double(r < map.cpi_timestamps_s.size() ? map.cpi_timestamps_s[r] : 0.0, 12);
        // float32 precision to match the binary payload exactly
        for (std::size_t c = 0; c < payload.cols; ++c)
            f << ',' << format_double(static_cast<float>(payload.at(r, c)), 9);
        f << "\n";
    }
}

TimeDopplerMap read_time_doppler_csv(const fs::path& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw DataError("time-Doppler CSV is empty");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t_s") throw DataError("bad time-Doppler CSV header");
    TimeDopplerMap map;
    for (std::size_t i = 1; i < header.size(); ++i) map.doppler_axis_hz.push_back(parse_cell(header[i]));
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) throw DataError("time-Doppler CSV row has wrong column count");
        map.cpi_timestamps_s.push_back(parse_cell(cells[0]));
        std::vector<double> r(cells.size() - 1);
        // payload is defined at float32 precision, matching the binary format
        for (std::size_t i = 1; i < cells.size(); ++i)
            r[i - 1] = static_cast<float>(parse_cell(cells[i]));
        rows.push_back(std::move(r));
    }
    map.values = RealMatrix(rows.size(), map.doppler_axis_hz.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < map.values.cols; ++c) map.values.at(r, c) = rows[r][c];
    return map;
}

void write_spectrum_csv(const fs::path& path, const DopplerAoaSpectrum& spec) {
    auto f = open_out(path);
    f << "doppler_hz\\aoa_rad";
    for (double a : spec.aoa_axis_rad) f << ',' << format_double(a, 9);
    f << "\n";
    for (std::size_t d = 0; d < spec.values.rows; ++d) {
        f << format_double(spec.doppler_axis_hz[d], 9);
        for (std::size_t a = 0; a < spec.values.cols; ++a) f << ',' << format_double(std::abs(spec.values.at(d, a)), 9);
        f << "\n";
    }
}

}  // namespace wirssi::io
