#include "wirssi/features.hpp"

#include <cmath>

#include "wirssi/errors.hpp"

namespace wirssi {

RealMatrix energy_map(const DopplerAoaSpectrum& spec) {
    RealMatrix s(spec.values.rows, spec.values.cols);
    for (std::size_t i = 0; i < spec.values.data.size(); ++i) s.data[i] = std::norm(spec.values.data[i]);
    return s;
}

std::vector<double> doppler_profile(const RealMatrix& energy) {
    std::vector<double> p(energy.rows, 0.0);
    for (std::size_t d = 0; d < energy.rows; ++d)
        for (std::size_t a = 0; a < energy.cols; ++a) p[d] += energy.at(d, a);
    return p;
}

DopplerProfileRow profile_of(const DopplerAoaSpectrum& spec) {
    DopplerProfileRow row;
    row.values = doppler_profile(energy_map(spec));
    row.doppler_axis_hz = spec.doppler_axis_hz;
    row.timestamp_s = spec.timestamp_s;
    return row;
}

TimeDopplerMap stack_time_doppler(const std::vector<DopplerProfileRow>& profiles) {
    TimeDopplerMap map;
    if (profiles.empty()) return map;
    map.doppler_axis_hz = profiles.front().doppler_axis_hz;
    map.values = RealMatrix(profiles.size(), map.doppler_axis_hz.size());
    map.cpi_timestamps_s.resize(profiles.size());
    for (std::size_t t = 0; t < profiles.size(); ++t) {
        const auto& p = profiles[t];
        if (p.doppler_axis_hz != map.doppler_axis_hz)
            throw AxisMismatch("stack_time_doppler: profiles use different Doppler axes");
        if (p.values.size() != map.doppler_axis_hz.size())
            throw AxisMismatch("stack_time_doppler: profile length does not match the axis");
        map.cpi_timestamps_s[t] = p.timestamp_s;
        for (std::size_t f = 0; f < p.values.size(); ++f) map.values.at(t, f) = p.values[f];
    }
    return map;
}

RealMatrix log_scaled(const RealMatrix& map) {
    RealMatrix out(map.rows, map.cols);
    for (std::size_t i = 0; i < map.data.size(); ++i) out.data[i] = 10.0 * std::log10(1.0 + map.data[i]);
    return out;
}

double doppler_centroid(const TimeDopplerMap& map, std::size_t row) {
    double num = 0.0, den = 0.0;
    for (std::size_t f = 0; f < map.values.cols; ++f) {
        num += map.doppler_axis_hz[f] * map.values.at(row, f);
        den += map.values.at(row, f);
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace wirssi
