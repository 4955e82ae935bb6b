#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wirssi/errors.hpp"
#include "wirssi/preprocess.hpp"

using namespace wirssi;

namespace {

RssiTrace make_trace(const std::vector<std::vector<double>>& rows, double rate = 1000.0) {
    RssiTrace t;
    t.sample_rate_hz = rate;
    const std::size_t n = rows.size(), m = rows[0].size();
    t.samples_db = RealMatrix(n, m);
    t.timestamps.resize(m);
    for (std::size_t k = 0; k < m; ++k) t.timestamps[k] = k / rate;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) t.samples_db.at(i, k) = rows[i][k];
    return t;
}

double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace

TEST_CASE("db_to_linear fixed points") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    // cross-check against 1/10^0.3 evaluated independently
    CHECK(db_to_linear(-3.0) == doctest::Approx(1.0 / std::pow(10.0, 0.3)).epsilon(1e-15));
    CHECK(db_to_linear(-3.0) == doctest::Approx(0.5011872336272722).epsilon(1e-12));
}

TEST_CASE("constant input yields a zero residue") {
    std::vector<double> row(256, 7.0);
    const auto trace = make_trace({row, row});
    const auto w = extract_cpi(trace, 0, 128);
    for (double v : w.normalized_dynamic.data) CHECK(std::abs(v) < 1e-12);
    for (double s : w.static_estimate) CHECK(s == doctest::Approx(db_to_linear(7.0)));
}

TEST_CASE("sinusoid window: closed-form Dirichlet mean oracle") {
    // linear power 2 + cos(2π·5·t) over M = 128 samples at 1 kHz covers 0.64
    // cycles, so the window mean picks up a large leakage term; the oracle is
    // the exact cosine partial sum, not the paraphrased "mean ≈ 2".
    const std::size_t M = 128;
    const double f = 5.0, dt = 1e-3;
    std::vector<double> db_row(M);
    std::vector<double> lin_row(M);
    for (std::size_t k = 0; k < M; ++k) {
        lin_row[k] = 2.0 + std::cos(2.0 * std::numbers::pi * f * k * dt);
        db_row[k] = linear_to_db(lin_row[k]);
    }
    const auto trace = make_trace({db_row});
    const auto w = extract_cpi(trace, 0, M);

    // closed form: Σ cos(ak) = cos((M−1)a/2)·sin(Ma/2)/sin(a/2)
    const double a = 2.0 * std::numbers::pi * f * dt;
    const double csum = std::cos((M - 1) * a / 2.0) * std::sin(M * a / 2.0) / std::sin(a / 2.0);
    const double mean_oracle = 2.0 + csum / M;
    CHECK(mean_oracle == doctest::Approx(1.8148010231711149).epsilon(1e-12));
    CHECK(w.static_estimate[0] == doctest::Approx(mean_oracle).epsilon(1e-12));
    for (std::size_t k = 0; k < M; ++k)
        REQUIRE(w.normalized_dynamic.at(0, k) ==
                doctest::Approx((lin_row[k] - mean_oracle) / mean_oracle).epsilon(1e-10));
    // the residue stays a cosine of amplitude 1/mean ≈ 0.551 plus the leakage
    // offset; the amplitude would only approach 0.5 for integer-cycle windows
    CHECK(1.0 / mean_oracle == doctest::Approx(0.5510246).epsilon(1e-6));
}

TEST_CASE("residue rows have zero mean in CPI-mean mode") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(10.0, 30.0);
    std::vector<std::vector<double>> rows(3, std::vector<double>(512));
    for (auto& r : rows)
        for (auto& v : r) v = u(rng);
    const auto trace = make_trace(rows);
    PreprocessParams params;
    const auto windows = make_cpi_windows(trace, params);
    CHECK(windows.size() == (512 - 128) / 32 + 1);
    for (const auto& w : windows) {
        for (std::size_t i = 0; i < 3; ++i) {
            double acc = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < w.cpi_length; ++k) {
                acc += w.normalized_dynamic.at(i, k);
                scale += std::abs(w.normalized_dynamic.at(i, k));
            }
            REQUIRE(std::abs(acc) <= 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("global linear scaling leaves the residue unchanged") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(15.0, 25.0);
    std::vector<double> row(256);
    for (auto& v : row) v = u(rng);
    const auto base = extract_cpi(make_trace({row}), 16, 128);
    std::vector<double> shifted(row);
    for (auto& v : shifted) v += 10.0 * std::log10(7.5);  // linear ×7.5
    const auto scaled = extract_cpi(make_trace({shifted}), 16, 128);
    for (std::size_t k = 0; k < 128; ++k)
        REQUIRE(scaled.normalized_dynamic.at(0, k) ==
                doctest::Approx(base.normalized_dynamic.at(0, k)).epsilon(1e-12));
}

TEST_CASE("window timestamps sit at the window center") {
    std::vector<double> row(300, 5.0);
    const auto trace = make_trace({row});
    const auto w = extract_cpi(trace, 40, 128);
    CHECK(w.timestamp_s == doctest::Approx(trace.timestamps[40 + 64]));
    CHECK(w.start_index == 40);
}

TEST_CASE("corrupt input guards") {
    std::vector<double> row(64, 5.0);
    const auto trace = make_trace({row});
    CHECK_THROWS_AS(extract_cpi(trace, 0, 128), DataError);
    RssiTrace bad = trace;
    bad.timestamps[10] = bad.timestamps[9];
    CHECK_THROWS_AS(extract_cpi(bad, 0, 32), DataError);
    RssiTrace nan_trace = trace;
    nan_trace.samples_db.at(0, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(extract_cpi(nan_trace, 0, 32), ZeroStaticPower);
}

TEST_CASE("EMA residue decays geometrically after a level step") {
    // step from 4 to 8 linear: S tracks the new level with ratio (1−w)
    const double w = 0.3;
    std::vector<double> db_row(400);
    for (std::size_t k = 0; k < db_row.size(); ++k) db_row[k] = linear_to_db(k < 100 ? 4.0 : 8.0);
    PreprocessParams params;
    params.cpi_length = 128;
    params.cpi_step = 128;
    const auto windows = extract_cpi_ema(make_trace({db_row}), w, params);
    REQUIRE(!windows.empty());

    // track the EMA independently
    double s = 4.0;
    std::vector<double> residues;
    for (std::size_t k = 0; k < db_row.size(); ++k) {
        const double lin = db_to_linear(db_row[k]);
        s = w * lin + (1.0 - w) * s;
        residues.push_back((lin - s) / s);
    }
    const auto& win = windows[1];  // covers samples 128..255, after the step
    for (std::size_t k = 0; k < win.cpi_length; ++k)
        REQUIRE(win.normalized_dynamic.at(0, k) ==
                doctest::Approx(residues[win.start_index + k]).epsilon(1e-12));
    // geometric decay with ratio (1-w): residue_{k+1}/residue_k → 0.7
    const double r1 = residues[150], r2 = residues[151];
    CHECK(r2 / r1 == doctest::Approx(1.0 - w).epsilon(1e-6));
    // and far from the step the residue has converged to zero
    CHECK(std::abs(residues[399]) < 1e-12);
}

TEST_CASE("EMA tracks a step change faster than the window mean") {
    std::vector<double> db_row(512);
    for (std::size_t k = 0; k < db_row.size(); ++k) db_row[k] = linear_to_db(k < 256 ? 4.0 : 8.0);
    const auto trace = make_trace({db_row});
    PreprocessParams params;
    // window straddling the step end: 192..319
    const auto mean_win = extract_cpi(trace, 192, 128);
    params.cpi_length = 128;
    params.cpi_step = 32;
    const auto ema_wins = extract_cpi_ema(trace, 0.3, params);
    const auto& ema_win = ema_wins[192 / 32];
    REQUIRE(ema_win.start_index == 192);
    // at the window end the EMA has converged; the window mean has not
    const double tail_mean = mean_win.normalized_dynamic.at(0, 127);
    const double tail_ema = ema_win.normalized_dynamic.at(0, 127);
    CHECK(std::abs(tail_ema) < 0.01);
    CHECK(std::abs(tail_mean) > 0.2);
}

TEST_CASE("auto mode selects EMA below the rate threshold") {
    std::vector<double> row(300, 5.0);
    PreprocessParams params;
    params.cpi_length = 64;
    const auto fast = preprocess_trace(make_trace({row}, 1000.0), params);
    const auto slow = preprocess_trace(make_trace({row}, 50.0), params);
    CHECK(!fast.empty());
    CHECK(!slow.empty());
    // constant input: both give zero residue; the mode difference shows in
    // static estimates only through identical values here, so check the knob
    params.mode = ClutterMode::ema;
    CHECK(!preprocess_trace(make_trace({row}, 1000.0), params).empty());
    params.ema_weight = 1.5;
    CHECK_THROWS_AS(preprocess_trace(make_trace({row}, 1000.0), params), ConfigError);
}

TEST_CASE("short gaps are hold-filled, long gaps poison their samples") {
    // 1 kHz trace with a 3-sample hole and a 9-sample hole
    RssiTrace t;
    t.sample_rate_hz = 1000.0;
    std::vector<double> keep_times;
    for (int k = 0; k < 200; ++k) {
        if ((k >= 50 && k < 53) || (k >= 100 && k < 109)) continue;
        keep_times.push_back(k * 1e-3);
    }
    t.timestamps = keep_times;
    t.samples_db = RealMatrix(1, keep_times.size());
    for (std::size_t c = 0; c < keep_times.size(); ++c)
        t.samples_db.at(0, c) = 10.0 + 0.001 * static_cast<double>(c);

    PreprocessParams params;
    std::vector<bool> poisoned;
    GapFillStats stats;
    const auto filled = regularize_trace(t, params, &poisoned, &stats);
    CHECK(filled.samples_db.cols == 200);
    CHECK(stats.held_samples == 3);
    CHECK(stats.poisoned_samples == 9);
    CHECK(poisoned[101]);
    CHECK_FALSE(poisoned[51]);
    CHECK(filled.samples_db.at(0, 51) == filled.samples_db.at(0, 49));
}

TEST_CASE("per-antenna NaN cells follow the same gap policy") {
    std::vector<std::vector<double>> rows(2, std::vector<double>(100, 12.0));
    for (int k = 20; k < 22; ++k) rows[1][k] = std::numeric_limits<double>::quiet_NaN();
    const auto trace = make_trace(rows);
    PreprocessParams params;
    std::vector<bool> poisoned;
    GapFillStats stats;
    const auto filled = regularize_trace(trace, params, &poisoned, &stats);
    CHECK(stats.held_samples == 2);
    CHECK(filled.samples_db.at(1, 20) == 12.0);
}
