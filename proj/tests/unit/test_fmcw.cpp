#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "slowcode/fmcw.hpp"
#include "slowcode/siso.hpp"

using namespace slowcode;

namespace {

FmcwParams small_params(int m, int n) {
    FmcwParams p;
    p.m_fast = m;
    p.n_slow = n;
    return p;
}

Emitter target(double range, double speed, double snr) {
    Emitter e;
    e.range_m = range;
    e.speed_mps = speed;
    e.snr_db = snr;
    return e;
}

Emitter interferer(double range, double speed, double snr, int lag = 0) {
    Emitter e = target(range, speed, snr);
    e.kind = EmitterKind::interferer;
    e.delay_lag = lag;
    return e;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

TEST_CASE("Doppler and beat frequencies") {
    const FmcwParams params;
    const Emitter t = target(50.0, 10.12, 30.0);
    CHECK(doppler_hz(t, params) == doctest::Approx(2.0 * 10.12 * 24e9 / kSpeedOfLight));
    CHECK(doppler_hz(t, params) == doctest::Approx(1619.2).epsilon(1e-3));
    CHECK(beat_hz(t, params) == doctest::Approx(3e12 * 100.0 / kSpeedOfLight + doppler_hz(t, params)));
    const Emitter i = interferer(70.0, 23.45, 60.0);
    CHECK(doppler_hz(i, params) == doctest::Approx(23.45 * 24e9 / kSpeedOfLight));
    CHECK(beat_hz(i, params) == doctest::Approx(3e12 * 70.0 / kSpeedOfLight + doppler_hz(i, params)));
}

TEST_CASE("noiseless samples follow the definition") {
    SimScenario sc;
    sc.params = small_params(16, 8);
    sc.emitters = {target(20.0, 5.0, 10.0)};
    sc.noise_power = 0.0;
    const CMatrix s = synthesize_samples(sc);
    const double fb = beat_hz(sc.emitters[0], sc.params) / sc.params.f_s;
    const double fd = doppler_hz(sc.emitters[0], sc.params) * sc.params.t_c;
    const cdouble alpha = s(0, 0) / std::polar(1.0, 2.0 * kPi * (fb + fd));
    CHECK(std::abs(alpha) == doctest::Approx(std::sqrt(10.0)));
    Rng pick(1);
    for (int t = 0; t < 10; ++t) {
        const int m = static_cast<int>(pick.uniform() * 16);
        const int n = static_cast<int>(pick.uniform() * 8);
        const cdouble expected = alpha * std::polar(1.0, 2.0 * kPi * (fb * (m + 1) + fd * (n + 1)));
        CHECK(std::abs(s(m, n) - expected) < 1e-9);
    }
}

TEST_CASE("interferers carry the code product") {
    SimScenario sc;
    sc.params = small_params(4, 8);
    sc.emitters = {interferer(30.0, 3.0, 0.0, 2)};
    sc.noise_power = 1.0;
    sc.seed = 4;
    const SimScenario plain = [&] {
        SimScenario p = sc;
        p.noise_power = 0.0;
        return p;
    }();
    SimScenario coded = plain;
    coded.coding = {CodingKind::pair, random_unimodular_code(8, 1), random_unimodular_code(8, 2)};
    const CMatrix a = synthesize_samples(plain);
    const CMatrix b = synthesize_samples(coded);
    for (int n = 0; n < 8; ++n) {
        const cdouble factor = std::conj(coded.coding.x[static_cast<std::size_t>(n)]) *
                               coded.coding.y[static_cast<std::size_t>(wrap(n + 2, 8))];
        for (int m = 0; m < 4; ++m) CHECK(std::abs(b(m, n) - a(m, n) * factor) < 1e-12);
    }

    const auto [x, y] = doppler_shift_pair(8);
    coded.coding = {CodingKind::pair, x, y};
    coded.emitters[0].delay_lag = 0;
    SimScenario base = coded;
    base.coding = {};
    const CMatrix shifted = synthesize_samples(coded);
    const CMatrix unshifted = synthesize_samples(base);
    for (int n = 0; n < 8; ++n) CHECK(std::abs(shifted(0, n) - unshifted(0, n) * (n % 2 == 0 ? 1.0 : -1.0)) < 1e-12);
}

TEST_CASE("scenario validation") {
    SimScenario sc;
    sc.params = small_params(8, 8);
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc.emitters = {target(20.0, 0.0, 0.0)};
    CHECK_NOTHROW(sc.validate());

    sc.emitters = {target(20.0, 0.0, 0.0), target(5000.0, 0.0, 0.0)};
    try {
        sc.validate();
        FAIL("aliased emitter accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("emitter 1") != std::string::npos);
    }

    sc.emitters = {interferer(20.0, 0.0, 0.0, 8)};
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc.emitters = {interferer(20.0, 0.0, 0.0, -7)};
    CHECK_NOTHROW(sc.validate());

    sc.coding = {CodingKind::pair, Code::ones(4), Code::ones(4)};
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc.coding = {CodingKind::mimo, {}, {}};
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    CHECK(coding_kind_from_string("pair") == CodingKind::pair);
    CHECK_THROWS_AS(coding_kind_from_string("qpsk"), ConfigError);
}

TEST_CASE("range-Doppler map of an on-grid target") {
    FmcwParams params = small_params(32, 16);
    // Beat and Doppler land exactly on bins 5 and 3 of the unpadded FFT.
    params.f_s = 4e6;
    const double fd = 3.0 / (16 * params.t_c);
    const double speed = fd * params.wavelength() / 2.0;
    const double fb = 5.0 * params.f_s / 32;
    const double range = (fb - fd) * kSpeedOfLight / (2.0 * params.slope());

    SimScenario sc;
    sc.params = params;
    sc.emitters = {target(range, speed, 0.0)};
    sc.noise_power = 0.0;
    const CMatrix s = synthesize_samples(sc);
    const RangeDopplerMap map = range_doppler_map(s, params, 32, 16);
    CHECK(map.pad_m() == 32);
    CHECK(std::abs(map.values(5, 3)) == doctest::Approx(32.0 * 16.0));
    const auto peaks = find_peaks(map, 1);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].k == 5);
    CHECK(peaks[0].p == 3);
    CHECK(peaks[0].db == 0.0);
    CHECK(peaks[0].velocity_mps == doctest::Approx(speed));

    // Parseval without padding or window.
    const double time_energy = s.squaredNorm();
    CHECK(map.values.squaredNorm() / (32.0 * 16.0) == doctest::Approx(time_energy).epsilon(1e-6));

    CHECK_THROWS_AS(range_doppler_map(s, params, 16, 16), InvalidDimension);
}

TEST_CASE("two emitters peak at their predicted bins") {
    FmcwParams params = small_params(64, 32);
    SimScenario sc;
    sc.params = params;
    sc.emitters = {target(40.0, 8.0, 20.0), target(90.0, -15.0, 20.0)};
    sc.noise_power = 0.0;
    const int pad_m = default_pad_m(params);
    const int pad_n = default_pad_n(params);
    CHECK(pad_m == 64);
    CHECK(pad_n == 64);
    const RangeDopplerMap map = range_doppler_map(synthesize_samples(sc), params, pad_m, pad_n, Window::hann);
    const auto peaks = find_peaks(map, 2);
    REQUIRE(peaks.size() == 2);
    for (const Emitter& e : sc.emitters) {
        const BinPosition want = predicted_bin(e, params, pad_m, pad_n);
        bool found = false;
        for (const Peak& pk : peaks) {
            const double dk = std::abs(pk.k - want.k);
            double dp = std::abs(pk.p - want.p);
            dp = std::min(dp, pad_n - dp);
            found |= dk <= 1.0 && dp <= 1.0;
        }
        CHECK(found);
    }
}

TEST_CASE("range within one bin of the truth") {
    FmcwParams params = small_params(100, 16);
    SimScenario sc;
    sc.params = params;
    sc.emitters = {target(50.0, 0.0, 10.0)};
    sc.noise_power = 0.0;
    const RangeDopplerMap map =
        range_doppler_map(synthesize_samples(sc), params, default_pad_m(params), default_pad_n(params));
    const auto peaks = find_peaks(map, 1);
    CHECK(std::abs(peaks[0].range_m - 50.0) <= map.range_per_bin);
}

TEST_CASE("coding leaves targets untouched and shifts interferers by half the band") {
    FmcwParams params = small_params(32, 64);
    const auto [x, y] = doppler_shift_pair(64);
    SimScenario sc;
    sc.params = params;
    sc.emitters = {target(30.0, 6.0, 20.0)};
    sc.noise_power = 0.0;
    const int pad_n = default_pad_n(params);
    SimScenario coded = sc;
    coded.coding = {CodingKind::pair, random_unimodular_code(64, 3), random_unimodular_code(64, 4)};
    const RangeDopplerMap a = range_doppler_map(synthesize_samples(sc), params, 32, pad_n);
    const RangeDopplerMap b = range_doppler_map(synthesize_samples(coded), params, 32, pad_n);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-9);

    SimScenario intf = sc;
    intf.emitters = {interferer(45.0, 12.0, 20.0)};
    SimScenario shifted = intf;
    shifted.coding = {CodingKind::pair, x, y};
    const Peak before = find_peaks(range_doppler_map(synthesize_samples(intf), params, 32, pad_n), 1)[0];
    const Peak after = find_peaks(range_doppler_map(synthesize_samples(shifted), params, 32, pad_n), 1)[0];
    CHECK(after.k == before.k);
    CHECK(wrap(after.p - before.p, pad_n) == pad_n / 2);
}

TEST_CASE("noise floor") {
    FmcwParams params = small_params(8, 8);
    SimScenario sc;
    sc.params = params;
    sc.emitters = {target(20.0, 0.0, -300.0)};
    sc.noise_power = 2.0;
    double mean = 0.0;
    for (std::uint64_t t = 1; t <= 100; ++t) {
        sc.seed = t;
        mean += range_doppler_map(synthesize_samples(sc), params, 8, 8).values.squaredNorm() / 64.0;
    }
    mean /= 100.0;
    CHECK(std::abs(mean / (2.0 * 64.0) - 1.0) < 0.05);
}

TEST_CASE("peak search limits and wrap") {
    RangeDopplerMap map;
    map.values = CMatrix::Zero(4, 8);
    map.values(1, 7) = 3.0;
    map.values(1, 0) = 2.0;
    map.values(2, 3) = 1.0;
    map.range_per_bin = 1.0;
    map.velocity_per_bin = 0.5;
    const auto all = find_peaks(map, 5);
    REQUIRE(all.size() == 2);
    CHECK(all[0].p == 7);
    CHECK(all[0].velocity_mps == doctest::Approx(-0.5));
    CHECK(all[1].p == 3);
    CHECK(all[1].db == doctest::Approx(20.0 * std::log10(1.0 / 3.0)));
    const auto low = find_peaks(map, 5, 2);
    REQUIRE(low.size() == 1);
    CHECK(low[0].p == 7);
    CHECK_THROWS_AS(find_peaks(map, 0), ConfigError);
}

TEST_CASE("power ratio") {
    CHECK(power_ratio_db(1.0, 1.0, 0.0, 0.0, 0.0) == doctest::Approx(10.0 * std::log10(4.0 * kPi)));
    CHECK(power_ratio_db(50.0, 70.0, 0.0, 0.0, 0.0) ==
          doctest::Approx(10.0 * std::log10(4.0 * kPi * std::pow(50.0, 4) / 4900.0)));
    CHECK(power_ratio_db(50.0, 70.0, 0.0, 0.0, 0.0) == doctest::Approx(42.0).epsilon(0.01));
    CHECK(power_ratio_db(100.0, 70.0, 0.0, 0.0, 0.0) - power_ratio_db(50.0, 70.0, 0.0, 0.0, 0.0) ==
          doctest::Approx(12.0412).epsilon(1e-4));
    CHECK_THROWS_AS(power_ratio_db(0.0, 1.0, 0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("map export formats") {
    RangeDopplerMap map;
    map.values = CMatrix::Zero(2, 2);
    map.values(0, 1) = cdouble(1.5, -2.0);
    map.values(1, 0) = cdouble(0.25, 0.0);
    map.range_per_bin = 0.3;
    map.velocity_per_bin = 0.1;
    const auto dir = std::filesystem::temp_directory_path();

    write_rd_csv(map, dir / "slowcode_rd.csv");
    std::ifstream csv(dir / "slowcode_rd.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "k,p,db");
    std::getline(csv, line);
    CHECK(line == "0,0,-300");
    std::getline(csv, line);
    CHECK(line == "0,1,0");

    write_rd_binary(map, dir / "slowcode_rd.bin");
    std::ifstream bin(dir / "slowcode_rd.bin", std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 2 * 2 * 2 * 8);
    // Second value pair is (1.5, -2.0); 1.5 = 0x3FF8000000000000 little-endian.
    CHECK(bytes[16 + 7] == 0x3F);
    CHECK(bytes[16 + 6] == 0xF8);
    CHECK(bytes[24 + 7] == 0xC0);

    const auto side = rd_sidecar(map);
    CHECK(side.at("rows") == 2);
    CHECK(side.at("dtype") == "float64 little-endian");
    std::filesystem::remove(dir / "slowcode_rd.csv");
    std::filesystem::remove(dir / "slowcode_rd.bin");
}
