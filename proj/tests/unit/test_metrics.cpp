#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "../oracles.hpp"
#include "slowcode/metrics.hpp"
#include "slowcode/pcaf.hpp"
#include "slowcode/siso.hpp"

using namespace slowcode;

TEST_CASE("psl of trivial regions") {
    const Code z = random_unimodular_code(8, 3);
    const PcafGrid self = pcaf_grid(z, z, 3, 16);
    RegionSpec mainlobe = RegionSpec::zero_delay(0);
    CHECK(psl_db(self, mainlobe) == doctest::Approx(0.0).epsilon(1e-12));

    mainlobe.exclusions.emplace_back(0, 0);
    CHECK_THROWS_AS(psl_db(self, mainlobe), DomainError);

    const PcafGrid zeros(8, 3, 16, CMatrix::Zero(15, 7));
    CHECK(psl_db(zeros, RegionSpec::all_lags(3)) == kDbFloor);
    CHECK(magnitude_db(0.0, 8.0) == kDbFloor);
}

TEST_CASE("isl against direct accumulation") {
    const Code x = random_unimodular_code(8, 5);
    const Code y = random_unimodular_code(8, 6);
    const PcafGrid g = pcaf_grid(x, y, 3, 16);

    DesignConfig cfg;
    cfg.n_len = 8;
    cfg.p_max = 3;
    cfg.n_f = 16;
    CHECK(isl(g, RegionSpec::all_lags(3)) == doctest::Approx(objective_siso(x, y, cfg)).epsilon(1e-12));

    RegionSpec band;
    band.lags = std::vector<int>{-2, 0, 5};
    band.p_max = 2;
    double acc = 0.0;
    for (int l : {-2, 0, 5}) {
        for (int p = -2; p <= 2; ++p) acc += std::norm(oracle::pcaf(x.entries(), y.entries(), l, p, 16));
    }
    CHECK(isl(g, band) == doctest::Approx(acc).epsilon(1e-10));

    RegionSpec one;
    one.lags = std::vector<int>{3};
    one.p_max = 0;
    CHECK(isl(g, one) == doctest::Approx(std::norm(g.at(3, 0))).epsilon(1e-12));
}

TEST_CASE("metrics grow with the region and ignore global phase") {
    const Code x = random_unimodular_code(16, 8);
    const Code y = random_unimodular_code(16, 9);
    const PcafGrid g = pcaf_grid(x, y, 6, 32);
    double prev_psl = -1e9, prev_isl = 0.0;
    for (int p = 0; p <= 6; ++p) {
        const double v = psl_db(g, RegionSpec::zero_delay(p));
        const double e = isl(g, RegionSpec::zero_delay(p));
        CHECK(v >= prev_psl);
        CHECK(e >= prev_isl);
        prev_psl = v;
        prev_isl = e;
    }
    CHECK(psl_db(g, RegionSpec::all_lags(6)) >= psl_db(g, RegionSpec::zero_delay(6)));

    std::vector<double> shifted = x.phases();
    for (auto& ph : shifted) ph += 1.234;
    const PcafGrid rotated = pcaf_grid(Code::from_phases(shifted), y, 6, 32);
    CHECK(psl_db(rotated, RegionSpec::all_lags(6)) ==
          doctest::Approx(psl_db(g, RegionSpec::all_lags(6))).epsilon(1e-12));
}

TEST_CASE("region text format") {
    const RegionSpec r = RegionSpec::parse("lags=-3..2;pmax=5;exclude=0:0,1:-2");
    REQUIRE(r.lags.has_value());
    CHECK(r.lags->size() == 6);
    CHECK(r.p_max == 5);
    CHECK(r.exclusions.size() == 2);
    CHECK_FALSE(r.contains(0, 0));
    CHECK(r.contains(0, 1));
    CHECK_FALSE(r.contains(3, 0));
    CHECK_FALSE(r.contains(0, 6));
    CHECK(RegionSpec::parse(r.to_string()).to_string() == r.to_string());

    CHECK_FALSE(RegionSpec::parse("lags=all;pmax=2").lags.has_value());
    CHECK(RegionSpec::parse("lags=0;pmax=2").lags->front() == 0);
    CHECK_THROWS_AS(RegionSpec::parse("lags=all"), ConfigError);
    CHECK_THROWS_AS(RegionSpec::parse("lags=x;pmax=1"), ConfigError);
    CHECK_THROWS_AS(RegionSpec::parse("lags=3..1;pmax=1"), ConfigError);
    CHECK_THROWS_AS(RegionSpec::parse("pmax=1;color=red"), ConfigError);

    const PcafGrid g = pcaf_grid(Code::ones(4), Code::ones(4), 1, 8);
    CHECK_THROWS_AS(region_cells(g, RegionSpec::zero_delay(2)), DomainError);
    CHECK_THROWS_AS(region_cells(g, RegionSpec::parse("lags=5;pmax=1")), InvalidLag);
    CHECK_THROWS_AS(region_cells(g, RegionSpec::parse("lags=0;pmax=1;exclude=1:0")), DomainError);
}

TEST_CASE("zero-delay cut of the Doppler-shift pair") {
    const auto [x, y] = doppler_shift_pair(64);
    const PcafGrid g = pcaf_grid(x, y, 40, 128);
    const std::vector<double> cut = zero_delay_cut(g);
    REQUIRE(cut.size() == 81);
    for (int p = -40; p <= 40; ++p) {
        const double f = static_cast<double>(p) / 128 + 0.5;
        const double expected = std::abs(std::sin(64 * kPi * f) / std::sin(kPi * f));
        CHECK(std::abs(std::pow(10.0, cut[static_cast<std::size_t>(p + 40)] / 20.0) * 64 - expected) < 1e-9);
    }

    const PcafGrid flat = pcaf_grid(Code::ones(16), Code::ones(16), 4, 32);
    CHECK(zero_delay_cut(flat)[4] == doctest::Approx(0.0).epsilon(1e-12));

    const auto path = std::filesystem::temp_directory_path() / "slowcode_cut.csv";
    write_cut_csv(cut, 40, path);
    std::ifstream in(path);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "p,db");
    CHECK(first.rfind("-40,", 0) == 0);
    std::filesystem::remove(path);

    const auto report = metrics_report(g, RegionSpec::zero_delay(40), {"x", "y"});
    CHECK(report.at("psl_db").get<double>() < -10.0);
    CHECK(report.at("region").get<std::string>() == "lags=0;pmax=40");
}
