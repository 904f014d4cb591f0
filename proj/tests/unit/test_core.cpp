#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "slowcode/core.hpp"
#include "slowcode/serialization.hpp"

using namespace slowcode;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("slowcode_core_" + name);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("random codes are seeded and unimodular") {
    const Code a = random_unimodular_code(4, 7);
    const Code b = random_unimodular_code(4, 7);
    CHECK(a.phases() == b.phases());
    CHECK(random_unimodular_code(4, 8).phases() != a.phases());

    const Code big = random_unimodular_code(256, 1);
    CHECK(unimodularity_error(big.entries()) <= 1e-12);
    CHECK(std::abs(big.entries().mean()) < 0.2);
}

TEST_CASE("code construction enforces the invariants") {
    CHECK_THROWS_AS(Code::from_phases({0.0}), InvalidDimension);
    CHECK_THROWS_AS(Code::from_phases({0.0, NAN}), ValidationError);

    CVector near(3);
    near << 1.0, cdouble(0.0, 1.0), -1.0;
    CHECK_NOTHROW(Code::from_entries(near));
    near[1] = cdouble(0.0, 1.0 + 1e-10);
    CHECK_THROWS_AS(Code::from_entries(near), ValidationError);
    near[1] = cdouble(0.0, 1.0 - 1e-10);
    CHECK_THROWS_AS(Code::from_entries(near), ValidationError);
    near[1] = cdouble(0.0, 1.0 + 1e-13);
    CHECK_NOTHROW(Code::from_entries(near));

    CVector zero = CVector::Ones(3);
    zero[2] = 0.0;
    CHECK_THROWS_AS(Code::project(zero), DomainError);
    CVector scaled(2);
    scaled << cdouble(3.0, 0.0), cdouble(0.0, -0.5);
    const Code projected = Code::project(scaled);
    CHECK(std::abs(projected[1] - cdouble(0.0, -1.0)) < 1e-15);

    CHECK_THROWS_AS(CodeSet("X", {}), InvalidDimension);
    CHECK_THROWS_AS(CodeSet("X", {Code::ones(4), Code::ones(5)}), ValidationError);
}

TEST_CASE("config invariants") {
    DesignConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.n_f = cfg.n_len;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.p_max = cfg.n_f;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.outer_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.inner_cap = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    FmcwParams params;
    CHECK(params.prf() == doctest::Approx(20000.0));
    params.t_c = 0.0;
    CHECK_THROWS_AS(params.validate(), ConfigError);

    Emitter e;
    CHECK_THROWS_AS(e.validate(), ConfigError);
    e.range_m = 10.0;
    CHECK_NOTHROW(e.validate());
}

TEST_CASE("rng streams do not depend on the standard library distributions") {
    Rng rng(42);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal();
        sum += v;
        sum_sq += v * v;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sum_sq / n - 1.0) < 0.05);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("enum names round-trip") {
    CHECK(zeta_mode_from_string(to_string(ZetaMode::exact)) == ZetaMode::exact);
    CHECK(gamma_mode_from_string(to_string(GammaMode::exact)) == GammaMode::exact);
    CHECK(aux_init_from_string(to_string(AuxInit::closed_form)) == AuxInit::closed_form);
    CHECK(emitter_kind_from_string(to_string(EmitterKind::interferer)) == EmitterKind::interferer);
    CHECK_THROWS_AS(zeta_mode_from_string("loose"), ConfigError);
    CHECK_THROWS_AS(aux_init_from_string("zero"), ConfigError);
}

TEST_CASE("codebook round-trip keeps phases bit for bit") {
    std::vector<CodeSet> sets{CodeSet("X", {random_unimodular_code(16, 1), random_unimodular_code(16, 2)}),
                              CodeSet("Y", {random_unimodular_code(16, 3)})};
    const auto path = temp_file("roundtrip.json");
    serialize_codebook(sets, path);
    const auto back = deserialize_codebook(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].label() == "X");
    CHECK(back[1].count() == 1);
    for (std::size_t s = 0; s < sets.size(); ++s) {
        for (std::size_t m = 0; m < sets[s].count(); ++m) CHECK(back[s][m].phases() == sets[s][m].phases());
    }
    std::filesystem::remove(path);
}

TEST_CASE("codebook reader rejects invalid content") {
    const auto path = temp_file("bad.json");

    write_text(path, R"({"n_len": 2, "sets": [{"label": "X", "entries": [[[0.5, 0.0], [1.0, 0.0]]]}]})");
    CHECK_THROWS_AS(deserialize_codebook(path), ValidationError);

    write_text(path, R"({"n_len": 3, "sets": [{"label": "X", "phases": [[0, 0, 0], [0, 0]]}]})");
    CHECK_THROWS_AS(deserialize_codebook(path), ValidationError);

    write_text(path, R"({"n_len": 2, "sets": [{"label": "X", "phases": [[0, 0]]}]  )");
    CHECK_THROWS_AS(deserialize_codebook(path), ParseError);

    write_text(path, R"({"n_len": 2, "sets": [{"label": "X", "entries": [[[1.0, 0.0], [0.0, -1.0]]]}]})");
    const auto ok = deserialize_codebook(path);
    CHECK(std::abs(ok[0][0][1] - cdouble(0.0, -1.0)) < 1e-15);

    std::filesystem::remove(path);
}

TEST_CASE("design config JSON") {
    DesignConfig cfg;
    cfg.n_len = 32;
    cfg.p_max = 16;
    cfg.n_f = 64;
    cfg.seed = 99;
    cfg.zeta_mode = ZetaMode::exact;
    cfg.aux_init = AuxInit::closed_form;
    const DesignConfig back = design_config_from_json(to_json(cfg));
    CHECK(back.n_len == 32);
    CHECK(back.p_max == 16);
    CHECK(back.seed == 99);
    CHECK(back.zeta_mode == ZetaMode::exact);
    CHECK(back.aux_init == AuxInit::closed_form);

    CHECK(design_config_from_json(nlohmann::json::object()).n_len == DesignConfig{}.n_len);
    CHECK_THROWS_AS(design_config_from_json({{"n_lenn", 4}}), ConfigError);
    CHECK_THROWS_AS(design_config_from_json({{"n_len", "four"}}), ConfigError);
}
