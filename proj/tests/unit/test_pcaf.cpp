#include <doctest.h>

#include <chrono>

#include "../oracles.hpp"
#include "slowcode/pcaf.hpp"
#include "slowcode/siso.hpp"

using namespace slowcode;

namespace {

CVector vec(std::initializer_list<cdouble> v) {
    CVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto z : v) out[i++] = z;
    return out;
}

DesignConfig small_cfg(int n, int p, int n_f) {
    DesignConfig cfg;
    cfg.n_len = n;
    cfg.p_max = p;
    cfg.n_f = n_f;
    return cfg;
}

}  // namespace

TEST_CASE("circular shift") {
    const CVector z = vec({1.0, cdouble(0, 2), -1.0, cdouble(0, -2)});
    CHECK(shift_apply(z, 0) == z);
    CHECK(shift_apply(z, 1) == vec({cdouble(0, 2), -1.0, cdouble(0, -2), 1.0}));
    for (int n = 2; n <= 8; ++n) {
        const CVector r = random_unimodular_code(n, 5).entries();
        for (int l = -(n - 1); l <= n - 1; ++l) {
            CHECK((shift_apply(r, l) - oracle::shift_matrix(n, l) * r).norm() == 0.0);
        }
        CHECK(shift_apply(r, -1) == shift_apply(r, n - 1));
    }
}

TEST_CASE("pcaf grid against direct summation") {
    const Code ones = Code::ones(4);
    const Code alt = Code::from_entries(vec({1.0, -1.0, 1.0, -1.0}));
    CHECK(std::abs(pcaf_grid(ones, ones, 0, 8).at(0, 0) - 4.0) < 1e-12);
    CHECK(std::abs(std::abs(pcaf_grid(ones, alt, 4, 8).at(0, 4)) - 4.0) < 1e-12);

    const Code x = random_unimodular_code(8, 11);
    const Code y = random_unimodular_code(8, 12);
    const PcafGrid g = pcaf_grid(x, y, 3, 16);
    CHECK(g.values().rows() == 15);
    CHECK(g.values().cols() == 7);
    for (int l = -7; l <= 7; ++l) {
        for (int p = -3; p <= 3; ++p) {
            CHECK(std::abs(g.at(l, p) - oracle::pcaf(x.entries(), y.entries(), l, p, 16)) < 1e-10);
        }
    }
    CHECK_THROWS_AS(static_cast<void>(g.at(8, 0)), InvalidLag);
    CHECK_THROWS_AS(static_cast<void>(g.at(0, 4)), DomainError);

    const PcafGrid self = pcaf_grid(x, x, 3, 16);
    CHECK(self.at(0, 0) == cdouble(8.0, 0.0));
}

TEST_CASE("objective") {
    CHECK(objective_siso(Code::ones(2), Code::ones(2), small_cfg(2, 0, 4)) == doctest::Approx(12.0));
    const Code x = random_unimodular_code(8, 21);
    const Code y = random_unimodular_code(8, 22);
    const double j = objective_siso(x, y, small_cfg(8, 3, 16));
    CHECK(j >= 0.0);
    CHECK(j == doctest::Approx(oracle::objective(x.entries(), y.entries(), 3, 16)).epsilon(1e-12));
}

TEST_CASE("naive quadratic-form matrices") {
    const DesignConfig cfg = small_cfg(8, 3, 16);
    const Code x = random_unimodular_code(8, 31);
    const Code y = random_unimodular_code(8, 32);
    const double j = oracle::objective(x.entries(), y.entries(), 3, 16);

    const CMatrix by = build_B_naive(y, Side::for_y, cfg).matrix;
    const CMatrix bx = build_B_naive(x, Side::for_x, cfg).matrix;
    CHECK(quadratic_form(by, x.entries()) == doctest::Approx(j).epsilon(1e-9));
    CHECK(quadratic_form(bx, y.entries()) == doctest::Approx(j).epsilon(1e-9));
    CHECK(oracle::rel_frobenius(by, oracle::b_for_y(y.entries(), 3, 16)) < 1e-12);
    CHECK(oracle::rel_frobenius(bx, oracle::b_for_x(x.entries(), 3, 16)) < 1e-12);
    CHECK((by - by.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(oracle::min_eigenvalue(by) > -1e-8);

    const CMatrix flat = build_B_naive(Code::ones(4), Side::for_y, small_cfg(4, 0, 8)).matrix;
    CHECK((flat - CMatrix::Constant(4, 4, 7.0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fast quadratic-form matrices equal the naive ones") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Code z = random_unimodular_code(16, seed);
        for (Side side : {Side::for_x, Side::for_y}) {
            const CMatrix fast = build_B_fast(z.entries(), side, 5, 32);
            const CMatrix naive = build_B_naive(z.entries(), side, 5, 32);
            CHECK(oracle::rel_frobenius(fast, naive) < 1e-9);
        }
    }
    const CMatrix flat = build_B_fast(Code::ones(4).entries(), Side::for_y, 0, 9);
    CHECK((flat - CMatrix::Constant(4, 4, 7.0)).cwiseAbs().maxCoeff() < 1e-12);

    // Odd N and P = 0 exercise the edge paths of the circulant assembly.
    const Code odd = random_unimodular_code(7, 77);
    for (Side side : {Side::for_x, Side::for_y}) {
        for (int p : {0, 3}) {
            CHECK(oracle::rel_frobenius(build_B_fast(odd.entries(), side, p, 11),
                                        build_B_naive(odd.entries(), side, p, 11)) < 1e-9);
        }
    }
}

TEST_CASE("periodic autocorrelation and Dirichlet kernel") {
    const CVector z = random_unimodular_code(9, 4).entries();
    const CVector c = periodic_autocorrelation(z);
    for (int l = 0; l < 9; ++l) {
        cdouble acc = 0.0;
        for (int n = 0; n < 9; ++n) acc += z[n] * std::conj(z[oracle::wrap(n + l, 9)]);
        CHECK(std::abs(c[l] - acc) < 1e-12);
    }

    const Eigen::MatrixXd g = dirichlet_gram(6, 2, 16);
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            cdouble acc = 0.0;
            for (int p = -2; p <= 2; ++p) acc += std::polar(1.0, -2.0 * kPi * (a - b) * p / 16);
            CHECK(std::abs(g(a, b) - acc.real()) < 1e-12);
            CHECK(std::abs(acc.imag()) < 1e-12);
        }
    }
}

TEST_CASE("grid argument checks") {
    const Code z = Code::ones(8);
    CHECK_THROWS_AS(pcaf_grid(z, z, 2, 8), InvalidDimension);
    CHECK_THROWS_AS(pcaf_grid(z, Code::ones(9), 2, 16), InvalidDimension);
    CHECK_THROWS_AS(build_B_fast(z.entries(), Side::for_x, 16, 16), InvalidDimension);
    CHECK_THROWS_AS(shift_apply(z, 8), InvalidLag);
}

TEST_CASE("fast assembly is quicker at moderate size") {
    const Code z = random_unimodular_code(64, 9);
    const auto t0 = std::chrono::steady_clock::now();
    const CMatrix fast = build_B_fast(z.entries(), Side::for_y, 20, 128);
    const auto t1 = std::chrono::steady_clock::now();
    const CMatrix naive = build_B_naive(z.entries(), Side::for_y, 20, 128);
    const auto t2 = std::chrono::steady_clock::now();
    CHECK(oracle::rel_frobenius(fast, naive) < 1e-9);
    CHECK((t1 - t0) < (t2 - t1));
}
