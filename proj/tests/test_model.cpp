#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hcu/model.hpp"
#include "hcu/rng.hpp"

using namespace hcu;

TEST_CASE("three-item rate matrix") {
    const auto A = build_rate_matrix(GlvKinetics::canonical_three());
    REQUIRE(A.n == 3);
    CHECK(A(0, 0) == 0.0);
    CHECK(A(0, 1) == 2.0);
    CHECK(A(0, 2) == 0.2);
    CHECK(A(1, 0) == 0.2);
    CHECK(A(1, 2) == 2.0);
    CHECK(A(2, 0) == 2.0);
    CHECK(A(2, 1) == 0.2);

    const auto S = build_rate_matrix(GlvKinetics::three(1.0, 0.7, 0.7));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(S(i, j) == S(j, i));
}

TEST_CASE("nine-item rate matrix matches the literal block table") {
    const auto A = build_rate_matrix(GlvKinetics::canonical_nine(0.3));
    REQUIRE(A.n == 9);
    // independent literal expansion: diagonal blocks m0 (rock-paper-scissors),
    // super-diagonal m_d (d diag, r off), sub-diagonal m_f (f diag, r off),
    // cyclically wrapped
    const double m0[3][3] = {{0, 2, 0.2}, {0.2, 0, 2}, {2, 0.2, 0}};
    const double md[3][3] = {{2, 1.25, 1.25}, {1.25, 2, 1.25}, {1.25, 1.25, 2}};
    const double mf[3][3] = {{0.3, 1.25, 1.25}, {1.25, 0.3, 1.25}, {1.25, 1.25, 0.3}};
    const double (*blocks[3][3])[3] = {
        {m0, md, mf},
        {mf, m0, md},
        {md, mf, m0},
    };
    for (int bi = 0; bi < 3; ++bi)
        for (int bj = 0; bj < 3; ++bj)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(A(3 * bi + i, 3 * bj + j) == blocks[bi][bj][i][j]);
    // spot values called out explicitly
    CHECK(A(0, 3) == 2.0);
    CHECK(A(0, 4) == 1.25);
    CHECK(A(0, 6) == 0.3);
    CHECK(A(0, 7) == 1.25);
}

namespace {

CouplingMatrix empty_coupling(int n) {
    CouplingMatrix K(n);
    K.finalize();
    return K;
}

} // namespace

TEST_CASE("rhs vanishes at the single-unit equilibria") {
    const auto kin = GlvKinetics::canonical_three();
    const auto A = build_rate_matrix(kin);
    const auto K = empty_coupling(1);
    const double gamma = 1.3;
    const auto pf = ParameterField::uniform(1, gamma, 0.0);

    SystemState saddle(1, 3);
    saddle.at(0, 0) = kin.rho / gamma;
    auto d = rhs(saddle, kin.rho, pf, A, K);
    for (double v : d.values) CHECK(std::fabs(v) < 1e-15);

    SystemState coex(1, 3, kin.rho / (2.0 + 0.2 + gamma));
    d = rhs(coex, kin.rho, pf, A, K);
    for (double v : d.values) CHECK(std::fabs(v) < 1e-15);
}

TEST_CASE("identical coupled units receive zero coupling input") {
    const auto kin = GlvKinetics::canonical_three();
    const auto A = build_rate_matrix(kin);
    CouplingMatrix K(2);
    K.add(0, 1, 0.7);
    K.add(1, 0, 0.7);
    K.finalize();
    const auto pf = ParameterField::uniform(2, 1.11, 0.0);

    CounterRng rng(411);
    SystemState s(2, 3);
    for (int i = 0; i < 3; ++i) {
        const double v = rng.uniform();
        s.at(0, i) = v;
        s.at(1, i) = v;
    }
    const auto coupled = rhs(s, kin.rho, pf, A, K);
    const auto uncoupled = rhs(s, kin.rho, pf, A, empty_coupling(2));
    for (std::size_t i = 0; i < coupled.values.size(); ++i)
        CHECK(coupled.values[i] == uncoupled.values[i]);
}

TEST_CASE("non-negative orthant is forward-invariant") {
    const auto kin = GlvKinetics::canonical_nine(0.4);
    const auto A = build_rate_matrix(kin);
    CouplingMatrix K(3);
    K.add(1, 0, 0.5);
    K.add(2, 1, 0.3);
    K.add(0, 2, 0.2);
    K.finalize();
    const auto pf = ParameterField::uniform(3, 1.2, 0.0);
    CounterRng rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        SystemState s(3, 9);
        for (double& v : s.values) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
        const auto d = rhs(s, kin.rho, pf, A, K);
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (s.values[i] == 0.0) CHECK(d.values[i] >= 0.0);
    }
}

TEST_CASE("rhs is linear in the coupling matrix") {
    const auto kin = GlvKinetics::canonical_three();
    const auto A = build_rate_matrix(kin);
    const auto pf = ParameterField::uniform(4, 0.9, 0.0);
    CouplingMatrix K1(4), K2(4), K12(4);
    K1.add(1, 0, 0.4);
    K1.add(2, 1, 0.1);
    K2.add(1, 0, 0.25); // overlaps K1 entry
    K2.add(3, 2, 0.6);
    K12.add(1, 0, 0.65);
    K12.add(2, 1, 0.1);
    K12.add(3, 2, 0.6);
    K1.finalize();
    K2.finalize();
    K12.finalize();

    CounterRng rng(8231);
    SystemState s(4, 3);
    for (double& v : s.values) v = rng.uniform();
    const auto d1 = rhs(s, kin.rho, pf, A, K1);
    const auto d12 = rhs(s, kin.rho, pf, A, K12);
    // d12 - d1 must equal the pure-coupling contribution of K2
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 3; ++i) {
            double pure = 0.0;
            for (int l = 0; l < 4; ++l)
                pure += K2.at(k, l) * (s.at(l, i) - s.at(k, i));
            CHECK(d12.at(k, i) - d1.at(k, i) == doctest::Approx(pure).epsilon(1e-12));
        }
}

TEST_CASE("rhs agrees with a loop-free scalar reference for N=1") {
    const auto kin = GlvKinetics::canonical_three();
    const auto A = build_rate_matrix(kin);
    const auto K = empty_coupling(1);
    const double gamma = 1.11, rho = kin.rho, c = 2.0, e = 0.2;
    const auto pf = ParameterField::uniform(1, gamma, 0.0);
    CounterRng rng(314159);
    for (int trial = 0; trial < 1000; ++trial) {
        const double s0 = rng.uniform(), s1 = rng.uniform(), s2 = rng.uniform();
        SystemState s(1, 3);
        s.at(0, 0) = s0;
        s.at(0, 1) = s1;
        s.at(0, 2) = s2;
        const auto d = rhs(s, rho, pf, A, K);
        const double ref[3] = {rho * s0 - gamma * s0 * s0 - s0 * (c * s1 + e * s2),
                               rho * s1 - gamma * s1 * s1 - s1 * (c * s2 + e * s0),
                               rho * s2 - gamma * s2 * s2 - s2 * (c * s0 + e * s1)};
        for (int i = 0; i < 3; ++i) // identical up to association order of Eq-level terms
            CHECK(std::fabs(d.at(0, i) - ref[i]) <= 4e-16 * (1.0 + std::fabs(ref[i])));
    }
}

TEST_CASE("rhs is deterministic and rejects shape mismatches") {
    const auto kin = GlvKinetics::canonical_three();
    const auto A = build_rate_matrix(kin);
    const auto K = empty_coupling(2);
    const auto pf = ParameterField::uniform(2, 1.0, 0.0);
    SystemState s(2, 3, 0.25);
    const auto d1 = rhs(s, kin.rho, pf, A, K);
    const auto d2 = rhs(s, kin.rho, pf, A, K);
    CHECK(d1.values == d2.values);

    SystemState wrong(3, 3, 0.25);
    CHECK_THROWS_AS(rhs(wrong, kin.rho, pf, A, K), ConfigError);
}

TEST_CASE("kinetics validation") {
    CHECK_THROWS_AS(GlvKinetics::three(0.0, 2.0, 0.2), ConfigError);
    CHECK_THROWS_AS(GlvKinetics::three(1.0, -1.0, 0.2), ConfigError);
    CHECK_THROWS_AS(GlvKinetics::nine(1.0, 2.0, 0.2, 2.0, -0.1, 1.25), ConfigError);
    CHECK_NOTHROW(GlvKinetics::canonical_nine(0.4));
}
