#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hcu/equilibria.hpp"
#include "hcu/model.hpp"
#include "hcu/rng.hpp"

using namespace hcu;

namespace {

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

} // namespace

TEST_CASE("gamma_crit_three") {
    CHECK(gamma_crit_three(2.0, 0.2) == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(gamma_crit_three(0.7, 0.7) == doctest::Approx(0.7));
    CHECK(gamma_crit_three(2.0, 0.2) == gamma_crit_three(0.2, 2.0));
}

TEST_CASE("saddle and coexistence points") {
    const auto kin = GlvKinetics::canonical_three();
    const auto pts = saddle_and_coexistence_points(kin, 1.11);
    CHECK(pts.coexistence == doctest::Approx(1.0 / 3.31).epsilon(1e-14));
    CHECK(saddle_and_coexistence_points(kin, 1.0).axis_saddle == doctest::Approx(1.0));

    // residual of the coexistence point through the full model rhs
    SystemState s(1, 3, pts.coexistence);
    CouplingMatrix K(1);
    K.finalize();
    const auto pf = ParameterField::uniform(1, 1.11, 0.0);
    const auto d = rhs(s, kin.rho, pf, build_rate_matrix(kin), K);
    for (double v : d.values) CHECK(std::fabs(v) < 1e-14);
}

TEST_CASE("forced equilibria: uncoupled limit and frozen point") {
    const ReducedParams base{0.6, 1.11, 0.0, 2.0, 0.2, 1.0};

    ReducedParams p0 = base;
    const auto eq0 = forced_equilibria(p0);
    CHECK(eq0.one_item.exists);
    CHECK(eq0.one_item.point[0] == doctest::Approx(1.0 / 1.11).epsilon(1e-14));

    ReducedParams p8 = base;
    p8.delta = 0.8;
    const auto eq8 = forced_equilibria(p8);
    REQUIRE(eq8.one_item.exists);
    CHECK(eq8.one_item.point[0] == doctest::Approx(1.1897797852012344).epsilon(1e-13));
    CHECK(norm3(reduced_rhs(eq8.one_item.point, p8)) < 1e-12);
    CHECK(eq8.one_item.stability == StabilityClass::stable_node);
}

TEST_CASE("forced equilibria: stability ladder across delta") {
    ReducedParams p{0.6, 1.11, 0.0, 2.0, 0.2, 1.0};

    p.delta = 0.05;
    auto eq = forced_equilibria(p);
    REQUIRE(eq.three_item.exists);
    CHECK(eq.three_item.stability == StabilityClass::stable_focus_node);

    p.delta = 0.17;
    eq = forced_equilibria(p);
    REQUIRE(eq.three_item.exists);
    CHECK(eq.three_item.stability == StabilityClass::stable_node);

    p.delta = 0.2;
    eq = forced_equilibria(p);
    CHECK(!eq.three_item.exists); // negative coordinate outside the orthant
    REQUIRE(eq.two_item.exists);
    CHECK(eq.two_item.stability == StabilityClass::stable_node);

    p.delta = 0.8;
    eq = forced_equilibria(p);
    REQUIRE(eq.one_item.exists);
    CHECK(eq.one_item.stability == StabilityClass::stable_node);
}

TEST_CASE("forced equilibria: residual property over random draws") {
    CounterRng rng(7741);
    for (int trial = 0; trial < 1000; ++trial) {
        ReducedParams p{rng.uniform(0.5, 1.05), rng.uniform(1.11, 2.5),
                        rng.uniform(0.0, 1.0), 2.0, 0.2, 1.0};
        const auto eq = forced_equilibria(p);
        for (const Equilibrium* e : {&eq.one_item, &eq.two_item, &eq.three_item}) {
            if (!e->exists) continue;
            CHECK(norm3(reduced_rhs(e->point, p)) < 1e-10 * (1.0 + norm3(e->point)));
        }
    }
}

TEST_CASE("jacobian: analytic 1S triple, trace identity, solver cross-check") {
    const ReducedParams p{0.6, 1.11, 0.8, 2.0, 0.2, 1.0};
    const auto eq = forced_equilibria(p).one_item;
    REQUIRE(eq.exists);
    const double sa = eq.point[0];
    const double expected[3] = {-2.0 * sa * p.gamma_d - p.delta + p.rho,
                                -sa * p.c - p.delta + p.rho,
                                -sa * p.e - p.delta + p.rho};
    const auto J = jacobian_reduced(eq.point, p);
    auto eigs = eigenvalues_3x3(J);
    std::sort(eigs.begin(), eigs.end(),
              [](auto a, auto b) { return a.real() < b.real(); });
    std::array<double, 3> exp_sorted = {expected[0], expected[1], expected[2]};
    std::sort(exp_sorted.begin(), exp_sorted.end());
    for (int i = 0; i < 3; ++i) {
        CHECK(std::fabs(eigs[i].imag()) < 1e-10);
        CHECK(eigs[i].real() == doctest::Approx(exp_sorted[i]).epsilon(1e-10));
    }

    const double trace = J[0][0] + J[1][1] + J[2][2];
    CHECK(trace ==
          doctest::Approx(eigs[0].real() + eigs[1].real() + eigs[2].real()).epsilon(1e-10));

    // closed-form vs Durand-Kerner on random matrices
    CounterRng rng(99173);
    for (int trial = 0; trial < 200; ++trial) {
        std::array<std::array<double, 3>, 3> m;
        for (auto& row : m)
            for (auto& v : row) v = rng.uniform(-2.0, 2.0);
        const auto a = eigenvalues_3x3(m);
        const auto b = eigenvalues_3x3_iterative(m);
        for (int i = 0; i < 3; ++i) { // nearest-match; conjugate order may differ
            double best = 1e300;
            for (int j = 0; j < 3; ++j) best = std::min(best, std::abs(a[i] - b[j]));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("critical couplings: frozen values and independent bisection") {
    const auto cc = critical_couplings(0.6, 1.11, 2.0, 0.2, 1.0);
    CHECK(cc.unique_region);
    CHECK(cc.delta_c1 == doctest::Approx(0.7634966757171099).epsilon(1e-12));
    CHECK(cc.delta_c2 == doctest::Approx(0.1853069839659922).epsilon(1e-12));
    REQUIRE(cc.delta_c3_valid);
    // gamma_D = 1.11 puts the driven unit just inside the coexistence
    // regime (gamma_crit = 1.1), so the Hopf threshold is absent.
    CHECK(!cc.delta_c4_valid);
    CHECK(cc.delta_c4 == 0.0);
    CHECK(cc.delta_c4 < cc.delta_c3);
    CHECK(cc.delta_c3 < cc.delta_c2);
    CHECK(cc.delta_c2 < cc.delta_c1);

    // with the driven unit below gamma_crit the Hopf threshold reappears
    const auto cc2 = critical_couplings(0.6, 1.05, 2.0, 0.2, 1.0);
    REQUIRE(cc2.delta_c3_valid);
    REQUIRE(cc2.delta_c4_valid);
    CHECK(cc2.delta_c4 > 0.0);
    CHECK(cc2.delta_c4 < cc2.delta_c3);
    CHECK(cc2.delta_c3 < cc2.delta_c2);
    CHECK(cc2.delta_c2 < cc2.delta_c1);

    // bisection on the expanding 1S eigenvalue -S_a e - delta + rho
    auto expanding = [](double delta) {
        ReducedParams p{0.6, 1.11, delta, 2.0, 0.2, 1.0};
        const auto eq = forced_equilibria(p).one_item;
        REQUIRE(eq.exists);
        return -eq.point[0] * p.e - delta + p.rho;
    };
    double lo = 0.0, hi = 1.0;
    REQUIRE(expanding(lo) > 0.0);
    REQUIRE(expanding(hi) < 0.0);
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (expanding(mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(std::fabs(0.5 * (lo + hi) - cc.delta_c1) < 1e-8);
}

TEST_CASE("1S stability flips exactly at delta_c1") {
    const auto cc = critical_couplings(0.6, 1.11, 2.0, 0.2, 1.0);
    ReducedParams p{0.6, 1.11, cc.delta_c1 - 1e-4, 2.0, 0.2, 1.0};
    CHECK(forced_equilibria(p).one_item.stability == StabilityClass::saddle);
    p.delta = cc.delta_c1 + 1e-4;
    CHECK(forced_equilibria(p).one_item.stability == StabilityClass::stable_node);
}

TEST_CASE("proliferation combinatorics") {
    CHECK(proliferation_count(1).per_saddle == 1);
    CHECK(proliferation_count(1).per_cycle == 3);
    CHECK(proliferation_count(2).per_saddle == 3);
    CHECK(proliferation_count(2).per_cycle == 9);
    CHECK(proliferation_count(5).per_saddle == 15);
    CHECK(proliferation_count(5).per_cycle == 45);

    CHECK(transition_allowed(EquilibriumLabel::oneS, EquilibriumLabel::twoS));
    CHECK(transition_allowed(EquilibriumLabel::oneS, EquilibriumLabel::threeS));
    CHECK(!transition_allowed(EquilibriumLabel::twoS, EquilibriumLabel::oneS));
    CHECK(transition_allowed(EquilibriumLabel::twoS, EquilibriumLabel::threeS));
    CHECK(!transition_allowed(EquilibriumLabel::threeS, EquilibriumLabel::twoS));
    CHECK(transition_allowed(EquilibriumLabel::threeS, EquilibriumLabel::threeS));

    const auto levels = enumerate_reachable_labels(8);
    for (int n = 1; n <= 8; ++n) {
        const auto pc = proliferation_count(n);
        CHECK(levels[n - 1].total() == pc.per_saddle);
    }
    CHECK(levels[1].total() == 3);
    CHECK(levels[7].total() == 36);
}
