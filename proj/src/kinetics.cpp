#include "hcu/kinetics.hpp"

#include <cmath>

namespace hcu {

namespace {

void require_rate(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
        throw ConfigError(std::string("kinetics: rate '") + name + "' must be finite and >= 0");
}

} // namespace

GlvKinetics GlvKinetics::three(double rho, double c, double e) {
    if (!std::isfinite(rho) || rho <= 0.0) throw ConfigError("kinetics: rho must be > 0");
    require_rate(c, "c");
    require_rate(e, "e");
    return GlvKinetics{rho, ThreeItemRates{c, e}};
}

GlvKinetics GlvKinetics::nine(double rho, double c, double e, double d, double f, double r) {
    if (!std::isfinite(rho) || rho <= 0.0) throw ConfigError("kinetics: rho must be > 0");
    require_rate(c, "c");
    require_rate(e, "e");
    require_rate(d, "d");
    require_rate(f, "f");
    require_rate(r, "r");
    return GlvKinetics{rho, NineItemRates{c, e, d, f, r}};
}

RateMatrix build_rate_matrix(const GlvKinetics& kinetics) {
    RateMatrix A;
    if (const auto* t = std::get_if<ThreeItemRates>(&kinetics.rates)) {
        A.n = 3;
        for (int i = 0; i < 3; ++i) {
            A(i, (i + 1) % 3) = t->c;
            A(i, (i + 2) % 3) = t->e;
        }
        return A;
    }
    const auto& p = std::get<NineItemRates>(kinetics.rates);
    A.n = 9;
    // 3x3 blocks: m0 on the diagonal, m_d on the super-diagonal, m_f on the
    // sub-diagonal, wrapped cyclically. Block row bi has m0 at block column
    // bi, m_d at bi+1 mod 3, m_f at bi+2 mod 3.
    auto fill_m0 = [&](int bi, int bj) {
        for (int i = 0; i < 3; ++i) {
            A(3 * bi + i, 3 * bj + (i + 1) % 3) = p.c;
            A(3 * bi + i, 3 * bj + (i + 2) % 3) = p.e;
        }
    };
    auto fill_const_diag = [&](int bi, int bj, double diag) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                A(3 * bi + i, 3 * bj + j) = (i == j) ? diag : p.r;
    };
    for (int bi = 0; bi < 3; ++bi) {
        fill_m0(bi, bi);
        fill_const_diag(bi, (bi + 1) % 3, p.d);
        fill_const_diag(bi, (bi + 2) % 3, p.f);
    }
    return A;
}

} // namespace hcu
