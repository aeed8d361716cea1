#pragma once
#include <array>
#include <variant>

#include "hcu/errors.hpp"

namespace hcu {

// Rock-paper-scissors competition among three items.
struct ThreeItemRates {
    double c;
    double e;
};

// Block-circulant competition among nine items (three groups of three).
struct NineItemRates {
    double c;
    double e;
    double d;
    double f;
    double r;
};

// Intrinsic rate parameters of one heteroclinic unit.
struct GlvKinetics {
    double rho = 1.0;
    std::variant<ThreeItemRates, NineItemRates> rates;

    int item_count() const {
        return std::holds_alternative<ThreeItemRates>(rates) ? 3 : 9;
    }

    static GlvKinetics three(double rho, double c, double e);
    static GlvKinetics nine(double rho, double c, double e, double d, double f, double r);

    // c=2, e=0.2, rho=1.
    static GlvKinetics canonical_three() { return three(1.0, 2.0, 0.2); }
    // c=d=2, e=0.2, r=1.25; f is 0.3 or 0.4 depending on the experiment.
    static GlvKinetics canonical_nine(double f) { return nine(1.0, 2.0, 0.2, 2.0, f, 1.25); }
};

// Dense n x n competition matrix, zero diagonal. A(i,j) is the rate with
// which item j suppresses item i within the same unit.
struct RateMatrix {
    int n = 0;
    std::array<double, 81> a{};

    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
};

RateMatrix build_rate_matrix(const GlvKinetics& kinetics);

} // namespace hcu
