#pragma once
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "hcu/kinetics.hpp"

namespace hcu {

// Hopf boundary of a single three-item unit: gamma_crit = (c+e)/2.
double gamma_crit_three(double c, double e);

struct SinglePoints {
    double axis_saddle;  // rho / gamma (per-axis 1-item saddle)
    double coexistence;  // rho / (c + e + gamma) per item
};
SinglePoints saddle_and_coexistence_points(const GlvKinetics& kinetics, double gamma);

// Reduced system for a driven unit under constant forcing delta to its
// first item from a pacemaker sitting at (rho/gamma_p, 0, 0).
struct ReducedParams {
    double gamma_p;
    double gamma_d;
    double delta;
    double c;
    double e;
    double rho;
};

std::array<double, 3> reduced_rhs(const std::array<double, 3>& s, const ReducedParams& p);
std::array<std::array<double, 3>, 3> jacobian_reduced(const std::array<double, 3>& s,
                                                      const ReducedParams& p);

// Roots of the characteristic polynomial of a 3x3 matrix (closed form).
std::array<std::complex<double>, 3> eigenvalues_3x3(
    const std::array<std::array<double, 3>, 3>& m);
// Durand-Kerner iteration on the same polynomial; independent cross-check.
std::array<std::complex<double>, 3> eigenvalues_3x3_iterative(
    const std::array<std::array<double, 3>, 3>& m);

enum class StabilityClass { stable_node, stable_focus_node, saddle, unstable_focus_node };

struct Equilibrium {
    bool exists = false; // physical-orthant + real-branch filter
    std::array<double, 3> point{};
    std::array<std::complex<double>, 3> eigenvalues{};
    StabilityClass stability = StabilityClass::saddle;
    double residual = 0.0;
};

struct ForcedEquilibria {
    Equilibrium one_item;   // (S_a, 0, 0)
    Equilibrium two_item;   // (S_b, S_c, 0)
    Equilibrium three_item; // (S_d, S_e, S_f)
};

ForcedEquilibria forced_equilibria(const ReducedParams& p);

struct CriticalCouplings {
    double delta_c1 = 0.0; // analytic: 1S expanding eigenvalue changes sign
    double delta_c2 = 0.0; // analytic: 2S stable-node window lower edge
    double delta_c3 = 0.0; // numeric: 3S eigenvalues complex <-> real
    double delta_c4 = 0.0; // numeric: Hopf of the forced 3S point
    bool delta_c3_valid = false;
    bool delta_c4_valid = false; // false with delta_c4 == 0 means "absent" (CE regime)
    bool unique_region = true;   // gamma_d >= gamma_p; ordering asserted only here
};

CriticalCouplings critical_couplings(double gamma_p, double gamma_d, double c, double e,
                                     double rho);

// Numerically detected Hopf points of a single nine-item unit:
// gamma_c (within-SHC oscillation vanishes) and gamma_g (total
// oscillation vanishes). Bisection to 1e-2 in gamma.
struct NineItemHopf {
    double gamma_c = 0.0;
    double gamma_g = 0.0;
    bool resolved = false;
};
NineItemHopf find_hopf_gamma_nine(const GlvKinetics& kinetics, double sigma_probe,
                                  std::uint64_t seed = 12345);

// Equilibrium proliferation along a unidirectional chain:
// per-saddle count n(n+1)/2 and per-cycle count 3n(n+1)/2.
struct ProliferationCount {
    std::uint64_t per_saddle;
    std::uint64_t per_cycle;
};
ProliferationCount proliferation_count(int n);

enum class EquilibriumLabel { oneS, twoS, threeS };
bool transition_allowed(EquilibriumLabel from, EquilibriumLabel to);

// Counts of reachable labels per unit depth (depth 1 = the pacemaker,
// label multiset {1S}).
struct LabelCounts {
    std::uint64_t one_s = 0;
    std::uint64_t two_s = 0;
    std::uint64_t three_s = 0;
    std::uint64_t total() const { return one_s + two_s + three_s; }
};
std::vector<LabelCounts> enumerate_reachable_labels(int depth);

} // namespace hcu
