#include "hcu/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hcu/integrate.hpp"
#include "hcu/topology.hpp"

namespace hcu {

namespace {

constexpr double kEpsEig = 1e-9;       // node vs focus-node discrimination
constexpr double kOrthantEps = -1e-12; // coordinates below this -> nonexistent
constexpr double kBisectTol = 1e-8;

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

StabilityClass classify(const std::array<std::complex<double>, 3>& eigs) {
    double max_re = eigs[0].real();
    bool complex_pair = false;
    for (const auto& e : eigs) {
        max_re = std::max(max_re, e.real());
        if (std::fabs(e.imag()) > kEpsEig) complex_pair = true;
    }
    if (max_re < 0.0) return complex_pair ? StabilityClass::stable_focus_node
                                          : StabilityClass::stable_node;
    return complex_pair ? StabilityClass::unstable_focus_node : StabilityClass::saddle;
}

Equilibrium make_equilibrium(bool branch_real, const std::array<double, 3>& pt,
                             const ReducedParams& p) {
    Equilibrium eq;
    eq.point = pt;
    if (!branch_real) return eq; // negative discriminant: nonexistent
    for (double x : pt)
        if (x < kOrthantEps) return eq; // outside the physical orthant
    const auto r = reduced_rhs(pt, p);
    eq.residual = norm3(r);
    if (eq.residual >= 1e-10 * (1.0 + norm3(pt))) return eq; // not actually a root
    eq.exists = true;
    eq.eigenvalues = eigenvalues_3x3(jacobian_reduced(pt, p));
    eq.stability = classify(eq.eigenvalues);
    return eq;
}

} // namespace

double gamma_crit_three(double c, double e) {
    if (c < 0.0 || e < 0.0) throw ConfigError("gamma_crit_three: rates must be >= 0");
    return 0.5 * (c + e);
}

SinglePoints saddle_and_coexistence_points(const GlvKinetics& kinetics, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("saddle_and_coexistence_points: gamma must be > 0");
    const auto* three = std::get_if<ThreeItemRates>(&kinetics.rates);
    if (!three)
        throw ConfigError("saddle_and_coexistence_points: three-item kinetics required");
    return {kinetics.rho / gamma, kinetics.rho / (three->c + three->e + gamma)};
}

std::array<double, 3> reduced_rhs(const std::array<double, 3>& s, const ReducedParams& p) {
    const double s1 = s[0], s2 = s[1], s3 = s[2];
    return {
        p.rho * s1 - p.gamma_d * s1 * s1 - s1 * (p.c * s2 + p.e * s3) +
            p.delta * (p.rho / p.gamma_p - s1),
        p.rho * s2 - p.gamma_d * s2 * s2 - s2 * (p.c * s3 + p.e * s1) - p.delta * s2,
        p.rho * s3 - p.gamma_d * s3 * s3 - s3 * (p.c * s1 + p.e * s2) - p.delta * s3,
    };
}

std::array<std::array<double, 3>, 3> jacobian_reduced(const std::array<double, 3>& s,
                                                      const ReducedParams& p) {
    const double s1 = s[0], s2 = s[1], s3 = s[2];
    return {{
        {p.rho - 2.0 * p.gamma_d * s1 - (p.c * s2 + p.e * s3) - p.delta, -p.c * s1, -p.e * s1},
        {-p.e * s2, p.rho - 2.0 * p.gamma_d * s2 - (p.c * s3 + p.e * s1) - p.delta, -p.c * s2},
        {-p.c * s3, -p.e * s3, p.rho - 2.0 * p.gamma_d * s3 - (p.c * s1 + p.e * s2) - p.delta},
    }};
}

namespace {

// Monic cubic coefficients lambda^3 + a2 lambda^2 + a1 lambda + a0 of the
// characteristic polynomial det(lambda I - M).
std::array<double, 3> char_poly(const std::array<std::array<double, 3>, 3>& m) {
    const double tr = m[0][0] + m[1][1] + m[2][2];
    const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] +
                          m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                          m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return {-tr, minors, -det};
}

} // namespace

std::array<std::complex<double>, 3> eigenvalues_3x3(
    const std::array<std::array<double, 3>, 3>& m) {
    const auto [a2, a1, a0] = char_poly(m);
    // Depressed cubic t^3 + pt + q via lambda = t - a2/3 (Cardano).
    const double shift = a2 / 3.0;
    const double pc = a1 - a2 * a2 / 3.0;
    const double qc = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double disc = -4.0 * pc * pc * pc - 27.0 * qc * qc;
    std::array<std::complex<double>, 3> out;
    if (disc >= 0.0) { // three real roots: trigonometric form
        if (std::fabs(pc) < 1e-300) {
            const double r = std::cbrt(-qc);
            out = {r - shift, r - shift, r - shift};
        } else {
            const double mfac = 2.0 * std::sqrt(-pc / 3.0);
            double arg = 3.0 * qc / (pc * mfac);
            arg = std::clamp(arg, -1.0, 1.0);
            const double theta = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k)
                out[k] = mfac * std::cos(theta - 2.0 * M_PI * k / 3.0) - shift;
        }
    } else { // one real root + complex pair
        const double sq = std::sqrt(qc * qc / 4.0 + pc * pc * pc / 27.0);
        const double u = std::cbrt(-qc / 2.0 + sq);
        const double v = std::cbrt(-qc / 2.0 - sq);
        const double t1 = u + v;
        const double re = -t1 / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * (u - v);
        out = {std::complex<double>(t1 - shift, 0.0),
               std::complex<double>(re - shift, im),
               std::complex<double>(re - shift, -im)};
    }
    return out;
}

std::array<std::complex<double>, 3> eigenvalues_3x3_iterative(
    const std::array<std::array<double, 3>, 3>& m) {
    const auto [a2, a1, a0] = char_poly(m);
    using C = std::complex<double>;
    auto poly = [&](C z) { return ((z + a2) * z + a1) * z + a0; };
    // Durand-Kerner from the customary non-real seed ring.
    std::array<C, 3> z = {C(0.4, 0.9), C(0.4, 0.9) * C(0.4, 0.9),
                          C(0.4, 0.9) * C(0.4, 0.9) * C(0.4, 0.9)};
    for (int it = 0; it < 200; ++it) {
        double move = 0.0;
        for (int i = 0; i < 3; ++i) {
            C denom(1.0, 0.0);
            for (int j = 0; j < 3; ++j)
                if (j != i) denom *= z[i] - z[j];
            const C dz = poly(z[i]) / denom;
            z[i] -= dz;
            move = std::max(move, std::abs(dz));
        }
        if (move < 1e-14) break;
    }
    std::sort(z.begin(), z.end(), [](C a, C b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return z;
}

ForcedEquilibria forced_equilibria(const ReducedParams& p) {
    if (!(p.gamma_p > 0.0) || !(p.gamma_d > 0.0) || !(p.c > 0.0) || !(p.e > 0.0) ||
        !(p.rho > 0.0) || p.delta < 0.0)
        throw ConfigError("forced_equilibria: parameters must be positive (delta >= 0)");
    const double gP = p.gamma_p, gD = p.gamma_d, d = p.delta, c = p.c, e = p.e, rho = p.rho;
    ForcedEquilibria out;

    { // (S_a, 0, 0)
        const double disc = 4.0 * d * rho * gD / gP + (d - rho) * (d - rho);
        const bool ok = disc >= 0.0;
        const double sa = ok ? (-d + rho + std::sqrt(disc)) / (2.0 * gD) : 0.0;
        out.one_item = make_equilibrium(ok, {sa, 0.0, 0.0}, p);
    }
    { // (S_b, S_c, 0)
        const double denom = -c * e + gD * gD;
        const double g1_disc = (c - gD) * (c - gD) * (d - rho) * (d - rho) +
                               4.0 * (gD / gP) * denom * d * rho;
        const bool ok = g1_disc >= 0.0 && std::fabs(denom) > 1e-300;
        if (ok) {
            const double g1 = std::sqrt(g1_disc) / (2.0 * denom);
            const double sb = (c - gD) * (d - rho) / (2.0 * denom) + g1;
            const double sc =
                (c * e + (e - 2.0 * gD) * gD) * (d - rho) / (2.0 * gD * denom) -
                (e / gD) * g1;
            out.two_item = make_equilibrium(true, {sb, sc, 0.0}, p);
        }
    }
    { // (S_d, S_e, S_f)
        const double m1 =
            (c * c + e * e + gD * gD - e * gD - c * e - c * gD) * (d - rho) * gP;
        const double m2 =
            2.0 * gP * (c * c * c + e * e * e + gD * gD * gD - 3.0 * c * e * gD) *
            (c * e - gD * gD);
        const double disc = m1 * m1 - 2.0 * d * rho * m2;
        const bool ok = disc >= 0.0 && std::fabs(m2) > 1e-300;
        if (ok) {
            const double root = std::sqrt(disc);
            const double sd = (c * e - gD * gD) * (-m1 + root) / m2;
            const double se =
                -(m1 * ((c * c - e * gD) - 2.0 * (gD * gD - c * e)) +
                  (c * c - e * gD) * root) /
                m2;
            const double sf =
                -(m1 * ((e * e - c * gD) - 2.0 * (gD * gD - c * e)) +
                  (e * e - c * gD) * root) /
                m2;
            out.three_item = make_equilibrium(true, {sd, se, sf}, p);
        }
    }
    return out;
}

namespace {

// Sign of the depressed-cubic discriminant of the 3S Jacobian: positive
// means three real eigenvalues, negative means a complex pair.
bool three_s_point(double delta, const ReducedParams& base, std::array<double, 3>& pt) {
    ReducedParams p = base;
    p.delta = delta;
    const auto eq = forced_equilibria(p).three_item;
    if (!eq.exists) return false;
    pt = eq.point;
    return true;
}

double cubic_discriminant(const std::array<std::array<double, 3>, 3>& m) {
    const auto [a2, a1, a0] = char_poly(m);
    const double pc = a1 - a2 * a2 / 3.0;
    const double qc = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    return -4.0 * pc * pc * pc - 27.0 * qc * qc;
}

// Max real part of the complex eigenvalue pair at the 3S point; NaN when no
// complex pair (or no point) exists there.
double complex_pair_max_re(double delta, const ReducedParams& base) {
    std::array<double, 3> pt;
    if (!three_s_point(delta, base, pt)) return std::nan("");
    ReducedParams p = base;
    p.delta = delta;
    const auto eigs = eigenvalues_3x3(jacobian_reduced(pt, p));
    double best = std::nan("");
    for (const auto& e : eigs)
        if (std::fabs(e.imag()) > kEpsEig)
            best = std::isnan(best) ? e.real() : std::max(best, e.real());
    return best;
}

double bisect(double lo, double hi, const std::function<double(double)>& f) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > kBisectTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

CriticalCouplings critical_couplings(double gamma_p, double gamma_d, double c, double e,
                                     double rho) {
    if (!(gamma_p > 0.0) || !(gamma_d > 0.0) || !(c > 0.0) || !(e > 0.0) || !(rho > 0.0))
        throw ConfigError("critical_couplings: parameters must be positive");
    CriticalCouplings out;
    out.unique_region = gamma_d >= gamma_p;

    const double inner1 = e * e - 4.0 * gamma_p * (e - gamma_d);
    if (inner1 >= 0.0 && std::fabs(e - gamma_d) > 1e-300)
        out.delta_c1 =
            rho * (1.0 - e / (2.0 * gamma_p * (e - gamma_d)) * (e - std::sqrt(inner1)));

    const double ed_cg = e * e - c * gamma_d;
    if (std::fabs(ed_cg) > 1e-300) {
        const double g2 = 2.0 * (e - gamma_d) *
                          (c * c + e * e + gamma_d * gamma_d - e * gamma_d - c * e -
                           c * gamma_d) *
                          gamma_p / (ed_cg * ed_cg);
        if (std::fabs(g2) > 1e-300 && 1.0 - 2.0 * g2 >= 0.0)
            out.delta_c2 = rho * (1.0 - (1.0 - std::sqrt(1.0 - 2.0 * g2)) / g2);
    }

    const ReducedParams base{gamma_p, gamma_d, 0.0, c, e, rho};
    const double hi = out.delta_c2 > 0.0 ? out.delta_c2 : rho;

    auto disc_at = [&](double d) -> double {
        std::array<double, 3> pt;
        if (!three_s_point(d, base, pt)) return std::nan("");
        ReducedParams p = base;
        p.delta = d;
        return cubic_discriminant(jacobian_reduced(pt, p));
    };

    { // delta_c3: discriminant sign change on a fine scan of [0, hi]
        const int n_scan = 512;
        double prev_d = 0.0, prev_v = disc_at(0.0);
        for (int i = 1; i <= n_scan; ++i) {
            const double d = hi * i / n_scan;
            const double v = disc_at(d);
            if (std::isfinite(prev_v) && std::isfinite(v) && (v < 0.0) != (prev_v < 0.0)) {
                out.delta_c3 = bisect(prev_d, d, disc_at);
                out.delta_c3_valid = true;
                break;
            }
            prev_d = d;
            prev_v = v;
        }
    }
    { // delta_c4: Hopf of the complex pair; absent (0) in the CE regime
        const double top = out.delta_c3_valid ? out.delta_c3 : hi;
        const int n_scan = 512;
        double prev_d = top * 1.0 / n_scan;
        double prev_v = complex_pair_max_re(prev_d, base);
        for (int i = 2; i <= n_scan; ++i) {
            const double d = top * i / n_scan;
            const double v = complex_pair_max_re(d, base);
            if (std::isfinite(prev_v) && std::isfinite(v) && (v < 0.0) != (prev_v < 0.0)) {
                out.delta_c4 =
                    bisect(prev_d, d, [&](double x) { return complex_pair_max_re(x, base); });
                out.delta_c4_valid = true;
                break;
            }
            prev_d = d;
            prev_v = v;
        }
    }
    return out;
}

namespace {

struct NineOrderParams {
    double within;      // largest within-group spread over the late window
    double total;       // largest single-item oscillation amplitude
};

NineOrderParams nine_order_params(const GlvKinetics& base, double gamma, double sigma,
                                  std::uint64_t seed) {
    GlvKinetics kin = base;
    CouplingMatrix K(1);
    K.finalize();
    ParameterField pf = ParameterField::uniform(1, gamma, sigma);
    IntegratorConfig cfg;
    cfg.dt = 0.005;
    cfg.t_end = 1200.0;
    cfg.record_stride = 20;
    cfg.scheme = Scheme::euler_maruyama;
    cfg.seed = seed;
    const Trajectory traj = simulate(K, pf, kin, cfg);

    const std::size_t n_frames = traj.frames.size();
    const std::size_t start = n_frames / 2;
    NineOrderParams op{0.0, 0.0};
    std::array<double, 9> lo, hi;
    lo.fill(1e300);
    hi.fill(-1e300);
    for (std::size_t fi = start; fi < n_frames; ++fi) {
        const double* s = traj.frames[fi].unit(0);
        for (int g = 0; g < 3; ++g) {
            const double a = s[3 * g], b = s[3 * g + 1], c = s[3 * g + 2];
            const double spread =
                std::max({a, b, c}) - std::min({a, b, c});
            op.within = std::max(op.within, spread);
        }
        for (int i = 0; i < 9; ++i) {
            lo[i] = std::min(lo[i], s[i]);
            hi[i] = std::max(hi[i], s[i]);
        }
    }
    for (int i = 0; i < 9; ++i) op.total = std::max(op.total, hi[i] - lo[i]);
    return op;
}

// Bisection on a boolean order-parameter predicate over gamma; returns NaN
// when the bracket endpoints do not differ.
double bisect_gamma(double lo, double hi, const std::function<bool(double)>& above) {
    bool alo = above(lo);
    if (above(hi) == alo) return std::nan("");
    while (hi - lo > 1e-2) {
        const double mid = 0.5 * (lo + hi);
        if (above(mid) == alo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

NineItemHopf find_hopf_gamma_nine(const GlvKinetics& kinetics, double sigma_probe,
                                  std::uint64_t seed) {
    if (!std::holds_alternative<NineItemRates>(kinetics.rates))
        throw ConfigError("find_hopf_gamma_nine: nine-item kinetics required");
    NineItemHopf out;
    auto within_large = [&](double g) {
        const auto op = nine_order_params(kinetics, g, sigma_probe, seed);
        return op.within > 0.05 * (kinetics.rho / g);
    };
    auto total_large = [&](double g) {
        const auto op = nine_order_params(kinetics, g, sigma_probe, seed);
        return op.total > 0.05 * (kinetics.rho / g);
    };
    double gc = bisect_gamma(0.8, 1.5, within_large);
    if (std::isnan(gc)) gc = bisect_gamma(0.5, 1.6, within_large);
    double gg = bisect_gamma(std::isnan(gc) ? 1.0 : gc, 1.7, total_large);
    if (std::isnan(gg)) gg = bisect_gamma(1.0, 1.9, total_large);
    if (std::isnan(gc) || std::isnan(gg)) return out;
    out.gamma_c = gc;
    out.gamma_g = gg;
    out.resolved = true;
    return out;
}

ProliferationCount proliferation_count(int n) {
    if (n < 1) throw ConfigError("proliferation_count: n must be >= 1");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    return {un * (un + 1) / 2, 3 * un * (un + 1) / 2};
}

bool transition_allowed(EquilibriumLabel from, EquilibriumLabel to) {
    switch (from) {
        case EquilibriumLabel::oneS: return true;
        case EquilibriumLabel::twoS: return to != EquilibriumLabel::oneS;
        case EquilibriumLabel::threeS: return to == EquilibriumLabel::threeS;
    }
    return false;
}

std::vector<LabelCounts> enumerate_reachable_labels(int depth) {
    if (depth < 1) throw ConfigError("enumerate_reachable_labels: depth must be >= 1");
    std::vector<LabelCounts> out;
    out.reserve(depth);
    // Multiset evolution: each label at depth n spawns every allowed
    // successor at depth n+1.
    LabelCounts cur{1, 0, 0};
    out.push_back(cur);
    for (int d = 2; d <= depth; ++d) {
        LabelCounts next;
        next.one_s = cur.one_s;                                // 1S -> 1S
        next.two_s = cur.one_s + cur.two_s;                    // 1S,2S -> 2S
        next.three_s = cur.one_s + cur.two_s + cur.three_s;    // all -> 3S
        out.push_back(next);
        cur = next;
    }
    return out;
}

} // namespace hcu
