#include "hcu/topology.hpp"

#include <cmath>

#include "hcu/rng.hpp"

namespace hcu {

CouplingMatrix chain_unidirectional(int N, double delta) {
    if (N < 2) throw ConfigError("chain_unidirectional: N must be >= 2");
    if (delta < 0.0) throw ConfigError("chain_unidirectional: delta must be >= 0");
    CouplingMatrix K(N);
    for (int k = 1; k < N; ++k) K.add(k, k - 1, delta);
    K.finalize();
    return K;
}

CouplingMatrix chain_bidirectional(int N, double delta, double delta_b) {
    if (N < 2) throw ConfigError("chain_bidirectional: N must be >= 2");
    CouplingMatrix K(N);
    for (int k = 1; k < N; ++k) K.add(k, k - 1, delta);
    for (int k = 0; k < N - 1; ++k) K.add(k, k + 1, delta_b);
    K.finalize();
    return K;
}

CouplingMatrix ring_directed(int N, double delta, double delta_p, int k_p) {
    if (N < 3) throw ConfigError("ring_directed: N must be >= 3");
    if (k_p < 0 || k_p >= N) throw ConfigError("ring_directed: pacemaker index out of range");
    CouplingMatrix K(N);
    for (int k = 0; k < N; ++k) {
        const int prev = (k + N - 1) % N;
        K.add(k, prev, k == k_p ? delta_p : delta);
    }
    K.finalize();
    return K;
}

CouplingMatrix ring_distance_dependent(int N, double delta, double delta_b) {
    if (N < 5) throw ConfigError("ring_distance_dependent: N must be >= 5");
    CouplingMatrix K(N);
    auto ring_dist = [N](int k, int l) {
        const int d = std::abs(k - l);
        return std::min(d, N - d);
    };
    for (int k = 1; k < N; ++k) {
        const int r = ring_dist(k, 0);
        K.add(k, 0, delta / r);  // pacemaker -> driven
        K.add(0, k, delta_b / r); // driven -> pacemaker
    }
    // nearest neighbors among driven units only
    for (int k = 1; k < N; ++k) {
        for (int l : {k - 1, k + 1}) {
            const int lw = (l + N) % N;
            if (lw != 0) K.add(k, lw, delta);
        }
    }
    K.finalize();
    return K;
}

CouplingMatrix grid_diffusive(int L, double delta, GridBoundary boundary) {
    if (L < 4) throw ConfigError("grid_diffusive: L must be >= 4");
    CouplingMatrix K(L * L);
    for (int y = 0; y < L; ++y) {
        for (int x = 0; x < L; ++x) {
            const int k = y * L + x;
            const int off[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
            for (const auto& o : off) {
                int nx = x + o[0];
                int ny = y + o[1];
                if (boundary == GridBoundary::periodic) {
                    nx = (nx + L) % L;
                    ny = (ny + L) % L;
                } else if (nx < 0 || nx >= L || ny < 0 || ny >= L) {
                    continue; // no-flux: simply no neighbor across the edge
                }
                K.add(k, ny * L + nx, delta);
            }
        }
    }
    K.finalize();
    return K;
}

ParameterField random_defect_field(int L, double p_d, double gamma_pacemaker,
                                   double gamma_lo, double gamma_hi, std::uint64_t seed) {
    if (p_d < 0.0 || p_d > 1.0) throw ConfigError("random_defect_field: p_d must be in [0,1]");
    if (!(gamma_lo > 0.0) || !(gamma_hi >= gamma_lo))
        throw ConfigError("random_defect_field: invalid gamma interval");
    const int N = L * L;
    ParameterField pf;
    pf.gamma.resize(N);
    pf.sigma.assign(N, 0.0);
    for (int k = 0; k < N; ++k) {
        const double base = counter_uniform(hash_mix(seed, 0x6669656c64ull), k);
        if (base <= p_d) {
            const double u = counter_uniform(hash_mix(seed, 0x676d6d61ull), k);
            pf.gamma[k] = gamma_lo + (gamma_hi - gamma_lo) * u;
        } else {
            pf.gamma[k] = gamma_pacemaker;
            pf.pacemakers.push_back(k);
        }
    }
    return pf;
}

ParameterField disc_pacemaker_field(int L, double R, double gamma_pacemaker,
                                    double gamma_lo, double gamma_hi, std::uint64_t seed) {
    if (!(R > 0.0) || R >= L / 2.0) throw ConfigError("disc_pacemaker_field: R out of range");
    if (!(gamma_lo > 0.0) || !(gamma_hi >= gamma_lo))
        throw ConfigError("disc_pacemaker_field: invalid gamma interval");
    const int N = L * L;
    const double cx = (L - 1) / 2.0;
    const double cy = (L - 1) / 2.0;
    ParameterField pf;
    pf.gamma.resize(N);
    pf.sigma.assign(N, 0.0);
    for (int y = 0; y < L; ++y) {
        for (int x = 0; x < L; ++x) {
            const int k = y * L + x;
            const double dx = x - cx;
            const double dy = y - cy;
            if (dx * dx + dy * dy <= R * R) {
                pf.gamma[k] = gamma_pacemaker;
                pf.pacemakers.push_back(k);
            } else {
                const double u = counter_uniform(hash_mix(seed, 0x676d6d61ull), k);
                pf.gamma[k] = gamma_lo + (gamma_hi - gamma_lo) * u;
            }
        }
    }
    return pf;
}

} // namespace hcu
