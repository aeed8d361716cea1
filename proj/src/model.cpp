#include "hcu/model.hpp"

namespace hcu {

void rhs(const SystemState& state, double rho, const ParameterField& params,
         const RateMatrix& A, const CouplingMatrix& K, SystemState& out) {
    const int N = state.units;
    const int n = state.items;
    if (params.units() != N)
        throw ConfigError("rhs: parameter field has wrong unit count");
    if (A.n != n) throw ConfigError("rhs: rate matrix has wrong item count");
    if (K.units() != N) throw ConfigError("rhs: coupling matrix has wrong unit count");
    if (!out.same_shape(state)) throw ConfigError("rhs: output has wrong shape");

    const auto& row_ptr = K.row_ptr();
    const auto& cols = K.col();
    const auto& wts = K.weight();

#pragma omp parallel for schedule(static) if (N >= 256)
    for (int k = 0; k < N; ++k) {
        const double* s = state.unit(k);
        double* d = out.unit(k);
        const double gamma = params.gamma[k];
        // intrinsic GLV part
        for (int i = 0; i < n; ++i) {
            double comp = 0.0;
            for (int j = 0; j < n; ++j) comp += A(i, j) * s[j]; // A(i,i) == 0
            d[i] = s[i] * (rho - gamma * s[i] - comp);
        }
        // incoming coupling, fixed order over the CSR row
        for (std::size_t idx = row_ptr[k]; idx < row_ptr[static_cast<std::size_t>(k) + 1];
             ++idx) {
            const double w = wts[idx];
            const double* sl = state.unit(cols[idx]);
            for (int i = 0; i < n; ++i) d[i] += w * (sl[i] - s[i]);
        }
    }
}

SystemState rhs(const SystemState& state, double rho, const ParameterField& params,
                const RateMatrix& A, const CouplingMatrix& K) {
    SystemState out(state.units, state.items);
    rhs(state, rho, params, A, K, out);
    return out;
}

} // namespace hcu
