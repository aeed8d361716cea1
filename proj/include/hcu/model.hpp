#pragma once
#include "hcu/coupling.hpp"
#include "hcu/kinetics.hpp"
#include "hcu/state.hpp"

namespace hcu {

// Deterministic right-hand side of the coupled system:
//   d_t s_{k,i} = rho s_{k,i} - gamma_k s_{k,i}^2
//                 - s_{k,i} sum_{j != i} A(i,j) s_{k,j}
//                 + sum_l K(k,l) (s_{l,i} - s_{k,i}).
// The noise term lives in the integrator. Pure function; `out` may not
// alias `state`. Summation order per unit is fixed, so the result is
// bit-identical regardless of internal parallelism.
void rhs(const SystemState& state, double rho, const ParameterField& params,
         const RateMatrix& A, const CouplingMatrix& K, SystemState& out);

SystemState rhs(const SystemState& state, double rho, const ParameterField& params,
                const RateMatrix& A, const CouplingMatrix& K);

} // namespace hcu
