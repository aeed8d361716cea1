#pragma once
#include <cstdint>

#include "hcu/coupling.hpp"

namespace hcu {

// Coupling-matrix and parameter-field builders for the studied grid
// configurations. All builders are deterministic given their arguments
// (and seed, where one is taken).

// K[k][k-1] = delta for k = 1..N-1.
CouplingMatrix chain_unidirectional(int N, double delta);

// Forward delta as above plus backward K[k][k+1] = delta_b for k = 0..N-2.
CouplingMatrix chain_bidirectional(int N, double delta, double delta_b);

// Unidirectional ring: delta along the ring, with the single closing link
// into the pacemaker at index k_p carrying delta_p.
CouplingMatrix ring_directed(int N, double delta, double delta_p, int k_p);

// Ring with 1/r couplings between the pacemaker (unit 0) and every driven
// unit (delta/r forward, delta_b/r back), and nearest-neighbor delta among
// the driven units. r is the circular distance min(|k-l|, N-|k-l|).
CouplingMatrix ring_distance_dependent(int N, double delta, double delta_b);

enum class GridBoundary { periodic, no_flux };

// L x L grid, 4-neighbor diffusive coupling of weight delta. Sites are
// indexed row-major: k = y*L + x.
CouplingMatrix grid_diffusive(int L, double delta, GridBoundary boundary);

// Uniform base field in [0,1) per site; sites with value <= p_d become
// defects with gamma ~ Uniform(gamma_interval), all others get
// gamma_pacemaker. The base field depends only on (seed, site), so the
// same seed yields the same defect pattern for every p_d.
ParameterField random_defect_field(int L, double p_d, double gamma_pacemaker,
                                   double gamma_lo, double gamma_hi, std::uint64_t seed);

// Sites within Euclidean distance R of the grid center ((L-1)/2, (L-1)/2)
// get gamma_pacemaker; all others gamma ~ Uniform(gamma_interval).
ParameterField disc_pacemaker_field(int L, double R, double gamma_pacemaker,
                                    double gamma_lo, double gamma_hi, std::uint64_t seed);

} // namespace hcu
