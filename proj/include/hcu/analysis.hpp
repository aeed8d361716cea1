#pragma once
#include <cstdint>
#include <vector>

#include "hcu/integrate.hpp"

namespace hcu {

// Observables extracted from trajectories: dominance, symbol sequences,
// heteroclinic-path identity, hierarchy level, dynamical regime,
// entrainment length, and spatial profiles. Items are 0-based internally;
// user-facing output is 1-based.

struct AnalysisThresholds {
    double hi_frac = 0.5;       // theta_hi as a fraction of the running max
    double lo_frac = 0.1;       // theta_lo as a fraction of theta_hi
    double amp_frac = 0.05;     // theta_amp = amp_frac * (rho / gamma)
    double dom = 1e-3;          // degenerate-dominance margin
    double var = 1e-8;          // coexistence variance ceiling
    double hc_min = 1e-6;       // deep-saddle concentration floor
    double flat = 0.02;         // within-group flatness (absolute)
    double qp_spread = 0.05;    // successive-maxima relative spread
    double noise_floor = 1e3;   // noise-limited minimum: min < noise_floor * sigma
    double mono = 0.10;         // bin-to-bin monotonicity tolerance
    double window_frac = 0.5;   // analysis window: final fraction of the run
};

struct Dominance {
    int item;        // argmax, ties broken by lowest index
    bool degenerate; // max - min < theta_dom
};

Dominance dominant_item(const SystemState& frame, int unit, double theta_dom = 1e-3);

struct Symbol {
    int item;
    double entry_time;
    double dwell; // time to the next emission (window end for the last one)
};

struct SymbolSequence {
    std::vector<Symbol> symbols;
    double theta_hi = 0.0; // absolute thresholds actually used (final values)
    double theta_lo = 0.0;
};

// Hysteresis symbol extraction: item i is emitted when it crosses theta_hi
// from below while the current symbol has fallen below theta_lo. Thresholds
// track the running maximum over the window.
SymbolSequence symbol_sequence(const Trajectory& traj, int unit, double hi_frac = 0.5,
                               double lo_frac = 0.1, double window_frac = 0.5);

enum class PathId { path1, path2, unknown };

// Identity of the large heteroclinic cycle of a nine-item unit. Exact
// nine-symbol cycles are matched as rotations of the two reference paths;
// longer sequences are classified by which of the two admissible
// transition kinds dominates. Any transition outside the shared alphabet
// yields unknown.
PathId detect_path(const SymbolSequence& seq);

enum class HierarchyLabel { two_level, one_level, coexistence };

struct HierarchyLevel {
    HierarchyLabel label = HierarchyLabel::coexistence;
    bool valid = false;          // false when the window shows no group switching
    double total_amplitude = 0.0;
    double within_group_spread = 0.0; // median spread inside the dominant group
    int distinct_groups = 0;
};

HierarchyLevel hierarchy_level(const Trajectory& traj, int unit,
                               const AnalysisThresholds& th = {});

enum class Regime { HC, LC, CE, QP, unknown };

struct RegimeLabel {
    Regime regime = Regime::unknown;
    double min_concentration = 0.0;
    double amplitude = 0.0;
    double maxima_spread = 0.0; // relative spread of successive maxima
    double dwell_growth = 0.0;  // late/early mean dwell ratio (noiseless probe)
    double variance = 0.0;
    double variance_trend = 0.0; // late-half / early-half variance ratio
};

RegimeLabel classify_regime(const Trajectory& traj, int unit,
                            const AnalysisThresholds& th = {});

// Largest m such that units 1..m all oscillate above theta_amp and repeat
// the pacemaker's (unit 0) symbol cycle up to rotation. max_lag bounds the
// admitted rotation offset.
int entrainment_length(const Trajectory& traj, double theta_amp, int max_lag = 9,
                       const AnalysisThresholds& th = {});

struct RadialProfile {
    std::vector<double> bin_center; // distance
    std::vector<double> amplitude;  // mean oscillation amplitude in the bin
    std::vector<int> count;
};

RadialProfile radial_amplitude_profile(const Trajectory& traj, int grid_side,
                                       double cx, double cy, int n_bins,
                                       const AnalysisThresholds& th = {});

struct DominanceFrame {
    double time;
    std::vector<std::uint8_t> item;
    std::vector<double> concentration;
    std::vector<std::uint8_t> degenerate;
};

// Raster consumed by the image exporter: dominant item and its
// concentration for every unit in every recorded frame.
std::vector<DominanceFrame> spatiotemporal_field(const Trajectory& traj,
                                                 double theta_dom = 1e-3);

// Shared helpers.
std::vector<int> deduplicated_cycle(const SymbolSequence& seq);
bool is_rotation(const std::vector<int>& cycle, const std::vector<int>& reference,
                 int max_lag);
double oscillation_amplitude(const Trajectory& traj, int unit, double window_frac);

} // namespace hcu
