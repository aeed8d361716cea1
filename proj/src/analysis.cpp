#include "hcu/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hcu {

namespace {

std::size_t window_start(std::size_t n_frames, double window_frac) {
    if (window_frac <= 0.0 || window_frac > 1.0)
        throw ConfigError("analysis: window fraction must be in (0, 1]");
    return static_cast<std::size_t>(std::floor(n_frames * (1.0 - window_frac)));
}

double series_variance(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / x.size();
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

} // namespace

Dominance dominant_item(const SystemState& frame, int unit, double theta_dom) {
    if (unit < 0 || unit >= frame.units)
        throw ConfigError("dominant_item: unit index out of range");
    const double* s = frame.unit(unit);
    int best = 0;
    double lo = s[0], hi = s[0];
    for (int i = 1; i < frame.items; ++i) {
        if (s[i] > s[best]) best = i;
        lo = std::min(lo, s[i]);
        hi = std::max(hi, s[i]);
    }
    return {best, hi - lo < theta_dom};
}

SymbolSequence symbol_sequence(const Trajectory& traj, int unit, double hi_frac,
                               double lo_frac, double window_frac) {
    if (!(hi_frac > 0.0) || !(lo_frac > 0.0) || lo_frac >= 1.0)
        throw ConfigError("symbol_sequence: need hi_frac > 0 and 0 < lo_frac < 1");
    if (unit < 0 || unit >= traj.units())
        throw ConfigError("symbol_sequence: unit index out of range");
    SymbolSequence out;
    const std::size_t n = traj.frames.size();
    if (n < 2) return out;
    const std::size_t start = window_start(n, window_frac);
    const int items = traj.items();

    double run_max = 0.0;
    int current = -1;
    std::vector<double> prev(items, 0.0);
    std::vector<char> crossed(items, 0); // rose through theta_hi inside the window
    for (int i = 0; i < items; ++i) prev[i] = traj.frames[start].at(unit, i);
    for (std::size_t fi = start; fi < n; ++fi) {
        const double* s = traj.frames[fi].unit(unit);
        for (int i = 0; i < items; ++i) run_max = std::max(run_max, s[i]);
        const double theta_hi = hi_frac * run_max;
        const double theta_lo = lo_frac * theta_hi;
        out.theta_hi = theta_hi;
        out.theta_lo = theta_lo;
        for (int i = 0; i < items; ++i)
            if (prev[i] < theta_hi && s[i] >= theta_hi) crossed[i] = 1;
        // candidate = strongest item above theta_hi; emitted once the current
        // symbol has released (fallen below theta_lo). The very first symbol
        // requires that the candidate actually rose through theta_hi at some
        // point, so a steady coexistence state emits nothing.
        int cand = -1;
        for (int i = 0; i < items; ++i)
            if (s[i] >= theta_hi && (cand < 0 || s[i] > s[cand])) cand = i;
        if (cand >= 0 && cand != current) {
            const bool released = current >= 0 ? s[current] < theta_lo
                                               : crossed[cand] != 0;
            if (released) {
                out.symbols.push_back({cand, traj.times[fi], 0.0});
                current = cand;
            }
        }
        for (int i = 0; i < items; ++i) prev[i] = s[i];
    }
    for (std::size_t k = 0; k + 1 < out.symbols.size(); ++k)
        out.symbols[k].dwell = out.symbols[k + 1].entry_time - out.symbols[k].entry_time;
    if (!out.symbols.empty())
        out.symbols.back().dwell = traj.times.back() - out.symbols.back().entry_time;
    return out;
}

std::vector<int> deduplicated_cycle(const SymbolSequence& seq) {
    std::vector<int> dedup;
    for (const auto& s : seq.symbols)
        if (dedup.empty() || dedup.back() != s.item) dedup.push_back(s.item);
    if (dedup.empty()) return dedup;
    std::vector<int> distinct;
    for (int x : dedup)
        if (std::find(distinct.begin(), distinct.end(), x) == distinct.end())
            distinct.push_back(x);
    const std::size_t d = distinct.size();
    // First run of d consecutive pairwise-distinct symbols is taken as the cycle.
    for (std::size_t i = 0; i + d <= dedup.size(); ++i) {
        bool ok = true;
        for (std::size_t a = 0; a < d && ok; ++a)
            for (std::size_t b = a + 1; b < d && ok; ++b)
                if (dedup[i + a] == dedup[i + b]) ok = false;
        if (ok) return {dedup.begin() + i, dedup.begin() + i + d};
    }
    return {dedup.begin(), dedup.begin() + std::min(d, dedup.size())};
}

bool is_rotation(const std::vector<int>& cycle, const std::vector<int>& reference,
                 int max_lag) {
    const std::size_t len = reference.size();
    if (cycle.size() != len || len == 0) return false;
    for (std::size_t r = 0; r < len; ++r) {
        const int lag = static_cast<int>(std::min(r, len - r));
        if (lag > max_lag) continue;
        bool match = true;
        for (std::size_t i = 0; i < len && match; ++i)
            if (cycle[(i + r) % len] != reference[i]) match = false;
        if (match) return true;
    }
    return false;
}

namespace {

// Both large heteroclinic paths walk a shared transition alphabet: either
// the next item inside the same three-item group (cyclically) or the item
// three places ahead (mod 9). Path 1 is dominated by within-group steps,
// path 2 by the +3 steps.
enum class NineStep { within, jump, invalid };

NineStep classify_step(int a, int b) {
    const int block = a / 3;
    if (b == block * 3 + (a - block * 3 + 1) % 3) return NineStep::within;
    if (b == (a + 3) % 9) return NineStep::jump;
    return NineStep::invalid;
}

const std::vector<int> kPath1 = {0, 1, 2, 5, 3, 4, 7, 8, 6};
const std::vector<int> kPath2 = {0, 3, 6, 7, 1, 4, 5, 8, 2};

} // namespace

PathId detect_path(const SymbolSequence& seq) {
    if (seq.symbols.size() < 9) return PathId::unknown;
    std::vector<int> dedup;
    for (const auto& s : seq.symbols) {
        if (s.item < 0 || s.item > 8) return PathId::unknown;
        if (dedup.empty() || dedup.back() != s.item) dedup.push_back(s.item);
    }
    if (dedup.size() < 9) return PathId::unknown;
    bool blocks[3] = {false, false, false};
    int within = 0, jump = 0, invalid = 0;
    for (std::size_t i = 0; i + 1 < dedup.size(); ++i) {
        blocks[dedup[i] / 3] = true;
        switch (classify_step(dedup[i], dedup[i + 1])) {
            case NineStep::within: ++within; break;
            case NineStep::jump: ++jump; break;
            case NineStep::invalid: ++invalid; break;
        }
    }
    blocks[dedup.back() / 3] = true;
    if (!blocks[0] || !blocks[1] || !blocks[2]) return PathId::unknown;
    // occasional noise-induced skips are tolerated; a stream that is mostly
    // off-alphabet is not one of the two paths
    if (10 * invalid > static_cast<int>(dedup.size() - 1)) return PathId::unknown;
    if (dedup.size() == 9) {
        if (is_rotation(dedup, kPath1, 9)) return PathId::path1;
        if (is_rotation(dedup, kPath2, 9)) return PathId::path2;
        return PathId::unknown;
    }
    if (within > jump) return PathId::path1;
    if (jump > within) return PathId::path2;
    return PathId::unknown;
}

double oscillation_amplitude(const Trajectory& traj, int unit, double window_frac) {
    const std::size_t n = traj.frames.size();
    if (n == 0) return 0.0;
    const std::size_t start = window_start(n, window_frac);
    const int items = traj.items();
    double amp = 0.0;
    for (int i = 0; i < items; ++i) {
        double lo = 1e300, hi = -1e300;
        for (std::size_t fi = start; fi < n; ++fi) {
            const double v = traj.frames[fi].at(unit, i);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        amp = std::max(amp, hi - lo);
    }
    return amp;
}

HierarchyLevel hierarchy_level(const Trajectory& traj, int unit,
                               const AnalysisThresholds& th) {
    if (unit < 0 || unit >= traj.units())
        throw ConfigError("hierarchy_level: unit index out of range");
    if (traj.items() != 9)
        throw ConfigError("hierarchy_level: nine-item kinetics required");
    HierarchyLevel out;
    const std::size_t n = traj.frames.size();
    if (n < 4) return out;
    const std::size_t start = window_start(n, th.window_frac);
    const double gamma = traj.params.gamma[unit];
    const double theta_amp = th.amp_frac * (traj.rho / gamma);

    out.total_amplitude = oscillation_amplitude(traj, unit, th.window_frac);

    bool groups_seen[3] = {false, false, false};
    std::vector<double> spreads;
    spreads.reserve(n - start);
    for (std::size_t fi = start; fi < n; ++fi) {
        const double* s = traj.frames[fi].unit(unit);
        int best = 0;
        for (int i = 1; i < 9; ++i)
            if (s[i] > s[best]) best = i;
        const int g = best / 3;
        groups_seen[g] = true;
        const double a = s[3 * g], b = s[3 * g + 1], c = s[3 * g + 2];
        spreads.push_back(std::max({a, b, c}) - std::min({a, b, c}));
    }
    out.within_group_spread = median(std::move(spreads));
    out.distinct_groups = groups_seen[0] + groups_seen[1] + groups_seen[2];

    if (out.total_amplitude < theta_amp) {
        out.label = HierarchyLabel::coexistence;
        out.valid = true;
        return out;
    }
    out.label = out.within_group_spread > th.flat ? HierarchyLabel::two_level
                                                  : HierarchyLabel::one_level;
    out.valid = out.distinct_groups >= 2; // no group switching -> inconclusive
    return out;
}

namespace {

// Relative spread of the local maxima of the largest-amplitude item.
double successive_maxima_spread(const Trajectory& traj, int unit, std::size_t start,
                                int* n_maxima) {
    const int items = traj.items();
    int pick = 0;
    double best_amp = -1.0;
    for (int i = 0; i < items; ++i) {
        double lo = 1e300, hi = -1e300;
        for (std::size_t fi = start; fi < traj.frames.size(); ++fi) {
            const double v = traj.frames[fi].at(unit, i);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_amp) {
            best_amp = hi - lo;
            pick = i;
        }
    }
    std::vector<double> maxima;
    for (std::size_t fi = start + 1; fi + 1 < traj.frames.size(); ++fi) {
        const double a = traj.frames[fi - 1].at(unit, pick);
        const double b = traj.frames[fi].at(unit, pick);
        const double c = traj.frames[fi + 1].at(unit, pick);
        if (b > a && b >= c) maxima.push_back(b);
    }
    if (n_maxima) *n_maxima = static_cast<int>(maxima.size());
    if (maxima.size() < 3) return 0.0;
    const double hi = *std::max_element(maxima.begin(), maxima.end());
    const double lo = *std::min_element(maxima.begin(), maxima.end());
    const double mean = std::accumulate(maxima.begin(), maxima.end(), 0.0) / maxima.size();
    return mean > 0.0 ? (hi - lo) / mean : 0.0;
}

} // namespace

RegimeLabel classify_regime(const Trajectory& traj, int unit,
                            const AnalysisThresholds& th) {
    if (unit < 0 || unit >= traj.units())
        throw ConfigError("classify_regime: unit index out of range");
    RegimeLabel out;
    const std::size_t n = traj.frames.size();
    if (n < 8) return out;
    const std::size_t start = window_start(n, th.window_frac);
    const int items = traj.items();

    double min_conc = 1e300;
    double var = 0.0;
    double trend = 0.0;
    const std::size_t mid = start + (n - start) / 2;
    for (int i = 0; i < items; ++i) {
        std::vector<double> early, late;
        early.reserve(mid - start);
        late.reserve(n - mid);
        for (std::size_t fi = start; fi < n; ++fi) {
            const double v = traj.frames[fi].at(unit, i);
            min_conc = std::min(min_conc, v);
            (fi < mid ? early : late).push_back(v);
        }
        const double ve = series_variance(early);
        const double vl = series_variance(late);
        var = std::max(var, vl);
        if (ve > 0.0) trend = std::max(trend, vl / ve);
    }
    out.min_concentration = min_conc;
    out.variance = var;
    out.variance_trend = trend;
    out.amplitude = oscillation_amplitude(traj, unit, th.window_frac);

    if (var < th.var || (trend > 0.0 && trend < 0.25)) {
        out.regime = Regime::CE;
        return out;
    }
    // A sub-threshold oscillation whose variance keeps shrinking is a decaying
    // spiral into the coexistence equilibrium, not a sustained cycle.
    const double theta_amp = th.amp_frac * traj.rho / traj.params.gamma[unit];
    if (out.amplitude < 3.0 * theta_amp && trend > 0.0 && trend < 0.9) {
        out.regime = Regime::CE;
        return out;
    }

    const bool noiseless = traj.params.sigma[unit] == 0.0;
    const SymbolSequence seq =
        symbol_sequence(traj, unit, th.hi_frac, th.lo_frac, th.window_frac);
    // Dwell times of a noiseless trajectory relaxing toward a heteroclinic
    // cycle grow without bound; limit-cycle dwell times saturate. When the
    // window holds enough symbols this is decisive either way; otherwise a
    // deep saddle approach (tiny minimum concentration) marks HC.
    bool dwell_known = false;
    if (noiseless && seq.symbols.size() >= 8) {
        const std::size_t m = seq.symbols.size() - 1; // last dwell is censored
        const std::size_t q = std::max<std::size_t>(2, m / 4);
        double early_mean = 0.0, late_mean = 0.0;
        for (std::size_t k = 0; k < q; ++k) early_mean += seq.symbols[k].dwell;
        for (std::size_t k = m - q; k < m; ++k) late_mean += seq.symbols[k].dwell;
        out.dwell_growth = early_mean > 0.0 ? late_mean / early_mean : 0.0;
        dwell_known = early_mean > 0.0;
        if (out.dwell_growth > 1.15) {
            out.regime = Regime::HC;
            return out;
        }
    }
    // With noise, a heteroclinic approach bottoms out at a noise-set floor of
    // order sigma; an oscillation whose minimum sits well above that floor is
    // bounded away from the contour by the dynamics itself, not by noise.
    const bool noise_limited =
        noiseless || min_conc < th.noise_floor * traj.params.sigma[unit];
    if (!dwell_known && min_conc < th.hc_min && noise_limited) {
        out.regime = Regime::HC;
        return out;
    }

    int n_maxima = 0;
    out.maxima_spread = successive_maxima_spread(traj, unit, start, &n_maxima);
    if (n_maxima < 3) {
        out.regime = Regime::unknown;
        return out;
    }
    out.regime = out.maxima_spread > th.qp_spread ? Regime::QP : Regime::LC;
    return out;
}

int entrainment_length(const Trajectory& traj, double theta_amp, int max_lag,
                       const AnalysisThresholds& th) {
    const int N = traj.units();
    if (N < 1) return 0;
    if (oscillation_amplitude(traj, 0, th.window_frac) < theta_amp) return 0;
    const std::vector<int> pacemaker_cycle =
        deduplicated_cycle(symbol_sequence(traj, 0, th.hi_frac, th.lo_frac, th.window_frac));
    if (pacemaker_cycle.size() < 2) return 0;
    int length = 0;
    for (int k = 1; k < N; ++k) {
        if (oscillation_amplitude(traj, k, th.window_frac) < theta_amp) break;
        const std::vector<int> cyc = deduplicated_cycle(
            symbol_sequence(traj, k, th.hi_frac, th.lo_frac, th.window_frac));
        if (!is_rotation(cyc, pacemaker_cycle, max_lag)) break;
        ++length;
    }
    return length;
}

RadialProfile radial_amplitude_profile(const Trajectory& traj, int grid_side,
                                       double cx, double cy, int n_bins,
                                       const AnalysisThresholds& th) {
    if (grid_side < 1 || grid_side * grid_side != traj.units())
        throw ConfigError("radial_amplitude_profile: trajectory is not a square grid");
    if (n_bins < 1) throw ConfigError("radial_amplitude_profile: n_bins must be >= 1");
    double d_max = 0.0;
    std::vector<double> dist(traj.units());
    for (int y = 0; y < grid_side; ++y)
        for (int x = 0; x < grid_side; ++x) {
            const double d = std::hypot(x - cx, y - cy);
            dist[y * grid_side + x] = d;
            d_max = std::max(d_max, d);
        }
    RadialProfile out;
    out.bin_center.resize(n_bins);
    out.amplitude.assign(n_bins, 0.0);
    out.count.assign(n_bins, 0);
    const double width = d_max / n_bins;
    for (int b = 0; b < n_bins; ++b) out.bin_center[b] = (b + 0.5) * width;
    for (int k = 0; k < traj.units(); ++k) {
        int b = width > 0.0 ? static_cast<int>(dist[k] / width) : 0;
        b = std::min(b, n_bins - 1);
        out.amplitude[b] += oscillation_amplitude(traj, k, th.window_frac);
        out.count[b] += 1;
    }
    for (int b = 0; b < n_bins; ++b)
        if (out.count[b] > 0) out.amplitude[b] /= out.count[b];
    return out;
}

std::vector<DominanceFrame> spatiotemporal_field(const Trajectory& traj, double theta_dom) {
    std::vector<DominanceFrame> out;
    out.reserve(traj.frames.size());
    for (std::size_t fi = 0; fi < traj.frames.size(); ++fi) {
        const SystemState& frame = traj.frames[fi];
        DominanceFrame df;
        df.time = traj.times[fi];
        df.item.resize(frame.units);
        df.concentration.resize(frame.units);
        df.degenerate.resize(frame.units);
        for (int k = 0; k < frame.units; ++k) {
            const Dominance d = dominant_item(frame, k, theta_dom);
            df.item[k] = static_cast<std::uint8_t>(d.item);
            df.concentration[k] = frame.at(k, d.item);
            df.degenerate[k] = d.degenerate ? 1 : 0;
        }
        out.push_back(std::move(df));
    }
    return out;
}

} // namespace hcu
