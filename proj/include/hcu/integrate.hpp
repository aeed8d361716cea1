#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "hcu/model.hpp"

namespace hcu {

enum class Scheme { rk4, euler_maruyama };

struct IntegratorConfig {
    double dt = 0.01;
    double t_end = 0.0;
    int record_stride = 1;
    Scheme scheme = Scheme::rk4;
    double clamp_floor = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("integrator: dt must be > 0");
        if (!(t_end > 0.0)) throw ConfigError("integrator: t_end must be > 0");
        if (record_stride < 1) throw ConfigError("integrator: record_stride must be >= 1");
        if (clamp_floor < 0.0) throw ConfigError("integrator: clamp_floor must be >= 0");
    }
};

struct QuenchEvent {
    double time;
    std::vector<int> units;
    double gamma;
};

struct QuenchSchedule {
    std::vector<QuenchEvent> events; // sorted by time, all within (0, t_end)
    void validate(double t_end, int units) const;
};

// Time-subsampled record of a run, with enough metadata to re-run it
// bit-identically.
struct Trajectory {
    IntegratorConfig config;
    std::string topology_tag;
    double rho = 1.0;
    ParameterField params; // as at t = 0 (before any quench)
    std::vector<double> times;
    std::vector<SystemState> frames;

    int units() const { return frames.empty() ? 0 : frames.front().units; }
    int items() const { return frames.empty() ? 0 : frames.front().items; }
};

// i.i.d. Uniform(0,1) initial state, seeded.
SystemState initial_condition_uniform(int units, int items, std::uint64_t seed);

// Context bundling everything rhs needs.
struct ModelContext {
    double rho;
    const ParameterField* params;
    const RateMatrix* A;
    const CouplingMatrix* K;
};

// One classical RK4 step followed by clamping at clamp_floor.
void step_deterministic(SystemState& state, double dt, const ModelContext& ctx,
                        double clamp_floor, double time, SystemState scratch[5]);

// One Euler-Maruyama step with additive half-normal kicks
// sigma_k |N(0,1)| sqrt(dt), then clamping. Noise is drawn per
// (seed, step_index, component) so results do not depend on thread count.
void step_stochastic(SystemState& state, double dt, const ModelContext& ctx,
                     double clamp_floor, double time, std::uint64_t noise_key,
                     std::uint64_t step_index, SystemState scratch[5]);

Trajectory simulate(const CouplingMatrix& K, const ParameterField& params,
                    const GlvKinetics& kinetics, const IntegratorConfig& config,
                    const QuenchSchedule* quench = nullptr,
                    const SystemState* initial = nullptr,
                    const std::string& topology_tag = "");

} // namespace hcu
