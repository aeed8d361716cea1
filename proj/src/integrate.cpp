#include "hcu/integrate.hpp"

#include <cmath>

#include "hcu/rng.hpp"

namespace hcu {

namespace {

void check_finite(const SystemState& s, double time) {
    for (int k = 0; k < s.units; ++k)
        for (int i = 0; i < s.items; ++i)
            if (!std::isfinite(s.at(k, i)))
                throw IntegrationFault(k, i, time,
                                       "integration fault: non-finite state at unit " +
                                           std::to_string(k) + ", item " + std::to_string(i) +
                                           ", t = " + std::to_string(time));
}

void clamp(SystemState& s, double floor) {
    for (double& v : s.values)
        if (v < floor) v = floor;
}

} // namespace

void QuenchSchedule::validate(double t_end, int units) const {
    double prev = 0.0;
    for (const auto& ev : events) {
        if (!(ev.time > 0.0) || !(ev.time < t_end))
            throw ConfigError("quench: event time must lie in (0, t_end)");
        if (ev.time < prev) throw ConfigError("quench: events must be sorted by time");
        if (!(ev.gamma > 0.0)) throw ConfigError("quench: gamma must be > 0");
        for (int u : ev.units)
            if (u < 0 || u >= units) throw ConfigError("quench: unit index out of range");
        prev = ev.time;
    }
}

SystemState initial_condition_uniform(int units, int items, std::uint64_t seed) {
    SystemState s(units, items);
    const std::uint64_t key = hash_mix(seed, 0x696e6974ull);
    for (std::size_t idx = 0; idx < s.values.size(); ++idx)
        s.values[idx] = counter_uniform(key, idx);
    return s;
}

void step_deterministic(SystemState& state, double dt, const ModelContext& ctx,
                        double clamp_floor, double time, SystemState scratch[5]) {
    SystemState& k1 = scratch[0];
    SystemState& k2 = scratch[1];
    SystemState& k3 = scratch[2];
    SystemState& k4 = scratch[3];
    SystemState& tmp = scratch[4];
    const std::size_t n = state.values.size();

    rhs(state, ctx.rho, *ctx.params, *ctx.A, *ctx.K, k1);
    for (std::size_t i = 0; i < n; ++i) tmp.values[i] = state.values[i] + 0.5 * dt * k1.values[i];
    rhs(tmp, ctx.rho, *ctx.params, *ctx.A, *ctx.K, k2);
    for (std::size_t i = 0; i < n; ++i) tmp.values[i] = state.values[i] + 0.5 * dt * k2.values[i];
    rhs(tmp, ctx.rho, *ctx.params, *ctx.A, *ctx.K, k3);
    for (std::size_t i = 0; i < n; ++i) tmp.values[i] = state.values[i] + dt * k3.values[i];
    rhs(tmp, ctx.rho, *ctx.params, *ctx.A, *ctx.K, k4);
    const double h6 = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        state.values[i] += h6 * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] +
                                 k4.values[i]);
    clamp(state, clamp_floor);
    check_finite(state, time);
}

void step_stochastic(SystemState& state, double dt, const ModelContext& ctx,
                     double clamp_floor, double time, std::uint64_t noise_key,
                     std::uint64_t step_index, SystemState scratch[5]) {
    SystemState& deriv = scratch[0];
    rhs(state, ctx.rho, *ctx.params, *ctx.A, *ctx.K, deriv);
    const double sqdt = std::sqrt(dt);
    const int items = state.items;
    const std::uint64_t step_key = hash_mix(noise_key, step_index);
#pragma omp parallel for schedule(static) if (state.units >= 256)
    for (int k = 0; k < state.units; ++k) {
        const double sigma = ctx.params->sigma[k];
        double* s = state.unit(k);
        const double* d = deriv.unit(k);
        if (sigma > 0.0) {
            for (int i = 0; i < items; ++i) {
                const double eta =
                    counter_normal(step_key, static_cast<std::uint64_t>(k) * items + i);
                s[i] += dt * d[i] + sigma * std::fabs(eta) * sqdt;
            }
        } else {
            for (int i = 0; i < items; ++i) s[i] += dt * d[i];
        }
    }
    clamp(state, clamp_floor);
    check_finite(state, time);
}

Trajectory simulate(const CouplingMatrix& K, const ParameterField& params,
                    const GlvKinetics& kinetics, const IntegratorConfig& config,
                    const QuenchSchedule* quench, const SystemState* initial,
                    const std::string& topology_tag) {
    config.validate();
    params.validate();
    const int N = params.units();
    const int n = kinetics.item_count();
    if (K.units() != N) throw ConfigError("simulate: coupling/parameter unit count mismatch");
    if (quench) quench->validate(config.t_end, N);

    SystemState state = initial ? *initial
                                : initial_condition_uniform(N, n, config.seed);
    if (state.units != N || state.items != n)
        throw ConfigError("simulate: initial state has wrong shape");

    const RateMatrix A = build_rate_matrix(kinetics);
    ParameterField working = params; // quench mutates gammas
    ModelContext ctx{kinetics.rho, &working, &A, &K};
    const std::uint64_t noise_key = hash_mix(config.seed, 0x6e6f697365ull);

    const std::uint64_t n_steps = static_cast<std::uint64_t>(std::llround(config.t_end / config.dt));
    Trajectory traj;
    traj.config = config;
    traj.topology_tag = topology_tag;
    traj.rho = kinetics.rho;
    traj.params = params;
    traj.times.reserve(n_steps / config.record_stride + 2);
    traj.frames.reserve(n_steps / config.record_stride + 2);
    traj.times.push_back(0.0);
    traj.frames.push_back(state);

    SystemState scratch[5] = {SystemState(N, n), SystemState(N, n), SystemState(N, n),
                              SystemState(N, n), SystemState(N, n)};
    std::size_t next_quench = 0;

    for (std::uint64_t step = 0; step < n_steps; ++step) {
        const double t = step * config.dt;
        while (quench && next_quench < quench->events.size() &&
               t >= quench->events[next_quench].time) {
            const QuenchEvent& ev = quench->events[next_quench];
            for (int u : ev.units) working.gamma[u] = ev.gamma;
            ++next_quench;
        }
        const double t_next = (step + 1) * config.dt;
        if (config.scheme == Scheme::rk4)
            step_deterministic(state, config.dt, ctx, config.clamp_floor, t_next, scratch);
        else
            step_stochastic(state, config.dt, ctx, config.clamp_floor, t_next, noise_key,
                            step, scratch);
        if ((step + 1) % static_cast<std::uint64_t>(config.record_stride) == 0) {
            traj.times.push_back(t_next);
            traj.frames.push_back(state);
        }
    }
    return traj;
}

} // namespace hcu
