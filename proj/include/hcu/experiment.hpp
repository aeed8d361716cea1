#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcu/analysis.hpp"
#include "hcu/config.hpp"
#include "hcu/integrate.hpp"

namespace hcu {

// Named experiment setups and their artifact emission. Each run writes a
// snapshot, CSV analysis tables, an optional PPM frame sequence, and a
// manifest listing every output with its CRC32.

struct RunOptions {
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    int workers = 1;
    bool export_frames = false;
};

// Materialized setup of a single run, before integration.
struct ExperimentSetup {
    std::string name;
    GlvKinetics kinetics;
    CouplingMatrix coupling;
    ParameterField params;
    IntegratorConfig integrator;
    std::optional<QuenchSchedule> quench;
    std::string topology_tag;
    int grid_side = 0; // > 0 for 2D experiments
    AnalysisThresholds thresholds;
};

ExperimentSetup build_setup(const Config& cfg, std::uint64_t seed);

// Runs one experiment (or sweep / bifurcation scan) end to end.
// Throws ConfigError / IntegrationFault / IoError; on an integration fault
// the partial outputs and a fault record are flushed before rethrowing.
void run_experiment(const Config& cfg, const RunOptions& opt);

// Exposed for tests: artifacts of an already-simulated trajectory.
std::vector<std::string> emit_artifacts(const Trajectory& traj, const ExperimentSetup& setup,
                                        const std::string& out_dir, bool export_frames);

void write_manifest(const std::string& out_dir, const Config& cfg, std::uint64_t seed,
                    const std::vector<std::string>& files);

} // namespace hcu
