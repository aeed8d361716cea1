#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hcu/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hcusim - heteroclinic-unit network simulator"};
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 1;
    bool export_frames = false;

    app.add_option("--config", config_path, "Run configuration file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "Seed override (replaces [run].seed)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--workers", workers, "Worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    app.add_flag("--export-frames", export_frames, "Write PPM frame sequences");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }
    seed_given = seed_opt->count() > 0;

    try {
        hcu::Config cfg = hcu::Config::parse_file(config_path);
        hcu::RunOptions opt;
        opt.out_dir = out_dir;
        if (seed_given) opt.seed_override = seed;
        opt.workers = workers;
        opt.export_frames = export_frames;
        hcu::run_experiment(cfg, opt);
    } catch (const hcu::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hcu::IntegrationFault& e) {
        std::cerr << "integration fault: " << e.what() << "\n";
        return 3;
    } catch (const hcu::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
