#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hcu/experiment.hpp"
#include "hcu/snapshot.hpp"

using namespace hcu;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / "hcu_cli_tests" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

const char* kSingleUnit = R"(
[experiment]
name = single_unit
[params]
gamma = 1.2
sigma = 0.0001
[integrator]
dt = 0.01
t_end = 80
stride = 10
[run]
seed = 21
)";

} // namespace

TEST_CASE("seed is required unless overridden") {
    const auto cfg = Config::parse_string("[experiment]\nname = single_unit\n"
                                          "[params]\ngamma = 1.2\n"
                                          "[integrator]\nt_end = 5\n");
    RunOptions opt;
    opt.out_dir = fresh_dir("noseed").string();
    CHECK_THROWS_AS(run_experiment(cfg, opt), ConfigError);
    opt.seed_override = 7;
    CHECK_NOTHROW(run_experiment(cfg, opt));
}

TEST_CASE("single-unit run emits a consistent artifact set") {
    const auto cfg = Config::parse_string(kSingleUnit);
    RunOptions opt;
    const auto dir = fresh_dir("single");
    opt.out_dir = dir.string();
    run_experiment(cfg, opt);

    for (const char* f : {"snapshot.snap", "symbols.csv", "regimes.csv", "manifest.txt"})
        CHECK(fs::exists(dir / f));
    CHECK(!fs::exists(dir / "hierarchy.csv")); // three-item run
    CHECK(!fs::exists(dir / "frames"));

    const auto snap = read_snapshot((dir / "snapshot.snap").string());
    CHECK(snap.header.units == 1);
    CHECK(snap.header.items == 3);
    CHECK(snap.header.seed == 21);
    CHECK(snap.header.dt == 0.01);
    CHECK(snap.header.stride == 10);
    CHECK(std::string(snap.header.topology) == "single");
    CHECK(snap.frames.size() == 801); // t_end / (dt * stride) + initial frame

    // manifest entries must match the files on disk
    std::istringstream man(slurp(dir / "manifest.txt"));
    std::string word;
    int file_lines = 0;
    bool saw_seed = false;
    while (man >> word) {
        if (word == "seed") {
            std::uint64_t s;
            man >> s;
            CHECK(s == 21);
            saw_seed = true;
        } else if (word == "file") {
            std::string crc_hex, rel;
            std::size_t size;
            man >> crc_hex >> size >> rel;
            const auto data = slurp(dir / rel);
            CHECK(data.size() == size);
            char expect[16];
            std::snprintf(expect, sizeof(expect), "%08x",
                          crc32(data.data(), data.size()));
            CHECK(crc_hex == expect);
            ++file_lines;
        }
    }
    CHECK(saw_seed);
    CHECK(file_lines == 3);

    // a rerun with the same config and seed is byte-identical
    const auto dir2 = fresh_dir("single_rerun");
    opt.out_dir = dir2.string();
    run_experiment(cfg, opt);
    CHECK(slurp(dir / "snapshot.snap") == slurp(dir2 / "snapshot.snap"));
    CHECK(slurp(dir / "manifest.txt") == slurp(dir2 / "manifest.txt"));

    // a different seed changes the stochastic trajectory
    const auto dir3 = fresh_dir("single_seed2");
    opt.out_dir = dir3.string();
    opt.seed_override = 22;
    run_experiment(cfg, opt);
    CHECK(slurp(dir / "snapshot.snap") != slurp(dir3 / "snapshot.snap"));
}

TEST_CASE("unknown keys and experiments are rejected") {
    auto cfg = Config::parse_string(kSingleUnit);
    cfg.set("params", "gamm", "1.2"); // typo
    RunOptions opt;
    opt.out_dir = fresh_dir("badkey").string();
    CHECK_THROWS_AS(run_experiment(cfg, opt), ConfigError);

    auto cfg2 = Config::parse_string(kSingleUnit);
    cfg2.set("experiment", "name", "mystery");
    CHECK_THROWS_AS(run_experiment(cfg2, opt), ConfigError);

    auto cfg3 = Config::parse_string(kSingleUnit);
    cfg3.set("integrator", "scheme", "heun");
    CHECK_THROWS_AS(run_experiment(cfg3, opt), ConfigError);
}

TEST_CASE("sweep output is worker-count independent and deterministically ordered") {
    const auto cfg = Config::parse_string(R"(
[experiment]
name = sweep
base = single_unit
[params]
gamma = 1.0
sigma = 0.0001
[integrator]
dt = 0.01
t_end = 60
stride = 10
[sweep]
parameter = params.gamma
values = 1.3, 0.9, 1.2
[run]
seed = 5
)");
    RunOptions opt;
    const auto d1 = fresh_dir("sweep1");
    opt.out_dir = d1.string();
    opt.workers = 1;
    run_experiment(cfg, opt);
    const auto d2 = fresh_dir("sweep2");
    opt.out_dir = d2.string();
    opt.workers = 2;
    run_experiment(cfg, opt);

    const auto csv = slurp(d1 / "sweep.csv");
    CHECK(csv == slurp(d2 / "sweep.csv"));
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "run_index,value,seed,status,entrainment_length,regime,hierarchy,amplitude");
    std::vector<std::string> rows;
    while (std::getline(is, line)) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].rfind("0,1.3", 0) == 0); // input order preserved
    CHECK(rows[1].rfind("1,0.9", 0) == 0);
    CHECK(rows[2].rfind("2,1.2", 0) == 0);
    for (const auto& r : rows) CHECK(r.find(",ok,") != std::string::npos);
    // per-run artifact directories with their own snapshots
    for (const char* rd : {"run_000", "run_001", "run_002"})
        CHECK(fs::exists(d1 / rd / "snapshot.snap"));
    CHECK(slurp(d1 / "run_001" / "snapshot.snap") == slurp(d2 / "run_001" / "snapshot.snap"));

    // empty sweep values: header-only table
    auto empty_cfg = cfg;
    empty_cfg.set("sweep", "values", "");
    const auto d3 = fresh_dir("sweep_empty");
    opt.out_dir = d3.string();
    run_experiment(empty_cfg, opt);
    std::istringstream es(slurp(d3 / "sweep.csv"));
    int n_lines = 0;
    while (std::getline(es, line)) ++n_lines;
    CHECK(n_lines == 1);
}

TEST_CASE("bifurcation scan reproduces the frozen critical coupling") {
    const auto cfg = Config::parse_string(R"(
[experiment]
name = bifurcation_scan
[scan]
gamma_p_min = 0.6
gamma_p_max = 0.6
gamma_p_steps = 1
gamma_d_min = 1.11
gamma_d_max = 1.11
gamma_d_steps = 1
[run]
seed = 1
)");
    RunOptions opt;
    const auto dir = fresh_dir("scan");
    opt.out_dir = dir.string();
    run_experiment(cfg, opt);
    std::istringstream is(slurp(dir / "scan.csv"));
    std::string header, row;
    REQUIRE(std::getline(is, header));
    REQUIRE(std::getline(is, row));
    std::vector<std::string> cells;
    std::istringstream rs(row);
    std::string cell;
    while (std::getline(rs, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 9);
    CHECK(std::stod(cells[0]) == 0.6);
    CHECK(std::stod(cells[1]) == 1.11);
    CHECK(std::stod(cells[2]) == doctest::Approx(0.7634966757171099).epsilon(1e-12));
    CHECK(std::stod(cells[3]) == doctest::Approx(0.1853069839659922).epsilon(1e-12));
    CHECK(cells[7] == "0"); // no oscillatory window in the coexistence regime
}

TEST_CASE("hcusim executable maps errors to exit codes") {
    const fs::path exe = fs::path(HCU_BINARY_DIR) / "hcusim";
    if (!fs::exists(exe)) return; // tool target not built in this configuration

    const auto dir = fresh_dir("exe");
    const auto cfg_path = dir / "run.ini";
    {
        std::ofstream os(cfg_path);
        os << kSingleUnit;
    }
    auto run = [&](const std::string& args) {
        const std::string cmd = exe.string() + " " + args + " >/dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    };
    CHECK(run("--config " + cfg_path.string() + " --out " + (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "snapshot.snap"));
    CHECK(run("--config " + (dir / "missing.ini").string()) == 2);
    const auto bad = dir / "bad.ini";
    {
        std::ofstream os(bad);
        os << "[experiment]\nname = mystery\n[run]\nseed = 1\n";
    }
    CHECK(run("--config " + bad.string()) == 2);
}
