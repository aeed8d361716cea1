#include "hcu/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "hcu/equilibria.hpp"
#include "hcu/ppm.hpp"
#include "hcu/rng.hpp"
#include "hcu/snapshot.hpp"
#include "hcu/topology.hpp"

namespace fs = std::filesystem;

namespace hcu {

namespace {

const std::map<std::string, std::vector<std::string>> kSchema = {
    {"experiment", {"name", "base"}},
    {"kinetics", {"items", "rho", "c", "e", "d", "f", "r"}},
    {"params", {"gamma", "gamma_p", "gamma_d", "sigma", "sigma_p"}},
    {"topology",
     {"n", "l", "delta", "delta_b", "delta_p", "pacemaker", "boundary", "p_defect",
      "radius", "gamma_lo", "gamma_hi", "field_seed"}},
    {"integrator", {"dt", "t_end", "stride", "scheme", "clamp_floor"}},
    {"analysis",
     {"window_frac", "hi_frac", "lo_frac", "amp_frac", "theta_dom", "theta_var",
      "theta_hc", "theta_flat", "theta_qp", "theta_mono", "n_bins"}},
    {"run", {"seed"}},
    {"output", {"export_frames"}},
    {"quench", {"time", "gamma"}},
    {"sweep", {"parameter", "values", "workers"}},
    {"scan",
     {"gamma_p_min", "gamma_p_max", "gamma_p_steps", "gamma_d_min", "gamma_d_max",
      "gamma_d_steps"}},
};

GlvKinetics build_kinetics(const Config& cfg) {
    const std::int64_t items = cfg.get_int("kinetics", "items", 3);
    const double rho = cfg.get_double("kinetics", "rho", 1.0);
    const double c = cfg.get_double("kinetics", "c", 2.0);
    const double e = cfg.get_double("kinetics", "e", 0.2);
    if (items == 3) return GlvKinetics::three(rho, c, e);
    if (items == 9) {
        const double d = cfg.get_double("kinetics", "d", 2.0);
        const double r = cfg.get_double("kinetics", "r", 1.25);
        const double f = cfg.get_double("kinetics", "f"); // no canonical default
        return GlvKinetics::nine(rho, c, e, d, f, r);
    }
    throw ConfigError("[kinetics].items: must be 3 or 9");
}

IntegratorConfig build_integrator(const Config& cfg, std::uint64_t seed) {
    IntegratorConfig ic;
    ic.dt = cfg.get_double("integrator", "dt", 0.01);
    ic.t_end = cfg.get_double("integrator", "t_end");
    ic.record_stride = static_cast<int>(cfg.get_int("integrator", "stride", 20));
    ic.clamp_floor = cfg.get_double("integrator", "clamp_floor", 0.0);
    ic.seed = seed;
    const std::string scheme = cfg.get_string("integrator", "scheme", "em");
    if (scheme == "rk4")
        ic.scheme = Scheme::rk4;
    else if (scheme == "em")
        ic.scheme = Scheme::euler_maruyama;
    else
        throw ConfigError("[integrator].scheme: must be 'rk4' or 'em'");
    ic.validate();
    return ic;
}

AnalysisThresholds build_thresholds(const Config& cfg) {
    AnalysisThresholds th;
    th.window_frac = cfg.get_double("analysis", "window_frac", th.window_frac);
    th.hi_frac = cfg.get_double("analysis", "hi_frac", th.hi_frac);
    th.lo_frac = cfg.get_double("analysis", "lo_frac", th.lo_frac);
    th.amp_frac = cfg.get_double("analysis", "amp_frac", th.amp_frac);
    th.dom = cfg.get_double("analysis", "theta_dom", th.dom);
    th.var = cfg.get_double("analysis", "theta_var", th.var);
    th.hc_min = cfg.get_double("analysis", "theta_hc", th.hc_min);
    th.flat = cfg.get_double("analysis", "theta_flat", th.flat);
    th.qp_spread = cfg.get_double("analysis", "theta_qp", th.qp_spread);
    th.mono = cfg.get_double("analysis", "theta_mono", th.mono);
    return th;
}

GridBoundary parse_boundary(const Config& cfg) {
    const std::string b = cfg.get_string("topology", "boundary", "periodic");
    if (b == "periodic") return GridBoundary::periodic;
    if (b == "no_flux") return GridBoundary::no_flux;
    throw ConfigError("[topology].boundary: must be 'periodic' or 'no_flux'");
}

ParameterField pacemaker_chain_field(const Config& cfg, int N) {
    const double gamma_p = cfg.get_double("params", "gamma_p");
    const double gamma_d = cfg.get_double("params", "gamma_d");
    const double sigma = cfg.get_double("params", "sigma", 0.0);
    ParameterField pf;
    pf.gamma.assign(N, gamma_d);
    pf.sigma.assign(N, sigma);
    pf.gamma[0] = gamma_p;
    pf.sigma[0] = cfg.get_double("params", "sigma_p", sigma);
    pf.pacemakers = {0};
    return pf;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::HC: return "HC";
        case Regime::LC: return "LC";
        case Regime::CE: return "CE";
        case Regime::QP: return "QP";
        default: return "UNKNOWN";
    }
}

const char* hierarchy_name(HierarchyLabel h) {
    switch (h) {
        case HierarchyLabel::two_level: return "two-level";
        case HierarchyLabel::one_level: return "one-level";
        default: return "coexistence";
    }
}

const char* path_name(PathId p) {
    switch (p) {
        case PathId::path1: return "path1";
        case PathId::path2: return "path2";
        default: return "unknown";
    }
}

std::vector<int> representative_units(const Trajectory& traj) {
    const int N = traj.units();
    std::vector<int> units;
    if (N <= 256) {
        units.resize(N);
        for (int k = 0; k < N; ++k) units[k] = k;
        return units;
    }
    std::set<int> pick = {0, N / 2, N - 1};
    for (int p : traj.params.pacemakers) {
        pick.insert(p);
        if (pick.size() >= 8) break;
    }
    return {pick.begin(), pick.end()};
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);
    return os;
}

} // namespace

ExperimentSetup build_setup(const Config& cfg, std::uint64_t seed) {
    cfg.validate_schema(kSchema);
    ExperimentSetup s;
    s.name = cfg.get_string("experiment", "name");
    s.kinetics = build_kinetics(cfg);
    s.integrator = build_integrator(cfg, seed);
    s.thresholds = build_thresholds(cfg);

    if (s.name == "single_unit") {
        s.coupling = CouplingMatrix(1);
        s.coupling.finalize();
        s.params = ParameterField::uniform(1, cfg.get_double("params", "gamma"),
                                           cfg.get_double("params", "sigma", 0.0));
        s.topology_tag = "single";
    } else if (s.name == "two_unit") {
        const double delta = cfg.get_double("topology", "delta");
        const double delta_b = cfg.get_double("topology", "delta_b", 0.0);
        s.coupling = chain_bidirectional(2, delta, delta_b);
        s.params = pacemaker_chain_field(cfg, 2);
        s.topology_tag = "two_unit";
    } else if (s.name == "chain") {
        const int N = static_cast<int>(cfg.get_int("topology", "n"));
        const double delta = cfg.get_double("topology", "delta");
        const double delta_b = cfg.get_double("topology", "delta_b", 0.0);
        s.coupling = delta_b > 0.0 ? chain_bidirectional(N, delta, delta_b)
                                   : chain_unidirectional(N, delta);
        s.params = pacemaker_chain_field(cfg, N);
        s.topology_tag = "chain";
    } else if (s.name == "ring") {
        const int N = static_cast<int>(cfg.get_int("topology", "n"));
        const double delta = cfg.get_double("topology", "delta");
        const double delta_p = cfg.get_double("topology", "delta_p");
        const int k_p = static_cast<int>(cfg.get_int("topology", "pacemaker", 0));
        s.coupling = ring_directed(N, delta, delta_p, k_p);
        s.params = pacemaker_chain_field(cfg, N);
        s.params.pacemakers = {k_p};
        if (k_p != 0) {
            std::swap(s.params.gamma[0], s.params.gamma[k_p]);
            std::swap(s.params.sigma[0], s.params.sigma[k_p]);
        }
        s.topology_tag = "ring";
    } else if (s.name == "ring_distance") {
        const int N = static_cast<int>(cfg.get_int("topology", "n"));
        s.coupling = ring_distance_dependent(N, cfg.get_double("topology", "delta"),
                                             cfg.get_double("topology", "delta_b"));
        s.params = pacemaker_chain_field(cfg, N);
        s.topology_tag = "ring_distance";
    } else if (s.name == "grid_random" || s.name == "grid_disc" || s.name == "quench") {
        const int L = static_cast<int>(cfg.get_int("topology", "l"));
        const double delta = cfg.get_double("topology", "delta");
        s.coupling = grid_diffusive(L, delta, parse_boundary(cfg));
        const double gamma_p = cfg.get_double("params", "gamma_p");
        const double gamma_lo = cfg.get_double("topology", "gamma_lo");
        const double gamma_hi = cfg.get_double("topology", "gamma_hi");
        const std::uint64_t field_seed =
            cfg.has("topology", "field_seed") ? cfg.get_u64("topology", "field_seed") : seed;
        if (s.name == "grid_random") {
            s.params = random_defect_field(L, cfg.get_double("topology", "p_defect"),
                                           gamma_p, gamma_lo, gamma_hi, field_seed);
        } else {
            s.params = disc_pacemaker_field(L, cfg.get_double("topology", "radius"),
                                            gamma_p, gamma_lo, gamma_hi, field_seed);
        }
        const double sigma = cfg.get_double("params", "sigma", 0.0);
        s.params.sigma.assign(L * L, sigma);
        if (s.name == "quench") {
            QuenchSchedule q;
            q.events.push_back({cfg.get_double("quench", "time"), s.params.pacemakers,
                                cfg.get_double("quench", "gamma")});
            s.quench = q;
        }
        s.grid_side = L;
        s.topology_tag = s.name;
    } else {
        throw ConfigError("[experiment].name: unknown experiment '" + s.name + "'");
    }
    s.params.validate();
    return s;
}

std::vector<std::string> emit_artifacts(const Trajectory& traj, const ExperimentSetup& setup,
                                        const std::string& out_dir, bool export_frames) {
    fs::create_directories(out_dir);
    std::vector<std::string> files;
    const AnalysisThresholds& th = setup.thresholds;
    const int N = traj.units();
    const int items = traj.items();

    { // snapshot
        Snapshot snap;
        snap.header.units = static_cast<std::uint32_t>(N);
        snap.header.items = static_cast<std::uint32_t>(items);
        snap.header.frames = traj.frames.size();
        snap.header.dt = traj.config.dt;
        snap.header.stride = static_cast<std::uint32_t>(traj.config.record_stride);
        snap.header.seed = traj.config.seed;
        const std::string tag = traj.topology_tag.substr(0, 31);
        std::copy(tag.begin(), tag.end(), snap.header.topology);
        snap.frames = traj.frames;
        const std::string path = out_dir + "/snapshot.snap";
        write_snapshot(path, snap);
        files.push_back(path);
    }

    const std::vector<int> reps = representative_units(traj);

    {
        const std::string path = out_dir + "/symbols.csv";
        auto os = open_csv(path);
        os << "unit,item,entry_time,dwell\n";
        for (int k : reps) {
            const auto seq = symbol_sequence(traj, k, th.hi_frac, th.lo_frac, th.window_frac);
            for (const auto& sym : seq.symbols)
                os << k << "," << sym.item + 1 << "," << fmt(sym.entry_time) << ","
                   << fmt(sym.dwell) << "\n";
        }
        files.push_back(path);
    }
    {
        const std::string path = out_dir + "/regimes.csv";
        auto os = open_csv(path);
        os << "unit,regime,min_concentration,amplitude,maxima_spread,dwell_growth,"
              "variance,variance_trend\n";
        for (int k : reps) {
            const auto r = classify_regime(traj, k, th);
            os << k << "," << regime_name(r.regime) << "," << fmt(r.min_concentration)
               << "," << fmt(r.amplitude) << "," << fmt(r.maxima_spread) << ","
               << fmt(r.dwell_growth) << "," << fmt(r.variance) << ","
               << fmt(r.variance_trend) << "\n";
        }
        files.push_back(path);
    }
    if (items == 9) {
        const std::string hpath = out_dir + "/hierarchy.csv";
        auto os = open_csv(hpath);
        os << "unit,level,valid,total_amplitude,within_group_spread,distinct_groups\n";
        for (int k : reps) {
            const auto h = hierarchy_level(traj, k, th);
            os << k << "," << hierarchy_name(h.label) << "," << (h.valid ? 1 : 0) << ","
               << fmt(h.total_amplitude) << "," << fmt(h.within_group_spread) << ","
               << h.distinct_groups << "\n";
        }
        files.push_back(hpath);

        const std::string ppath = out_dir + "/path.csv";
        auto os2 = open_csv(ppath);
        os2 << "unit,path\n";
        for (int k : reps) {
            const auto seq = symbol_sequence(traj, k, th.hi_frac, th.lo_frac, th.window_frac);
            os2 << k << "," << path_name(detect_path(seq)) << "\n";
        }
        files.push_back(ppath);
    }
    if (setup.grid_side == 0 && N >= 2 && !traj.params.pacemakers.empty() &&
        traj.params.pacemakers.front() == 0) {
        const double theta_amp = th.amp_frac * traj.rho / traj.params.gamma[N > 1 ? 1 : 0];
        const std::string path = out_dir + "/entrainment.csv";
        auto os = open_csv(path);
        os << "theta_amp,length\n";
        os << fmt(theta_amp) << "," << entrainment_length(traj, theta_amp, items, th) << "\n";
        files.push_back(path);
    }
    if (setup.grid_side > 0) {
        const int L = setup.grid_side;
        const int n_bins = 16;
        const auto prof = radial_amplitude_profile(traj, L, (L - 1) / 2.0, (L - 1) / 2.0,
                                                   n_bins, th);
        const std::string path = out_dir + "/profile.csv";
        auto os = open_csv(path);
        os << "bin_center,amplitude,count\n";
        for (int b = 0; b < n_bins; ++b)
            os << fmt(prof.bin_center[b]) << "," << fmt(prof.amplitude[b]) << ","
               << prof.count[b] << "\n";
        files.push_back(path);
    }
    if (export_frames) {
        const int w = setup.grid_side > 0 ? setup.grid_side : N;
        const int h = setup.grid_side > 0 ? setup.grid_side : 1;
        Palette pal;
        double gamma_min = traj.params.gamma[0];
        for (double g : traj.params.gamma) gamma_min = std::min(gamma_min, g);
        pal.s_ref = traj.rho / gamma_min;
        export_ppm_frames(spatiotemporal_field(traj, th.dom), w, h, items,
                          out_dir + "/frames", pal, &files);
    }
    return files;
}

void write_manifest(const std::string& out_dir, const Config& cfg, std::uint64_t seed,
                    const std::vector<std::string>& files) {
    const std::string serialized = cfg.serialize();
    const std::string path = out_dir + "/manifest.txt";
    auto os = open_csv(path);
    os << "config_crc32 " << std::hex << std::setw(8) << std::setfill('0')
       << crc32(serialized.data(), serialized.size()) << std::dec << "\n";
    os << "seed " << seed << "\n";
    for (const auto& f : files) {
        std::ifstream is(f, std::ios::binary);
        if (!is) throw IoError("manifest: cannot reopen output " + f);
        std::ostringstream buf;
        buf << is.rdbuf();
        const std::string data = buf.str();
        os << "file " << std::hex << std::setw(8) << std::setfill('0')
           << crc32(data.data(), data.size()) << std::dec << " " << data.size() << " "
           << fs::relative(f, out_dir).generic_string() << "\n";
    }
}

namespace {

void run_single(const Config& cfg, std::uint64_t seed, const std::string& out_dir,
                bool export_frames) {
    const ExperimentSetup setup = build_setup(cfg, seed);
    Trajectory traj;
    try {
        traj = simulate(setup.coupling, setup.params, setup.kinetics, setup.integrator,
                        setup.quench ? &*setup.quench : nullptr, nullptr,
                        setup.topology_tag);
    } catch (const IntegrationFault& fault) {
        fs::create_directories(out_dir);
        auto os = open_csv(out_dir + "/fault.txt");
        os << "integration_fault unit=" << fault.unit << " item=" << fault.item
           << " time=" << fmt(fault.time) << "\n";
        write_manifest(out_dir, cfg, seed, {out_dir + "/fault.txt"});
        throw;
    }
    const auto files = emit_artifacts(traj, setup, out_dir, export_frames);
    write_manifest(out_dir, cfg, seed, files);
}

struct SweepRow {
    std::size_t index = 0;
    double value = 0.0;
    std::uint64_t seed = 0;
    std::string status = "ok";
    int entrainment = -1;
    std::string regime;
    std::string hierarchy;
    double amplitude = 0.0;
};

void run_sweep(const Config& cfg, std::uint64_t master_seed, const RunOptions& opt) {
    const std::string param = cfg.get_string("sweep", "parameter");
    const std::size_t dot = param.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == param.size())
        throw ConfigError("[sweep].parameter: expected 'section.key'");
    const std::string p_section = param.substr(0, dot);
    const std::string p_key = param.substr(dot + 1);
    const std::vector<double> values = cfg.get_double_list("sweep", "values");
    const std::string base = cfg.get_string("experiment", "base");

    int workers = static_cast<int>(cfg.get_int("sweep", "workers", opt.workers));
    workers = std::max(1, workers);

    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= values.size()) return;
            SweepRow& row = rows[i];
            row.index = i;
            row.value = values[i];
            row.seed = derive_stream(master_seed, i);
            Config run_cfg = cfg;
            run_cfg.set("experiment", "name", base);
            run_cfg.set(p_section, p_key, fmt(values[i]));
            char dirname[32];
            std::snprintf(dirname, sizeof(dirname), "run_%03zu", i);
            const std::string run_dir = opt.out_dir + "/" + dirname;
            try {
                const ExperimentSetup setup = build_setup(run_cfg, row.seed);
                const Trajectory traj =
                    simulate(setup.coupling, setup.params, setup.kinetics, setup.integrator,
                             setup.quench ? &*setup.quench : nullptr, nullptr,
                             setup.topology_tag);
                const auto files = emit_artifacts(traj, setup, run_dir, opt.export_frames);
                write_manifest(run_dir, run_cfg, row.seed, files);
                const AnalysisThresholds& th = setup.thresholds;
                const int N = traj.units();
                if (setup.grid_side == 0 && N >= 2) {
                    const double theta_amp =
                        th.amp_frac * traj.rho / traj.params.gamma[1];
                    row.entrainment = entrainment_length(traj, theta_amp, traj.items(), th);
                }
                row.regime = regime_name(classify_regime(traj, 0, th).regime);
                if (traj.items() == 9)
                    row.hierarchy = hierarchy_name(hierarchy_level(traj, 0, th).label);
                row.amplitude = oscillation_amplitude(traj, 0, th.window_frac);
            } catch (const std::exception& ex) {
                row.status = std::string("fault: ") + ex.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    fs::create_directories(opt.out_dir);
    const std::string path = opt.out_dir + "/sweep.csv";
    auto os = open_csv(path);
    os << "run_index,value,seed,status,entrainment_length,regime,hierarchy,amplitude\n";
    for (const auto& row : rows)
        os << row.index << "," << fmt(row.value) << "," << row.seed << "," << row.status
           << "," << row.entrainment << "," << row.regime << "," << row.hierarchy << ","
           << fmt(row.amplitude) << "\n";
    write_manifest(opt.out_dir, cfg, master_seed, {path});
}

void run_scan(const Config& cfg, std::uint64_t seed, const RunOptions& opt) {
    const GlvKinetics kin = build_kinetics(cfg);
    const auto* three = std::get_if<ThreeItemRates>(&kin.rates);
    if (!three) throw ConfigError("bifurcation_scan: three-item kinetics required");
    const double p_lo = cfg.get_double("scan", "gamma_p_min");
    const double p_hi = cfg.get_double("scan", "gamma_p_max");
    const double d_lo = cfg.get_double("scan", "gamma_d_min");
    const double d_hi = cfg.get_double("scan", "gamma_d_max");
    const int p_n = static_cast<int>(cfg.get_int("scan", "gamma_p_steps"));
    const int d_n = static_cast<int>(cfg.get_int("scan", "gamma_d_steps"));
    if (p_n < 1 || d_n < 1) throw ConfigError("[scan]: step counts must be >= 1");

    fs::create_directories(opt.out_dir);
    const std::string path = opt.out_dir + "/scan.csv";
    auto os = open_csv(path);
    os << "gamma_P,gamma_D,delta_c1,delta_c2,delta_c3,delta_c4,c3_valid,c4_valid,"
          "unique_region\n";
    for (int i = 0; i < p_n; ++i) {
        const double gp = p_n == 1 ? p_lo : p_lo + (p_hi - p_lo) * i / (p_n - 1);
        for (int j = 0; j < d_n; ++j) {
            const double gd = d_n == 1 ? d_lo : d_lo + (d_hi - d_lo) * j / (d_n - 1);
            const auto cc = critical_couplings(gp, gd, three->c, three->e, kin.rho);
            os << fmt(gp) << "," << fmt(gd) << "," << fmt(cc.delta_c1) << ","
               << fmt(cc.delta_c2) << "," << fmt(cc.delta_c3) << "," << fmt(cc.delta_c4)
               << "," << cc.delta_c3_valid << "," << cc.delta_c4_valid << ","
               << cc.unique_region << "\n";
        }
    }
    write_manifest(opt.out_dir, cfg, seed, {path});
}

} // namespace

void run_experiment(const Config& cfg, const RunOptions& opt) {
    cfg.validate_schema(kSchema);
    std::uint64_t seed;
    if (opt.seed_override)
        seed = *opt.seed_override;
    else if (cfg.has("run", "seed"))
        seed = cfg.get_u64("run", "seed");
    else
        throw ConfigError("[run].seed: required (or pass --seed)");

    const std::string name = cfg.get_string("experiment", "name");
    const bool frames = opt.export_frames || cfg.get_bool("output", "export_frames", false);
    if (name == "sweep") {
        RunOptions o = opt;
        o.export_frames = frames;
        run_sweep(cfg, seed, o);
    } else if (name == "bifurcation_scan") {
        run_scan(cfg, seed, opt);
    } else {
        run_single(cfg, seed, opt.out_dir, frames);
    }
}

} // namespace hcu
