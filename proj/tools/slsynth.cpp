// Command-line front end: builds chain benchmarks or loads plants from JSON,
// synthesizes localized controllers, simulates them, and compares against the
// finite-horizon baseline. All outputs land in --out-dir as JSON/CSV.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "sls/cli.hpp"

namespace {

// Horizon/size lists accept "6,8,10", "6:40", or "6:40:2".
std::vector<sls::Index> parse_index_list(const std::string& text) {
    std::vector<sls::Index> out;
    std::stringstream ss(text);
    std::string chunk;
    while (std::getline(ss, chunk, ',')) {
        const auto c1 = chunk.find(':');
        if (c1 == std::string::npos) {
            out.push_back(static_cast<sls::Index>(std::stol(chunk)));
            continue;
        }
        const auto c2 = chunk.find(':', c1 + 1);
        const long lo = std::stol(chunk.substr(0, c1));
        const long hi = std::stol(c2 == std::string::npos ? chunk.substr(c1 + 1)
                                                          : chunk.substr(c1 + 1, c2 - c1 - 1));
        const long step = c2 == std::string::npos ? 1 : std::stol(chunk.substr(c2 + 1));
        if (step <= 0 || hi < lo) throw CLI::ValidationError("bad range: " + chunk);
        for (long v = lo; v <= hi; v += step) out.push_back(static_cast<sls::Index>(v));
    }
    return out;
}

struct FlagBindings {
    std::string config_file;
    std::string plant_file;
    std::string weights_file;
    long chain = 20;
    double alpha = 0.4;
    double rho = 1.25;
    double density = 1.0;
    long d = 1;
    long comm_hops = 0;
    bool strict_extended = false;
    long fir_horizon = 10;
    std::string fir_horizons;
    std::string chain_sizes;
    long timing_repeats = 5;
    std::string sim_kind = "gaussian";
    long sim_steps = 100;
    long impulse = 0;
    std::uint64_t seed = 0;
    long verify_horizon = 100;
    double achievability_tol = 1e-9;
    std::string out_dir = "out";
    long workers = 0;
};

struct BoundOptions {
    FlagBindings flags;
    std::map<std::string, CLI::Option*> opts;
};

void add_common_options(CLI::App* cmd, BoundOptions& b) {
    auto& f = b.flags;
    b.opts["config"] = cmd->add_option("--config", b.flags.config_file, "JSON config file; flags override its values");
    b.opts["plant_file"] = cmd->add_option("--plant-file", f.plant_file, "plant JSON instead of the chain benchmark");
    b.opts["weights_file"] = cmd->add_option("--weights-file", f.weights_file, "cost weights JSON (default identity)");
    b.opts["chain"] = cmd->add_option("--chain", f.chain, "chain benchmark size");
    b.opts["alpha"] = cmd->add_option("--alpha", f.alpha, "chain coupling parameter");
    b.opts["rho"] = cmd->add_option("--rho", f.rho, "chain gain parameter");
    b.opts["density"] = cmd->add_option("--density", f.density, "fraction of actuated nodes");
    b.opts["d"] = cmd->add_option("--d", f.d, "localization hops");
    b.opts["comm_hops"] = cmd->add_option("--comm-hops", f.comm_hops, "communication hops (default d+1)");
    b.opts["strict_extended"] = cmd->add_flag("--strict-extended", f.strict_extended,
                                              "require the extended pattern inside the communication pattern");
    b.opts["seed"] = cmd->add_option("--seed", f.seed, "random seed");
    b.opts["out_dir"] = cmd->add_option("--out-dir", f.out_dir, "artifact directory");
    b.opts["workers"] = cmd->add_option("--workers", f.workers, "worker threads (0: SLS_WORKERS env, then auto)");
    b.opts["verify_horizon"] = cmd->add_option("--verify-horizon", f.verify_horizon, "achievability check horizon");
    b.opts["achievability_tol"] = cmd->add_option("--achievability-tol", f.achievability_tol,
                                                  "achievability residual tolerance");
}

sls::RunConfig build_config(sls::Command command, const BoundOptions& b) {
    sls::RunConfig config;
    config.command = command;
    if (b.opts.count("config") && b.opts.at("config")->count())
        sls::apply_config_json(config, sls::parse_json_file(b.flags.config_file));
    config.command = command;  // the subcommand always wins over the file

    auto set = [&](const char* key, auto&& assign) {
        const auto it = b.opts.find(key);
        if (it != b.opts.end() && it->second != nullptr && it->second->count()) assign();
    };
    const auto& f = b.flags;
    set("plant_file", [&] { config.plant_file = f.plant_file; });
    set("weights_file", [&] { config.weights_file = f.weights_file; });
    set("chain", [&] { config.chain_nodes = f.chain; });
    set("alpha", [&] { config.alpha = f.alpha; });
    set("rho", [&] { config.rho = f.rho; });
    set("density", [&] { config.density = f.density; });
    set("d", [&] { config.d = f.d; });
    set("comm_hops", [&] { config.comm_hops = f.comm_hops; });
    set("strict_extended", [&] { config.strict_extended = f.strict_extended; });
    set("fir_horizon", [&] { config.fir_horizon = f.fir_horizon; });
    set("fir_horizons", [&] { config.fir_horizons = parse_index_list(f.fir_horizons); });
    set("chain_sizes", [&] { config.chain_sizes = parse_index_list(f.chain_sizes); });
    set("timing_repeats", [&] { config.timing_repeats = static_cast<int>(f.timing_repeats); });
    set("sim_kind", [&] { config.sim_kind = f.sim_kind; });
    set("sim_steps", [&] { config.sim_steps = f.sim_steps; });
    set("impulse", [&] {
        config.impulse_index = f.impulse;
        config.sim_kind = "impulse";
    });
    set("seed", [&] { config.seed = f.seed; });
    set("verify_horizon", [&] { config.verify_horizon = f.verify_horizon; });
    set("achievability_tol", [&] { config.achievability_tol = f.achievability_tol; });
    set("out_dir", [&] { config.out_dir = f.out_dir; });
    set("workers", [&] { config.workers = f.workers; });
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localized infinite-horizon state-feedback synthesis for networked systems"};
    app.require_subcommand(1);

    BoundOptions synth, sim, compare, sweep, validate;

    CLI::App* cmd_synth = app.add_subcommand("synthesize", "synthesize a localized controller");
    add_common_options(cmd_synth, synth);

    CLI::App* cmd_sim = app.add_subcommand("simulate", "synthesize and run a closed-loop simulation");
    add_common_options(cmd_sim, sim);
    sim.opts["sim_kind"] = cmd_sim->add_option("--sim-kind", sim.flags.sim_kind, "gaussian or impulse");
    sim.opts["sim_steps"] = cmd_sim->add_option("--steps", sim.flags.sim_steps, "simulation length");
    sim.opts["impulse"] = cmd_sim->add_option("--impulse", sim.flags.impulse,
                                              "impulse at this global state index (implies --sim-kind impulse)");

    CLI::App* cmd_compare = app.add_subcommand("compare-fir", "cost comparison against the FIR baseline");
    add_common_options(cmd_compare, compare);
    compare.opts["fir_horizons"] =
        cmd_compare->add_option("--fir-horizons", compare.flags.fir_horizons, "horizons, e.g. 6:40 or 6,10,20");
    compare.opts["timing_repeats"] =
        cmd_compare->add_option("--repeats", compare.flags.timing_repeats, "timing repetitions");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "cost/runtime table over horizons and chain sizes");
    add_common_options(cmd_sweep, sweep);
    sweep.opts["fir_horizons"] =
        cmd_sweep->add_option("--fir-horizons", sweep.flags.fir_horizons, "FIR horizon sweep list");
    sweep.opts["chain_sizes"] =
        cmd_sweep->add_option("--chain-sizes", sweep.flags.chain_sizes, "chain size sweep list");
    sweep.opts["fir_horizon"] =
        cmd_sweep->add_option("--T", sweep.flags.fir_horizon, "FIR horizon used in the size sweep");
    sweep.opts["timing_repeats"] =
        cmd_sweep->add_option("--repeats", sweep.flags.timing_repeats, "timing repetitions");

    CLI::App* cmd_validate = app.add_subcommand("validate", "check patterns, stabilizability, localizability");
    add_common_options(cmd_validate, validate);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_synth->parsed()) return sls::run_cli(build_config(sls::Command::Synthesize, synth));
        if (cmd_sim->parsed()) return sls::run_cli(build_config(sls::Command::Simulate, sim));
        if (cmd_compare->parsed()) return sls::run_cli(build_config(sls::Command::CompareFir, compare));
        if (cmd_sweep->parsed()) return sls::run_cli(build_config(sls::Command::Sweep, sweep));
        if (cmd_validate->parsed()) return sls::run_cli(build_config(sls::Command::Validate, validate));
    } catch (const sls::Error& e) {
        std::cout << sls::error_to_json(e).dump() << std::endl;
        return 1;
    }
    return 0;
}
