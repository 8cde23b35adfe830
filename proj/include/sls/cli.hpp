#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sls/column.hpp"
#include "sls/errors.hpp"
#include "sls/eval.hpp"
#include "sls/netmodel.hpp"
#include "sls/realization.hpp"
#include "sls/serialization.hpp"

namespace sls {

inline constexpr int kConfigSchemaVersion = 1;

enum class Command { Synthesize, Simulate, CompareFir, Sweep, Validate };

inline Command command_from_string(const std::string& name) {
    if (name == "synthesize") return Command::Synthesize;
    if (name == "simulate") return Command::Simulate;
    if (name == "compare-fir") return Command::CompareFir;
    if (name == "sweep") return Command::Sweep;
    if (name == "validate") return Command::Validate;
    throw Error(ErrorCode::ConfigParse, "unknown command: " + name);
}

struct RunConfig {
    Command command = Command::Synthesize;

    // Plant source: either an explicit JSON file or chain parameters.
    std::optional<std::string> plant_file;
    std::optional<std::string> weights_file;
    Index chain_nodes = 20;
    double alpha = 0.4;
    double rho = 1.25;
    double density = 1.0;

    Index d = 1;
    Index comm_hops = 0;  // 0 means d + 1
    bool strict_extended = false;

    Index fir_horizon = 10;
    std::vector<Index> fir_horizons;
    std::vector<Index> chain_sizes;
    int timing_repeats = 5;

    std::string sim_kind = "gaussian";  // or "impulse"
    Index sim_steps = 100;
    Index impulse_index = 0;
    std::uint64_t seed = 0;

    Index verify_horizon = 100;
    double achievability_tol = 1e-9;

    std::string out_dir = "out";
    Index workers = 0;  // 0: SLS_WORKERS env var, then hardware concurrency
};

inline void apply_config_json(RunConfig& config, const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ConfigParse, "config must be a JSON object");
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kConfigSchemaVersion)
        throw Error(ErrorCode::ConfigParse, "unsupported config schema_version");
    auto get = [&j](const char* key, auto& target) {
        if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
    };
    if (j.contains("command")) config.command = command_from_string(j.at("command").get<std::string>());
    if (j.contains("plant_file")) config.plant_file = j.at("plant_file").get<std::string>();
    if (j.contains("weights_file")) config.weights_file = j.at("weights_file").get<std::string>();
    get("chain", config.chain_nodes);
    get("alpha", config.alpha);
    get("rho", config.rho);
    get("density", config.density);
    get("d", config.d);
    get("comm_hops", config.comm_hops);
    get("strict_extended", config.strict_extended);
    get("fir_horizon", config.fir_horizon);
    get("fir_horizons", config.fir_horizons);
    get("chain_sizes", config.chain_sizes);
    get("timing_repeats", config.timing_repeats);
    get("sim_kind", config.sim_kind);
    get("sim_steps", config.sim_steps);
    get("impulse_index", config.impulse_index);
    get("seed", config.seed);
    get("verify_horizon", config.verify_horizon);
    get("achievability_tol", config.achievability_tol);
    get("out_dir", config.out_dir);
    get("workers", config.workers);
}

namespace detail {

struct Setup {
    Plant plant;
    CostWeights weights;
    Pattern adj;
    Pattern loc;
    Pattern ext;
    Pattern comm;
};

inline Index effective_workers(const RunConfig& config) {
    if (config.workers > 0) return config.workers;
    if (const char* env = std::getenv("SLS_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<Index>(v);
    }
    return 0;
}

inline Setup build_setup(const RunConfig& config) {
    std::optional<Plant> plant;
    std::optional<CostWeights> weights;
    if (config.plant_file) {
        plant = plant_from_json(parse_json_file(*config.plant_file));
    } else {
        auto [p, w] = chain_benchmark(config.chain_nodes, config.alpha, config.rho, config.density);
        plant = std::move(p);
        weights = std::move(w);
    }
    if (config.weights_file) weights = weights_from_json(parse_json_file(*config.weights_file));
    if (!weights)
        weights = CostWeights::identity(plant->partition.total_states(),
                                        plant->partition.total_inputs());
    weights->validate(plant->partition.total_states(), plant->partition.total_inputs());

    Pattern adj = adjacency_from_plant(*plant);
    Pattern loc = d_hop_pattern(adj, config.d, PatternRole::Localization);
    const Index hops = config.comm_hops > 0 ? config.comm_hops : config.d + 1;
    Pattern comm = d_hop_pattern(adj, hops, PatternRole::Communication);
    Pattern ext = extended_pattern(adj, loc);
    return {std::move(*plant), std::move(*weights), std::move(adj),
            std::move(loc), std::move(ext), std::move(comm)};
}

inline std::filesystem::path out_path(const RunConfig& config, const char* name) {
    return std::filesystem::path(config.out_dir) / name;
}

inline int run_validate(const RunConfig& config) {
    const Setup setup = build_setup(config);
    const PatternReport patterns =
        validate_patterns(setup.loc, setup.comm, setup.ext, config.strict_extended);
    const bool stabilizable = plant_stabilizable(setup.plant, setup.weights);

    std::vector<long> failed_columns;
    for (Index j = 0; j < setup.plant.partition.total_states(); ++j) {
        const ColumnProblem cp =
            reduce_column(setup.plant, setup.loc, setup.ext, setup.comm, setup.weights, j);
        if (!check_localizability(cp)) failed_columns.push_back(static_cast<long>(j));
    }

    Json report{{"patterns", pattern_report_to_json(patterns)},
                {"stabilizable", stabilizable},
                {"localizability",
                 Json{{"ok", failed_columns.empty()}, {"failed_columns", failed_columns}}}};
    write_text_file(out_path(config, "validation.json"), report.dump(2) + "\n");

    if (!patterns.ok)
        throw Error(ErrorCode::PatternViolation, "pattern validation failed; see validation.json");
    if (!stabilizable)
        throw Error(ErrorCode::NotStabilizable, "global plant/weight pair is not stabilizable");
    if (!failed_columns.empty())
        throw Error(ErrorCode::LocalizabilityFailed,
                    "boundary rows not absorbable for some columns; see validation.json",
                    failed_columns);
    return 0;
}

inline LocalizedClm synthesize_setup(const Setup& setup, const RunConfig& config) {
    return synthesize_all(setup.plant, setup.loc, setup.comm, setup.weights,
                          effective_workers(config));
}

inline int run_synthesize(const RunConfig& config) {
    const Setup setup = build_setup(config);
    const LocalizedClm clm = synthesize_setup(setup, config);
    const DistributedController dc(clm);
    const CostReport cost = h2_cost_lyapunov(clm, setup.weights);
    const AchievabilityReport achiev =
        verify_achievability(clm, config.verify_horizon, config.achievability_tol);
    const CommunicationAudit audit = communication_audit(dc, setup.comm);

    write_text_file(out_path(config, "clm.json"), clm_to_json(clm).dump() + "\n");
    write_text_file(out_path(config, "controller.json"), controller_to_json(dc).dump() + "\n");
    write_text_file(out_path(config, "cost.json"), cost_report_to_json(cost).dump(2) + "\n");
    Json summary{{"achievability",
                  Json{{"passed", achiev.passed},
                       {"max_residual", achiev.max_residual},
                       {"init_error", achiev.init_error},
                       {"structure_ok", achiev.structure_ok},
                       {"horizon", config.verify_horizon},
                       {"tol", achiev.tol}}},
                 {"communication_audit",
                  Json{{"ok", audit.ok()},
                       {"reads_checked", audit.reads_checked},
                       {"actuations_checked", audit.actuations_checked},
                       {"violations", audit.violations.size()}}},
                 {"h2_cost", cost.total}};
    write_text_file(out_path(config, "summary.json"), summary.dump(2) + "\n");
    return 0;
}

inline int run_simulate(const RunConfig& config) {
    const Setup setup = build_setup(config);
    const LocalizedClm clm = synthesize_setup(setup, config);
    const DistributedController dc(clm);

    std::vector<Vector> w;
    const Index n_x = setup.plant.partition.total_states();
    if (config.sim_kind == "impulse") {
        if (config.impulse_index < 0 || config.impulse_index >= n_x)
            throw Error(ErrorCode::ConfigInvalid, "impulse index out of range");
        Vector e = Vector::Zero(n_x);
        e(config.impulse_index) = 1.0;
        w.push_back(std::move(e));
    } else if (config.sim_kind == "gaussian") {
        w = gaussian_disturbances(n_x, config.sim_steps + 1, config.seed);
    } else {
        throw Error(ErrorCode::ConfigInvalid, "sim_kind must be gaussian or impulse");
    }

    const Trajectory traj = simulate_closed_loop(setup.plant, dc, w, config.sim_steps);
    write_text_file(out_path(config, "trajectory.csv"), trajectory_to_csv(traj));

    if (config.sim_kind == "impulse") {
        const double leak =
            localization_leak(traj, setup.loc, setup.plant.partition, config.impulse_index);
        Json report{{"source", config.impulse_index}, {"leak", leak}, {"steps", config.sim_steps}};
        write_text_file(out_path(config, "leak.json"), report.dump(2) + "\n");
    }
    return 0;
}

inline int run_compare_fir(const RunConfig& config) {
    if (config.fir_horizons.empty())
        throw Error(ErrorCode::ConfigInvalid, "compare-fir needs a list of FIR horizons");
    SweepConfig sweep;
    sweep.fir_horizons = config.fir_horizons;
    sweep.chain_nodes = config.chain_nodes;
    sweep.alpha = config.alpha;
    sweep.rho = config.rho;
    sweep.density = config.density;
    sweep.d = config.d;
    sweep.comm_hops = config.comm_hops;
    sweep.timing_repeats = config.timing_repeats;
    const auto rows = benchmark_sweep(sweep);
    write_text_file(out_path(config, "fir_compare.csv"), sweep_to_csv(rows));
    return 0;
}

inline int run_sweep(const RunConfig& config) {
    if (config.fir_horizons.empty() && config.chain_sizes.empty()) {
        write_text_file(out_path(config, "sweep.csv"), sweep_to_csv({}));
        return 0;
    }
    SweepConfig sweep;
    sweep.fir_horizons = config.fir_horizons;
    sweep.chain_sizes = config.chain_sizes;
    sweep.chain_nodes = config.chain_nodes;
    sweep.alpha = config.alpha;
    sweep.rho = config.rho;
    sweep.density = config.density;
    sweep.d = config.d;
    sweep.comm_hops = config.comm_hops;
    sweep.fir_horizon_for_sizes = config.fir_horizon;
    sweep.timing_repeats = config.timing_repeats;
    const auto rows = benchmark_sweep(sweep);
    write_text_file(out_path(config, "sweep.csv"), sweep_to_csv(rows));
    return 0;
}

}  // namespace detail

// Executes one command; throws sls::Error on any failure.
inline int run(const RunConfig& config) {
    switch (config.command) {
        case Command::Validate: return detail::run_validate(config);
        case Command::Synthesize: return detail::run_synthesize(config);
        case Command::Simulate: return detail::run_simulate(config);
        case Command::CompareFir: return detail::run_compare_fir(config);
        case Command::Sweep: return detail::run_sweep(config);
    }
    throw Error(ErrorCode::ConfigInvalid, "unhandled command");
}

inline Json error_to_json(const Error& e) {
    Json out{{"error", Json{{"code", e.code_name()}, {"message", e.what()}}}};
    if (!e.columns().empty()) out["error"]["columns"] = e.columns();
    return out;
}

// CLI entry point: runs the command, mapping failures to a machine-readable
// JSON error object on stdout (and error.json next to the other artifacts).
inline int run_cli(const RunConfig& config, std::ostream& out = std::cout) {
    try {
        return run(config);
    } catch (const Error& e) {
        const Json err = error_to_json(e);
        out << err.dump() << std::endl;
        try {
            write_text_file(detail::out_path(config, "error.json"), err.dump(2) + "\n");
        } catch (const Error&) {
            // the error report itself is best effort
        }
        return 1;
    }
}

}  // namespace sls
