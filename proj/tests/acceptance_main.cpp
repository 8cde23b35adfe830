// Acceptance suite: one binary, one pass/fail line per criterion.
//
//   acceptance                 runs every criterion
//   acceptance --criterion N   runs a single criterion
//
// Exit code is the number of failed criteria. Artifacts (sweep tables,
// comparison CSVs) land under acceptance_artifacts/ in the working directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sls/cli.hpp"
#include "sls/column.hpp"
#include "sls/eval.hpp"
#include "sls/linalg.hpp"
#include "sls/netmodel.hpp"
#include "sls/realization.hpp"
#include "sls/serialization.hpp"

namespace {

using namespace sls;

struct CheckResult {
    bool passed = true;
    std::string detail;
};

struct Sub {
    std::ostringstream out;
    bool ok = true;
    bool first = true;

    void check(bool condition, const std::string& what) {
        if (!first) out << "; ";
        first = false;
        ok = condition && ok;
        if (!condition) out << "FAILED: ";
        out << what;
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct ChainCase {
    Plant plant;
    CostWeights weights;
    Pattern adj;
    Pattern loc;
    Pattern ext;
    Pattern comm;
};

ChainCase chain_case(Index nodes, Index d, double density) {
    auto [plant, weights] = chain_benchmark(nodes, 0.4, 1.25, density);
    Pattern adj = adjacency_from_plant(plant);
    Pattern loc = d_hop_pattern(adj, d, PatternRole::Localization);
    Pattern ext = extended_pattern(adj, loc);
    Pattern comm = d_hop_pattern(adj, d + 1, PatternRole::Communication);
    return {std::move(plant), std::move(weights), std::move(adj),
            std::move(loc), std::move(ext), std::move(comm)};
}

std::vector<Vector> impulse_at(Index n, Index j) {
    Vector e = Vector::Zero(n);
    e(j) = 1.0;
    return {e};
}

// --- criterion 1: dense-pattern oracle equivalence -------------------------

CheckResult criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    double worst_cost_rel = 0.0;
    double worst_spectral = 0.0;

    for (int trial = 0; trial < 20; ++trial) {
        const Index n_x = std::uniform_int_distribution<int>(2, 8)(rng);
        std::vector<Index> state_dims;
        Index left = n_x;
        while (left > 0) {
            const Index take = std::min<Index>(left, std::uniform_int_distribution<int>(1, 3)(rng));
            state_dims.push_back(take);
            left -= take;
        }
        std::vector<Index> input_dims(state_dims.size());
        Index n_u = 0;
        for (auto& m : input_dims) {
            m = std::uniform_int_distribution<int>(0, 2)(rng);
            n_u += m;
        }
        if (n_u == 0) {
            input_dims[0] = 1;
            n_u = 1;
        }

        Matrix a(n_x, n_x), b(n_x, n_u);
        std::normal_distribution<double> normal;
        for (Index i = 0; i < n_x; ++i)
            for (Index j = 0; j < n_x; ++j) a(i, j) = normal(rng);
        a *= std::uniform_real_distribution<double>(0.3, 1.2)(rng) / spectral_radius(a);
        for (Index i = 0; i < n_x; ++i)
            for (Index j = 0; j < n_u; ++j) b(i, j) = normal(rng);

        Plant plant(a, b, SubsystemPartition(state_dims, input_dims));
        const CostWeights weights = CostWeights::identity(n_x, n_u);
        const Index n_sub = plant.partition.count();
        const LocalizedClm clm =
            synthesize_all(plant, Pattern::ones(n_sub, PatternRole::Localization),
                           Pattern::ones(n_sub, PatternRole::Communication), weights);

        const DareSolution global = dare_solve(a, b, weights.Q, weights.R);
        const double cost = h2_cost_lyapunov(clm, weights).total;
        worst_cost_rel = std::max(worst_cost_rel,
                                  std::abs(cost - global.X.trace()) / global.X.trace());

        const Matrix acl = a + b * global.K;
        auto [phix, phiu] = clm.assemble(50);
        Matrix power = Matrix::Identity(n_x, n_x);
        for (Index k = 0; k <= 50; ++k) {
            worst_spectral = std::max(
                worst_spectral, (phix[static_cast<std::size_t>(k)] - power).cwiseAbs().maxCoeff());
            worst_spectral =
                std::max(worst_spectral, (phiu[static_cast<std::size_t>(k)] - global.K * power)
                                             .cwiseAbs()
                                             .maxCoeff());
            power = acl * power;
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Sub sub;
    sub.check(worst_cost_rel <= 1e-6, "cost vs trace(X) rel err " + fmt(worst_cost_rel) + " <= 1e-6");
    sub.check(worst_spectral <= 1e-8, "spectral elements err " + fmt(worst_spectral) + " <= 1e-8");
    sub.check(seconds < 10.0, "runtime " + fmt(seconds) + "s < 10s");
    return {sub.ok, sub.out.str()};
}

// --- criterion 2: localization on the chain benchmark ----------------------

CheckResult criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    Sub sub;

    {  // full actuation
        const ChainCase c = chain_case(20, 5, 1.0);
        bool assumption_ok = true;
        for (Index j = 0; j < 20; ++j) {
            const ColumnProblem cp = reduce_column(c.plant, c.loc, c.ext, c.comm, c.weights, j);
            assumption_ok = assumption_ok && check_localizability(cp);
        }
        sub.check(assumption_ok, "full actuation: boundary-rank check passes for all 20 columns");

        const LocalizedClm clm = synthesize_all(c.plant, c.loc, c.comm, c.weights);
        double worst_leak = 0.0;
        for (Index j = 0; j < 20; ++j) {
            const Trajectory traj = simulate_closed_loop(
                c.plant, DistributedController(clm), impulse_at(20, j), 200);
            worst_leak = std::max(worst_leak, localization_leak(traj, c.loc, c.plant.partition, j));
        }
        sub.check(worst_leak <= 1e-9,
                  "full actuation: impulse leak " + fmt(worst_leak) + " <= 1e-9 over 200 steps");
    }

    {  // the 50%-actuation variant
        const ChainCase c = chain_case(20, 5, 0.5);
        std::vector<long> failing;
        for (Index j = 0; j < 20; ++j) {
            const ColumnProblem cp = reduce_column(c.plant, c.loc, c.ext, c.comm, c.weights, j);
            if (!check_localizability(cp)) failing.push_back(static_cast<long>(j));
        }
        std::ostringstream what;
        what << "50% actuation: boundary-rank check passes for all columns";
        if (!failing.empty()) {
            what << " (fails for";
            for (long j : failing) what << " " << j;
            what << ": their boundary nodes are unactuated; alternating actuation cannot satisfy"
                    " the boundary-rank condition at any hop count)";
        }
        sub.check(failing.empty(), what.str());
        if (failing.empty()) {
            const LocalizedClm clm = synthesize_all(c.plant, c.loc, c.comm, c.weights);
            double worst_leak = 0.0;
            for (Index j = 0; j < 20; ++j) {
                const Trajectory traj = simulate_closed_loop(
                    c.plant, DistributedController(clm), impulse_at(20, j), 200);
                worst_leak =
                    std::max(worst_leak, localization_leak(traj, c.loc, c.plant.partition, j));
            }
            sub.check(worst_leak <= 1e-9, "50% actuation: impulse leak <= 1e-9");
        } else {
            sub.check(false, "50% actuation: impulse-leak check unreachable (no controller)");
        }
    }

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sub.check(seconds < 30.0, "runtime " + fmt(seconds) + "s < 30s");
    return {sub.ok, sub.out.str()};
}

// --- criterion 3: distributed vs monolithic equivalence --------------------

CheckResult criterion3() {
    const ChainCase c = chain_case(20, 5, 1.0);
    const LocalizedClm clm = synthesize_all(c.plant, c.loc, c.comm, c.weights);

    double worst_rel = 0.0;
    double worst_what = 0.0;
    for (int seq = 0; seq < 50; ++seq) {
        const auto w = gaussian_disturbances(20, 101, 9000 + seq);
        const Trajectory closed = simulate_closed_loop(c.plant, DistributedController(clm), w, 100);
        const Trajectory reference = monolithic_reference(clm, w);

        double scale = 0.0, err = 0.0;
        for (Index t = 0; t <= 100; ++t) {
            scale = std::max(scale, reference.x[static_cast<std::size_t>(t)].cwiseAbs().maxCoeff());
            scale = std::max(scale, reference.u[static_cast<std::size_t>(t)].cwiseAbs().maxCoeff());
            err = std::max(err, (closed.x[static_cast<std::size_t>(t)] -
                                 reference.x[static_cast<std::size_t>(t)]).cwiseAbs().maxCoeff());
            err = std::max(err, (closed.u[static_cast<std::size_t>(t)] -
                                 reference.u[static_cast<std::size_t>(t)]).cwiseAbs().maxCoeff());
            worst_what = std::max(worst_what, (closed.w_hat[static_cast<std::size_t>(t)] -
                                               w[static_cast<std::size_t>(t)]).cwiseAbs().maxCoeff());
        }
        worst_rel = std::max(worst_rel, err / scale);
    }

    Sub sub;
    sub.check(worst_rel <= 1e-8,
              "50 noise sequences: max relative trajectory error " + fmt(worst_rel) + " <= 1e-8");
    sub.check(worst_what <= 1e-9,
              "disturbance estimates recover injected noise to " + fmt(worst_what) + " <= 1e-9");
    return {sub.ok, sub.out.str()};
}

// --- criterion 4: achievability across the corpus --------------------------

CheckResult criterion4() {
    Sub sub;
    double worst_residual = 0.0;
    double worst_boundary = 0.0;

    auto run_case = [&](const Plant& plant, const CostWeights& weights, const Pattern& loc,
                        const Pattern& ext, const Pattern& comm, const std::string& name) {
        const LocalizedClm clm = synthesize_all(plant, loc, comm, weights);
        const AchievabilityReport report = verify_achievability(clm, 100, 1e-9);
        worst_residual = std::max({worst_residual, report.max_residual, report.init_error});
        sub.check(report.passed && report.structure_ok, name + " achievability");

        for (Index j = 0; j < plant.partition.total_states(); ++j) {
            const ColumnProblem cp = reduce_column(plant, loc, ext, comm, weights, j);
            const ColumnSolution& cs = clm.columns[static_cast<std::size_t>(j)];
            if (cp.boundary_dim() == 0) continue;
            worst_boundary =
                std::max(worst_boundary, (cp.B_b * cs.Fu + cp.A_bn).cwiseAbs().maxCoeff());
            Vector interior = cs.init();
            Vector boundary = Vector::Zero(cp.boundary_dim());
            for (Index k = 0; k <= 100; ++k) {
                const Vector input = cs.Fu * interior;
                const Vector next = cp.A_nn * interior + cp.A_nb * boundary + cp.B_n * input;
                boundary = cp.A_bn * interior + cp.A_bb * boundary + cp.B_b * input;
                interior = next;
                worst_boundary = std::max(worst_boundary, boundary.cwiseAbs().maxCoeff());
            }
        }
    };

    for (const auto& [nodes, d] : std::vector<std::pair<Index, Index>>{{20, 5}, {20, 2}, {10, 1}, {5, 1}, {12, 3}}) {
        const ChainCase c = chain_case(nodes, d, 1.0);
        run_case(c.plant, c.weights, c.loc, c.ext, c.comm,
                 "chain" + std::to_string(nodes) + "/d" + std::to_string(d));
    }

    std::mt19937_64 rng(515);
    for (int trial = 0; trial < 3; ++trial) {
        const Index n = 6;
        Matrix a(n, n), b(n, 3);
        std::normal_distribution<double> normal;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) a(i, j) = normal(rng);
        a *= 0.9 / spectral_radius(a);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < 3; ++j) b(i, j) = normal(rng);
        Plant plant(a, b, SubsystemPartition({2, 2, 2}, {1, 1, 1}));
        const Pattern ones = Pattern::ones(3, PatternRole::Localization);
        run_case(plant, CostWeights::identity(n, 3), ones, ones, ones,
                 "dense random #" + std::to_string(trial));
    }

    sub.check(worst_residual <= 1e-9, "max recursion residual " + fmt(worst_residual) + " <= 1e-9");
    sub.check(worst_boundary <= 1e-9,
              "boundary cancellation and zero-propagation " + fmt(worst_boundary) + " <= 1e-9");
    return {sub.ok, sub.out.str()};
}

// --- criterion 5: FIR comparison shape on the sparse-actuation benchmark ---

CheckResult criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    const ChainCase c = chain_case(20, 5, 0.5);
    Sub sub;

    std::vector<Index> horizons;
    for (Index t = 1; t <= 16; ++t) horizons.push_back(t);
    for (Index t : {18, 20, 24, 28, 32, 36, 40}) horizons.push_back(t);

    Index first_feasible = -1;
    bool monotone_feasibility = true;
    bool monotone_cost = true;
    double prev_cost = std::numeric_limits<double>::infinity();
    double cost_at_40 = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream table;
    table << "T,feasible,fir_cost\n";
    for (const Index horizon : horizons) {
        const FirClm fir = fir_synthesize(c.plant, c.loc, c.comm, c.weights, horizon);
        if (fir.feasible && first_feasible < 0) first_feasible = horizon;
        if (!fir.feasible && first_feasible >= 0) monotone_feasibility = false;
        table << horizon << "," << (fir.feasible ? 1 : 0) << ",";
        if (fir.feasible) {
            const double cost = fir_cost(fir, c.weights);
            if (cost > prev_cost + 1e-9) monotone_cost = false;
            prev_cost = cost;
            if (horizon == 40) cost_at_40 = cost;
            table << fmt17(cost);
        }
        table << "\n";
    }
    std::filesystem::create_directories("acceptance_artifacts");
    write_text_file("acceptance_artifacts/fir_shape.csv", table.str());

    sub.check(first_feasible > 1 && monotone_feasibility,
              "feasibility threshold exists (measured T*=" + std::to_string(first_feasible) +
                  "; infeasible below, feasible at and above)");
    sub.check(monotone_cost, "feasible FIR costs are monotone nonincreasing");

    // The infinite-horizon reference on this exact setup requires every
    // column to pass the boundary-rank check, which alternating actuation
    // cannot satisfy (see criterion 2); the comparison is attempted anyway so
    // the failure is visible rather than silently skipped.
    try {
        const LocalizedClm clm = synthesize_all(c.plant, c.loc, c.comm, c.weights);
        const double ih = h2_cost_lyapunov(clm, c.weights).total;
        sub.check(std::isfinite(cost_at_40) && (cost_at_40 - ih) / ih <= 0.01,
                  "FIR cost at T=40 within 1% of infinite-horizon cost");
    } catch (const Error& e) {
        sub.check(false, std::string("FIR-vs-infinite-horizon gap unreachable: ") + e.code_name() +
                             " (this benchmark cannot satisfy the boundary-rank condition;"
                             " see criterion 2)");
    }

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sub.check(seconds < 300.0, "runtime " + fmt(seconds) + "s < 5min");
    return {sub.ok, sub.out.str()};
}

// --- criterion 6: per-column runtime is size-independent --------------------

CheckResult criterion6() {
    SweepConfig config;
    config.chain_sizes = {20, 50, 100, 200};
    config.d = 5;
    config.density = 1.0;
    config.fir_horizon_for_sizes = 10;
    config.timing_repeats = 5;
    const auto rows = benchmark_sweep(config);

    std::filesystem::create_directories("acceptance_artifacts");
    write_text_file("acceptance_artifacts/sweep.csv", sweep_to_csv(rows));

    Sub sub;
    double min_med = std::numeric_limits<double>::infinity();
    double max_med = 0.0;
    bool costs_ok = true;
    for (const auto& row : rows) {
        min_med = std::min(min_med, row.ih_percol_median_ms);
        max_med = std::max(max_med, row.ih_percol_median_ms);
        costs_ok = costs_ok && std::isfinite(row.ih_cost) && row.fir_feasible == 1;
    }
    sub.check(costs_ok, "all four chain sizes synthesize and admit the T=10 FIR baseline");
    const double ratio = max_med / min_med;
    sub.check(rows.size() == 4 && ratio < 2.0,
              "median per-column solve time varies by " + fmt(ratio) +
                  "x (< 2x) across N in {20,50,100,200}");
    sub.check(rows.back().fir_percol_median_ms > 0.0,
              "FIR per-column KKT timings reported in acceptance_artifacts/sweep.csv");
    return {sub.ok, sub.out.str()};
}

// --- criterion 7: numerical kernel suite ------------------------------------

CheckResult criterion7() {
    Sub sub;
    std::mt19937_64 rng(777);
    std::normal_distribution<double> normal;

    double worst_residual = 0.0;
    double worst_agreement = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = std::uniform_int_distribution<int>(1, 8)(rng);
        const Index m = std::uniform_int_distribution<int>(1, static_cast<int>(n))(rng);
        Matrix a(n, n), b(n, m);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) a(i, j) = normal(rng);
        a *= std::uniform_real_distribution<double>(0.3, 1.25)(rng) / spectral_radius(a);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j) b(i, j) = normal(rng);
        Matrix qc(n, n), rc(m, m);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) qc(i, j) = normal(rng);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j) rc(i, j) = normal(rng);
        const Matrix q = qc.transpose() * qc / static_cast<double>(n) + 0.1 * Matrix::Identity(n, n);
        const Matrix r = rc.transpose() * rc / static_cast<double>(m) + 0.5 * Matrix::Identity(m, m);

        const DareSolution sda = dare_solve(a, b, q, r);
        worst_residual = std::max(worst_residual, sda.residual);
        const DareSolution vi = dare_solve_value_iteration(a, b, q, r);
        worst_agreement = std::max(worst_agreement, (sda.X - vi.X).norm());
    }
    sub.check(worst_residual <= 1e-10,
              "200 Riccati instances: fixed-point residual " + fmt(worst_residual) + " <= 1e-10");
    sub.check(worst_agreement <= 1e-8,
              "doubling vs value iteration " + fmt(worst_agreement) + " <= 1e-8");

    double worst_penrose = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const Index rows = std::uniform_int_distribution<int>(1, 7)(rng);
        const Index cols = std::uniform_int_distribution<int>(1, 7)(rng);
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
        if (trial % 3 == 0 && rows > 1) m.row(rows - 1) = m.row(0);  // force rank deficiency
        const Matrix p = pinv(m);
        worst_penrose = std::max({worst_penrose, (m * p * m - m).norm(), (p * m * p - p).norm(),
                                  ((m * p) - (m * p).transpose()).norm(),
                                  ((p * m) - (p * m).transpose()).norm()});
    }
    sub.check(worst_penrose <= 1e-9, "Penrose conditions " + fmt(worst_penrose) + " <= 1e-9");

    double worst_stein = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = std::uniform_int_distribution<int>(1, 8)(rng);
        Matrix a(n, n), mc(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) a(i, j) = normal(rng);
        a *= std::uniform_real_distribution<double>(0.2, 0.95)(rng) / spectral_radius(a);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) mc(i, j) = normal(rng);
        const Matrix m = mc.transpose() * mc;
        const Matrix g = dlyap_solve(a, m);
        worst_stein = std::max(worst_stein, (g - a.transpose() * g * a - m).norm());
    }
    sub.check(worst_stein <= 1e-10, "Stein residual " + fmt(worst_stein) + " <= 1e-10");

    int scenario = 0;
    for (const auto& [nodes, d, seed] :
         std::vector<std::tuple<Index, Index, std::uint64_t>>{{20, 5, 11}, {10, 2, 12}, {14, 3, 13}}) {
        const ChainCase c = chain_case(nodes, d, 1.0);
        const LocalizedClm clm = synthesize_all(c.plant, c.loc, c.comm, c.weights);
        const double lyap = h2_cost_lyapunov(clm, c.weights).total;
        const MonteCarloEstimate est =
            monte_carlo_h2(c.plant, DistributedController(clm), c.weights, 4000, 500, seed);
        ++scenario;
        sub.check(std::abs(est.mean - lyap) <= 3.0 * est.std_error,
                  "Monte-Carlo scenario " + std::to_string(scenario) + " within 3 standard errors (gap " +
                      fmt(std::abs(est.mean - lyap)) + ", 3se " + fmt(3.0 * est.std_error) + ")");
    }
    return {sub.ok, sub.out.str()};
}

// --- criterion 8: determinism of written artifacts --------------------------

CheckResult criterion8() {
    namespace fs = std::filesystem;
    const fs::path root = "acceptance_artifacts/determinism";
    fs::remove_all(root);
    Sub sub;

    auto run_twice = [&](RunConfig config, const std::string& label,
                         const std::vector<std::string>& names, bool strip_timing) {
        config.out_dir = (root / (label + "_a")).string();
        run(config);
        RunConfig again = config;
        again.out_dir = (root / (label + "_b")).string();
        run(again);
        for (const auto& name : names) {
            std::string lhs = read_text_file(fs::path(config.out_dir) / name);
            std::string rhs = read_text_file(fs::path(again.out_dir) / name);
            if (strip_timing) {
                lhs = strip_timing_columns(lhs);
                rhs = strip_timing_columns(rhs);
            }
            sub.check(lhs == rhs, label + "/" + name + " byte-identical" +
                                      (strip_timing ? " (timing columns exempt)" : ""));
        }
    };

    RunConfig synth;
    synth.command = Command::Synthesize;
    synth.chain_nodes = 20;
    synth.d = 5;
    run_twice(synth, "synthesize", {"clm.json", "controller.json", "cost.json", "summary.json"}, false);

    RunConfig sim;
    sim.command = Command::Simulate;
    sim.chain_nodes = 20;
    sim.d = 5;
    sim.sim_kind = "gaussian";
    sim.sim_steps = 100;
    sim.seed = 0;
    run_twice(sim, "simulate", {"trajectory.csv"}, false);

    RunConfig fir;
    fir.command = Command::CompareFir;
    fir.chain_nodes = 12;
    fir.d = 2;
    fir.fir_horizons = {8, 10, 12};
    fir.timing_repeats = 1;
    run_twice(fir, "compare_fir", {"fir_compare.csv"}, true);

    RunConfig sweep;
    sweep.command = Command::Sweep;
    sweep.chain_sizes = {10, 14};
    sweep.d = 2;
    sweep.fir_horizon = 8;
    sweep.timing_repeats = 1;
    run_twice(sweep, "sweep", {"sweep.csv"}, true);

    return {sub.ok, sub.out.str()};
}

const std::vector<std::pair<const char*, std::function<CheckResult()>>> kCriteria = {
    {"dense-pattern oracle equivalence", criterion1},
    {"chain localization (full and 50% actuation)", criterion2},
    {"distributed vs monolithic equivalence", criterion3},
    {"achievability suite", criterion4},
    {"FIR cost-comparison shape", criterion5},
    {"per-column runtime flat in network size", criterion6},
    {"numerical kernel suite", criterion7},
    {"artifact determinism", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    }

    int failures = 0;
    for (std::size_t idx = 0; idx < kCriteria.size(); ++idx) {
        const int number = static_cast<int>(idx) + 1;
        if (only != 0 && only != number) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult result;
        try {
            result = kCriteria[idx].second();
        } catch (const std::exception& e) {
            result = {false, std::string("unhandled error: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", result.passed ? "PASS" : "FAIL", number,
                    kCriteria[idx].first, result.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!result.passed) ++failures;
    }
    return failures;
}
