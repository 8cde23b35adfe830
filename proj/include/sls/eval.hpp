#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sls/column.hpp"
#include "sls/errors.hpp"
#include "sls/linalg.hpp"
#include "sls/netmodel.hpp"
#include "sls/realization.hpp"

namespace sls {

enum class CostMethod { Lyapunov, Truncated };

struct CostReport {
    double total = 0.0;
    std::vector<double> per_column;
    CostMethod method = CostMethod::Lyapunov;
};

namespace detail {

struct ColumnCostData {
    Matrix q_interior;
    Matrix r_inputs;
};

inline ColumnCostData column_cost_data(const ColumnSolution& cs, const CostWeights& weights) {
    return {submatrix(weights.Q, cs.support, cs.support),
            submatrix(weights.R, cs.input_support, cs.input_support)};
}

}  // namespace detail

// Exact infinite-horizon quadratic cost of each column impulse response via
// one Stein solve per column; the embedded zeros contribute nothing, so the
// reduced weights suffice.
inline CostReport h2_cost_lyapunov(const LocalizedClm& clm, const CostWeights& weights) {
    CostReport report;
    report.method = CostMethod::Lyapunov;
    report.per_column.reserve(clm.columns.size());
    for (const auto& cs : clm.columns) {
        const auto data = detail::column_cost_data(cs, weights);
        const Matrix m = data.q_interior + cs.Fu.transpose() * data.r_inputs * cs.Fu;
        const Matrix g = dlyap_solve(cs.Acl, m);
        report.per_column.push_back(g(cs.j_in_support, cs.j_in_support));
    }
    for (double c : report.per_column) report.total += c;
    return report;
}

// Partial sum of the same series, evaluated term by term; cross-validation
// route for the Stein-based evaluation.
inline CostReport h2_cost_truncated(const LocalizedClm& clm, const CostWeights& weights,
                                    Index terms) {
    if (terms < 1) throw Error(ErrorCode::ConfigInvalid, "need at least one series term");
    CostReport report;
    report.method = CostMethod::Truncated;
    report.per_column.reserve(clm.columns.size());
    for (const auto& cs : clm.columns) {
        const auto data = detail::column_cost_data(cs, weights);
        Vector state = cs.init();
        double acc = 0.0;
        for (Index k = 0; k < terms; ++k) {
            const Vector input = cs.Fu * state;
            acc += state.dot(data.q_interior * state) + input.dot(data.r_inputs * input);
            state = cs.Acl * state;
        }
        report.per_column.push_back(acc);
    }
    for (double c : report.per_column) report.total += c;
    return report;
}

// Plant rollout x[t] = A x[t-1] + B u[t-1] + w[t] with x[0] = w[0] and the
// control law in the loop. Disturbances beyond the provided sequence are zero.
template <typename ControlLaw>
Trajectory simulate_closed_loop(const Plant& plant, ControlLaw&& law,
                                const std::vector<Vector>& w_sequence, Index steps) {
    const Index n_x = plant.partition.total_states();
    auto w_at = [&](Index t) -> Vector {
        if (t < static_cast<Index>(w_sequence.size())) {
            const auto& w = w_sequence[static_cast<std::size_t>(t)];
            if (w.size() != n_x)
                throw Error(ErrorCode::DimensionMismatch, "disturbance dimension mismatch");
            return w;
        }
        return Vector::Zero(n_x);
    };

    Trajectory traj;
    traj.x.reserve(static_cast<std::size_t>(steps) + 1);
    traj.u.reserve(static_cast<std::size_t>(steps) + 1);
    Vector x = w_at(0);
    for (Index t = 0; t <= steps; ++t) {
        traj.x.push_back(x);
        Vector u = law(x, t);
        traj.u.push_back(u);
        if (t < steps) x = plant.A * x + plant.B * u + w_at(t + 1);
    }
    return traj;
}

// Overload running a fresh copy of a distributed controller and logging its
// internal disturbance estimates.
inline Trajectory simulate_closed_loop(const Plant& plant, DistributedController controller,
                                       const std::vector<Vector>& w_sequence, Index steps) {
    controller.reset();
    std::vector<Vector> w_hat_log;
    w_hat_log.reserve(static_cast<std::size_t>(steps) + 1);
    Trajectory traj = simulate_closed_loop(
        plant,
        [&](const Vector& x, Index) {
            Vector u = controller.step(x);
            w_hat_log.push_back(controller.disturbance_estimates());
            return u;
        },
        w_sequence, steps);
    traj.w_hat = std::move(w_hat_log);
    return traj;
}

// Largest state magnitude observed outside the region the localization
// pattern grants to disturbances entering at state `source`.
inline double localization_leak(const Trajectory& traj, const Pattern& loc,
                                const SubsystemPartition& part, Index source) {
    const Index c = part.subsystem_of_state(source);
    std::vector<bool> inside(static_cast<std::size_t>(part.total_states()), false);
    for (Index s = 0; s < part.total_states(); ++s)
        inside[static_cast<std::size_t>(s)] = loc.at(part.subsystem_of_state(s), c);
    double leak = 0.0;
    for (const auto& x : traj.x)
        for (Index s = 0; s < x.size(); ++s)
            if (!inside[static_cast<std::size_t>(s)]) leak = std::max(leak, std::abs(x(s)));
    return leak;
}

// ---------------------------------------------------------------------------
// FIR baseline: per-column finite-horizon quadratic program with a hard
// deadbeat closure at the horizon.
// ---------------------------------------------------------------------------

struct FirClm {
    Index horizon = 0;
    std::vector<Matrix> phix;  // embedded spectral elements, 0..horizon
    std::vector<Matrix> phiu;
    bool feasible = false;
    std::vector<long> infeasible_columns;
    std::vector<Index> variable_counts;  // per column
};

namespace detail {

struct FirColumn {
    IndexList support;
    IndexList input_support;
    Index j_in_support = 0;
    Matrix h;
    Matrix aeq;
    Vector beq;
    Index n_states = 0;
    Index n_inputs = 0;
};

// Assembles the equality-constrained QP for one column: variables are the
// pattern-permitted entries of the column spectral elements over the horizon,
// constraints are the initial condition, the closed-loop recursion on every
// row the dynamics can touch, and the deadbeat terminal row.
inline FirColumn build_fir_column(const Plant& plant, const Pattern& loc, const Pattern& comm,
                                  const CostWeights& weights, Index horizon, Index j) {
    const auto& part = plant.partition;
    const Index c = part.subsystem_of_state(j);

    FirColumn fc;
    for (Index s = 0; s < part.total_states(); ++s)
        if (loc.at(part.subsystem_of_state(s), c)) fc.support.push_back(s);
    for (Index q = 0; q < part.total_inputs(); ++q)
        if (comm.at(part.subsystem_of_input(q), c)) fc.input_support.push_back(q);
    if (fc.support.empty())
        throw Error(ErrorCode::EmptySupport, "column " + std::to_string(j) + " has empty support",
                    {j});
    const auto jpos = position_of(fc.support, j);
    if (!jpos)
        throw Error(ErrorCode::PatternViolation,
                    "column " + std::to_string(j) + " excludes its own subsystem", {j});
    fc.j_in_support = *jpos;

    const Index ns = static_cast<Index>(fc.support.size());
    const Index np = static_cast<Index>(fc.input_support.size());
    fc.n_states = ns;
    fc.n_inputs = np;

    // Rows the recursion can feed: the support itself plus anything one step
    // of A from the support or one step of B from the permitted inputs hits.
    std::vector<bool> reach_mask(static_cast<std::size_t>(part.total_states()), false);
    for (const Index s : fc.support) reach_mask[static_cast<std::size_t>(s)] = true;
    for (Index r = 0; r < part.total_states(); ++r) {
        if (reach_mask[static_cast<std::size_t>(r)]) continue;
        bool hit = false;
        for (const Index s : fc.support)
            if (std::abs(plant.A(r, s)) > kSupportTol) { hit = true; break; }
        if (!hit)
            for (const Index q : fc.input_support)
                if (std::abs(plant.B(r, q)) > kSupportTol) { hit = true; break; }
        reach_mask[static_cast<std::size_t>(r)] = hit;
    }
    IndexList reach;
    for (Index r = 0; r < part.total_states(); ++r)
        if (reach_mask[static_cast<std::size_t>(r)]) reach.push_back(r);
    const Index nr = static_cast<Index>(reach.size());

    const Matrix a_red = submatrix(plant.A, reach, fc.support);
    const Matrix b_red = submatrix(plant.B, reach, fc.input_support);
    std::vector<std::optional<Index>> reach_in_support(static_cast<std::size_t>(nr));
    for (Index r = 0; r < nr; ++r)
        reach_in_support[static_cast<std::size_t>(r)] = position_of(fc.support, reach[static_cast<std::size_t>(r)]);

    const Index n_vars = (horizon + 1) * (ns + np);
    const Index x_base = 0;
    const Index u_base = (horizon + 1) * ns;
    auto x_var = [&](Index k, Index i) { return x_base + k * ns + i; };
    auto u_var = [&](Index k, Index i) { return u_base + k * np + i; };

    const Index n_rows = ns + (horizon + 1) * nr;
    fc.aeq = Matrix::Zero(n_rows, n_vars);
    fc.beq = Vector::Zero(n_rows);
    Index row = 0;
    for (Index i = 0; i < ns; ++i, ++row) {
        fc.aeq(row, x_var(0, i)) = 1.0;
        fc.beq(row) = i == fc.j_in_support ? 1.0 : 0.0;
    }
    for (Index k = 0; k <= horizon; ++k) {
        for (Index r = 0; r < nr; ++r, ++row) {
            if (k < horizon && reach_in_support[static_cast<std::size_t>(r)])
                fc.aeq(row, x_var(k + 1, *reach_in_support[static_cast<std::size_t>(r)])) = -1.0;
            for (Index i = 0; i < ns; ++i) fc.aeq(row, x_var(k, i)) = a_red(r, i);
            for (Index i = 0; i < np; ++i) fc.aeq(row, u_var(k, i)) = b_red(r, i);
        }
    }

    const Matrix q_red = submatrix(weights.Q, fc.support, fc.support);
    const Matrix r_red = submatrix(weights.R, fc.input_support, fc.input_support);
    fc.h = Matrix::Zero(n_vars, n_vars);
    for (Index k = 0; k <= horizon; ++k) {
        fc.h.block(x_var(k, 0), x_var(k, 0), ns, ns) = q_red;
        fc.h.block(u_var(k, 0), u_var(k, 0), np, np) = r_red;
    }
    return fc;
}

struct FirColumnSolution {
    std::vector<Vector> states;  // interior entries, 0..horizon
    std::vector<Vector> inputs;
};

inline FirColumnSolution solve_fir_column(const FirColumn& fc, Index horizon) {
    const KktSolution sol = kkt_solve(fc.h, Vector::Zero(fc.h.rows()), fc.aeq, fc.beq);
    FirColumnSolution out;
    out.states.reserve(static_cast<std::size_t>(horizon) + 1);
    out.inputs.reserve(static_cast<std::size_t>(horizon) + 1);
    const Index u_base = (horizon + 1) * fc.n_states;
    for (Index k = 0; k <= horizon; ++k) {
        out.states.push_back(sol.z.segment(k * fc.n_states, fc.n_states));
        out.inputs.push_back(sol.z.segment(u_base + k * fc.n_inputs, fc.n_inputs));
    }
    return out;
}

}  // namespace detail

// Finite-horizon pattern-constrained synthesis. Infeasibility of any column
// is the baseline's native failure mode and is reported per column rather
// than thrown, so horizon scans can observe the infeasible regime.
inline FirClm fir_synthesize(const Plant& plant, const Pattern& loc, const Pattern& comm,
                             const CostWeights& weights, Index horizon, Index workers = 0) {
    if (horizon < 1) throw Error(ErrorCode::ConfigInvalid, "FIR horizon must be >= 1");
    const auto& part = plant.partition;
    weights.validate(part.total_states(), part.total_inputs());

    const Index n_x = part.total_states();
    const Index n_u = part.total_inputs();
    FirClm fir;
    fir.horizon = horizon;
    fir.phix.assign(static_cast<std::size_t>(horizon) + 1, Matrix::Zero(n_x, n_x));
    fir.phiu.assign(static_cast<std::size_t>(horizon) + 1, Matrix::Zero(n_u, n_x));
    fir.variable_counts.assign(static_cast<std::size_t>(n_x), 0);

    std::vector<std::optional<long>> infeasible(static_cast<std::size_t>(n_x));
    std::vector<std::optional<Error>> hard_errors(static_cast<std::size_t>(n_x));
    std::vector<std::optional<std::pair<detail::FirColumn, detail::FirColumnSolution>>> solved(
        static_cast<std::size_t>(n_x));

    auto solve_one = [&](Index j) {
        try {
            detail::FirColumn fc = detail::build_fir_column(plant, loc, comm, weights, horizon, j);
            fir.variable_counts[static_cast<std::size_t>(j)] = fc.h.rows();
            detail::FirColumnSolution sol = detail::solve_fir_column(fc, horizon);
            solved[static_cast<std::size_t>(j)] = {std::move(fc), std::move(sol)};
        } catch (const Error& e) {
            if (e.code() == ErrorCode::KktInfeasible)
                infeasible[static_cast<std::size_t>(j)] = static_cast<long>(j);
            else
                hard_errors[static_cast<std::size_t>(j)] = e;
        }
    };

    const Index n_workers = detail::resolve_workers(workers, n_x);
    if (n_workers == 1) {
        for (Index j = 0; j < n_x; ++j) solve_one(j);
    } else {
        std::atomic<Index> next{0};
        std::vector<std::thread> pool;
        for (Index w = 0; w < n_workers; ++w)
            pool.emplace_back([&] {
                for (Index j = next.fetch_add(1); j < n_x; j = next.fetch_add(1)) solve_one(j);
            });
        for (auto& t : pool) t.join();
    }

    for (const auto& err : hard_errors)
        if (err) throw *err;
    for (const auto& inf : infeasible)
        if (inf) fir.infeasible_columns.push_back(*inf);
    fir.feasible = fir.infeasible_columns.empty();
    if (!fir.feasible) return fir;

    for (Index j = 0; j < n_x; ++j) {
        const auto& [fc, sol] = *solved[static_cast<std::size_t>(j)];
        for (Index k = 0; k <= horizon; ++k) {
            for (std::size_t i = 0; i < fc.support.size(); ++i)
                fir.phix[static_cast<std::size_t>(k)](fc.support[i], j) =
                    sol.states[static_cast<std::size_t>(k)](static_cast<Index>(i));
            for (std::size_t i = 0; i < fc.input_support.size(); ++i)
                fir.phiu[static_cast<std::size_t>(k)](fc.input_support[i], j) =
                    sol.inputs[static_cast<std::size_t>(k)](static_cast<Index>(i));
        }
    }
    return fir;
}

inline double fir_cost(const FirClm& fir, const CostWeights& weights) {
    if (!fir.feasible)
        throw Error(ErrorCode::FirInfeasible, "cost of an infeasible FIR synthesis",
                    fir.infeasible_columns);
    double total = 0.0;
    for (Index k = 0; k <= fir.horizon; ++k) {
        const auto& px = fir.phix[static_cast<std::size_t>(k)];
        const auto& pu = fir.phiu[static_cast<std::size_t>(k)];
        total += (px.transpose() * weights.Q * px).trace();
        total += (pu.transpose() * weights.R * pu).trace();
    }
    return total;
}

// ---------------------------------------------------------------------------
// Monte-Carlo cost estimation and benchmark sweeps
// ---------------------------------------------------------------------------

inline std::vector<Vector> gaussian_disturbances(Index dim, Index count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    for (Index t = 0; t < count; ++t) {
        Vector w(dim);
        for (Index i = 0; i < dim; ++i) w(i) = normal(rng);
        out.push_back(std::move(w));
    }
    return out;
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    Index batches = 0;
};

// Time-average of the stage cost under i.i.d. unit-covariance noise, with a
// batch-means standard error to absorb the serial correlation of the
// closed-loop process.
inline MonteCarloEstimate monte_carlo_h2(const Plant& plant, const DistributedController& dc,
                                         const CostWeights& weights, Index steps, Index burn_in,
                                         std::uint64_t seed, Index batch_size = 50) {
    const auto w = gaussian_disturbances(plant.partition.total_states(), steps + 1, seed);
    const Trajectory traj = simulate_closed_loop(plant, dc, w, steps);

    std::vector<double> stage;
    stage.reserve(static_cast<std::size_t>(steps - burn_in) + 1);
    for (Index t = burn_in; t <= steps; ++t) {
        const auto& x = traj.x[static_cast<std::size_t>(t)];
        const auto& u = traj.u[static_cast<std::size_t>(t)];
        stage.push_back(x.dot(weights.Q * x) + u.dot(weights.R * u));
    }

    MonteCarloEstimate est;
    const Index n_batches = static_cast<Index>(stage.size()) / batch_size;
    if (n_batches < 2) throw Error(ErrorCode::ConfigInvalid, "not enough samples for batch means");
    std::vector<double> batch_means;
    batch_means.reserve(static_cast<std::size_t>(n_batches));
    for (Index b = 0; b < n_batches; ++b) {
        double acc = 0.0;
        for (Index i = 0; i < batch_size; ++i)
            acc += stage[static_cast<std::size_t>(b * batch_size + i)];
        batch_means.push_back(acc / static_cast<double>(batch_size));
    }
    for (double m : batch_means) est.mean += m;
    est.mean /= static_cast<double>(n_batches);
    double var = 0.0;
    for (double m : batch_means) var += (m - est.mean) * (m - est.mean);
    var /= static_cast<double>(n_batches - 1);
    est.std_error = std::sqrt(var / static_cast<double>(n_batches));
    est.batches = n_batches;
    return est;
}

struct SweepConfig {
    std::vector<Index> fir_horizons;   // horizon sweep at fixed chain size
    std::vector<Index> chain_sizes;    // size sweep at fixed FIR horizon
    Index chain_nodes = 20;
    double alpha = 0.4;
    double rho = 1.25;
    double density = 1.0;
    Index d = 5;
    Index comm_hops = 0;               // 0 means d + 1
    Index fir_horizon_for_sizes = 10;
    int timing_repeats = 5;
};

struct SweepRow {
    std::string kind;   // "fir_horizon" or "chain_size"
    double parameter = 0.0;
    Index n_x = 0;
    Index n_u = 0;
    double ih_cost = std::numeric_limits<double>::quiet_NaN();
    double fir_cost_value = std::numeric_limits<double>::quiet_NaN();
    int fir_feasible = 0;
    double ih_percol_median_ms = 0.0;
    double ih_parallel_ms = 0.0;
    double ih_total_ms = 0.0;
    double fir_percol_median_ms = 0.0;
    double fir_parallel_ms = 0.0;
    double fir_total_ms = 0.0;
    Index ih_reduced_dim_median = 0;
    Index fir_vars_median = 0;
    std::string note;
};

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

inline Index median_index(std::vector<Index> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

struct TimingSummary {
    double percol_median_ms = 0.0;
    double parallel_ms = 0.0;  // max over columns, i.e. ideal parallel wall time
    double total_ms = 0.0;
};

// Times fn(j) for every column over `repeats` full passes. Per-column cost is
// the median over passes; the pass-level max and sum are medianed the same way.
template <typename Fn>
TimingSummary time_columns(Index n_cols, int repeats, Fn&& fn) {
    using clock = std::chrono::steady_clock;
    std::vector<std::vector<double>> per_col(static_cast<std::size_t>(n_cols));
    std::vector<double> pass_max, pass_sum;
    for (int rep = 0; rep < repeats; ++rep) {
        double sum = 0.0, mx = 0.0;
        for (Index j = 0; j < n_cols; ++j) {
            const auto t0 = clock::now();
            fn(j);
            const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
            per_col[static_cast<std::size_t>(j)].push_back(ms);
            sum += ms;
            mx = std::max(mx, ms);
        }
        pass_max.push_back(mx);
        pass_sum.push_back(sum);
    }
    std::vector<double> col_medians;
    col_medians.reserve(per_col.size());
    for (auto& samples : per_col) col_medians.push_back(median(std::move(samples)));
    TimingSummary out;
    out.percol_median_ms = median(std::move(col_medians));
    out.parallel_ms = median(std::move(pass_max));
    out.total_ms = median(std::move(pass_sum));
    return out;
}

}  // namespace detail

// Cost and timing table across FIR horizons and/or chain sizes. Synthesis
// failures annotate the row instead of aborting the sweep.
inline std::vector<SweepRow> benchmark_sweep(const SweepConfig& config) {
    std::vector<SweepRow> rows;
    const Index comm_hops = config.comm_hops > 0 ? config.comm_hops : config.d + 1;

    auto make_setup = [&](Index nodes) {
        auto [plant, weights] = chain_benchmark(nodes, config.alpha, config.rho, config.density);
        const Pattern adj = adjacency_from_plant(plant);
        const Pattern loc = d_hop_pattern(adj, config.d, PatternRole::Localization);
        Pattern comm = d_hop_pattern(adj, comm_hops, PatternRole::Communication);
        return std::tuple<Plant, CostWeights, Pattern, Pattern>{
            std::move(plant), std::move(weights), std::move(loc), std::move(comm)};
    };

    auto ih_row_fill = [&](SweepRow& row, const Plant& plant, const CostWeights& weights,
                           const Pattern& loc, const Pattern& comm) {
        try {
            const LocalizedClm clm = synthesize_all(plant, loc, comm, weights);
            row.ih_cost = h2_cost_lyapunov(clm, weights).total;
            const Pattern ext = extended_pattern(adjacency_from_plant(plant), loc);
            std::vector<Index> dims;
            for (const auto& cs : clm.columns) dims.push_back(static_cast<Index>(cs.support.size()));
            row.ih_reduced_dim_median = detail::median_index(std::move(dims));
            const auto timing = detail::time_columns(
                plant.partition.total_states(), config.timing_repeats, [&](Index j) {
                    const ColumnProblem cp = reduce_column(plant, loc, ext, comm, weights, j);
                    solve_column(deconstrain(cp), cp);
                });
            row.ih_percol_median_ms = timing.percol_median_ms;
            row.ih_parallel_ms = timing.parallel_ms;
            row.ih_total_ms = timing.total_ms;
        } catch (const Error& e) {
            row.note = std::string("ih:") + e.code_name();
        }
    };

    auto fir_row_fill = [&](SweepRow& row, const Plant& plant, const CostWeights& weights,
                            const Pattern& loc, const Pattern& comm, Index horizon) {
        try {
            const FirClm fir = fir_synthesize(plant, loc, comm, weights, horizon);
            row.fir_feasible = fir.feasible ? 1 : 0;
            if (fir.feasible) row.fir_cost_value = fir_cost(fir, weights);
            std::vector<Index> vars(fir.variable_counts);
            row.fir_vars_median = detail::median_index(std::move(vars));
            const auto timing = detail::time_columns(
                plant.partition.total_states(), config.timing_repeats, [&](Index j) {
                    const auto fc = detail::build_fir_column(plant, loc, comm, weights, horizon, j);
                    try {
                        detail::solve_fir_column(fc, horizon);
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::KktInfeasible) throw;
                    }
                });
            row.fir_percol_median_ms = timing.percol_median_ms;
            row.fir_parallel_ms = timing.parallel_ms;
            row.fir_total_ms = timing.total_ms;
        } catch (const Error& e) {
            if (!row.note.empty()) row.note += ";";
            row.note += std::string("fir:") + e.code_name();
        }
    };

    if (!config.fir_horizons.empty()) {
        const auto [plant, weights, loc, comm] = make_setup(config.chain_nodes);
        SweepRow base;
        base.kind = "fir_horizon";
        base.n_x = plant.partition.total_states();
        base.n_u = plant.partition.total_inputs();
        ih_row_fill(base, plant, weights, loc, comm);
        for (const Index horizon : config.fir_horizons) {
            SweepRow row = base;
            row.parameter = static_cast<double>(horizon);
            fir_row_fill(row, plant, weights, loc, comm, horizon);
            rows.push_back(std::move(row));
        }
    }

    for (const Index nodes : config.chain_sizes) {
        const auto [plant, weights, loc, comm] = make_setup(nodes);
        SweepRow row;
        row.kind = "chain_size";
        row.parameter = static_cast<double>(nodes);
        row.n_x = plant.partition.total_states();
        row.n_u = plant.partition.total_inputs();
        ih_row_fill(row, plant, weights, loc, comm);
        fir_row_fill(row, plant, weights, loc, comm, config.fir_horizon_for_sizes);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace sls
