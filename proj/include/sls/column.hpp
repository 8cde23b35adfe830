#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sls/errors.hpp"
#include "sls/linalg.hpp"
#include "sls/netmodel.hpp"

namespace sls {

namespace detail {

inline Matrix submatrix(const Matrix& m, const IndexList& rows, const IndexList& cols) {
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < cols.size(); ++k)
            out(static_cast<Index>(i), static_cast<Index>(k)) = m(rows[i], cols[k]);
    return out;
}

inline std::optional<Index> position_of(const IndexList& ascending, Index value) {
    const auto it = std::lower_bound(ascending.begin(), ascending.end(), value);
    if (it == ascending.end() || *it != value) return std::nullopt;
    return static_cast<Index>(it - ascending.begin());
}

}  // namespace detail

// One column subproblem after restriction to its localized region. States are
// rearranged as [interior; boundary ring], inputs keep ascending global order.
struct ColumnProblem {
    Index j = 0;                // global state index this column responds to
    IndexList support;          // interior states (ascending global indices)
    IndexList boundary;         // boundary-ring states (ascending global indices)
    IndexList input_support;    // permitted global input indices (ascending)
    Matrix A_nn, A_nb, A_bn, A_bb;
    Matrix B_n, B_b;
    Matrix Qj;                  // state weight on the rearranged [interior; boundary] vector
    Matrix Rj;                  // input weight on the permitted inputs
    Index j_in_support = 0;     // position of j within the interior block
    Index j_in_reduced = 0;     // position of j within the rearranged vector

    Index interior_dim() const { return static_cast<Index>(support.size()); }
    Index boundary_dim() const { return static_cast<Index>(boundary.size()); }
    Index input_dim() const { return static_cast<Index>(input_support.size()); }

    Matrix q_interior() const { return Qj.topLeftCorner(interior_dim(), interior_dim()); }

    std::optional<Index> pos_in_support(Index global_state) const {
        return detail::position_of(support, global_state);
    }
    std::optional<Index> pos_in_reduced(Index global_state) const {
        if (auto p = detail::position_of(support, global_state)) return p;
        if (auto p = detail::position_of(boundary, global_state)) return *p + interior_dim();
        return std::nullopt;
    }
};

inline ColumnProblem reduce_column(const Plant& plant, const Pattern& loc, const Pattern& ext,
                                   const Pattern& comm, const CostWeights& weights, Index j) {
    const auto& part = plant.partition;
    if (j < 0 || j >= part.total_states())
        throw Error(ErrorCode::DimensionMismatch, "column index out of range");
    const Index c = part.subsystem_of_state(j);

    ColumnProblem cp;
    cp.j = j;
    for (Index s = 0; s < part.total_states(); ++s) {
        const Index owner = part.subsystem_of_state(s);
        if (loc.at(owner, c))
            cp.support.push_back(s);
        else if (ext.at(owner, c))
            cp.boundary.push_back(s);
    }
    for (Index q = 0; q < part.total_inputs(); ++q)
        if (comm.at(part.subsystem_of_input(q), c)) cp.input_support.push_back(q);

    if (cp.support.empty())
        throw Error(ErrorCode::EmptySupport,
                    "column " + std::to_string(j) + " has an empty localized region", {j});
    const auto jpos = cp.pos_in_support(j);
    if (!jpos)
        throw Error(ErrorCode::PatternViolation,
                    "column " + std::to_string(j) + " excludes its own subsystem", {j});
    cp.j_in_support = *jpos;
    cp.j_in_reduced = *jpos;

    cp.A_nn = detail::submatrix(plant.A, cp.support, cp.support);
    cp.A_nb = detail::submatrix(plant.A, cp.support, cp.boundary);
    cp.A_bn = detail::submatrix(plant.A, cp.boundary, cp.support);
    cp.A_bb = detail::submatrix(plant.A, cp.boundary, cp.boundary);
    cp.B_n = detail::submatrix(plant.B, cp.support, cp.input_support);
    cp.B_b = detail::submatrix(plant.B, cp.boundary, cp.input_support);

    IndexList rearranged = cp.support;
    rearranged.insert(rearranged.end(), cp.boundary.begin(), cp.boundary.end());
    cp.Qj = detail::submatrix(weights.Q, rearranged, rearranged);
    cp.Rj = detail::submatrix(weights.R, cp.input_support, cp.input_support);
    return cp;
}

// The boundary rows are absorbable for arbitrary interior trajectories only
// when B_b has full row rank; vacuously true without a boundary.
inline bool check_localizability(const ColumnProblem& cp, double tol = 1e-9) {
    if (cp.boundary_dim() == 0) return true;
    const Matrix bb_pinv = pinv(cp.B_b);
    const Matrix gram = cp.B_b * bb_pinv;
    return (gram - Matrix::Identity(cp.boundary_dim(), cp.boundary_dim())).norm() <= tol;
}

// Unconstrained LQR data equivalent to the boundary-pinned column problem.
// The input splits into a feedforward part that cancels the boundary rows and
// a free part ranging over the kernel of B_b; the kernel is parameterized by
// an orthonormal basis Z so the effective input weight stays positive
// definite. For non-uniform R the state/input cross weight is kept and folded
// into the Riccati data by the solver.
struct DeconstrainedLqr {
    Matrix Atil;      // interior closed-loop drift under the feedforward
    Matrix Btil_eff;  // effective input map B_n Z
    Matrix Qtil;      // interior state weight including feedforward effort
    Matrix Rhat;      // Z' R Z, positive definite
    Matrix cross;     // state/input cross weight F' R Z
    Matrix Z;         // orthonormal basis of ker(B_b)
    Matrix F_state;   // feedforward gain -B_b^+ A_bn
    Matrix P_free;    // projector I - B_b^+ B_b onto ker(B_b)
};

inline DeconstrainedLqr deconstrain(const ColumnProblem& cp) {
    const Index p = cp.input_dim();
    const Matrix bb_pinv = pinv(cp.B_b);

    DeconstrainedLqr dc;
    dc.F_state = -bb_pinv * cp.A_bn;
    dc.P_free = Matrix::Identity(p, p) - bb_pinv * cp.B_b;
    dc.Z = kernel_basis(cp.B_b);
    dc.Atil = cp.A_nn + cp.B_n * dc.F_state;
    dc.Btil_eff = cp.B_n * dc.Z;
    const Matrix q_nn = cp.q_interior();
    dc.Qtil = q_nn + dc.F_state.transpose() * cp.Rj * dc.F_state;
    dc.Qtil = 0.5 * (dc.Qtil + dc.Qtil.transpose()).eval();
    dc.Rhat = dc.Z.transpose() * cp.Rj * dc.Z;
    dc.cross = dc.F_state.transpose() * cp.Rj * dc.Z;
    return dc;
}

// Generator of one column's infinite-horizon impulse response:
// interior[k] = Acl^k e_{j_in_support}, input[k] = Fu interior[k].
struct ColumnSolution {
    Index j = 0;
    IndexList support;
    IndexList boundary;
    IndexList input_support;
    Index j_in_support = 0;
    Matrix Acl;      // interior closed-loop matrix
    Matrix Fu;       // interior-state-to-input output map
    Matrix gain;     // free-variable feedback lifted back to input coordinates
    Matrix riccati;  // value-function matrix of the reduced problem

    Vector init() const {
        Vector e = Vector::Zero(static_cast<Index>(support.size()));
        e(j_in_support) = 1.0;
        return e;
    }
};

inline ColumnSolution solve_column(const DeconstrainedLqr& dc, const ColumnProblem& cp,
                                   double dare_tol = kDefaultDareTol,
                                   int dare_max_iter = kDefaultDareMaxIter) {
    const Index nz = dc.Z.cols();

    Matrix k_eta;
    Matrix riccati;
    if (nz > 0) {
        Eigen::LLT<Matrix> rhat_llt(dc.Rhat);
        if (rhat_llt.info() != Eigen::Success)
            throw Error(ErrorCode::DareFailed,
                        "effective input weight lost positive definiteness", {cp.j});
        const Matrix rinv_cross_t = rhat_llt.solve(dc.cross.transpose());
        const Matrix a_bar = dc.Atil - dc.Btil_eff * rinv_cross_t;
        Matrix q_bar = dc.Qtil - dc.cross * rinv_cross_t;
        q_bar = 0.5 * (q_bar + q_bar.transpose()).eval();
        const DareSolution ds = dare_solve(a_bar, dc.Btil_eff, q_bar, dc.Rhat, dare_tol, dare_max_iter);
        k_eta = ds.K - rinv_cross_t;
        riccati = ds.X;
    } else {
        const DareSolution ds =
            dare_solve(dc.Atil, dc.Btil_eff, dc.Qtil, dc.Rhat, dare_tol, dare_max_iter);
        k_eta = Matrix::Zero(0, dc.Atil.rows());
        riccati = ds.X;
    }

    ColumnSolution cs;
    cs.j = cp.j;
    cs.support = cp.support;
    cs.boundary = cp.boundary;
    cs.input_support = cp.input_support;
    cs.j_in_support = cp.j_in_support;
    cs.Acl = dc.Atil + dc.Btil_eff * k_eta;
    cs.gain = dc.Z * k_eta;
    cs.Fu = dc.F_state + cs.gain;
    cs.riccati = riccati;

    const double rho = spectral_radius(cs.Acl);
    if (!(rho < 1.0))
        throw Error(ErrorCode::UnstableColumn,
                    "column " + std::to_string(cp.j) +
                        " closed loop is not stable (spectral radius " + std::to_string(rho) + ")",
                    {cp.j});
    return cs;
}

// Impulse-response pair (interior[k], input[k]) by repeated multiplication.
inline std::pair<Vector, Vector> clm_spectral(const ColumnSolution& cs, Index k) {
    Vector state = cs.init();
    for (Index i = 0; i < k; ++i) state = cs.Acl * state;
    return {state, cs.Fu * state};
}

inline Vector embed_state(const ColumnSolution& cs, const Vector& interior, Index n_x) {
    Vector out = Vector::Zero(n_x);
    for (std::size_t i = 0; i < cs.support.size(); ++i)
        out(cs.support[i]) = interior(static_cast<Index>(i));
    return out;
}

inline Vector embed_input(const ColumnSolution& cs, const Vector& input, Index n_u) {
    Vector out = Vector::Zero(n_u);
    for (std::size_t i = 0; i < cs.input_support.size(); ++i)
        out(cs.input_support[i]) = input(static_cast<Index>(i));
    return out;
}

// Zero-padded global column of (Phi_x[k], Phi_u[k]).
inline std::pair<Vector, Vector> embed_column(const ColumnSolution& cs, Index k, Index n_x,
                                              Index n_u) {
    const auto [state, input] = clm_spectral(cs, k);
    return {embed_state(cs, state, n_x), embed_input(cs, input, n_u)};
}

struct LocalizedClm {
    Plant plant;
    Pattern loc;
    Pattern ext;
    Pattern comm;
    std::vector<ColumnSolution> columns;

    Index n_x() const { return plant.partition.total_states(); }
    Index n_u() const { return plant.partition.total_inputs(); }

    // Assembled spectral elements Phi_x[k], Phi_u[k] for k = 0..k_max.
    std::pair<std::vector<Matrix>, std::vector<Matrix>> assemble(Index k_max) const {
        std::vector<Matrix> phix(static_cast<std::size_t>(k_max) + 1, Matrix::Zero(n_x(), n_x()));
        std::vector<Matrix> phiu(static_cast<std::size_t>(k_max) + 1, Matrix::Zero(n_u(), n_x()));
        for (const auto& cs : columns) {
            Vector state = cs.init();
            for (Index k = 0; k <= k_max; ++k) {
                const Vector input = cs.Fu * state;
                for (std::size_t i = 0; i < cs.support.size(); ++i)
                    phix[static_cast<std::size_t>(k)](cs.support[i], cs.j) =
                        state(static_cast<Index>(i));
                for (std::size_t i = 0; i < cs.input_support.size(); ++i)
                    phiu[static_cast<std::size_t>(k)](cs.input_support[i], cs.j) =
                        input(static_cast<Index>(i));
                state = cs.Acl * state;
            }
        }
        return {std::move(phix), std::move(phiu)};
    }
};

inline bool plant_stabilizable(const Plant& plant, const CostWeights& weights) {
    try {
        dare_solve(plant.A, plant.B, weights.Q, weights.R);
        return true;
    } catch (const Error&) {
        return false;
    }
}

namespace detail {

inline Index resolve_workers(Index hint, Index jobs) {
    Index workers = hint;
    if (workers <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw == 0 ? 1 : static_cast<Index>(hw);
    }
    return std::max<Index>(1, std::min(workers, jobs));
}

struct ColumnFailure {
    Index j;
    ErrorCode code;
    std::string message;
};

}  // namespace detail

// Solves every column subproblem independently and assembles the result.
// Column order in the output is fixed by index, so the result does not
// depend on the worker schedule. Failures are gathered across all columns
// before anything is thrown, so one bad column reports alongside its peers.
inline LocalizedClm synthesize_all(const Plant& plant, const Pattern& loc, const Pattern& comm,
                                   const CostWeights& weights, Index workers = 0) {
    const auto& part = plant.partition;
    weights.validate(part.total_states(), part.total_inputs());
    loc.require_binary();
    comm.require_binary();

    const Pattern adj = adjacency_from_plant(plant);
    const Pattern ext = extended_pattern(adj, loc);
    const PatternReport report = validate_patterns(loc, comm, ext);
    if (!report.ok) {
        std::ostringstream msg;
        msg << "pattern validation failed:";
        for (const auto& v : report.errors) msg << " " << v.kind << "(" << v.i << "," << v.j << ")";
        throw Error(ErrorCode::PatternViolation, msg.str());
    }

    const Index n_x = part.total_states();
    std::vector<std::optional<ColumnSolution>> results(static_cast<std::size_t>(n_x));
    std::vector<std::optional<detail::ColumnFailure>> failures(static_cast<std::size_t>(n_x));

    auto solve_one = [&](Index j) {
        try {
            const ColumnProblem cp = reduce_column(plant, loc, ext, comm, weights, j);
            if (!check_localizability(cp)) {
                failures[static_cast<std::size_t>(j)] = detail::ColumnFailure{
                    j, ErrorCode::LocalizabilityFailed,
                    "boundary rows of column " + std::to_string(j) +
                        " cannot be cancelled by the permitted inputs"};
                return;
            }
            results[static_cast<std::size_t>(j)] = solve_column(deconstrain(cp), cp);
        } catch (const Error& e) {
            failures[static_cast<std::size_t>(j)] = detail::ColumnFailure{j, e.code(), e.what()};
        }
    };

    const Index n_workers = detail::resolve_workers(workers, n_x);
    if (n_workers == 1) {
        for (Index j = 0; j < n_x; ++j) solve_one(j);
    } else {
        std::atomic<Index> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (Index w = 0; w < n_workers; ++w)
            pool.emplace_back([&] {
                for (Index j = next.fetch_add(1); j < n_x; j = next.fetch_add(1)) solve_one(j);
            });
        for (auto& t : pool) t.join();
    }

    std::vector<long> failed_columns;
    std::ostringstream msg;
    ErrorCode agg_code = ErrorCode::DareFailed;
    for (const auto& f : failures) {
        if (!f) continue;
        if (failed_columns.empty()) agg_code = f->code;
        if (f->code == ErrorCode::LocalizabilityFailed) agg_code = ErrorCode::LocalizabilityFailed;
        failed_columns.push_back(static_cast<long>(f->j));
        msg << (failed_columns.size() == 1 ? "" : "; ") << "column " << f->j << ": " << f->message;
    }
    if (!failed_columns.empty()) throw Error(agg_code, msg.str(), std::move(failed_columns));

    LocalizedClm clm{plant, loc, ext, comm, {}};
    clm.columns.reserve(static_cast<std::size_t>(n_x));
    for (auto& r : results) clm.columns.push_back(std::move(*r));
    return clm;
}

struct AchievabilityReport {
    double tol = 0.0;
    double init_error = 0.0;       // max |Phi_x[0] - I|
    double max_residual = 0.0;     // max |Phi_x[k+1] - A Phi_x[k] - B Phi_u[k]|
    Index worst_k = 0;
    bool structure_ok = true;      // zeros outside the localized regions stay exact
    bool passed = false;
};

// Replays the defining closed-loop recursion on the assembled spectral
// elements. Any escape of mass outside a column's localized region shows up
// in the residual because the embedded elements are structurally zero there.
inline AchievabilityReport verify_achievability(const LocalizedClm& clm, Index horizon,
                                                double tol = 1e-9) {
    AchievabilityReport report;
    report.tol = tol;
    const Index n_x = clm.n_x();
    const Index n_u = clm.n_u();
    const auto loc_mask = expand_to_states(clm.loc, clm.plant.partition, RowKind::State);

    std::vector<Vector> states;
    states.reserve(clm.columns.size());
    for (const auto& cs : clm.columns) states.push_back(cs.init());

    Matrix phix_prev, phiu_prev;
    for (Index k = 0; k <= horizon; ++k) {
        Matrix phix = Matrix::Zero(n_x, n_x);
        Matrix phiu = Matrix::Zero(n_u, n_x);
        for (std::size_t c = 0; c < clm.columns.size(); ++c) {
            const auto& cs = clm.columns[c];
            const Vector input = cs.Fu * states[c];
            for (std::size_t i = 0; i < cs.support.size(); ++i)
                phix(cs.support[i], cs.j) = states[c](static_cast<Index>(i));
            for (std::size_t i = 0; i < cs.input_support.size(); ++i)
                phiu(cs.input_support[i], cs.j) = input(static_cast<Index>(i));
            states[c] = cs.Acl * states[c];
        }
        if (k == 0)
            report.init_error = (phix - Matrix::Identity(n_x, n_x)).cwiseAbs().maxCoeff();
        else {
            const double res =
                (phix - clm.plant.A * phix_prev - clm.plant.B * phiu_prev).cwiseAbs().maxCoeff();
            if (res > report.max_residual) {
                report.max_residual = res;
                report.worst_k = k - 1;
            }
        }
        if (report.structure_ok)
            for (Index col = 0; col < n_x && report.structure_ok; ++col)
                for (Index row = 0; row < n_x; ++row)
                    if (!loc_mask(row, col) && phix(row, col) != 0.0) {
                        report.structure_ok = false;
                        break;
                    }
        phix_prev = std::move(phix);
        phiu_prev = std::move(phiu);
    }
    report.passed =
        report.init_error <= tol && report.max_residual <= tol && report.structure_ok;
    return report;
}

}  // namespace sls
