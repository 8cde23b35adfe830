#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sls/errors.hpp"

namespace sls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

// Entries with magnitude at or below this are treated as structural zeros
// when deriving sparsity patterns from numeric matrices.
inline constexpr double kSupportTol = 1e-12;

// Partition of the global state/input vectors into subsystems. Immutable
// after construction; all queries are index arithmetic on the offsets.
class SubsystemPartition {
public:
    SubsystemPartition(std::vector<Index> state_dims, std::vector<Index> input_dims)
        : n_(std::move(state_dims)), m_(std::move(input_dims)) {
        if (n_.empty() || n_.size() != m_.size())
            throw Error(ErrorCode::DimensionMismatch,
                        "partition needs matching non-empty state/input dimension lists");
        state_offsets_.resize(n_.size() + 1, 0);
        input_offsets_.resize(m_.size() + 1, 0);
        for (std::size_t i = 0; i < n_.size(); ++i) {
            if (n_[i] < 1)
                throw Error(ErrorCode::DimensionMismatch, "every subsystem needs at least one state");
            if (m_[i] < 0)
                throw Error(ErrorCode::DimensionMismatch, "negative input dimension");
            state_offsets_[i + 1] = state_offsets_[i] + n_[i];
            input_offsets_[i + 1] = input_offsets_[i] + m_[i];
        }
        state_of_.reserve(static_cast<std::size_t>(total_states()));
        for (std::size_t i = 0; i < n_.size(); ++i)
            state_of_.insert(state_of_.end(), static_cast<std::size_t>(n_[i]), static_cast<Index>(i));
        input_of_.reserve(static_cast<std::size_t>(total_inputs()));
        for (std::size_t i = 0; i < m_.size(); ++i)
            input_of_.insert(input_of_.end(), static_cast<std::size_t>(m_[i]), static_cast<Index>(i));
    }

    static SubsystemPartition scalar(Index count) {
        return SubsystemPartition(std::vector<Index>(static_cast<std::size_t>(count), 1),
                                  std::vector<Index>(static_cast<std::size_t>(count), 1));
    }

    Index count() const { return static_cast<Index>(n_.size()); }
    Index total_states() const { return state_offsets_.back(); }
    Index total_inputs() const { return input_offsets_.back(); }
    Index state_dim(Index i) const { return n_[static_cast<std::size_t>(i)]; }
    Index input_dim(Index i) const { return m_[static_cast<std::size_t>(i)]; }
    Index state_offset(Index i) const { return state_offsets_[static_cast<std::size_t>(i)]; }
    Index input_offset(Index i) const { return input_offsets_[static_cast<std::size_t>(i)]; }

    // Owning subsystem of a global state / input index.
    Index subsystem_of_state(Index ell) const { return state_of_[static_cast<std::size_t>(ell)]; }
    Index subsystem_of_input(Index q) const { return input_of_[static_cast<std::size_t>(q)]; }

    const std::vector<Index>& state_dims() const { return n_; }
    const std::vector<Index>& input_dims() const { return m_; }

private:
    std::vector<Index> n_;
    std::vector<Index> m_;
    std::vector<Index> state_offsets_;
    std::vector<Index> input_offsets_;
    std::vector<Index> state_of_;
    std::vector<Index> input_of_;
};

struct Plant {
    Matrix A;
    Matrix B;
    SubsystemPartition partition;

    Plant(Matrix a, Matrix b, SubsystemPartition part)
        : A(std::move(a)), B(std::move(b)), partition(std::move(part)) {
        if (A.rows() != A.cols() || A.rows() != partition.total_states() ||
            B.rows() != partition.total_states() || B.cols() != partition.total_inputs())
            throw Error(ErrorCode::DimensionMismatch, "plant matrices inconsistent with partition");
    }
};

struct CostWeights {
    Matrix Q;
    Matrix R;

    void validate(Index n_x, Index n_u) const {
        if (Q.rows() != n_x || Q.cols() != n_x || R.rows() != n_u || R.cols() != n_u)
            throw Error(ErrorCode::DimensionMismatch, "cost weights inconsistent with plant");
        const double q_asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
        const double r_asym = n_u > 0 ? (R - R.transpose()).cwiseAbs().maxCoeff() : 0.0;
        if (q_asym > 1e-9 || r_asym > 1e-9)
            throw Error(ErrorCode::ConfigInvalid, "cost weights must be symmetric");
        Eigen::SelfAdjointEigenSolver<Matrix> q_eigs(Q, Eigen::EigenvaluesOnly);
        if (q_eigs.eigenvalues().minCoeff() <= 0.0)
            throw Error(ErrorCode::ConfigInvalid, "Q must be positive definite");
        if (n_u > 0) {
            Eigen::SelfAdjointEigenSolver<Matrix> r_eigs(R, Eigen::EigenvaluesOnly);
            if (r_eigs.eigenvalues().minCoeff() <= 0.0)
                throw Error(ErrorCode::ConfigInvalid, "R must be positive definite");
        }
    }

    static CostWeights identity(Index n_x, Index n_u) {
        return {Matrix::Identity(n_x, n_x), Matrix::Identity(n_u, n_u)};
    }
};

enum class PatternRole { Adjacency, Localization, Extended, Communication };

// Binary subsystem-granularity sparsity pattern. State- or input-level
// masks are always derived via expand_to_states.
struct Pattern {
    Eigen::MatrixXi entries;
    PatternRole role = PatternRole::Localization;

    Index size() const { return entries.rows(); }
    bool at(Index i, Index j) const { return entries(i, j) != 0; }

    void require_binary() const {
        for (Index i = 0; i < entries.rows(); ++i)
            for (Index j = 0; j < entries.cols(); ++j)
                if (entries(i, j) != 0 && entries(i, j) != 1)
                    throw Error(ErrorCode::PatternViolation, "pattern entries must be 0/1");
    }

    bool has_unit_diagonal() const {
        for (Index i = 0; i < entries.rows(); ++i)
            if (entries(i, i) != 1) return false;
        return true;
    }

    static Pattern identity(Index n, PatternRole role) {
        return {Eigen::MatrixXi::Identity(n, n), role};
    }

    static Pattern ones(Index n, PatternRole role) {
        return {Eigen::MatrixXi::Ones(n, n), role};
    }
};

// Per-column boundary subsystems: the ring that must be pinned to zero to
// stop a disturbance from escaping its localized region.
struct BoundarySet {
    std::vector<IndexList> per_column;

    const IndexList& of(Index column) const { return per_column[static_cast<std::size_t>(column)]; }
};

inline bool support_subset(const Pattern& inner, const Pattern& outer) {
    for (Index i = 0; i < inner.size(); ++i)
        for (Index j = 0; j < inner.size(); ++j)
            if (inner.at(i, j) && !outer.at(i, j)) return false;
    return true;
}

// Open-loop interconnection pattern: block (i,j) is linked when any entry of
// A^{ij} is nonzero. Self-loops are always present so that one application of
// the pattern to itself reproduces one step of dynamic propagation.
inline Pattern adjacency_from_plant(const Plant& plant) {
    const auto& part = plant.partition;
    const Index n = part.count();
    Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const auto block = plant.A.block(part.state_offset(i), part.state_offset(j),
                                             part.state_dim(i), part.state_dim(j));
            if (i == j || block.cwiseAbs().maxCoeff() > kSupportTol) adj(i, j) = 1;
        }
    }
    return {adj, PatternRole::Adjacency};
}

namespace detail {
inline Eigen::MatrixXi boolean_product(const Eigen::MatrixXi& a, const Eigen::MatrixXi& b) {
    const Index n = a.rows();
    Eigen::MatrixXi out = Eigen::MatrixXi::Zero(n, b.cols());
    for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < a.cols(); ++k)
            if (a(i, k) != 0)
                for (Index j = 0; j < b.cols(); ++j)
                    if (b(k, j) != 0) out(i, j) = 1;
    return out;
}
}  // namespace detail

// d-hop reachability under the Boolean matrix power; d = 0 is the identity.
inline Pattern d_hop_pattern(const Pattern& adj, Index d, PatternRole role = PatternRole::Localization) {
    if (d < 0) throw Error(ErrorCode::ConfigInvalid, "hop count must be nonnegative");
    const Index n = adj.size();
    Eigen::MatrixXi acc = Eigen::MatrixXi::Identity(n, n);
    for (Index k = 0; k < d; ++k) acc = detail::boolean_product(acc, adj.entries);
    return {acc, role};
}

// One dynamic step of propagation applied to a localization pattern.
inline Pattern extended_pattern(const Pattern& adj, const Pattern& loc) {
    if (adj.size() != loc.size())
        throw Error(ErrorCode::DimensionMismatch, "adjacency/localization size mismatch");
    return {detail::boolean_product(adj.entries, loc.entries), PatternRole::Extended};
}

inline BoundarySet boundary_sets(const Pattern& loc, const Pattern& ext) {
    if (loc.size() != ext.size())
        throw Error(ErrorCode::DimensionMismatch, "pattern size mismatch");
    if (!support_subset(loc, ext))
        throw Error(ErrorCode::PatternViolation,
                    "localization pattern must be contained in the extended pattern");
    BoundarySet out;
    out.per_column.resize(static_cast<std::size_t>(loc.size()));
    for (Index j = 0; j < loc.size(); ++j)
        for (Index i = 0; i < loc.size(); ++i)
            if (ext.at(i, j) && !loc.at(i, j))
                out.per_column[static_cast<std::size_t>(j)].push_back(i);
    return out;
}

enum class RowKind { State, Input };

// Block-expand a subsystem pattern to state (or input) rows over state columns.
inline Eigen::MatrixXi expand_to_states(const Pattern& pat, const SubsystemPartition& part,
                                        RowKind row_kind) {
    if (pat.size() != part.count())
        throw Error(ErrorCode::DimensionMismatch, "pattern size does not match partition");
    const Index rows = row_kind == RowKind::State ? part.total_states() : part.total_inputs();
    Eigen::MatrixXi out = Eigen::MatrixXi::Zero(rows, part.total_states());
    for (Index i = 0; i < part.count(); ++i) {
        const Index r0 = row_kind == RowKind::State ? part.state_offset(i) : part.input_offset(i);
        const Index rn = row_kind == RowKind::State ? part.state_dim(i) : part.input_dim(i);
        if (rn == 0) continue;
        for (Index j = 0; j < part.count(); ++j)
            if (pat.at(i, j))
                out.block(r0, part.state_offset(j), rn, part.state_dim(j)).setOnes();
    }
    return out;
}

struct PatternViolation {
    std::string kind;  // which inclusion or diagonal rule was broken
    Index i = 0;
    Index j = 0;
};

struct PatternReport {
    bool ok = true;
    std::vector<PatternViolation> errors;
    std::vector<PatternViolation> warnings;
};

// Checks the inclusions the synthesis pipeline relies on. Containment of the
// extended pattern in the communication pattern is reported as a warning by
// default and escalated to an error under strict_extended.
inline PatternReport validate_patterns(const Pattern& loc, const Pattern& comm, const Pattern& ext,
                                       bool strict_extended = false) {
    if (loc.size() != comm.size() || loc.size() != ext.size())
        throw Error(ErrorCode::DimensionMismatch, "pattern size mismatch");
    PatternReport report;
    auto flag = [&report](std::vector<PatternViolation>& sink, const char* kind, Index i, Index j) {
        sink.push_back({kind, i, j});
    };
    for (Index i = 0; i < loc.size(); ++i) {
        if (!loc.at(i, i)) flag(report.errors, "localization_diagonal", i, i);
        if (!comm.at(i, i)) flag(report.errors, "communication_diagonal", i, i);
        for (Index j = 0; j < loc.size(); ++j) {
            if (loc.at(i, j) && !comm.at(i, j)) flag(report.errors, "loc_not_in_comm", i, j);
            if (ext.at(i, j) && !comm.at(i, j))
                flag(strict_extended ? report.errors : report.warnings, "ext_not_in_comm", i, j);
        }
    }
    report.ok = report.errors.empty();
    return report;
}

// Bi-directional chain of scalar subsystems. rho scales the overall gain,
// alpha the neighbor coupling; density selects which nodes get their own
// actuator (0.5 keeps every other node, starting with the first).
inline std::pair<Plant, CostWeights> chain_benchmark(Index nodes, double alpha, double rho,
                                                     double actuation_density) {
    if (nodes < 2) throw Error(ErrorCode::ConfigInvalid, "chain needs at least two nodes");
    if (alpha < 0.0 || alpha > 0.5)
        throw Error(ErrorCode::ConfigInvalid, "alpha must lie in [0, 0.5]");
    if (rho <= 0.0) throw Error(ErrorCode::ConfigInvalid, "rho must be positive");
    if (!(actuation_density > 0.0) || actuation_density > 1.0)
        throw Error(ErrorCode::ConfigInvalid, "actuation density must lie in (0, 1]");

    Matrix A = Matrix::Zero(nodes, nodes);
    const double self = rho * (1.0 - 2.0 * alpha);
    const double coupling = rho * alpha;
    for (Index i = 0; i < nodes; ++i) {
        A(i, i) = self;
        if (i > 0) A(i, i - 1) = coupling;
        if (i + 1 < nodes) A(i, i + 1) = coupling;
    }

    const Index stride = static_cast<Index>(std::llround(1.0 / actuation_density));
    std::vector<Index> state_dims(static_cast<std::size_t>(nodes), 1);
    std::vector<Index> input_dims(static_cast<std::size_t>(nodes), 0);
    IndexList actuated;
    for (Index i = 0; i < nodes; i += stride) {
        input_dims[static_cast<std::size_t>(i)] = 1;
        actuated.push_back(i);
    }
    Matrix B = Matrix::Zero(nodes, static_cast<Index>(actuated.size()));
    for (std::size_t q = 0; q < actuated.size(); ++q) B(actuated[q], static_cast<Index>(q)) = 1.0;

    Plant plant(std::move(A), std::move(B), SubsystemPartition(std::move(state_dims), std::move(input_dims)));
    CostWeights weights = CostWeights::identity(nodes, static_cast<Index>(actuated.size()));
    return {std::move(plant), std::move(weights)};
}

}  // namespace sls
