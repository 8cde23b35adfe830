#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

#include "sls/column.hpp"
#include "sls/errors.hpp"
#include "sls/netmodel.hpp"

namespace sls {

// Read of another sub-controller's internal state: position `pos` in the
// internal state of the sub-controller owning column `source`.
struct NeighborRead {
    Index source = 0;
    Index pos = 0;
};

// Per-state-column controller: estimates "its" disturbance from the owned
// plant state and the published internal states of its neighbors, then runs
// the column impulse response forward on that estimate.
struct SubController {
    Index ell = 0;
    Matrix A_K;
    Vector B_K;
    Matrix C_K;
    Vector D_K;
    std::vector<NeighborRead> neighbor_reads;
    IndexList embed;  // global input indices the sub-control action lands on
    Index self_pos = 0;

    Vector xi;        // internal state, dimension of the column interior
    double w_hat = 0.0;
};

inline SubController build_subcontroller(const LocalizedClm& clm, Index ell) {
    if (ell < 0 || ell >= clm.n_x() ||
        static_cast<std::size_t>(ell) >= clm.columns.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "no solved column for state " + std::to_string(ell));
    const ColumnSolution& cs = clm.columns[static_cast<std::size_t>(ell)];
    const auto& part = clm.plant.partition;

    SubController sub;
    sub.ell = ell;
    sub.A_K = cs.Acl;
    sub.C_K = cs.Fu;
    sub.self_pos = cs.j_in_support;
    sub.B_K = cs.Acl.col(cs.j_in_support);
    sub.D_K = cs.Fu.col(cs.j_in_support);
    sub.embed = cs.input_support;
    sub.xi = Vector::Zero(cs.Acl.rows());

    const Index own_subsystem = part.subsystem_of_state(ell);
    for (Index i = 0; i < clm.n_x(); ++i) {
        if (!clm.loc.at(own_subsystem, part.subsystem_of_state(i))) continue;
        const auto pos = detail::position_of(clm.columns[static_cast<std::size_t>(i)].support, ell);
        if (!pos)
            throw Error(ErrorCode::PatternViolation,
                        "state " + std::to_string(ell) + " missing from the region of column " +
                            std::to_string(i));
        sub.neighbor_reads.push_back({i, *pos});
    }
    return sub;
}

// The full bank of sub-controllers plus the shared index data needed to run
// them. Stepping is a strict two-phase tick: every disturbance estimate is
// formed from the previous tick's published internal states before any
// internal state advances.
class DistributedController {
public:
    DistributedController(const LocalizedClm& clm)
        : partition_(clm.plant.partition), comm_(clm.comm), n_u_(clm.n_u()) {
        subs_.reserve(static_cast<std::size_t>(clm.n_x()));
        for (Index ell = 0; ell < clm.n_x(); ++ell) subs_.push_back(build_subcontroller(clm, ell));
    }

    Index state_count() const { return static_cast<Index>(subs_.size()); }
    const std::vector<SubController>& subs() const { return subs_; }
    const SubsystemPartition& partition() const { return partition_; }
    const Pattern& comm_pattern() const { return comm_; }

    void reset() {
        for (auto& sub : subs_) {
            sub.xi.setZero();
            sub.w_hat = 0.0;
        }
    }

    // One tick: consume the measured state, publish the control action.
    Vector step(const Vector& x) {
        if (x.size() != state_count())
            throw Error(ErrorCode::DimensionMismatch, "state vector does not match the plant");
        for (auto& sub : subs_) {
            double estimate = x(sub.ell);
            for (const auto& read : sub.neighbor_reads)
                estimate -= subs_[static_cast<std::size_t>(read.source)].xi(read.pos);
            sub.w_hat = estimate;
        }
        Vector u = Vector::Zero(n_u_);
        for (auto& sub : subs_) {
            const Vector action = sub.C_K * sub.xi + sub.D_K * sub.w_hat;
            for (std::size_t i = 0; i < sub.embed.size(); ++i)
                u(sub.embed[i]) += action(static_cast<Index>(i));
            sub.xi = sub.A_K * sub.xi + sub.B_K * sub.w_hat;
        }
        return u;
    }

    Vector disturbance_estimates() const {
        Vector w = Vector::Zero(state_count());
        for (const auto& sub : subs_) w(sub.ell) = sub.w_hat;
        return w;
    }

private:
    std::vector<SubController> subs_;
    SubsystemPartition partition_;
    Pattern comm_;
    Index n_u_;
};

struct Trajectory {
    std::vector<Vector> x;
    std::vector<Vector> u;
    std::vector<Vector> w_hat;  // empty for reference trajectories
};

// Reference trajectories by direct convolution of the assembled spectral
// elements with the disturbance sequence.
inline Trajectory monolithic_reference(const LocalizedClm& clm,
                                       const std::vector<Vector>& w_sequence) {
    const Index horizon = static_cast<Index>(w_sequence.size());
    Trajectory traj;
    if (horizon == 0) return traj;

    auto [phix, phiu] = clm.assemble(horizon - 1);
    traj.x.reserve(static_cast<std::size_t>(horizon));
    traj.u.reserve(static_cast<std::size_t>(horizon));
    for (Index t = 0; t < horizon; ++t) {
        Vector x = Vector::Zero(clm.n_x());
        Vector u = Vector::Zero(clm.n_u());
        for (Index k = 0; k <= t; ++k) {
            x += phix[static_cast<std::size_t>(k)] * w_sequence[static_cast<std::size_t>(t - k)];
            u += phiu[static_cast<std::size_t>(k)] * w_sequence[static_cast<std::size_t>(t - k)];
        }
        traj.x.push_back(std::move(x));
        traj.u.push_back(std::move(u));
    }
    return traj;
}

struct CommunicationViolation {
    std::string kind;   // "read" or "actuation"
    Index from = 0;     // subsystem information flows from
    Index to = 0;       // subsystem information flows to
    Index ell = 0;      // sub-controller responsible
};

struct CommunicationAudit {
    std::vector<CommunicationViolation> violations;
    Index reads_checked = 0;
    Index actuations_checked = 0;
    bool ok() const { return violations.empty(); }
};

// Enumerates every cross-subsystem information flow the controller performs
// and flags the ones a communication pattern does not permit.
inline CommunicationAudit communication_audit(const DistributedController& dc,
                                              const Pattern& comm) {
    CommunicationAudit audit;
    const auto& part = dc.partition();
    for (const auto& sub : dc.subs()) {
        const Index reader = part.subsystem_of_state(sub.ell);
        for (const auto& read : sub.neighbor_reads) {
            ++audit.reads_checked;
            const Index source = part.subsystem_of_state(read.source);
            if (!comm.at(reader, source))
                audit.violations.push_back({"read", source, reader, sub.ell});
        }
        for (const Index q : sub.embed) {
            ++audit.actuations_checked;
            const Index actuator = part.subsystem_of_input(q);
            if (!comm.at(actuator, reader))
                audit.violations.push_back({"actuation", reader, actuator, sub.ell});
        }
    }
    return audit;
}

}  // namespace sls
