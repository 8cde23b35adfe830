#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

#include "sls/errors.hpp"
#include "sls/netmodel.hpp"

namespace sls {

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultDareTol = 1e-12;
inline constexpr int kDefaultDareMaxIter = 10000;

inline double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols())
        throw Error(ErrorCode::DimensionMismatch, "spectral radius needs a square matrix");
    if (m.rows() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> eigs(m, /*computeEigenvectors=*/false);
    return eigs.eigenvalues().cwiseAbs().maxCoeff();
}

// Moore-Penrose pseudo-inverse via SVD. Singular values below
// rank_tol * sigma_max count as zero. Degenerate 0-row / 0-column shapes
// return the dimensionally forced empty result.
inline Matrix pinv(const Matrix& m, double rank_tol = kDefaultRankTol) {
    if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double cutoff = rank_tol * sigma(0);
    Vector inv_sigma = Vector::Zero(sigma.size());
    for (Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cutoff) inv_sigma(i) = 1.0 / sigma(i);
    return svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
}

// Orthonormal basis of the kernel of m; the column count equals the kernel
// dimension. A 0-row matrix has a full kernel, so the identity comes back.
inline Matrix kernel_basis(const Matrix& m, double rank_tol = kDefaultRankTol) {
    if (m.cols() == 0) return Matrix::Zero(0, 0);
    if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = rank_tol * (sigma.size() > 0 ? sigma(0) : 0.0);
    Index rank = 0;
    for (Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

// Solves G = Acl' G Acl + M for stable Acl by repeated squaring of the
// propagator; converges quadratically since the tail decays geometrically.
inline Matrix dlyap_solve(const Matrix& acl, const Matrix& m) {
    if (acl.rows() != acl.cols() || m.rows() != m.cols() || acl.rows() != m.rows())
        throw Error(ErrorCode::DimensionMismatch, "Stein equation dimension mismatch");
    if (acl.rows() == 0) return Matrix::Zero(0, 0);
    const double rho = spectral_radius(acl);
    if (rho >= 1.0)
        throw Error(ErrorCode::UnstableColumn,
                    "Stein equation requires spectral radius < 1, got " + std::to_string(rho));
    Matrix g = 0.5 * (m + m.transpose());
    Matrix t = acl;
    for (int iter = 0; iter < 128; ++iter) {
        const Matrix update = t.transpose() * g * t;
        g += update;
        if (update.norm() <= 1e-300 ||
            update.norm() <= std::numeric_limits<double>::epsilon() * g.norm())
            break;
        t = t * t;
    }
    return 0.5 * (g + g.transpose());
}

struct DareSolution {
    Matrix X;        // stabilizing fixed point
    Matrix K;        // feedback gain, u = K x
    double residual = 0.0;
    int iterations = 0;
};

namespace detail {

inline void check_dare_inputs(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
    const Index n = a.rows();
    const Index p = b.cols();
    if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != p ||
        r.cols() != p)
        throw Error(ErrorCode::DimensionMismatch, "Riccati input dimensions inconsistent");
    const double scale_q = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale_q)
        throw Error(ErrorCode::ConfigInvalid, "Riccati state weight must be symmetric");
    if (p > 0) {
        const double scale_r = std::max(1.0, r.cwiseAbs().maxCoeff());
        if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale_r)
            throw Error(ErrorCode::ConfigInvalid, "Riccati input weight must be symmetric");
        Eigen::LLT<Matrix> llt(0.5 * (r + r.transpose()));
        if (llt.info() != Eigen::Success)
            throw Error(ErrorCode::ConfigInvalid, "Riccati input weight must be positive definite");
    }
    Eigen::LDLT<Matrix> ldlt(0.5 * (q + q.transpose()));
    if (ldlt.info() != Eigen::Success ||
        ldlt.vectorD().minCoeff() < -1e-9 * std::max(1.0, q.cwiseAbs().maxCoeff()))
        throw Error(ErrorCode::ConfigInvalid, "Riccati state weight must be positive semidefinite");
}

inline double dare_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                            const Matrix& x) {
    if (b.cols() == 0) return (x - q - a.transpose() * x * a).norm();
    const Matrix btxb = r + b.transpose() * x * b;
    Eigen::LDLT<Matrix> ldlt(btxb);
    const Matrix gain_term =
        a.transpose() * x * b * ldlt.solve(b.transpose() * x * a);
    return (x - (q + a.transpose() * x * a - gain_term)).norm();
}

inline Matrix dare_gain(const Matrix& a, const Matrix& b, const Matrix& r, const Matrix& x) {
    if (b.cols() == 0) return Matrix::Zero(0, a.rows());
    const Matrix denom = r + b.transpose() * x * b;
    Eigen::LDLT<Matrix> ldlt(denom);
    if (ldlt.info() != Eigen::Success || ldlt.isNegative() ||
        ldlt.vectorD().cwiseAbs().minCoeff() <
            1e3 * std::numeric_limits<double>::epsilon() * denom.cwiseAbs().maxCoeff())
        throw Error(ErrorCode::DareFailed, "input-weight block of the Riccati update is singular");
    return -ldlt.solve(b.transpose() * x * a);
}

}  // namespace detail

// Stabilizing solution of X = Q + A'XA - A'XB (R + B'XB)^{-1} B'XA via
// structure-preserving doubling. A control-free problem (B with zero
// columns) degenerates to the Stein equation and an empty gain.
inline DareSolution dare_solve(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                               double tol = kDefaultDareTol, int max_iter = kDefaultDareMaxIter) {
    detail::check_dare_inputs(a, b, q, r);
    const Index n = a.rows();

    DareSolution out;
    if (n == 0) {
        out.X = Matrix::Zero(0, 0);
        out.K = Matrix::Zero(b.cols(), 0);
        return out;
    }

    Matrix a_k = a;
    Matrix g_k;
    if (b.cols() > 0) {
        Eigen::LLT<Matrix> r_llt(0.5 * (r + r.transpose()));
        g_k = b * r_llt.solve(b.transpose());
    } else {
        g_k = Matrix::Zero(n, n);
    }
    Matrix h = 0.5 * (q + q.transpose());

    int iter = 0;
    double diff = std::numeric_limits<double>::infinity();
    while (iter < max_iter) {
        ++iter;
        const Matrix w = Matrix::Identity(n, n) + g_k * h;
        Eigen::PartialPivLU<Matrix> w_lu(w);
        const Matrix v1 = w_lu.solve(a_k);
        const Matrix v2 = w_lu.solve(g_k.transpose()).transpose();
        g_k += a_k * v2 * a_k.transpose();
        const Matrix h_next = h + v1.transpose() * h * a_k;
        a_k = a_k * v1;
        diff = (h_next - h).norm();
        h = h_next;
        if (!h.allFinite())
            throw Error(ErrorCode::DareFailed, "Riccati doubling iteration diverged");
        if (diff < tol) break;
    }
    if (!(diff < tol))
        throw Error(ErrorCode::DareFailed,
                    "Riccati doubling did not converge in " + std::to_string(max_iter) +
                        " iterations (last step " + std::to_string(diff) + ")");

    out.X = 0.5 * (h + h.transpose());
    out.K = detail::dare_gain(a, b, r, out.X);
    out.residual = detail::dare_residual(a, b, q, r, out.X);
    out.iterations = iter;
    return out;
}

// Fixed-point iteration on the Riccati map. Slow but independent of the
// doubling path; kept as the cross-check route.
inline DareSolution dare_solve_value_iteration(const Matrix& a, const Matrix& b, const Matrix& q,
                                               const Matrix& r, double tol = kDefaultDareTol,
                                               int max_iter = 200000) {
    detail::check_dare_inputs(a, b, q, r);
    Matrix x = 0.5 * (q + q.transpose());
    int iter = 0;
    while (iter < max_iter) {
        ++iter;
        Matrix x_next;
        if (b.cols() == 0) {
            x_next = q + a.transpose() * x * a;
        } else {
            const Matrix denom = r + b.transpose() * x * b;
            Eigen::LDLT<Matrix> ldlt(denom);
            x_next = q + a.transpose() * x * a -
                     a.transpose() * x * b * ldlt.solve(b.transpose() * x * a);
        }
        const double diff = (x_next - x).norm();
        x = 0.5 * (x_next + x_next.transpose());
        if (!x.allFinite())
            throw Error(ErrorCode::DareFailed, "Riccati value iteration diverged");
        if (diff < tol) break;
        if (iter == max_iter)
            throw Error(ErrorCode::DareFailed, "Riccati value iteration did not converge");
    }
    DareSolution out;
    out.X = x;
    out.K = detail::dare_gain(a, b, r, x);
    out.residual = detail::dare_residual(a, b, q, r, x);
    out.iterations = iter;
    return out;
}

struct KktSolution {
    Vector z;
    Vector multipliers;
    double feasibility_residual = 0.0;
    double stationarity_residual = 0.0;
};

// Equality-constrained convex QP: minimize 0.5 z'Hz + f'z subject to
// Aeq z = beq, solved by elimination onto the constraint null space.
// Inconsistent constraints surface as KktInfeasible; a reduced Hessian that
// is singular on the feasible set as KktSingular.
inline KktSolution kkt_solve(const Matrix& h, const Vector& f, const Matrix& aeq,
                             const Vector& beq, double feas_tol = 1e-8) {
    const Index n = h.rows();
    if (h.cols() != n || f.size() != n || aeq.cols() != n || beq.size() != aeq.rows())
        throw Error(ErrorCode::DimensionMismatch, "KKT system dimensions inconsistent");

    Vector z0 = Vector::Zero(n);
    Matrix null_basis;
    if (aeq.rows() == 0) {
        null_basis = Matrix::Identity(n, n);
    } else {
        Eigen::ColPivHouseholderQR<Matrix> qr_a(aeq);
        z0 = qr_a.solve(beq);
        const double scale = std::max({1.0, beq.cwiseAbs().maxCoeff(), aeq.cwiseAbs().maxCoeff()});
        if ((aeq * z0 - beq).cwiseAbs().maxCoeff() > feas_tol * scale)
            throw Error(ErrorCode::KktInfeasible, "equality constraints are inconsistent");

        Eigen::ColPivHouseholderQR<Matrix> qr_at(aeq.transpose());
        const Index rank = qr_at.rank();
        if (rank < n) {
            const Matrix q_full = qr_at.householderQ() * Matrix::Identity(n, n);
            null_basis = q_full.rightCols(n - rank);
        } else {
            null_basis = Matrix::Zero(n, 0);
        }
    }

    Vector z = z0;
    if (null_basis.cols() > 0) {
        const Matrix h_red = null_basis.transpose() * h * null_basis;
        const Vector g_red = null_basis.transpose() * (h * z0 + f);
        Eigen::LDLT<Matrix> ldlt(0.5 * (h_red + h_red.transpose()));
        const Vector y = ldlt.solve(-g_red);
        const double sol_scale = std::max(1.0, g_red.cwiseAbs().maxCoeff());
        if (ldlt.info() != Eigen::Success ||
            (h_red * y + g_red).cwiseAbs().maxCoeff() > 1e-6 * sol_scale)
            throw Error(ErrorCode::KktSingular,
                        "reduced Hessian is singular on the feasible set");
        z += null_basis * y;
    }

    KktSolution out;
    out.z = z;
    const Vector grad = h * z + f;
    if (aeq.rows() > 0) {
        out.multipliers = Eigen::ColPivHouseholderQR<Matrix>(aeq.transpose()).solve(-grad);
        out.feasibility_residual = (aeq * z - beq).cwiseAbs().maxCoeff();
        out.stationarity_residual = (grad + aeq.transpose() * out.multipliers).cwiseAbs().maxCoeff();
    } else {
        out.multipliers = Vector::Zero(0);
        out.stationarity_residual = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
    }
    return out;
}

}  // namespace sls
