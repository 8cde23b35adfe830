#pragma once

#include <random>
#include <utility>
#include <vector>

#include "sls/linalg.hpp"
#include "sls/netmodel.hpp"

namespace sls::testing {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

inline Matrix random_spd(Index n, std::mt19937_64& rng, double ridge = 0.5) {
    const Matrix c = random_matrix(n, n, rng);
    return c.transpose() * c / static_cast<double>(n) + ridge * Matrix::Identity(n, n);
}

// Generic dense (A, B) pair with the open-loop spectral radius rescaled into
// [0.3, 1.25]; stabilizable with probability one.
inline std::pair<Matrix, Matrix> random_stabilizable(Index n, Index m, std::mt19937_64& rng) {
    Matrix a = random_matrix(n, n, rng);
    const double rho = spectral_radius(a);
    std::uniform_real_distribution<double> target(0.3, 1.25);
    if (rho > 1e-12) a *= target(rng) / rho;
    Matrix b = random_matrix(n, m, rng);
    return {std::move(a), std::move(b)};
}

inline Pattern random_adjacency(Index n, std::mt19937_64& rng, double edge_prob = 0.4) {
    std::bernoulli_distribution edge(edge_prob);
    Eigen::MatrixXi e = Eigen::MatrixXi::Identity(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j && edge(rng)) e(i, j) = 1;
    return {e, PatternRole::Adjacency};
}

inline Pattern chain_adjacency(Index n) {
    Eigen::MatrixXi e = Eigen::MatrixXi::Identity(n, n);
    for (Index i = 0; i + 1 < n; ++i) {
        e(i, i + 1) = 1;
        e(i + 1, i) = 1;
    }
    return {e, PatternRole::Adjacency};
}

}  // namespace sls::testing
