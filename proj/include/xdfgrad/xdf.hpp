// Copyright 2026 The xdfgrad Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file xdf.hpp
 * Explicit double factorization of the two-electron integrals.
 *
 * The supermatrix (pq|rs) is eigendecomposed as Σ_t V^t_pq g^t V^t_rs and
 * each V^t is diagonalized as U^t diag(λ^t) U^tᵀ. Leaves are kept in order
 * of descending |g^t|; the first `retained` of them enter the energy.
 */
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "xdfgrad/hamiltonian.hpp"

namespace xdf {

struct XdfLeaf {
    int index = 0;
    double g = 0.0;
    Eigen::MatrixXd V;
    Eigen::MatrixXd U;
    Eigen::VectorXd lambda;
    Eigen::MatrixXd Z;
};

struct TruncationPolicy {
    enum class Mode { Threshold, Count };
    Mode mode = Mode::Threshold;
    double threshold = 0.0;
    int count = 0;

    static TruncationPolicy keep_all() { return by_threshold(0.0); }
    static TruncationPolicy by_threshold(double t) { return {Mode::Threshold, t, 0}; }
    static TruncationPolicy by_count(int c) { return {Mode::Count, 0.0, c}; }
};

struct XdfFactorization {
    int n = 0;
    int n_alpha = 0;
    int n_beta = 0;
    EffectiveOperators eff;
    Eigen::MatrixXd U0;
    Eigen::VectorXd F0;
    std::vector<XdfLeaf> leaves;
    int retained = 0;
    TruncationPolicy policy;

    [[nodiscard]] int n_leaves() const { return static_cast<int>(leaves.size()); }
    [[nodiscard]] bool truncated() const { return retained < n_leaves(); }
};

/**
 * @brief Sign-fix eigenvector columns in place.
 *
 * Each column is flipped so its largest-magnitude entry is positive; the
 * last column is then negated if the determinant is −1.
 */
void fix_eigenvector_signs(Eigen::MatrixXd &u, bool force_special = true);

/// Symmetric eigendecomposition with ascending eigenvalues and sign-fixed, det=+1 vectors.
void sorted_eigh(const Eigen::MatrixXd &a, Eigen::VectorXd &values, Eigen::MatrixXd &vectors);

XdfFactorization factorize(const Hamiltonian &h, const TruncationPolicy &policy);

/// Number of leaves the policy keeps from |g| values sorted descending.
int retained_count(const std::vector<XdfLeaf> &leaves, const TruncationPolicy &policy);

Tensor4 reconstruct_eri(const XdfFactorization &f, bool use_retained_only);

Eigen::MatrixXd z_tensor(const XdfLeaf &leaf);

/// g^{tt'} = Σ V^t_pq (pq|rs) V^{t'}_rs.
double leaf_coupling(const Eigen::MatrixXd &vt, const Tensor4 &eri, const Eigen::MatrixXd &vu);

} // namespace xdf
