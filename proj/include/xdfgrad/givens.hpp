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
 * @file givens.hpp
 * Givens fabrics for SO(N) in a rectangle layout.
 *
 * A plane rotation on pivot (p, q), p < q, is the identity except for
 *
 *     [ G_pp  G_pq ]   [ cos θ  -sin θ ]
 *     [ G_qp  G_qq ] = [ sin θ   cos θ ]
 *
 * and a fabric realizes O = G_1(θ_1) G_2(θ_2) ... G_M(θ_M). The pivot
 * sequence depends only on N and contains each adjacent pair.
 */
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xdf {

struct Pivot {
    int p = 0;
    int q = 1;
    friend bool operator==(const Pivot &, const Pivot &) = default;
};

struct GivensFabric {
    int n = 0;
    std::vector<Pivot> pivots;
    std::vector<double> angles;

    [[nodiscard]] int size() const { return static_cast<int>(pivots.size()); }
};

/// Pivot sequence of the rectangle fabric; N(N−1)/2 adjacent pairs.
std::vector<Pivot> rectangle_pivots(int n);

/// Fabric with rectangle pivots and all angles zero.
GivensFabric identity_fabric(int n);

Eigen::MatrixXd givens_matrix(int n, const Pivot &pivot, double theta);

/**
 * @brief Decompose U ∈ SO(N) into the rectangle fabric.
 *
 * Each elimination step picks the angle that zeroes its target with a
 * non-negative pivot. The leftover ±1 diagonal is folded into the angles,
 * which are then wrapped into (−π, π].
 */
GivensFabric decompose(const Eigen::MatrixXd &u);

Eigen::MatrixXd reconstruct(const GivensFabric &fabric);

struct FabricJacobian {
    /// A(g, c): derivative of the lower-triangle entry c = (p, k), p > k,
    /// with respect to angle g. Columns follow lower_triangle_entries(N).
    Eigen::MatrixXd A;
};

FabricJacobian jacobian(const GivensFabric &fabric);

/**
 * @brief Minimum-norm least-squares solution of A·x = rhs.
 *
 * Singular values below rel_cutoff × σ_max are discarded.
 */
Eigen::VectorXd pinv_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &rhs, double rel_cutoff = 1e-10);

/// Wrap an angle into (−π, π].
double wrap_angle(double theta);

} // namespace xdf
