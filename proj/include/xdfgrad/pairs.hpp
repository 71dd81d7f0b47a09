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
 * @file pairs.hpp
 * Index helpers for orbital pairs.
 */
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xdf {

/// Strictly-lower-triangle entries (p, k), p > k, in row-major order.
inline std::vector<std::pair<int, int>> lower_triangle_entries(int n) {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int p = 1; p < n; ++p) {
        for (int k = 0; k < p; ++k) {
            out.emplace_back(p, k);
        }
    }
    return out;
}

/**
 * Orthonormal basis of the symmetric N×N matrices, vectorized row-major
 * into an N²×N(N+1)/2 matrix. Columns are e_pp and (e_pq + e_qp)/√2 for p > q.
 */
inline Eigen::MatrixXd symmetric_pair_basis(int n) {
    const int m = n * (n + 1) / 2;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n * n, m);
    int col = 0;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q <= p; ++q) {
            if (p == q) {
                b(p * n + p, col) = 1.0;
            } else {
                b(p * n + q, col) = M_SQRT1_2;
                b(q * n + p, col) = M_SQRT1_2;
            }
            ++col;
        }
    }
    return b;
}

} // namespace xdf
