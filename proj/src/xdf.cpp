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

#include "xdfgrad/xdf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xdfgrad/pairs.hpp"

namespace xdf {

void fix_eigenvector_signs(Eigen::MatrixXd &u, bool force_special) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        Eigen::Index arg = 0;
        u.col(c).cwiseAbs().maxCoeff(&arg);
        if (u(arg, c) < 0.0) {
            u.col(c) *= -1.0;
        }
    }
    if (force_special && u.cols() > 0 && u.determinant() < 0.0) {
        u.col(u.cols() - 1) *= -1.0;
    }
}

void sorted_eigh(const Eigen::MatrixXd &a, Eigen::VectorXd &values, Eigen::MatrixXd &vectors) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize2(a));
    if (es.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolver failed");
    }
    values = es.eigenvalues();
    vectors = es.eigenvectors();
    fix_eigenvector_signs(vectors);
}

int retained_count(const std::vector<XdfLeaf> &leaves, const TruncationPolicy &policy) {
    const int total = static_cast<int>(leaves.size());
    if (policy.mode == TruncationPolicy::Mode::Count) {
        if (policy.count < 0) {
            throw std::invalid_argument("leaf count must be non-negative");
        }
        return std::min(policy.count, total);
    }
    if (!(policy.threshold >= 0.0)) {
        throw std::invalid_argument("truncation threshold must be non-negative");
    }
    int t = 0;
    while (t < total && std::abs(leaves[t].g) >= policy.threshold) {
        ++t;
    }
    return t;
}

Eigen::MatrixXd z_tensor(const XdfLeaf &leaf) { return leaf.g * leaf.lambda * leaf.lambda.transpose(); }

XdfFactorization factorize(const Hamiltonian &h, const TruncationPolicy &policy) {
    validate(h);
    const int n = h.n_orbitals;
    XdfFactorization f;
    f.n = n;
    f.n_alpha = h.n_alpha;
    f.n_beta = h.n_beta;
    f.policy = policy;
    f.eff = effective_operators(h);
    sorted_eigh(f.eff.eff_one_body, f.F0, f.U0);

    const Eigen::MatrixXd basis = symmetric_pair_basis(n);
    const Eigen::MatrixXd reduced = basis.transpose() * h.two_body.supermatrix() * basis;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize2(reduced));
    if (es.info() != Eigen::Success) {
        throw NumericalError("supermatrix eigensolver failed");
    }
    const int m = static_cast<int>(basis.cols());
    Eigen::MatrixXd vecs = basis * es.eigenvectors();
    fix_eigenvector_signs(vecs, false);

    std::vector<int> first_nonzero(m, 0);
    for (int j = 0; j < m; ++j) {
        int i = 0;
        while (i < n * n && std::abs(vecs(i, j)) <= 1e-12) {
            ++i;
        }
        first_nonzero[j] = i;
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXd &g = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ga = std::abs(g(a));
        const double gb = std::abs(g(b));
        if (ga != gb) {
            return ga > gb;
        }
        return first_nonzero[a] < first_nonzero[b];
    });

    f.leaves.reserve(m);
    for (int t = 0; t < m; ++t) {
        const int j = order[t];
        XdfLeaf leaf;
        leaf.index = t;
        leaf.g = g(j);
        leaf.V = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            vecs.col(j).data(), n, n);
        leaf.V = symmetrize2(leaf.V);
        sorted_eigh(leaf.V, leaf.lambda, leaf.U);
        leaf.Z = z_tensor(leaf);
        f.leaves.push_back(std::move(leaf));
    }
    f.retained = retained_count(f.leaves, policy);
    return f;
}

Tensor4 reconstruct_eri(const XdfFactorization &f, bool use_retained_only) {
    const int n = f.n;
    const int count = use_retained_only ? f.retained : f.n_leaves();
    Eigen::MatrixXd super = Eigen::MatrixXd::Zero(n * n, n * n);
    for (int t = 0; t < count; ++t) {
        const XdfLeaf &leaf = f.leaves[t];
        const Eigen::MatrixXd v = leaf.U * leaf.lambda.asDiagonal() * leaf.U.transpose();
        const Eigen::Map<const Eigen::VectorXd> vec(v.data(), n * n);
        super.noalias() += leaf.g * vec * vec.transpose();
    }
    return symmetrize8(Tensor4::from_supermatrix(super, n));
}

double leaf_coupling(const Eigen::MatrixXd &vt, const Tensor4 &eri, const Eigen::MatrixXd &vu) {
    const int n = eri.dim();
    double acc = 0.0;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (vt(p, q) == 0.0) {
                continue;
            }
            double inner = 0.0;
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s < n; ++s) {
                    inner += eri(p, q, r, s) * vu(r, s);
                }
            }
            acc += vt(p, q) * inner;
        }
    }
    return acc;
}

} // namespace xdf
