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

#include "xdfgrad/givens.hpp"

#include <cmath>
#include <stdexcept>

#include "xdfgrad/pairs.hpp"

namespace xdf {

namespace {

struct Step {
    Pivot pivot;
    double theta;
};

// Elimination order; lefts act on rows, rights on columns.
void elimination_order(int n, std::vector<Pivot> &lefts, std::vector<Pivot> &rights) {
    for (int i = 1; i < n; ++i) {
        if (i % 2 == 1) {
            for (int j = 0; j < i; ++j) {
                const int a = i - 1 - j;
                rights.push_back({a, a + 1});
            }
        } else {
            for (int j = 1; j <= i; ++j) {
                const int b = n + j - i - 2;
                lefts.push_back({b, b + 1});
            }
        }
    }
}

void rotate_columns(Eigen::MatrixXd &w, const Pivot &pv, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Eigen::VectorXd a = w.col(pv.p);
    const Eigen::VectorXd b = w.col(pv.q);
    w.col(pv.p) = c * a + s * b;
    w.col(pv.q) = -s * a + c * b;
}

void rotate_rows(Eigen::MatrixXd &w, const Pivot &pv, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Eigen::RowVectorXd a = w.row(pv.p);
    const Eigen::RowVectorXd b = w.row(pv.q);
    w.row(pv.p) = c * a - s * b;
    w.row(pv.q) = s * a + c * b;
}

int shared_indices(const Pivot &a, int k) {
    return static_cast<int>(a.p == k) + static_cast<int>(a.q == k) + static_cast<int>(a.p == k + 1) +
           static_cast<int>(a.q == k + 1);
}

} // namespace

double wrap_angle(double theta) {
    double t = std::remainder(theta, 2.0 * M_PI);
    if (t <= -M_PI) {
        t += 2.0 * M_PI;
    }
    return t;
}

std::vector<Pivot> rectangle_pivots(int n) {
    if (n < 1) {
        throw std::invalid_argument("fabric dimension must be positive");
    }
    std::vector<Pivot> lefts;
    std::vector<Pivot> rights;
    elimination_order(n, lefts, rights);
    std::vector<Pivot> out = lefts;
    out.insert(out.end(), rights.rbegin(), rights.rend());
    return out;
}

GivensFabric identity_fabric(int n) {
    GivensFabric f;
    f.n = n;
    f.pivots = rectangle_pivots(n);
    f.angles.assign(f.pivots.size(), 0.0);
    return f;
}

Eigen::MatrixXd givens_matrix(int n, const Pivot &pivot, double theta) {
    if (pivot.p < 0 || pivot.q >= n || pivot.p >= pivot.q) {
        throw std::invalid_argument("invalid Givens pivot");
    }
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    g(pivot.p, pivot.p) = c;
    g(pivot.q, pivot.p) = s;
    g(pivot.p, pivot.q) = -s;
    g(pivot.q, pivot.q) = c;
    return g;
}

GivensFabric decompose(const Eigen::MatrixXd &u) {
    const int n = static_cast<int>(u.rows());
    if (u.cols() != n || n < 1) {
        throw std::invalid_argument("decompose requires a square matrix");
    }
    if ((u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).norm() > 1e-10) {
        throw std::invalid_argument("decompose requires an orthogonal matrix");
    }
    if (std::abs(u.determinant() - 1.0) > 1e-10) {
        throw std::invalid_argument("decompose requires det(U) = +1");
    }

    std::vector<Pivot> left_pivots;
    std::vector<Pivot> right_pivots;
    elimination_order(n, left_pivots, right_pivots);
    std::vector<Step> lefts;
    std::vector<Step> rights;
    std::size_t li = 0;
    std::size_t ri = 0;

    Eigen::MatrixXd w = u;
    for (int i = 1; i < n; ++i) {
        if (i % 2 == 1) {
            for (int j = 0; j < i; ++j) {
                const Pivot pv = right_pivots[ri++];
                const int r = n - 1 - j;
                const double theta = std::atan2(-w(r, pv.p), w(r, pv.q));
                rotate_columns(w, pv, theta);
                rights.push_back({pv, theta});
            }
        } else {
            for (int j = 1; j <= i; ++j) {
                const Pivot pv = left_pivots[li++];
                const int col = j - 1;
                const double theta = std::atan2(-w(pv.q, col), w(pv.p, col));
                rotate_rows(w, pv, theta);
                lefts.push_back({pv, theta});
            }
        }
    }

    // u = Π_L G(−θ) · D · Π_R^reversed G(−θ).
    std::vector<Step> gates;
    for (const Step &s : lefts) {
        gates.push_back({s.pivot, -s.theta});
    }
    for (auto it = rights.rbegin(); it != rights.rend(); ++it) {
        gates.push_back({it->pivot, -it->theta});
    }

    std::vector<int> d(n);
    for (int k = 0; k < n; ++k) {
        d[k] = w(k, k) < 0.0 ? -1 : 1;
    }
    // Move D to the front: G(φ)·D = D·G(−φ) when exactly one pivot index is flipped.
    for (std::size_t g = 0; g < lefts.size(); ++g) {
        if (d[gates[g].pivot.p] != d[gates[g].pivot.q]) {
            gates[g].theta = -gates[g].theta;
        }
    }
    // D = Π (−1 on {k, k+1}) over a telescoped set of adjacent pairs.
    int flips = 0;
    std::vector<int> factors;
    for (int k = 0; k < n; ++k) {
        if (d[k] < 0) {
            ++flips;
        }
        if (k + 1 < n && flips % 2 == 1) {
            factors.push_back(k);
        }
    }
    if (flips % 2 != 0) {
        throw std::invalid_argument("decompose requires det(U) = +1");
    }
    for (int k : factors) {
        bool absorbed = false;
        for (auto &g : gates) {
            if (g.pivot.p == k && g.pivot.q == k + 1) {
                g.theta += M_PI;
                absorbed = true;
                break;
            }
            if (shared_indices(g.pivot, k) == 1) {
                g.theta = -g.theta;
            }
        }
        if (!absorbed) {
            throw std::logic_error("fabric lacks an adjacent pivot for sign absorption");
        }
    }

    GivensFabric f;
    f.n = n;
    for (const Step &g : gates) {
        f.pivots.push_back(g.pivot);
        f.angles.push_back(wrap_angle(g.theta));
    }
    return f;
}

Eigen::MatrixXd reconstruct(const GivensFabric &fabric) {
    Eigen::MatrixXd o = Eigen::MatrixXd::Identity(fabric.n, fabric.n);
    for (int g = fabric.size() - 1; g >= 0; --g) {
        const Pivot &pv = fabric.pivots[g];
        rotate_rows(o, pv, fabric.angles[g]);
    }
    return o;
}

FabricJacobian jacobian(const GivensFabric &fabric) {
    const int n = fabric.n;
    const int m = fabric.size();
    const auto entries = lower_triangle_entries(n);

    std::vector<Eigen::MatrixXd> suffix(m + 1);
    suffix[m] = Eigen::MatrixXd::Identity(n, n);
    for (int g = m - 1; g >= 0; --g) {
        suffix[g] = suffix[g + 1];
        rotate_rows(suffix[g], fabric.pivots[g], fabric.angles[g]);
    }

    FabricJacobian jac;
    jac.A = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(entries.size()));
    Eigen::MatrixXd prefix = Eigen::MatrixXd::Identity(n, n);
    for (int g = 0; g < m; ++g) {
        const Pivot &pv = fabric.pivots[g];
        const double c = std::cos(fabric.angles[g]);
        const double s = std::sin(fabric.angles[g]);
        Eigen::Matrix2d dblock;
        dblock << -s, -c, c, -s;
        Eigen::MatrixXd left(n, 2);
        left << prefix.col(pv.p), prefix.col(pv.q);
        Eigen::MatrixXd right(2, n);
        right << suffix[g + 1].row(pv.p), suffix[g + 1].row(pv.q);
        const Eigen::MatrixXd dO = left * dblock * right;
        for (std::size_t e = 0; e < entries.size(); ++e) {
            jac.A(g, static_cast<Eigen::Index>(e)) = dO(entries[e].first, entries[e].second);
        }
        rotate_columns(prefix, pv, fabric.angles[g]);
    }
    return jac;
}

Eigen::VectorXd pinv_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &rhs, double rel_cutoff) {
    if (a.rows() != rhs.size()) {
        throw std::invalid_argument("pinv_solve: right-hand side length mismatch");
    }
    if (a.size() == 0) {
        return Eigen::VectorXd::Zero(a.cols());
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sv = svd.singularValues();
    const double cutoff = rel_cutoff * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd coeff = svd.matrixU().transpose() * rhs;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        coeff(i) = (sv(i) > cutoff && sv(i) > 0.0) ? coeff(i) / sv(i) : 0.0;
    }
    return svd.matrixV() * coeff;
}

} // namespace xdf
