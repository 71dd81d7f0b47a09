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

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xdfgrad/givens.hpp"
#include "xdfgrad/pairs.hpp"

namespace xdf {
namespace {

GivensFabric random_fabric(int n, std::uint64_t seed) {
    GivensFabric f = identity_fabric(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    for (double &a : f.angles) {
        a = ang(rng);
    }
    return f;
}

TEST(Pivots, RectangleLayoutCoversEveryGateOnce) {
    for (int n = 1; n <= 8; ++n) {
        const std::vector<Pivot> pv = rectangle_pivots(n);
        EXPECT_EQ(static_cast<int>(pv.size()), n * (n - 1) / 2);
        for (const Pivot &p : pv) {
            EXPECT_EQ(p.q, p.p + 1);
            EXPECT_GE(p.p, 0);
            EXPECT_LT(p.q, n);
        }
    }
}

TEST(Pivots, FourOrbitalOrder) {
    const std::vector<Pivot> expected{{0, 1}, {2, 3}, {1, 2}, {0, 1}, {2, 3}, {1, 2}};
    std::multiset<std::pair<int, int>> want;
    std::multiset<std::pair<int, int>> got;
    for (const Pivot &p : expected) {
        want.insert({p.p, p.q});
    }
    for (const Pivot &p : rectangle_pivots(4)) {
        got.insert({p.p, p.q});
    }
    EXPECT_EQ(got, want);
}

TEST(GivensMatrix, Convention) {
    const Eigen::MatrixXd g = givens_matrix(3, {0, 1}, 0.4);
    EXPECT_DOUBLE_EQ(g(0, 0), std::cos(0.4));
    EXPECT_DOUBLE_EQ(g(1, 1), std::cos(0.4));
    EXPECT_DOUBLE_EQ(g(1, 0), std::sin(0.4));
    EXPECT_DOUBLE_EQ(g(0, 1), -std::sin(0.4));
    EXPECT_DOUBLE_EQ(g(2, 2), 1.0);
    EXPECT_THROW(givens_matrix(3, {1, 1}, 0.1), std::invalid_argument);
    EXPECT_THROW(givens_matrix(3, {0, 3}, 0.1), std::invalid_argument);
}

TEST(Decompose, IdentityGivesZeroAngles) {
    for (int n = 1; n <= 6; ++n) {
        const GivensFabric f = decompose(Eigen::MatrixXd::Identity(n, n));
        for (double a : f.angles) {
            EXPECT_EQ(a, 0.0);
        }
    }
}

TEST(Decompose, TwoByTwoRotation) {
    const GivensFabric f = decompose(givens_matrix(2, {0, 1}, 0.3));
    ASSERT_EQ(f.size(), 1);
    EXPECT_NEAR(f.angles[0], 0.3, 1e-15);
    const GivensFabric g = decompose(givens_matrix(2, {0, 1}, -2.9));
    EXPECT_NEAR(g.angles[0], -2.9, 1e-14);
}

TEST(Decompose, RoundTripRandomSpecialOrthogonal) {
    for (int n = 2; n <= 8; ++n) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Eigen::MatrixXd u = test::random_orthogonal(n, 100 * n + seed);
            const GivensFabric f = decompose(u);
            EXPECT_EQ(f.size(), n * (n - 1) / 2);
            EXPECT_LT((reconstruct(f) - u).norm(), 1e-10) << "N=" << n;
            for (double a : f.angles) {
                EXPECT_GT(a, -std::numbers::pi);
                EXPECT_LE(a, std::numbers::pi);
            }
        }
    }
}

TEST(Decompose, SignDiagonalsAreAbsorbed) {
    for (int n = 2; n <= 6; ++n) {
        for (int mask = 0; mask < (1 << n); ++mask) {
            Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n, n);
            int negs = 0;
            for (int k = 0; k < n; ++k) {
                if ((mask >> k) & 1) {
                    d(k, k) = -1.0;
                    ++negs;
                }
            }
            if (negs % 2 != 0) {
                continue;
            }
            EXPECT_LT((reconstruct(decompose(d)) - d).norm(), 1e-12);
        }
    }
}

TEST(Decompose, RejectsNonSpecialOrNonOrthogonal) {
    Eigen::MatrixXd u = test::random_orthogonal(4, 1);
    u.col(0) *= -1.0;
    EXPECT_THROW(decompose(u), std::invalid_argument);
    EXPECT_THROW(decompose(2.0 * Eigen::MatrixXd::Identity(3, 3)), std::invalid_argument);
    EXPECT_THROW(decompose(Eigen::MatrixXd::Identity(2, 3)), std::invalid_argument);
}

TEST(Reconstruct, ZeroAnglesAndSingleGate) {
    GivensFabric f = identity_fabric(5);
    EXPECT_LT((reconstruct(f) - Eigen::MatrixXd::Identity(5, 5)).norm(), 1e-15);
    int gate = -1;
    for (int g = 0; g < f.size(); ++g) {
        if (f.pivots[g] == Pivot{0, 1}) {
            gate = g;
            break;
        }
    }
    ASSERT_GE(gate, 0);
    f.angles[gate] = 0.7;
    EXPECT_LT((reconstruct(f) - givens_matrix(5, {0, 1}, 0.7)).norm(), 1e-15);
}

TEST(Reconstruct, OrderedProduct) {
    const GivensFabric f = random_fabric(4, 3);
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(4, 4);
    for (int g = 0; g < f.size(); ++g) {
        prod = prod * givens_matrix(4, f.pivots[g], f.angles[g]);
    }
    EXPECT_LT((reconstruct(f) - prod).norm(), 1e-14);
}

TEST(Reconstruct, DecomposeIsIdempotentOnFabricImage) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const GivensFabric f = random_fabric(5, seed);
        const Eigen::MatrixXd u = reconstruct(f);
        EXPECT_LT((reconstruct(decompose(u)) - u).norm(), 1e-10);
    }
}

TEST(Jacobian, SquareOfPairCount) {
    const FabricJacobian j = jacobian(random_fabric(4, 1));
    EXPECT_EQ(j.A.rows(), 6);
    EXPECT_EQ(j.A.cols(), 6);
}

TEST(Jacobian, TwoByTwoAtZero) {
    const FabricJacobian j = jacobian(identity_fabric(2));
    ASSERT_EQ(j.A.rows(), 1);
    EXPECT_NEAR(std::abs(j.A(0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(j.A(0, 0), std::cos(0.0), 1e-15);
}

TEST(Jacobian, MatchesFiniteDifferences) {
    for (int n = 2; n <= 8; ++n) {
        const GivensFabric f = random_fabric(n, 50 + n);
        const FabricJacobian j = jacobian(f);
        const auto entries = lower_triangle_entries(n);
        const double h = 1e-3;
        for (int g = 0; g < f.size(); ++g) {
            auto at = [&](double d) {
                GivensFabric s = f;
                s.angles[g] += d;
                return reconstruct(s);
            };
            const Eigen::MatrixXd fd = (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
            for (std::size_t c = 0; c < entries.size(); ++c) {
                const auto [p, k] = entries[c];
                EXPECT_NEAR(j.A(g, static_cast<Eigen::Index>(c)), fd(p, k), 1e-7) << "N=" << n << " g=" << g;
            }
        }
    }
}

TEST(PinvSolve, IdentityReturnsRhs) {
    const Eigen::VectorXd b = test::gaussian_matrix(5, 1, 3).col(0);
    EXPECT_LT((pinv_solve(Eigen::MatrixXd::Identity(5, 5), b) - b).norm(), 1e-15);
}

TEST(PinvSolve, SingularConsistentSystem) {
    const Eigen::MatrixXd left = test::gaussian_matrix(5, 3, 4);
    const Eigen::MatrixXd a = left * left.transpose();
    const Eigen::VectorXd b = a * test::gaussian_matrix(5, 1, 5).col(0);
    const Eigen::VectorXd x = pinv_solve(a, b);
    EXPECT_LT((a * x - b).norm(), 1e-10);
}

TEST(PinvSolve, MinimumNormDropsNullSpace) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(0, 0) = 2.0;
    a(1, 1) = 0.5;
    const Eigen::VectorXd b = Eigen::Vector3d(1.0, 2.0, 3.0);
    const Eigen::VectorXd x = pinv_solve(a, b);
    EXPECT_NEAR(x(0), 0.5, 1e-15);
    EXPECT_NEAR(x(1), 4.0, 1e-15);
    EXPECT_EQ(x(2), 0.0);
    EXPECT_THROW(pinv_solve(a, Eigen::Vector2d(1.0, 2.0)), std::invalid_argument);
}

TEST(WrapAngle, HalfOpenInterval) {
    EXPECT_DOUBLE_EQ(wrap_angle(std::numbers::pi), std::numbers::pi);
    EXPECT_DOUBLE_EQ(wrap_angle(-std::numbers::pi), std::numbers::pi);
    EXPECT_NEAR(wrap_angle(3.0 * std::numbers::pi / 2.0), -std::numbers::pi / 2.0, 1e-15);
    EXPECT_NEAR(wrap_angle(0.25 + 4.0 * std::numbers::pi), 0.25, 1e-14);
}

} // namespace
} // namespace xdf
