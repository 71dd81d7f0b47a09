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

#include <bit>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xdfgrad/qsim.hpp"
#include "xdfgrad/verify.hpp"

namespace xdf {
namespace {

GivensFabric random_fabric(int n, std::uint64_t seed) {
    return decompose(test::random_orthogonal(n, seed));
}

double max_diff(const Statevector &a, const Statevector &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// D_k = n_kα + n_kβ − 1 on a computational basis state.
double occupation_shift(std::uint32_t x, int n, int k) {
    return static_cast<double>(((x >> k) & 1U) + ((x >> (n + k)) & 1U)) - 1.0;
}

TEST(Statevector, HartreeFockReference) {
    const Statevector psi = hf_reference(2, 1, 1);
    EXPECT_EQ(psi.size(), 16U);
    EXPECT_EQ(psi[0b0101], 1.0);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-15);
    const MeasuredRdms r = measure_rdms_direct(psi);
    EXPECT_NEAR(r.gamma(0, 0), 2.0, 1e-15);
    EXPECT_NEAR(r.gamma(1, 1), 0.0, 1e-15);
    EXPECT_NEAR(r.gamma.trace(), 2.0, 1e-15);
}

TEST(Statevector, SectorBasisAndLeakage) {
    const auto basis = sector_basis(4, 2, 1);
    EXPECT_EQ(basis.size(), 24U);
    for (std::uint32_t x : basis) {
        EXPECT_EQ(std::popcount(x & 0xFU), 2);
        EXPECT_EQ(std::popcount(x >> 4), 1);
    }
    const Statevector psi = random_sector_state(4, 2, 1, 3);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-14);
    EXPECT_EQ(leakage(psi, 2, 1), 0.0);
    EXPECT_NEAR(leakage(psi, 1, 2), 1.0, 1e-14);
    EXPECT_THROW(Statevector(9), std::invalid_argument);
}

TEST(Gates, ConserveNumberAndNorm) {
    Statevector psi = random_sector_state(4, 2, 2, 5);
    apply_spin_givens(psi, 0, 2, 0.3, -0.8);
    apply_pair_exchange(psi, 1, 3, 0.6);
    apply_givens(psi, 1, 3, 1.1);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-13);
    EXPECT_LT(leakage(psi, 2, 2), 1e-28);
}

TEST(Gates, DerivativesMatchFiniteDifferences) {
    const Statevector base = random_sector_state(3, 2, 1, 7);
    const double h = 1e-4;
    auto check = [&](auto apply, auto deriv) {
        Statevector d = base;
        deriv(d, 0.4);
        Statevector p = base;
        Statevector m = base;
        apply(p, 0.4 + h);
        apply(m, 0.4 - h);
        for (std::size_t i = 0; i < base.size(); ++i) {
            EXPECT_NEAR(d[i], (p[i] - m[i]) / (2 * h), 1e-7);
        }
    };
    check([](Statevector &s, double t) { apply_givens(s, 0, 2, t); },
          [](Statevector &s, double t) { apply_givens_derivative(s, 0, 2, t); });
    check([](Statevector &s, double t) { apply_pair_exchange(s, 0, 2, t); },
          [](Statevector &s, double t) { apply_pair_exchange_derivative(s, 0, 2, t); });
}

TEST(OrbitalRotation, IdentityFabricLeavesStateUnchanged) {
    const Statevector psi = random_sector_state(4, 2, 1, 1);
    EXPECT_EQ(max_diff(apply_orbital_rotation(psi, identity_fabric(4)), psi), 0.0);
    EXPECT_EQ(max_diff(rotate_to_frame(psi, identity_fabric(4)), psi), 0.0);
}

TEST(OrbitalRotation, SingleParticleFollowsMatrixColumn) {
    GivensFabric f = identity_fabric(2);
    f.angles[0] = 0.35;
    const Statevector psi = apply_orbital_rotation(hf_reference(2, 1, 0), f);
    const Eigen::MatrixXd o = reconstruct(f);
    EXPECT_NEAR(psi[0b01], o(0, 0), 1e-15);
    EXPECT_NEAR(psi[0b10], o(1, 0), 1e-15);

    const GivensFabric g = random_fabric(5, 3);
    const Eigen::MatrixXd u = reconstruct(g);
    for (int k = 0; k < 5; ++k) {
        Statevector e(5);
        e[1U << k] = 1.0;
        const Statevector r = apply_orbital_rotation(e, g);
        for (int p = 0; p < 5; ++p) {
            EXPECT_NEAR(r[1U << p], u(p, k), 1e-13);
        }
    }
}

TEST(OrbitalRotation, TwoParticleAmplitudesAreMinors) {
    const GivensFabric g = random_fabric(4, 8);
    const Eigen::MatrixXd u = reconstruct(g);
    const Statevector r = apply_orbital_rotation(hf_reference(4, 2, 0), g);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const double minor = u(i, 0) * u(j, 1) - u(j, 0) * u(i, 1);
            EXPECT_NEAR(r[(1U << i) | (1U << j)], minor, 1e-13);
        }
    }
}

TEST(OrbitalRotation, FrameRotationInvertsOrbitalRotation) {
    const Statevector psi = random_sector_state(4, 2, 2, 11);
    const GivensFabric g = random_fabric(4, 12);
    EXPECT_LT(max_diff(rotate_to_frame(apply_orbital_rotation(psi, g), g), psi), 1e-13);
    EXPECT_LT(max_diff(apply_orbital_rotation(rotate_to_frame(psi, g), g), psi), 1e-13);
    EXPECT_NEAR(apply_orbital_rotation(psi, g).norm(), 1.0, 1e-13);
}

TEST(Densities, HartreeFockIdentityFrame) {
    const Statevector psi = hf_reference(2, 1, 1);
    const Eigen::VectorXd w0 = measure_omega0(psi, identity_fabric(2));
    EXPECT_NEAR(w0(0), 1.0, 1e-15);
    EXPECT_NEAR(w0(1), -1.0, 1e-15);
    const Eigen::MatrixXd w = measure_omega_leaf(psi, identity_fabric(2));
    EXPECT_NEAR(w(0, 0), 0.25, 1e-15);
    EXPECT_NEAR(w(1, 1), 0.25, 1e-15);
    EXPECT_NEAR(w(0, 1), -0.5, 1e-15);
    EXPECT_NEAR(w(1, 0), -0.5, 1e-15);
}

TEST(Densities, SumRuleOnRandomStates) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Statevector psi = random_sector_state(4, 2, 1, seed);
        const Eigen::VectorXd w0 = measure_omega0(psi, random_fabric(4, 20 + seed));
        EXPECT_NEAR(w0.sum(), 3.0 - 4.0, 1e-12);
    }
}

TEST(Densities, LeafDensitiesMatchBruteForceInRotatedFrame) {
    const int n = 3;
    const Statevector psi = random_sector_state(n, 2, 1, 4);
    const GivensFabric g = random_fabric(n, 5);
    const Eigen::MatrixXd w = measure_omega_leaf(psi, g);
    const Statevector phi = rotate_to_frame(psi, g);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            double brute = 0.0;
            for (std::uint32_t x = 0; x < phi.size(); ++x) {
                brute += phi[x] * phi[x] * 0.5 * occupation_shift(x, n, k) * occupation_shift(x, n, l);
            }
            brute -= k == l ? 0.25 : 0.0;
            EXPECT_NEAR(w(k, l), brute, 1e-13);
            EXPECT_NEAR(w(k, l), w(l, k), 1e-15);
        }
    }
}

TEST(Densities, ClosedShellDeterminantCombinatorics) {
    const Statevector psi = hf_reference(3, 1, 1);
    const Eigen::MatrixXd w = measure_omega_leaf(psi, identity_fabric(3));
    const Eigen::Vector3d d(1.0, -1.0, -1.0);
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            EXPECT_NEAR(w(k, l), 0.5 * d(k) * d(l) - (k == l ? 0.25 : 0.0), 1e-15);
        }
    }
}

TEST(Energy, OneBodyClosedForm) {
    Hamiltonian h = zero_hamiltonian(3, 2, 2);
    h.core_energy = 0.3;
    h.one_body.diagonal() << -1.0, -0.4, 0.7;
    const XdfFactorization f = factorize(h, TruncationPolicy::keep_all());
    EXPECT_NEAR(energy(hf_reference(3, 2, 2), f), 0.3 + 2.0 * (-1.0 - 0.4), 1e-14);
}

TEST(Energy, EqualsDenseContractionOnRandomStates) {
    for (int n = 2; n <= 5; ++n) {
        const Hamiltonian h = synth_hamiltonian(n, 1 + n / 3, 1, 200 + n);
        const XdfFactorization f = factorize(h, TruncationPolicy::keep_all());
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const Statevector psi = random_sector_state(n, h.n_alpha, h.n_beta, seed);
            const MeasuredRdms r = measure_rdms_direct(psi);
            EXPECT_NEAR(energy(psi, f), dense_energy(h, r.gamma, r.Gamma), 1e-10) << "N=" << n;
        }
    }
}

TEST(Energy, InvariantUnderEigenvectorSignFlips) {
    const Hamiltonian h = synth_hamiltonian(4, 2, 1, 3);
    XdfFactorization f = factorize(h, TruncationPolicy::keep_all());
    const Statevector psi = random_sector_state(4, 2, 1, 9);
    const double e = energy(psi, f);
    f.U0.col(0) *= -1.0;
    f.U0.col(2) *= -1.0;
    for (XdfLeaf &leaf : f.leaves) {
        leaf.U.col(1) *= -1.0;
        leaf.U.col(3) *= -1.0;
    }
    EXPECT_NEAR(energy(psi, f), e, 1e-10);
}

TEST(Energy, HamiltonianActionIsConsistent) {
    const Hamiltonian h = synth_hamiltonian(3, 2, 1, 6);
    const XdfFactorization f = factorize(h, TruncationPolicy::by_count(3));
    const XdfCircuits c = build_circuits(f);
    const Statevector a = random_sector_state(3, 2, 1, 1);
    const Statevector b = random_sector_state(3, 2, 1, 2);
    const Statevector ha = apply_xdf_hamiltonian(a, f, c);
    EXPECT_NEAR(a.dot(ha), energy(a, f, c), 1e-12);
    EXPECT_NEAR(b.dot(ha), apply_xdf_hamiltonian(b, f, c).dot(a), 1e-12);
    EXPECT_LT(leakage(ha, 2, 1), 1e-28);
}

class ShiftRuleTest : public ::testing::Test {
  protected:
    void SetUp() override {
        h = synth_hamiltonian(4, 2, 1, 14);
        f = factorize(h, TruncationPolicy::keep_all());
        c = build_circuits(f);
    }
    Hamiltonian h;
    XdfFactorization f;
    XdfCircuits c;
};

TEST_F(ShiftRuleTest, ExactShiftEqualsDirectDifferentiation) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Statevector psi = random_sector_state(4, 2, 1, seed);
        for (int t = kLeafOneBody; t < f.retained; ++t) {
            for (int g = 0; g < c.fabric(t).size(); ++g) {
                EXPECT_NEAR(denergy_dtheta_shift(psi, f, c, t, g), denergy_dtheta_direct(psi, f, c, t, g), 1e-10);
            }
        }
    }
}

TEST_F(ShiftRuleTest, ExactShiftEqualsCentralDifference) {
    const Statevector psi = random_sector_state(4, 2, 1, 21);
    const double step = 1e-5;
    for (int t = kLeafOneBody; t < f.retained; ++t) {
        for (int g = 0; g < c.fabric(t).size(); ++g) {
            const double fd = (leaf_energy(psi, f, c, t, GateTweak{g, step, step}) -
                               leaf_energy(psi, f, c, t, GateTweak{g, -step, -step})) /
                              (2.0 * step);
            EXPECT_NEAR(denergy_dtheta_shift(psi, f, c, t, g), fd, 1e-7);
        }
    }
}

TEST_F(ShiftRuleTest, AllAnglesVectorMatchesScalar) {
    const Statevector psi = random_sector_state(4, 2, 1, 2);
    const Eigen::VectorXd all = denergy_dtheta_all(psi, f, c, 0);
    for (int g = 0; g < all.size(); ++g) {
        EXPECT_EQ(all(g), denergy_dtheta_shift(psi, f, c, 0, g));
    }
}

TEST_F(ShiftRuleTest, LiteralFourShiftMissesDoubleFrequencyTerms) {
    const Statevector psi = random_sector_state(4, 2, 1, 0);
    double worst = 0.0;
    for (int t = kLeafOneBody; t < f.retained; ++t) {
        for (int g = 0; g < c.fabric(t).size(); ++g) {
            worst = std::max(worst, std::abs(denergy_dtheta_four_shift(psi, f, c, t, g) -
                                             denergy_dtheta_direct(psi, f, c, t, g)));
        }
    }
    EXPECT_GT(worst, 1e-6);
}

TEST(ShiftRule, EmptyStateHasZeroDerivatives) {
    const Hamiltonian h = synth_hamiltonian(3, 0, 0, 1);
    const XdfFactorization f = factorize(h, TruncationPolicy::keep_all());
    const XdfCircuits c = build_circuits(f);
    const Statevector vac = hf_reference(3, 0, 0);
    for (int t = kLeafOneBody; t < f.retained; ++t) {
        for (int g = 0; g < c.fabric(t).size(); ++g) {
            EXPECT_EQ(denergy_dtheta_shift(vac, f, c, t, g), 0.0);
        }
    }
}

TEST(Rdms, PartialTraceSumRules) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Statevector psi = random_sector_state(4, 2, 1, seed);
        const MeasuredRdms r = measure_rdms_direct(psi);
        EXPECT_NEAR(r.gamma.trace(), 3.0, 1e-12);
        for (int p = 0; p < 4; ++p) {
            for (int q = 0; q < 4; ++q) {
                double tr = 0.0;
                for (int s = 0; s < 4; ++s) {
                    tr += r.Gamma(p, q, s, s);
                }
                EXPECT_NEAR(tr, 0.5 * (3.0 - 1.0) * r.gamma(p, q), 1e-12);
            }
        }
    }
}

} // namespace
} // namespace xdf
