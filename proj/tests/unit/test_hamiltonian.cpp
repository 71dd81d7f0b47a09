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

#include <array>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xdfgrad/hamiltonian.hpp"

namespace xdf {
namespace {

const char *kHeader2 = "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,1,\n ISYM=1,\n&END\n";

int count_records(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    bool body = false;
    int n = 0;
    while (std::getline(in, line)) {
        if (body && line.find_first_not_of(" \t\r") != std::string::npos) {
            ++n;
        }
        if (line.find("&END") != std::string::npos) {
            body = true;
        }
    }
    return n;
}

TEST(Fcidump, SingleTwoBodyRecord) {
    const Hamiltonian h = parse_fcidump_string(std::string(kHeader2) + "0.25 1 1 1 1\n");
    EXPECT_EQ(h.n_orbitals, 2);
    EXPECT_EQ(h.n_alpha, 1);
    EXPECT_EQ(h.n_beta, 1);
    EXPECT_DOUBLE_EQ(h.two_body(0, 0, 0, 0), 0.25);
    double others = 0.0;
    for (int i = 1; i < 16; ++i) {
        others += std::abs(h.two_body.data()[i]);
    }
    EXPECT_EQ(others, 0.0);
}

TEST(Fcidump, CoreRecord) {
    const Hamiltonian h = parse_fcidump_string(std::string(kHeader2) + "0.75 0 0 0 0\n");
    EXPECT_DOUBLE_EQ(h.core_energy, 0.75);
}

TEST(Fcidump, OneBodySymmetryCompletion) {
    const Hamiltonian h = parse_fcidump_string(std::string(kHeader2) + "0.1 2 1 0 0\n");
    EXPECT_DOUBLE_EQ(h.one_body(1, 0), 0.1);
    EXPECT_DOUBLE_EQ(h.one_body(0, 1), 0.1);
}

TEST(Fcidump, TwoBodyEightfoldCompletion) {
    const Hamiltonian h = parse_fcidump_string(std::string(kHeader2) + "0.3 2 1 1 1\n");
    for (auto [p, q, r, s] : {std::array{1, 0, 0, 0}, std::array{0, 1, 0, 0}, std::array{0, 0, 1, 0},
                              std::array{0, 0, 0, 1}}) {
        EXPECT_DOUBLE_EQ(h.two_body(p, q, r, s), 0.3);
    }
}

TEST(Fcidump, FortranExponentAndAlternateTerminators) {
    const Hamiltonian a = parse_fcidump_string("&FCI NORB=2, NELEC=2, MS2=0 /\n1.5D-01 1 1 0 0\n");
    EXPECT_DOUBLE_EQ(a.one_body(0, 0), 0.15);
    const Hamiltonian b = parse_fcidump_string("&FCI NORB=2 NELEC=2 $END\n-2.0d0 2 2 0 0\n");
    EXPECT_DOUBLE_EQ(b.one_body(1, 1), -2.0);
}

TEST(Fcidump, OpenShellHeader) {
    const Hamiltonian h = parse_fcidump_string("&FCI NORB=3,NELEC=3,MS2=1,\n&END\n");
    EXPECT_EQ(h.n_alpha, 2);
    EXPECT_EQ(h.n_beta, 1);
}

TEST(Fcidump, OrbitalEnergyRecordsIgnored) {
    const Hamiltonian h = parse_fcidump_string(std::string(kHeader2) + "-0.5 1 0 0 0\n");
    EXPECT_EQ(h.one_body.cwiseAbs().sum(), 0.0);
}

TEST(Fcidump, MalformedInputsRaise) {
    EXPECT_THROW(parse_fcidump_string("NORB=2\n0.1 1 1 0 0\n"), FcidumpError);
    EXPECT_THROW(parse_fcidump_string("&FCI NORB=2,NELEC=2\n0.1 1 1 0 0\n"), FcidumpError);
    EXPECT_THROW(parse_fcidump_string("&FCI NORB=2 &END\n"), FcidumpError);
    EXPECT_THROW(parse_fcidump_string(std::string(kHeader2) + "abc 1 1 0 0\n"), FcidumpError);
    EXPECT_THROW(parse_fcidump_string(std::string(kHeader2) + "0.1 3 1 0 0\n"), FcidumpError);
    EXPECT_THROW(parse_fcidump_string(std::string(kHeader2) + "0.1 1 1 1\n"), FcidumpError);
    EXPECT_THROW(parse_fcidump_string(std::string(kHeader2) + "0.1 1 0 1 0\n"), FcidumpError);
    EXPECT_THROW(parse_fcidump_string("&FCI NORB=1,NELEC=3,MS2=1 &END\n"), FcidumpError);
    EXPECT_THROW(read_fcidump("/nonexistent/path.fcidump"), FcidumpError);
}

TEST(Fcidump, ConflictingDuplicatesRaise) {
    EXPECT_THROW(parse_fcidump_string(std::string(kHeader2) + "0.1 2 1 0 0\n0.2 1 2 0 0\n"), FcidumpError);
    EXPECT_NO_THROW(parse_fcidump_string(std::string(kHeader2) + "0.1 2 1 0 0\n0.1 1 2 0 0\n"));
    EXPECT_THROW(parse_fcidump_string(std::string(kHeader2) + "0.1 2 1 1 1\n0.3 1 1 1 2\n"), FcidumpError);
}

TEST(Fcidump, WriteParseIsCanonicalForTwoOrbitals) {
    const std::string src = std::string(kHeader2) +
                            "0.5 1 1 1 1\n0.2 2 2 1 1\n0.05 2 1 2 1\n0.4 2 2 2 2\n-1.0 1 1 0 0\n"
                            "0.1 2 1 0 0\n0.3 2 2 0 0\n0.25 0 0 0 0\n";
    const std::string once = write_fcidump(parse_fcidump_string(src));
    EXPECT_EQ(write_fcidump(parse_fcidump_string(once)), once);
    const Hamiltonian a = parse_fcidump_string(src);
    const Hamiltonian b = parse_fcidump_string(once);
    EXPECT_EQ(a.two_body.max_abs_diff(b.two_body), 0.0);
    EXPECT_EQ((a.one_body - b.one_body).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(a.core_energy, b.core_energy);
}

TEST(Fcidump, ZeroHamiltonianWritesOnlyCore) {
    const std::string text = write_fcidump(zero_hamiltonian(3, 1, 1));
    EXPECT_EQ(count_records(text), 1);
    EXPECT_NE(text.find("   0   0   0   0"), std::string::npos);
}

TEST(Fcidump, RandomRoundTrip) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Hamiltonian h = synth_hamiltonian(4, 2, 2, seed);
        const Hamiltonian r = parse_fcidump_string(write_fcidump(h));
        EXPECT_LT(std::abs(r.core_energy - h.core_energy), 1e-12);
        EXPECT_LT((r.one_body - h.one_body).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT(r.two_body.max_abs_diff(h.two_body), 1e-12);
        EXPECT_EQ(r.n_alpha, 2);
        EXPECT_EQ(r.n_beta, 2);
    }
}

TEST(Synth, Deterministic) {
    const Hamiltonian a = synth_hamiltonian(2, 1, 1, 7);
    const Hamiltonian b = synth_hamiltonian(2, 1, 1, 7);
    EXPECT_EQ(a.core_energy, b.core_energy);
    EXPECT_EQ(a.one_body, b.one_body);
    EXPECT_EQ(a.two_body.data(), b.two_body.data());
}

TEST(Synth, PositiveSemidefiniteAndValid) {
    for (int n = 2; n <= 6; ++n) {
        const Hamiltonian h = synth_hamiltonian(n, 1, 1, 100 + n);
        EXPECT_NO_THROW(validate(h));
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.two_body.supermatrix());
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(Validate, RejectsBrokenSymmetry) {
    Hamiltonian h = synth_hamiltonian(3, 1, 1, 5);
    h.one_body(0, 1) += 1e-6;
    EXPECT_THROW(validate(h), std::invalid_argument);
    h = synth_hamiltonian(3, 1, 1, 5);
    h.two_body(0, 1, 2, 2) += 1e-6;
    EXPECT_THROW(validate(h), std::invalid_argument);
    h = synth_hamiltonian(3, 1, 1, 5);
    h.n_alpha = 4;
    EXPECT_THROW(validate(h), std::invalid_argument);
    EXPECT_THROW(synth_hamiltonian(3, 4, 1, 5), std::invalid_argument);
}

TEST(Tensor4, SymmetrizeIsIdempotentProjection) {
    Tensor4 t(3);
    const Eigen::MatrixXd g = test::gaussian_matrix(9, 9, 4);
    t = Tensor4::from_supermatrix(g, 3);
    const Tensor4 s = symmetrize8(t);
    EXPECT_LT(symmetry_violation8(s), 1e-15);
    EXPECT_LT(symmetrize8(s).max_abs_diff(s), 1e-15);
    EXPECT_GT(symmetry_violation8(t), 1e-3);
}

TEST(EffectiveOperators, VanishingTwoBodyLimit) {
    Hamiltonian h = zero_hamiltonian(3, 1, 1);
    h.core_energy = 0.4;
    h.one_body = test::random_symmetric(3, 9);
    const EffectiveOperators e = effective_operators(h);
    EXPECT_NEAR(e.scalar_offset, 0.4 + h.one_body.trace(), 1e-15);
    EXPECT_LT((e.eff_one_body - h.one_body).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((e.kappa - h.one_body).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EffectiveOperators, TwoOrbitalLoopOracle) {
    const Hamiltonian h = synth_hamiltonian(2, 1, 1, 3);
    const EffectiveOperators e = effective_operators(h);
    const Tensor4 &v = h.two_body;
    double scalar = h.core_energy;
    for (int p = 0; p < 2; ++p) {
        scalar += h.one_body(p, p);
        for (int q = 0; q < 2; ++q) {
            scalar += 0.5 * v(p, p, q, q) - 0.25 * v(p, q, p, q);
        }
    }
    EXPECT_NEAR(e.scalar_offset, scalar, 1e-14);
    for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
            double f = h.one_body(p, q);
            double k = h.one_body(p, q);
            for (int r = 0; r < 2; ++r) {
                f += v(p, q, r, r) - 0.5 * v(p, r, q, r);
                k -= 0.5 * v(p, r, q, r);
            }
            EXPECT_NEAR(e.eff_one_body(p, q), f, 1e-14);
            EXPECT_NEAR(e.kappa(p, q), k, 1e-14);
        }
    }
}

TEST(EffectiveOperators, CoulombRelation) {
    const Hamiltonian h = synth_hamiltonian(4, 2, 2, 8);
    const EffectiveOperators e = effective_operators(h);
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
            double j = 0.0;
            for (int r = 0; r < 4; ++r) {
                j += h.two_body(p, q, r, r);
            }
            EXPECT_NEAR(e.eff_one_body(p, q) - e.kappa(p, q), j, 1e-13);
        }
    }
}

TEST(Interpolate, EndpointsAndMidpoint) {
    const Hamiltonian a = synth_hamiltonian(3, 1, 1, 1);
    const Hamiltonian b = synth_hamiltonian(3, 1, 1, 2);
    EXPECT_EQ(interpolate(a, b, 0.0).two_body.data(), a.two_body.data());
    EXPECT_EQ(interpolate(a, b, 1.0).two_body.data(), b.two_body.data());
    EXPECT_EQ(interpolate(a, b, 1.0).core_energy, b.core_energy);
    const Hamiltonian m = interpolate(a, b, 0.5);
    EXPECT_LT((m.one_body - 0.5 * (a.one_body + b.one_body)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(interpolate(a, synth_hamiltonian(4, 1, 1, 2), 0.5), std::invalid_argument);
}

TEST(Perturbation, ZeroStepLeavesHamiltonianUnchanged) {
    const Hamiltonian h = synth_hamiltonian(3, 1, 1, 4);
    const Hamiltonian r = apply_perturbation(h, Perturbation::random_two_body(3, 1), 0.0);
    EXPECT_EQ(r.two_body.data(), h.two_body.data());
    EXPECT_EQ(r.one_body, h.one_body);
}

TEST(Perturbation, UnitOneBodyShift) {
    const Hamiltonian h = synth_hamiltonian(3, 1, 1, 4);
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(3, 3);
    e(0, 0) = 1.0;
    const Hamiltonian r = apply_perturbation(h, Perturbation::from_one_body(e), 1e-3);
    EXPECT_NEAR(r.one_body(0, 0) - h.one_body(0, 0), 1e-3, 1e-15);
}

TEST(Perturbation, RandomDirectionsAreUnitNorm) {
    const Hamiltonian h = synth_hamiltonian(4, 2, 2, 4);
    const double eps = 1e-3;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Perturbation p1 = Perturbation::random_one_body(4, seed);
        const Hamiltonian r1 = apply_perturbation(h, p1, eps);
        EXPECT_NEAR(p1.one_body.cwiseProduct(r1.one_body - h.one_body).sum() / eps, 1.0, 1e-10);
        const Perturbation p2 = Perturbation::random_two_body(4, seed);
        const Hamiltonian r2 = apply_perturbation(h, p2, eps);
        Tensor4 d = r2.two_body;
        d -= h.two_body;
        EXPECT_NEAR(p2.two_body.dot(d) / eps, 1.0, 1e-10);
        EXPECT_LT(symmetry_violation8(p2.two_body), 1e-15);
    }
}

TEST(Perturbation, RejectsAsymmetricDirections) {
    const Hamiltonian h = synth_hamiltonian(3, 1, 1, 4);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 1) = 1.0;
    EXPECT_THROW(apply_perturbation(h, Perturbation::from_one_body(m), 1e-3), std::invalid_argument);
}

} // namespace
} // namespace xdf
