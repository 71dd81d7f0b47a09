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
 * @file qsim.hpp
 * Jordan-Wigner statevector simulator over 2N qubits.
 *
 * Basis states are bitmasks; bit j is the occupation of qubit j. Qubits
 * 0..N-1 hold alpha spin orbitals and N..2N-1 hold beta. The fermionic
 * ordering is (a_0†)^{n_0} (a_1†)^{n_1} ... |vac⟩.
 */
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xdfgrad/givens.hpp"
#include "xdfgrad/hamiltonian.hpp"
#include "xdfgrad/xdf.hpp"

namespace xdf {

constexpr int kMaxSpatialOrbitals = 8;

class Statevector {
  public:
    Statevector() = default;
    explicit Statevector(int n_spatial);

    [[nodiscard]] int n_spatial() const { return n_; }
    [[nodiscard]] int n_qubits() const { return 2 * n_; }
    [[nodiscard]] std::size_t size() const { return amp_.size(); }

    double &operator[](std::size_t i) { return amp_[i]; }
    double operator[](std::size_t i) const { return amp_[i]; }
    [[nodiscard]] const std::vector<double> &amplitudes() const { return amp_; }
    std::vector<double> &amplitudes() { return amp_; }

    [[nodiscard]] double norm() const;
    void normalize();
    [[nodiscard]] double dot(const Statevector &o) const;

    static int alpha_qubit(int p) { return p; }
    [[nodiscard]] int beta_qubit(int p) const { return n_ + p; }

  private:
    int n_ = 0;
    std::vector<double> amp_;
};

Statevector hf_reference(int n, int n_alpha, int n_beta);

/// Bitmasks of the (n_alpha, n_beta) sector in ascending order.
std::vector<std::uint32_t> sector_basis(int n, int n_alpha, int n_beta);

/// Seeded random normalized state supported on one sector.
Statevector random_sector_state(int n, int n_alpha, int n_beta, std::uint64_t seed);

/// Norm of the component outside the given sector.
double leakage(const Statevector &psi, int n_alpha, int n_beta);

/// exp(θ(a_q†a_p − a_p†a_q)) on spin orbitals p < q.
void apply_givens(Statevector &psi, int p, int q, double theta);

/// Derivative of apply_givens with respect to θ, applied in place.
void apply_givens_derivative(Statevector &psi, int p, int q, double theta);

/// Spin-locked Givens on spatial orbitals p < q (alpha and beta registers).
void apply_spin_givens(Statevector &psi, int p, int q, double theta_alpha, double theta_beta);

/// exp(φ(P − P†)) with P moving a spin-paired electron pair from p to q.
void apply_pair_exchange(Statevector &psi, int p, int q, double phi);
void apply_pair_exchange_derivative(Statevector &psi, int p, int q, double phi);

/**
 * @brief Modification of one gate of a fabric.
 *
 * The shifts are added to the fabric angle of `gate` in the alpha and beta
 * registers. With `derivative_spin` set to 0 (alpha) or 1 (beta), that
 * register's gate is replaced by its derivative with respect to the fabric
 * angle.
 */
struct GateTweak {
    int gate = -1;
    double shift_alpha = 0.0;
    double shift_beta = 0.0;
    int derivative_spin = -1;
};

/// Apply Ĝ with single-particle image reconstruct(fabric): amplitudes c -> O c.
Statevector apply_orbital_rotation(const Statevector &psi, const GivensFabric &fabric);

/// Apply the measurement-frame rotation with single-particle image Oᵀ.
Statevector rotate_to_frame(const Statevector &psi, const GivensFabric &fabric, const GateTweak &tweak = {});

struct EigenbasisDensities {
    Eigen::VectorXd omega0;
    std::vector<Eigen::MatrixXd> omega;
};

/// ω^∅_k = −½⟨Z_k + Z_k̄⟩ in the frame of fabric0.
Eigen::VectorXd measure_omega0(const Statevector &psi, const GivensFabric &fabric0);

/// ω^t_kl = ⅛⟨Z_kZ_l − δ_kl + Z_kZ_l̄ + Z_k̄Z_l + Z_k̄Z_l̄ − δ_kl⟩ in the frame of fabric_t.
Eigen::MatrixXd measure_omega_leaf(const Statevector &psi, const GivensFabric &fabric_t);

/// Fabrics for U^∅ and the retained leaves of a factorization.
struct XdfCircuits {
    GivensFabric fabric0;
    std::vector<GivensFabric> leaf_fabrics;
    std::vector<double> observable0;
    std::vector<std::vector<double>> leaf_observables;

    [[nodiscard]] const GivensFabric &fabric(int leaf_id) const;
    [[nodiscard]] const std::vector<double> &observable(int leaf_id) const;
};

XdfCircuits build_circuits(const XdfFactorization &f);

EigenbasisDensities measure_densities(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c);

double energy_from_densities(const XdfFactorization &f, const EigenbasisDensities &d);

double energy(const Statevector &psi, const XdfFactorization &f);
double energy(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c);

/// Leaf identifier: -1 is the one-body leaf ∅, t >= 0 a retained two-body leaf.
constexpr int kLeafOneBody = -1;

/// Diagonal of the frame observable of a leaf: Σ F0_k D_k or Σ Z_kl ω_kl as a function of bitmask.
std::vector<double> frame_observable(const XdfFactorization &f, int leaf_id);

/// Energy contribution of one leaf with an optional gate tweak.
double leaf_energy(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c, int leaf_id,
                   const GateTweak &tweak = {});

/**
 * @brief dE/dθ_g by shift evaluations of the unlocked alpha/beta gates.
 *
 * Each single-register Givens has generator spectrum {−1, 0, 0, 1}, so its
 * partial derivative uses the four-term rule
 * f' = (½ − 1/√2)[f(θ+π/2) − f(θ−π/2)] + [f(θ+π/4) − f(θ−π/4)].
 */
double denergy_dtheta_shift(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c, int leaf_id,
                            int g);

/// ½[F(θ+π/2, θ) − F(θ−π/2, θ) + F(θ, θ+π/2) − F(θ, θ−π/2)] with the registers unlocked.
double denergy_dtheta_four_shift(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c,
                                 int leaf_id, int g);

/// dE/dθ_g by differentiating the gate in the statevector.
double denergy_dtheta_direct(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c, int leaf_id,
                             int g);

/// All angle derivatives of one leaf, by the shift rule.
Eigen::VectorXd denergy_dtheta_all(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c,
                                   int leaf_id);

/// Ê_pq |ψ⟩ with Ê_pq = a_pα†a_qα + a_pβ†a_qβ.
Statevector apply_excitation(const Statevector &psi, int p, int q);

struct MeasuredRdms {
    Eigen::MatrixXd gamma;
    Tensor4 Gamma;
};

/// γ_pq = ⟨Ê_pq⟩ and Γ_pqrs = ½⟨Ê_pqÊ_rs − δ_qr Ê_ps⟩.
MeasuredRdms measure_rdms_direct(const Statevector &psi);

/// Ĥ_XDF |ψ⟩ assembled leaf by leaf from rotated diagonal observables.
Statevector apply_xdf_hamiltonian(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c);

} // namespace xdf
