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
 * @file lagrange.hpp
 * Lagrange multipliers of the X-DF energy and the relaxed density matrices.
 *
 * The energy is made stationary with respect to the fabric angles (η), the
 * leaf eigenvectors U (μ), and the supermatrix eigenvectors V (ν). The
 * derivatives of the resulting Lagrangian with respect to h_pq and
 * (pq|rs) are the relaxed γ and Γ, which need only the measured ω.
 *
 * Multiplier storage is strictly lower triangular: η(p, k) and μ(k, k')
 * for p > k and k > k'; ν(t, t') for t > t' over all leaves.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xdfgrad/qsim.hpp"
#include "xdfgrad/xdf.hpp"

namespace xdf {

/// Multipliers zeroed for ablation studies. Nu also drops η^t/μ^t, which reach Γ̃ only through ν.
enum class Ablation { None, Eta0, EtaT, Nu };

std::string to_string(Ablation a);
Ablation ablation_from_string(const std::string &s);

struct LagrangeOptions {
    double degeneracy_guard = 1e-8;
    double pinv_cutoff = 1e-10;
    double eta_residual_tol = 1e-8;
    double stationarity_tol = 1e-8;
    Ablation ablation = Ablation::None;
};

struct MultiplierSet {
    Eigen::MatrixXd eta0;
    std::vector<Eigen::MatrixXd> eta;
    Eigen::MatrixXd mu0;
    std::vector<Eigen::MatrixXd> mu;
    Eigen::MatrixXd nu;
    double max_eta_residual = 0.0;
};

struct RelaxedRdms {
    Eigen::MatrixXd gamma;
    Tensor4 Gamma;
    Eigen::MatrixXd gamma_sym;
    Tensor4 Gamma_sym;
    Eigen::MatrixXd gamma_bar;
};

struct LagrangeResult {
    EigenbasisDensities omegas;
    MultiplierSet multipliers;
    RelaxedRdms rdms;
    double energy = 0.0;
    bool stationarity_warning = false;
    double stationarity_residual = 0.0;
};

/**
 * @brief Solve Σ_{p>k} η_pk A_{g,pk} = −dE/dθ_g for one leaf.
 *
 * Throws NumericalError if ‖Aη + dE/dθ‖∞ exceeds opts.eta_residual_tol.
 */
Eigen::MatrixXd solve_eta(const XdfFactorization &f, const XdfCircuits &c, const Statevector &psi, int leaf_id,
                          const LagrangeOptions &opts = {}, double *residual = nullptr);

/**
 * @brief μ_ll' = (η̃_ll' − η̃_l'l) / (ε_l − ε_l') for l > l', with η̃ = Uᵀη.
 *
 * Entries whose denominator is below guard × (ε_max − ε_min) are zero.
 */
Eigen::MatrixXd solve_mu(const Eigen::MatrixXd &eta, const Eigen::MatrixXd &u, const Eigen::VectorXd &eps,
                         double guard = 1e-8);

Eigen::MatrixXd solve_mu0(const Eigen::MatrixXd &eta0, const Eigen::MatrixXd &u0, const Eigen::VectorXd &f0,
                          double guard = 1e-8);
Eigen::MatrixXd solve_mu_leaf(const Eigen::MatrixXd &eta_t, const Eigen::MatrixXd &u_t,
                              const Eigen::VectorXd &lambda_t, double guard = 1e-8);

/// R(u', u) = Σ_pq V^{u'}_pq W^u_pq with W^u = U^u (diag(∂E/∂λ^u) + μ^u) U^uᵀ; zero for u ≥ retained.
Eigen::MatrixXd leaf_response(const XdfFactorization &f, const EigenbasisDensities &omegas,
                              const std::vector<Eigen::MatrixXd> &mus);

/// ν(t, t') = (R(t, t') − R(t', t)) / (g^{t'} − g^t) for t > t'.
Eigen::MatrixXd solve_nu(const XdfFactorization &f, const EigenbasisDensities &omegas,
                         const std::vector<Eigen::MatrixXd> &mus, double guard = 1e-8);

/// γ = I + U0 diag(ω0) U0ᵀ + U0 μ0 U0ᵀ.
Eigen::MatrixXd relaxed_gamma(const XdfFactorization &f, const EigenbasisDensities &omegas,
                              const Eigen::MatrixXd &mu0);

Tensor4 relaxed_Gamma(const XdfFactorization &f, const EigenbasisDensities &omegas, const Eigen::MatrixXd &nu,
                      const Eigen::MatrixXd &gamma_bar);

/**
 * @brief Full chain: measure ω, solve η → μ → ν, and assemble γ̃, Γ̃.
 *
 * `stationarity_residual` is the ansatz gradient norm of the state; values
 * above opts.stationarity_tol set the warning flag on the result.
 */
LagrangeResult relaxed_rdms(const XdfFactorization &f, const Statevector &psi, const LagrangeOptions &opts = {},
                            std::optional<double> stationarity_residual = std::nullopt);

} // namespace xdf
