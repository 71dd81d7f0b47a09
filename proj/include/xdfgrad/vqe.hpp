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
 * @file vqe.hpp
 * Number- and spin-conserving gate-fabric ansatz and its optimizer.
 *
 * A layer places blocks on the even pairs (0,1), (2,3), ... and then on
 * the odd pairs (1,2), (3,4), .... A block on (p, p+1) applies a
 * spin-locked Givens rotation followed by a pair exchange, one angle each.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xdfgrad/qsim.hpp"
#include "xdfgrad/xdf.hpp"

namespace xdf {

struct AnsatzConfig {
    int n_layers = 1;
    std::uint64_t seed = 0;
    double init_scale = 0.05;
};

/// Lower orbital of each block, in application order.
std::vector<int> ansatz_blocks(int n, int n_layers);

int ansatz_param_count(int n, const AnsatzConfig &cfg);

/**
 * @brief Parameter modification used by shift rules.
 *
 * For an orbital-rotation angle the alpha and beta gates receive separate
 * shifts; a pair-exchange angle uses `shift_alpha` only.
 */
struct ParamTweak {
    int index = -1;
    double shift_alpha = 0.0;
    double shift_beta = 0.0;
};

Statevector prepare_ansatz(int n, int n_alpha, int n_beta, const AnsatzConfig &cfg, const Eigen::VectorXd &params,
                           const ParamTweak &tweak = {});

/// Seeded starting parameters.
Eigen::VectorXd initial_params(int n, const AnsatzConfig &cfg);

/// Ĥ_XDF restricted to the (n_alpha, n_beta) sector, built from its statevector action.
struct SectorHamiltonian {
    int n = 0;
    int n_alpha = 0;
    int n_beta = 0;
    std::vector<std::uint32_t> basis;
    Eigen::MatrixXd matrix;

    [[nodiscard]] double expectation(const Statevector &psi) const;
};

SectorHamiltonian sector_hamiltonian(const XdfFactorization &f);

struct VQEResult {
    Eigen::VectorXd params;
    double energy = 0.0;
    double grad_norm = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct OptimizerOptions {
    int max_iterations = 4000;
    double armijo = 1e-4;
    /// Below this gradient ∞-norm, steps come from a finite-difference Hessian.
    double newton_below = 1e-5;
    double hessian_step = 1e-5;
};

/// E(φ) evaluated on the ansatz state.
double ansatz_energy(const SectorHamiltonian &h, const AnsatzConfig &cfg, const Eigen::VectorXd &params,
                     const ParamTweak &tweak = {});

/// dE/dφ by shift evaluations; every gate has generator spectrum {−1, 0, 0, 1}.
Eigen::VectorXd ansatz_gradient(const SectorHamiltonian &h, const AnsatzConfig &cfg, const Eigen::VectorXd &params);
Eigen::VectorXd ansatz_gradient(const XdfFactorization &f, const AnsatzConfig &cfg, const Eigen::VectorXd &params);

/// BFGS with backtracking line search on shift-rule gradients; stops when ‖∇E‖∞ ≤ tol.
VQEResult optimize(const XdfFactorization &f, const AnsatzConfig &cfg, double tol,
                   const std::optional<Eigen::VectorXd> &seed_params = std::nullopt,
                   const OptimizerOptions &opts = {});

/// Lowest sector eigenpair; the first amplitude above 1e-12 is made positive.
std::pair<Statevector, double> exact_ground_state(const XdfFactorization &f);

} // namespace xdf
