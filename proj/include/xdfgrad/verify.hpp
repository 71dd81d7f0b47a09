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
 * @file verify.hpp
 * End-to-end checks: dense-contraction energies, finite differences in
 * integral space, regime suites, ablations, and model dynamics along an
 * interpolated Hamiltonian path.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xdfgrad/lagrange.hpp"
#include "xdfgrad/vqe.hpp"

namespace xdf {

/// Raised when the retained leaf set differs between stencil points.
class LeafTrackingError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// E_c + Σ h∘γ + Σ (pq|rs)∘Γ.
double dense_energy(const Hamiltonian &h, const Eigen::MatrixXd &gamma, const Tensor4 &Gamma);

/// [f(−2h) − 8f(−h) + 8f(h) − f(2h)] / (12h).
double five_point_stencil(const std::function<double(double)> &f, double h);

enum class XdfRegime { Exact, Truncated };
enum class VqeRegime { Converged, Approximate };

struct RegimeSpec {
    XdfRegime xdf = XdfRegime::Exact;
    TruncationPolicy policy = TruncationPolicy::keep_all();
    VqeRegime vqe = VqeRegime::Converged;
    AnsatzConfig ansatz;
    double vqe_tol = 1e-10;

    [[nodiscard]] TruncationPolicy effective_policy() const;
    [[nodiscard]] std::string name() const;
};

struct PipelinePoint {
    XdfFactorization factorization;
    VQEResult vqe;
    Statevector state;
};

/// Factorize, then optimize the ansatz (from seed_params when given).
PipelinePoint run_pipeline(const Hamiltonian &h, const RegimeSpec &spec,
                           const std::optional<Eigen::VectorXd> &seed_params = std::nullopt);

/// Analytic dE/dε along P: Σ γ̃∘P or Σ Γ̃∘P.
double analytic_derivative(const RelaxedRdms &rdms, const Perturbation &p);

struct DerivativeReport {
    std::string regime;
    std::string perturbation_id;
    std::string kind;
    std::string ablation = "none";
    double analytic = 0.0;
    double numerical = 0.0;
    double abs_diff = 0.0;
    double step = 1e-3;
    std::string stencil = "5-point central";
};

/**
 * @brief 5-point finite difference of ε ↦ E(H + εP) through the full pipeline.
 *
 * Every point re-factorizes and re-optimizes from the base parameters, and
 * must retain the same leaves as the base (matched by |⟨V, V'⟩|).
 */
double fd_energy_derivative(const Hamiltonian &h, const Perturbation &p, const RegimeSpec &spec,
                            const PipelinePoint &base, double step = 1e-3);

/// Map each retained leaf of `base` to its best-overlap leaf in `shifted`; throws LeafTrackingError on mismatch.
void check_leaf_tracking(const XdfFactorization &base, const XdfFactorization &shifted);

struct RegimeSuiteOptions {
    int n_one_body = 3;
    int n_two_body = 3;
    std::uint64_t seed = 1;
    double step = 1e-3;
    double tolerance = 1e-6;
    std::vector<Ablation> ablations{Ablation::None};
    LagrangeOptions lagrange;
};

struct RegimeReport {
    std::string regime;
    int retained = 0;
    int total_leaves = 0;
    int n_layers = 0;
    double vqe_energy = 0.0;
    double exact_energy = 0.0;
    double vqe_grad_norm = 0.0;
    bool stationarity_warning = false;
    std::vector<DerivativeReport> reports;

    /// Largest |analytic − numerical| for one ablation setting.
    [[nodiscard]] double max_abs_diff(const std::string &ablation = "none") const;
};

struct SuiteResult {
    std::vector<RegimeReport> regimes;
    double tolerance = 1e-6;

    [[nodiscard]] bool pass() const;
    [[nodiscard]] double max_abs_diff(const std::string &ablation = "none") const;
};

SuiteResult run_regime_suite(const Hamiltonian &h, const std::vector<RegimeSpec> &specs,
                             const RegimeSuiteOptions &opts = {});

/// Plain-text table of a suite, one row per report.
std::string format_suite_table(const SuiteResult &suite);

struct PathStep {
    int step = 0;
    double s = 0.0;
    double velocity = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
    double force = 0.0;
};

struct PathTrace {
    std::vector<PathStep> steps;
    double drift = 0.0;
    double relative_drift = 0.0;
    double slope = 0.0;
};

struct PathOptions {
    double s0 = 0.5;
    double v0 = 0.0;
    RegimeSpec regime;
    Ablation ablation = Ablation::None;
    LagrangeOptions lagrange;
};

/// Velocity Verlet for a particle on s with potential E(interpolate(H_A, H_B, s)); s may leave [0, 1].
PathTrace verlet_path(const Hamiltonian &a, const Hamiltonian &b, int n_steps, double dt, double mass,
                      const PathOptions &opts = {});

struct ProjectionReport {
    double contraction_a = 0.0;
    double contraction_a_projected = 0.0;
    double contraction_c = 0.0;
    double contraction_c_projected = 0.0;
    double commutator_norm = 0.0;
    double idempotency_error = 0.0;

    [[nodiscard]] double gap_a() const { return std::abs(contraction_a - contraction_a_projected); }
    [[nodiscard]] double gap_c() const { return std::abs(contraction_c - contraction_c_projected); }
};

/// B̃ = U diag(diag(UᵀBU)) Uᵀ with U the eigenvectors of A.
Eigen::MatrixXd project_onto_eigenbasis(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b);

ProjectionReport projection_lossiness_demo(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b,
                                           const Eigen::MatrixXd &c);

} // namespace xdf
