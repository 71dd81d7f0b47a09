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

#include "xdfgrad/lagrange.hpp"

#include <cmath>
#include <stdexcept>

#include "xdfgrad/pairs.hpp"

namespace xdf {

namespace {

bool below_guard(double denom, double range, double guard) { return std::abs(denom) < guard * range; }

double spectral_range(const Eigen::VectorXd &v) { return v.size() == 0 ? 0.0 : v.maxCoeff() - v.minCoeff(); }

// ∂E/∂λ_k = 2 g Σ_l λ_l ω_kl.
Eigen::VectorXd lambda_gradient(const XdfLeaf &leaf, const Eigen::MatrixXd &omega) {
    return 2.0 * leaf.g * (omega * leaf.lambda);
}

} // namespace

std::string to_string(Ablation a) {
    switch (a) {
    case Ablation::None:
        return "none";
    case Ablation::Eta0:
        return "eta0";
    case Ablation::EtaT:
        return "etat";
    case Ablation::Nu:
        return "nu";
    }
    return "none";
}

Ablation ablation_from_string(const std::string &s) {
    if (s == "none" || s.empty()) {
        return Ablation::None;
    }
    if (s == "eta0") {
        return Ablation::Eta0;
    }
    if (s == "etat") {
        return Ablation::EtaT;
    }
    if (s == "nu") {
        return Ablation::Nu;
    }
    throw std::invalid_argument("unknown ablation '" + s + "'");
}

Eigen::MatrixXd solve_eta(const XdfFactorization &f, const XdfCircuits &c, const Statevector &psi, int leaf_id,
                          const LagrangeOptions &opts, double *residual) {
    const int n = f.n;
    const GivensFabric &fab = c.fabric(leaf_id);
    const Eigen::VectorXd dedtheta = denergy_dtheta_all(psi, f, c, leaf_id);
    const Eigen::MatrixXd a = jacobian(fab).A;
    const Eigen::VectorXd x = pinv_solve(a, -dedtheta, opts.pinv_cutoff);
    const double res = (a * x + dedtheta).lpNorm<Eigen::Infinity>();
    if (residual != nullptr) {
        *residual = res;
    }
    if (res > opts.eta_residual_tol) {
        throw NumericalError("eta solve residual " + std::to_string(res) + " exceeds tolerance");
    }
    Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(n, n);
    const auto entries = lower_triangle_entries(n);
    for (std::size_t e = 0; e < entries.size(); ++e) {
        eta(entries[e].first, entries[e].second) = x(static_cast<Eigen::Index>(e));
    }
    return eta;
}

Eigen::MatrixXd solve_mu(const Eigen::MatrixXd &eta, const Eigen::MatrixXd &u, const Eigen::VectorXd &eps,
                         double guard) {
    const auto n = eps.size();
    const Eigen::MatrixXd et = u.transpose() * eta;
    const double range = spectral_range(eps);
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index l = 1; l < n; ++l) {
        for (Eigen::Index k = 0; k < l; ++k) {
            const double denom = eps(l) - eps(k);
            if (below_guard(denom, range, guard) || range == 0.0) {
                continue;
            }
            mu(l, k) = (et(l, k) - et(k, l)) / denom;
        }
    }
    return mu;
}

Eigen::MatrixXd solve_mu0(const Eigen::MatrixXd &eta0, const Eigen::MatrixXd &u0, const Eigen::VectorXd &f0,
                          double guard) {
    return solve_mu(eta0, u0, f0, guard);
}

Eigen::MatrixXd solve_mu_leaf(const Eigen::MatrixXd &eta_t, const Eigen::MatrixXd &u_t,
                              const Eigen::VectorXd &lambda_t, double guard) {
    return solve_mu(eta_t, u_t, lambda_t, guard);
}

Eigen::MatrixXd leaf_response(const XdfFactorization &f, const EigenbasisDensities &omegas,
                              const std::vector<Eigen::MatrixXd> &mus) {
    const int total = f.n_leaves();
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(total, total);
    for (int u = 0; u < f.retained; ++u) {
        const XdfLeaf &leaf = f.leaves[u];
        Eigen::MatrixXd inner = mus.at(u);
        inner.diagonal() += lambda_gradient(leaf, omegas.omega.at(u));
        const Eigen::MatrixXd w = leaf.U * inner * leaf.U.transpose();
        for (int up = 0; up < total; ++up) {
            r(up, u) = f.leaves[up].V.cwiseProduct(w).sum();
        }
    }
    return r;
}

Eigen::MatrixXd solve_nu(const XdfFactorization &f, const EigenbasisDensities &omegas,
                         const std::vector<Eigen::MatrixXd> &mus, double guard) {
    const int total = f.n_leaves();
    const Eigen::MatrixXd r = leaf_response(f, omegas, mus);
    Eigen::VectorXd g(total);
    for (int t = 0; t < total; ++t) {
        g(t) = f.leaves[t].g;
    }
    const double range = spectral_range(g);
    Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(total, total);
    for (int t = 1; t < total; ++t) {
        for (int tp = 0; tp < t; ++tp) {
            if (t >= f.retained && tp >= f.retained) {
                continue;
            }
            const double denom = g(tp) - g(t);
            if (range == 0.0 || below_guard(denom, range, guard)) {
                continue;
            }
            nu(t, tp) = (r(t, tp) - r(tp, t)) / denom;
        }
    }
    return nu;
}

Eigen::MatrixXd relaxed_gamma(const XdfFactorization &f, const EigenbasisDensities &omegas,
                              const Eigen::MatrixXd &mu0) {
    const int n = f.n;
    Eigen::MatrixXd inner = mu0;
    inner.diagonal() += omegas.omega0;
    return Eigen::MatrixXd::Identity(n, n) + f.U0 * inner * f.U0.transpose();
}

Tensor4 relaxed_Gamma(const XdfFactorization &f, const EigenbasisDensities &omegas, const Eigen::MatrixXd &nu,
                      const Eigen::MatrixXd &gamma_bar) {
    const int n = f.n;
    const int total = f.n_leaves();

    // Σ_t c_t V^t ⊗ V^t + Σ_{t>t'} ν_tt' V^t ⊗ V^t' as a supermatrix.
    Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(total, total);
    for (int t = 0; t < f.retained; ++t) {
        const XdfLeaf &leaf = f.leaves[t];
        coupling(t, t) = leaf.lambda.dot(omegas.omega.at(t) * leaf.lambda);
    }
    for (int t = 1; t < total; ++t) {
        for (int tp = 0; tp < t; ++tp) {
            coupling(t, tp) = nu(t, tp);
        }
    }
    Eigen::MatrixXd vmat(n * n, total);
    for (int t = 0; t < total; ++t) {
        vmat.col(t) = Eigen::Map<const Eigen::VectorXd>(f.leaves[t].V.data(), n * n);
    }
    Tensor4 gam = Tensor4::from_supermatrix(vmat * coupling * vmat.transpose(), n);

    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s < n; ++s) {
                    double v = 0.0;
                    const double dpq = p == q ? 1.0 : 0.0;
                    const double drs = r == s ? 1.0 : 0.0;
                    const double dpr = p == r ? 1.0 : 0.0;
                    const double dqs = q == s ? 1.0 : 0.0;
                    const double dps = p == s ? 1.0 : 0.0;
                    const double dqr = q == r ? 1.0 : 0.0;
                    v += 0.5 * dpq * drs - 0.125 * dpr * dqs - 0.125 * dps * dqr;
                    v += gamma_bar(p, q) * drs - 0.25 * gamma_bar(p, r) * dqs - 0.25 * gamma_bar(p, s) * dqr;
                    gam(p, q, r, s) += v;
                }
            }
        }
    }
    return gam;
}

LagrangeResult relaxed_rdms(const XdfFactorization &f, const Statevector &psi, const LagrangeOptions &opts,
                            std::optional<double> stationarity_residual) {
    const int n = f.n;
    const XdfCircuits c = build_circuits(f);
    LagrangeResult res;
    res.stationarity_residual = stationarity_residual.value_or(0.0);
    res.stationarity_warning = stationarity_residual && *stationarity_residual > opts.stationarity_tol;
    res.omegas = measure_densities(psi, f, c);
    res.energy = energy_from_densities(f, res.omegas);

    MultiplierSet &m = res.multipliers;
    double resid = 0.0;
    if (opts.ablation == Ablation::Eta0) {
        m.eta0 = Eigen::MatrixXd::Zero(n, n);
        m.mu0 = Eigen::MatrixXd::Zero(n, n);
    } else {
        m.eta0 = solve_eta(f, c, psi, kLeafOneBody, opts, &resid);
        m.max_eta_residual = std::max(m.max_eta_residual, resid);
        m.mu0 = solve_mu0(m.eta0, f.U0, f.F0, opts.degeneracy_guard);
    }
    for (int t = 0; t < f.retained; ++t) {
        if (opts.ablation == Ablation::EtaT || opts.ablation == Ablation::Nu) {
            m.eta.push_back(Eigen::MatrixXd::Zero(n, n));
            m.mu.push_back(Eigen::MatrixXd::Zero(n, n));
            continue;
        }
        m.eta.push_back(solve_eta(f, c, psi, t, opts, &resid));
        m.max_eta_residual = std::max(m.max_eta_residual, resid);
        m.mu.push_back(solve_mu_leaf(m.eta.back(), f.leaves[t].U, f.leaves[t].lambda, opts.degeneracy_guard));
    }
    if (opts.ablation == Ablation::Nu) {
        m.nu = Eigen::MatrixXd::Zero(f.n_leaves(), f.n_leaves());
    } else {
        m.nu = solve_nu(f, res.omegas, m.mu, opts.degeneracy_guard);
    }

    RelaxedRdms &r = res.rdms;
    r.gamma = relaxed_gamma(f, res.omegas, m.mu0);
    r.gamma_sym = symmetrize2(r.gamma);
    r.gamma_bar = r.gamma - Eigen::MatrixXd::Identity(n, n);
    r.Gamma = relaxed_Gamma(f, res.omegas, m.nu, r.gamma_bar);
    r.Gamma_sym = symmetrize8(r.Gamma);
    return res;
}

} // namespace xdf
