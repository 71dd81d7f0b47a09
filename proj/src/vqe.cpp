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

#include "xdfgrad/vqe.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <stdexcept>

namespace xdf {

namespace {

// Exact derivative for a generator with spectrum {−1, 0, 0, 1}.
template <class F> double four_term_rule(F &&at) {
    return (0.5 - M_SQRT1_2) * (at(M_PI_2) - at(-M_PI_2)) + (at(M_PI_4) - at(-M_PI_4));
}

constexpr std::size_t kDenseSectorLimit = 2500;

} // namespace

std::vector<int> ansatz_blocks(int n, int n_layers) {
    if (n_layers < 0) {
        throw std::invalid_argument("layer count must be non-negative");
    }
    std::vector<int> out;
    for (int layer = 0; layer < n_layers; ++layer) {
        for (int start = 0; start < 2; ++start) {
            for (int p = start; p + 1 < n; p += 2) {
                out.push_back(p);
            }
        }
    }
    return out;
}

int ansatz_param_count(int n, const AnsatzConfig &cfg) {
    return 2 * static_cast<int>(ansatz_blocks(n, cfg.n_layers).size());
}

Statevector prepare_ansatz(int n, int n_alpha, int n_beta, const AnsatzConfig &cfg, const Eigen::VectorXd &params,
                           const ParamTweak &tweak) {
    const std::vector<int> blocks = ansatz_blocks(n, cfg.n_layers);
    if (params.size() != 2 * static_cast<Eigen::Index>(blocks.size())) {
        throw std::invalid_argument("parameter vector length does not match the ansatz");
    }
    Statevector psi = hf_reference(n, n_alpha, n_beta);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const int p = blocks[b];
        const int ir = static_cast<int>(2 * b);
        const int ip = ir + 1;
        const double theta = params(ir);
        const double ta = theta + (tweak.index == ir ? tweak.shift_alpha : 0.0);
        const double tb = theta + (tweak.index == ir ? tweak.shift_beta : 0.0);
        apply_spin_givens(psi, p, p + 1, ta, tb);
        const double phi = params(ip) + (tweak.index == ip ? tweak.shift_alpha : 0.0);
        apply_pair_exchange(psi, p, p + 1, phi);
    }
    return psi;
}

Eigen::VectorXd initial_params(int n, const AnsatzConfig &cfg) {
    const int m = ansatz_param_count(n, cfg);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(-cfg.init_scale, cfg.init_scale);
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) {
        x(i) = uni(rng);
    }
    return x;
}

double SectorHamiltonian::expectation(const Statevector &psi) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = psi[basis[i]];
    }
    return v.dot(matrix * v);
}

SectorHamiltonian sector_hamiltonian(const XdfFactorization &f) {
    SectorHamiltonian h;
    h.n = f.n;
    h.n_alpha = f.n_alpha;
    h.n_beta = f.n_beta;
    h.basis = sector_basis(f.n, f.n_alpha, f.n_beta);
    const auto dim = static_cast<Eigen::Index>(h.basis.size());
    const XdfCircuits c = build_circuits(f);
    h.matrix.resize(dim, dim);
    Statevector e(f.n);
    for (Eigen::Index j = 0; j < dim; ++j) {
        e[h.basis[j]] = 1.0;
        const Statevector col = apply_xdf_hamiltonian(e, f, c);
        e[h.basis[j]] = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            h.matrix(i, j) = col[h.basis[i]];
        }
    }
    h.matrix = symmetrize2(h.matrix);
    return h;
}

double ansatz_energy(const SectorHamiltonian &h, const AnsatzConfig &cfg, const Eigen::VectorXd &params,
                     const ParamTweak &tweak) {
    return h.expectation(prepare_ansatz(h.n, h.n_alpha, h.n_beta, cfg, params, tweak));
}

Eigen::VectorXd ansatz_gradient(const SectorHamiltonian &h, const AnsatzConfig &cfg, const Eigen::VectorXd &params) {
    const auto m = params.size();
    Eigen::VectorXd grad(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int idx = static_cast<int>(i);
        if (i % 2 == 0) {
            const double da = four_term_rule(
                [&](double d) { return ansatz_energy(h, cfg, params, ParamTweak{idx, d, 0.0}); });
            const double db = four_term_rule(
                [&](double d) { return ansatz_energy(h, cfg, params, ParamTweak{idx, 0.0, d}); });
            grad(i) = da + db;
        } else {
            grad(i) = four_term_rule([&](double d) { return ansatz_energy(h, cfg, params, ParamTweak{idx, d, 0.0}); });
        }
    }
    return grad;
}

Eigen::VectorXd ansatz_gradient(const XdfFactorization &f, const AnsatzConfig &cfg, const Eigen::VectorXd &params) {
    return ansatz_gradient(sector_hamiltonian(f), cfg, params);
}

namespace {

// Saddle-free Newton direction −Σ v vᵀ g / |λ| over the resolved spectrum.
Eigen::VectorXd newton_direction(const SectorHamiltonian &h, const AnsatzConfig &cfg, const Eigen::VectorXd &x,
                                 const Eigen::VectorXd &g, double step) {
    const auto m = x.size();
    Eigen::MatrixXd hess(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp(i) += step;
        xm(i) -= step;
        hess.col(i) = (ansatz_gradient(h, cfg, xp) - ansatz_gradient(h, cfg, xm)) / (2.0 * step);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize2(hess));
    const Eigen::VectorXd lam = es.eigenvalues();
    const double cut = 1e-6 * lam.cwiseAbs().maxCoeff();
    Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        if (std::abs(lam(k)) > cut) {
            const Eigen::VectorXd v = es.eigenvectors().col(k);
            p -= v * (v.dot(g) / std::abs(lam(k)));
        }
    }
    return p;
}

} // namespace

VQEResult optimize(const XdfFactorization &f, const AnsatzConfig &cfg, double tol,
                   const std::optional<Eigen::VectorXd> &seed_params, const OptimizerOptions &opts) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("optimizer tolerance must be positive");
    }
    const SectorHamiltonian h = sector_hamiltonian(f);
    Eigen::VectorXd x = seed_params ? *seed_params : initial_params(f.n, cfg);
    if (x.size() != ansatz_param_count(f.n, cfg)) {
        throw std::invalid_argument("seed parameter length does not match the ansatz");
    }
    const auto m = x.size();
    VQEResult res;
    double e = ansatz_energy(h, cfg, x);
    Eigen::VectorXd g = ansatz_gradient(h, cfg, x);
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(m, m);
    bool fresh = true;

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (m == 0 || g.lpNorm<Eigen::Infinity>() <= tol) {
            break;
        }
        Eigen::VectorXd p = -hinv * g;
        if (g.lpNorm<Eigen::Infinity>() <= opts.newton_below) {
            const Eigen::VectorXd pn = newton_direction(h, cfg, x, g, opts.hessian_step);
            if (g.dot(pn) < 0.0) {
                p = pn;
            }
        }
        if (g.dot(p) >= 0.0) {
            hinv.setIdentity();
            fresh = true;
            p = -g;
        }
        const double pmax = p.lpNorm<Eigen::Infinity>();
        if (pmax > 1.0) {
            p /= pmax;
        }
        const double slope = g.dot(p);
        const double gnorm = g.lpNorm<Eigen::Infinity>();
        double alpha = 1.0;
        bool accepted = false;
        Eigen::VectorXd x_new;
        Eigen::VectorXd g_new;
        double e_new = e;
        for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
            x_new = x + alpha * p;
            e_new = ansatz_energy(h, cfg, x_new);
            if (e_new <= e + opts.armijo * alpha * slope) {
                g_new = ansatz_gradient(h, cfg, x_new);
                accepted = true;
                break;
            }
            if (e_new - e <= 1e-13 * (1.0 + std::abs(e))) {
                g_new = ansatz_gradient(h, cfg, x_new);
                if (g_new.lpNorm<Eigen::Infinity>() < gnorm) {
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) {
            if (fresh) {
                break;
            }
            hinv.setIdentity();
            fresh = true;
            continue;
        }
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-14 * s.norm() * y.norm()) {
            if (fresh) {
                hinv *= sy / y.dot(y);
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(m, m) - rho * s * y.transpose();
            hinv = left * hinv * left.transpose() + rho * s * s.transpose();
            fresh = false;
        }
        x = x_new;
        e = e_new;
        g = g_new;
    }

    res.params = x;
    res.energy = e;
    res.grad_norm = m == 0 ? 0.0 : g.lpNorm<Eigen::Infinity>();
    res.converged = res.grad_norm <= tol;
    res.iterations = it;
    return res;
}

namespace {

// Lowest eigenpair by Lanczos with full reorthogonalization.
std::pair<Eigen::VectorXd, double> lanczos_lowest(const Eigen::MatrixXd &a) {
    const Eigen::Index dim = a.rows();
    const Eigen::Index kmax = std::min<Eigen::Index>(dim, 300);
    Eigen::MatrixXd q(dim, kmax);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(dim).normalized();
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXd best;
    double best_e = 0.0;
    for (Eigen::Index k = 0; k < kmax; ++k) {
        q.col(k) = v;
        Eigen::VectorXd w = a * v;
        alpha.push_back(v.dot(w));
        w -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * w);
        w -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * w);
        const double b = w.norm();
        const Eigen::Index size = k + 1;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
        for (Eigen::Index i = 0; i < size; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < size) {
                t(i, i + 1) = beta[i];
                t(i + 1, i) = beta[i];
            }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        best = q.leftCols(size) * es.eigenvectors().col(0);
        best_e = es.eigenvalues()(0);
        const double resid = std::abs(b * es.eigenvectors()(size - 1, 0));
        if (b < 1e-14 || resid < 1e-13) {
            break;
        }
        beta.push_back(b);
        v = w / b;
    }
    return {best.normalized(), best_e};
}

} // namespace

std::pair<Statevector, double> exact_ground_state(const XdfFactorization &f) {
    const SectorHamiltonian h = sector_hamiltonian(f);
    Eigen::VectorXd v;
    if (h.basis.size() <= kDenseSectorLimit) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
        if (es.info() != Eigen::Success) {
            throw NumericalError("sector eigensolver failed");
        }
        v = es.eigenvectors().col(0);
    } else {
        v = lanczos_lowest(h.matrix).first;
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            if (v(i) < 0.0) {
                v = -v;
            }
            break;
        }
    }
    Statevector psi(f.n);
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
        psi[h.basis[i]] = v(static_cast<Eigen::Index>(i));
    }
    psi.normalize();
    return {psi, energy(psi, f)};
}

} // namespace xdf
