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

#include "xdfgrad/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace xdf {

double dense_energy(const Hamiltonian &h, const Eigen::MatrixXd &gamma, const Tensor4 &Gamma) {
    if (gamma.rows() != h.n_orbitals || Gamma.dim() != h.n_orbitals) {
        throw std::invalid_argument("density matrix shape does not match the Hamiltonian");
    }
    return h.core_energy + h.one_body.cwiseProduct(gamma).sum() + h.two_body.dot(Gamma);
}

double five_point_stencil(const std::function<double(double)> &f, double h) {
    return (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
}

TruncationPolicy RegimeSpec::effective_policy() const {
    return xdf == XdfRegime::Exact ? TruncationPolicy::keep_all() : policy;
}

std::string RegimeSpec::name() const {
    std::string out = xdf == XdfRegime::Exact ? "exact-xdf" : "truncated-xdf";
    out += vqe == VqeRegime::Converged ? "/converged-vqe" : "/approximate-vqe";
    out += "(L=" + std::to_string(ansatz.n_layers) + ")";
    return out;
}

PipelinePoint run_pipeline(const Hamiltonian &h, const RegimeSpec &spec,
                           const std::optional<Eigen::VectorXd> &seed_params) {
    PipelinePoint pt;
    pt.factorization = factorize(h, spec.effective_policy());
    pt.vqe = optimize(pt.factorization, spec.ansatz, spec.vqe_tol, seed_params);
    pt.state = prepare_ansatz(h.n_orbitals, h.n_alpha, h.n_beta, spec.ansatz, pt.vqe.params);
    return pt;
}

double analytic_derivative(const RelaxedRdms &rdms, const Perturbation &p) {
    if (p.kind == Perturbation::Kind::OneBody) {
        return rdms.gamma_sym.cwiseProduct(p.one_body).sum();
    }
    return rdms.Gamma_sym.dot(p.two_body);
}

void check_leaf_tracking(const XdfFactorization &base, const XdfFactorization &shifted) {
    if (base.retained != shifted.retained) {
        throw LeafTrackingError("retained leaf count changed across the stencil");
    }
    std::set<int> images;
    for (int t = 0; t < base.retained; ++t) {
        int best = -1;
        double best_overlap = -1.0;
        for (int u = 0; u < shifted.n_leaves(); ++u) {
            const double ov = std::abs(base.leaves[t].V.cwiseProduct(shifted.leaves[u].V).sum());
            if (ov > best_overlap) {
                best_overlap = ov;
                best = u;
            }
        }
        if (best >= shifted.retained || best_overlap < 0.5 || !images.insert(best).second) {
            throw LeafTrackingError("retained leaf set changed across the stencil");
        }
    }
}

double fd_energy_derivative(const Hamiltonian &h, const Perturbation &p, const RegimeSpec &spec,
                            const PipelinePoint &base, double step) {
    auto at = [&](double eps) {
        const PipelinePoint pt = run_pipeline(apply_perturbation(h, p, eps), spec, base.vqe.params);
        check_leaf_tracking(base.factorization, pt.factorization);
        if (!pt.vqe.converged) {
            throw ConvergenceError("VQE did not converge at a stencil point");
        }
        return pt.vqe.energy;
    };
    return five_point_stencil(at, step);
}

double RegimeReport::max_abs_diff(const std::string &ablation) const {
    double m = 0.0;
    for (const auto &r : reports) {
        if (r.ablation == ablation) {
            m = std::max(m, r.abs_diff);
        }
    }
    return m;
}

bool SuiteResult::pass() const {
    for (const auto &r : regimes) {
        bool any = false;
        for (const auto &d : r.reports) {
            if (d.ablation != "none") {
                continue;
            }
            any = true;
            if (!(d.abs_diff < tolerance)) {
                return false;
            }
        }
        if (!any) {
            return false;
        }
    }
    return !regimes.empty();
}

double SuiteResult::max_abs_diff(const std::string &ablation) const {
    double m = 0.0;
    for (const auto &r : regimes) {
        m = std::max(m, r.max_abs_diff(ablation));
    }
    return m;
}

SuiteResult run_regime_suite(const Hamiltonian &h, const std::vector<RegimeSpec> &specs,
                             const RegimeSuiteOptions &opts) {
    const int n = h.n_orbitals;
    std::vector<Perturbation> perts;
    for (int i = 0; i < opts.n_one_body; ++i) {
        perts.push_back(Perturbation::random_one_body(n, opts.seed * 1000 + static_cast<std::uint64_t>(i)));
    }
    for (int i = 0; i < opts.n_two_body; ++i) {
        perts.push_back(Perturbation::random_two_body(n, opts.seed * 1000 + 500 + static_cast<std::uint64_t>(i)));
    }

    SuiteResult suite;
    suite.tolerance = opts.tolerance;
    for (const RegimeSpec &spec : specs) {
        const PipelinePoint base = run_pipeline(h, spec);
        if (!base.vqe.converged) {
            throw ConvergenceError("VQE did not converge for regime " + spec.name());
        }
        RegimeReport rep;
        rep.regime = spec.name();
        rep.retained = base.factorization.retained;
        rep.total_leaves = base.factorization.n_leaves();
        rep.n_layers = spec.ansatz.n_layers;
        rep.vqe_energy = base.vqe.energy;
        rep.exact_energy = exact_ground_state(base.factorization).second;
        rep.vqe_grad_norm = base.vqe.grad_norm;

        std::vector<LagrangeResult> lag;
        for (Ablation a : opts.ablations) {
            LagrangeOptions lo = opts.lagrange;
            lo.ablation = a;
            lag.push_back(relaxed_rdms(base.factorization, base.state, lo, base.vqe.grad_norm));
            rep.stationarity_warning = rep.stationarity_warning || lag.back().stationarity_warning;
        }
        for (const Perturbation &p : perts) {
            const double numerical = fd_energy_derivative(h, p, spec, base, opts.step);
            for (std::size_t i = 0; i < opts.ablations.size(); ++i) {
                DerivativeReport d;
                d.regime = rep.regime;
                d.perturbation_id = p.id;
                d.kind = p.kind == Perturbation::Kind::OneBody ? "one_body" : "two_body";
                d.ablation = to_string(opts.ablations[i]);
                d.analytic = analytic_derivative(lag[i].rdms, p);
                d.numerical = numerical;
                d.abs_diff = std::abs(d.analytic - d.numerical);
                d.step = opts.step;
                rep.reports.push_back(d);
            }
        }
        suite.regimes.push_back(std::move(rep));
    }
    return suite;
}

std::string format_suite_table(const SuiteResult &suite) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-44s %-20s %-9s %-6s %20s %20s %12s\n", "regime", "perturbation", "kind",
                  "ablate", "analytic", "numerical", "abs diff");
    out << buf;
    for (const auto &r : suite.regimes) {
        for (const auto &d : r.reports) {
            std::snprintf(buf, sizeof(buf), "%-44s %-20s %-9s %-6s %20.12f %20.12f %12.3e\n", d.regime.c_str(),
                          d.perturbation_id.c_str(), d.kind.c_str(), d.ablation.c_str(), d.analytic, d.numerical,
                          d.abs_diff);
            out << buf;
        }
    }
    return out.str();
}

PathTrace verlet_path(const Hamiltonian &a, const Hamiltonian &b, int n_steps, double dt, double mass,
                      const PathOptions &opts) {
    if (n_steps < 0 || !(dt > 0.0) || !(mass > 0.0)) {
        throw std::invalid_argument("verlet_path requires n_steps >= 0, dt > 0, mass > 0");
    }
    const Hamiltonian delta = difference(b, a);
    LagrangeOptions lo = opts.lagrange;
    lo.ablation = opts.ablation;

    std::optional<Eigen::VectorXd> seed;
    auto evaluate = [&](double s, double &potential, double &force) {
        const Hamiltonian hs = interpolate(a, b, s);
        const PipelinePoint pt = run_pipeline(hs, opts.regime, seed);
        if (!pt.vqe.converged) {
            throw ConvergenceError("VQE did not converge along the path");
        }
        seed = pt.vqe.params;
        const LagrangeResult lag = relaxed_rdms(pt.factorization, pt.state, lo, pt.vqe.grad_norm);
        potential = pt.vqe.energy;
        force = -(delta.core_energy + delta.one_body.cwiseProduct(lag.rdms.gamma_sym).sum() +
                  delta.two_body.dot(lag.rdms.Gamma_sym));
    };

    PathTrace trace;
    double s = opts.s0;
    double v = opts.v0;
    double pot = 0.0;
    double force = 0.0;
    evaluate(s, pot, force);
    for (int i = 0;; ++i) {
        PathStep st;
        st.step = i;
        st.s = s;
        st.velocity = v;
        st.kinetic = 0.5 * mass * v * v;
        st.potential = pot;
        st.total = st.kinetic + st.potential;
        st.force = force;
        trace.steps.push_back(st);
        if (i == n_steps) {
            break;
        }
        const double acc = force / mass;
        s += v * dt + 0.5 * acc * dt * dt;
        double force_new = 0.0;
        evaluate(s, pot, force_new);
        v += 0.5 * (acc + force_new / mass) * dt;
        force = force_new;
    }

    const double e0 = trace.steps.front().total;
    double mean_i = 0.0;
    double mean_e = 0.0;
    for (const auto &st : trace.steps) {
        trace.drift = std::max(trace.drift, std::abs(st.total - e0));
        mean_i += st.step;
        mean_e += st.total;
    }
    const double cnt = static_cast<double>(trace.steps.size());
    mean_i /= cnt;
    mean_e /= cnt;
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto &st : trace.steps) {
        sxy += (st.step - mean_i) * (st.total - mean_e);
        sxx += (st.step - mean_i) * (st.step - mean_i);
    }
    trace.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    trace.relative_drift = e0 != 0.0 ? trace.drift / std::abs(e0) : trace.drift;
    return trace;
}

Eigen::MatrixXd project_onto_eigenbasis(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize2(a));
    const Eigen::MatrixXd &u = es.eigenvectors();
    const Eigen::VectorXd diag = (u.transpose() * b * u).diagonal();
    return u * diag.asDiagonal() * u.transpose();
}

ProjectionReport projection_lossiness_demo(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b,
                                           const Eigen::MatrixXd &c) {
    if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols() || c.rows() != a.rows() ||
        c.cols() != a.cols()) {
        throw std::invalid_argument("projection demo requires same-size square matrices");
    }
    const Eigen::MatrixXd bt = project_onto_eigenbasis(a, b);
    ProjectionReport rep;
    rep.contraction_a = a.cwiseProduct(b).sum();
    rep.contraction_a_projected = a.cwiseProduct(bt).sum();
    rep.contraction_c = c.cwiseProduct(b).sum();
    rep.contraction_c_projected = c.cwiseProduct(bt).sum();
    rep.commutator_norm = (a * c - c * a).norm();
    rep.idempotency_error = (project_onto_eigenbasis(a, bt) - bt).cwiseAbs().maxCoeff();
    return rep;
}

} // namespace xdf
