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

#include "xdfgrad/serialize.hpp"

#include <cmath>

namespace xdf {

using nlohmann::json;

json to_json(const Eigen::MatrixXd &m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            data.push_back(m(i, j));
        }
    }
    return {{"shape", {m.rows(), m.cols()}}, {"data", data}};
}

json to_json(const Eigen::VectorXd &v) {
    json data = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        data.push_back(v(i));
    }
    return {{"shape", {v.size()}}, {"data", data}};
}

json to_json(const Tensor4 &t) {
    const int n = t.dim();
    return {{"shape", {n, n, n, n}}, {"data", t.data()}};
}

json to_json(const GivensFabric &f) {
    json gates = json::array();
    for (int g = 0; g < f.size(); ++g) {
        gates.push_back({{"pivot", {f.pivots[g].p, f.pivots[g].q}}, {"angle", f.angles[g]}});
    }
    return {{"n", f.n}, {"gates", gates}};
}

json to_json(const TruncationPolicy &p) {
    if (p.mode == TruncationPolicy::Mode::Count) {
        return {{"mode", "count"}, {"count", p.count}};
    }
    return {{"mode", "threshold"}, {"threshold", p.threshold}};
}

json to_json(const VQEResult &r) {
    return {{"energy", r.energy},
            {"grad_norm", r.grad_norm},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"params", to_json(r.params)}};
}

json to_json(const MultiplierSet &m) {
    json eta = json::array();
    json mu = json::array();
    for (std::size_t t = 0; t < m.eta.size(); ++t) {
        eta.push_back(m.eta[t].norm());
        mu.push_back(m.mu[t].norm());
    }
    return {{"eta0_norm", m.eta0.norm()}, {"mu0_norm", m.mu0.norm()}, {"eta_norms", eta},
            {"mu_norms", mu},           {"nu_norm", m.nu.norm()},     {"max_eta_residual", m.max_eta_residual}};
}

json to_json(const DerivativeReport &d) {
    return {{"regime", d.regime},     {"perturbation", d.perturbation_id}, {"kind", d.kind},
            {"ablation", d.ablation}, {"analytic", d.analytic},            {"numerical", d.numerical},
            {"abs_diff", d.abs_diff}, {"step", d.step},                    {"stencil", d.stencil}};
}

json to_json(const RegimeReport &r) {
    json reports = json::array();
    for (const auto &d : r.reports) {
        reports.push_back(to_json(d));
    }
    return {{"regime", r.regime},
            {"retained", r.retained},
            {"total_leaves", r.total_leaves},
            {"n_layers", r.n_layers},
            {"vqe_energy", r.vqe_energy},
            {"exact_energy", r.exact_energy},
            {"vqe_grad_norm", r.vqe_grad_norm},
            {"stationarity_warning", r.stationarity_warning},
            {"max_abs_diff", r.max_abs_diff()},
            {"reports", reports}};
}

json to_json(const SuiteResult &s) {
    json regimes = json::array();
    for (const auto &r : s.regimes) {
        regimes.push_back(to_json(r));
    }
    return {{"tolerance", s.tolerance}, {"pass", s.pass()}, {"max_abs_diff", s.max_abs_diff()}, {"regimes", regimes}};
}

json to_json(const PathTrace &t) {
    json steps = json::array();
    for (const auto &st : t.steps) {
        steps.push_back({{"step", st.step},
                         {"s", st.s},
                         {"velocity", st.velocity},
                         {"kinetic", st.kinetic},
                         {"potential", st.potential},
                         {"total", st.total},
                         {"force", st.force}});
    }
    return {{"drift", t.drift}, {"relative_drift", t.relative_drift}, {"slope", t.slope}, {"steps", steps}};
}

json factorization_summary(const XdfFactorization &f, const Hamiltonian &h) {
    json g = json::array();
    double discarded = 0.0;
    for (int t = 0; t < f.n_leaves(); ++t) {
        g.push_back(f.leaves[t].g);
        if (t >= f.retained) {
            discarded += f.leaves[t].g * f.leaves[t].g;
        }
    }
    const double ref = h.two_body.norm();
    const double full = (reconstruct_eri(f, false) - h.two_body).norm();
    const double kept = (reconstruct_eri(f, true) - h.two_body).norm();
    return {{"n_orbitals", f.n},
            {"total", f.n_leaves()},
            {"retained", f.retained},
            {"policy", to_json(f.policy)},
            {"g", g},
            {"F0", to_json(f.F0)},
            {"reconstruction_error",
             {{"full_frobenius", full},
              {"full_relative", ref > 0.0 ? full / ref : full},
              {"retained_frobenius", kept},
              {"discarded_g_norm", std::sqrt(discarded)}}}};
}

} // namespace xdf
