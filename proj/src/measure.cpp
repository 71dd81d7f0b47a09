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
#include <stdexcept>

#include "xdfgrad/qsim.hpp"

namespace xdf {

namespace {

inline std::uint32_t bit(int j) { return std::uint32_t{1} << j; }

// D_k(x) = n_kα + n_kβ − 1 for every spatial orbital.
inline void occupation_offsets(std::uint32_t x, int n, double *d) {
    for (int k = 0; k < n; ++k) {
        d[k] = static_cast<double>(((x >> k) & 1U) + ((x >> (n + k)) & 1U)) - 1.0;
    }
}

double expectation(const Statevector &psi, const std::vector<double> &diag) {
    double acc = 0.0;
    for (std::size_t x = 0; x < psi.size(); ++x) {
        acc += diag[x] * psi[x] * psi[x];
    }
    return acc;
}

double weighted_overlap(const Statevector &a, const Statevector &b, const std::vector<double> &diag) {
    double acc = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) {
        acc += diag[x] * a[x] * b[x];
    }
    return acc;
}

void check_leaf(const XdfCircuits &c, int leaf_id) {
    if (leaf_id < kLeafOneBody || leaf_id >= static_cast<int>(c.leaf_fabrics.size())) {
        throw std::invalid_argument("leaf id is not a retained leaf");
    }
}

// Sign of a_i† a_j acting on basis state x (j occupied, i empty or i == j).
inline double hop_sign(std::uint32_t x, int i, int j) {
    const std::uint32_t after = x ^ bit(j);
    const int cnt = std::popcount(x & (bit(j) - 1U)) + std::popcount(after & (bit(i) - 1U));
    return (cnt & 1) ? -1.0 : 1.0;
}

} // namespace

Eigen::VectorXd measure_omega0(const Statevector &psi, const GivensFabric &fabric0) {
    const int n = psi.n_spatial();
    const Statevector r = rotate_to_frame(psi, fabric0);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    std::vector<double> d(n);
    for (std::uint32_t x = 0; x < r.size(); ++x) {
        const double prob = r[x] * r[x];
        if (prob == 0.0) {
            continue;
        }
        occupation_offsets(x, n, d.data());
        for (int k = 0; k < n; ++k) {
            w(k) += prob * d[k];
        }
    }
    return w;
}

Eigen::MatrixXd measure_omega_leaf(const Statevector &psi, const GivensFabric &fabric_t) {
    const int n = psi.n_spatial();
    const int nq = 2 * n;
    const Statevector r = rotate_to_frame(psi, fabric_t);
    Eigen::MatrixXd zz = Eigen::MatrixXd::Zero(nq, nq);
    Eigen::VectorXd z(nq);
    for (std::uint32_t x = 0; x < r.size(); ++x) {
        const double prob = r[x] * r[x];
        if (prob == 0.0) {
            continue;
        }
        for (int j = 0; j < nq; ++j) {
            z(j) = ((x >> j) & 1U) ? -1.0 : 1.0;
        }
        zz.noalias() += prob * z * z.transpose();
    }
    Eigen::MatrixXd w(n, n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const double delta = (k == l) ? 1.0 : 0.0;
            w(k, l) = 0.125 * (zz(k, l) - delta + zz(k, n + l) + zz(n + k, l) + zz(n + k, n + l) - delta);
        }
    }
    return symmetrize2(w);
}

std::vector<double> frame_observable(const XdfFactorization &f, int leaf_id) {
    const int n = f.n;
    const std::size_t dim = std::size_t{1} << (2 * n);
    std::vector<double> o(dim, 0.0);
    std::vector<double> d(n);
    if (leaf_id == kLeafOneBody) {
        for (std::uint32_t x = 0; x < dim; ++x) {
            occupation_offsets(x, n, d.data());
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                acc += f.F0(k) * d[k];
            }
            o[x] = acc;
        }
        return o;
    }
    if (leaf_id < 0 || leaf_id >= f.n_leaves()) {
        throw std::invalid_argument("leaf id out of range");
    }
    const Eigen::MatrixXd &z = f.leaves[leaf_id].Z;
    const double trace = z.trace();
    for (std::uint32_t x = 0; x < dim; ++x) {
        occupation_offsets(x, n, d.data());
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
                acc += z(k, l) * d[k] * d[l];
            }
        }
        o[x] = 0.5 * acc - 0.25 * trace;
    }
    return o;
}

const GivensFabric &XdfCircuits::fabric(int leaf_id) const {
    check_leaf(*this, leaf_id);
    return leaf_id == kLeafOneBody ? fabric0 : leaf_fabrics[leaf_id];
}

const std::vector<double> &XdfCircuits::observable(int leaf_id) const {
    check_leaf(*this, leaf_id);
    return leaf_id == kLeafOneBody ? observable0 : leaf_observables[leaf_id];
}

XdfCircuits build_circuits(const XdfFactorization &f) {
    if (f.n > kMaxSpatialOrbitals) {
        throw std::invalid_argument("too many orbitals for the statevector simulator");
    }
    XdfCircuits c;
    c.fabric0 = decompose(f.U0);
    c.observable0 = frame_observable(f, kLeafOneBody);
    for (int t = 0; t < f.retained; ++t) {
        c.leaf_fabrics.push_back(decompose(f.leaves[t].U));
        c.leaf_observables.push_back(frame_observable(f, t));
    }
    return c;
}

EigenbasisDensities measure_densities(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c) {
    EigenbasisDensities d;
    d.omega0 = measure_omega0(psi, c.fabric0);
    for (int t = 0; t < f.retained; ++t) {
        d.omega.push_back(measure_omega_leaf(psi, c.leaf_fabrics[t]));
    }
    return d;
}

double energy_from_densities(const XdfFactorization &f, const EigenbasisDensities &d) {
    double e = f.eff.scalar_offset + f.F0.dot(d.omega0);
    for (int t = 0; t < f.retained; ++t) {
        e += f.leaves[t].Z.cwiseProduct(d.omega[t]).sum();
    }
    return e;
}

double energy(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c) {
    double e = f.eff.scalar_offset;
    for (int t = kLeafOneBody; t < f.retained; ++t) {
        e += leaf_energy(psi, f, c, t);
    }
    return e;
}

double energy(const Statevector &psi, const XdfFactorization &f) { return energy(psi, f, build_circuits(f)); }

double leaf_energy(const Statevector &psi, const XdfFactorization & /*f*/, const XdfCircuits &c, int leaf_id,
                   const GateTweak &tweak) {
    return expectation(rotate_to_frame(psi, c.fabric(leaf_id), tweak), c.observable(leaf_id));
}

double denergy_dtheta_shift(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c, int leaf_id,
                            int g) {
    const GivensFabric &fab = c.fabric(leaf_id);
    if (g < 0 || g >= fab.size()) {
        throw std::invalid_argument("angle index out of range");
    }
    const double wide = 0.5 - M_SQRT1_2;
    auto partial = [&](bool alpha) {
        auto at = [&](double delta) {
            GateTweak tw;
            tw.gate = g;
            (alpha ? tw.shift_alpha : tw.shift_beta) = delta;
            return leaf_energy(psi, f, c, leaf_id, tw);
        };
        return wide * (at(M_PI_2) - at(-M_PI_2)) + (at(M_PI_4) - at(-M_PI_4));
    };
    return partial(true) + partial(false);
}

double denergy_dtheta_four_shift(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c,
                                 int leaf_id, int g) {
    const GivensFabric &fab = c.fabric(leaf_id);
    if (g < 0 || g >= fab.size()) {
        throw std::invalid_argument("angle index out of range");
    }
    auto at = [&](double da, double db) { return leaf_energy(psi, f, c, leaf_id, GateTweak{g, da, db, -1}); };
    return 0.5 * (at(M_PI_2, 0.0) - at(-M_PI_2, 0.0) + at(0.0, M_PI_2) - at(0.0, -M_PI_2));
}

double denergy_dtheta_direct(const Statevector &psi, const XdfFactorization & /*f*/, const XdfCircuits &c,
                             int leaf_id, int g) {
    const GivensFabric &fab = c.fabric(leaf_id);
    if (g < 0 || g >= fab.size()) {
        throw std::invalid_argument("angle index out of range");
    }
    const std::vector<double> &obs = c.observable(leaf_id);
    const Statevector phi = rotate_to_frame(psi, fab);
    const Statevector da = rotate_to_frame(psi, fab, GateTweak{g, 0.0, 0.0, 0});
    const Statevector db = rotate_to_frame(psi, fab, GateTweak{g, 0.0, 0.0, 1});
    return 2.0 * (weighted_overlap(phi, da, obs) + weighted_overlap(phi, db, obs));
}

Eigen::VectorXd denergy_dtheta_all(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c,
                                   int leaf_id) {
    const int m = c.fabric(leaf_id).size();
    Eigen::VectorXd out(m);
    for (int g = 0; g < m; ++g) {
        out(g) = denergy_dtheta_shift(psi, f, c, leaf_id, g);
    }
    return out;
}

Statevector apply_excitation(const Statevector &psi, int p, int q) {
    const int n = psi.n_spatial();
    if (p < 0 || q < 0 || p >= n || q >= n) {
        throw std::invalid_argument("orbital index out of range");
    }
    Statevector out(n);
    for (int spin = 0; spin < 2; ++spin) {
        const int i = spin * n + p;
        const int j = spin * n + q;
        for (std::uint32_t x = 0; x < psi.size(); ++x) {
            const double a = psi[x];
            if (a == 0.0 || !(x & bit(j))) {
                continue;
            }
            if (i == j) {
                out[x] += a;
                continue;
            }
            if (x & bit(i)) {
                continue;
            }
            out[x ^ bit(i) ^ bit(j)] += hop_sign(x, i, j) * a;
        }
    }
    return out;
}

MeasuredRdms measure_rdms_direct(const Statevector &psi) {
    const int n = psi.n_spatial();
    std::vector<Statevector> ex;
    ex.reserve(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            ex.push_back(apply_excitation(psi, p, q));
        }
    }
    MeasuredRdms out;
    out.gamma.resize(n, n);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            out.gamma(p, q) = psi.dot(ex[p * n + q]);
        }
    }
    out.Gamma = Tensor4(n);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            // ⟨Ê_pq Ê_rs⟩ = ⟨Ê_qp ψ | Ê_rs ψ⟩
            const Statevector &left = ex[q * n + p];
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s < n; ++s) {
                    double v = left.dot(ex[r * n + s]);
                    if (q == r) {
                        v -= out.gamma(p, s);
                    }
                    out.Gamma(p, q, r, s) = 0.5 * v;
                }
            }
        }
    }
    return out;
}

Statevector apply_xdf_hamiltonian(const Statevector &psi, const XdfFactorization &f, const XdfCircuits &c) {
    Statevector out = psi;
    for (double &x : out.amplitudes()) {
        x *= f.eff.scalar_offset;
    }
    for (int t = kLeafOneBody; t < f.retained; ++t) {
        Statevector phi = rotate_to_frame(psi, c.fabric(t));
        const std::vector<double> &obs = c.observable(t);
        for (std::size_t x = 0; x < phi.size(); ++x) {
            phi[x] *= obs[x];
        }
        const Statevector back = apply_orbital_rotation(phi, c.fabric(t));
        for (std::size_t x = 0; x < out.size(); ++x) {
            out[x] += back[x];
        }
    }
    return out;
}

} // namespace xdf
