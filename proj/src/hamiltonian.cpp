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

#include "xdfgrad/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "xdfgrad/pairs.hpp"

namespace xdf {

Eigen::MatrixXd Tensor4::supermatrix() const {
    const int n2 = n_ * n_;
    Eigen::MatrixXd m(n2, n2);
    for (int a = 0; a < n2; ++a) {
        for (int b = 0; b < n2; ++b) {
            m(a, b) = data_[static_cast<std::size_t>(a) * n2 + b];
        }
    }
    return m;
}

Tensor4 Tensor4::from_supermatrix(const Eigen::MatrixXd &m, int n) {
    const int n2 = n * n;
    if (m.rows() != n2 || m.cols() != n2) {
        throw std::invalid_argument("supermatrix shape does not match N");
    }
    Tensor4 t(n);
    for (int a = 0; a < n2; ++a) {
        for (int b = 0; b < n2; ++b) {
            t.data_[static_cast<std::size_t>(a) * n2 + b] = m(a, b);
        }
    }
    return t;
}

double Tensor4::norm() const { return std::sqrt(dot(*this)); }

double Tensor4::dot(const Tensor4 &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("tensor dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        acc += data_[i] * other.data_[i];
    }
    return acc;
}

double Tensor4::max_abs_diff(const Tensor4 &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("tensor dimension mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        m = std::max(m, std::abs(data_[i] - other.data_[i]));
    }
    return m;
}

Tensor4 &Tensor4::operator+=(const Tensor4 &o) {
    if (o.n_ != n_) {
        throw std::invalid_argument("tensor dimension mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

Tensor4 &Tensor4::operator-=(const Tensor4 &o) {
    if (o.n_ != n_) {
        throw std::invalid_argument("tensor dimension mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

Tensor4 &Tensor4::operator*=(double a) {
    for (double &x : data_) {
        x *= a;
    }
    return *this;
}

Tensor4 symmetrize8(const Tensor4 &t) {
    const int n = t.dim();
    Tensor4 out(n);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s < n; ++s) {
                    out(p, q, r, s) = 0.125 * (t(p, q, r, s) + t(q, p, r, s) + t(p, q, s, r) +
                                               t(q, p, s, r) + t(r, s, p, q) + t(s, r, p, q) +
                                               t(r, s, q, p) + t(s, r, q, p));
                }
            }
        }
    }
    return out;
}

double symmetry_violation8(const Tensor4 &t) {
    const int n = t.dim();
    double m = 0.0;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s < n; ++s) {
                    const double v = t(p, q, r, s);
                    m = std::max({m, std::abs(v - t(q, p, r, s)), std::abs(v - t(p, q, s, r)),
                                  std::abs(v - t(r, s, p, q))});
                }
            }
        }
    }
    return m;
}

Eigen::MatrixXd symmetrize2(const Eigen::MatrixXd &a) { return 0.5 * (a + a.transpose()); }

Hamiltonian zero_hamiltonian(int n, int n_alpha, int n_beta) {
    if (n < 1) {
        throw std::invalid_argument("number of orbitals must be positive");
    }
    Hamiltonian h;
    h.n_orbitals = n;
    h.n_alpha = n_alpha;
    h.n_beta = n_beta;
    h.one_body = Eigen::MatrixXd::Zero(n, n);
    h.two_body = Tensor4(n);
    return h;
}

void validate(const Hamiltonian &h, double tol) {
    const int n = h.n_orbitals;
    if (n < 1) {
        throw std::invalid_argument("number of orbitals must be positive");
    }
    if (h.n_alpha < 0 || h.n_beta < 0 || h.n_alpha > n || h.n_beta > n) {
        throw std::invalid_argument("electron counts out of range");
    }
    if (h.one_body.rows() != n || h.one_body.cols() != n || h.two_body.dim() != n) {
        throw std::invalid_argument("integral shapes do not match N");
    }
    if ((h.one_body - h.one_body.transpose()).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("one-body integrals are not symmetric");
    }
    if (symmetry_violation8(h.two_body) > tol) {
        throw std::invalid_argument("two-body integrals lack 8-fold symmetry");
    }
}

Hamiltonian synth_hamiltonian(int n, int n_alpha, int n_beta, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("synth_hamiltonian requires N >= 2");
    }
    Hamiltonian h = zero_hamiltonian(n, n_alpha, n_beta);
    validate(h);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    h.core_energy = 0.5 + 0.1 * gauss(rng);
    for (int p = 0; p < n; ++p) {
        h.one_body(p, p) = -2.0 + 1.0 * p + 0.05 * gauss(rng);
        for (int q = 0; q < p; ++q) {
            const double v = 0.05 * gauss(rng);
            h.one_body(p, q) = v;
            h.one_body(q, p) = v;
        }
    }

    // A = B·Q·diag(√g): B spans the symmetric pair sector, Q is a random
    // orthogonal mixing, and g decays geometrically.
    const Eigen::MatrixXd basis = symmetric_pair_basis(n);
    const int m = static_cast<int>(basis.cols());
    Eigen::MatrixXd c(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            c(i, j) = gauss(rng);
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
    const Eigen::MatrixXd qmat = qr.householderQ();
    Eigen::VectorXd root_g(m);
    for (int j = 0; j < m; ++j) {
        root_g(j) = std::sqrt(0.8 * std::pow(0.55, j));
    }
    const Eigen::MatrixXd a = basis * qmat * root_g.asDiagonal();
    const Eigen::MatrixXd super = a * a.transpose();
    h.two_body = symmetrize8(Tensor4::from_supermatrix(super, n));
    return h;
}

EffectiveOperators effective_operators(const Hamiltonian &h) {
    const int n = h.n_orbitals;
    const Tensor4 &v = h.two_body;
    EffectiveOperators eff;
    eff.eff_one_body = h.one_body;
    eff.kappa = h.one_body;
    double e = h.core_energy;
    for (int p = 0; p < n; ++p) {
        e += h.one_body(p, p);
        for (int q = 0; q < n; ++q) {
            e += 0.5 * v(p, p, q, q) - 0.25 * v(p, q, p, q);
        }
    }
    eff.scalar_offset = e;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            double coulomb = 0.0;
            double exchange = 0.0;
            for (int r = 0; r < n; ++r) {
                coulomb += v(p, q, r, r);
                exchange += v(p, r, q, r);
            }
            eff.eff_one_body(p, q) += coulomb - 0.5 * exchange;
            eff.kappa(p, q) -= 0.5 * exchange;
        }
    }
    eff.eff_one_body = symmetrize2(eff.eff_one_body);
    eff.kappa = symmetrize2(eff.kappa);
    return eff;
}

namespace {

void require_compatible(const Hamiltonian &a, const Hamiltonian &b) {
    if (a.n_orbitals != b.n_orbitals || a.n_alpha != b.n_alpha || a.n_beta != b.n_beta) {
        throw std::invalid_argument("Hamiltonians differ in dimension or electron count");
    }
}

} // namespace

Hamiltonian interpolate(const Hamiltonian &a, const Hamiltonian &b, double s) {
    require_compatible(a, b);
    if (s == 0.0) {
        return a;
    }
    if (s == 1.0) {
        return b;
    }
    Hamiltonian h = a;
    const double w = 1.0 - s;
    h.core_energy = w * a.core_energy + s * b.core_energy;
    h.one_body = w * a.one_body + s * b.one_body;
    auto &out = h.two_body.data();
    const auto &da = a.two_body.data();
    const auto &db = b.two_body.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = w * da[i] + s * db[i];
    }
    return h;
}

Hamiltonian difference(const Hamiltonian &b, const Hamiltonian &a) {
    require_compatible(a, b);
    Hamiltonian d = a;
    d.core_energy = b.core_energy - a.core_energy;
    d.one_body = b.one_body - a.one_body;
    d.two_body = b.two_body - a.two_body;
    return d;
}

Perturbation Perturbation::from_one_body(Eigen::MatrixXd m, std::string id) {
    Perturbation p;
    p.kind = Kind::OneBody;
    p.one_body = std::move(m);
    p.id = std::move(id);
    return p;
}

Perturbation Perturbation::from_two_body(Tensor4 t, std::string id) {
    Perturbation p;
    p.kind = Kind::TwoBody;
    p.two_body = std::move(t);
    p.id = std::move(id);
    return p;
}

Perturbation Perturbation::random_one_body(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = gauss(rng);
        }
    }
    m = symmetrize2(m);
    m /= m.norm();
    return from_one_body(std::move(m), "one_body_seed_" + std::to_string(seed));
}

Perturbation Perturbation::random_two_body(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Tensor4 t(n);
    for (double &x : t.data()) {
        x = gauss(rng);
    }
    t = symmetrize8(t);
    t *= 1.0 / t.norm();
    return from_two_body(std::move(t), "two_body_seed_" + std::to_string(seed));
}

Hamiltonian apply_perturbation(const Hamiltonian &h, const Perturbation &p, double eps) {
    const int n = h.n_orbitals;
    Hamiltonian out = h;
    if (p.kind == Perturbation::Kind::OneBody) {
        if (p.one_body.rows() != n || p.one_body.cols() != n) {
            throw std::invalid_argument("perturbation shape does not match N");
        }
        if ((p.one_body - p.one_body.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
            throw std::invalid_argument("one-body perturbation is not symmetric");
        }
        out.one_body += eps * p.one_body;
    } else {
        if (p.two_body.dim() != n) {
            throw std::invalid_argument("perturbation shape does not match N");
        }
        if (symmetry_violation8(p.two_body) > 1e-10) {
            throw std::invalid_argument("two-body perturbation lacks 8-fold symmetry");
        }
        auto &d = out.two_body.data();
        const auto &pd = p.two_body.data();
        for (std::size_t i = 0; i < d.size(); ++i) {
            d[i] += eps * pd[i];
        }
    }
    return out;
}

} // namespace xdf
