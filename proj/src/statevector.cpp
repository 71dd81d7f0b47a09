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
#include <random>
#include <stdexcept>

#include "xdfgrad/qsim.hpp"

namespace xdf {

namespace {

inline std::uint32_t bit(int j) { return std::uint32_t{1} << j; }

inline std::uint32_t between_mask(int p, int q) { return (bit(q) - 1U) & ~(bit(p + 1) - 1U); }

inline double parity_sign(std::uint32_t x) { return (std::popcount(x) & 1) ? -1.0 : 1.0; }

void check_modes(const Statevector &psi, int p, int q) {
    if (p < 0 || q >= psi.n_qubits() || p >= q) {
        throw std::invalid_argument("invalid spin-orbital pair");
    }
}

void check_spatial(const Statevector &psi, int p, int q) {
    if (p < 0 || q >= psi.n_spatial() || p >= q) {
        throw std::invalid_argument("invalid spatial-orbital pair");
    }
}

// Rotation in each two-level block {x, y}; block members are selected by
// `in_block`, partners by XOR with `flip`, and `sign` gives the fermionic
// phase of the hop x -> y.
template <class InBlock, class Sign>
void rotate_blocks(Statevector &psi, std::uint32_t flip, double c, double s, bool derivative, InBlock in_block,
                   Sign sign) {
    auto &a = psi.amplitudes();
    const auto dim = static_cast<std::uint32_t>(a.size());
    if (derivative) {
        std::vector<double> out(a.size(), 0.0);
        for (std::uint32_t x = 0; x < dim; ++x) {
            if (!in_block(x)) {
                continue;
            }
            const std::uint32_t y = x ^ flip;
            const double sg = sign(x);
            out[x] = -s * a[x] - sg * c * a[y];
            out[y] = sg * c * a[x] - s * a[y];
        }
        a.swap(out);
        return;
    }
    for (std::uint32_t x = 0; x < dim; ++x) {
        if (!in_block(x)) {
            continue;
        }
        const std::uint32_t y = x ^ flip;
        const double sg = sign(x);
        const double ax = a[x];
        const double ay = a[y];
        a[x] = c * ax - sg * s * ay;
        a[y] = sg * s * ax + c * ay;
    }
}

void givens_impl(Statevector &psi, int p, int q, double theta, bool derivative) {
    check_modes(psi, p, q);
    const std::uint32_t bp = bit(p);
    const std::uint32_t bq = bit(q);
    const std::uint32_t mid = between_mask(p, q);
    rotate_blocks(
        psi, bp | bq, std::cos(theta), std::sin(theta), derivative,
        [=](std::uint32_t x) { return (x & bp) && !(x & bq); }, [=](std::uint32_t x) { return parity_sign(x & mid); });
}

void pair_impl(Statevector &psi, int p, int q, double phi, bool derivative) {
    check_spatial(psi, p, q);
    const int n = psi.n_spatial();
    const std::uint32_t from = bit(p) | bit(n + p);
    const std::uint32_t to = bit(q) | bit(n + q);
    const std::uint32_t mid = between_mask(p, q) | between_mask(n + p, n + q);
    rotate_blocks(
        psi, from | to, std::cos(phi), std::sin(phi), derivative,
        [=](std::uint32_t x) { return (x & from) == from && (x & to) == 0; },
        [=](std::uint32_t x) { return parity_sign(x & mid); });
}

} // namespace

Statevector::Statevector(int n_spatial) : n_(n_spatial) {
    if (n_spatial < 1 || n_spatial > kMaxSpatialOrbitals) {
        throw std::invalid_argument("statevector supports 1 to 8 spatial orbitals");
    }
    amp_.assign(std::size_t{1} << (2 * n_spatial), 0.0);
}

double Statevector::norm() const { return std::sqrt(dot(*this)); }

void Statevector::normalize() {
    const double nrm = norm();
    if (nrm == 0.0) {
        throw NumericalError("cannot normalize a zero state");
    }
    for (double &x : amp_) {
        x /= nrm;
    }
}

double Statevector::dot(const Statevector &o) const {
    if (o.size() != size()) {
        throw std::invalid_argument("statevector size mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        acc += amp_[i] * o.amp_[i];
    }
    return acc;
}

Statevector hf_reference(int n, int n_alpha, int n_beta) {
    if (n_alpha < 0 || n_beta < 0 || n_alpha > n || n_beta > n) {
        throw std::invalid_argument("occupation exceeds the number of orbitals");
    }
    Statevector psi(n);
    const std::uint32_t x = (bit(n_alpha) - 1U) | ((bit(n_beta) - 1U) << n);
    psi[x] = 1.0;
    return psi;
}

std::vector<std::uint32_t> sector_basis(int n, int n_alpha, int n_beta) {
    std::vector<std::uint32_t> out;
    const std::uint32_t low = bit(n) - 1U;
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << (2 * n)); ++x) {
        if (std::popcount(x & low) == n_alpha && std::popcount(x >> n) == n_beta) {
            out.push_back(x);
        }
    }
    return out;
}

Statevector random_sector_state(int n, int n_alpha, int n_beta, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Statevector psi(n);
    for (std::uint32_t x : sector_basis(n, n_alpha, n_beta)) {
        psi[x] = gauss(rng);
    }
    psi.normalize();
    return psi;
}

double leakage(const Statevector &psi, int n_alpha, int n_beta) {
    const int n = psi.n_spatial();
    const std::uint32_t low = bit(n) - 1U;
    double acc = 0.0;
    for (std::uint32_t x = 0; x < psi.size(); ++x) {
        if (std::popcount(x & low) != n_alpha || std::popcount(x >> n) != n_beta) {
            acc += psi[x] * psi[x];
        }
    }
    return std::sqrt(acc);
}

void apply_givens(Statevector &psi, int p, int q, double theta) { givens_impl(psi, p, q, theta, false); }

void apply_givens_derivative(Statevector &psi, int p, int q, double theta) { givens_impl(psi, p, q, theta, true); }

void apply_spin_givens(Statevector &psi, int p, int q, double theta_alpha, double theta_beta) {
    check_spatial(psi, p, q);
    const int n = psi.n_spatial();
    apply_givens(psi, p, q, theta_alpha);
    apply_givens(psi, n + p, n + q, theta_beta);
}

void apply_pair_exchange(Statevector &psi, int p, int q, double phi) { pair_impl(psi, p, q, phi, false); }

void apply_pair_exchange_derivative(Statevector &psi, int p, int q, double phi) { pair_impl(psi, p, q, phi, true); }

Statevector apply_orbital_rotation(const Statevector &psi, const GivensFabric &fabric) {
    if (fabric.n != psi.n_spatial()) {
        throw std::invalid_argument("fabric dimension does not match the statevector");
    }
    Statevector out = psi;
    for (int g = fabric.size() - 1; g >= 0; --g) {
        const Pivot &pv = fabric.pivots[g];
        apply_spin_givens(out, pv.p, pv.q, fabric.angles[g], fabric.angles[g]);
    }
    return out;
}

Statevector rotate_to_frame(const Statevector &psi, const GivensFabric &fabric, const GateTweak &tweak) {
    if (fabric.n != psi.n_spatial()) {
        throw std::invalid_argument("fabric dimension does not match the statevector");
    }
    if (tweak.gate >= fabric.size()) {
        throw std::invalid_argument("gate index out of range");
    }
    const int n = fabric.n;
    Statevector out = psi;
    for (int g = 0; g < fabric.size(); ++g) {
        const Pivot &pv = fabric.pivots[g];
        if (g != tweak.gate) {
            apply_spin_givens(out, pv.p, pv.q, -fabric.angles[g], -fabric.angles[g]);
            continue;
        }
        const double ta = -(fabric.angles[g] + tweak.shift_alpha);
        const double tb = -(fabric.angles[g] + tweak.shift_beta);
        if (tweak.derivative_spin == 0) {
            apply_givens_derivative(out, pv.p, pv.q, ta);
        } else {
            apply_givens(out, pv.p, pv.q, ta);
        }
        if (tweak.derivative_spin == 1) {
            apply_givens_derivative(out, n + pv.p, n + pv.q, tb);
        } else {
            apply_givens(out, n + pv.p, n + pv.q, tb);
        }
        if (tweak.derivative_spin == 0 || tweak.derivative_spin == 1) {
            for (double &x : out.amplitudes()) {
                x = -x;
            }
        }
    }
    return out;
}

} // namespace xdf
