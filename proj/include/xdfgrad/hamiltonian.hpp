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
 * @file hamiltonian.hpp
 * Active-space Hamiltonian data model, effective operators, and the
 * interpolation/perturbation helpers used by derivative checks.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace xdf {

/// Raised when numerical preconditions of an algorithm are not met.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An iterative solve stopped short of its tolerance.
class ConvergenceError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// Raised for malformed FCIDUMP input.
class FcidumpError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Dense rank-4 tensor with row-major (p, q, r, s) storage.
 */
class Tensor4 {
  public:
    Tensor4() = default;
    explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    double &operator()(int p, int q, int r, int s) { return data_[index(p, q, r, s)]; }
    double operator()(int p, int q, int r, int s) const { return data_[index(p, q, r, s)]; }

    [[nodiscard]] const std::vector<double> &data() const { return data_; }
    std::vector<double> &data() { return data_; }

    /// View as the N²×N² supermatrix M[(pq),(rs)], pq = p*N + q.
    [[nodiscard]] Eigen::MatrixXd supermatrix() const;
    static Tensor4 from_supermatrix(const Eigen::MatrixXd &m, int n);

    [[nodiscard]] double norm() const;
    [[nodiscard]] double dot(const Tensor4 &other) const;
    [[nodiscard]] double max_abs_diff(const Tensor4 &other) const;

    Tensor4 &operator+=(const Tensor4 &o);
    Tensor4 &operator-=(const Tensor4 &o);
    Tensor4 &operator*=(double a);
    friend Tensor4 operator+(Tensor4 a, const Tensor4 &b) { return a += b; }
    friend Tensor4 operator-(Tensor4 a, const Tensor4 &b) { return a -= b; }
    friend Tensor4 operator*(double a, Tensor4 t) { return t *= a; }

  private:
    [[nodiscard]] std::size_t index(int p, int q, int r, int s) const {
        return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
    }
    int n_ = 0;
    std::vector<double> data_;
};

/// Average over the eight index permutations that preserve (pq|rs).
Tensor4 symmetrize8(const Tensor4 &t);

/// Largest deviation of t from its 8-fold images.
double symmetry_violation8(const Tensor4 &t);

/// (A + Aᵀ)/2.
Eigen::MatrixXd symmetrize2(const Eigen::MatrixXd &a);

struct Hamiltonian {
    int n_orbitals = 0;
    int n_alpha = 0;
    int n_beta = 0;
    double core_energy = 0.0;
    Eigen::MatrixXd one_body;
    Tensor4 two_body;

    [[nodiscard]] int n_electrons() const { return n_alpha + n_beta; }
};

/// Zero-integral Hamiltonian with the given dimensions.
Hamiltonian zero_hamiltonian(int n, int n_alpha, int n_beta);

/// Throws std::invalid_argument if any Hamiltonian invariant is violated.
void validate(const Hamiltonian &h, double tol = 1e-12);

/**
 * @brief Parse FCIDUMP text.
 *
 * Records are "value i j k l" with 1-based indices in chemists' notation.
 * "value i j 0 0" is one-body and "value 0 0 0 0" is the core energy.
 * All symmetry images are filled in.
 */
Hamiltonian parse_fcidump(std::istream &in);
Hamiltonian parse_fcidump_string(const std::string &text);
Hamiltonian read_fcidump(const std::string &path);

/// Canonical FCIDUMP text; each symmetry-unique nonzero entry written once.
std::string write_fcidump(const Hamiltonian &h);

/**
 * @brief Seeded synthetic Hamiltonian with a PSD supermatrix.
 *
 * The supermatrix is built as P·A·Aᵀ·P with P the projector onto the
 * symmetric pair sector, which keeps both PSD and 8-fold symmetry.
 */
Hamiltonian synth_hamiltonian(int n, int n_alpha, int n_beta, std::uint64_t seed);

struct EffectiveOperators {
    double scalar_offset = 0.0;    ///< 𝓔
    Eigen::MatrixXd eff_one_body;  ///< 𝓕
    Eigen::MatrixXd kappa;         ///< κ
};

EffectiveOperators effective_operators(const Hamiltonian &h);

/// (1-s)·H_A + s·H_B, fieldwise.
Hamiltonian interpolate(const Hamiltonian &a, const Hamiltonian &b, double s);

/// H_B − H_A as a perturbation direction (fields subtracted, counts kept).
Hamiltonian difference(const Hamiltonian &b, const Hamiltonian &a);

struct Perturbation {
    enum class Kind { OneBody, TwoBody };
    Kind kind = Kind::OneBody;
    Eigen::MatrixXd one_body;
    Tensor4 two_body;
    std::string id;

    static Perturbation from_one_body(Eigen::MatrixXd m, std::string id = {});
    static Perturbation from_two_body(Tensor4 t, std::string id = {});
    /// Random symmetric matrix with unit Frobenius norm.
    static Perturbation random_one_body(int n, std::uint64_t seed);
    /// Random 8-fold-symmetric tensor with unit Frobenius norm.
    static Perturbation random_two_body(int n, std::uint64_t seed);
};

Hamiltonian apply_perturbation(const Hamiltonian &h, const Perturbation &p, double eps);

} // namespace xdf
