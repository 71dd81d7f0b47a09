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
 * @file serialize.hpp
 * JSON views of library results. Arrays are dense and row-major with an
 * explicit "shape" field.
 */
#pragma once

#include <json.hpp>

#include "xdfgrad/givens.hpp"
#include "xdfgrad/lagrange.hpp"
#include "xdfgrad/verify.hpp"
#include "xdfgrad/vqe.hpp"
#include "xdfgrad/xdf.hpp"

namespace xdf {

nlohmann::json to_json(const Eigen::MatrixXd &m);
nlohmann::json to_json(const Eigen::VectorXd &v);
nlohmann::json to_json(const Tensor4 &t);
nlohmann::json to_json(const GivensFabric &f);
nlohmann::json to_json(const TruncationPolicy &p);
nlohmann::json to_json(const VQEResult &r);
nlohmann::json to_json(const MultiplierSet &m);
nlohmann::json to_json(const DerivativeReport &d);
nlohmann::json to_json(const RegimeReport &r);
nlohmann::json to_json(const SuiteResult &s);
nlohmann::json to_json(const PathTrace &t);

/// Leaf eigenvalues, retained count, and reconstruction errors.
nlohmann::json factorization_summary(const XdfFactorization &f, const Hamiltonian &h);

} // namespace xdf
