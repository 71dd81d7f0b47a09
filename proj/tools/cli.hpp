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
 * @file cli.hpp
 * Subcommand drivers for the xdfgrad executable. Every command writes one
 * JSON document holding the resolved configuration, fixture hashes, and a
 * result block.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace xdf::cli {

enum ExitCode : int { kOk = 0, kParseError = 1, kNumericalError = 2, kNotConverged = 3 };

struct RunConfig {
    std::string command;
    std::string fcidump;
    std::string fcidump_b;
    std::optional<double> threshold;
    std::optional<int> leaves;
    int layers = 5;
    int approx_layers = 2;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    std::string ablate = "none";
    int steps = 1000;
    double dt = 0.002;
    double mass = 1.0;
    double s0 = 0.05;
    double v0 = 1.5;
    double fd_step = 1e-3;
    int n_perturbations = 3;
    std::string out;

    // synth only
    int norb = 4;
    int nalpha = 2;
    int nbeta = 2;
    double core_shift = 0.0;
};

nlohmann::json to_json(const RunConfig &cfg);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string &bytes);

/// SHA-256 of a file's contents; throws FcidumpError when unreadable.
std::string sha256_file(const std::string &path);

int cmd_factorize(const RunConfig &cfg, nlohmann::json &result);
int cmd_vqe(const RunConfig &cfg, nlohmann::json &result);
int cmd_rdm(const RunConfig &cfg, nlohmann::json &result);
int cmd_verify(const RunConfig &cfg, nlohmann::json &result);
int cmd_path(const RunConfig &cfg, nlohmann::json &result);
int cmd_synth(const RunConfig &cfg, nlohmann::json &result);

/// Run one configured command, mapping exceptions to exit codes, and write
/// {config, fixtures, result} (or {config, error}) to cfg.out or `out`.
int execute(const RunConfig &cfg, std::ostream &out);

/// Parse argv and execute.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace xdf::cli
