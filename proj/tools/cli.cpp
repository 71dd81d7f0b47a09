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

#include "cli.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "xdfgrad/hamiltonian.hpp"
#include "xdfgrad/lagrange.hpp"
#include "xdfgrad/qsim.hpp"
#include "xdfgrad/serialize.hpp"
#include "xdfgrad/verify.hpp"
#include "xdfgrad/vqe.hpp"
#include "xdfgrad/xdf.hpp"

namespace xdf::cli {

using nlohmann::json;
using xdf::to_json;

namespace {

constexpr double kOracleTolerance = 1e-8;
constexpr double kSuiteTolerance = 1e-6;

Hamiltonian load(const std::string &path, const char *flag) {
    if (path.empty()) {
        throw std::invalid_argument(std::string(flag) + " is required");
    }
    return read_fcidump(path);
}

TruncationPolicy policy_of(const RunConfig &cfg) {
    if (cfg.threshold && cfg.leaves) {
        throw std::invalid_argument("--threshold and --leaves are mutually exclusive");
    }
    if (cfg.leaves) {
        return TruncationPolicy::by_count(*cfg.leaves);
    }
    if (cfg.threshold) {
        return TruncationPolicy::by_threshold(*cfg.threshold);
    }
    return TruncationPolicy::keep_all();
}

AnsatzConfig ansatz_of(const RunConfig &cfg, int layers) {
    AnsatzConfig a;
    a.n_layers = layers;
    a.seed = cfg.seed;
    return a;
}

json fixtures_of(const RunConfig &cfg) {
    json out = json::array();
    for (const std::string *p : {&cfg.fcidump, &cfg.fcidump_b}) {
        if (!p->empty() && cfg.command != "synth") {
            out.push_back({{"path", *p}, {"sha256", sha256_file(*p)}});
        }
    }
    return out;
}

} // namespace

json to_json(const RunConfig &cfg) {
    json j = {{"command", cfg.command},
              {"fcidump", cfg.fcidump},
              {"fcidump_b", cfg.fcidump_b},
              {"threshold", cfg.threshold ? json(*cfg.threshold) : json(nullptr)},
              {"leaves", cfg.leaves ? json(*cfg.leaves) : json(nullptr)},
              {"layers", cfg.layers},
              {"approx_layers", cfg.approx_layers},
              {"tol", cfg.tol},
              {"seed", cfg.seed},
              {"ablate", cfg.ablate},
              {"steps", cfg.steps},
              {"dt", cfg.dt},
              {"mass", cfg.mass},
              {"s0", cfg.s0},
              {"v0", cfg.v0},
              {"fd_step", cfg.fd_step},
              {"perturbations", cfg.n_perturbations},
              {"out", cfg.out}};
    if (cfg.command == "synth") {
        j["norb"] = cfg.norb;
        j["nalpha"] = cfg.nalpha;
        j["nbeta"] = cfg.nbeta;
        j["core_shift"] = cfg.core_shift;
    }
    return j;
}

std::string sha256_hex(const std::string &bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return hex.str();
}

std::string sha256_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FcidumpError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

int cmd_factorize(const RunConfig &cfg, json &result) {
    const Hamiltonian h = load(cfg.fcidump, "--fcidump");
    const XdfFactorization f = factorize(h, policy_of(cfg));
    result = factorization_summary(f, h);
    return kOk;
}

int cmd_vqe(const RunConfig &cfg, json &result) {
    const Hamiltonian h = load(cfg.fcidump, "--fcidump");
    const XdfFactorization f = factorize(h, policy_of(cfg));
    const VQEResult r = optimize(f, ansatz_of(cfg, cfg.layers), cfg.tol);
    const double exact = exact_ground_state(f).second;
    result = to_json(r);
    result["n_layers"] = cfg.layers;
    result["exact_energy"] = exact;
    result["gap"] = r.energy - exact;
    return r.converged ? kOk : kNotConverged;
}

int cmd_rdm(const RunConfig &cfg, json &result) {
    const Hamiltonian h = load(cfg.fcidump, "--fcidump");
    const XdfFactorization f = factorize(h, policy_of(cfg));
    const AnsatzConfig ansatz = ansatz_of(cfg, cfg.layers);
    const VQEResult r = optimize(f, ansatz, cfg.tol);
    result["vqe"] = to_json(r);
    if (!r.converged) {
        return kNotConverged;
    }
    const Statevector psi = prepare_ansatz(f.n, f.n_alpha, f.n_beta, ansatz, r.params);
    LagrangeOptions lo;
    lo.ablation = ablation_from_string(cfg.ablate);
    const LagrangeResult lag = relaxed_rdms(f, psi, lo, r.grad_norm);

    result["energy"] = lag.energy;
    result["gamma_sym"] = to_json(lag.rdms.gamma_sym);
    result["Gamma_sym"] = to_json(lag.rdms.Gamma_sym);
    result["trace_gamma"] = lag.rdms.gamma_sym.trace();
    result["multipliers"] = to_json(lag.multipliers);
    result["stationarity_warning"] = lag.stationarity_warning;
    result["stationarity_residual"] = lag.stationarity_residual;
    result["retained"] = f.retained;
    result["total_leaves"] = f.n_leaves();

    if (f.truncated() || lo.ablation != Ablation::None) {
        result["oracle"] = "not-applicable";
    } else {
        const MeasuredRdms meas = measure_rdms_direct(psi);
        const double dg = (symmetrize2(meas.gamma) - lag.rdms.gamma_sym).cwiseAbs().maxCoeff();
        const double dG = symmetrize8(meas.Gamma).max_abs_diff(lag.rdms.Gamma_sym);
        result["oracle"] = {{"max_gamma_diff", dg},
                            {"max_Gamma_diff", dG},
                            {"tolerance", kOracleTolerance},
                            {"pass", dg < kOracleTolerance && dG < kOracleTolerance}};
    }
    return kOk;
}

int cmd_verify(const RunConfig &cfg, json &result) {
    const Hamiltonian h = load(cfg.fcidump, "--fcidump");
    TruncationPolicy truncated = policy_of(cfg);
    if (!cfg.threshold && !cfg.leaves) {
        truncated = TruncationPolicy::by_threshold(0.1);
    }
    std::vector<RegimeSpec> specs;
    for (XdfRegime x : {XdfRegime::Exact, XdfRegime::Truncated}) {
        for (VqeRegime v : {VqeRegime::Converged, VqeRegime::Approximate}) {
            RegimeSpec s;
            s.xdf = x;
            s.policy = truncated;
            s.vqe = v;
            s.ansatz = ansatz_of(cfg, v == VqeRegime::Converged ? cfg.layers : cfg.approx_layers);
            s.vqe_tol = cfg.tol;
            specs.push_back(s);
        }
    }
    RegimeSuiteOptions opts;
    opts.n_one_body = cfg.n_perturbations;
    opts.n_two_body = cfg.n_perturbations;
    opts.seed = cfg.seed;
    opts.step = cfg.fd_step;
    opts.tolerance = kSuiteTolerance;
    if (cfg.ablate == "all") {
        opts.ablations = {Ablation::None, Ablation::Eta0, Ablation::EtaT, Ablation::Nu};
    } else if (cfg.ablate != "none") {
        opts.ablations = {Ablation::None, ablation_from_string(cfg.ablate)};
    }
    const SuiteResult suite = run_regime_suite(h, specs, opts);
    result = to_json(suite);
    json ablation_errors = json::object();
    for (Ablation a : opts.ablations) {
        ablation_errors[to_string(a)] = suite.max_abs_diff(to_string(a));
    }
    result["max_abs_diff_by_ablation"] = ablation_errors;
    return suite.pass() ? kOk : kNumericalError;
}

int cmd_path(const RunConfig &cfg, json &result) {
    const Hamiltonian a = load(cfg.fcidump, "--fcidump");
    const Hamiltonian b = load(cfg.fcidump_b, "--fcidump-b");
    PathOptions po;
    po.s0 = cfg.s0;
    po.v0 = cfg.v0;
    po.regime.policy = policy_of(cfg);
    po.regime.xdf = cfg.threshold || cfg.leaves ? XdfRegime::Truncated : XdfRegime::Exact;
    po.regime.ansatz = ansatz_of(cfg, cfg.layers);
    po.regime.vqe_tol = cfg.tol;
    po.ablation = ablation_from_string(cfg.ablate);
    const PathTrace trace = verlet_path(a, b, cfg.steps, cfg.dt, cfg.mass, po);
    result = to_json(trace);
    return kOk;
}

int cmd_synth(const RunConfig &cfg, json &result) {
    if (cfg.out.empty()) {
        throw std::invalid_argument("synth requires --out");
    }
    Hamiltonian h = synth_hamiltonian(cfg.norb, cfg.nalpha, cfg.nbeta, cfg.seed);
    h.core_energy += cfg.core_shift;
    const std::string text = write_fcidump(h);
    std::ofstream os(cfg.out, std::ios::binary);
    if (!os || !(os << text)) {
        throw std::runtime_error("cannot write " + cfg.out);
    }
    result = {{"path", cfg.out}, {"sha256", sha256_hex(text)}};
    return kOk;
}

int execute(const RunConfig &cfg, std::ostream &out) {
    static const std::map<std::string, std::function<int(const RunConfig &, json &)>> commands = {
        {"factorize", cmd_factorize}, {"vqe", cmd_vqe},   {"rdm", cmd_rdm},
        {"verify", cmd_verify},       {"path", cmd_path}, {"synth", cmd_synth}};

    json doc;
    doc["config"] = to_json(cfg);
    int code = kOk;
    auto fail = [&](int c, const char *kind, const std::exception &e) {
        code = c;
        doc["error"] = {{"type", kind}, {"message", e.what()}};
    };
    try {
        const auto it = commands.find(cfg.command);
        if (it == commands.end()) {
            throw std::invalid_argument("unknown command '" + cfg.command + "'");
        }
        doc["fixtures"] = fixtures_of(cfg);
        json result;
        code = it->second(cfg, result);
        doc["result"] = result;
    } catch (const FcidumpError &e) {
        fail(kParseError, "parse", e);
    } catch (const std::invalid_argument &e) {
        fail(kParseError, "config", e);
    } catch (const ConvergenceError &e) {
        fail(kNotConverged, "convergence", e);
    } catch (const NumericalError &e) {
        fail(kNumericalError, "numerical", e);
    } catch (const std::exception &e) {
        fail(kNumericalError, "runtime", e);
    }
    doc["exit_code"] = code;

    const std::string text = doc.dump(2) + "\n";
    if (!cfg.out.empty() && cfg.command != "synth") {
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os || !(os << text)) {
            out << text;
            return kNumericalError;
        }
    } else {
        out << text;
    }
    return code;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Explicit double factorization, VQE, and Lagrangian relaxed density matrices"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--fcidump", cfg.fcidump, "FCIDUMP integral file");
        auto *thr = sub->add_option_function<double>(
            "--threshold", [&](const double &v) { cfg.threshold = v; }, "keep leaves with |g| >= threshold");
        auto *lv = sub->add_option_function<int>(
            "--leaves", [&](const int &v) { cfg.leaves = v; }, "keep the first N leaves");
        thr->excludes(lv);
        sub->add_option("--layers", cfg.layers, "ansatz layers")->capture_default_str();
        sub->add_option("--tol", cfg.tol, "optimizer gradient tolerance (inf-norm)")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "ansatz and perturbation seed")->capture_default_str();
        sub->add_option("--out", cfg.out, "write JSON here instead of stdout");
    };
    auto add_ablate = [&](CLI::App *sub, bool allow_all) {
        std::vector<std::string> choices{"none", "eta0", "etat", "nu"};
        if (allow_all) {
            choices.emplace_back("all");
        }
        sub->add_option("--ablate", cfg.ablate, "zero a multiplier family")
            ->check(CLI::IsMember(choices))
            ->capture_default_str();
    };

    add_common(app.add_subcommand("factorize", "leaf eigenvalues, retained count, reconstruction error"));
    add_common(app.add_subcommand("vqe", "optimize the ansatz"));

    auto *rdm = app.add_subcommand("rdm", "relaxed one- and two-body density matrices");
    add_common(rdm);
    add_ablate(rdm, false);

    auto *verify = app.add_subcommand("verify", "four-regime analytic vs finite-difference derivatives");
    add_common(verify);
    add_ablate(verify, true);
    verify->add_option("--approx-layers", cfg.approx_layers, "layers for the approximate VQE regimes")
        ->capture_default_str();
    verify->add_option("--fd-step", cfg.fd_step, "stencil step")->capture_default_str();
    verify->add_option("--perturbations", cfg.n_perturbations, "one-body and two-body perturbations each")
        ->capture_default_str();

    auto *path = app.add_subcommand("path", "velocity Verlet along an interpolated Hamiltonian path");
    add_common(path);
    add_ablate(path, false);
    path->add_option("--fcidump-b", cfg.fcidump_b, "FCIDUMP for the s = 1 endpoint");
    path->add_option("--steps", cfg.steps, "Verlet steps")->capture_default_str();
    path->add_option("--dt", cfg.dt, "time step")->capture_default_str();
    path->add_option("--mass", cfg.mass, "particle mass")->capture_default_str();
    path->add_option("--s0", cfg.s0, "initial coordinate")->capture_default_str();
    path->add_option("--v0", cfg.v0, "initial velocity")->capture_default_str();

    auto *synth = app.add_subcommand("synth", "write a seeded synthetic FCIDUMP");
    synth->add_option("--norb", cfg.norb, "orbitals")->capture_default_str();
    synth->add_option("--nalpha", cfg.nalpha, "alpha electrons")->capture_default_str();
    synth->add_option("--nbeta", cfg.nbeta, "beta electrons")->capture_default_str();
    synth->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
    synth->add_option("--core-shift", cfg.core_shift, "added to the core energy")->capture_default_str();
    synth->add_option("--out", cfg.out, "output FCIDUMP path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err) == 0 ? kOk : kParseError;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return execute(cfg, out);
}

} // namespace xdf::cli
