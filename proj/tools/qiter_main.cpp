// Copyright 2026 The qiter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qiter/qiter.hpp"

namespace {

using qiter::RunConfig;

struct RunFlags {
    std::string config_path;
    std::string algorithm;
    std::string kind;
    std::string sampler;
    std::size_t n = 0;
    std::size_t rows = 0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    std::size_t check_every = 0;
    std::size_t amplitude_cap = 0;
    double residual_tol = -1.0;
    bool keep_rhs = false;
    std::string matrix;
    std::string rhs;
    std::string output;
};

void add_run_flags(CLI::App *cmd, RunFlags &f, bool with_algorithm) {
    cmd->add_option("--config", f.config_path, "JSON file mirroring the run configuration");
    if (with_algorithm) {
        cmd->add_option("--algorithm", f.algorithm, "kaczmarz | cd | classical-kaczmarz | classical-cd");
    }
    cmd->add_option("--kind", f.kind, "identity | random-orthogonal-rows | random-consistent | random-general");
    cmd->add_option("--n", f.n, "system dimension");
    cmd->add_option("--rows", f.rows, "number of equations (default: square)");
    cmd->add_option("--steps", f.steps, "iterations");
    cmd->add_option("--seed", f.seed, "seed of both the instance and the index stream");
    cmd->add_option("--sampler", f.sampler, "uniform | norm-proportional");
    cmd->add_option("--check-every", f.check_every, "verify block invariants every N steps");
    cmd->add_option("--amplitude-cap", f.amplitude_cap, "largest state size allowed");
    cmd->add_option("--residual-tol", f.residual_tol, "classical stopping tolerance");
    cmd->add_flag("--keep-rhs", f.keep_rhs, "cd: keep b as is and use the rho-rescaled residual");
    cmd->add_option("--matrix", f.matrix, "MatrixMarket (.mtx) or JSON (.json) system file");
    cmd->add_option("--rhs", f.rhs, "right-hand side vector file for a MatrixMarket matrix");
    cmd->add_option("--output,-o", f.output, "trace output path (default: stdout)");
}

RunConfig build_config(const RunFlags &f, qiter::Algorithm fallback, const CLI::App *cmd) {
    RunConfig c;
    c.algorithm = fallback;
    c.amplitude_cap = qiter::default_amplitude_cap();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            throw qiter::Error(qiter::ErrorCode::Io, "cannot open '" + f.config_path + "'");
        }
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception &e) {
            throw qiter::Error(qiter::ErrorCode::Parse, e.what());
        }
        c = qiter::config_from_json(j, c);
    }
    auto given = [&](const char *name) { return cmd->count(name) > 0; };
    if (given("--algorithm")) c.algorithm = qiter::parse_algorithm(f.algorithm);
    if (given("--kind")) c.problem.kind = qiter::parse_problem_kind(f.kind);
    if (given("--n")) c.problem.n = f.n;
    if (given("--rows")) c.problem.rows = f.rows;
    if (given("--steps")) c.steps = f.steps;
    if (given("--seed")) {
        c.seed = f.seed;
        c.problem.seed = f.seed;
    }
    if (given("--sampler")) c.sampler = qiter::parse_sampling_strategy(f.sampler);
    if (given("--check-every")) c.check_every = f.check_every;
    if (given("--amplitude-cap")) c.amplitude_cap = f.amplitude_cap;
    if (given("--residual-tol")) c.residual_tol = f.residual_tol;
    if (f.keep_rhs) c.unit_residual = false;
    if (given("--matrix")) c.matrix_path = f.matrix;
    if (given("--rhs")) c.rhs_path = f.rhs;
    if (given("--output")) c.output = f.output;
    return c;
}

void emit_trace(const qiter::Trace &trace, const std::string &path) {
    if (path.empty()) {
        trace.write_jsonl(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw qiter::Error(qiter::ErrorCode::Io, "cannot write '" + path + "'");
    }
    trace.write_jsonl(out);
}

int cmd_solve(const RunConfig &c) {
    qiter::RunResult r = qiter::execute(c);
    emit_trace(r.trace, c.output);
    if (r.trace.failed) {
        std::cerr << "run failed: block invariant exceeded tolerance\n";
        return 1;
    }
    return 0;
}

int cmd_verify(bool quick, std::uint64_t seed) {
    qiter::VerifyOptions o = quick ? qiter::VerifyOptions::quick() : qiter::VerifyOptions{};
    o.seed = seed;
    bool ok = true;
    for (const auto &check : qiter::run_verify_suite(o)) {
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name;
        if (!check.detail.empty()) {
            std::cout << "  (" << check.detail << ")";
        }
        std::cout << '\n';
        ok = ok && check.passed;
    }
    std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
    return ok ? 0 : 1;
}

int cmd_bench(const std::vector<std::size_t> &dims, std::size_t kaczmarz_steps, std::size_t cd_steps,
              std::uint64_t seed) {
    auto rows = qiter::bench(dims, kaczmarz_steps, cd_steps, seed, qiter::default_amplitude_cap());
    std::cout << std::left << std::setw(10) << "algorithm" << std::setw(6) << "n" << std::setw(5) << "k"
              << std::setw(12) << "amplitudes" << std::setw(14) << "step_seconds"
              << "growth\n";
    std::map<std::pair<qiter::Algorithm, std::size_t>, double> prev;
    for (const auto &r : rows) {
        auto key = std::make_pair(r.algorithm, r.n);
        std::cout << std::left << std::setw(10) << qiter::to_string(r.algorithm) << std::setw(6) << r.n
                  << std::setw(5) << r.k << std::setw(12) << r.amplitudes << std::setw(14) << std::scientific
                  << std::setprecision(3) << r.step_seconds << std::defaultfloat;
        if (prev.count(key) && prev[key] > 0.0) {
            std::cout << std::fixed << std::setprecision(2) << r.step_seconds / prev[key] << std::defaultfloat;
        }
        std::cout << '\n';
        prev[key] = r.step_seconds;
    }
    return 0;
}

int cmd_readout(RunConfig c, const std::string &probe_path, double epsilon, const std::string &mode_text) {
    auto mode = qiter::parse_overlap_mode(mode_text);
    if (!qiter::is_quantum(c.algorithm)) {
        throw qiter::Error(qiter::ErrorCode::Unsupported, "readout needs a quantum algorithm");
    }
    qiter::Vector probe = qiter::io::load_vector(probe_path);
    qiter::RunResult r = qiter::execute(c);
    const qiter::SimState &state = r.kaczmarz ? r.kaczmarz->state() : r.cd->solution_state();
    double scale = r.kaczmarz ? r.kaczmarz->mu() : static_cast<double>(r.cd->k() + 1);
    const qiter::Vector &target_x = r.kaczmarz ? r.kaczmarz->classical().x : r.cd->scaled_iterate();
    qiter::Vector padded_probe = probe;
    padded_probe.resize(state.dim_sys(), 0.0);

    qiter::OverlapEstimate est;
    if (mode == qiter::OverlapMode::exact) {
        est = qiter::overlap_exact_estimate(state, padded_probe, scale);
    } else {
        std::mt19937_64 rng(qiter::sampler_seed(c.seed) + 1);
        est = qiter::overlap_sampled(state, padded_probe, epsilon, scale, rng);
    }
    nlohmann::json out = {{"mode", mode_text},
                          {"k", r.kaczmarz ? r.kaczmarz->k() : r.cd->k()},
                          {"scale", scale},
                          {"probe_norm", qiter::norm2(padded_probe)},
                          {"overlap", est.value},
                          {"estimate", est.rescaled},
                          {"classical", qiter::dot(target_x, padded_probe)},
                          {"samples", est.samples},
                          {"standard_error", est.standard_error},
                          {"epsilon", epsilon}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum Kaczmarz and coordinate-descent simulator"};
    app.require_subcommand(1);

    RunFlags solve_flags, classical_flags, readout_flags;
    auto *solve = app.add_subcommand("solve", "paired quantum and classical run, writes a JSON-lines trace");
    add_run_flags(solve, solve_flags, true);

    auto *classical = app.add_subcommand("classical", "classical iteration only");
    add_run_flags(classical, classical_flags, true);

    bool quick = false;
    std::uint64_t verify_seed = 1;
    auto *verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_flag("--quick", quick, "small dimensions");
    verify->add_option("--seed", verify_seed, "seed");

    std::vector<std::size_t> bench_dims{4, 8};
    std::size_t bench_k = 14, bench_cd = 7;
    std::uint64_t bench_seed = 1;
    auto *bench = app.add_subcommand("bench", "per-step wall time versus k and n");
    bench->add_option("--n", bench_dims, "system dimensions")->expected(1, -1);
    bench->add_option("--kaczmarz-steps", bench_k, "steps of the Kaczmarz engine");
    bench->add_option("--cd-steps", bench_cd, "steps of the coordinate-descent engine");
    bench->add_option("--seed", bench_seed, "seed");

    std::string probe_path, mode = "exact";
    double epsilon = 0.05;
    auto *readout = app.add_subcommand("readout", "estimate x_k . c from the final state");
    add_run_flags(readout, readout_flags, true);
    readout->add_option("--probe", probe_path, "probe vector file")->required();
    readout->add_option("--epsilon", epsilon, "target error on x_k . c");
    readout->add_option("--mode", mode, "exact | sampled");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            return cmd_solve(build_config(solve_flags, qiter::Algorithm::kaczmarz, solve));
        }
        if (classical->parsed()) {
            RunConfig c = build_config(classical_flags, qiter::Algorithm::classical_kaczmarz, classical);
            if (c.algorithm == qiter::Algorithm::kaczmarz) c.algorithm = qiter::Algorithm::classical_kaczmarz;
            if (c.algorithm == qiter::Algorithm::cd) c.algorithm = qiter::Algorithm::classical_cd;
            return cmd_solve(c);
        }
        if (verify->parsed()) {
            return cmd_verify(quick, verify_seed);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_dims, bench_k, bench_cd, bench_seed);
        }
        if (readout->parsed()) {
            return cmd_readout(build_config(readout_flags, qiter::Algorithm::kaczmarz, readout), probe_path, epsilon,
                               mode);
        }
    } catch (const qiter::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
