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

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qiter/classical.hpp"
#include "qiter/generate.hpp"
#include "qiter/io.hpp"
#include "qiter/qcd.hpp"
#include "qiter/qkaczmarz.hpp"
#include "qiter/trace.hpp"

namespace qiter {

enum class Algorithm { kaczmarz, cd, classical_kaczmarz, classical_cd };

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::kaczmarz: return "kaczmarz";
        case Algorithm::cd: return "cd";
        case Algorithm::classical_kaczmarz: return "classical-kaczmarz";
        case Algorithm::classical_cd: return "classical-cd";
    }
    return "unknown";
}

inline Algorithm parse_algorithm(std::string_view text) {
    for (auto a : {Algorithm::kaczmarz, Algorithm::cd, Algorithm::classical_kaczmarz, Algorithm::classical_cd}) {
        if (to_string(a) == text) {
            return a;
        }
    }
    throw Error(ErrorCode::Parse, "unknown algorithm '" + std::string(text) + "'");
}

inline bool is_row_action(Algorithm a) {
    return a == Algorithm::kaczmarz || a == Algorithm::classical_kaczmarz;
}

inline bool is_quantum(Algorithm a) {
    return a == Algorithm::kaczmarz || a == Algorithm::cd;
}

/// Environment variable overriding the default amplitude cap.
inline constexpr const char *kAmplitudeCapEnv = "QITER_AMPLITUDE_CAP";

inline std::size_t default_amplitude_cap() {
    if (const char *env = std::getenv(kAmplitudeCapEnv)) {
        try {
            return static_cast<std::size_t>(std::stoull(env));
        } catch (const std::exception &) {
            throw Error(ErrorCode::Parse, std::string(kAmplitudeCapEnv) + " is not an integer");
        }
    }
    return kDefaultAmplitudeCap;
}

struct RunConfig {
    Algorithm algorithm = Algorithm::kaczmarz;
    ProblemSpec problem;
    /// When set, the system is loaded instead of generated.
    std::string matrix_path;
    std::string rhs_path;
    std::size_t steps = 12;
    std::uint64_t seed = 1;
    SamplingStrategy sampler = SamplingStrategy::uniform;
    std::size_t check_every = 1;
    std::size_t amplitude_cap = kDefaultAmplitudeCap;
    double residual_tol = 0.0;
    /// Coordinate descent only: rescale b so that ||b - A x0|| = 1 and the
    /// plain residual encoding applies.
    bool unit_residual = true;
    std::string output;
};

inline nlohmann::json to_json(const RunConfig &c) {
    return {{"algorithm", to_string(c.algorithm)},
            {"problem",
             {{"kind", to_string(c.problem.kind)},
              {"n", c.problem.n},
              {"rows", c.problem.rows},
              {"seed", c.problem.seed}}},
            {"matrix", c.matrix_path},
            {"rhs", c.rhs_path},
            {"steps", c.steps},
            {"seed", c.seed},
            {"sampler", to_string(c.sampler)},
            {"check_every", c.check_every},
            {"amplitude_cap", c.amplitude_cap},
            {"residual_tol", c.residual_tol},
            {"unit_residual", c.unit_residual},
            {"output", c.output}};
}

/// Missing keys keep the values already in `base`.
inline RunConfig config_from_json(const nlohmann::json &j, RunConfig base = {}) {
    try {
        if (j.contains("algorithm")) base.algorithm = parse_algorithm(j["algorithm"].get<std::string>());
        if (j.contains("problem")) {
            const auto &p = j["problem"];
            if (p.contains("kind")) base.problem.kind = parse_problem_kind(p["kind"].get<std::string>());
            if (p.contains("n")) base.problem.n = p["n"].get<std::size_t>();
            if (p.contains("rows")) base.problem.rows = p["rows"].get<std::size_t>();
            if (p.contains("seed")) base.problem.seed = p["seed"].get<std::uint64_t>();
        }
        if (j.contains("matrix")) base.matrix_path = j["matrix"].get<std::string>();
        if (j.contains("rhs")) base.rhs_path = j["rhs"].get<std::string>();
        if (j.contains("steps")) base.steps = j["steps"].get<std::size_t>();
        if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("sampler")) base.sampler = parse_sampling_strategy(j["sampler"].get<std::string>());
        if (j.contains("check_every")) base.check_every = j["check_every"].get<std::size_t>();
        if (j.contains("amplitude_cap")) base.amplitude_cap = j["amplitude_cap"].get<std::size_t>();
        if (j.contains("residual_tol")) base.residual_tol = j["residual_tol"].get<double>();
        if (j.contains("unit_residual")) base.unit_residual = j["unit_residual"].get<bool>();
        if (j.contains("output")) base.output = j["output"].get<std::string>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, e.what());
    }
    return base;
}

/// Index stream seed derived from the run seed, kept apart from the
/// problem generator's stream.
inline std::uint64_t sampler_seed(std::uint64_t seed) {
    return seed ^ 0x9e3779b97f4a7c15ULL;
}

inline LinearSystem load_raw_system(const RunConfig &c) {
    if (!c.matrix_path.empty()) {
        return io::load_system(c.matrix_path, c.rhs_path);
    }
    return generate(c.problem);
}

/// Normalized, padded system and initial guess e_0 as the engines use them.
struct PreparedProblem {
    LinearSystem system;
    Vector x0;
};

inline PreparedProblem prepare_problem(const RunConfig &c) {
    LinearSystem raw = load_raw_system(c);
    PreparedProblem p;
    if (is_row_action(c.algorithm)) {
        p.system = pad_to_pow2(normalize_rows(raw));
    } else {
        p.system = pad_to_pow2(normalize_columns(raw));
    }
    p.x0 = basis_vector(p.system.cols(), 0);
    if (c.algorithm == Algorithm::cd && c.unit_residual) {
        p.system = with_unit_initial_residual(p.system, p.x0);
    }
    return p;
}

/// Final state summary of a run, alongside its trace.
struct RunResult {
    Trace trace;
    Vector x;
    std::optional<QKaczmarzRun> kaczmarz;
    std::optional<QCdRun> cd;
};

/// Executes one configured run. Quantum runs are refused before any work if
/// the final state would exceed the amplitude cap.
inline RunResult execute(const RunConfig &c) {
    PreparedProblem p = prepare_problem(c);
    Action action = is_row_action(c.algorithm) ? Action::rows : Action::columns;
    IndexSampler sampler = IndexSampler::for_system(p.system, action, c.sampler, sampler_seed(c.seed));
    EngineOptions opts{c.check_every, c.amplitude_cap};
    RunResult out;
    switch (c.algorithm) {
        case Algorithm::kaczmarz: {
            out.kaczmarz.emplace(run_qkaczmarz(p.system, sampler, c.steps, p.x0, opts));
            out.trace = out.kaczmarz->trace();
            out.x = out.kaczmarz->classical().x;
            break;
        }
        case Algorithm::cd: {
            out.cd.emplace(run_qcd(p.system, sampler, c.steps, p.x0, opts));
            out.trace = out.cd->trace();
            out.x = out.cd->classical().x;
            break;
        }
        case Algorithm::classical_kaczmarz: {
            ClassicalOptions co{c.steps, c.residual_tol, 128, std::max<std::size_t>(1, c.check_every)};
            auto r = run_classical_kaczmarz(p.system, sampler, p.x0, co);
            out.trace = std::move(r.trace);
            out.x = std::move(r.state.x);
            break;
        }
        case Algorithm::classical_cd: {
            ClassicalOptions co{c.steps, c.residual_tol, 128, std::max<std::size_t>(1, c.check_every)};
            auto r = run_classical_cd(p.system, sampler, p.x0, co);
            out.trace = std::move(r.trace);
            out.x = p.system.recover_solution(r.state.x);
            break;
        }
    }
    out.trace.header["config"] = to_json(c);
    out.trace.header["system"] = {{"rows", p.system.original_rows()},
                                  {"cols", p.system.original_cols()},
                                  {"n_padded", p.system.n_padded()},
                                  {"mode", to_string(p.system.mode())}};
    return out;
}

/// Empirical E[mu_k^2] under uniform row sampling, compared with the
/// recurrence form 1 + (k/n)||b||^2 (k sampled rows contribute).
struct ExpectationReport {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t trials = 0;
    double b_norm_sq = 0.0;
    double mean = 0.0;
    double standard_error = 0.0;
    double expected = 0.0;
    /// 1 + ((k-1)/n)||b||^2, reported for comparison only.
    double expected_k_minus_one = 0.0;
    double z_score = 0.0;
    bool passed = false;

    nlohmann::json to_json() const {
        return {{"n", n},
                {"k", k},
                {"trials", trials},
                {"b_norm_sq", b_norm_sq},
                {"mean", mean},
                {"standard_error", standard_error},
                {"expected", expected},
                {"expected_k_minus_one", expected_k_minus_one},
                {"z_score", z_score},
                {"passed", passed}};
    }
};

/// mu_k^2 after the given row sequence, through beta_t = mu / sqrt(mu^2 + b_t^2)
/// and mu <- mu / beta_t. No state vector is needed.
inline double mu_squared_after(std::span<const double> b, std::span<const std::size_t> rows) {
    double mu = 1.0;
    for (std::size_t t : rows) {
        double beta = mu / std::hypot(mu, b[t]);
        mu /= beta;
    }
    return mu * mu;
}

inline ExpectationReport expectation_check(std::span<const double> b, std::size_t k, std::size_t trials,
                                           std::uint64_t seed) {
    ExpectationReport rep;
    rep.n = b.size();
    rep.k = k;
    rep.trials = trials;
    rep.b_norm_sq = dot(b, b);
    rep.expected = 1.0 + static_cast<double>(k) / static_cast<double>(rep.n) * rep.b_norm_sq;
    rep.expected_k_minus_one =
        1.0 + (static_cast<double>(k) - 1.0) / static_cast<double>(rep.n) * rep.b_norm_sq;
    IndexSampler sampler(SamplingStrategy::uniform, std::vector<double>(rep.n, 1.0), seed);
    std::vector<std::size_t> rows(k);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (auto &t : rows) {
            t = sampler.next();
        }
        double v = mu_squared_after(b, rows);
        sum += v;
        sum_sq += v * v;
    }
    double count = static_cast<double>(trials);
    rep.mean = sum / count;
    double variance = trials > 1 ? std::max(0.0, (sum_sq - count * rep.mean * rep.mean) / (count - 1.0)) : 0.0;
    rep.standard_error = std::sqrt(variance / count);
    double diff = std::abs(rep.mean - rep.expected);
    if (rep.standard_error > 0.0) {
        rep.z_score = diff / rep.standard_error;
        rep.passed = rep.z_score <= 4.0;
    } else {
        rep.passed = diff <= 1e-12;
    }
    return rep;
}

/// Row-normalized right-hand side of a generated instance.
inline ExpectationReport expectation_check(std::size_t n, std::size_t trials, std::size_t k, std::uint64_t seed) {
    LinearSystem sys = normalize_rows(generate({ProblemKind::random_consistent, n, 0, seed}));
    return expectation_check(sys.rhs(), k, trials, sampler_seed(seed));
}

struct BenchRow {
    Algorithm algorithm = Algorithm::kaczmarz;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t amplitudes = 0;
    double step_seconds = 0.0;
};

/// Wall time of each step (k -> k+1) for both quantum engines.
inline std::vector<BenchRow> bench(std::span<const std::size_t> dims, std::size_t kaczmarz_steps, std::size_t cd_steps,
                                   std::uint64_t seed, std::size_t cap = kDefaultAmplitudeCap) {
    std::vector<BenchRow> rows;
    for (std::size_t n : dims) {
        RunConfig c;
        c.problem = {ProblemKind::random_consistent, n, 0, seed};
        c.seed = seed;
        c.check_every = 0;
        c.amplitude_cap = cap;
        for (Algorithm a : {Algorithm::kaczmarz, Algorithm::cd}) {
            c.algorithm = a;
            PreparedProblem p = prepare_problem(c);
            IndexSampler sampler = IndexSampler::for_system(
                p.system, a == Algorithm::kaczmarz ? Action::rows : Action::columns, c.sampler, sampler_seed(seed));
            EngineOptions opts{0, cap};
            std::size_t steps = a == Algorithm::kaczmarz ? kaczmarz_steps : cd_steps;
            auto time_steps = [&](auto &run, auto amplitudes) {
                for (std::size_t k = 0; k < steps; ++k) {
                    detail::Stopwatch watch;
                    run.step(sampler.next());
                    rows.push_back({a, n, k, amplitudes(run), watch.seconds()});
                }
            };
            if (a == Algorithm::kaczmarz) {
                check_amplitude_cap(steps, p.system.cols(), cap);
                QKaczmarzRun run(p.system, p.x0, opts);
                time_steps(run, [](const QKaczmarzRun &r) { return r.state().size(); });
            } else {
                QCdRun run(p.system, p.x0, opts);
                check_amplitude_cap(run.solution_ancillas_after(steps), p.system.cols(), cap);
                time_steps(run, [](const QCdRun &r) { return r.solution_state().size(); });
            }
        }
    }
    return rows;
}

}  // namespace qiter
