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

// Acceptance runner: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "dense_reference.hpp"
#include "qiter/qiter.hpp"
#include "test_util.hpp"

using namespace qiter;
using testutil::amps_of;
using testutil::random_state;
using testutil::random_unit;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Trajectory summaries shared between criteria.
struct KaczmarzSweep {
    double worst_block = 0.0;
    double worst_mu = 0.0;
    double worst_norm = 0.0;
    bool calls_linear = true;
    double elapsed = 0.0;
};

struct CdSweep {
    double worst_solution = 0.0;
    double worst_residual = 0.0;
    double worst_norm = 0.0;
    double worst_bound_slack = -1e300;  // max of ||x_k|| - (k+1)
    double elapsed = 0.0;
};

KaczmarzSweep kaczmarz_sweep() {
    KaczmarzSweep s;
    auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < 20; ++i) {
        std::size_t n = i % 2 == 0 ? 4 : 8;
        auto sys = pad_to_pow2(normalize_rows(generate({ProblemKind::random_consistent, n, 0, 1000 + i})));
        auto sampler = IndexSampler::for_system(sys, Action::rows, SamplingStrategy::uniform, sampler_seed(i));
        QKaczmarzRun run(sys, basis_vector(n, 0));
        for (std::size_t k = 1; k <= 12; ++k) {
            run.step(sampler.next());
            s.worst_block = std::max(s.worst_block, run.block_fidelity());
            s.worst_mu = std::max(s.worst_mu, run.mu_recurrence_error());
            s.worst_norm = std::max(s.worst_norm, run.state_norm_error());
            s.calls_linear = s.calls_linear && run.oracle_calls() == 3 * k;
        }
    }
    s.elapsed = seconds_since(t0);
    return s;
}

CdSweep cd_sweep() {
    CdSweep s;
    auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < 20; ++i) {
        auto sys = pad_to_pow2(normalize_columns(generate({ProblemKind::random_consistent, 8, 0, 2000 + i})));
        Vector x0 = basis_vector(8, 0);
        sys = with_unit_initial_residual(sys, x0);
        auto sampler = IndexSampler::for_system(sys, Action::columns, SamplingStrategy::uniform, sampler_seed(i));
        QCdRun run(sys, x0);
        for (std::size_t k = 1; k <= 8; ++k) {
            run.step(sampler.next());
            s.worst_solution = std::max(s.worst_solution, run.solution_fidelity());
            s.worst_residual = std::max(s.worst_residual, run.residual_fidelity());
            s.worst_norm = std::max(s.worst_norm, run.state_norm_error());
            s.worst_bound_slack =
                std::max(s.worst_bound_slack, norm2(run.classical().x) - static_cast<double>(k + 1));
        }
    }
    s.elapsed = seconds_since(t0);
    return s;
}

Outcome criterion_rho_variant() {
    double worst_res = 0.0, worst_sol = 0.0;
    for (double target : {0.5, 2.0}) {
        for (std::uint64_t i = 0; i < 5; ++i) {
            auto base = pad_to_pow2(normalize_columns(generate({ProblemKind::random_consistent, 8, 0, 3000 + i})));
            Vector x0 = basis_vector(8, 0);
            Vector r0 = base.residual(x0);
            Vector b = base.rhs();
            axpy(target / norm2(r0) - 1.0, r0, b);
            auto sys = base.with_rhs(b, std::nullopt);
            auto sampler = IndexSampler::for_system(sys, Action::columns, SamplingStrategy::uniform, i);
            QCdRun run(sys, x0);
            if (!run.extra_ancilla() || std::abs(norm2(run.classical().r) - target) > 1e-12) {
                return {false, "instance setup did not reach ||r0|| = " + std::to_string(target)};
            }
            for (int k = 0; k < 8; ++k) {
                run.step(sampler.next());
                worst_res = std::max(worst_res, run.residual_fidelity());
                worst_sol = std::max(worst_sol, max_abs_diff(run.recovered_solution(), run.classical().x));
            }
        }
    }
    return {worst_res <= 1e-10 && worst_sol <= 1e-10,
            "residual " + sci(worst_res) + ", decoded solution " + sci(worst_sol) + " over ||r0|| in {0.5, 2}"};
}

Outcome criterion_factorization() {
    std::mt19937_64 rng(6006);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::size_t n = std::size_t{2} << (rep % 3);
        std::size_t q = 1 + rep % 3;
        Vector a = random_unit(n, rng);
        auto v = build_row_oracle(a);
        auto x = random_state(q, n, rng);
        auto y = x;
        std::size_t target = 1 + rep % q;
        apply_ut(x, a, target);
        apply_ut_factored(y, v, target);
        worst = std::max(worst, max_abs_diff(amps_of(x), amps_of(y)));
        if (q == 1) {
            worst = std::max(worst, dense::max_abs_diff(dense::ut_factored(v.dense()), dense::ut_kron(a)));
        }
    }
    return {worst <= 1e-12, "max deviation " + sci(worst) + " over 100 pairs"};
}

Outcome criterion_lcu() {
    std::mt19937_64 rng(7007);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::size_t n = std::size_t{2} << (rep % 4);
        Vector a = random_unit(n, rng), psi = random_unit(n, rng);
        auto out = lcu_apply(LcuPlan::projector(a), psi);
        Vector expect = psi;
        axpy(-dot(a, psi), a, expect);
        worst = std::max(worst, max_abs_diff(zero_block(out).vector, expect));
    }
    return {worst <= 1e-12, "max deviation " + sci(worst) + " over 100 pairs"};
}

// Literal dense W_t on an ordered pair, conjugated onto the last two qubits.
dense::Matrix wt_on_pair(std::size_t t, std::size_t n, std::size_t i, std::size_t j, std::size_t q) {
    dense::Matrix a = dense::swap(j, q, q);
    dense::Matrix b = dense::swap(i == q ? j : i, q - 1, q);
    dense::Matrix perm = dense::with_system(dense::matmul(b, a), n);
    return dense::matmul(dense::matmul(perm.transposed(), dense::wt_last_pair(t, n, q)), perm);
}

Outcome criterion_dense() {
    std::mt19937_64 rng(8008);
    double worst = 0.0;
    auto track = [&](const SimState &s, const Vector &e) { worst = std::max(worst, max_abs_diff(amps_of(s), e)); };
    for (std::size_t q = 1; q <= 3; ++q) {
        for (std::size_t n : {std::size_t{2}, std::size_t{4}}) {
            Vector a = random_unit(n, rng);
            for (std::size_t i = 1; i <= q; ++i) {
                auto s = random_state(q, n, rng);
                Vector e = dense::matvec(dense::ut_on(a, i, q), amps_of(s));
                apply_ut(s, a, i);
                track(s, e);
                for (std::size_t k = 0; k < 3; ++k) {
                    auto g = random_state(q, n, rng);
                    Vector ge = dense::matvec(dense::with_system(dense::on_qubit(dense::gk(k), i, q), n), amps_of(g));
                    apply_gk(g, k, i);
                    track(g, ge);
                }
                for (std::size_t j = 1; j <= q; ++j) {
                    auto sw = random_state(q, n, rng);
                    Vector se = dense::matvec(dense::with_system(dense::swap(i, j, q), n), amps_of(sw));
                    swap_qubits(sw, i, j);
                    track(sw, se);
                    if (i == j) continue;
                    for (std::size_t t = 0; t < n; ++t) {
                        auto w = random_state(q, n, rng);
                        Vector we = dense::matvec(wt_on_pair(t, n, i, j, q), amps_of(w));
                        apply_wt(w, t, i, j);
                        track(w, we);
                    }
                }
            }
        }
    }
    // Solution-update composite on the prepared superposition, k <= 2.
    for (std::size_t n : {std::size_t{2}, std::size_t{4}}) {
        for (std::size_t k = 0; k <= 2; ++k) {
            for (std::size_t t = 0; t < n; ++t) {
                auto psi = random_state(2 * k + 2, n, rng);
                Vector e = dense::matvec(dense::cd_solution_composite(t, k, n), amps_of(psi));
                apply_solution_update(psi, t, k);
                track(psi, e);
            }
        }
    }
    return {worst <= 1e-13, "max deviation " + sci(worst)};
}

Outcome criterion_expectation() {
    auto t0 = std::chrono::steady_clock::now();
    auto rep = expectation_check(8, 10000, 8, 9);
    double elapsed = seconds_since(t0);
    return {rep.passed && elapsed < 5.0, "mean " + std::to_string(rep.mean) + ", expected " +
                                             std::to_string(rep.expected) + ", z " + std::to_string(rep.z_score) +
                                             ", " + std::to_string(elapsed) + " s"};
}

Outcome criterion_readout() {
    const double eps = 0.05;
    auto ksys = pad_to_pow2(normalize_rows(generate({ProblemKind::random_consistent, 8, 0, 10})));
    auto ks = IndexSampler::for_system(ksys, Action::rows, SamplingStrategy::uniform, 10);
    auto krun = run_qkaczmarz(ksys, ks, 8, basis_vector(8, 0));

    auto csys = pad_to_pow2(normalize_columns(generate({ProblemKind::random_consistent, 8, 0, 11})));
    csys = with_unit_initial_residual(csys, basis_vector(8, 0));
    auto cs = IndexSampler::for_system(csys, Action::columns, SamplingStrategy::uniform, 11);
    auto crun = run_qcd(csys, cs, 6, basis_vector(8, 0));

    std::mt19937_64 probe_rng(12);
    Vector c = random_unit(8, probe_rng);
    for (double &v : c) v *= 2.5;

    auto coverage = [&](const SimState &state, double mu, const Vector &x) {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            std::mt19937_64 rng(seed);
            auto est = overlap_sampled(state, c, eps, mu, rng);
            hits += std::abs(est.rescaled - dot(x, c)) <= eps;
        }
        return hits;
    };
    int kh = coverage(krun.state(), krun.mu(), krun.classical().x);
    int ch = coverage(crun.solution_state(), static_cast<double>(crun.k() + 1), crun.classical().x);
    return {kh >= 190 && ch >= 190,
            "Kaczmarz " + std::to_string(kh) + "/200, coordinate descent " + std::to_string(ch) + "/200"};
}

Outcome criterion_unitarity(double run_norm_error) {
    std::mt19937_64 rng(1111);
    double worst = 0.0;
    auto defect = [&](std::size_t q, std::size_t n, const std::function<void(SimState &)> &op) {
        worst = std::max(worst, detail::orthogonality_defect(q, n, op));
    };
    for (std::size_t n : {std::size_t{2}, std::size_t{4}, std::size_t{8}}) {
        Vector a = random_unit(n, rng);
        auto v = build_row_oracle(a);
        auto s = build_column_oracle(a, n - 1);
        defect(0, n, [&](SimState &x) { apply_oracle(x, v); });
        defect(0, n, [&](SimState &x) { apply_oracle(x, s); });
        defect(2, n, [&](SimState &x) { apply_ut(x, a, 2); });
        defect(2, n, [&](SimState &x) { apply_ut_factored(x, v, 1); });
        defect(2, n, [&](SimState &x) { apply_wt(x, n / 2, 1, 2); });
        defect(2, n, [&](SimState &x) { apply_gk(x, 3, 2); });
        defect(2, n, [&](SimState &x) { swap_qubits(x, 1, 2); });
        defect(3, n, [&](SimState &x) { apply_solution_update(x, 0, 1); });
        auto plan = LcuPlan::projector(a);
        defect(1, n, [&](SimState &x) {
            apply_single_qubit(x, 1, plan.prepare());
            for (std::size_t j = 0; j < 2; ++j) plan.unitaries[j](x.block(j));
            apply_single_qubit(x, 1, transpose(plan.prepare()));
        });
    }
    double worst_inv = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        auto st = random_state(3, 8, rng);
        Vector before = amps_of(st);
        Vector a = random_unit(8, rng);
        apply_ut(st, a, 1 + rep % 3);
        apply_ut(st, a, 1 + rep % 3);
        worst_inv = std::max(worst_inv, max_abs_diff(amps_of(st), before));
        apply_wt(st, rep % 8, 1, 3);
        apply_wt(st, rep % 8, 1, 3);
        worst_inv = std::max(worst_inv, max_abs_diff(amps_of(st), before));
    }
    return {worst <= 1e-12 && worst_inv <= 1e-12 && run_norm_error <= 1e-10,
            "orthogonality " + sci(worst) + ", involutions " + sci(worst_inv) + ", run norms " + sci(run_norm_error)};
}

Outcome criterion_determinism() {
    for (Algorithm a : {Algorithm::kaczmarz, Algorithm::cd, Algorithm::classical_kaczmarz, Algorithm::classical_cd}) {
        RunConfig c;
        c.algorithm = a;
        c.problem = {ProblemKind::random_consistent, 8, 0, 1};
        c.steps = a == Algorithm::cd ? 6 : 12;
        c.seed = 1;
        std::string first = execute(c).trace.to_jsonl(false);
        std::string second = execute(c).trace.to_jsonl(false);
        if (first != second) return {false, std::string(to_string(a)) + " traces differ"};
    }
    return {true, "all four algorithms byte-identical without wall_time"};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char *what, const Outcome &o) {
        std::printf("[%s] %2d %s: %s\n", o.passed ? "PASS" : "FAIL", id, what, o.detail.c_str());
        std::fflush(stdout);
        failures += o.passed ? 0 : 1;
    };
    auto guarded = [&](const std::function<Outcome()> &fn) -> Outcome {
        try {
            return fn();
        } catch (const std::exception &e) {
            return {false, std::string("exception: ") + e.what()};
        }
    };

    KaczmarzSweep ks;
    CdSweep cs;
    report(1, "quantum Kaczmarz block equality", guarded([&] {
               ks = kaczmarz_sweep();
               return Outcome{ks.worst_block <= 1e-10 && ks.elapsed < 10.0,
                              "max deviation " + sci(ks.worst_block) + " over 20 systems x 12 steps, " +
                                  std::to_string(ks.elapsed) + " s"};
           }));
    report(2, "mu recurrence and linear oracle calls", guarded([&] {
               return Outcome{ks.worst_mu <= 1e-12 && ks.calls_linear,
                              "mu error " + sci(ks.worst_mu) + ", calls " +
                                  (ks.calls_linear ? "exactly 3 per step" : "not linear")};
           }));
    report(3, "quantum coordinate descent block equality", guarded([&] {
               cs = cd_sweep();
               return Outcome{cs.worst_solution <= 1e-10 && cs.worst_residual <= 1e-10 && cs.elapsed < 60.0,
                              "solution " + sci(cs.worst_solution) + ", residual " + sci(cs.worst_residual) +
                                  " over 20 systems x 8 steps, " + std::to_string(cs.elapsed) + " s"};
           }));
    report(4, "iterate norm bound ||x_k|| <= k+1", guarded([&] {
               return Outcome{cs.worst_bound_slack <= 0.0,
                              "max ||x_k|| - (k+1) = " + sci(cs.worst_bound_slack)};
           }));
    report(5, "rescaled residual variant", guarded(criterion_rho_variant));
    report(6, "U_t oracle factorization", guarded(criterion_factorization));
    report(7, "LCU projector equivalence", guarded(criterion_lcu));
    report(8, "dense-equivalence of structured operators", guarded(criterion_dense));
    report(9, "expectation of mu_k^2", guarded(criterion_expectation));
    report(10, "sampled readout contract", guarded(criterion_readout));
    report(11, "unitarity and involutions", guarded([&] {
               return criterion_unitarity(std::max(ks.worst_norm, cs.worst_norm));
           }));
    report(12, "trace determinism", guarded(criterion_determinism));

    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
