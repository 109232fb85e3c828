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

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qiter/harness.hpp"
#include "qiter/lcu.hpp"

namespace qiter {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::size_t n = 8;
    std::size_t kaczmarz_steps = 12;
    std::size_t cd_steps = 6;
    std::size_t seeds = 5;
    std::size_t random_pairs = 100;
    std::size_t expectation_trials = 10000;
    std::uint64_t seed = 1;

    static VerifyOptions quick() {
        VerifyOptions o;
        o.n = 4;
        o.kaczmarz_steps = 6;
        o.cd_steps = 5;
        o.seeds = 3;
        o.random_pairs = 50;
        o.expectation_trials = 4000;
        return o;
    }
};

namespace detail {

inline std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << v;
    return s.str();
}

inline SimState random_state(std::size_t q, std::size_t dim, std::mt19937_64 &rng) {
    SimState s(q, dim);
    Vector v = random_unit_vector(s.size(), rng);
    std::copy(v.begin(), v.end(), s.amps().begin());
    return s;
}

/// Columns of an operator given as an in-place map on states.
inline double orthogonality_defect(std::size_t q, std::size_t dim, const std::function<void(SimState &)> &op) {
    std::size_t size = SimState(q, dim).size();
    std::vector<Vector> cols;
    for (std::size_t j = 0; j < size; ++j) {
        SimState s(q, dim);
        s.amps()[j] = 1.0;
        op(s);
        cols.emplace_back(s.amps().begin(), s.amps().end());
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            worst = std::max(worst, std::abs(dot(cols[i], cols[j]) - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

}  // namespace detail

/// The invariant suite behind `verify`. Every check is independent; the
/// suite passes when all of them do.
inline std::vector<CheckResult> run_verify_suite(const VerifyOptions &o) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(o.seed);
    const std::size_t n = o.n;

    {
        double worst_map = 0.0, worst_orth = 0.0;
        LinearSystem rows = pad_to_pow2(normalize_rows(generate({ProblemKind::random_general, n, 0, o.seed})));
        LinearSystem cols = pad_to_pow2(normalize_columns(generate({ProblemKind::random_general, n, 0, o.seed})));
        OracleSet ro(rows), co(cols);
        for (std::size_t t = 0; t < n; ++t) {
            auto row = rows.row(t);
            worst_map = std::max(worst_map, max_abs_diff(ro.row(t)(basis_vector(n, 0)), row));
            auto col = cols.column(t);
            worst_map = std::max(worst_map, max_abs_diff(co.column_select(t)(col), basis_vector(n, t)));
            for (const Reflector *r : {&ro.row(t), &co.column_select(t), &co.column_prep(t)}) {
                Matrix m = r->dense();
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        double g = 0.0;
                        for (std::size_t l = 0; l < n; ++l) g += m(l, i) * m(l, j);
                        worst_orth = std::max(worst_orth, std::abs(g - (i == j ? 1.0 : 0.0)));
                    }
                }
            }
        }
        out.push_back({"oracle defining properties", worst_map <= 1e-13, "max error " + detail::sci(worst_map)});
        out.push_back({"oracle orthogonality", worst_orth <= 1e-12, "max |O^T O - I| " + detail::sci(worst_orth)});
    }

    {
        double worst_op = 0.0;
        Vector a = random_unit_vector(n, rng);
        std::size_t t = n / 2;
        worst_op = std::max(worst_op, detail::orthogonality_defect(2, n, [&](SimState &s) { apply_ut(s, a, 2); }));
        worst_op = std::max(worst_op, detail::orthogonality_defect(2, n, [&](SimState &s) { apply_wt(s, t, 1, 2); }));
        worst_op = std::max(worst_op, detail::orthogonality_defect(2, n, [&](SimState &s) { apply_gk(s, 3, 1); }));
        worst_op = std::max(worst_op, detail::orthogonality_defect(3, n, [&](SimState &s) { swap_qubits(s, 1, 3); }));
        out.push_back({"structured operator orthogonality", worst_op <= 1e-12, "max |O^T O - I| " + detail::sci(worst_op)});
    }

    {
        double worst = 0.0;
        for (std::size_t i = 0; i < o.random_pairs; ++i) {
            Vector a = random_unit_vector(n, rng);
            SimState s = detail::random_state(3, n, rng);
            SimState u = s;
            apply_ut(u, a, 2);
            apply_ut(u, a, 2);
            worst = std::max(worst, max_abs_diff(u.amps(), s.amps()));
            SimState w = s;
            apply_wt(w, i % n, 2, 3);
            apply_wt(w, i % n, 2, 3);
            worst = std::max(worst, max_abs_diff(w.amps(), s.amps()));
        }
        out.push_back({"U_t and W_t involutions", worst <= 1e-12, "max deviation " + detail::sci(worst)});
    }

    {
        double worst = 0.0;
        for (std::size_t i = 0; i < o.random_pairs; ++i) {
            Vector a = random_unit_vector(n, rng);
            SimState s = detail::random_state(2, n, rng);
            SimState direct = s, factored = s;
            apply_ut(direct, a, 2);
            apply_ut_factored(factored, build_row_oracle(a), 2);
            worst = std::max(worst, max_abs_diff(direct.amps(), factored.amps()));
        }
        out.push_back({"U_t factorization through V_t", worst <= 1e-12, "max deviation " + detail::sci(worst)});
    }

    {
        double worst = 0.0;
        for (std::size_t i = 0; i < o.random_pairs; ++i) {
            Vector a = random_unit_vector(n, rng);
            Vector psi = random_unit_vector(n, rng);
            SimState lcu = lcu_apply(LcuPlan::projector(a), psi);
            Vector expected = psi;
            axpy(-dot(a, psi), a, expected);
            worst = std::max(worst, max_abs_diff(lcu.block(0), expected));
            worst = std::max(worst, std::abs(lcu.norm() - 1.0));
        }
        out.push_back({"LCU projector equivalence", worst <= 1e-12, "max deviation " + detail::sci(worst)});
    }

    {
        double fidelity = 0.0, mu_err = 0.0, norm_err = 0.0;
        bool linear = true;
        for (std::size_t s = 0; s < o.seeds; ++s) {
            RunConfig c;
            c.algorithm = Algorithm::kaczmarz;
            c.problem = {ProblemKind::random_consistent, n, 0, o.seed + s};
            c.seed = o.seed + s;
            c.steps = o.kaczmarz_steps;
            RunResult r = execute(c);
            for (const auto &rec : r.trace.records) {
                fidelity = std::max(fidelity, rec["block_fidelity"].get<double>());
                mu_err = std::max(mu_err, rec["mu_recurrence_error"].get<double>());
                norm_err = std::max(norm_err, rec["state_norm_error"].get<double>());
                linear = linear && rec["oracle_calls"].get<std::size_t>() == 3 * rec["k"].get<std::size_t>();
            }
        }
        out.push_back({"quantum Kaczmarz block equality", fidelity <= kBlockTolerance,
                       "max |mu_k block - x_k| " + detail::sci(fidelity)});
        out.push_back({"mu recurrence", mu_err <= 1e-12, "max error " + detail::sci(mu_err)});
        out.push_back({"Kaczmarz oracle calls linear in k", linear, "3 calls per step"});
        out.push_back({"Kaczmarz state norm", norm_err <= 1e-10, "max | ||state|| - 1 | " + detail::sci(norm_err)});
    }

    {
        double sol = 0.0, res = 0.0;
        bool bound = true, linear = true;
        for (std::size_t s = 0; s < o.seeds; ++s) {
            RunConfig c;
            c.algorithm = Algorithm::cd;
            c.problem = {ProblemKind::random_consistent, n, 0, o.seed + s};
            c.seed = o.seed + s;
            c.steps = o.cd_steps;
            RunResult r = execute(c);
            for (const auto &rec : r.trace.records) {
                sol = std::max(sol, rec["solution_fidelity"].get<double>());
                res = std::max(res, rec["residual_fidelity"].get<double>());
                bound = bound && rec["norm_bound_ok"].get<bool>();
                linear = linear && rec["oracle_calls"].get<std::size_t>() == 3 * rec["k"].get<std::size_t>();
            }
        }
        out.push_back({"quantum CD solution block equality", sol <= kBlockTolerance,
                       "max |(k+1) block - x_k| " + detail::sci(sol)});
        out.push_back({"quantum CD residual block equality", res <= kBlockTolerance,
                       "max |block / rho - r_k| " + detail::sci(res)});
        out.push_back({"CD iterate norm bound ||x_k|| <= k+1", bound, ""});
        out.push_back({"CD oracle calls linear in k", linear, "3 calls per step"});
    }

    {
        double worst = 0.0;
        bool bound = true;
        for (double target : {0.5, 2.0}) {
            LinearSystem sys = pad_to_pow2(normalize_columns(generate({ProblemKind::random_consistent, n, 0, o.seed})));
            Vector x0 = basis_vector(sys.cols(), 0);
            sys = with_unit_initial_residual(sys, x0);
            Vector ax = sys.matrix().multiply(x0);
            Vector b = sys.rhs();
            for (std::size_t i = 0; i < b.size(); ++i) b[i] = ax[i] + target * (b[i] - ax[i]);
            sys = sys.with_rhs(std::move(b), std::nullopt);
            IndexSampler sampler = IndexSampler::for_system(sys, Action::columns, SamplingStrategy::uniform, o.seed);
            QCdRun run = run_qcd(sys, sampler, o.cd_steps, x0);
            for (const auto &rec : run.trace().records) {
                worst = std::max(worst, rec["residual_fidelity"].get<double>());
                worst = std::max(worst, rec["solution_fidelity"].get<double>());
                bound = bound && rec["norm_bound_ok"].get<bool>();
            }
        }
        out.push_back({"CD rho-rescaled residual", worst <= kBlockTolerance && bound,
                       "max block deviation " + detail::sci(worst)});
    }

    {
        ExpectationReport rep = expectation_check(n, o.expectation_trials, n, o.seed);
        std::ostringstream d;
        d << "mean " << rep.mean << " expected " << rep.expected << " (k-1 form " << rep.expected_k_minus_one
          << ") z " << rep.z_score;
        out.push_back({"E[mu_k^2] under uniform sampling", rep.passed, d.str()});
    }
    return out;
}

}  // namespace qiter
