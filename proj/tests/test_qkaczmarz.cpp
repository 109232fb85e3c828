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

#include "dense_reference.hpp"
#include "gtest/gtest.h"
#include "qiter/generate.hpp"
#include "qiter/qkaczmarz.hpp"
#include "test_util.hpp"

using namespace qiter;
using namespace testutil;

namespace {

LinearSystem rows_system(std::size_t n, std::uint64_t seed) {
    return pad_to_pow2(normalize_rows(generate({ProblemKind::random_consistent, n, 0, seed})));
}

}  // namespace

TEST(qkaczmarz, init) {
    auto sys = normalize_rows(LinearSystem(Matrix::identity(2), {0.6, 0.8}));
    QKaczmarzRun run(sys, {1.0, 0.0});
    EXPECT_EQ(run.k(), 0u);
    EXPECT_EQ(run.mu(), 1.0);
    EXPECT_EQ(amps_of(run.state()), (Vector{1.0, 0.0}));
    EXPECT_EQ(run.state().num_ancillas(), 0u);
    try {
        QKaczmarzRun bad(sys, {1.0, 1.0});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotUnitNorm);
    }
    EXPECT_THROW(QKaczmarzRun(normalize_columns(LinearSystem(Matrix::identity(2), {1, 0})), {1.0, 0.0}), Error);
}

TEST(qkaczmarz, identity_two_steps) {
    auto sys = normalize_rows(LinearSystem(Matrix::identity(2), {0.6, 0.8}));
    QKaczmarzRun run(sys, {1.0, 0.0});
    run.step(1);
    run.step(0);
    Vector block = zero_block(run.state()).vector;
    for (double &v : block) v *= run.mu();
    EXPECT_LE(max_abs_diff(block, Vector{0.6, 0.8}), 1e-12);
    EXPECT_NEAR(run.mu() * run.mu(), 2.0, 1e-14);
    EXPECT_FALSE(run.failed());
    EXPECT_THROW(run.step(2), Error);
}

TEST(qkaczmarz, zero_rhs_is_pure_projection) {
    Matrix a(2, 2);
    a(0, 0) = 0.6;
    a(0, 1) = 0.8;
    a(1, 1) = 1.0;
    auto sys = normalize_rows(LinearSystem(a, {0.0, 1.0}));
    std::mt19937_64 rng(2);
    Vector x0 = random_unit(2, rng);
    QKaczmarzRun run(sys, x0);
    run.step(0);
    EXPECT_EQ(run.beta(), 1.0);
    EXPECT_EQ(run.gamma(), 0.0);
    EXPECT_EQ(run.mu(), 1.0);
    Vector expect = x0;
    axpy(-dot(sys.row(0), x0), sys.row(0), expect);
    EXPECT_LE(max_abs_diff(zero_block(run.state()).vector, expect), 1e-15);

    run.step(1);
    EXPECT_NEAR(run.mu(), std::sqrt(2.0), 1e-15);
}

TEST(qkaczmarz, negative_rhs_sign) {
    auto sys = normalize_rows(LinearSystem(Matrix::identity(2), {-0.6, 0.8}));
    QKaczmarzRun run(sys, {0.0, 1.0});
    run.step(0);
    EXPECT_LT(run.gamma(), 0.0);
    EXPECT_LE(run.block_fidelity(), 1e-15);
}

TEST(qkaczmarz, block_equality_every_step) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto sys = rows_system(8, seed);
        auto sampler = IndexSampler::for_system(sys, Action::rows, SamplingStrategy::uniform, seed);
        QKaczmarzRun run(sys, basis_vector(8, 0));
        for (int k = 0; k < 12; ++k) {
            run.step(sampler.next());
            EXPECT_LE(run.block_fidelity(), 1e-10);
            EXPECT_LE(run.mu_recurrence_error(), 1e-12);
            EXPECT_LE(run.state_norm_error(), 1e-10);
        }
        EXPECT_FALSE(run.failed());
        EXPECT_EQ(run.oracle_calls(), 36u);
        EXPECT_EQ(run.state().num_ancillas(), 12u);
    }
}

TEST(qkaczmarz, dense_step_matches) {
    // (I^{k} (x) U_t) SWAP_{1,k+1} on beta|0>|X_k> + gamma|1>|0^k>|a_t>.
    std::mt19937_64 rng(6);
    for (std::size_t n : {2, 4}) {
        auto sys = rows_system(n, 40 + n);
        QKaczmarzRun run(sys, random_unit(n, rng));
        for (std::size_t k = 0; k < 3; ++k) {
            std::size_t t = k % n;
            Vector before = amps_of(run.state());
            double mu = run.mu();
            double b = sys.rhs()[t];
            double beta = mu / std::sqrt(mu * mu + b * b);
            double gamma = beta * b / mu;
            Vector a(sys.row(t).begin(), sys.row(t).end());
            Vector branch = dense::kron_vec(basis_vector(std::size_t{1} << k, 0), a);
            Vector in = dense::superpose(before, branch, beta, gamma);
            std::size_t q = k + 1;
            dense::Matrix op =
                dense::matmul(dense::ut_on(a, q, q), dense::with_system(dense::swap(1, q, q), n));
            Vector expect = dense::matvec(op, in);
            run.step(t);
            EXPECT_LE(max_abs_diff(amps_of(run.state()), expect), 1e-13);
        }
    }
}

TEST(qkaczmarz, trace_and_run) {
    auto sys = rows_system(4, 3);
    auto sampler = IndexSampler::for_system(sys, Action::rows, SamplingStrategy::uniform, 1);
    auto run = run_qkaczmarz(sys, sampler, 0, basis_vector(4, 0));
    EXPECT_EQ(run.k(), 0u);
    EXPECT_EQ(run.trace().records.size(), 1u);

    EngineOptions o;
    o.check_every = 0;
    auto r2 = run_qkaczmarz(sys, sampler, 5, basis_vector(4, 0), o);
    const auto &recs = r2.trace().records;
    ASSERT_EQ(recs.size(), 6u);
    EXPECT_TRUE(recs[2]["block_fidelity"].is_null());
    EXPECT_LE(recs.back()["block_fidelity"].get<double>(), 1e-10);
    for (const char *key : {"k", "t", "mu", "oracle_calls", "state_amplitudes", "classical_residual_norm", "wall_time"})
        EXPECT_TRUE(recs.back().contains(key)) << key;
    EXPECT_EQ(recs.back()["state_amplitudes"], 4 * 32);

    EngineOptions tight;
    tight.amplitude_cap = 64;
    try {
        run_qkaczmarz(sys, sampler, 5, basis_vector(4, 0), tight);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::AmplitudeCapExceeded);
    }
}

TEST(qkaczmarz, padded_system) {
    auto sys = pad_to_pow2(normalize_rows(generate({ProblemKind::random_consistent, 3, 0, 5})));
    auto sampler = IndexSampler::for_system(sys, Action::rows, SamplingStrategy::uniform, 5);
    auto run = run_qkaczmarz(sys, sampler, 8, basis_vector(3, 0));
    EXPECT_LE(run.block_fidelity(), 1e-10);
    EXPECT_FALSE(run.failed());
}
