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

#include "gtest/gtest.h"
#include "qiter/generate.hpp"
#include "qiter/qkaczmarz.hpp"
#include "qiter/readout.hpp"
#include "test_util.hpp"

using namespace qiter;
using namespace testutil;

TEST(readout, exact_overlap_examples) {
    Vector c = {0.6, 0.8};
    auto s = prepend_zero_ancillas(SimState::from_system_vector(c), 2);
    EXPECT_NEAR(overlap_exact(s, c), 1.0, 1e-15);
    EXPECT_NEAR(overlap_exact(s, Vector{-0.8, 0.6}), 0.0, 1e-15);
    // Unnormalized probes are normalized internally.
    EXPECT_NEAR(overlap_exact(s, Vector{3.0, 4.0}), 1.0, 1e-15);
    EXPECT_NEAR(overlap_exact(s, Vector{-3.0, -4.0}), -1.0, 1e-15);
    EXPECT_THROW(overlap_exact(s, Vector{1.0, 0.0, 0.0}), Error);

    std::mt19937_64 rng(3);
    auto r = random_state(3, 4, rng);
    Vector probe = random_unit(4, rng);
    EXPECT_NEAR(overlap_exact(r, probe), inner_product(r, probe_state(r, probe)), 1e-14);
}

TEST(readout, swap_test_examples) {
    std::mt19937_64 rng(4);
    auto a = random_state(2, 4, rng);
    EXPECT_NEAR(swap_test_prob(a, a), 1.0, 1e-15);

    auto e0 = basis_state("0", 0, 2);
    auto e1 = basis_state("0", 1, 2);
    EXPECT_NEAR(swap_test_prob(e0, e1), 0.5, 1e-15);

    auto v = state_from(1, 2, {0.6, 0.8, 0.0, 0.0});
    EXPECT_NEAR(swap_test_prob(e0, v), 0.68, 1e-15);

    auto neg = a;
    for (double &x : neg.amps()) x = -x;
    auto b = random_state(2, 4, rng);
    EXPECT_EQ(swap_test_prob(b, a), swap_test_prob(b, neg));
    EXPECT_NE(hadamard_test_prob(b, a), hadamard_test_prob(b, neg));
    EXPECT_THROW(swap_test_prob(a, e0), Error);
}

TEST(readout, sample_count) {
    EXPECT_EQ(readout_samples(1.0), 9u);
    EXPECT_EQ(readout_samples(0.1), 900u);
    EXPECT_EQ(readout_samples(0.05), 3600u);
}

TEST(readout, sampled_zero_and_large_epsilon) {
    auto e0 = basis_state("00", 0, 4);
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        auto est = overlap_from_shots(e0, Vector{0, 1, 0, 0}, 10000, rng);
        EXPECT_LE(std::abs(est.value), 3.0 / std::sqrt(10000.0) + 1e-12);
    }
    auto big = overlap_sampled(e0, Vector{1, 0, 0, 0}, 2.0, 1.0, rng);
    EXPECT_EQ(big.samples, 3u);
    EXPECT_LE(std::abs(big.rescaled - 1.0), 2.0);
    EXPECT_THROW(overlap_sampled(e0, Vector{1, 0, 0, 0}, 0.0, 1.0, rng), Error);
}

TEST(readout, verified_run_overlap) {
    auto sys = pad_to_pow2(normalize_rows(generate({ProblemKind::random_consistent, 8, 0, 2})));
    auto sampler = IndexSampler::for_system(sys, Action::rows, SamplingStrategy::uniform, 2);
    auto run = run_qkaczmarz(sys, sampler, 8, basis_vector(8, 0));
    std::mt19937_64 rng(5);
    Vector c = random_unit(8, rng);
    for (double &v : c) v *= 3.0;
    auto est = overlap_exact_estimate(run.state(), c, run.mu());
    EXPECT_LE(std::abs(est.rescaled - dot(run.classical().x, c)), 1e-10);

    int hits = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::mt19937_64 r(seed);
        auto s = overlap_sampled(run.state(), c, 0.05, run.mu(), r);
        hits += std::abs(s.rescaled - dot(run.classical().x, c)) <= 0.05;
    }
    EXPECT_GE(hits, 190);
}

TEST(readout, error_scales_as_inverse_sqrt_m) {
    std::mt19937_64 rng(6);
    auto st = random_state(2, 4, rng);
    Vector c = random_unit(4, rng);
    double exact = overlap_exact(st, c);
    std::vector<double> scaled;
    for (std::size_t m : {100, 10000, 1000000}) {
        double sq = 0.0;
        const int reps = 400;
        for (int r = 0; r < reps; ++r) {
            double e = overlap_from_shots(st, c, m, rng).value - exact;
            sq += e * e;
        }
        scaled.push_back(std::sqrt(sq / reps) * std::sqrt(static_cast<double>(m)));
    }
    double lo = *std::min_element(scaled.begin(), scaled.end());
    double hi = *std::max_element(scaled.begin(), scaled.end());
    EXPECT_LE(hi / lo, 3.0);
}

TEST(readout, magnitude_from_swap_test) {
    auto e0 = basis_state("0", 0, 2);
    auto v = state_from(1, 2, {-0.6, 0.8, 0.0, 0.0});
    std::mt19937_64 rng(2);
    EXPECT_NEAR(overlap_magnitude_sampled(e0, v, 1000000, rng), 0.6, 0.01);
}
