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
#include <random>
#include <string_view>

#include "qiter/simstate.hpp"

namespace qiter {

enum class OverlapMode { exact, sampled };

inline OverlapMode parse_overlap_mode(std::string_view text) {
    if (text == "exact") return OverlapMode::exact;
    if (text == "sampled") return OverlapMode::sampled;
    throw Error(ErrorCode::Parse, "unknown readout mode '" + std::string(text) + "'");
}

struct OverlapEstimate {
    /// Estimate of <0..0, c/||c|| | state>, i.e. ||x|| <x|c> / mu.
    double value = 0.0;
    /// value * mu * ||c||, the estimate of x . c.
    double rescaled = 0.0;
    std::size_t samples = 0;
    double standard_error = 0.0;
    OverlapMode mode = OverlapMode::exact;
};

namespace detail {

inline Vector unit_probe(std::span<const double> c, std::size_t dim, double &c_norm) {
    if (c.size() > dim) {
        throw Error(ErrorCode::DimensionMismatch, "probe longer than the system register");
    }
    c_norm = norm2(c);
    if (c_norm < 1e-300) {
        throw Error(ErrorCode::NotUnitNorm, "probe vector is zero");
    }
    Vector u(dim, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        u[i] = c[i] / c_norm;
    }
    return u;
}

}  // namespace detail

/// Signed overlap <0^q, c^ | state> with c^ = c / ||c||.
inline double overlap_exact(const SimState &state, std::span<const double> c) {
    double c_norm = 0.0;
    Vector u = detail::unit_probe(c, state.dim_sys(), c_norm);
    return dot(state.block(0), u);
}

inline double inner_product(const SimState &a, const SimState &b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "states have different dimensions");
    }
    return dot(a.amps(), b.amps());
}

/// Swap-test acceptance probability 1/2 + |<a|b>|^2 / 2.
inline double swap_test_prob(const SimState &a, const SimState &b) {
    double ov = inner_product(a, b);
    return 0.5 + 0.5 * ov * ov;
}

/// Hadamard-test acceptance probability (1 + <a|b>) / 2 for real states.
inline double hadamard_test_prob(const SimState &a, const SimState &b) {
    return 0.5 * (1.0 + inner_product(a, b));
}

/// |0^q> (x) c^ as a state of the same shape.
inline SimState probe_state(const SimState &like, std::span<const double> c) {
    double c_norm = 0.0;
    Vector u = detail::unit_probe(c, like.dim_sys(), c_norm);
    SimState s(like.num_ancillas(), like.dim_sys(), like.amplitude_cap());
    std::copy(u.begin(), u.end(), s.block(0).begin());
    return s;
}

/// Shots needed for a 3-sigma error of `epsilon_prime` on the overlap.
inline std::size_t readout_samples(double epsilon_prime) {
    return static_cast<std::size_t>(std::ceil(9.0 / (epsilon_prime * epsilon_prime)));
}

/// Signed overlap from a fixed number of Hadamard-test shots.
inline OverlapEstimate overlap_from_shots(const SimState &state, std::span<const double> c, std::size_t shots,
                                          std::mt19937_64 &rng) {
    double c_norm = 0.0;
    detail::unit_probe(c, state.dim_sys(), c_norm);
    double p = hadamard_test_prob(state, probe_state(state, c));
    p = std::clamp(p, 0.0, 1.0);
    std::binomial_distribution<std::size_t> draws(shots, p);
    double accept = static_cast<double>(draws(rng)) / static_cast<double>(shots);
    OverlapEstimate est;
    est.value = 2.0 * accept - 1.0;
    est.samples = shots;
    est.standard_error = 2.0 * std::sqrt(accept * (1.0 - accept) / static_cast<double>(shots));
    est.mode = OverlapMode::sampled;
    return est;
}

/// Sampled estimate of x . c to within epsilon: runs m = ceil(9 / eps'^2)
/// Hadamard-test shots with eps' = epsilon / (mu ||c||), then rescales.
inline OverlapEstimate overlap_sampled(const SimState &state, std::span<const double> c, double epsilon, double mu,
                                       std::mt19937_64 &rng) {
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::Parse, "epsilon must be positive");
    }
    double c_norm = norm2(c);
    double eps_prime = epsilon / (mu * c_norm);
    OverlapEstimate est = overlap_from_shots(state, c, readout_samples(eps_prime), rng);
    est.rescaled = est.value * mu * c_norm;
    return est;
}

/// Magnitude |<a|b>| from swap-test shots.
inline double overlap_magnitude_sampled(const SimState &a, const SimState &b, std::size_t shots,
                                        std::mt19937_64 &rng) {
    std::binomial_distribution<std::size_t> draws(shots, std::clamp(swap_test_prob(a, b), 0.0, 1.0));
    double accept = static_cast<double>(draws(rng)) / static_cast<double>(shots);
    return std::sqrt(std::max(0.0, 2.0 * accept - 1.0));
}

inline OverlapEstimate overlap_exact_estimate(const SimState &state, std::span<const double> c, double mu) {
    OverlapEstimate est;
    est.value = overlap_exact(state, c);
    est.rescaled = est.value * mu * norm2(c);
    return est;
}

}  // namespace qiter
