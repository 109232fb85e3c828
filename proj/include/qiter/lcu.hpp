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
#include <functional>
#include <numeric>
#include <vector>

#include "qiter/simstate.hpp"

namespace qiter {

/// In-place orthogonal map on the system register.
using SystemUnitary = std::function<void(std::span<double>)>;

/// sum_j alpha_j U_j as a linear combination of unitaries.
struct LcuPlan {
    std::vector<SystemUnitary> unitaries;
    std::vector<double> weights;

    double weight_sum() const {
        return std::accumulate(weights.begin(), weights.end(), 0.0);
    }

    /// Rotation taking |0> to sum_j sqrt(alpha_j / s) |j> (two terms only).
    Gate2 prepare() const {
        double s = weight_sum();
        double c = std::sqrt(weights.at(0) / s);
        double d = std::sqrt(weights.at(1) / s);
        return {c, -d, d, c};
    }

    /// U_0 = I, U_1 = I - 2|a><a|, alpha_0 = alpha_1 = 1/2: the combination is
    /// the projector I - |a><a|.
    static LcuPlan projector(Vector a) {
        LcuPlan plan;
        plan.unitaries.push_back([](std::span<double>) {});
        plan.unitaries.push_back([a = std::move(a)](std::span<double> x) { axpy(-2.0 * dot(a, x), a, x); });
        plan.weights = {0.5, 0.5};
        return plan;
    }
};

/// Prepare, select (controlled U_j), unprepare. The |0> block of the
/// returned state is (sum_j alpha_j U_j psi) / s.
inline SimState lcu_apply(const LcuPlan &plan, std::span<const double> psi) {
    if (plan.unitaries.size() != plan.weights.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one weight per unitary is required");
    }
    if (plan.unitaries.size() != 2) {
        throw Error(ErrorCode::Unsupported, "only two-term combinations are implemented");
    }
    for (double w : plan.weights) {
        if (!(w > 0.0)) {
            throw Error(ErrorCode::BadConvexWeights, "LCU weights must be positive");
        }
    }
    if (std::abs(norm2(psi) - 1.0) > 1e-12) {
        throw Error(ErrorCode::NotUnitNorm, "LCU input must be a unit vector");
    }
    SimState state = prepend_zero_ancillas(SimState::from_system_vector(psi), 1, "select");
    Gate2 prep = plan.prepare();
    apply_single_qubit(state, 1, prep);
    for (std::size_t j = 0; j < 2; ++j) {
        plan.unitaries[j](state.block(j));
    }
    apply_single_qubit(state, 1, transpose(prep));
    return state;
}

}  // namespace qiter
