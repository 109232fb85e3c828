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

#include <algorithm>
#include <cmath>
#include <optional>

#include "qiter/classical.hpp"
#include "qiter/engine.hpp"
#include "qiter/oracles.hpp"
#include "qiter/simstate.hpp"
#include "qiter/trace.hpp"

namespace qiter {

/// Residual norms within this distance of 1 use the plain residual encoding.
inline constexpr double kUnitResidualTolerance = 1e-12;

/// Swaps, W_t and G_k of the solution update, applied to the prepared state
/// beta |00>|X> + gamma |10>|S_t R> (two fresh leftmost qubits, Q ancillas
/// in total). Moves the fresh pair next to the system register, then
/// applies W_t on that pair and G_k on the last qubit.
///
/// The swap into position Q is done before the swap into Q-1: for Q >= 4
/// the two commute, and for Q = 3 only this order lands the pair on
/// (Q-1, Q).
inline void apply_solution_update(SimState &psi, std::size_t t, std::size_t k) {
    std::size_t q = psi.num_ancillas();
    if (q < 2) {
        throw Error(ErrorCode::InvalidQubit, "solution update needs at least two ancillas");
    }
    swap_qubits(psi, 2, q);
    swap_qubits(psi, 1, q - 1);
    apply_wt(psi, t, q - 1, q);
    apply_gk(psi, k, q);
}

/// Quantum coordinate descent.
///
/// The solution state keeps x~_k / (k+1) in its all-zeros block and the
/// residual state keeps rho * r_k in its all-zeros block. With a unit
/// initial residual rho = 1 and x~_k is the classical iterate x_k. Otherwise
/// the residual carries one extra leading ancilla with amplitude
/// rho ||r_0|| on |0>, and x~ follows x~_{k+1} = x~_k + rho (a_t . r_k) e_t,
/// i.e. x~_k = x_0 + rho (x_k - x_0); `recovered_solution` undoes that.
class QCdRun {
   public:
    QCdRun(const LinearSystem &sys, Vector x0, EngineOptions opts = {})
        : sys_(pad_to_pow2(sys)), oracles_(sys_), opts_(opts) {
        if (sys_.mode() != Normalization::columns) {
            throw Error(ErrorCode::Unsupported, "quantum coordinate descent needs a column-normalized system");
        }
        x0 = detail::zero_extend(std::move(x0), sys_.cols());
        if (std::abs(norm2(x0) - 1.0) > kUnitNormTolerance) {
            throw Error(ErrorCode::NotUnitNorm, "x0 must be a unit vector");
        }
        x0_ = x0;
        scaled_x_ = x0;
        xstate_ = SimState::from_system_vector(x0, opts_.amplitude_cap);
        xstate_.layout().clear();
        classical_ = cd_init(sys_, std::move(x0));

        const Vector &r0 = classical_.r;
        double r_norm = norm2(r0);
        if (std::abs(r_norm - 1.0) <= kUnitResidualTolerance) {
            Vector unit = r0;
            for (double &v : unit) v /= r_norm;
            rstate_ = SimState::from_system_vector(unit, opts_.amplitude_cap);
        } else {
            extra_ancilla_ = true;
            Vector direction = basis_vector(sys_.rows(), 0);
            double weight = 0.0;
            if (r_norm >= kZeroNormThreshold) {
                rho_ = r_norm > 1.0 ? 1.0 / r_norm : 1.0;
                weight = std::min(1.0, rho_ * r_norm);
                direction = r0;
                for (double &v : direction) v /= r_norm;
            }
            SimState unit = SimState::from_system_vector(direction, opts_.amplitude_cap);
            rstate_ = prepend_superposed_ancilla(unit, unit, weight, std::sqrt(std::max(0.0, 1.0 - weight * weight)),
                                                 "rho");
        }
        trace_.records.push_back(make_record(std::nullopt, true));
    }

    /// Ancilla count of the solution state after `steps` steps.
    std::size_t solution_ancillas_after(std::size_t steps) const {
        std::size_t qx = xstate_.num_ancillas();
        std::size_t qr = rstate_.num_ancillas();
        for (std::size_t i = 0; i < steps; ++i) {
            qx = std::max(qx, qr) + 2;
            qr += 1;
        }
        return qx;
    }

    /// Solution half of a step: consumes |R_k>, produces |X_{k+1}>.
    void step_solution(std::size_t t) {
        if (pending_) {
            throw Error(ErrorCode::Unsupported, "solution update already applied for this step");
        }
        detail::check_col_index(sys_, t);
        std::size_t common = std::max(xstate_.num_ancillas(), rstate_.num_ancillas());
        check_amplitude_cap(common + 2, sys_.cols(), opts_.amplitude_cap);

        SimState x = prepend_zero_ancillas(xstate_, common - xstate_.num_ancillas());
        SimState y = prepend_zero_ancillas(rstate_, common - rstate_.num_ancillas());
        apply_oracle(y, oracles_.column_select(t));
        oracle_calls_ += 1;

        double kk = static_cast<double>(k_);
        SimState psi = prepend_superposed_ancilla(prepend_zero_ancillas(x, 1, "s" + std::to_string(k_)),
                                                  prepend_zero_ancillas(y, 1, "s" + std::to_string(k_)),
                                                  std::sqrt((kk + 1.0) / (kk + 2.0)), std::sqrt(1.0 / (kk + 2.0)),
                                                  "c" + std::to_string(k_));
        apply_solution_update(psi, t, k_);
        xstate_ = std::move(psi);

        correction_ = rho_ * dot(sys_.column(t), classical_.r);
        pending_ = true;
        pending_t_ = t;
    }

    /// Residual half of a step: |R_k> -> |R_{k+1}>. Must follow
    /// step_solution with the same index.
    void step_residual(std::size_t t) {
        if (!pending_ || t != pending_t_) {
            throw Error(ErrorCode::Unsupported, "residual update must follow the solution update of the same step");
        }
        std::size_t q = rstate_.num_ancillas();
        check_amplitude_cap(q + 1, sys_.rows(), opts_.amplitude_cap);
        SimState next = prepend_zero_ancillas(rstate_, 1, "r" + std::to_string(k_));
        swap_qubits(next, 1, q + 1);
        apply_ut(next, sys_.column(t), q + 1);
        oracle_calls_ += 2;
        rstate_ = std::move(next);

        scaled_x_[t] += correction_;
        cd_step(classical_, sys_, t);
        k_ += 1;
        pending_ = false;
        bool check = opts_.check_every > 0 && k_ % opts_.check_every == 0;
        trace_.records.push_back(make_record(t, check));
    }

    void step(std::size_t t) {
        step_solution(t);
        step_residual(t);
    }

    void check_now() {
        auto &rec = trace_.records.back();
        if (rec["solution_fidelity"].is_null()) {
            std::size_t t = rec["t"].is_null() ? 0 : rec["t"].get<std::size_t>();
            rec = make_record(rec["t"].is_null() ? std::nullopt : std::optional<std::size_t>(t), true);
        }
    }

    /// max_i |(k+1) * block_i - x~_k,i|
    double solution_fidelity() const {
        Vector scaled = zero_block(xstate_).vector;
        for (double &v : scaled) {
            v *= static_cast<double>(k_ + 1);
        }
        return max_abs_diff(scaled, scaled_x_);
    }

    /// max_i |block_i / rho - r_k,i|
    double residual_fidelity() const {
        Vector scaled = zero_block(rstate_).vector;
        for (double &v : scaled) {
            v /= rho_;
        }
        return max_abs_diff(scaled, classical_.r);
    }

    double state_norm_error() const {
        return std::max(std::abs(xstate_.norm() - 1.0), std::abs(rstate_.norm() - 1.0));
    }

    /// x_0 + (x~_k - x_0) / rho: the classical iterate decoded from the
    /// encoded one.
    Vector recovered_solution() const {
        Vector x = scaled_x_;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = x0_[i] + (scaled_x_[i] - x0_[i]) / rho_;
        }
        return x;
    }

    const LinearSystem &system() const noexcept {
        return sys_;
    }
    const SimState &solution_state() const noexcept {
        return xstate_;
    }
    const SimState &residual_state() const noexcept {
        return rstate_;
    }
    const CdState &classical() const noexcept {
        return classical_;
    }
    /// Target of the solution block (equals classical().x when rho == 1).
    const Vector &scaled_iterate() const noexcept {
        return scaled_x_;
    }
    double rho() const noexcept {
        return rho_;
    }
    bool extra_ancilla() const noexcept {
        return extra_ancilla_;
    }
    std::size_t k() const noexcept {
        return k_;
    }
    std::size_t oracle_calls() const noexcept {
        return oracle_calls_;
    }
    const Trace &trace() const noexcept {
        return trace_;
    }
    Trace &trace() noexcept {
        return trace_;
    }
    bool failed() const noexcept {
        return trace_.failed;
    }

   private:
    nlohmann::json make_record(std::optional<std::size_t> t, bool check) {
        double residual_norm = norm2(classical_.r);
        double scaled_norm = norm2(scaled_x_);
        nlohmann::json rec = {{"type", "step"},
                              {"k", k_},
                              {"mu", static_cast<double>(k_ + 1)},
                              {"rho", rho_},
                              {"classical_residual_norm", residual_norm},
                              {"x_norm", norm2(classical_.x)},
                              {"scaled_x_norm", scaled_norm},
                              {"state_amplitudes", xstate_.size() + rstate_.size()},
                              {"solution_amplitudes", xstate_.size()},
                              {"residual_amplitudes", rstate_.size()},
                              {"oracle_calls", oracle_calls_},
                              {"wall_time", watch_.seconds()}};
        rec["t"] = t ? nlohmann::json(*t) : nlohmann::json(nullptr);
        if (check) {
            double sol = solution_fidelity();
            double res = residual_fidelity();
            double norm_err = state_norm_error();
            double decoded = max_abs_diff(recovered_solution(), classical_.x);
            bool bound = scaled_norm <= static_cast<double>(k_ + 1) && rho_ * residual_norm <= 1.0 + 1e-12;
            rec["solution_fidelity"] = sol;
            rec["residual_fidelity"] = res;
            rec["block_fidelity"] = std::max(sol, res);
            rec["decoded_solution_error"] = decoded;
            rec["state_norm_error"] = norm_err;
            rec["norm_bound_ok"] = bound;
            if (!(sol <= kBlockTolerance) || !(res <= kBlockTolerance) || !(norm_err <= kBlockTolerance) || !bound) {
                trace_.failed = true;
            }
        } else {
            rec["solution_fidelity"] = nullptr;
            rec["block_fidelity"] = nullptr;
        }
        return rec;
    }

    LinearSystem sys_;
    OracleSet oracles_;
    EngineOptions opts_;
    SimState xstate_;
    SimState rstate_;
    CdState classical_;
    Vector x0_;
    Vector scaled_x_;
    double rho_ = 1.0;
    bool extra_ancilla_ = false;
    double correction_ = 0.0;
    bool pending_ = false;
    std::size_t pending_t_ = 0;
    std::size_t k_ = 0;
    std::size_t oracle_calls_ = 0;
    Trace trace_;
    detail::Stopwatch watch_;
};

inline QCdRun run_qcd(const LinearSystem &sys, IndexSampler &sampler, std::size_t steps, Vector x0,
                      EngineOptions opts = {}) {
    QCdRun run(sys, std::move(x0), opts);
    check_amplitude_cap(run.solution_ancillas_after(steps), run.system().cols(), opts.amplitude_cap);
    for (std::size_t i = 0; i < steps; ++i) {
        run.step(sampler.next());
    }
    run.check_now();
    return run;
}

}  // namespace qiter
