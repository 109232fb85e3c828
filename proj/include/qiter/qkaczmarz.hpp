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
#include <optional>

#include "qiter/classical.hpp"
#include "qiter/engine.hpp"
#include "qiter/oracles.hpp"
#include "qiter/simstate.hpp"
#include "qiter/trace.hpp"

namespace qiter {

/// Quantum Kaczmarz: keeps |X_k> whose all-zeros block is x_k / mu_k, with
/// the classical iterate x_k advanced alongside on the same row sequence.
///
/// Each step prepends one ancilla carrying beta |X_k> + gamma |0..0>|a_t>,
/// swaps it next to the system register and applies U_t there. With
/// beta = mu_k / sqrt(mu_k^2 + b_t^2) and gamma = beta b_t / mu_k (signed,
/// so that negative b_t keep the right correction sign) the new zero block
/// is x_{k+1} / mu_{k+1}, mu_{k+1} = mu_k / beta.
class QKaczmarzRun {
   public:
    QKaczmarzRun(const LinearSystem &sys, Vector x0, EngineOptions opts = {})
        : sys_(pad_to_pow2(sys)), oracles_(sys_), opts_(opts) {
        if (sys_.mode() != Normalization::rows) {
            throw Error(ErrorCode::Unsupported, "quantum Kaczmarz needs a row-normalized system");
        }
        x0 = detail::zero_extend(std::move(x0), sys_.cols());
        if (std::abs(norm2(x0) - 1.0) > kUnitNormTolerance) {
            throw Error(ErrorCode::NotUnitNorm, "x0 must be a unit vector");
        }
        state_ = SimState::from_system_vector(x0, opts_.amplitude_cap);
        classical_ = kaczmarz_init(sys_, std::move(x0));
        trace_.records.push_back(make_record(std::nullopt, true));
    }

    void step(std::size_t t) {
        detail::check_row_index(sys_, t);
        std::size_t k = k_;
        check_amplitude_cap(k + 1, sys_.cols(), opts_.amplitude_cap);
        double b_t = sys_.rhs()[t];
        beta_ = mu_ / std::hypot(mu_, b_t);
        gamma_ = beta_ * b_t / mu_;

        // |0..0>|a_t> through one call of the preparation oracle.
        Vector a_t = basis_vector(sys_.cols(), 0);
        oracles_.row(t).apply(a_t);
        oracle_calls_ += 1;
        SimState branch(k, sys_.cols(), opts_.amplitude_cap);
        std::copy(a_t.begin(), a_t.end(), branch.block(0).begin());

        SimState next = prepend_superposed_ancilla(state_, branch, beta_, gamma_, "k" + std::to_string(k));
        swap_qubits(next, 1, k + 1);
        apply_ut(next, sys_.row(t), k + 1);
        oracle_calls_ += 2;  // U_t = V_t (flip) V_t^T
        state_ = std::move(next);

        mu_ = mu_ / beta_;
        mu_sq_reference_ += b_t * b_t;
        kaczmarz_step(classical_, sys_, t);
        k_ += 1;
        bool check = opts_.check_every > 0 && k_ % opts_.check_every == 0;
        trace_.records.push_back(make_record(t, check));
    }

    /// Verifies the invariants at the current step and amends the last
    /// trace record.
    void check_now() {
        auto &rec = trace_.records.back();
        if (rec["block_fidelity"].is_null()) {
            rec = make_record(rec["t"].is_null() ? std::nullopt : std::optional<std::size_t>(rec["t"].get<std::size_t>()),
                              true);
            rec["wall_time"] = watch_.seconds();
        }
    }

    /// max_i |mu_k * block_i - x_k,i|
    double block_fidelity() const {
        Vector scaled = zero_block(state_).vector;
        for (double &v : scaled) {
            v *= mu_;
        }
        return max_abs_diff(scaled, classical_.x);
    }

    /// |mu_k^2 - (1 + sum_{i<k} b_{t_i}^2)|
    double mu_recurrence_error() const {
        return std::abs(mu_ * mu_ - mu_sq_reference_);
    }

    double state_norm_error() const {
        return std::abs(state_.norm() - 1.0);
    }

    const LinearSystem &system() const noexcept {
        return sys_;
    }
    const SimState &state() const noexcept {
        return state_;
    }
    const KaczmarzState &classical() const noexcept {
        return classical_;
    }
    double mu() const noexcept {
        return mu_;
    }
    double mu_squared_reference() const noexcept {
        return mu_sq_reference_;
    }
    double beta() const noexcept {
        return beta_;
    }
    double gamma() const noexcept {
        return gamma_;
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
        nlohmann::json rec = {{"type", "step"},
                              {"k", k_},
                              {"mu", mu_},
                              {"mu_squared_reference", mu_sq_reference_},
                              {"classical_residual_norm", norm2(sys_.residual(classical_.x))},
                              {"x_norm", norm2(classical_.x)},
                              {"state_amplitudes", state_.size()},
                              {"oracle_calls", oracle_calls_},
                              {"wall_time", watch_.seconds()}};
        rec["t"] = t ? nlohmann::json(*t) : nlohmann::json(nullptr);
        if (t) {
            rec["beta"] = beta_;
            rec["gamma"] = gamma_;
        }
        if (check) {
            double fidelity = block_fidelity();
            double mu_err = mu_recurrence_error();
            double norm_err = state_norm_error();
            rec["block_fidelity"] = fidelity;
            rec["mu_recurrence_error"] = mu_err;
            rec["state_norm_error"] = norm_err;
            rec["success_probability"] = zero_block(state_).norm * zero_block(state_).norm;
            if (!(fidelity <= kBlockTolerance) || !(mu_err <= 1e-12) || !(norm_err <= kBlockTolerance)) {
                trace_.failed = true;
            }
        } else {
            rec["block_fidelity"] = nullptr;
        }
        return rec;
    }

    LinearSystem sys_;
    OracleSet oracles_;
    EngineOptions opts_;
    SimState state_;
    KaczmarzState classical_;
    double mu_ = 1.0;
    double mu_sq_reference_ = 1.0;
    double beta_ = 1.0;
    double gamma_ = 0.0;
    std::size_t k_ = 0;
    std::size_t oracle_calls_ = 0;
    Trace trace_;
    detail::Stopwatch watch_;
};

/// Runs `steps` sampled steps from x0. Refuses up front when the final
/// state would exceed the amplitude cap.
inline QKaczmarzRun run_qkaczmarz(const LinearSystem &sys, IndexSampler &sampler, std::size_t steps, Vector x0,
                                  EngineOptions opts = {}) {
    check_amplitude_cap(steps, sys.n_padded(), opts.amplitude_cap);
    QKaczmarzRun run(sys, std::move(x0), opts);
    for (std::size_t i = 0; i < steps; ++i) {
        run.step(sampler.next());
    }
    run.check_now();
    return run;
}

}  // namespace qiter
