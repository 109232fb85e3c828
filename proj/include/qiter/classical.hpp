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

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qiter/problem.hpp"
#include "qiter/trace.hpp"

namespace qiter {

enum class SamplingStrategy { uniform, norm_proportional };

inline std::string_view to_string(SamplingStrategy s) {
    return s == SamplingStrategy::uniform ? "uniform" : "norm-proportional";
}

inline SamplingStrategy parse_sampling_strategy(std::string_view text) {
    if (text == "uniform") return SamplingStrategy::uniform;
    if (text == "norm-proportional") return SamplingStrategy::norm_proportional;
    throw Error(ErrorCode::Parse, "unknown sampling strategy '" + std::string(text) + "'");
}

enum class Action { rows, columns };

/// Seeded source of row/column indices. The same sampler feeds the
/// classical and the quantum engines, so paired runs see identical index
/// sequences.
class IndexSampler {
   public:
    IndexSampler(SamplingStrategy strategy, std::vector<double> weights, std::uint64_t seed)
        : strategy_(strategy), count_(weights.size()), rng_(seed) {
        if (count_ == 0) {
            throw Error(ErrorCode::InvalidIndex, "sampler over an empty index set");
        }
        if (strategy_ == SamplingStrategy::norm_proportional) {
            weighted_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
        }
    }

    /// Sampler over the original rows (Kaczmarz) or columns (coordinate
    /// descent); norm-proportional weights use the raw squared norms.
    static IndexSampler for_system(const LinearSystem &sys, Action action, SamplingStrategy strategy,
                                   std::uint64_t seed) {
        std::size_t count = action == Action::rows ? sys.original_rows() : sys.original_cols();
        std::vector<double> weights(count);
        for (std::size_t i = 0; i < count; ++i) {
            double scale = action == Action::rows ? sys.row_scalings()[i] : sys.col_scalings()[i];
            double stored = action == Action::rows ? norm2(sys.row(i)) : norm2(sys.column(i));
            weights[i] = scale * scale * stored * stored;
        }
        return IndexSampler(strategy, std::move(weights), seed);
    }

    std::size_t next() {
        if (strategy_ == SamplingStrategy::uniform) {
            return std::uniform_int_distribution<std::size_t>(0, count_ - 1)(rng_);
        }
        return weighted_(rng_);
    }

    std::size_t count() const noexcept {
        return count_;
    }
    SamplingStrategy strategy() const noexcept {
        return strategy_;
    }
    std::vector<double> probabilities() const {
        if (strategy_ == SamplingStrategy::uniform) {
            return std::vector<double>(count_, 1.0 / static_cast<double>(count_));
        }
        return weighted_.probabilities();
    }

   private:
    SamplingStrategy strategy_;
    std::size_t count_;
    std::mt19937_64 rng_;
    std::discrete_distribution<std::size_t> weighted_;
};

struct KaczmarzState {
    Vector x;
    std::size_t k = 0;
    std::vector<std::size_t> history;
};

struct CdState {
    Vector x;
    Vector r;
    std::size_t k = 0;
    std::vector<std::size_t> history;
};

namespace detail {

inline void check_row_index(const LinearSystem &sys, std::size_t t) {
    if (t >= sys.original_rows()) {
        throw Error(ErrorCode::InvalidIndex, "row index " + std::to_string(t) + " out of range");
    }
}

inline void check_col_index(const LinearSystem &sys, std::size_t t) {
    if (t >= sys.original_cols()) {
        throw Error(ErrorCode::InvalidIndex, "column index " + std::to_string(t) + " out of range");
    }
}

}  // namespace detail

inline KaczmarzState kaczmarz_init(const LinearSystem &sys, Vector x0) {
    if (x0.size() != sys.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "initial guess has wrong length");
    }
    return KaczmarzState{std::move(x0), 0, {}};
}

/// One row projection, x <- x - (a_t.x - b_t) a_t, for a unit-norm row.
inline void kaczmarz_step(KaczmarzState &state, const LinearSystem &sys, std::size_t t) {
    detail::check_row_index(sys, t);
    auto a = sys.row(t);
    double defect = dot(a, state.x) - sys.rhs()[t];
    axpy(-defect, a, state.x);
    state.k += 1;
    state.history.push_back(t);
}

inline CdState cd_init(const LinearSystem &sys, Vector x0) {
    if (x0.size() != sys.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "initial guess has wrong length");
    }
    Vector r = sys.residual(x0);
    return CdState{std::move(x0), std::move(r), 0, {}};
}

/// One coordinate step on a unit-norm column c_t:
/// x <- x + (c_t.r) e_t, r <- (I - c_t c_t^T) r.
inline void cd_step(CdState &state, const LinearSystem &sys, std::size_t t) {
    detail::check_col_index(sys, t);
    auto c = sys.column(t);
    double coeff = dot(c, state.r);
    state.x[t] += coeff;
    axpy(-coeff, c, state.r);
    state.k += 1;
    state.history.push_back(t);
}

struct ClassicalOptions {
    std::size_t max_steps = 1000;
    double residual_tol = 0.0;
    /// Coordinate descent recomputes r = b - A x from scratch this often.
    std::size_t recompute_every = 128;
    /// Emit one trace record every this many steps (the first and last are
    /// always emitted).
    std::size_t record_every = 1;
};

struct ClassicalKaczmarzResult {
    KaczmarzState state;
    Trace trace;
};

struct ClassicalCdResult {
    CdState state;
    Trace trace;
};

namespace detail {

inline nlohmann::json classical_record(std::size_t k, std::optional<std::size_t> t, double residual_norm,
                                       double x_norm, double wall_time) {
    nlohmann::json rec = {{"type", "step"},
                          {"k", k},
                          {"classical_residual_norm", residual_norm},
                          {"x_norm", x_norm},
                          {"wall_time", wall_time}};
    rec["t"] = t ? nlohmann::json(*t) : nlohmann::json(nullptr);
    return rec;
}

}  // namespace detail

/// Randomized Kaczmarz until max_steps or ||b - A x|| <= residual_tol.
inline ClassicalKaczmarzResult run_classical_kaczmarz(const LinearSystem &sys, IndexSampler &sampler, Vector x0,
                                                      const ClassicalOptions &opts) {
    ClassicalKaczmarzResult out{kaczmarz_init(sys, std::move(x0)), {}};
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    double res = norm2(sys.residual(out.state.x));
    out.trace.records.push_back(detail::classical_record(0, std::nullopt, res, norm2(out.state.x), 0.0));
    for (std::size_t k = 0; k < opts.max_steps && res > opts.residual_tol; ++k) {
        std::size_t t = sampler.next();
        kaczmarz_step(out.state, sys, t);
        bool last = k + 1 == opts.max_steps;
        bool record = last || (out.state.k % opts.record_every) == 0;
        if (record || opts.residual_tol > 0.0) {
            res = norm2(sys.residual(out.state.x));
        }
        if (record || res <= opts.residual_tol) {
            out.trace.records.push_back(detail::classical_record(out.state.k, t, res, norm2(out.state.x), elapsed()));
        }
    }
    return out;
}

/// Randomized coordinate descent with incremental residual and periodic
/// full recomputation.
inline ClassicalCdResult run_classical_cd(const LinearSystem &sys, IndexSampler &sampler, Vector x0,
                                          const ClassicalOptions &opts) {
    ClassicalCdResult out{cd_init(sys, std::move(x0)), {}};
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    double res = norm2(out.state.r);
    out.trace.records.push_back(detail::classical_record(0, std::nullopt, res, norm2(out.state.x), 0.0));
    for (std::size_t k = 0; k < opts.max_steps && res > opts.residual_tol; ++k) {
        std::size_t t = sampler.next();
        cd_step(out.state, sys, t);
        if (opts.recompute_every > 0 && out.state.k % opts.recompute_every == 0) {
            out.state.r = sys.residual(out.state.x);
        }
        res = norm2(out.state.r);
        bool last = k + 1 == opts.max_steps;
        if (last || res <= opts.residual_tol || (out.state.k % opts.record_every) == 0) {
            out.trace.records.push_back(detail::classical_record(out.state.k, t, res, norm2(out.state.x), elapsed()));
        }
    }
    return out;
}

}  // namespace qiter
