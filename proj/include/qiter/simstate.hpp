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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qiter/error.hpp"
#include "qiter/linalg.hpp"

namespace qiter {

/// Largest state (ancilla blocks times system dimension) a run may allocate.
inline constexpr std::size_t kDefaultAmplitudeCap = std::size_t{1} << 26;

/// Number of amplitudes of a q-ancilla state, or nullopt on overflow.
inline std::optional<std::size_t> amplitude_count(std::size_t num_ancillas, std::size_t dim_sys) {
    if (num_ancillas >= 63) {
        return std::nullopt;
    }
    std::size_t blocks = std::size_t{1} << num_ancillas;
    if (dim_sys != 0 && blocks > SIZE_MAX / dim_sys) {
        return std::nullopt;
    }
    return blocks * dim_sys;
}

inline void check_amplitude_cap(std::size_t num_ancillas, std::size_t dim_sys, std::size_t cap) {
    auto count = amplitude_count(num_ancillas, dim_sys);
    if (!count || *count > cap) {
        throw Error(ErrorCode::AmplitudeCapExceeded,
                    "amplitude cap exceeded: 2^" + std::to_string(num_ancillas) + "*" + std::to_string(dim_sys) +
                        " amplitudes requested, cap is " + std::to_string(cap));
    }
}

/// Real state vector over (q ancilla qubits) x (system register).
///
/// Qubits are numbered 1..q from the left of the ket, as in
/// |a_1 a_2 ... a_q>|s>. Qubit i is bit (q - i) of the ancilla index, so the
/// ancilla index is the bitstring a_1...a_q read as a binary number and the
/// amplitude of |a>|s> sits at a * dim_sys + s. A new leftmost qubit
/// therefore simply stacks two copies of the old layout.
class SimState {
   public:
    SimState() = default;

    SimState(std::size_t num_ancillas, std::size_t dim_sys, std::size_t cap = kDefaultAmplitudeCap)
        : q_(num_ancillas), dim_(dim_sys), cap_(cap) {
        if (dim_sys == 0 || (dim_sys & (dim_sys - 1)) != 0) {
            throw Error(ErrorCode::DimensionMismatch, "system dimension must be a power of two");
        }
        check_amplitude_cap(num_ancillas, dim_sys, cap);
        amps_.assign(*amplitude_count(num_ancillas, dim_sys), 0.0);
        layout_.assign(num_ancillas, "anc");
    }

    /// Zero ancillas; the amplitudes are the given system vector.
    static SimState from_system_vector(std::span<const double> v, std::size_t cap = kDefaultAmplitudeCap) {
        SimState s(0, v.size(), cap);
        std::copy(v.begin(), v.end(), s.amps_.begin());
        return s;
    }

    std::size_t num_ancillas() const noexcept {
        return q_;
    }
    std::size_t dim_sys() const noexcept {
        return dim_;
    }
    std::size_t num_blocks() const noexcept {
        return std::size_t{1} << q_;
    }
    std::size_t size() const noexcept {
        return amps_.size();
    }
    std::size_t amplitude_cap() const noexcept {
        return cap_;
    }

    std::span<double> amps() noexcept {
        return amps_;
    }
    std::span<const double> amps() const noexcept {
        return amps_;
    }

    /// System-register vector for one ancilla index.
    std::span<double> block(std::size_t ancilla_index) {
        return {amps_.data() + ancilla_index * dim_, dim_};
    }
    std::span<const double> block(std::size_t ancilla_index) const {
        return {amps_.data() + ancilla_index * dim_, dim_};
    }

    double norm() const {
        return norm2(amps_);
    }

    /// Bit mask of the 1-based qubit inside the ancilla index.
    std::size_t qubit_mask(std::size_t qubit) const {
        if (qubit < 1 || qubit > q_) {
            throw Error(ErrorCode::InvalidQubit,
                        "qubit " + std::to_string(qubit) + " outside 1.." + std::to_string(q_));
        }
        return std::size_t{1} << (q_ - qubit);
    }

    /// Register labels, qubit 1 first.
    const std::vector<std::string> &layout() const noexcept {
        return layout_;
    }
    std::vector<std::string> &layout() noexcept {
        return layout_;
    }

   private:
    std::size_t q_ = 0;
    std::size_t dim_ = 1;
    std::size_t cap_ = kDefaultAmplitudeCap;
    std::vector<double> amps_ = {1.0};
    std::vector<std::string> layout_;
};

/// Ancilla bitstring such as "0110" (qubit 1 first) to its ancilla index.
inline std::size_t parse_pattern(std::string_view pattern, std::size_t num_ancillas) {
    if (pattern.size() != num_ancillas) {
        throw Error(ErrorCode::PatternLengthMismatch, "pattern '" + std::string(pattern) + "' has length " +
                                                          std::to_string(pattern.size()) + ", state has " +
                                                          std::to_string(num_ancillas) + " ancillas");
    }
    std::size_t index = 0;
    for (char c : pattern) {
        if (c != '0' && c != '1') {
            throw Error(ErrorCode::Parse, "pattern characters must be 0 or 1");
        }
        index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    return index;
}

inline std::string format_pattern(std::size_t index, std::size_t num_ancillas) {
    std::string s(num_ancillas, '0');
    for (std::size_t i = 0; i < num_ancillas; ++i) {
        if ((index >> (num_ancillas - 1 - i)) & 1U) {
            s[i] = '1';
        }
    }
    return s;
}

struct Block {
    Vector vector;
    double norm = 0.0;
};

/// Unnormalized system vector at one ancilla setting. Read only.
inline Block extract_block(const SimState &state, std::string_view pattern) {
    auto b = state.block(parse_pattern(pattern, state.num_ancillas()));
    Block out{Vector(b.begin(), b.end()), 0.0};
    out.norm = norm2(out.vector);
    return out;
}

/// The all-zeros ancilla block, which carries the encoded iterate.
inline Block zero_block(const SimState &state) {
    return extract_block(state, std::string(state.num_ancillas(), '0'));
}

/// I (x) (I - P) + X (x) P on (target qubit) (x) system, P = |a><a|, for
/// every setting of the remaining ancillas. Costs two inner products and two
/// rank-one updates per pair of blocks.
inline void apply_ut(SimState &state, std::span<const double> a, std::size_t target_qubit) {
    if (a.size() != state.dim_sys()) {
        throw Error(ErrorCode::DimensionMismatch, "U_t vector length differs from system dimension");
    }
    std::size_t mask = state.qubit_mask(target_qubit);
    for (std::size_t idx = 0; idx < state.num_blocks(); ++idx) {
        if (idx & mask) {
            continue;
        }
        auto lo = state.block(idx);
        auto hi = state.block(idx | mask);
        double delta = dot(a, hi) - dot(a, lo);
        axpy(delta, a, lo);
        axpy(-delta, a, hi);
    }
}

/// W_t on the ancilla pair (qi, qj) (x) system. Pair values are written
/// (bit of qi, bit of qj): 00 and 11 are left alone, and on span{01, 10} the
/// |t> components of the two branches are exchanged while I - |t><t| acts
/// diagonally.
inline void apply_wt(SimState &state, std::size_t t, std::size_t qi, std::size_t qj) {
    std::size_t mi = state.qubit_mask(qi);
    std::size_t mj = state.qubit_mask(qj);
    if (mi == mj) {
        throw Error(ErrorCode::InvalidQubit, "W_t needs two distinct qubits");
    }
    if (t >= state.dim_sys()) {
        throw Error(ErrorCode::InvalidIndex, "W_t index " + std::to_string(t) + " out of range");
    }
    for (std::size_t idx = 0; idx < state.num_blocks(); ++idx) {
        // Visit each {10, 01} pair once, from its 10 member.
        if ((idx & mi) && !(idx & mj)) {
            std::size_t partner = (idx & ~mi) | mj;
            std::swap(state.block(idx)[t], state.block(partner)[t]);
        }
    }
}

/// Row-major 2x2 real matrix.
using Gate2 = std::array<double, 4>;

inline void apply_single_qubit(SimState &state, std::size_t qubit, const Gate2 &g) {
    std::size_t mask = state.qubit_mask(qubit);
    for (std::size_t idx = 0; idx < state.num_blocks(); ++idx) {
        if (idx & mask) {
            continue;
        }
        auto lo = state.block(idx);
        auto hi = state.block(idx | mask);
        for (std::size_t s = 0; s < state.dim_sys(); ++s) {
            double x0 = lo[s];
            double x1 = hi[s];
            lo[s] = g[0] * x0 + g[1] * x1;
            hi[s] = g[2] * x0 + g[3] * x1;
        }
    }
}

/// G_k = (1/sqrt(k+2)) [[sqrt(k+1), 1], [-1, sqrt(k+1)]].
inline Gate2 gk_matrix(std::size_t k) {
    double scale = 1.0 / std::sqrt(static_cast<double>(k) + 2.0);
    double diag = std::sqrt(static_cast<double>(k) + 1.0) * scale;
    return {diag, scale, -scale, diag};
}

inline void apply_gk(SimState &state, std::size_t k, std::size_t qubit) {
    apply_single_qubit(state, qubit, gk_matrix(k));
}

inline Gate2 transpose(const Gate2 &g) {
    return {g[0], g[2], g[1], g[3]};
}

/// Exchanges qubits i and j (1-based).
inline void swap_qubits(SimState &state, std::size_t i, std::size_t j) {
    std::size_t mi = state.qubit_mask(i);
    std::size_t mj = state.qubit_mask(j);
    if (mi == mj) {
        return;
    }
    for (std::size_t idx = 0; idx < state.num_blocks(); ++idx) {
        if ((idx & mi) && !(idx & mj)) {
            std::size_t partner = (idx & ~mi) | mj;
            auto x = state.block(idx);
            auto y = state.block(partner);
            std::swap_ranges(x.begin(), x.end(), y.begin());
        }
    }
    auto &layout = state.layout();
    std::swap(layout[i - 1], layout[j - 1]);
}

/// beta |0> (x) a + gamma |1> (x) b on a fresh leftmost qubit.
inline SimState prepend_superposed_ancilla(const SimState &a, const SimState &b, double beta, double gamma,
                                           std::string label = "anc") {
    if (a.num_ancillas() != b.num_ancillas() || a.dim_sys() != b.dim_sys()) {
        throw Error(ErrorCode::DimensionMismatch, "branch states have different shapes");
    }
    if (std::abs(beta * beta + gamma * gamma - 1.0) > 1e-12) {
        throw Error(ErrorCode::BadConvexWeights, "beta^2 + gamma^2 must equal 1");
    }
    SimState out(a.num_ancillas() + 1, a.dim_sys(), a.amplitude_cap());
    auto dst = out.amps();
    auto src_a = a.amps();
    auto src_b = b.amps();
    std::size_t half = src_a.size();
    for (std::size_t i = 0; i < half; ++i) {
        dst[i] = beta * src_a[i];
        dst[half + i] = gamma * src_b[i];
    }
    out.layout().front() = std::move(label);
    std::copy(a.layout().begin(), a.layout().end(), out.layout().begin() + 1);
    return out;
}

/// |0>^{count} (x) a.
inline SimState prepend_zero_ancillas(const SimState &a, std::size_t count, std::string label = "pad") {
    SimState out(a.num_ancillas() + count, a.dim_sys(), a.amplitude_cap());
    std::copy(a.amps().begin(), a.amps().end(), out.amps().begin());
    for (std::size_t i = 0; i < count; ++i) {
        out.layout()[i] = label;
    }
    std::copy(a.layout().begin(), a.layout().end(), out.layout().begin() + count);
    return out;
}

/// Debug dump {q, dim_sys, blocks: [{pattern, norm, vector?}]}. Only
/// non-zero blocks are listed; vectors are included when the state has at
/// most `vector_threshold` amplitudes.
inline nlohmann::json to_json(const SimState &state, std::size_t vector_threshold = 256) {
    nlohmann::json blocks = nlohmann::json::array();
    for (std::size_t idx = 0; idx < state.num_blocks(); ++idx) {
        auto b = state.block(idx);
        double n = norm2(b);
        if (n == 0.0) {
            continue;
        }
        nlohmann::json entry = {{"pattern", format_pattern(idx, state.num_ancillas())}, {"norm", n}};
        if (state.size() <= vector_threshold) {
            entry["vector"] = Vector(b.begin(), b.end());
        }
        blocks.push_back(std::move(entry));
    }
    return {{"q", state.num_ancillas()}, {"dim_sys", state.dim_sys()}, {"layout", state.layout()},
            {"blocks", std::move(blocks)}};
}

}  // namespace qiter
