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
#include <string_view>
#include <vector>

#include "qiter/problem.hpp"
#include "qiter/simstate.hpp"

namespace qiter {

/// Unit-norm tolerance on oracle inputs.
inline constexpr double kUnitNormTolerance = 1e-12;

/// Orthogonal involution exchanging a basis vector e_i with a unit vector a.
///
/// Stored as sign * (I - 2 v v^T). When a_i <= 0 the plain reflection about
/// a - e_i is used; otherwise the reflection about a + e_i maps e_i to -a and
/// the sign flips it back. Either way ||a -/+ e_i|| >= sqrt(2), so there is
/// no cancellation near a = e_i. Symmetric, hence its own transpose.
class Reflector {
   public:
    Reflector() = default;

    Reflector(std::span<const double> a, std::size_t basis_index) : dim_(a.size()) {
        if (basis_index >= a.size()) {
            throw Error(ErrorCode::InvalidIndex, "basis index outside the vector");
        }
        double n = norm2(a);
        if (std::abs(n - 1.0) > kUnitNormTolerance) {
            throw Error(ErrorCode::NotUnitNorm, "oracle vector has norm " + std::to_string(n));
        }
        Vector e = basis_vector(dim_, basis_index);
        if (max_abs_diff(a, e) <= 1e-15) {
            identity_ = true;
            return;
        }
        v_.assign(a.begin(), a.end());
        if (a[basis_index] > 0.0) {
            v_[basis_index] += 1.0;
            sign_ = -1.0;
        } else {
            v_[basis_index] -= 1.0;
        }
        double vn = norm2(v_);
        for (double &x : v_) {
            x /= vn;
        }
    }

    std::size_t dim() const noexcept {
        return dim_;
    }
    bool is_identity() const noexcept {
        return identity_;
    }
    double sign() const noexcept {
        return sign_;
    }

    void apply(std::span<double> x) const {
        if (x.size() != dim_) {
            throw Error(ErrorCode::DimensionMismatch, "reflector applied to a vector of the wrong length");
        }
        if (identity_) {
            return;
        }
        double c = 2.0 * dot(v_, x);
        for (std::size_t i = 0; i < dim_; ++i) {
            x[i] = sign_ * (x[i] - c * v_[i]);
        }
    }

    /// Same operator: the reflector is symmetric.
    void apply_adjoint(std::span<double> x) const {
        apply(x);
    }

    Vector operator()(std::span<const double> x) const {
        Vector y(x.begin(), x.end());
        apply(y);
        return y;
    }

    Matrix dense() const {
        Matrix m(dim_, dim_);
        for (std::size_t j = 0; j < dim_; ++j) {
            Vector col = (*this)(basis_vector(dim_, j));
            for (std::size_t i = 0; i < dim_; ++i) {
                m(i, j) = col[i];
            }
        }
        return m;
    }

   private:
    std::size_t dim_ = 0;
    Vector v_;
    double sign_ = 1.0;
    bool identity_ = false;
};

/// V_t with V_t e_0 = a_t.
inline Reflector build_row_oracle(std::span<const double> a_t) {
    return Reflector(a_t, 0);
}

/// S_j with S_j a_j = e_j, so S_j^T e_j = a_j.
inline Reflector build_column_oracle(std::span<const double> a_j, std::size_t j) {
    return Reflector(a_j, j);
}

/// State-preparation oracles for a padded, normalized system.
///
/// Row-normalized systems get V_t for each original row. Column-normalized
/// systems get S_j for each original column plus a preparation oracle
/// e_0 -> a_j, which is what U_t needs when the columns play the role of
/// rows.
class OracleSet {
   public:
    explicit OracleSet(const LinearSystem &sys) : dim_(sys.n_padded()) {
        if (!sys.is_padded()) {
            throw Error(ErrorCode::DimensionMismatch, "oracles need a padded system");
        }
        if (sys.mode() == Normalization::rows) {
            for (std::size_t t = 0; t < sys.original_rows(); ++t) {
                row_prep_.push_back(build_row_oracle(sys.row(t)));
            }
        } else if (sys.mode() == Normalization::columns) {
            for (std::size_t j = 0; j < sys.original_cols(); ++j) {
                col_prep_.push_back(build_row_oracle(sys.column(j)));
                col_select_.push_back(build_column_oracle(sys.column(j), j));
            }
        } else {
            throw Error(ErrorCode::Unsupported, "oracles need a normalized system");
        }
    }

    std::size_t dim() const noexcept {
        return dim_;
    }

    const Reflector &row(std::size_t t) const {
        return checked(row_prep_, t);
    }
    const Reflector &column_prep(std::size_t j) const {
        return checked(col_prep_, j);
    }
    const Reflector &column_select(std::size_t j) const {
        return checked(col_select_, j);
    }

   private:
    static const Reflector &checked(const std::vector<Reflector> &v, std::size_t i) {
        if (i >= v.size()) {
            throw Error(ErrorCode::InvalidIndex, "no oracle for index " + std::to_string(i));
        }
        return v[i];
    }

    std::size_t dim_;
    std::vector<Reflector> row_prep_;
    std::vector<Reflector> col_prep_;
    std::vector<Reflector> col_select_;
};

enum class OracleDirection { forward, adjoint };

/// Applies op (or its adjoint) to the system register of every block, or
/// only of the block selected by `control_pattern`.
inline void apply_oracle(SimState &state, const Reflector &op, OracleDirection direction = OracleDirection::forward,
                         std::optional<std::string_view> control_pattern = std::nullopt) {
    if (op.dim() != state.dim_sys()) {
        throw Error(ErrorCode::DimensionMismatch, "oracle dimension differs from system dimension");
    }
    auto run = [&](std::span<double> b) {
        direction == OracleDirection::forward ? op.apply(b) : op.apply_adjoint(b);
    };
    if (control_pattern) {
        run(state.block(parse_pattern(*control_pattern, state.num_ancillas())));
        return;
    }
    for (std::size_t idx = 0; idx < state.num_blocks(); ++idx) {
        run(state.block(idx));
    }
}

/// U_t through its factorization (I (x) V_t)(I (x) (I - |0><0|) + X (x) |0><0|)(I (x) V_t^T).
inline void apply_ut_factored(SimState &state, const Reflector &prep, std::size_t target_qubit) {
    std::size_t mask = state.qubit_mask(target_qubit);
    apply_oracle(state, prep, OracleDirection::adjoint);
    for (std::size_t idx = 0; idx < state.num_blocks(); ++idx) {
        if (!(idx & mask)) {
            std::swap(state.block(idx)[0], state.block(idx | mask)[0]);
        }
    }
    apply_oracle(state, prep, OracleDirection::forward);
}

}  // namespace qiter
