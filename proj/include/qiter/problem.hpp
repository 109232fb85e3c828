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

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>

#include "qiter/error.hpp"
#include "qiter/linalg.hpp"

namespace qiter {

enum class Normalization { raw, rows, columns };

inline std::string_view to_string(Normalization mode) {
    switch (mode) {
        case Normalization::raw: return "raw";
        case Normalization::rows: return "row-normalized";
        case Normalization::columns: return "column-normalized";
    }
    return "unknown";
}

/// Norms below this are treated as zero rows/columns.
inline constexpr double kZeroNormThreshold = 1e-14;

/// A real system A x = b together with the scalings applied to reach the
/// unit-norm form the quantum solvers assume.
///
/// Instances are immutable; every transformation returns a new system.
/// Storage may be larger than the original dimensions after padding, in which
/// case only indices below `original_rows()` / `original_cols()` are valid
/// sampling targets.
class LinearSystem {
   public:
    LinearSystem() = default;

    LinearSystem(Matrix a, Vector b, std::optional<Vector> solution = std::nullopt)
        : a_(std::move(a)), b_(std::move(b)), solution_(std::move(solution)) {
        if (a_.rows() == 0 || a_.cols() == 0) {
            throw Error(ErrorCode::DimensionMismatch, "empty matrix");
        }
        if (b_.size() != a_.rows()) {
            throw Error(ErrorCode::DimensionMismatch,
                        "right-hand side has length " + std::to_string(b_.size()) + ", expected " +
                            std::to_string(a_.rows()));
        }
        if (solution_ && solution_->size() != a_.cols()) {
            throw Error(ErrorCode::DimensionMismatch, "planted solution has wrong length");
        }
        for (double v : a_.data()) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::Parse, "matrix contains a non-finite entry");
            }
        }
        at_ = a_.transposed();
        orig_rows_ = a_.rows();
        orig_cols_ = a_.cols();
        row_scalings_.assign(orig_rows_, 1.0);
        col_scalings_.assign(orig_cols_, 1.0);
    }

    const Matrix &matrix() const noexcept {
        return a_;
    }
    const Vector &rhs() const noexcept {
        return b_;
    }
    const std::optional<Vector> &solution() const noexcept {
        return solution_;
    }

    /// Storage dimensions (include padding).
    std::size_t rows() const noexcept {
        return a_.rows();
    }
    std::size_t cols() const noexcept {
        return a_.cols();
    }
    std::size_t original_rows() const noexcept {
        return orig_rows_;
    }
    std::size_t original_cols() const noexcept {
        return orig_cols_;
    }
    std::size_t n_padded() const noexcept {
        return std::bit_ceil(std::max(orig_rows_, orig_cols_));
    }
    bool is_padded() const noexcept {
        return rows() == n_padded() && cols() == n_padded();
    }

    std::span<const double> row(std::size_t i) const {
        return a_.row(i);
    }
    std::span<const double> column(std::size_t j) const {
        return at_.row(j);
    }

    Normalization mode() const noexcept {
        return mode_;
    }
    const Vector &row_scalings() const noexcept {
        return row_scalings_;
    }
    const Vector &col_scalings() const noexcept {
        return col_scalings_;
    }

    /// b - A x over the stored dimensions.
    Vector residual(std::span<const double> x) const {
        Vector r = a_.multiply(x);
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = b_[i] - r[i];
        }
        return r;
    }

    /// Maps a solution of the column-normalized system back to the raw
    /// unknowns (x = D^{-1} y). Identity in other modes.
    Vector recover_solution(std::span<const double> y) const {
        Vector x(y.begin(), y.end());
        if (mode_ == Normalization::columns) {
            for (std::size_t j = 0; j < orig_cols_ && j < x.size(); ++j) {
                x[j] /= col_scalings_[j];
            }
        }
        return x;
    }

    /// Same matrix and metadata with a different right-hand side.
    LinearSystem with_rhs(Vector b, std::optional<Vector> solution) const {
        if (b.size() != rows() || (solution && solution->size() != cols())) {
            throw Error(ErrorCode::DimensionMismatch, "replacement right-hand side has wrong length");
        }
        LinearSystem out = *this;
        out.b_ = std::move(b);
        out.solution_ = std::move(solution);
        return out;
    }

    friend LinearSystem normalize_rows(const LinearSystem &sys);
    friend LinearSystem normalize_columns(const LinearSystem &sys);
    friend LinearSystem pad_to_pow2(const LinearSystem &sys);
    friend LinearSystem denormalize(const LinearSystem &sys);

   private:
    void rebuild_transpose() {
        at_ = a_.transposed();
    }

    Matrix a_;
    Matrix at_;
    Vector b_;
    std::optional<Vector> solution_;
    Vector row_scalings_;
    Vector col_scalings_;
    std::size_t orig_rows_ = 0;
    std::size_t orig_cols_ = 0;
    Normalization mode_ = Normalization::raw;
};

/// Scales every row of A (and the matching entry of b) to unit norm. The
/// solution set is unchanged.
inline LinearSystem normalize_rows(const LinearSystem &sys) {
    if (sys.mode_ != Normalization::raw) {
        throw Error(ErrorCode::Unsupported, "normalize_rows expects a raw system");
    }
    LinearSystem out = sys;
    for (std::size_t i = 0; i < sys.orig_rows_; ++i) {
        double norm = norm2(sys.row(i));
        if (norm < kZeroNormThreshold) {
            throw Error(ErrorCode::ZeroRow, "row " + std::to_string(i) + " has zero norm");
        }
        for (double &v : out.a_.row(i)) {
            v /= norm;
        }
        out.b_[i] /= norm;
        out.row_scalings_[i] = norm;
    }
    out.mode_ = Normalization::rows;
    out.rebuild_transpose();
    return out;
}

/// Scales every column of A to unit norm: A' = A D^{-1}. A solution y of the
/// scaled system maps back through x = D^{-1} y; a planted x* becomes D x*.
inline LinearSystem normalize_columns(const LinearSystem &sys) {
    if (sys.mode_ != Normalization::raw) {
        throw Error(ErrorCode::Unsupported, "normalize_columns expects a raw system");
    }
    LinearSystem out = sys;
    for (std::size_t j = 0; j < sys.orig_cols_; ++j) {
        double norm = norm2(sys.column(j));
        if (norm < kZeroNormThreshold) {
            throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " has zero norm");
        }
        for (std::size_t i = 0; i < sys.rows(); ++i) {
            out.a_(i, j) /= norm;
        }
        out.col_scalings_[j] = norm;
        if (out.solution_) {
            (*out.solution_)[j] *= norm;
        }
    }
    out.mode_ = Normalization::columns;
    out.rebuild_transpose();
    return out;
}

/// Zero-extends A, b (and any planted solution) to the smallest power of two
/// covering both dimensions. Idempotent.
inline LinearSystem pad_to_pow2(const LinearSystem &sys) {
    std::size_t n = sys.n_padded();
    if (sys.rows() == n && sys.cols() == n) {
        return sys;
    }
    LinearSystem out = sys;
    out.a_ = Matrix(n, n);
    for (std::size_t i = 0; i < sys.rows(); ++i) {
        for (std::size_t j = 0; j < sys.cols(); ++j) {
            out.a_(i, j) = sys.a_(i, j);
        }
    }
    out.b_.resize(n, 0.0);
    if (out.solution_) {
        out.solution_->resize(n, 0.0);
    }
    out.rebuild_transpose();
    return out;
}

/// Undoes row or column normalization (padding is kept).
inline LinearSystem denormalize(const LinearSystem &sys) {
    LinearSystem out = sys;
    if (sys.mode_ == Normalization::rows) {
        for (std::size_t i = 0; i < sys.orig_rows_; ++i) {
            for (double &v : out.a_.row(i)) {
                v *= sys.row_scalings_[i];
            }
            out.b_[i] *= sys.row_scalings_[i];
            out.row_scalings_[i] = 1.0;
        }
    } else if (sys.mode_ == Normalization::columns) {
        for (std::size_t j = 0; j < sys.orig_cols_; ++j) {
            for (std::size_t i = 0; i < sys.rows(); ++i) {
                out.a_(i, j) *= sys.col_scalings_[j];
            }
            if (out.solution_) {
                (*out.solution_)[j] /= sys.col_scalings_[j];
            }
            out.col_scalings_[j] = 1.0;
        }
    }
    out.mode_ = Normalization::raw;
    out.rebuild_transpose();
    return out;
}

/// Replaces b by A x0 + (b - A x0)/||b - A x0|| so that the initial residual
/// of x0 has unit norm. The scaling is preserved and a planted solution x*
/// moves to x0 + (x* - x0)/||r0||; consistency is kept.
inline LinearSystem with_unit_initial_residual(const LinearSystem &sys, std::span<const double> x0) {
    Vector r0 = sys.residual(x0);
    double norm = norm2(r0);
    if (norm < kZeroNormThreshold) {
        return sys;
    }
    Vector ax = sys.matrix().multiply(x0);
    Vector b(ax.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        b[i] = ax[i] + r0[i] / norm;
    }
    std::optional<Vector> solution;
    if (sys.solution()) {
        solution = Vector(x0.size());
        for (std::size_t j = 0; j < x0.size(); ++j) {
            (*solution)[j] = x0[j] + ((*sys.solution())[j] - x0[j]) / norm;
        }
    }
    return sys.with_rhs(std::move(b), std::move(solution));
}

}  // namespace qiter
