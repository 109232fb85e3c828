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

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "qiter/problem.hpp"

namespace qiter {

enum class ProblemKind { identity, random_orthogonal_rows, random_consistent, random_general };

inline std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::identity: return "identity";
        case ProblemKind::random_orthogonal_rows: return "random-orthogonal-rows";
        case ProblemKind::random_consistent: return "random-consistent";
        case ProblemKind::random_general: return "random-general";
    }
    return "unknown";
}

inline ProblemKind parse_problem_kind(std::string_view text) {
    for (auto kind : {ProblemKind::identity, ProblemKind::random_orthogonal_rows, ProblemKind::random_consistent,
                      ProblemKind::random_general}) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    throw Error(ErrorCode::Parse, "unknown problem kind '" + std::string(text) + "'");
}

struct ProblemSpec {
    ProblemKind kind = ProblemKind::random_consistent;
    std::size_t n = 8;
    /// Number of equations; 0 means square.
    std::size_t rows = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (double &v : m.row(i)) {
            v = normal(rng);
        }
    }
    return m;
}

inline Vector gaussian_vector(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (double &x : v) {
        x = normal(rng);
    }
    return v;
}

// Modified Gram-Schmidt over the rows.
inline Matrix orthonormalize_rows(Matrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t p = 0; p < i; ++p) {
            double proj = dot(m.row(p), m.row(i));
            axpy(-proj, m.row(p), m.row(i));
        }
        double norm = norm2(m.row(i));
        for (double &v : m.row(i)) {
            v /= norm;
        }
    }
    return m;
}

}  // namespace detail

inline Vector random_unit_vector(std::size_t n, std::mt19937_64 &rng) {
    Vector v = detail::gaussian_vector(n, rng);
    double norm = norm2(v);
    for (double &x : v) {
        x /= norm;
    }
    return v;
}

/// Builds a raw (unnormalized, unpadded) instance. Deterministic in
/// (kind, n, rows, seed) for a given standard library.
inline LinearSystem generate(const ProblemSpec &spec) {
    if (spec.n < 2) {
        throw Error(ErrorCode::DimensionMismatch, "problem dimension must be at least 2");
    }
    std::size_t m = spec.rows == 0 ? spec.n : spec.rows;
    std::mt19937_64 rng(spec.seed);
    switch (spec.kind) {
        case ProblemKind::identity: {
            if (m != spec.n) {
                throw Error(ErrorCode::DimensionMismatch, "identity instances are square");
            }
            Vector x = detail::gaussian_vector(spec.n, rng);
            Vector b = x;
            return LinearSystem(Matrix::identity(spec.n), std::move(b), std::move(x));
        }
        case ProblemKind::random_orthogonal_rows: {
            if (m > spec.n) {
                throw Error(ErrorCode::DimensionMismatch, "at most n orthogonal rows exist in dimension n");
            }
            Matrix a = detail::orthonormalize_rows(detail::gaussian_matrix(m, spec.n, rng));
            Vector x = detail::gaussian_vector(spec.n, rng);
            Vector b = a.multiply(x);
            return LinearSystem(std::move(a), std::move(b), std::move(x));
        }
        case ProblemKind::random_consistent: {
            Matrix a = detail::gaussian_matrix(m, spec.n, rng);
            Vector x = detail::gaussian_vector(spec.n, rng);
            Vector b = a.multiply(x);
            return LinearSystem(std::move(a), std::move(b), std::move(x));
        }
        case ProblemKind::random_general: {
            Matrix a = detail::gaussian_matrix(m, spec.n, rng);
            Vector b = detail::gaussian_vector(m, rng);
            return LinearSystem(std::move(a), std::move(b));
        }
    }
    throw Error(ErrorCode::Unsupported, "unhandled problem kind");
}

}  // namespace qiter
