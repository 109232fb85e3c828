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
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qiter/problem.hpp"

namespace qiter::io {

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline bool is_comment_or_blank(const std::string &line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '%' || line[pos] == '#';
}

inline std::ifstream open_in(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    }
    return in;
}

inline std::ofstream open_out(const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    }
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    return out;
}

}  // namespace detail

/// Reads a real general MatrixMarket file in coordinate or array layout.
inline Matrix read_matrix_market(std::istream &in) {
    std::string header;
    if (!std::getline(in, header)) {
        throw Error(ErrorCode::Parse, "empty MatrixMarket input");
    }
    std::istringstream hs(detail::lower(header));
    std::string banner, object, layout, field, symmetry;
    hs >> banner >> object >> layout >> field >> symmetry;
    if (banner != "%%matrixmarket" || object != "matrix") {
        throw Error(ErrorCode::Parse, "missing %%MatrixMarket matrix banner");
    }
    if (field != "real" && field != "double" && field != "integer") {
        throw Error(ErrorCode::Parse, "unsupported MatrixMarket field '" + field + "'");
    }
    if (symmetry != "general") {
        throw Error(ErrorCode::Parse, "only general MatrixMarket matrices are supported");
    }
    std::string line;
    do {
        if (!std::getline(in, line)) {
            throw Error(ErrorCode::Parse, "missing MatrixMarket size line");
        }
    } while (detail::is_comment_or_blank(line));

    std::istringstream size_line(line);
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (layout == "coordinate") {
        if (!(size_line >> rows >> cols >> nnz)) {
            throw Error(ErrorCode::Parse, "bad coordinate size line");
        }
        Matrix m(rows, cols);
        for (std::size_t e = 0; e < nnz;) {
            if (!std::getline(in, line)) {
                throw Error(ErrorCode::Parse, "truncated coordinate entries");
            }
            if (detail::is_comment_or_blank(line)) {
                continue;
            }
            std::istringstream es(line);
            std::size_t i = 0, j = 0;
            double v = 0.0;
            if (!(es >> i >> j >> v) || i == 0 || j == 0 || i > rows || j > cols) {
                throw Error(ErrorCode::Parse, "bad coordinate entry '" + line + "'");
            }
            m(i - 1, j - 1) += v;
            ++e;
        }
        return m;
    }
    if (layout == "array") {
        if (!(size_line >> rows >> cols)) {
            throw Error(ErrorCode::Parse, "bad array size line");
        }
        Matrix m(rows, cols);
        // Array layout is column-major.
        std::size_t count = 0;
        while (count < rows * cols && std::getline(in, line)) {
            if (detail::is_comment_or_blank(line)) {
                continue;
            }
            std::istringstream es(line);
            double v = 0.0;
            while (count < rows * cols && es >> v) {
                m(count % rows, count / rows) = v;
                ++count;
            }
        }
        if (count != rows * cols) {
            throw Error(ErrorCode::Parse, "truncated array entries");
        }
        return m;
    }
    throw Error(ErrorCode::Parse, "unsupported MatrixMarket layout '" + layout + "'");
}

inline void write_matrix_market(std::ostream &out, const Matrix &m) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    std::size_t nnz = 0;
    for (double v : m.data()) {
        nnz += v != 0.0;
    }
    out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) {
                out << i + 1 << ' ' << j + 1 << ' ' << m(i, j) << '\n';
            }
        }
    }
}

/// Whitespace separated numbers; lines starting with '%' or '#' are skipped.
inline Vector read_vector(std::istream &in) {
    Vector v;
    std::string line;
    while (std::getline(in, line)) {
        if (detail::is_comment_or_blank(line)) {
            continue;
        }
        std::istringstream es(line);
        std::string token;
        while (es >> token) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(token, &used));
                if (used != token.size()) {
                    throw std::invalid_argument(token);
                }
            } catch (const std::exception &) {
                throw Error(ErrorCode::Parse, "bad vector entry '" + token + "'");
            }
        }
    }
    return v;
}

inline void write_vector(std::ostream &out, std::span<const double> v) {
    for (double x : v) {
        out << x << '\n';
    }
}

/// {"n": cols, "rows": [[...], ...], "b": [...]}
inline LinearSystem system_from_json(const nlohmann::json &j) {
    try {
        const auto &rows = j.at("rows");
        std::size_t n = j.at("n").get<std::size_t>();
        Matrix a(rows.size(), n);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != n) {
                throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " does not have n entries");
            }
            for (std::size_t c = 0; c < n; ++c) {
                a(i, c) = rows[i][c].get<double>();
            }
        }
        return LinearSystem(std::move(a), j.at("b").get<Vector>());
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

inline nlohmann::json system_to_json(const LinearSystem &sys) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < sys.rows(); ++i) {
        auto r = sys.row(i);
        rows.push_back(Vector(r.begin(), r.end()));
    }
    return {{"n", sys.cols()}, {"rows", rows}, {"b", sys.rhs()}};
}

inline LinearSystem load_system_json(const std::string &path) {
    auto in = detail::open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, e.what());
    }
    return system_from_json(j);
}

/// Loads A from a .json system file, or from MatrixMarket plus a vector file.
inline LinearSystem load_system(const std::string &matrix_path, const std::string &rhs_path = "") {
    if (matrix_path.size() >= 5 && matrix_path.substr(matrix_path.size() - 5) == ".json") {
        return load_system_json(matrix_path);
    }
    auto min = detail::open_in(matrix_path);
    Matrix a = read_matrix_market(min);
    if (rhs_path.empty()) {
        throw Error(ErrorCode::Io, "a MatrixMarket matrix needs a right-hand side vector file");
    }
    auto vin = detail::open_in(rhs_path);
    return LinearSystem(std::move(a), read_vector(vin));
}

inline Vector load_vector(const std::string &path) {
    auto in = detail::open_in(path);
    return read_vector(in);
}

inline void save_system_json(const std::string &path, const LinearSystem &sys) {
    auto out = detail::open_out(path);
    out << system_to_json(sys).dump(2) << '\n';
}

inline void save_matrix_market(const std::string &path, const Matrix &m) {
    auto out = detail::open_out(path);
    write_matrix_market(out, m);
}

inline void save_vector(const std::string &path, std::span<const double> v) {
    auto out = detail::open_out(path);
    write_vector(out, v);
}

}  // namespace qiter::io
