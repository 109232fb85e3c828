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
#include <cstddef>

#include "qiter/simstate.hpp"

namespace qiter {

/// Largest admissible deviation between an encoded block and its classical
/// counterpart.
inline constexpr double kBlockTolerance = 1e-10;

struct EngineOptions {
    /// Verify the block invariants every this many steps (0 disables
    /// per-step checks; `check_now` can still be called).
    std::size_t check_every = 1;
    std::size_t amplitude_cap = kDefaultAmplitudeCap;
};

namespace detail {

class Stopwatch {
   public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Vector zero_extend(Vector v, std::size_t n) {
    if (v.size() > n) {
        throw Error(ErrorCode::DimensionMismatch, "initial vector longer than the system dimension");
    }
    v.resize(n, 0.0);
    return v;
}

}  // namespace detail

}  // namespace qiter
