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

#include <random>

#include "qiter/generate.hpp"
#include "qiter/simstate.hpp"

namespace testutil {

using qiter::SimState;
using qiter::Vector;

inline Vector random_unit(std::size_t n, std::mt19937_64 &rng) {
    return qiter::random_unit_vector(n, rng);
}

inline SimState state_from(std::size_t q, std::size_t n, const Vector &amps) {
    SimState s(q, n);
    std::copy(amps.begin(), amps.end(), s.amps().begin());
    return s;
}

inline SimState random_state(std::size_t q, std::size_t n, std::mt19937_64 &rng) {
    return state_from(q, n, random_unit((std::size_t{1} << q) * n, rng));
}

inline Vector amps_of(const SimState &s) {
    return Vector(s.amps().begin(), s.amps().end());
}

/// |pattern> (x) |e_s> as a q-ancilla state.
inline SimState basis_state(std::string_view pattern, std::size_t s, std::size_t n) {
    SimState st(pattern.size(), n);
    st.block(qiter::parse_pattern(pattern, pattern.size()))[s] = 1.0;
    return st;
}

}  // namespace testutil
