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

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace qiter {

inline constexpr const char *kVersion = "0.3.0";

/// JSON-lines trace: one header object followed by one record per step.
struct Trace {
    nlohmann::json header = nlohmann::json::object();
    std::vector<nlohmann::json> records;
    bool failed = false;

    void write_jsonl(std::ostream &out, bool include_timing = true) const {
        auto emit = [&](nlohmann::json j) {
            if (!include_timing) {
                strip_timing(j);
            }
            out << j.dump() << '\n';
        };
        nlohmann::json h = header;
        h["type"] = "header";
        h["version"] = kVersion;
        h["failed"] = failed;
        emit(h);
        for (const auto &r : records) {
            emit(r);
        }
    }

    std::string to_jsonl(bool include_timing = true) const {
        std::ostringstream out;
        write_jsonl(out, include_timing);
        return out.str();
    }

    static void strip_timing(nlohmann::json &j) {
        if (j.is_object()) {
            j.erase("wall_time");
        }
    }
};

}  // namespace qiter
