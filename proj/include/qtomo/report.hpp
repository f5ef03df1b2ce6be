// Copyright 2026 The qtomo Authors
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

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qtomo {

/// Named terms of one inequality check, lhs <= rhs (1 + tol).
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    bool verdict = false;
    std::vector<std::pair<std::string, double>> terms;
    std::vector<std::pair<std::string, std::string>> notes;

    BoundReport& term(std::string key, double value) {
        terms.emplace_back(std::move(key), value);
        return *this;
    }
    BoundReport& note(std::string key, std::string value) {
        notes.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    std::optional<double> find(const std::string& key) const {
        for (const auto& [k, v] : terms) {
            if (k == key) return v;
        }
        return std::nullopt;
    }
    /// Sets lhs, rhs, tol and the verdict lhs <= rhs (1 + tol) (absolute tol when rhs == 0).
    void decide(double lhs_value, double rhs_value, double tolerance) {
        lhs = lhs_value;
        rhs = rhs_value;
        tol = tolerance;
        verdict = rhs == 0.0 ? lhs <= tolerance : lhs <= rhs * (1.0 + tolerance);
    }
    /// Same with an absolute slack: lhs <= rhs + tol.
    void decide_absolute(double lhs_value, double rhs_value, double tolerance) {
        lhs = lhs_value;
        rhs = rhs_value;
        tol = tolerance;
        verdict = lhs <= rhs + tolerance;
    }
};

}  // namespace qtomo
