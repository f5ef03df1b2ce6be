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

#include <filesystem>

#include <json.hpp>

#include "qtomo/combinatorics.hpp"
#include "qtomo/hard_instance.hpp"
#include "qtomo/information.hpp"
#include "qtomo/measurement.hpp"
#include "qtomo/report.hpp"
#include "qtomo/state.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

using Json = nlohmann::ordered_json;

/// {"n_qubits": N, "re": [[...]], "im": [[...]]}, row-major.
Json state_to_json(const DensityMatrix& rho);
/// Accepts the matrix form above, {"maximally_mixed": N}, or {"pure": {"re": [...], "im": [...]}}.
DensityMatrix state_from_json(const Json& j);

/// {"qubits": [{"outcomes": [{"alpha": a, "beta": [bx, by, bz]}, ...]}, ...]} or {"basis": "XZY"}.
ProductPovm povm_from_json(const Json& j);
Json povm_to_json(const ProductPovm& m);

Json report_to_json(const BoundReport& r);
Json instance_to_json(const HardInstance& h);
Json tomography_to_json(const TomographyResult& r, const DensityMatrix* truth = nullptr);
Json mi_result_to_json(const MiResult& r);
Json chain_to_json(const LowerBoundChain& c);
Json stats_to_json(const ConcentrationStats& s);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace qtomo
