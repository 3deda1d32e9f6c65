// Copyright 2026 The symmqvar Authors
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
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symmqvar/pauli.hpp"
#include "symmqvar/symmetry.hpp"

namespace symmqvar {

using json = nlohmann::ordered_json;

/// {"n": 2, "terms": [{"pauli": "XI", "coeff": 0.5}, ...]}
json to_json(const PauliSum &op);
/// Accepts the object form above, a compact term string such as "0.5 X0 X1",
/// or a list of such strings that are summed. `n` is required for the string forms.
PauliSum pauli_sum_from_json(const json &j, std::size_t n);

json to_json(const SymmetryRep &rep);
json to_json(const GatesetReport &report);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

/// Comma-separated writer with a fixed header; throws if a row has the wrong width.
class CsvWriter {
   public:
    CsvWriter(const std::filesystem::path &path, std::vector<std::string> header);

    void row(const std::vector<std::string> &cells);
    void flush() { out_.flush(); }

   private:
    std::ofstream out_;
    std::size_t width_;
};

/// Reads and parses a JSON file; throws std::runtime_error with the path on failure.
json read_json_file(const std::filesystem::path &path);
void write_json_file(const std::filesystem::path &path, const json &j);

}  // namespace symmqvar
