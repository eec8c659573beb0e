// Copyright 2026 The steerkit Authors
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
#include <string>

#include <json.hpp>

#include "steerkit/correlation.hpp"
#include "steerkit/hermitian.hpp"

namespace steerkit::io {

using json = nlohmann::json;

/// {"re": [[...]], "im": [[...]]}, row-major.
json to_json(const HermitianOperator& m);
json to_json(const Scenario& s);
json to_json(const Assemblage& a, const std::string& provenance = "");
json to_json(const Behavior& p, const std::string& provenance = "");
json to_json(const Wiring& w);

/// Parsers throw ParseError carrying a JSON pointer to the offending value;
/// `at` is the pointer of `j` itself inside the enclosing document.
HermitianOperator operator_from_json(const json& j, const std::string& at = "");
Scenario scenario_from_json(const json& j, const std::string& at = "");
Assemblage assemblage_from_json(const json& j, const std::string& at = "");
Behavior behavior_from_json(const json& j, const std::string& at = "");
Wiring wiring_from_json(const json& j, const std::string& at = "");

/// True when the document's elements carry "op" payloads.
bool is_assemblage_document(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace steerkit::io
