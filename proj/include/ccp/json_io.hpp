// Copyright 2026 The ccp-alsox Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON field readers shared by the instance loaders. All of them throw
// ValidationError naming the field on a shape mismatch.

#ifndef CCP_JSON_IO_HPP_
#define CCP_JSON_IO_HPP_

#include <json.hpp>
#include <string>
#include <vector>

#include "ccp/model.hpp"

namespace ccp::json_io {

using nlohmann::json;

Vec read_vec(const json& j, const std::string& field);
// Accepts a flat row-major array or an array of rows.
Mat read_mat(const json& j, std::size_t rows, std::size_t cols, const std::string& field);
const json& need(const json& j, const char* key, const std::string& where);
std::size_t need_size(const json& j, const char* key, const std::string& where);
double need_double(const json& j, const char* key, const std::string& where);
void read_set_parts(const json& j, std::size_t n, std::vector<SetPart>& parts);
json part_to_json(const SetPart& part);
Uncertain parse_uncertain(const std::string& s);
const char* uncertain_name(Uncertain u);

}  // namespace ccp::json_io

#endif  // CCP_JSON_IO_HPP_
