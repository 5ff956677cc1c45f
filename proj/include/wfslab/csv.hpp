// Copyright 2026 The wfslab Authors. All Rights Reserved.
//
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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wfslab::csv {

/// Shortest decimal text that parses back to exactly the same double.
std::string format(double value);
std::string format(long long value);
inline std::string format(int value) { return format(static_cast<long long>(value)); }

std::vector<std::string> split(std::string_view line, char sep = ',');

std::string join(const std::vector<std::string>& fields, char sep = ',');

// Parsers return false on malformed input instead of throwing so callers can
// attach file and line context.
bool parse(std::string_view text, double& out);
bool parse(std::string_view text, long long& out);
bool parse(std::string_view text, int& out);

std::string_view trim(std::string_view s);

}  // namespace wfslab::csv
