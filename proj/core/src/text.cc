// Copyright 2026 The railsim Authors
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

#include "railsim/text.h"

#include <charconv>
#include <cmath>

#include "railsim/errors.h"

namespace railsim {

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (value == 0) {
        value = 0;  // drop the sign of -0
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view text) {
    size_t a = 0;
    while (a < text.size() && (text[a] == ' ' || text[a] == '\t' || text[a] == '\r' || text[a] == '\n')) {
        a++;
    }
    size_t b = text.size();
    while (b > a && (text[b - 1] == ' ' || text[b - 1] == '\t' || text[b - 1] == '\r' || text[b - 1] == '\n')) {
        b--;
    }
    return text.substr(a, b - a);
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text[0] == '+') {
        text.remove_prefix(1);
    }
    double out = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ConfigError("not a number: '" + std::string(text) + "'");
    }
    return out;
}

long long parse_int(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text[0] == '+') {
        text.remove_prefix(1);
    }
    long long out = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ConfigError("not an integer: '" + std::string(text) + "'");
    }
    return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t k = text.find(sep, start);
        if (k == std::string_view::npos) {
            out.emplace_back(text.substr(start));
            return out;
        }
        out.emplace_back(text.substr(start, k - start));
        start = k + 1;
    }
}

}  // namespace railsim
