// Copyright 2026 The edgesel Authors
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

#ifndef EDGESEL_TEXT_HPP_
#define EDGESEL_TEXT_HPP_

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the parsers and the model/checkpoint formats.
namespace edgesel::text {

    inline std::string_view trim(std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos) {
            return {};
        }
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    inline std::vector<std::string_view> split_ws(std::string_view s) {
        std::vector<std::string_view> out;
        std::size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r' || s[i] == '\n')) {
                ++i;
            }
            const auto b = i;
            while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\r' || s[i] == '\n')) {
                ++i;
            }
            if (i > b) {
                out.push_back(s.substr(b, i - b));
            }
        }
        return out;
    }

    inline std::vector<std::string_view> split_lines(std::string_view s) {
        std::vector<std::string_view> out;
        std::size_t b = 0;
        while (b <= s.size()) {
            auto e = s.find('\n', b);
            if (e == std::string_view::npos) {
                if (b < s.size()) {
                    out.push_back(s.substr(b));
                }
                break;
            }
            out.push_back(s.substr(b, e - b));
            b = e + 1;
        }
        return out;
    }

    inline std::optional<double> to_double(std::string_view s) {
        double v = 0.0;
        if (!s.empty() && s.front() == '+') {
            s.remove_prefix(1);
        }
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            return std::nullopt;
        }
        return v;
    }

    inline std::optional<long long> to_int(std::string_view s) {
        long long v = 0;
        if (!s.empty() && s.front() == '+') {
            s.remove_prefix(1);
        }
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            // Accept integral values written as decimals, e.g. "10.0".
            if (auto d = to_double(s); d && *d == static_cast<double>(static_cast<long long>(*d))) {
                return static_cast<long long>(*d);
            }
            return std::nullopt;
        }
        return v;
    }

    // Shortest representation that round-trips exactly.
    inline std::string format_double(double v) {
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, ec == std::errc() ? ptr : buf);
    }

}  // namespace edgesel::text

#endif
