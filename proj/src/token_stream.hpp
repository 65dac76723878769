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

#ifndef EDGESEL_SRC_TOKEN_STREAM_HPP_
#define EDGESEL_SRC_TOKEN_STREAM_HPP_

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgesel/text.hpp"

namespace edgesel::detail {

    // Whitespace-separated reader for the text model formats.
    class TokenStream {
    public:
        explicit TokenStream(std::string_view content) : tokens_(text::split_ws(content)) { }

        bool done() const {
            return pos_ >= tokens_.size();
        }

        std::string_view next() {
            if (done()) {
                throw std::runtime_error("model file truncated");
            }
            return tokens_[pos_++];
        }

        void expect(std::string_view word) {
            const auto t = next();
            if (t != word) {
                throw std::runtime_error("model file: expected '" + std::string(word) + "', found '" +
                                         std::string(t) + "'");
            }
        }

        double number() {
            const auto t = next();
            const auto v = text::to_double(t);
            if (!v) {
                throw std::runtime_error("model file: bad number '" + std::string(t) + "'");
            }
            return *v;
        }

        long long integer() {
            const auto t = next();
            const auto v = text::to_int(t);
            if (!v) {
                throw std::runtime_error("model file: bad integer '" + std::string(t) + "'");
            }
            return *v;
        }

        void numbers(std::span<double> out) {
            for (auto& v : out) {
                v = number();
            }
        }

    private:
        std::vector<std::string_view> tokens_;
        std::size_t pos_ = 0;
    };

    inline void write_numbers(std::string& out, std::span<const double> values) {
        for (std::size_t k = 0; k < values.size(); ++k) {
            out += k == 0 ? "" : " ";
            out += text::format_double(values[k]);
        }
        out += '\n';
    }

}  // namespace edgesel::detail

#endif
