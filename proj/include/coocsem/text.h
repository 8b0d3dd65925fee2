// Copyright 2026 The coocsem Authors.
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

#ifndef COOCSEM_TEXT_H_
#define COOCSEM_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coocsem::text {

// Decodes UTF-8 into Unicode scalar values. Returns nullopt on any
// malformed sequence (overlongs, surrogates and values > U+10FFFF included).
std::optional<std::u32string> DecodeUtf8(std::string_view s);

bool IsValidUtf8(std::string_view s);

std::string EncodeUtf8(std::u32string_view s);

// Number of Unicode scalar values; the input must be valid UTF-8.
size_t CharLength(std::string_view s);

// Lowercase mapping for ASCII and Latin-1 letters (covers German umlauts).
char32_t FoldCase(char32_t c);
std::string FoldCase(std::string_view s);

bool IsUnicodeSpace(char32_t c);
bool IsPunctuation(char32_t c);

// Splits on Unicode whitespace; empty fields are dropped.
std::vector<std::string> SplitWhitespace(std::string_view s);

// Removes leading and trailing punctuation characters.
std::string StripPunctuation(std::string_view s);

// Splits one TSV line on '\t'. A trailing '\r' is not stripped.
std::vector<std::string_view> SplitTabs(std::string_view line);

// Shortest round-trip decimal representation.
std::string FormatDouble(double v);

// Strict parsers: the whole field must be consumed.
std::optional<double> ParseDouble(std::string_view s);
std::optional<long long> ParseInt(std::string_view s);

}  // namespace coocsem::text

#endif  // COOCSEM_TEXT_H_
