// Copyright 2026 The Readlevel Authors.
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

#ifndef READLEVEL_UTF8_H_
#define READLEVEL_UTF8_H_

#include <string>
#include <string_view>

namespace readlevel {
namespace utf8 {

// Decodes UTF-8. Invalid bytes are mapped to U+FFFD one byte at a time.
std::u32string Decode(std::string_view text);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t c);

// Character classes over the Latin range the Portuguese tooling needs.
bool IsSpace(char32_t c);
bool IsPunct(char32_t c);
bool IsLetter(char32_t c);
bool IsDigit(char32_t c);
bool IsUpper(char32_t c);
char32_t ToLower(char32_t c);

std::string ToLower(std::string_view text);
std::string Trim(std::string_view text);

}  // namespace utf8
}  // namespace readlevel

#endif  // READLEVEL_UTF8_H_
