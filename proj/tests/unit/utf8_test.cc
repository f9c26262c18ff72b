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

#include "readlevel/utf8.h"

#include <gtest/gtest.h>

namespace readlevel {
namespace {

TEST(Utf8Test, RoundTripsMixedScripts) {
  const std::string text = "Olá, coração! «ação» — 3€ 𝄞";
  EXPECT_EQ(utf8::Encode(utf8::Decode(text)), text);
}

TEST(Utf8Test, InvalidBytesBecomeReplacementCharacters) {
  const std::string bad = "a\xC3";
  std::u32string cps = utf8::Decode(bad);
  ASSERT_EQ(cps.size(), 2u);
  EXPECT_EQ(cps[0], U'a');
  EXPECT_EQ(cps[1], char32_t{0xFFFD});
  EXPECT_EQ(utf8::Decode("\xFF").front(), char32_t{0xFFFD});
  EXPECT_EQ(utf8::Decode("\xE2\x28\xA1").front(), char32_t{0xFFFD});
}

TEST(Utf8Test, ClassifiesPortugueseLetters) {
  for (char32_t c : std::u32string(U"áéíóúâêôãõçÁÇàü")) {
    EXPECT_TRUE(utf8::IsLetter(c)) << static_cast<uint32_t>(c);
    EXPECT_FALSE(utf8::IsPunct(c));
  }
  EXPECT_FALSE(utf8::IsLetter(U'×'));
  EXPECT_TRUE(utf8::IsPunct(U'«'));
  EXPECT_TRUE(utf8::IsPunct(U'—'));
  EXPECT_TRUE(utf8::IsPunct(U'…'));
  EXPECT_TRUE(utf8::IsSpace(char32_t{0xA0}));
}

TEST(Utf8Test, LowercasesAccentedCapitals) {
  EXPECT_EQ(utf8::ToLower("ÁRVORE Ção"), "árvore ção");
  EXPECT_TRUE(utf8::IsUpper(U'É'));
  EXPECT_FALSE(utf8::IsUpper(U'é'));
}

TEST(Utf8Test, TrimStripsAsciiWhitespaceOnly) {
  EXPECT_EQ(utf8::Trim("  \t abc \n"), "abc");
  EXPECT_EQ(utf8::Trim("   "), "");
}

}  // namespace
}  // namespace readlevel
