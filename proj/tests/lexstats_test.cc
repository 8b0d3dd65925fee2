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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "coocsem/error.h"
#include "coocsem/lexstats.h"
#include "coocsem/random.h"
#include "coocsem/text.h"

using namespace coocsem;

namespace {

// Brute-force Coltheart N over decoded strings.
size_t HammingNeighbors(const std::u32string &w, const std::vector<std::u32string> &lex) {
  size_t n = 0;
  for (const auto &o : lex) {
    if (o.size() != w.size() || o == w) continue;
    size_t diff = 0;
    for (size_t i = 0; i < w.size(); ++i) diff += o[i] != w[i];
    n += diff == 1;
  }
  return n;
}

}  // namespace

TEST_CASE("small lexicons") {
  const std::vector<std::string> self = {"hand"};
  CHECK(OrthographicNeighbors("hand", Lexicon(self)) == 0);

  const std::vector<std::string> words = {"hand", "band", "hund"};
  const Lexicon lex(words);
  CHECK(OrthographicNeighbors("hand", lex) == 2);
  CHECK(OrthographicNeighbors("band", lex) == 1);
  CHECK(OrthographicNeighbors("hans", lex) == 1);  // query not in lexicon
  CHECK(OrthographicNeighbors("hands", lex) == 0);
  CHECK_THROWS_AS(OrthographicNeighbors("", lex), Error);
}

TEST_CASE("umlauts are single characters") {
  const std::vector<std::string> words = {"b\xC3\xA4r", "bar", "b\xC3\xA4h"};
  const Lexicon lex(words);
  CHECK(OrthographicNeighbors("bar", lex) == 1);
  CHECK(OrthographicNeighbors("b\xC3\xA4r", lex) == 2);
  CHECK(text::CharLength("b\xC3\xA4r") == 3);
}

TEST_CASE("case sensitivity is configurable") {
  const std::vector<std::string> words = {"Hand", "hand", "Band"};
  CHECK(OrthographicNeighbors("Hand", Lexicon(words)) == 2);
  const Lexicon folded(words, true);
  CHECK(folded.size() == 2);
  CHECK(OrthographicNeighbors("Hand", folded) == 1);
}

TEST_CASE("random lexicon matches pairwise Hamming brute force") {
  Rng rng(99);
  const std::u32string alphabet = U"abcdeäö";
  std::vector<std::string> words;
  for (int i = 0; i < 1000; ++i) {
    std::u32string w;
    const size_t len = 2 + rng.Below(4);
    for (size_t k = 0; k < len; ++k) w.push_back(alphabet[rng.Below(alphabet.size())]);
    words.push_back(text::EncodeUtf8(w));
  }
  const Lexicon lex(words);
  std::vector<std::u32string> decoded;
  for (const auto &w : words) decoded.push_back(*text::DecodeUtf8(w));
  std::sort(decoded.begin(), decoded.end());
  decoded.erase(std::unique(decoded.begin(), decoded.end()), decoded.end());
  for (const auto &w : decoded) {
    const size_t n = OrthographicNeighbors(text::EncodeUtf8(w), lex);
    CHECK(n == HammingNeighbors(w, decoded));
    CHECK(n < lex.size());
  }
}

TEST_CASE("profile bundles the control columns") {
  std::istringstream in("der Hund\nder Hand\nder Band\nder\n");
  const auto index = Ingest(in);
  const auto lex = Lexicon::FromIndex(index);
  const auto p = Profile("der", index, lex);
  CHECK(p.length == 3);
  CHECK(p.freq_class == 0);
  const auto h = Profile("Hand", index, lex);
  CHECK(h.on_count == 2);
  CHECK(h.freq_class == FrequencyClass("Hand", index));
  CHECK(h.on_count == OrthographicNeighbors("Hand", lex));
  CHECK_THROWS_AS(Profile("Katze", index, lex), Error);

  std::ostringstream out;
  WriteProfileTsv(out, std::vector<LexProfile>{h});
  CHECK(out.str() == "Hand\t4\t2\t2\n");

  LexiconOptions opts;
  opts.min_sentence_freq = 2;
  CHECK(Lexicon::FromIndex(index, opts).size() == 1);
}
