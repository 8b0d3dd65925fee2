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

#include "coocsem/lexstats.h"

#include <ostream>
#include <vector>

#include "coocsem/error.h"
#include "coocsem/text.h"

namespace coocsem {
namespace {

// Not a Unicode scalar value, so it never collides with a real character.
constexpr char32_t kWildcard = 0xFFFFFFFF;

}  // namespace

Lexicon::Lexicon(std::span<const std::string> words, bool case_fold)
    : case_fold_(case_fold) {
  for (const auto &w : words) {
    auto decoded = text::DecodeUtf8(w);
    if (!decoded || decoded->empty()) continue;
    if (case_fold_) {
      for (auto &c : *decoded) c = text::FoldCase(c);
    }
    if (!words_.insert(*decoded).second) continue;
    std::u32string pattern = *decoded;
    for (size_t i = 0; i < pattern.size(); ++i) {
      const char32_t saved = pattern[i];
      pattern[i] = kWildcard;
      ++patterns_[pattern];
      pattern[i] = saved;
    }
  }
}

Lexicon Lexicon::FromIndex(const CorpusIndex &index,
                           const LexiconOptions &options) {
  std::vector<std::string> words;
  words.reserve(index.size());
  for (const auto &e : index.entries()) {
    if (e.sentence_freq >= options.min_sentence_freq) words.push_back(e.word);
  }
  return Lexicon(words, options.case_fold);
}

std::u32string Lexicon::Normalize(std::string_view word) const {
  auto decoded = text::DecodeUtf8(word);
  if (!decoded) {
    throw Error(ErrorCode::kInvalidInput, "word is not valid UTF-8");
  }
  if (decoded->empty()) throw Error(ErrorCode::kInvalidInput, "empty word");
  if (case_fold_) {
    for (auto &c : *decoded) c = text::FoldCase(c);
  }
  return *decoded;
}

size_t Lexicon::NeighborCount(std::string_view word) const {
  std::u32string pattern = Normalize(word);
  const bool self = words_.count(pattern) > 0;
  size_t hits = 0;
  for (size_t i = 0; i < pattern.size(); ++i) {
    const char32_t saved = pattern[i];
    pattern[i] = kWildcard;
    auto it = patterns_.find(pattern);
    if (it != patterns_.end()) hits += it->second;
    pattern[i] = saved;
  }
  return self ? hits - pattern.size() : hits;
}

size_t OrthographicNeighbors(std::string_view word, const Lexicon &lexicon) {
  return lexicon.NeighborCount(word);
}

LexProfile Profile(std::string_view word, const CorpusIndex &index,
                   const Lexicon &lexicon) {
  const auto &entry = index.Lookup(word);
  LexProfile p;
  p.word = entry.word;
  p.length = text::CharLength(entry.word);
  p.on_count = OrthographicNeighbors(entry.word, lexicon);
  p.freq_class = entry.freq_class;
  return p;
}

void WriteProfileTsv(std::ostream &out, std::span<const LexProfile> profiles) {
  for (const auto &p : profiles) {
    out << p.word << '\t' << p.length << '\t' << p.on_count << '\t'
        << p.freq_class << '\n';
  }
}

}  // namespace coocsem
