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

#ifndef COOCSEM_LEXSTATS_H_
#define COOCSEM_LEXSTATS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "coocsem/corpus.h"

namespace coocsem {

struct LexiconOptions {
  bool case_fold = false;
  // Index words below this sentence frequency are left out of the lexicon.
  uint64_t min_sentence_freq = 0;
};

// Word set for neighborhood queries. Characters are Unicode scalar values.
// Each word of length L is registered under its L one-position wildcard
// patterns; a substitution neighbor of a query matches exactly one of the
// query's patterns, the query itself matches all of them.
class Lexicon {
 public:
  explicit Lexicon(std::span<const std::string> words, bool case_fold = false);
  static Lexicon FromIndex(const CorpusIndex &index,
                           const LexiconOptions &options = {});

  size_t size() const { return words_.size(); }
  bool case_fold() const { return case_fold_; }

  // Throws kInvalidInput for an empty or malformed word.
  size_t NeighborCount(std::string_view word) const;

 private:
  std::u32string Normalize(std::string_view word) const;

  bool case_fold_;
  std::unordered_set<std::u32string> words_;
  std::unordered_map<std::u32string, uint32_t> patterns_;
};

size_t OrthographicNeighbors(std::string_view word, const Lexicon &lexicon);

struct LexProfile {
  std::string word;
  size_t length = 0;
  size_t on_count = 0;
  int freq_class = 0;
};

// Throws kNotInVocabulary when the word is not in the index.
LexProfile Profile(std::string_view word, const CorpusIndex &index,
                   const Lexicon &lexicon);

// word, length, on_count, freq_class
void WriteProfileTsv(std::ostream &out, std::span<const LexProfile> profiles);

}  // namespace coocsem

#endif  // COOCSEM_LEXSTATS_H_
