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

#ifndef COOCSEM_COOC_H_
#define COOCSEM_COOC_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coocsem/corpus.h"

namespace coocsem {

struct PairCountOptions {
  TokenizerConfig tokenizer;
  // Words below this sentence frequency take no part in pair counting.
  uint64_t min_sentence_freq = 2;
  unsigned threads = 1;
};

struct Neighbor {
  WordId word;
  uint32_t count;
};

// Sparse presence-based sentence co-occurrence counts over an index.
// Keeps a reference to the index, which must outlive it.
class PairStats {
 public:
  using Key = uint64_t;

  static Key MakeKey(WordId a, WordId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<Key>(a) << 32) | b;
  }
  static std::pair<WordId, WordId> SplitKey(Key k) {
    return {static_cast<WordId>(k >> 32), static_cast<WordId>(k & 0xFFFFFFFFu)};
  }

  // `pairs` need not be sorted; duplicate keys are summed.
  PairStats(const CorpusIndex &index, uint64_t min_sentence_freq,
            std::vector<std::pair<Key, uint32_t>> pairs);

  const CorpusIndex &index() const { return *index_; }
  uint64_t min_sentence_freq() const { return min_sentence_freq_; }
  bool IsCounted(WordId w) const {
    return index_->entry(w).sentence_freq >= min_sentence_freq_;
  }

  // Sentences containing both words; 0 for a == b is never stored.
  uint32_t Count(WordId a, WordId b) const;
  // Partners of `w` with nonzero count, ascending by id.
  std::span<const Neighbor> Neighbors(WordId w) const;

  // All stored pairs, ascending by key (id order, not word order).
  std::span<const std::pair<Key, uint32_t>> pairs() const { return pairs_; }

 private:
  const CorpusIndex *index_;
  uint64_t min_sentence_freq_;
  std::vector<std::pair<Key, uint32_t>> pairs_;
  std::vector<size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

// Second pass over the same corpus that built `index`.
PairStats CountPairs(std::istream &in, const CorpusIndex &index,
                     const PairCountOptions &options = {});

struct ContingencyTable {
  uint64_t k11 = 0;  // both
  uint64_t k12 = 0;  // a only
  uint64_t k21 = 0;  // b only
  uint64_t k22 = 0;  // neither
  uint64_t n = 0;

  // Expected k11 under independence of the margins.
  double ExpectedK11() const;
};

ContingencyTable Contingency(std::string_view a, std::string_view b,
                             const PairStats &stats);
ContingencyTable Contingency(WordId a, WordId b, const PairStats &stats);

// Dunning's G2 = 2 * sum k_ij ln(k_ij / E_ij), with 0 ln 0 = 0.
// Throws kDegenerateTable when n == 0 or the cells do not sum to n.
double LogLikelihood(const ContingencyTable &table);

struct AssociationConfig {
  double threshold = 3.841;  // chi-square(1), p < .05
  double log_base = 10.0;
};

struct AssociationRecord {
  std::string word_a;
  std::string word_b;
  ContingencyTable table;
  double g2 = 0;
  double as_value = 0;
  bool above_expected = false;
};

// AS for a table: log_base(g2) when g2 >= threshold and k11 > E11, else 0.
double AssociationStrength(const ContingencyTable &table, double g2,
                           const AssociationConfig &config);
double AssociationStrength(WordId a, WordId b, const PairStats &stats,
                           const AssociationConfig &config);
AssociationRecord Associate(std::string_view a, std::string_view b,
                            const PairStats &stats,
                            const AssociationConfig &config = {});

// word_a, word_b, k11, g2, as_value for every stored pair with
// word_a < word_b, rows sorted by (word_a, word_b).
void WritePairsTsv(std::ostream &out, const PairStats &stats,
                   const AssociationConfig &config = {});

}  // namespace coocsem

#endif  // COOCSEM_COOC_H_
