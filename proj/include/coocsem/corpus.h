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

#ifndef COOCSEM_CORPUS_H_
#define COOCSEM_CORPUS_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coocsem {

using WordId = uint32_t;

struct TokenizerConfig {
  enum class IdColumn { kAuto, kAlways, kNever };

  // kAuto treats "<digits>\t<sentence>" lines as carrying an ID column.
  IdColumn id_column = IdColumn::kAuto;
  bool case_fold = false;
  bool strip_punctuation = false;
};

// Which count drives f_max and the frequency classes. Ranks and
// top_frequent always use sentence frequency.
enum class FrequencyBasis { kSentence, kToken };

struct IngestOptions {
  TokenizerConfig tokenizer;
  FrequencyBasis basis = FrequencyBasis::kSentence;
  unsigned threads = 1;
};

struct SentenceRecord {
  uint64_t sentence_id = 0;
  std::vector<std::string> tokens;
};

struct IngestDiagnostics {
  uint64_t lines_read = 0;
  uint64_t malformed_utf8 = 0;
  // Tabs outside the ID column are rejected.
  uint64_t rejected_tab = 0;
  uint64_t empty_lines = 0;
};

struct VocabEntry {
  std::string word;
  uint64_t sentence_freq = 0;
  uint64_t token_freq = 0;
  uint32_t freq_rank = 0;
  int freq_class = 0;
};

enum class LineStatus { kOk, kEmpty, kMalformedUtf8, kRejectedTab };

// Tokenizes one corpus line. `tokens` is cleared and filled only on kOk.
LineStatus TokenizeLine(std::string_view line, const TokenizerConfig &config,
                        std::vector<std::string> &tokens);

// Streams a sentence-per-line corpus, calling `sink` for each accepted
// sentence. Ids are assigned 0, 1, 2, ... over accepted sentences.
IngestDiagnostics ReadSentences(
    std::istream &in, const TokenizerConfig &config,
    const std::function<void(const SentenceRecord &)> &sink);

// Immutable vocabulary index. Word ids are `freq_rank - 1`, so entries()
// is in rank order: sentence frequency descending, ties lexicographic.
class CorpusIndex {
 public:
  struct RawCount {
    uint64_t sentence_freq = 0;
    uint64_t token_freq = 0;
  };

  CorpusIndex() = default;

  // Throws kEmptyCorpus when n_sentences is zero.
  static CorpusIndex FromCounts(
      uint64_t n_sentences,
      const std::unordered_map<std::string, RawCount> &counts,
      FrequencyBasis basis, IngestDiagnostics diagnostics = {});

  uint64_t n_sentences() const { return n_sentences_; }
  uint64_t f_max() const { return f_max_; }
  FrequencyBasis basis() const { return basis_; }
  size_t size() const { return entries_.size(); }
  const IngestDiagnostics &diagnostics() const { return diagnostics_; }

  std::span<const VocabEntry> entries() const { return entries_; }
  const VocabEntry &entry(WordId id) const { return entries_[id]; }

  std::optional<WordId> Find(std::string_view word) const;
  // Throws kNotInVocabulary.
  WordId Id(std::string_view word) const;
  const VocabEntry &Lookup(std::string_view word) const {
    return entries_[Id(word)];
  }

 private:
  struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  uint64_t n_sentences_ = 0;
  uint64_t f_max_ = 0;
  FrequencyBasis basis_ = FrequencyBasis::kSentence;
  IngestDiagnostics diagnostics_;
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, WordId, StringHash, std::equal_to<>> ids_;
};

// Single pass over the stream. Lines are processed in blocks, each block
// split across `options.threads` workers with private count maps that are
// summed at the end, so the result does not depend on the thread count.
CorpusIndex Ingest(std::istream &in, const IngestOptions &options = {});

// round(log2(f_max / freq)), rounding half away from zero.
int FrequencyClass(uint64_t f_max, uint64_t freq);
int FrequencyClass(std::string_view word, const CorpusIndex &index);

// The k words with the highest sentence frequency, ties lexicographic.
std::vector<std::string> TopFrequent(const CorpusIndex &index, size_t k);

// One header line "#n_sentences=<n>\tf_max=<f>", then one row per word in
// rank order: word, sentence_freq, token_freq, freq_rank, freq_class.
void WriteIndexTsv(std::ostream &out, const CorpusIndex &index);

}  // namespace coocsem

#endif  // COOCSEM_CORPUS_H_
