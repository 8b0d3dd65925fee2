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

#include "coocsem/corpus.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "coocsem/error.h"
#include "coocsem/parallel.h"
#include "coocsem/text.h"

namespace coocsem {
namespace {

constexpr size_t kBlockLines = 1 << 15;

bool AllDigits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

struct ShardCounts {
  std::unordered_map<std::string, CorpusIndex::RawCount> counts;
  IngestDiagnostics diagnostics;
  uint64_t sentences = 0;
};

void Tally(IngestDiagnostics &d, LineStatus status) {
  ++d.lines_read;
  switch (status) {
    case LineStatus::kEmpty: ++d.empty_lines; break;
    case LineStatus::kMalformedUtf8: ++d.malformed_utf8; break;
    case LineStatus::kRejectedTab: ++d.rejected_tab; break;
    case LineStatus::kOk: break;
  }
}

void CountSentence(const std::vector<std::string> &tokens,
                   std::vector<std::string_view> &scratch, ShardCounts &shard) {
  scratch.assign(tokens.begin(), tokens.end());
  std::sort(scratch.begin(), scratch.end());
  for (size_t i = 0; i < scratch.size();) {
    size_t j = i;
    while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
    auto &c = shard.counts[std::string(scratch[i])];
    c.sentence_freq += 1;
    c.token_freq += j - i;
    i = j;
  }
  ++shard.sentences;
}

}  // namespace

LineStatus TokenizeLine(std::string_view line, const TokenizerConfig &config,
                        std::vector<std::string> &tokens) {
  tokens.clear();
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (!text::IsValidUtf8(line)) return LineStatus::kMalformedUtf8;

  const size_t tab = line.find('\t');
  if (tab != std::string_view::npos) {
    const bool id_like = AllDigits(line.substr(0, tab));
    if (config.id_column == TokenizerConfig::IdColumn::kNever || !id_like) {
      return LineStatus::kRejectedTab;
    }
    line.remove_prefix(tab + 1);
    if (line.find('\t') != std::string_view::npos) return LineStatus::kRejectedTab;
  } else if (config.id_column == TokenizerConfig::IdColumn::kAlways) {
    return LineStatus::kRejectedTab;
  }

  for (auto &tok : text::SplitWhitespace(line)) {
    if (config.strip_punctuation) tok = text::StripPunctuation(tok);
    if (config.case_fold) tok = text::FoldCase(tok);
    if (!tok.empty()) tokens.push_back(std::move(tok));
  }
  return tokens.empty() ? LineStatus::kEmpty : LineStatus::kOk;
}

IngestDiagnostics ReadSentences(
    std::istream &in, const TokenizerConfig &config,
    const std::function<void(const SentenceRecord &)> &sink) {
  IngestDiagnostics diagnostics;
  SentenceRecord record;
  std::string line;
  uint64_t next_id = 0;
  while (std::getline(in, line)) {
    const LineStatus status = TokenizeLine(line, config, record.tokens);
    Tally(diagnostics, status);
    if (status != LineStatus::kOk) continue;
    record.sentence_id = next_id++;
    sink(record);
  }
  return diagnostics;
}

CorpusIndex CorpusIndex::FromCounts(
    uint64_t n_sentences,
    const std::unordered_map<std::string, RawCount> &counts,
    FrequencyBasis basis, IngestDiagnostics diagnostics) {
  if (n_sentences == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "corpus contains no sentences");
  }
  CorpusIndex index;
  index.n_sentences_ = n_sentences;
  index.basis_ = basis;
  index.diagnostics_ = diagnostics;
  index.entries_.reserve(counts.size());
  for (const auto &[word, c] : counts) {
    VocabEntry e;
    e.word = word;
    e.sentence_freq = c.sentence_freq;
    e.token_freq = c.token_freq;
    index.entries_.push_back(std::move(e));
  }
  std::sort(index.entries_.begin(), index.entries_.end(),
            [](const VocabEntry &a, const VocabEntry &b) {
              if (a.sentence_freq != b.sentence_freq) {
                return a.sentence_freq > b.sentence_freq;
              }
              return a.word < b.word;
            });
  for (const auto &e : index.entries_) {
    const uint64_t f =
        basis == FrequencyBasis::kSentence ? e.sentence_freq : e.token_freq;
    index.f_max_ = std::max(index.f_max_, f);
  }
  index.ids_.reserve(index.entries_.size());
  for (size_t i = 0; i < index.entries_.size(); ++i) {
    auto &e = index.entries_[i];
    e.freq_rank = static_cast<uint32_t>(i + 1);
    e.freq_class = FrequencyClass(
        index.f_max_,
        basis == FrequencyBasis::kSentence ? e.sentence_freq : e.token_freq);
    index.ids_.emplace(e.word, static_cast<WordId>(i));
  }
  return index;
}

std::optional<WordId> CorpusIndex::Find(std::string_view word) const {
  auto it = ids_.find(word);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

WordId CorpusIndex::Id(std::string_view word) const {
  auto id = Find(word);
  if (!id) {
    throw Error(ErrorCode::kNotInVocabulary,
                "word not in vocabulary: " + std::string(word));
  }
  return *id;
}

CorpusIndex Ingest(std::istream &in, const IngestOptions &options) {
  const unsigned threads = std::max(1u, options.threads);
  std::vector<ShardCounts> shards(threads);
  std::vector<std::string> block;
  block.reserve(kBlockLines);
  std::string line;

  auto flush = [&] {
    ParallelSlices(block.size(), threads,
                   [&](unsigned worker, size_t begin, size_t end) {
                     auto &shard = shards[worker];
                     std::vector<std::string> tokens;
                     std::vector<std::string_view> scratch;
                     for (size_t i = begin; i < end; ++i) {
                       const auto status =
                           TokenizeLine(block[i], options.tokenizer, tokens);
                       Tally(shard.diagnostics, status);
                       if (status == LineStatus::kOk) {
                         CountSentence(tokens, scratch, shard);
                       }
                     }
                   });
    block.clear();
  };

  while (std::getline(in, line)) {
    block.push_back(std::move(line));
    if (block.size() == kBlockLines) flush();
  }
  flush();

  // Merge into shard 0.
  auto &total = shards[0];
  for (size_t s = 1; s < shards.size(); ++s) {
    for (auto &[word, c] : shards[s].counts) {
      auto &t = total.counts[word];
      t.sentence_freq += c.sentence_freq;
      t.token_freq += c.token_freq;
    }
    total.sentences += shards[s].sentences;
    const auto &d = shards[s].diagnostics;
    total.diagnostics.lines_read += d.lines_read;
    total.diagnostics.malformed_utf8 += d.malformed_utf8;
    total.diagnostics.rejected_tab += d.rejected_tab;
    total.diagnostics.empty_lines += d.empty_lines;
  }
  return CorpusIndex::FromCounts(total.sentences, total.counts, options.basis,
                                 total.diagnostics);
}

int FrequencyClass(uint64_t f_max, uint64_t freq) {
  if (freq == 0 || f_max == 0) {
    throw Error(ErrorCode::kInvalidInput, "frequency class of a zero count");
  }
  // std::round rounds halfway cases away from zero.
  return static_cast<int>(std::round(
      std::log2(static_cast<double>(f_max) / static_cast<double>(freq))));
}

int FrequencyClass(std::string_view word, const CorpusIndex &index) {
  return index.Lookup(word).freq_class;
}

std::vector<std::string> TopFrequent(const CorpusIndex &index, size_t k) {
  const auto entries = index.entries();
  k = std::min(k, entries.size());
  std::vector<std::string> out;
  out.reserve(k);
  for (size_t i = 0; i < k; ++i) out.push_back(entries[i].word);
  return out;
}

void WriteIndexTsv(std::ostream &out, const CorpusIndex &index) {
  out << "#n_sentences=" << index.n_sentences() << "\tf_max=" << index.f_max()
      << '\n';
  for (const auto &e : index.entries()) {
    out << e.word << '\t' << e.sentence_freq << '\t' << e.token_freq << '\t'
        << e.freq_rank << '\t' << e.freq_class << '\n';
  }
}

}  // namespace coocsem
