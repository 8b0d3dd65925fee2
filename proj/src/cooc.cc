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

#include "coocsem/cooc.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "coocsem/error.h"
#include "coocsem/parallel.h"
#include "coocsem/text.h"

namespace coocsem {
namespace {

constexpr size_t kBlockLines = 1 << 15;

// k * ln(k / e) with e = row * col / n, and 0 for an empty cell.
double CellTerm(uint64_t k, uint64_t row, uint64_t col, uint64_t n) {
  if (k == 0) return 0.0;
  const double kd = static_cast<double>(k);
  const double margins = std::log(static_cast<double>(row)) +
                         std::log(static_cast<double>(col));
  return kd * ((std::log(kd) + std::log(static_cast<double>(n))) - margins);
}

// k11 * n > row1 * col1, evaluated exactly.
bool AboveExpected(const ContingencyTable &t) {
  using Wide = unsigned __int128;
  return static_cast<Wide>(t.k11) * t.n >
         static_cast<Wide>(t.k11 + t.k12) * (t.k11 + t.k21);
}

}  // namespace

PairStats::PairStats(const CorpusIndex &index, uint64_t min_sentence_freq,
                     std::vector<std::pair<Key, uint32_t>> pairs)
    : index_(&index), min_sentence_freq_(min_sentence_freq) {
  std::sort(pairs.begin(), pairs.end());
  for (const auto &p : pairs) {
    if (!pairs_.empty() && pairs_.back().first == p.first) {
      pairs_.back().second += p.second;
    } else {
      pairs_.push_back(p);
    }
  }

  const size_t v = index.size();
  offsets_.assign(v + 1, 0);
  for (const auto &[key, count] : pairs_) {
    auto [a, b] = SplitKey(key);
    ++offsets_[a + 1];
    ++offsets_[b + 1];
  }
  for (size_t i = 0; i < v; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_[v]);
  std::vector<size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto &[key, count] : pairs_) {
    auto [a, b] = SplitKey(key);
    adjacency_[fill[a]++] = Neighbor{b, count};
  }
  for (const auto &[key, count] : pairs_) {
    auto [a, b] = SplitKey(key);
    adjacency_[fill[b]++] = Neighbor{a, count};
  }
  for (size_t w = 0; w < v; ++w) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[w]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[w + 1]),
              [](const Neighbor &x, const Neighbor &y) { return x.word < y.word; });
  }
}

uint32_t PairStats::Count(WordId a, WordId b) const {
  if (a == b) return 0;
  const auto nb = Neighbors(a);
  auto it = std::lower_bound(
      nb.begin(), nb.end(), b,
      [](const Neighbor &n, WordId id) { return n.word < id; });
  return (it != nb.end() && it->word == b) ? it->count : 0;
}

std::span<const Neighbor> PairStats::Neighbors(WordId w) const {
  return std::span<const Neighbor>(adjacency_).subspan(
      offsets_[w], offsets_[w + 1] - offsets_[w]);
}

PairStats CountPairs(std::istream &in, const CorpusIndex &index,
                     const PairCountOptions &options) {
  const unsigned threads = std::max(1u, options.threads);
  std::vector<std::unordered_map<PairStats::Key, uint32_t>> shards(threads);
  std::vector<std::string> block;
  block.reserve(kBlockLines);

  auto flush = [&] {
    ParallelSlices(block.size(), threads,
                   [&](unsigned worker, size_t begin, size_t end) {
                     auto &counts = shards[worker];
                     std::vector<std::string> tokens;
                     std::vector<WordId> ids;
                     for (size_t i = begin; i < end; ++i) {
                       if (TokenizeLine(block[i], options.tokenizer, tokens) !=
                           LineStatus::kOk) {
                         continue;
                       }
                       ids.clear();
                       for (const auto &t : tokens) {
                         auto id = index.Find(t);
                         if (id && index.entry(*id).sentence_freq >=
                                       options.min_sentence_freq) {
                           ids.push_back(*id);
                         }
                       }
                       std::sort(ids.begin(), ids.end());
                       ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
                       for (size_t x = 0; x < ids.size(); ++x) {
                         for (size_t y = x + 1; y < ids.size(); ++y) {
                           ++counts[PairStats::MakeKey(ids[x], ids[y])];
                         }
                       }
                     }
                   });
    block.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    block.push_back(std::move(line));
    if (block.size() == kBlockLines) flush();
  }
  flush();

  size_t total = 0;
  for (const auto &s : shards) total += s.size();
  std::vector<std::pair<PairStats::Key, uint32_t>> pairs;
  pairs.reserve(total);
  for (auto &s : shards) {
    pairs.insert(pairs.end(), s.begin(), s.end());
    s.clear();
  }
  return PairStats(index, options.min_sentence_freq, std::move(pairs));
}

double ContingencyTable::ExpectedK11() const {
  return static_cast<double>(k11 + k12) * static_cast<double>(k11 + k21) /
         static_cast<double>(n);
}

ContingencyTable Contingency(WordId a, WordId b, const PairStats &stats) {
  const auto &index = stats.index();
  if (a >= index.size() || b >= index.size()) {
    throw Error(ErrorCode::kNotInVocabulary, "word id out of range");
  }
  ContingencyTable t;
  t.n = index.n_sentences();
  const uint64_t fa = index.entry(a).sentence_freq;
  const uint64_t fb = index.entry(b).sentence_freq;
  t.k11 = a == b ? fa : stats.Count(a, b);
  t.k12 = fa - t.k11;
  t.k21 = fb - t.k11;
  t.k22 = t.n - t.k11 - t.k12 - t.k21;
  return t;
}

ContingencyTable Contingency(std::string_view a, std::string_view b,
                             const PairStats &stats) {
  const auto &index = stats.index();
  return Contingency(index.Id(a), index.Id(b), stats);
}

double LogLikelihood(const ContingencyTable &t) {
  if (t.n == 0) {
    throw Error(ErrorCode::kDegenerateTable, "contingency table with n = 0");
  }
  if (t.k11 + t.k12 + t.k21 + t.k22 != t.n) {
    throw Error(ErrorCode::kDegenerateTable,
                "contingency cells do not sum to n");
  }
  const uint64_t r1 = t.k11 + t.k12;
  const uint64_t r2 = t.k21 + t.k22;
  const uint64_t c1 = t.k11 + t.k21;
  const uint64_t c2 = t.k12 + t.k22;
  // The off-diagonal cells are added first so that swapping the two words
  // (which swaps k12 and k21) gives a bit-identical result.
  const double off = CellTerm(t.k12, r1, c2, t.n) + CellTerm(t.k21, r2, c1, t.n);
  const double g2 =
      2.0 * ((CellTerm(t.k11, r1, c1, t.n) + off) + CellTerm(t.k22, r2, c2, t.n));
  return g2 < 0.0 ? 0.0 : g2;
}

double AssociationStrength(const ContingencyTable &table, double g2,
                           const AssociationConfig &config) {
  if (g2 < config.threshold) return 0.0;
  if (!AboveExpected(table)) return 0.0;
  if (config.log_base == 10.0) return std::log10(g2);
  return std::log(g2) / std::log(config.log_base);
}

double AssociationStrength(WordId a, WordId b, const PairStats &stats,
                           const AssociationConfig &config) {
  const auto table = Contingency(a, b, stats);
  return AssociationStrength(table, LogLikelihood(table), config);
}

AssociationRecord Associate(std::string_view a, std::string_view b,
                            const PairStats &stats,
                            const AssociationConfig &config) {
  AssociationRecord r;
  r.word_a = std::string(a);
  r.word_b = std::string(b);
  r.table = Contingency(a, b, stats);
  r.g2 = LogLikelihood(r.table);
  r.above_expected = AboveExpected(r.table);
  r.as_value = AssociationStrength(r.table, r.g2, config);
  return r;
}

void WritePairsTsv(std::ostream &out, const PairStats &stats,
                   const AssociationConfig &config) {
  const auto &index = stats.index();
  struct Row {
    const std::string *a;
    const std::string *b;
    WordId ia;
    WordId ib;
  };
  std::vector<Row> rows;
  rows.reserve(stats.pairs().size());
  for (const auto &[key, count] : stats.pairs()) {
    auto [x, y] = PairStats::SplitKey(key);
    const std::string *wx = &index.entry(x).word;
    const std::string *wy = &index.entry(y).word;
    if (*wy < *wx) {
      std::swap(wx, wy);
      std::swap(x, y);
    }
    rows.push_back(Row{wx, wy, x, y});
  }
  std::sort(rows.begin(), rows.end(), [](const Row &l, const Row &r) {
    if (*l.a != *r.a) return *l.a < *r.a;
    return *l.b < *r.b;
  });
  for (const auto &row : rows) {
    const auto table = Contingency(row.ia, row.ib, stats);
    const double g2 = LogLikelihood(table);
    out << *row.a << '\t' << *row.b << '\t' << table.k11 << '\t'
        << text::FormatDouble(g2) << '\t'
        << text::FormatDouble(AssociationStrength(table, g2, config)) << '\n';
  }
}

}  // namespace coocsem
