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

#include "coocsem/assoc.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "coocsem/parallel.h"
#include "coocsem/text.h"

namespace coocsem {

AssociateSet BuildAssociates(std::string_view cue, const PairStats &stats,
                             std::span<const std::string> stoplist,
                             const AssociateConfig &config) {
  const auto &index = stats.index();
  const WordId cue_id = index.Id(cue);
  const std::set<std::string_view> stop(stoplist.begin(), stoplist.end());

  AssociateSet out;
  out.cue = std::string(cue);
  for (const auto &nb : stats.Neighbors(cue_id)) {
    if (nb.word == cue_id) continue;
    const auto &word = index.entry(nb.word).word;
    if (config.stoplist_before_truncation && stop.count(word)) continue;
    const double as =
        AssociationStrength(cue_id, nb.word, stats, config.association);
    if (as > 0.0) out.associates.push_back(AssociateEntry{word, as});
  }
  std::sort(out.associates.begin(), out.associates.end(),
            [](const AssociateEntry &a, const AssociateEntry &b) {
              if (a.as_value != b.as_value) return a.as_value > b.as_value;
              return a.word < b.word;
            });
  if (out.associates.size() > config.cap) out.associates.resize(config.cap);
  if (!config.stoplist_before_truncation) {
    std::erase_if(out.associates, [&](const AssociateEntry &e) {
      return stop.count(e.word) > 0;
    });
  }
  return out;
}

std::string_view BandName(OverlapBand band) {
  switch (band) {
    case OverlapBand::kHigh: return "High";
    case OverlapBand::kMid: return "Mid";
    case OverlapBand::kLow: return "Low";
  }
  return "Low";
}

void AssociateStore::Add(AssociateSet set) {
  Slot slot;
  slot.members.reserve(set.associates.size());
  for (const auto &a : set.associates) slot.members.push_back(a.word);
  std::sort(slot.members.begin(), slot.members.end());
  std::string cue = set.cue;
  slot.set = std::move(set);
  sets_.insert_or_assign(std::move(cue), std::move(slot));
}

const AssociateSet *AssociateStore::Find(std::string_view cue) const {
  auto it = sets_.find(cue);
  return it == sets_.end() ? nullptr : &it->second.set;
}

const std::vector<std::string> *AssociateStore::Members(
    std::string_view cue) const {
  auto it = sets_.find(cue);
  return it == sets_.end() ? nullptr : &it->second.members;
}

AssociateStore BuildStore(std::span<const std::string> cues,
                          const PairStats &stats,
                          const AssociateConfig &config, unsigned threads) {
  std::vector<std::string> unique;
  for (const auto &c : cues) {
    if (stats.index().Find(c)) unique.push_back(c);
  }
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  const auto stoplist = TopFrequent(stats.index(), config.stoplist_size);
  std::vector<AssociateSet> sets(unique.size());
  ParallelSlices(unique.size(), threads,
                 [&](unsigned, size_t begin, size_t end) {
                   for (size_t i = begin; i < end; ++i) {
                     sets[i] = BuildAssociates(unique[i], stats, stoplist, config);
                   }
                 });
  AssociateStore store;
  for (auto &s : sets) store.Add(std::move(s));
  return store;
}

OverlapResult CommonAssociates(std::string_view w1, std::string_view w2,
                               const AssociateStore &store,
                               const BandThresholds &bands) {
  const auto *m1 = store.Members(w1);
  const auto *m2 = store.Members(w2);
  if (!m1 || !m2) {
    throw Error(ErrorCode::kMissingCue,
                "no associate set for cue: " + std::string(!m1 ? w1 : w2));
  }
  size_t shared = 0;
  auto a = m1->begin();
  auto b = m2->begin();
  while (a != m1->end() && b != m2->end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++shared;
      ++a;
      ++b;
    }
  }
  OverlapResult r;
  r.word_a = std::string(w1);
  r.word_b = std::string(w2);
  r.ca_count = shared;
  r.band = bands.Classify(shared);
  return r;
}

std::vector<BatchCaEntry> BatchCa(
    std::span<const std::pair<std::string, std::string>> pairs,
    const AssociateStore &store, const BandThresholds &bands,
    unsigned threads) {
  std::vector<BatchCaEntry> out(pairs.size());
  ParallelSlices(pairs.size(), threads,
                 [&](unsigned, size_t begin, size_t end) {
                   for (size_t i = begin; i < end; ++i) {
                     auto &e = out[i];
                     e.word_a = pairs[i].first;
                     e.word_b = pairs[i].second;
                     try {
                       e.result = CommonAssociates(e.word_a, e.word_b, store, bands);
                     } catch (const Error &err) {
                       e.error = err.code();
                       e.message = err.what();
                     }
                   }
                 });
  return out;
}

void WriteAssociatesTsv(std::ostream &out, const AssociateSet &set) {
  size_t rank = 1;
  for (const auto &a : set.associates) {
    out << rank++ << '\t' << a.word << '\t' << text::FormatDouble(a.as_value)
        << '\n';
  }
}

void WriteCaTsv(std::ostream &out, std::span<const BatchCaEntry> entries) {
  for (const auto &e : entries) {
    out << e.word_a << '\t' << e.word_b << '\t';
    if (e.result) {
      out << e.result->ca_count << '\t' << BandName(e.result->band);
    } else {
      out << "NA\t" << ErrorCodeName(e.error.value_or(ErrorCode::kMissingCue));
    }
    out << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> ReadPairList(std::istream &in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = text::SplitTabs(line);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::kInvalidInput,
                  "pair list line " + std::to_string(line_no) +
                      ": expected two tab-separated words");
    }
    pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return pairs;
}

}  // namespace coocsem
