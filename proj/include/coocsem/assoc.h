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

#ifndef COOCSEM_ASSOC_H_
#define COOCSEM_ASSOC_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coocsem/cooc.h"
#include "coocsem/error.h"

namespace coocsem {

struct AssociateConfig {
  size_t cap = 1000;
  size_t stoplist_size = 100;
  // When false the list is truncated to `cap` first and stoplist words are
  // removed afterwards, leaving fewer than `cap` slots filled.
  bool stoplist_before_truncation = true;
  AssociationConfig association;
};

struct AssociateEntry {
  std::string word;
  double as_value = 0;

  bool operator==(const AssociateEntry &) const = default;
};

// Associates of a cue ordered by AS descending, ties lexicographic.
struct AssociateSet {
  std::string cue;
  std::vector<AssociateEntry> associates;
};

// Throws kNotInVocabulary for an unknown cue. A cue without significant
// co-occurrents yields an empty set.
AssociateSet BuildAssociates(std::string_view cue, const PairStats &stats,
                             std::span<const std::string> stoplist,
                             const AssociateConfig &config = {});

enum class OverlapBand { kLow, kMid, kHigh };

std::string_view BandName(OverlapBand band);

struct BandThresholds {
  size_t high_above = 60;
  size_t low_below = 15;

  OverlapBand Classify(size_t ca_count) const {
    if (ca_count > high_above) return OverlapBand::kHigh;
    if (ca_count < low_below) return OverlapBand::kLow;
    return OverlapBand::kMid;
  }
};

struct OverlapResult {
  std::string word_a;
  std::string word_b;
  size_t ca_count = 0;
  OverlapBand band = OverlapBand::kLow;
};

// Write-once map from cue to its associate set; reads are thread-safe.
class AssociateStore {
 public:
  void Add(AssociateSet set);
  const AssociateSet *Find(std::string_view cue) const;
  // Sorted member words of a cue's set, or nullptr.
  const std::vector<std::string> *Members(std::string_view cue) const;
  size_t size() const { return sets_.size(); }

 private:
  struct Slot {
    AssociateSet set;
    std::vector<std::string> members;
  };
  std::map<std::string, Slot, std::less<>> sets_;
};

// Builds sets for every known cue in `cues` (duplicates and unknown words
// are skipped) using the top `config.stoplist_size` words as stoplist.
AssociateStore BuildStore(std::span<const std::string> cues,
                          const PairStats &stats,
                          const AssociateConfig &config = {},
                          unsigned threads = 1);

// Throws kMissingCue when either word has no set in the store.
OverlapResult CommonAssociates(std::string_view w1, std::string_view w2,
                               const AssociateStore &store,
                               const BandThresholds &bands = {});

struct BatchCaEntry {
  std::string word_a;
  std::string word_b;
  std::optional<OverlapResult> result;
  std::optional<ErrorCode> error;
  std::string message;
};

// Element-wise CommonAssociates; failures are recorded per entry.
std::vector<BatchCaEntry> BatchCa(
    std::span<const std::pair<std::string, std::string>> pairs,
    const AssociateStore &store, const BandThresholds &bands = {},
    unsigned threads = 1);

// rank, associate, as_value
void WriteAssociatesTsv(std::ostream &out, const AssociateSet &set);

// word_a, word_b, ca_count, band. Failed entries carry "NA" and the error
// code name in place of count and band.
void WriteCaTsv(std::ostream &out, std::span<const BatchCaEntry> entries);

// Two tab-separated words per line.
std::vector<std::pair<std::string, std::string>> ReadPairList(std::istream &in);

}  // namespace coocsem

#endif  // COOCSEM_ASSOC_H_
