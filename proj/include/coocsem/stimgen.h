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

#ifndef COOCSEM_STIMGEN_H_
#define COOCSEM_STIMGEN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coocsem/assoc.h"
#include "coocsem/cooc.h"
#include "coocsem/lexstats.h"

namespace coocsem {

// 2x2 design cells; the first letter is the verb-noun CA band, the second
// the adjective-noun band.
enum class Condition { kHH, kHL, kLH, kLL };

inline constexpr std::array<Condition, 4> kConditions = {
    Condition::kHH, Condition::kHL, Condition::kLH, Condition::kLL};

std::string_view ConditionName(Condition c);
std::optional<Condition> ParseCondition(std::string_view s);
bool VerbHigh(Condition c);
bool AdjectiveHigh(Condition c);

enum Feature : size_t {
  kCaVerbNoun,
  kCaAdjNoun,
  kAsVerbNoun,
  kAsAdjNoun,
  kAsVerbAdj,
  kCaVerbAdj,
  kNounLength,
  kNounFreqClass,
  kNounOn,
  kVerbLength,
  kVerbFreqClass,
  kVerbOn,
  kAdjLength,
  kAdjFreqClass,
  kAdjOn,
  kClosed1Length,
  kClosed1FreqClass,
  kClosed2Length,
  kClosed2FreqClass,
  kClosed3Length,
  kClosed3FreqClass,
  kFeatureCount,
};

using FeatureVector = std::array<double, kFeatureCount>;

std::string_view FeatureName(size_t feature);
std::optional<size_t> ParseFeature(std::string_view name);

// Every feature except the two manipulated CA values.
std::span<const size_t> ControlFeatures();

struct SlotIndices {
  size_t pronoun = 0;
  size_t verb = 1;
  size_t article = 2;
  size_t adjective = 3;
  size_t noun = 4;
  std::array<size_t, 3> closed = {5, 6, 7};
};

// A user-authored sentence frame before annotation.
struct RawItem {
  std::string item_id;
  std::string sentence;
  SlotIndices slots;
};

struct StimulusItem {
  std::string item_id;
  std::string sentence;
  SlotIndices slots;
  std::string verb;
  std::string adjective;
  std::string noun;
  std::array<std::string, 3> closed;
  bool comma_after_target = false;
  FeatureVector features{};
  std::optional<Condition> condition;
};

struct FrameRules {
  // Slots must be 0..4 with the closed-class words the first three word
  // tokens after the noun.
  bool enforce_prefix = true;
  bool check_length = false;
  size_t min_chars = 69;
  size_t max_chars = 72;
  size_t min_words = 9;
  size_t max_words = 14;
  // Applied to slot tokens before vocabulary lookup.
  bool strip_punctuation = true;
  bool case_fold = false;
};

struct AnnotationEngines {
  const PairStats *stats = nullptr;
  const AssociateStore *store = nullptr;
  const Lexicon *lexicon = nullptr;
  AssociationConfig association;
};

// Throws kAnnotation naming the offending slot or rule.
StimulusItem Annotate(const RawItem &raw, const AnnotationEngines &engines,
                      const FrameRules &rules = {});

// Normalized verb, adjective and noun tokens of a frame; empty for slots
// out of range.
std::array<std::string, 3> PrimeTargetWords(const RawItem &raw,
                                            const FrameRules &rules = {});

struct AnnotationOutcome {
  std::optional<StimulusItem> item;
  std::string error;  // set when annotation failed
};

// Annotates items concurrently; results keep input order.
std::vector<AnnotationOutcome> AnnotateAll(std::span<const RawItem> raws,
                                           const AnnotationEngines &engines,
                                           const FrameRules &rules = {},
                                           unsigned threads = 1);

struct AssignmentRules {
  BandThresholds bands;
  bool require_unassociated_primes = true;
  // Largest verb-adjective AS still accepted when the rule above is on.
  double prime_as_tolerance = 0.0;
};

struct Assignment {
  std::optional<Condition> condition;
  std::string rejection;  // empty when assigned
};

Assignment AssignCondition(const StimulusItem &item,
                           const AssignmentRules &rules = {});

// One-way between-groups F = MS_between / MS_within. Needs >= 2 groups of
// >= 2 values unless all values are identical (F = 0). Zero within-group
// variance with distinct group means gives +infinity.
double AnovaF(std::span<const std::vector<double>> groups);

struct StimulusSet {
  std::array<std::vector<StimulusItem>, 4> cells;

  const std::vector<StimulusItem> &cell(Condition c) const {
    return cells[static_cast<size_t>(c)];
  }
};

struct VariableBalance {
  size_t feature = 0;
  std::array<double, 4> mean{};
  std::array<double, 4> sd{};
  double f = 0;
};

struct BalanceReport {
  std::vector<VariableBalance> rows;  // all features, enum order
  bool pass = false;
  std::vector<size_t> offending;      // controls with F >= limit
  double max_control_f = 0;
};

BalanceReport Balance(const StimulusSet &set, double f_limit = 1.0);

struct SelectionConfig {
  size_t n_per_cell = 40;
  size_t max_iters = 20000;
  size_t restarts = 8;
  uint64_t seed = 1;
  bool balance_commas = false;
  double f_limit = 1.0;
  unsigned threads = 1;
};

struct Selection {
  StimulusSet set;
  BalanceReport report;
  uint64_t seed_used = 0;
};

// Stratified random start followed by swap hill-climbing on the largest
// control F, restarted with seeds seed, seed+1, ...; the best restart
// (lowest max F, ties to the lowest seed) is returned. Items without a
// condition are ignored. Throws kInfeasible when a cell has too few
// candidates.
Selection SelectSet(std::span<const StimulusItem> pool,
                    const SelectionConfig &config = {});

struct ListEntry {
  std::string item_id;
  std::optional<Condition> condition;  // nullopt for fillers
  int block = 1;
};

struct PresentationList {
  std::vector<ListEntry> entries;
};

struct ListRules {
  size_t max_run = 2;
  size_t retries = 1000;
};

// Two independently shuffled lists over the set plus fillers. No more than
// `max_run` consecutive items share a condition (fillers are exempt and
// break runs); each list is split into two blocks whose per-category counts
// differ by at most one. Throws kInfeasible when no arrangement is found.
std::array<PresentationList, 2> RandomizeLists(
    const StimulusSet &set, std::span<const std::string> filler_ids,
    uint64_t seed, const ListRules &rules = {});

// TSV: item_id, sentence, pronoun, verb, article, adjective, noun,
// closed1, closed2, closed3 (0-based token indices). '#' lines skipped.
std::vector<RawItem> ReadRawItems(std::istream &in);

// Header row, then item_id, condition, comma_after_target, features...,
// verb, adjective, noun, closed1..3, sentence. The reader maps columns by
// header name; word columns are optional.
void WriteItemsTsv(std::ostream &out, std::span<const StimulusItem> items);
std::vector<StimulusItem> ReadItemsTsv(std::istream &in);
void WriteSetTsv(std::ostream &out, const StimulusSet &set);

// variable, HH_mean, HH_sd, ..., LL_sd, F; trailing "#pass=..." line.
void WriteBalanceTsv(std::ostream &out, const BalanceReport &report);

// "#block=<b>" marker before each block, then position, block, item_id,
// condition ("FILLER" for fillers).
void WriteListTsv(std::ostream &out, const PresentationList &list);

}  // namespace coocsem

#endif  // COOCSEM_STIMGEN_H_
