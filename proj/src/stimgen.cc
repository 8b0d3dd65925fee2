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

#include "coocsem/stimgen.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "coocsem/error.h"
#include "coocsem/parallel.h"
#include "coocsem/random.h"
#include "coocsem/text.h"

namespace coocsem {
namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "ca_verb_noun",        "ca_adj_noun",         "as_verb_noun",
    "as_adj_noun",         "as_verb_adj",         "ca_verb_adj",
    "noun_length",         "noun_freq_class",     "noun_on",
    "verb_length",         "verb_freq_class",     "verb_on",
    "adj_length",          "adj_freq_class",      "adj_on",
    "closed1_length",      "closed1_freq_class",  "closed2_length",
    "closed2_freq_class",  "closed3_length",      "closed3_freq_class",
};

constexpr std::array<size_t, kFeatureCount - 2> kControls = {
    kAsVerbNoun,    kAsAdjNoun,     kAsVerbAdj,        kCaVerbAdj,
    kNounLength,    kNounFreqClass, kNounOn,           kVerbLength,
    kVerbFreqClass, kVerbOn,        kAdjLength,        kAdjFreqClass,
    kAdjOn,         kClosed1Length, kClosed1FreqClass, kClosed2Length,
    kClosed2FreqClass, kClosed3Length, kClosed3FreqClass,
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// F from per-group sums; groups may have a single member.
double FromSumsOfSquares(double ssb, double ssw, double df_b, double df_w) {
  if (ssb <= 0.0) return 0.0;
  if (ssw <= 0.0 || df_w <= 0.0) return kInf;
  return (ssb / df_b) / (ssw / df_w);
}

double LenientF(std::span<const std::vector<double>> groups) {
  size_t total = 0;
  double sum = 0;
  for (const auto &g : groups) {
    total += g.size();
    for (double x : g) sum += x;
  }
  const double grand = sum / static_cast<double>(total);
  double ssb = 0, ssw = 0;
  for (const auto &g : groups) {
    const double mean =
        std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double x : g) ssw += (x - mean) * (x - mean);
  }
  return FromSumsOfSquares(ssb, ssw, static_cast<double>(groups.size() - 1),
                           static_cast<double>(total - groups.size()));
}

std::string NormalizeSlot(std::string_view token, const FrameRules &rules) {
  std::string w = rules.strip_punctuation ? text::StripPunctuation(token)
                                          : std::string(token);
  if (rules.case_fold) w = text::FoldCase(w);
  return w;
}

bool IsWordToken(std::string_view token) {
  return !text::StripPunctuation(token).empty();
}

// True when the ASCII punctuation run ending the token holds a comma.
bool TrailingComma(std::string_view token) {
  for (size_t i = token.size(); i > 0; --i) {
    const unsigned char ch = static_cast<unsigned char>(token[i - 1]);
    if (ch >= 0x80 || !std::ispunct(ch)) return false;
    if (ch == ',') return true;
  }
  return false;
}

[[noreturn]] void AnnotationError(const std::string &item, const std::string &what) {
  throw Error(ErrorCode::kAnnotation, "item " + item + ": " + what);
}

// Running per-cell sums for the swap search.
struct CellSums {
  FeatureVector sum{};
  FeatureVector sumsq{};
};

struct SearchState {
  std::array<std::vector<size_t>, 4> selected;
  double objective = kInf;
  uint64_t seed = 0;
};

class SwapSearch {
 public:
  SwapSearch(std::span<const StimulusItem> pool,
             const std::array<std::vector<size_t>, 4> &candidates,
             const SelectionConfig &config)
      : pool_(pool), candidates_(candidates), config_(config) {}

  SearchState Run(uint64_t seed) const {
    Rng rng(seed);
    const size_t n = config_.n_per_cell;
    // Per cell, the unselected candidates of each comma class.
    std::array<std::vector<size_t>, 4> selected;
    std::array<std::array<std::vector<size_t>, 2>, 4> spare;
    for (size_t c = 0; c < 4; ++c) {
      std::array<std::vector<size_t>, 2> by_class;
      for (size_t idx : candidates_[c]) {
        const size_t cls = config_.balance_commas && pool_[idx].comma_after_target;
        by_class[cls].push_back(idx);
      }
      for (auto &v : by_class) rng.Shuffle(v.begin(), v.end());
      const size_t take0 = config_.balance_commas ? n / 2 : n;
      const size_t take1 = config_.balance_commas ? n / 2 : 0;
      selected[c].assign(by_class[0].begin(), by_class[0].begin() + take0);
      selected[c].insert(selected[c].end(), by_class[1].begin(),
                         by_class[1].begin() + take1);
      spare[c][0].assign(by_class[0].begin() + take0, by_class[0].end());
      spare[c][1].assign(by_class[1].begin() + take1, by_class[1].end());
    }

    std::array<CellSums, 4> sums{};
    for (size_t c = 0; c < 4; ++c) {
      for (size_t idx : selected[c]) Add(sums[c], pool_[idx].features, 1.0);
    }
    double objective = Objective(sums);
    const double target = config_.f_limit - 1e-9;

    for (size_t it = 0; it < config_.max_iters && objective >= target; ++it) {
      const size_t c = rng.Below(4);
      const size_t slot = rng.Below(n);
      const size_t out_idx = selected[c][slot];
      const size_t cls = config_.balance_commas && pool_[out_idx].comma_after_target;
      auto &reserve = spare[c][cls];
      if (reserve.empty()) continue;
      const size_t pick = rng.Below(reserve.size());
      const size_t in_idx = reserve[pick];

      CellSums saved = sums[c];
      Add(sums[c], pool_[out_idx].features, -1.0);
      Add(sums[c], pool_[in_idx].features, 1.0);
      const double candidate = Objective(sums);
      if (candidate <= objective) {
        objective = candidate;
        selected[c][slot] = in_idx;
        reserve[pick] = out_idx;
      } else {
        sums[c] = saved;
      }
    }
    SearchState state;
    state.selected = std::move(selected);
    state.objective = objective;
    state.seed = seed;
    return state;
  }

 private:
  static void Add(CellSums &s, const FeatureVector &x, double sign) {
    for (size_t f = 0; f < kFeatureCount; ++f) {
      s.sum[f] += sign * x[f];
      s.sumsq[f] += sign * x[f] * x[f];
    }
  }

  double Objective(const std::array<CellSums, 4> &sums) const {
    const double n = static_cast<double>(config_.n_per_cell);
    double worst = 0;
    for (size_t f : kControls) {
      double total = 0, total_sq = 0;
      for (const auto &s : sums) {
        total += s.sum[f];
        total_sq += s.sumsq[f];
      }
      const double grand = total / (4 * n);
      double ssb = 0, ssw = 0;
      for (const auto &s : sums) {
        const double mean = s.sum[f] / n;
        ssb += n * (mean - grand) * (mean - grand);
        ssw += s.sumsq[f] - s.sum[f] * mean;
      }
      // Cancellation noise relative to the raw second moment.
      const double noise = 1e-10 * std::max(1.0, total_sq);
      if (ssw < noise) ssw = 0;
      if (ssb < noise) ssb = 0;
      worst = std::max(worst, FromSumsOfSquares(ssb, ssw, 3.0, 4 * n - 4));
    }
    return worst;
  }

  std::span<const StimulusItem> pool_;
  const std::array<std::vector<size_t>, 4> &candidates_;
  const SelectionConfig &config_;
};

// Weighted random category sequence for one block, continuing the run
// state carried over from the previous block.
bool FillBlock(std::array<size_t, 5> counts, size_t max_run, Rng &rng,
               int &last, size_t &run, std::vector<int> &out) {
  size_t remaining = 0;
  for (size_t c : counts) remaining += c;
  while (remaining > 0) {
    std::array<size_t, 5> weight{};
    size_t total = 0;
    for (int k = 0; k < 5; ++k) {
      const bool blocked = k < 4 && k == last && run >= max_run;
      weight[k] = blocked ? 0 : counts[k];
      total += weight[k];
    }
    if (total == 0) return false;
    uint64_t r = rng.Below(total);
    int chosen = 0;
    while (r >= weight[chosen]) r -= weight[chosen++];
    out.push_back(chosen);
    --counts[chosen];
    --remaining;
    run = chosen == last ? run + 1 : 1;
    last = chosen;
  }
  return true;
}

}  // namespace

std::string_view ConditionName(Condition c) {
  switch (c) {
    case Condition::kHH: return "HH";
    case Condition::kHL: return "HL";
    case Condition::kLH: return "LH";
    case Condition::kLL: return "LL";
  }
  return "HH";
}

std::optional<Condition> ParseCondition(std::string_view s) {
  for (Condition c : kConditions) {
    if (ConditionName(c) == s) return c;
  }
  return std::nullopt;
}

bool VerbHigh(Condition c) { return c == Condition::kHH || c == Condition::kHL; }
bool AdjectiveHigh(Condition c) {
  return c == Condition::kHH || c == Condition::kLH;
}

std::string_view FeatureName(size_t feature) { return kFeatureNames.at(feature); }

std::optional<size_t> ParseFeature(std::string_view name) {
  for (size_t f = 0; f < kFeatureCount; ++f) {
    if (kFeatureNames[f] == name) return f;
  }
  return std::nullopt;
}

std::span<const size_t> ControlFeatures() { return kControls; }

StimulusItem Annotate(const RawItem &raw, const AnnotationEngines &engines,
                      const FrameRules &rules) {
  if (!engines.stats || !engines.store || !engines.lexicon) {
    throw Error(ErrorCode::kInvalidInput, "annotation engines not configured");
  }
  const auto &index = engines.stats->index();
  const auto tokens = text::SplitWhitespace(raw.sentence);
  const auto &s = raw.slots;

  auto check_slot = [&](const char *name, size_t at) {
    if (at >= tokens.size()) {
      AnnotationError(raw.item_id, std::string("slot ") + name + " index " +
                                       std::to_string(at) + " out of range");
    }
  };
  check_slot("pronoun", s.pronoun);
  check_slot("verb", s.verb);
  check_slot("article", s.article);
  check_slot("adjective", s.adjective);
  check_slot("noun", s.noun);
  for (size_t k = 0; k < 3; ++k) {
    check_slot(("closed" + std::to_string(k + 1)).c_str(), s.closed[k]);
  }

  if (rules.enforce_prefix) {
    if (s.pronoun != 0 || s.verb != 1 || s.article != 2 || s.adjective != 3 ||
        s.noun != 4) {
      AnnotationError(raw.item_id,
                      "frame must start pronoun-verb-article-adjective-noun");
    }
    size_t at = s.noun + 1;
    for (size_t k = 0; k < 3; ++k) {
      while (at < tokens.size() && !IsWordToken(tokens[at])) ++at;
      if (at != s.closed[k]) {
        AnnotationError(raw.item_id, "slot closed" + std::to_string(k + 1) +
                                         " is not the next word after the noun");
      }
      ++at;
    }
  }

  if (rules.check_length) {
    const size_t chars = text::CharLength(raw.sentence);
    const size_t words = static_cast<size_t>(
        std::count_if(tokens.begin(), tokens.end(),
                      [](const std::string &t) { return IsWordToken(t); }));
    if (chars < rules.min_chars || chars > rules.max_chars) {
      AnnotationError(raw.item_id, "sentence length " + std::to_string(chars) +
                                       " characters outside allowed range");
    }
    if (words < rules.min_words || words > rules.max_words) {
      AnnotationError(raw.item_id, "sentence has " + std::to_string(words) +
                                       " words, outside allowed range");
    }
  }

  StimulusItem item;
  item.item_id = raw.item_id;
  item.sentence = raw.sentence;
  item.slots = s;

  auto resolve = [&](const char *name, size_t at) {
    std::string w = NormalizeSlot(tokens[at], rules);
    if (w.empty() || !index.Find(w)) {
      AnnotationError(raw.item_id, std::string("slot ") + name + ": '" + w +
                                       "' not in vocabulary");
    }
    return w;
  };
  item.verb = resolve("verb", s.verb);
  item.adjective = resolve("adjective", s.adjective);
  item.noun = resolve("noun", s.noun);
  for (size_t k = 0; k < 3; ++k) {
    item.closed[k] = resolve(("closed" + std::to_string(k + 1)).c_str(), s.closed[k]);
  }

  const std::string &noun_tok = tokens[s.noun];
  item.comma_after_target =
      TrailingComma(noun_tok) ||
      (s.noun + 1 < tokens.size() && !IsWordToken(tokens[s.noun + 1]) &&
       tokens[s.noun + 1].find(',') != std::string::npos);

  auto ca = [&](const char *name, const std::string &a, const std::string &b) {
    try {
      return static_cast<double>(CommonAssociates(a, b, *engines.store).ca_count);
    } catch (const Error &e) {
      AnnotationError(raw.item_id, std::string(name) + ": " + e.what());
    }
  };
  auto as = [&](const std::string &a, const std::string &b) {
    return AssociationStrength(index.Id(a), index.Id(b), *engines.stats,
                               engines.association);
  };
  auto &f = item.features;
  f[kCaVerbNoun] = ca("verb-noun CA", item.verb, item.noun);
  f[kCaAdjNoun] = ca("adjective-noun CA", item.adjective, item.noun);
  f[kCaVerbAdj] = ca("verb-adjective CA", item.verb, item.adjective);
  f[kAsVerbNoun] = as(item.verb, item.noun);
  f[kAsAdjNoun] = as(item.adjective, item.noun);
  f[kAsVerbAdj] = as(item.verb, item.adjective);

  auto profile = [&](const std::string &w, size_t len_f, size_t class_f,
                     std::optional<size_t> on_f) {
    const auto p = Profile(w, index, *engines.lexicon);
    f[len_f] = static_cast<double>(p.length);
    f[class_f] = p.freq_class;
    if (on_f) f[*on_f] = static_cast<double>(p.on_count);
  };
  profile(item.noun, kNounLength, kNounFreqClass, kNounOn);
  profile(item.verb, kVerbLength, kVerbFreqClass, kVerbOn);
  profile(item.adjective, kAdjLength, kAdjFreqClass, kAdjOn);
  profile(item.closed[0], kClosed1Length, kClosed1FreqClass, std::nullopt);
  profile(item.closed[1], kClosed2Length, kClosed2FreqClass, std::nullopt);
  profile(item.closed[2], kClosed3Length, kClosed3FreqClass, std::nullopt);
  return item;
}

std::array<std::string, 3> PrimeTargetWords(const RawItem &raw,
                                            const FrameRules &rules) {
  const auto tokens = text::SplitWhitespace(raw.sentence);
  std::array<std::string, 3> out;
  const std::array<size_t, 3> at = {raw.slots.verb, raw.slots.adjective,
                                    raw.slots.noun};
  for (size_t k = 0; k < 3; ++k) {
    if (at[k] < tokens.size()) out[k] = NormalizeSlot(tokens[at[k]], rules);
  }
  return out;
}

std::vector<AnnotationOutcome> AnnotateAll(std::span<const RawItem> raws,
                                           const AnnotationEngines &engines,
                                           const FrameRules &rules,
                                           unsigned threads) {
  std::vector<AnnotationOutcome> out(raws.size());
  ParallelSlices(raws.size(), threads, [&](unsigned, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      try {
        out[i].item = Annotate(raws[i], engines, rules);
      } catch (const Error &e) {
        out[i].error = e.what();
      }
    }
  });
  return out;
}

Assignment AssignCondition(const StimulusItem &item, const AssignmentRules &rules) {
  Assignment a;
  const auto verb = rules.bands.Classify(
      static_cast<size_t>(item.features[kCaVerbNoun]));
  const auto adj = rules.bands.Classify(
      static_cast<size_t>(item.features[kCaAdjNoun]));
  if (verb == OverlapBand::kMid || adj == OverlapBand::kMid) {
    a.rejection = "mid_band_ca";
    return a;
  }
  if (rules.require_unassociated_primes &&
      item.features[kAsVerbAdj] > rules.prime_as_tolerance) {
    a.rejection = "associated_primes";
    return a;
  }
  const bool vh = verb == OverlapBand::kHigh;
  const bool ah = adj == OverlapBand::kHigh;
  a.condition = vh ? (ah ? Condition::kHH : Condition::kHL)
                   : (ah ? Condition::kLH : Condition::kLL);
  return a;
}

double AnovaF(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "ANOVA needs at least two groups");
  }
  bool identical = true;
  std::optional<double> first;
  for (const auto &g : groups) {
    if (g.empty()) throw Error(ErrorCode::kInvalidInput, "empty ANOVA group");
    for (double x : g) {
      if (!first) first = x;
      identical = identical && x == *first;
    }
  }
  if (identical) return 0.0;
  for (const auto &g : groups) {
    if (g.size() < 2) {
      throw Error(ErrorCode::kInvalidInput,
                  "ANOVA needs at least two values per group");
    }
  }
  return LenientF(groups);
}

BalanceReport Balance(const StimulusSet &set, double f_limit) {
  BalanceReport report;
  const auto controls = ControlFeatures();
  report.pass = true;
  for (size_t f = 0; f < kFeatureCount; ++f) {
    VariableBalance row;
    row.feature = f;
    std::vector<std::vector<double>> groups(4);
    bool any_empty = false;
    for (size_t c = 0; c < 4; ++c) {
      for (const auto &item : set.cells[c]) groups[c].push_back(item.features[f]);
      const auto &g = groups[c];
      if (g.empty()) {
        any_empty = true;
        continue;
      }
      const double mean =
          std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
      double ss = 0;
      for (double x : g) ss += (x - mean) * (x - mean);
      row.mean[c] = mean;
      row.sd[c] = g.size() > 1 ? std::sqrt(ss / static_cast<double>(g.size() - 1)) : 0.0;
    }
    row.f = any_empty ? std::numeric_limits<double>::quiet_NaN() : LenientF(groups);
    const bool is_control =
        std::find(controls.begin(), controls.end(), f) != controls.end();
    if (is_control) {
      if (!(row.f < f_limit)) {
        report.pass = false;
        report.offending.push_back(f);
      }
      if (!std::isnan(row.f)) {
        report.max_control_f = std::max(report.max_control_f, row.f);
      } else {
        report.max_control_f = kInf;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

Selection SelectSet(std::span<const StimulusItem> pool,
                    const SelectionConfig &config) {
  const size_t n = config.n_per_cell;
  if (n == 0) throw Error(ErrorCode::kConfig, "n_per_cell must be positive");
  if (config.balance_commas && n % 2 != 0) {
    throw Error(ErrorCode::kConfig, "comma balancing needs an even n_per_cell");
  }
  std::array<std::vector<size_t>, 4> candidates;
  for (size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].condition) {
      candidates[static_cast<size_t>(*pool[i].condition)].push_back(i);
    }
  }
  for (size_t c = 0; c < 4; ++c) {
    const auto name = std::string(ConditionName(kConditions[c]));
    size_t commas = 0;
    for (size_t idx : candidates[c]) commas += pool[idx].comma_after_target;
    const size_t plain = candidates[c].size() - commas;
    const bool short_pool =
        config.balance_commas ? (commas < n / 2 || plain < n / 2)
                              : candidates[c].size() < n;
    if (short_pool) {
      throw Error(ErrorCode::kInfeasible,
                  "cell " + name + " has " + std::to_string(candidates[c].size()) +
                      " candidates, fewer than required for " +
                      std::to_string(n) + " items");
    }
  }

  const size_t restarts = std::max<size_t>(1, config.restarts);
  std::vector<SearchState> results(restarts);
  const SwapSearch search(pool, candidates, config);
  ParallelSlices(restarts, config.threads,
                 [&](unsigned, size_t begin, size_t end) {
                   for (size_t r = begin; r < end; ++r) {
                     results[r] = search.Run(config.seed + r);
                   }
                 });
  const SearchState *best = &results[0];
  for (const auto &r : results) {
    if (r.objective < best->objective) best = &r;
  }

  Selection out;
  out.seed_used = best->seed;
  for (size_t c = 0; c < 4; ++c) {
    auto idx = best->selected[c];
    std::sort(idx.begin(), idx.end());
    for (size_t i : idx) out.set.cells[c].push_back(pool[i]);
  }
  out.report = Balance(out.set, config.f_limit);
  return out;
}

std::array<PresentationList, 2> RandomizeLists(
    const StimulusSet &set, std::span<const std::string> filler_ids,
    uint64_t seed, const ListRules &rules) {
  // Categories 0..3 are conditions, 4 is filler.
  std::array<std::vector<std::string>, 5> ids;
  for (size_t c = 0; c < 4; ++c) {
    for (const auto &item : set.cells[c]) ids[c].push_back(item.item_id);
  }
  ids[4].assign(filler_ids.begin(), filler_ids.end());

  size_t total = 0;
  for (const auto &v : ids) total += v.size();
  for (size_t c = 0; c < 4; ++c) {
    const size_t others = total - ids[c].size();
    if (ids[c].size() > rules.max_run * (others + 1)) {
      throw Error(ErrorCode::kInfeasible,
                  "run-length constraint unsatisfiable: " +
                      std::to_string(ids[c].size()) + " items of " +
                      std::string(ConditionName(kConditions[c])) + " with only " +
                      std::to_string(others) + " separators");
    }
  }

  Rng rng(seed);
  std::array<PresentationList, 2> lists;
  for (auto &list : lists) {
    bool done = false;
    for (size_t attempt = 0; attempt < std::max<size_t>(1, rules.retries) && !done;
         ++attempt) {
      std::array<std::vector<std::string>, 5> order = ids;
      for (auto &v : order) rng.Shuffle(v.begin(), v.end());

      std::array<size_t, 5> first{}, second{};
      std::vector<size_t> odd;
      for (size_t k = 0; k < 5; ++k) {
        first[k] = second[k] = order[k].size() / 2;
        if (order[k].size() % 2) odd.push_back(k);
      }
      rng.Shuffle(odd.begin(), odd.end());
      const bool first_gets_extra = rng.Below(2) == 0;
      for (size_t i = 0; i < odd.size(); ++i) {
        ((i % 2 == 0) == first_gets_extra ? first : second)[odd[i]] += 1;
      }

      std::vector<int> seq;
      int last = -1;
      size_t run = 0;
      if (!FillBlock(first, rules.max_run, rng, last, run, seq)) continue;
      const size_t boundary = seq.size();
      if (!FillBlock(second, rules.max_run, rng, last, run, seq)) continue;

      std::array<size_t, 5> next{};
      list.entries.clear();
      for (size_t pos = 0; pos < seq.size(); ++pos) {
        const int k = seq[pos];
        ListEntry e;
        e.item_id = order[k][next[k]++];
        if (k < 4) e.condition = kConditions[k];
        e.block = pos < boundary ? 1 : 2;
        list.entries.push_back(std::move(e));
      }
      done = true;
    }
    if (!done) {
      throw Error(ErrorCode::kInfeasible,
                  "no list arrangement with at most " + std::to_string(rules.max_run) +
                      " consecutive same-condition items after " +
                      std::to_string(rules.retries) + " attempts");
    }
  }
  return lists;
}

std::vector<RawItem> ReadRawItems(std::istream &in) {
  std::vector<RawItem> items;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = text::SplitTabs(line);
    auto fail = [&](const std::string &why) {
      throw Error(ErrorCode::kInvalidInput,
                  "candidate line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 10) fail("expected 10 tab-separated fields");
    std::array<size_t, 8> idx{};
    for (size_t k = 0; k < 8; ++k) {
      auto v = text::ParseInt(fields[2 + k]);
      if (!v || *v < 0) fail("slot index is not a non-negative integer");
      idx[k] = static_cast<size_t>(*v);
    }
    RawItem r;
    r.item_id = std::string(fields[0]);
    r.sentence = std::string(fields[1]);
    r.slots.pronoun = idx[0];
    r.slots.verb = idx[1];
    r.slots.article = idx[2];
    r.slots.adjective = idx[3];
    r.slots.noun = idx[4];
    r.slots.closed = {idx[5], idx[6], idx[7]};
    items.push_back(std::move(r));
  }
  return items;
}

void WriteItemsTsv(std::ostream &out, std::span<const StimulusItem> items) {
  out << "item_id\tcondition\tcomma_after_target";
  for (auto name : kFeatureNames) out << '\t' << name;
  out << "\tverb\tadjective\tnoun\tclosed1\tclosed2\tclosed3\tsentence\n";
  for (const auto &item : items) {
    out << item.item_id << '\t'
        << (item.condition ? ConditionName(*item.condition) : "NA") << '\t'
        << (item.comma_after_target ? 1 : 0);
    for (double v : item.features) out << '\t' << text::FormatDouble(v);
    out << '\t' << item.verb << '\t' << item.adjective << '\t' << item.noun;
    for (const auto &w : item.closed) out << '\t' << w;
    out << '\t' << item.sentence << '\n';
  }
}

std::vector<StimulusItem> ReadItemsTsv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = text::SplitTabs(line);
  std::vector<std::optional<size_t>> feature_col(header.size());
  std::optional<size_t> id_col, cond_col, comma_col, sentence_col;
  std::map<size_t, std::string StimulusItem::*> word_cols;
  std::map<size_t, size_t> closed_cols;
  std::array<bool, kFeatureCount> seen{};
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "item_id") id_col = i;
    else if (header[i] == "condition") cond_col = i;
    else if (header[i] == "comma_after_target") comma_col = i;
    else if (header[i] == "sentence") sentence_col = i;
    else if (header[i] == "verb") word_cols[i] = &StimulusItem::verb;
    else if (header[i] == "adjective") word_cols[i] = &StimulusItem::adjective;
    else if (header[i] == "noun") word_cols[i] = &StimulusItem::noun;
    else if (header[i] == "closed1") closed_cols[i] = 0;
    else if (header[i] == "closed2") closed_cols[i] = 1;
    else if (header[i] == "closed3") closed_cols[i] = 2;
    else if (auto f = ParseFeature(header[i])) {
      feature_col[i] = f;
      seen[*f] = true;
    }
  }
  if (!id_col || !cond_col) {
    throw Error(ErrorCode::kInvalidInput, "item table lacks item_id/condition");
  }
  std::vector<StimulusItem> items;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = text::SplitTabs(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kInvalidInput,
                  "item table line " + std::to_string(line_no) + ": column count");
    }
    StimulusItem item;
    item.item_id = std::string(fields[*id_col]);
    item.condition = ParseCondition(fields[*cond_col]);
    if (comma_col) item.comma_after_target = fields[*comma_col] == "1";
    if (sentence_col) item.sentence = std::string(fields[*sentence_col]);
    for (const auto &[col, member] : word_cols) item.*member = std::string(fields[col]);
    for (const auto &[col, k] : closed_cols) item.closed[k] = std::string(fields[col]);
    for (size_t i = 0; i < fields.size(); ++i) {
      if (!feature_col[i]) continue;
      auto v = text::ParseDouble(fields[i]);
      if (!v) {
        throw Error(ErrorCode::kInvalidInput,
                    "item table line " + std::to_string(line_no) +
                        ": bad value for " + std::string(header[i]));
      }
      item.features[*feature_col[i]] = *v;
    }
    items.push_back(std::move(item));
  }
  return items;
}

void WriteSetTsv(std::ostream &out, const StimulusSet &set) {
  std::vector<StimulusItem> all;
  for (const auto &cell : set.cells) all.insert(all.end(), cell.begin(), cell.end());
  WriteItemsTsv(out, all);
}

void WriteBalanceTsv(std::ostream &out, const BalanceReport &report) {
  out << "variable";
  for (Condition c : kConditions) {
    out << '\t' << ConditionName(c) << "_mean\t" << ConditionName(c) << "_sd";
  }
  out << "\tF\n";
  for (const auto &row : report.rows) {
    out << FeatureName(row.feature);
    for (size_t c = 0; c < 4; ++c) {
      out << '\t' << text::FormatDouble(row.mean[c]) << '\t'
          << text::FormatDouble(row.sd[c]);
    }
    out << '\t' << text::FormatDouble(row.f) << '\n';
  }
  out << "#pass=" << (report.pass ? "true" : "false");
  if (!report.offending.empty()) {
    out << "\toffending=";
    for (size_t i = 0; i < report.offending.size(); ++i) {
      out << (i ? "," : "") << FeatureName(report.offending[i]);
    }
  }
  out << '\n';
}

void WriteListTsv(std::ostream &out, const PresentationList &list) {
  int block = 0;
  size_t position = 1;
  for (const auto &e : list.entries) {
    if (e.block != block) {
      block = e.block;
      out << "#block=" << block << '\n';
    }
    out << position++ << '\t' << e.block << '\t' << e.item_id << '\t'
        << (e.condition ? ConditionName(*e.condition) : "FILLER") << '\n';
  }
}

}  // namespace coocsem
