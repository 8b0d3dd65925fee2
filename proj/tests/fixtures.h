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

#ifndef COOCSEM_TESTS_FIXTURES_H_
#define COOCSEM_TESTS_FIXTURES_H_

// Synthetic corpora and naive reference counts shared by the test binaries.
// Nothing here calls into the library's counting code.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coocsem/random.h"

namespace coocsem::testing {

inline std::string ZipfWord(size_t rank) { return "w" + std::to_string(rank); }

// `n_sentences` lines of 3..12 words drawn from a Zipf(1) law over `vocab`
// ranked words.
inline std::vector<std::string> ZipfCorpus(size_t n_sentences, size_t vocab,
                                           uint64_t seed) {
  std::vector<double> cdf(vocab);
  double acc = 0;
  for (size_t r = 0; r < vocab; ++r) {
    acc += 1.0 / static_cast<double>(r + 1);
    cdf[r] = acc;
  }
  for (auto &c : cdf) c /= acc;
  Rng rng(seed);
  std::vector<std::string> lines;
  lines.reserve(n_sentences);
  for (size_t s = 0; s < n_sentences; ++s) {
    const size_t len = 3 + rng.Below(10);
    std::string line;
    for (size_t i = 0; i < len; ++i) {
      const double u = rng.Uniform();
      const size_t r = static_cast<size_t>(
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (i) line += ' ';
      line += ZipfWord(std::min(r, vocab - 1));
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::string Join(const std::vector<std::string> &lines) {
  std::string out;
  for (const auto &l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

inline std::vector<std::string> SplitSpaces(const std::string &line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct NaiveCounts {
  size_t n_sentences = 0;
  std::map<std::string, size_t> sentence_freq;
  std::map<std::string, size_t> token_freq;
  // Ordered pair (a < b lexicographically) -> sentences containing both.
  std::map<std::pair<std::string, std::string>, size_t> pairs;
};

// Nested-loop recount. Pairs are restricted to words with sentence
// frequency >= min_pair_freq.
inline NaiveCounts NaiveRecount(const std::vector<std::string> &lines,
                                size_t min_pair_freq = 2) {
  NaiveCounts c;
  std::vector<std::vector<std::string>> sentences;
  for (const auto &l : lines) {
    auto toks = SplitSpaces(l);
    if (toks.empty()) continue;
    ++c.n_sentences;
    for (const auto &t : toks) ++c.token_freq[t];
    std::set<std::string> distinct(toks.begin(), toks.end());
    for (const auto &t : distinct) ++c.sentence_freq[t];
    sentences.push_back(std::move(toks));
  }
  for (const auto &toks : sentences) {
    std::set<std::pair<std::string, std::string>> seen;
    for (size_t i = 0; i < toks.size(); ++i) {
      for (size_t j = 0; j < toks.size(); ++j) {
        if (toks[i] >= toks[j]) continue;
        if (c.sentence_freq[toks[i]] < min_pair_freq ||
            c.sentence_freq[toks[j]] < min_pair_freq) {
          continue;
        }
        seen.emplace(toks[i], toks[j]);
      }
    }
    for (const auto &p : seen) ++c.pairs[p];
  }
  return c;
}

// Entropy form of the log-likelihood ratio, coded independently of the
// expected-counts form: G2 = 2 (sum k ln k - sum r ln r - sum c ln c + n ln n)
// over cells k, row margins r and column margins c.
inline double EntropyFormG2(double k11, double k12, double k21, double k22) {
  auto xlx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
  const double n = k11 + k12 + k21 + k22;
  const double cells = xlx(k11) + xlx(k12) + xlx(k21) + xlx(k22);
  const double rows = xlx(k11 + k12) + xlx(k21 + k22);
  const double cols = xlx(k11 + k21) + xlx(k12 + k22);
  return 2.0 * (cells - rows - cols + xlx(n));
}

// Topic-structured corpus: each sentence draws `per_sentence` words from one
// topic (words "t<topic>_<i>") plus as many background Zipf words ("w<r>").
// Words of the same topic share many associates.
inline std::vector<std::string> TopicCorpus(size_t n_sentences, size_t topics,
                                            size_t words_per_topic,
                                            size_t background, uint64_t seed,
                                            size_t per_sentence = 4) {
  auto zipf = ZipfCorpus(n_sentences, background, seed ^ 0x9E3779B97F4A7C15ull);
  Rng rng(seed);
  std::vector<std::string> lines;
  lines.reserve(n_sentences);
  for (size_t s = 0; s < n_sentences; ++s) {
    const size_t topic = rng.Below(topics);
    std::string line = zipf[s];
    for (size_t i = 0; i < per_sentence; ++i) {
      // Skewed within-topic choice so associates get distinct strengths.
      const double u = rng.Uniform();
      const size_t w = static_cast<size_t>(u * u * static_cast<double>(words_per_topic));
      line += " t" + std::to_string(topic) + "_" + std::to_string(w);
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

// A cue "hub" whose sentences each hold six of `n_assoc` associates
// "a<i>", every associate appearing in three hub sentences; associate i
// also appears alone (with a filler) i % 5 times, spreading the AS values.
// `fillers` extra sentences of two filler words pad the corpus.
inline std::vector<std::string> HubCorpus(size_t n_assoc, size_t fillers,
                                          uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> lines;
  std::vector<size_t> slots;
  for (size_t i = 0; i < n_assoc; ++i) {
    for (int k = 0; k < 3; ++k) slots.push_back(i);
  }
  rng.Shuffle(slots.begin(), slots.end());
  for (size_t s = 0; s + 6 <= slots.size(); s += 6) {
    std::string line = "hub";
    for (size_t k = 0; k < 6; ++k) line += " a" + std::to_string(slots[s + k]);
    lines.push_back(std::move(line));
  }
  for (size_t i = 0; i < n_assoc; ++i) {
    for (size_t k = 0; k < i % 5; ++k) {
      lines.push_back("a" + std::to_string(i) + " f" +
                      std::to_string(rng.Below(2000)));
    }
  }
  for (size_t s = 0; s < fillers; ++s) {
    lines.push_back("f" + std::to_string(rng.Below(2000)) + " f" +
                    std::to_string(rng.Below(2000)));
  }
  return lines;
}

// Reference associate lists computed from a NaiveRecount with the entropy
// form of G2 and an exact integer gate on k11 * n > r1 * c1.
struct NaiveAssociates {
  const NaiveCounts *counts;
  double threshold = 3.841;
  size_t cap = 1000;
  size_t stoplist_size = 100;

  std::vector<std::string> Stoplist() const {
    std::vector<std::pair<size_t, std::string>> v;
    for (const auto &[w, f] : counts->sentence_freq) v.emplace_back(f, w);
    std::sort(v.begin(), v.end(), [](const auto &x, const auto &y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    std::vector<std::string> out;
    for (size_t i = 0; i < std::min(stoplist_size, v.size()); ++i) {
      out.push_back(v[i].second);
    }
    return out;
  }

  double As(const std::string &a, const std::string &b) const {
    const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = counts->pairs.find(key);
    const double k11 = it == counts->pairs.end() ? 0.0 : static_cast<double>(it->second);
    const double fa = static_cast<double>(counts->sentence_freq.at(a));
    const double fb = static_cast<double>(counts->sentence_freq.at(b));
    const double n = static_cast<double>(counts->n_sentences);
    const double g2 = EntropyFormG2(k11, fa - k11, fb - k11, n - fa - fb + k11);
    if (g2 < threshold || !(k11 * n > fa * fb)) return 0.0;
    return std::log10(g2);
  }

  // Full-vocabulary scan.
  std::vector<std::pair<std::string, double>> Ranked(const std::string &cue) const {
    const auto stop = Stoplist();
    const std::set<std::string> stopset(stop.begin(), stop.end());
    std::vector<std::pair<std::string, double>> v;
    for (const auto &[w, f] : counts->sentence_freq) {
      if (w == cue || stopset.count(w)) continue;
      const double as = As(cue, w);
      if (as > 0) v.emplace_back(w, as);
    }
    std::sort(v.begin(), v.end(), [](const auto &x, const auto &y) {
      return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    if (v.size() > cap) v.resize(cap);
    return v;
  }

  size_t Common(const std::string &a, const std::string &b) const {
    std::set<std::string> sa, sb;
    for (const auto &[w, as] : Ranked(a)) sa.insert(w);
    for (const auto &[w, as] : Ranked(b)) sb.insert(w);
    size_t n = 0;
    for (const auto &w : sa) n += sb.count(w);
    return n;
  }
};

}  // namespace coocsem::testing

#endif  // COOCSEM_TESTS_FIXTURES_H_
