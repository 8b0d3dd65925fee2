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

#include "coocsem/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <limits>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>

#include "coocsem/analysis.h"
#include "coocsem/error.h"
#include "coocsem/lexstats.h"
#include "coocsem/text.h"

namespace coocsem::cli {
namespace {

[[noreturn]] void ConfigError(const std::string &what) {
  throw Error(ErrorCode::kConfig, what);
}

template <typename T>
T ParseUnsigned(const std::string &key, const std::string &v) {
  unsigned long long n = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size() ||
      n > static_cast<unsigned long long>(std::numeric_limits<T>::max())) {
    ConfigError(key + " expects a non-negative integer, got '" + v + "'");
  }
  return static_cast<T>(n);
}

double ParseNumber(const std::string &key, const std::string &v) {
  const auto d = text::ParseDouble(v);
  if (!d) ConfigError(key + " expects a number, got '" + v + "'");
  return *d;
}

bool ParseBool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  ConfigError(key + " expects true or false, got '" + v + "'");
}

std::string Bool(bool b) { return b ? "true" : "false"; }

struct Entry {
  std::string key;
  std::function<std::string(const PipelineConfig &)> get;
  std::function<void(PipelineConfig &, const std::string &)> set;
};

Entry Unsigned(std::string key, auto access) {
  return {key,
          [access](const PipelineConfig &c) {
            return std::to_string(access(const_cast<PipelineConfig &>(c)));
          },
          [access, key](PipelineConfig &c, const std::string &v) {
            using V = std::remove_reference_t<decltype(access(c))>;
            access(c) = ParseUnsigned<V>(key, v);
          }};
}

Entry Number(std::string key, auto access) {
  return {key,
          [access](const PipelineConfig &c) {
            return text::FormatDouble(access(const_cast<PipelineConfig &>(c)));
          },
          [access, key](PipelineConfig &c, const std::string &v) {
            access(c) = ParseNumber(key, v);
          }};
}

Entry Flag(std::string key, auto access) {
  return {key,
          [access](const PipelineConfig &c) {
            return Bool(access(const_cast<PipelineConfig &>(c)));
          },
          [access, key](PipelineConfig &c, const std::string &v) {
            access(c) = ParseBool(key, v);
          }};
}

const std::vector<Entry> &Entries() {
  using C = PipelineConfig;
  static const std::vector<Entry> entries = {
      {"corpus", [](const C &c) { return c.corpus; },
       [](C &c, const std::string &v) { c.corpus = v; }},
      Unsigned("threads", [](C &c) -> unsigned & { return c.threads; }),
      {"tokenizer.id_column",
       [](const C &c) -> std::string {
         switch (c.ingest.tokenizer.id_column) {
           case TokenizerConfig::IdColumn::kAlways: return "always";
           case TokenizerConfig::IdColumn::kNever: return "never";
           default: return "auto";
         }
       },
       [](C &c, const std::string &v) {
         auto &id = c.ingest.tokenizer.id_column;
         if (v == "auto") id = TokenizerConfig::IdColumn::kAuto;
         else if (v == "always") id = TokenizerConfig::IdColumn::kAlways;
         else if (v == "never") id = TokenizerConfig::IdColumn::kNever;
         else ConfigError("tokenizer.id_column expects auto, always or never");
       }},
      Flag("tokenizer.case_fold",
           [](C &c) -> bool & { return c.ingest.tokenizer.case_fold; }),
      Flag("tokenizer.strip_punctuation",
           [](C &c) -> bool & { return c.ingest.tokenizer.strip_punctuation; }),
      {"frequency_basis",
       [](const C &c) -> std::string {
         return c.ingest.basis == FrequencyBasis::kToken ? "token" : "sentence";
       },
       [](C &c, const std::string &v) {
         if (v == "sentence") c.ingest.basis = FrequencyBasis::kSentence;
         else if (v == "token") c.ingest.basis = FrequencyBasis::kToken;
         else ConfigError("frequency_basis expects sentence or token");
       }},
      Unsigned("pairs.min_sentence_freq",
               [](C &c) -> uint64_t & { return c.min_pair_freq; }),
      Number("association.threshold",
             [](C &c) -> double & { return c.associates.association.threshold; }),
      Number("association.log_base",
             [](C &c) -> double & { return c.associates.association.log_base; }),
      Unsigned("associates.cap", [](C &c) -> size_t & { return c.associates.cap; }),
      Unsigned("associates.stoplist_size",
               [](C &c) -> size_t & { return c.associates.stoplist_size; }),
      Flag("associates.stoplist_before_truncation",
           [](C &c) -> bool & { return c.associates.stoplist_before_truncation; }),
      Unsigned("ca.high_above", [](C &c) -> size_t & { return c.bands.high_above; }),
      Unsigned("ca.low_below", [](C &c) -> size_t & { return c.bands.low_below; }),
      Flag("frame.enforce_prefix", [](C &c) -> bool & { return c.frame.enforce_prefix; }),
      Flag("frame.check_length", [](C &c) -> bool & { return c.frame.check_length; }),
      Unsigned("frame.min_chars", [](C &c) -> size_t & { return c.frame.min_chars; }),
      Unsigned("frame.max_chars", [](C &c) -> size_t & { return c.frame.max_chars; }),
      Unsigned("frame.min_words", [](C &c) -> size_t & { return c.frame.min_words; }),
      Unsigned("frame.max_words", [](C &c) -> size_t & { return c.frame.max_words; }),
      Flag("frame.strip_punctuation",
           [](C &c) -> bool & { return c.frame.strip_punctuation; }),
      Flag("frame.case_fold", [](C &c) -> bool & { return c.frame.case_fold; }),
      Flag("assign.require_unassociated_primes",
           [](C &c) -> bool & { return c.assignment.require_unassociated_primes; }),
      Number("assign.prime_as_tolerance",
             [](C &c) -> double & { return c.assignment.prime_as_tolerance; }),
      Unsigned("select.n_per_cell",
               [](C &c) -> size_t & { return c.selection.n_per_cell; }),
      Unsigned("select.max_iters", [](C &c) -> size_t & { return c.selection.max_iters; }),
      Unsigned("select.restarts", [](C &c) -> size_t & { return c.selection.restarts; }),
      Unsigned("select.seed", [](C &c) -> uint64_t & { return c.selection.seed; }),
      Flag("select.balance_commas",
           [](C &c) -> bool & { return c.selection.balance_commas; }),
      Number("select.f_limit", [](C &c) -> double & { return c.selection.f_limit; }),
      Unsigned("lists.seed", [](C &c) -> uint64_t & { return c.list_seed; }),
      Unsigned("lists.max_run", [](C &c) -> size_t & { return c.lists.max_run; }),
      Unsigned("lists.retries", [](C &c) -> size_t & { return c.lists.retries; }),
      {"measures.eye",
       [](const C &c) -> std::string {
         return c.measures.eye == Eye::kRight ? "right" : "left";
       },
       [](C &c, const std::string &v) {
         if (v == "right") c.measures.eye = Eye::kRight;
         else if (v == "left") c.measures.eye = Eye::kLeft;
         else ConfigError("measures.eye expects right or left");
       }},
      Number("measures.min_fixation_ms",
             [](C &c) -> double & { return c.measures.min_fixation_ms; }),
      Number("cutoff.ffd", [](C &c) -> double & { return c.measures.cutoffs.max_ms[kFfd]; }),
      Number("cutoff.sfd", [](C &c) -> double & { return c.measures.cutoffs.max_ms[kSfd]; }),
      Number("cutoff.gd", [](C &c) -> double & { return c.measures.cutoffs.max_ms[kGd]; }),
      Number("cutoff.tvd", [](C &c) -> double & { return c.measures.cutoffs.max_ms[kTvd]; }),
      Number("cutoff.gpd", [](C &c) -> double & { return c.measures.cutoffs.max_ms[kGpd]; }),
      Number("trim.k", [](C &c) -> double & { return c.measures.trim_k; }),
      Unsigned("regions.verb", [](C &c) -> int & { return c.regions.verb; }),
      Unsigned("regions.adjective", [](C &c) -> int & { return c.regions.adjective; }),
      Unsigned("regions.target", [](C &c) -> int & { return c.regions.target; }),
  };
  return entries;
}

void Validate(const PipelineConfig &c) {
  if (c.threads == 0) ConfigError("threads must be at least 1");
  if (!(c.associates.association.log_base > 0) ||
      c.associates.association.log_base == 1) {
    ConfigError("association.log_base must be positive and not 1");
  }
  if (c.bands.low_below > c.bands.high_above + 1) {
    ConfigError("ca.low_below must not exceed ca.high_above");
  }
  if (c.selection.n_per_cell == 0) ConfigError("select.n_per_cell must be positive");
  if (c.lists.max_run == 0) ConfigError("lists.max_run must be positive");
  if (!(c.measures.trim_k > 0)) ConfigError("trim.k must be positive");
}

// Input file or a kIo error.
std::ifstream OpenIn(const std::string &path, const char *what) {
  if (path.empty()) throw Error(ErrorCode::kIo, std::string("no ") + what + " given");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, std::string("cannot open ") + what + " '" + path + "'");
  return in;
}

// Writes to `fallback` for "-" or an empty path, else to a file.
class Sink {
 public:
  Sink(const std::string &path, std::ostream &fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream &operator*() { return *stream_; }
  void Close() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorCode::kIo, "write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream *stream_ = nullptr;
};

struct Engines {
  std::unique_ptr<CorpusIndex> index;
  std::unique_ptr<PairStats> stats;
};

IngestOptions IngestFor(const PipelineConfig &c) {
  IngestOptions o = c.ingest;
  o.threads = c.threads;
  return o;
}

std::unique_ptr<CorpusIndex> BuildIndex(const PipelineConfig &c) {
  auto in = OpenIn(c.corpus, "corpus");
  return std::make_unique<CorpusIndex>(Ingest(in, IngestFor(c)));
}

Engines BuildEngines(const PipelineConfig &c) {
  Engines e;
  e.index = BuildIndex(c);
  auto in = OpenIn(c.corpus, "corpus");
  PairCountOptions po;
  po.tokenizer = c.ingest.tokenizer;
  po.min_sentence_freq = c.min_pair_freq;
  po.threads = c.threads;
  e.stats = std::make_unique<PairStats>(CountPairs(in, *e.index, po));
  return e;
}

std::vector<std::string> ReadLines(const std::string &path, const char *what) {
  auto in = OpenIn(path, what);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

void CopyFile(const std::string &path, std::ostream &out) {
  auto in = OpenIn(path, "input");
  out << in.rdbuf();
}

}  // namespace

std::string Serialize(const PipelineConfig &config) {
  std::string out;
  for (const auto &e : Entries()) out += e.key + "=" + e.get(config) + "\n";
  return out;
}

void SetValue(PipelineConfig &config, const std::string &key,
              const std::string &value) {
  for (const auto &e : Entries()) {
    if (e.key == key) {
      e.set(config, value);
      return;
    }
  }
  ConfigError("unknown config key '" + key + "'");
}

void ApplyText(PipelineConfig &config, const std::string &text) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      ConfigError("config line " + std::to_string(line_no) + " lacks '='");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    SetValue(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void ApplyEnvironment(PipelineConfig &config,
                      const std::map<std::string, std::string> &env) {
  for (const auto &e : Entries()) {
    std::string name = "COOCSEM_";
    for (char ch : e.key) {
      name += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
    if (auto it = env.find(name); it != env.end()) e.set(config, it->second);
  }
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto &e : Entries()) keys.push_back(e.key);
  return keys;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return kExitMissingInput;
    case ErrorCode::kConfig: return kExitConfig;
    case ErrorCode::kInfeasible: return kExitInfeasible;
    case ErrorCode::kInvalidInput:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kNotInVocabulary:
    case ErrorCode::kDegenerateTable:
    case ErrorCode::kMissingCue:
    case ErrorCode::kAnnotation:
    case ErrorCode::kSingularDesign:
    case ErrorCode::kInsufficientData:
    case ErrorCode::kStructural:
      return kExitData;
  }
  return kExitOther;
}

int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
        const std::map<std::string, std::string> &env) {
  CLI::App app("Corpus co-occurrence statistics and stimulus pipeline", "coocsem");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<unsigned> threads;
  std::string corpus;
  bool print_config = false;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--set", overrides, "Override one setting, key=value");
  app.add_option("--threads", threads, "Worker threads");
  app.add_flag("--print-config", print_config, "Write the effective configuration to stderr");

  std::string out_path = "-";
  auto with_corpus = [&](CLI::App *sub) {
    sub->add_option("--corpus", corpus, "Sentence-per-line corpus");
    sub->add_option("--out", out_path, "Output file, '-' for stdout");
  };

  auto *index_cmd = app.add_subcommand("index", "Word frequencies and classes");
  with_corpus(index_cmd);

  auto *pairs_cmd = app.add_subcommand("pairs", "Pair counts, G2 and AS");
  with_corpus(pairs_cmd);

  std::vector<std::string> cues;
  std::string cues_file;
  auto *assoc_cmd = app.add_subcommand("associates", "Ranked associate sets");
  with_corpus(assoc_cmd);
  assoc_cmd->add_option("--cue", cues, "Cue word (repeatable)");
  assoc_cmd->add_option("--cues", cues_file, "File with one cue per line");

  std::string pairs_file;
  auto *ca_cmd = app.add_subcommand("ca", "Common associates for word pairs");
  with_corpus(ca_cmd);
  ca_cmd->add_option("--pairs", pairs_file, "Tab-separated word pairs")->required();

  std::string candidates, pool_path, out_pool, out_set, out_balance;
  auto *stim_cmd = app.add_subcommand("stimgen", "Annotate, assign and select items");
  stim_cmd->add_option("--corpus", corpus, "Sentence-per-line corpus");
  stim_cmd->add_option("--candidates", candidates, "Candidate frames TSV");
  stim_cmd->add_option("--pool", pool_path, "Annotated pool TSV (skips annotation)");
  stim_cmd->add_option("--out-pool", out_pool, "Annotated pool output");
  stim_cmd->add_option("--out-set", out_set, "Selected set output ('-' for stdout)");
  stim_cmd->add_option("--out-balance", out_balance, "Balance table output");

  std::string set_path, fillers_path, list_prefix = "list";
  auto *lists_cmd = app.add_subcommand("lists", "Two pseudorandomized lists");
  lists_cmd->add_option("--set", set_path, "Selected set TSV")->required();
  lists_cmd->add_option("--fillers", fillers_path, "File with one filler id per line");
  lists_cmd->add_option("--out-prefix", list_prefix, "Writes <prefix>1.tsv and <prefix>2.tsv");

  std::string fixations;
  auto *measures_cmd = app.add_subcommand("measures", "Reading measures per trial");
  measures_cmd->add_option("--fixations", fixations, "Fixation report TSV")->required();
  measures_cmd->add_option("--out", out_path, "Output file, '-' for stdout");

  std::string measures_path, out_summary, out_coef, out_normality;
  auto *analyze_cmd = app.add_subcommand("analyze", "Cell means and contrast fits");
  analyze_cmd->add_option("--measures", measures_path, "Measures TSV")->required();
  analyze_cmd->add_option("--out-summary", out_summary, "Cell summary output");
  analyze_cmd->add_option("--out-coefficients", out_coef, "Coefficient table output");
  analyze_cmd->add_option("--out-normality", out_normality, "Normality table output");

  std::string balance_path;
  auto *report_cmd = app.add_subcommand("report", "Balance, cell means and contrasts");
  report_cmd->add_option("--balance", balance_path, "Balance table TSV");
  report_cmd->add_option("--measures", measures_path, "Measures TSV");
  report_cmd->add_option("--out", out_path, "Output file, '-' for stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    err << "error\tusage\t" << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    PipelineConfig cfg;
    if (!config_path.empty()) {
      auto in = OpenIn(config_path, "config file");
      std::stringstream text;
      text << in.rdbuf();
      ApplyText(cfg, text.str());
    }
    ApplyEnvironment(cfg, env);
    for (const auto &o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) ConfigError("--set expects key=value, got '" + o + "'");
      SetValue(cfg, o.substr(0, eq), o.substr(eq + 1));
    }
    if (threads) cfg.threads = *threads;
    if (!corpus.empty()) cfg.corpus = corpus;
    Validate(cfg);
    cfg.selection.threads = cfg.threads;
    cfg.assignment.bands = cfg.bands;
    if (print_config) err << Serialize(cfg);

    if (index_cmd->parsed()) {
      const auto index = BuildIndex(cfg);
      Sink sink(out_path, out);
      WriteIndexTsv(*sink, *index);
      sink.Close();
    } else if (pairs_cmd->parsed()) {
      const auto e = BuildEngines(cfg);
      Sink sink(out_path, out);
      WritePairsTsv(*sink, *e.stats, cfg.associates.association);
      sink.Close();
    } else if (assoc_cmd->parsed()) {
      if (!cues_file.empty()) {
        for (auto &c : ReadLines(cues_file, "cue list")) cues.push_back(c);
      }
      if (cues.empty()) throw Error(ErrorCode::kIo, "no cues given");
      const auto e = BuildEngines(cfg);
      const auto stop = TopFrequent(*e.index, cfg.associates.stoplist_size);
      Sink sink(out_path, out);
      for (const auto &cue : cues) {
        *sink << "#cue=" << cue << '\n';
        WriteAssociatesTsv(*sink, BuildAssociates(cue, *e.stats, stop, cfg.associates));
      }
      sink.Close();
    } else if (ca_cmd->parsed()) {
      auto in = OpenIn(pairs_file, "pair list");
      const auto pairs = ReadPairList(in);
      const auto e = BuildEngines(cfg);
      std::set<std::string> words;
      for (const auto &[a, b] : pairs) {
        words.insert(a);
        words.insert(b);
      }
      const std::vector<std::string> word_list(words.begin(), words.end());
      const auto store = BuildStore(word_list, *e.stats, cfg.associates, cfg.threads);
      const auto batch = BatchCa(pairs, store, cfg.bands, cfg.threads);
      Sink sink(out_path, out);
      WriteCaTsv(*sink, batch);
      sink.Close();
    } else if (stim_cmd->parsed()) {
      std::vector<StimulusItem> pool;
      if (!pool_path.empty()) {
        auto in = OpenIn(pool_path, "pool");
        pool = ReadItemsTsv(in);
      } else {
        auto in = OpenIn(candidates, "candidate frames");
        const auto raws = ReadRawItems(in);
        const auto e = BuildEngines(cfg);
        std::set<std::string> words;
        for (const auto &raw : raws) {
          for (const auto &w : PrimeTargetWords(raw, cfg.frame)) {
            if (!w.empty()) words.insert(w);
          }
        }
        const std::vector<std::string> word_list(words.begin(), words.end());
        const auto store = BuildStore(word_list, *e.stats, cfg.associates, cfg.threads);
        const auto lexicon = Lexicon::FromIndex(*e.index);
        const AnnotationEngines engines{e.stats.get(), &store, &lexicon,
                                        cfg.associates.association};
        for (auto &outcome : AnnotateAll(raws, engines, cfg.frame, cfg.threads)) {
          if (!outcome.item) {
            err << "warning\tannotation\t" << outcome.error << '\n';
            continue;
          }
          auto item = std::move(*outcome.item);
          const auto a = AssignCondition(item, cfg.assignment);
          item.condition = a.condition;
          if (!a.condition) {
            err << "warning\trejected\t" << item.item_id << '\t' << a.rejection << '\n';
          }
          pool.push_back(std::move(item));
        }
      }
      if (!out_pool.empty()) {
        Sink sink(out_pool, out);
        WriteItemsTsv(*sink, pool);
        sink.Close();
      }
      const auto selection = SelectSet(pool, cfg.selection);
      {
        Sink sink(out_set, out);
        WriteSetTsv(*sink, selection.set);
        sink.Close();
      }
      if (!out_balance.empty()) {
        Sink sink(out_balance, out);
        WriteBalanceTsv(*sink, selection.report);
        sink.Close();
      }
      if (!selection.report.pass) {
        std::string names;
        for (size_t f : selection.report.offending) {
          names += (names.empty() ? "" : ",") + std::string(FeatureName(f));
        }
        throw Error(ErrorCode::kInfeasible,
                    "balance criterion not reached; offending=" + names);
      }
    } else if (lists_cmd->parsed()) {
      auto in = OpenIn(set_path, "set");
      StimulusSet set;
      for (auto &item : ReadItemsTsv(in)) {
        if (!item.condition) {
          throw Error(ErrorCode::kInvalidInput,
                      "set item " + item.item_id + " has no condition");
        }
        set.cells[static_cast<size_t>(*item.condition)].push_back(std::move(item));
      }
      std::vector<std::string> fillers;
      if (!fillers_path.empty()) fillers = ReadLines(fillers_path, "filler list");
      const auto lists = RandomizeLists(set, fillers, cfg.list_seed, cfg.lists);
      for (size_t k = 0; k < 2; ++k) {
        Sink sink(list_prefix + std::to_string(k + 1) + ".tsv", out);
        WriteListTsv(*sink, lists[k]);
        sink.Close();
      }
    } else if (measures_cmd->parsed()) {
      auto in = OpenIn(fixations, "fixation report");
      const auto trials = ReadFixationTsv(in, cfg.regions);
      const auto run = ProcessTrials(trials, cfg.measures, cfg.threads);
      for (const auto &w : run.warnings) err << "warning\ttrim\t" << w << '\n';
      Sink sink(out_path, out);
      WriteMeasuresTsv(*sink, run.rows);
      sink.Close();
    } else if (analyze_cmd->parsed()) {
      auto in = OpenIn(measures_path, "measures");
      const auto rows = ReadMeasuresTsv(in);
      const auto cells = SummarizeCells(rows);
      const auto analyses = AnalyzeMeasures(rows);
      const bool any = !out_coef.empty() || !out_normality.empty();
      if (!out_summary.empty() || !any) {
        Sink sink(out_summary, out);
        WriteSummaryTsv(*sink, cells);
        sink.Close();
      }
      if (!out_coef.empty()) {
        Sink sink(out_coef, out);
        WriteCoefficientsTsv(*sink, analyses);
        sink.Close();
      }
      if (!out_normality.empty()) {
        Sink sink(out_normality, out);
        WriteNormalityTsv(*sink, analyses);
        sink.Close();
      }
    } else if (report_cmd->parsed()) {
      if (balance_path.empty() && measures_path.empty()) {
        throw Error(ErrorCode::kIo, "report needs --balance and/or --measures");
      }
      Sink sink(out_path, out);
      if (!balance_path.empty()) {
        *sink << "## stimulus balance\n";
        CopyFile(balance_path, *sink);
      }
      if (!measures_path.empty()) {
        auto in = OpenIn(measures_path, "measures");
        const auto rows = ReadMeasuresTsv(in);
        const auto analyses = AnalyzeMeasures(rows);
        *sink << "## cell means\n";
        WriteSummaryTsv(*sink, SummarizeCells(rows));
        *sink << "## contrasts\n";
        WriteCoefficientsTsv(*sink, analyses);
        *sink << "## normality\n";
        WriteNormalityTsv(*sink, analyses);
      }
      sink.Close();
    }
  } catch (const Error &e) {
    err << "error\t" << ErrorCodeName(e.code()) << '\t' << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception &e) {
    err << "error\tinternal\t" << e.what() << '\n';
    return kExitOther;
  }
  return kExitOk;
}

}  // namespace coocsem::cli
