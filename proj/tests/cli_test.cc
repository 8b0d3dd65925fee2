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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coocsem/analysis.h"
#include "coocsem/cli.h"
#include "coocsem/error.h"
#include "fixtures.h"
#include "pools.h"
#include "simulate.h"

using namespace coocsem;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Call(std::vector<std::string> args,
            const std::map<std::string, std::string> &env = {}) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::Run(args, out, err, env);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("coocsem_cli_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string File(const std::string &name, const std::string &content = "") const {
    const auto p = (path_ / name).string();
    if (!content.empty()) std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  fs::path path_;
};

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string ConfigValue(const std::string &dump, const std::string &key) {
  std::istringstream in(dump);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

}  // namespace

TEST_CASE("configuration round trips through its text form") {
  cli::PipelineConfig a;
  const std::string defaults = cli::Serialize(a);
  CHECK(ConfigValue(defaults, "association.threshold") == "3.841");
  CHECK(ConfigValue(defaults, "associates.cap") == "1000");
  CHECK(ConfigValue(defaults, "ca.high_above") == "60");
  CHECK(ConfigValue(defaults, "cutoff.gpd") == "1500");

  cli::SetValue(a, "association.threshold", "0.30000000000000004");
  cli::SetValue(a, "trim.k", "2.25");
  cli::SetValue(a, "select.seed", "18446744073709551615");
  cli::SetValue(a, "measures.eye", "left");
  cli::SetValue(a, "tokenizer.id_column", "never");
  cli::SetValue(a, "frequency_basis", "token");
  cli::SetValue(a, "frame.case_fold", "false");
  cli::PipelineConfig b;
  cli::ApplyText(b, "# comment\n\n" + cli::Serialize(a));
  CHECK(cli::Serialize(b) == cli::Serialize(a));
  CHECK(b.associates.association.threshold == 0.30000000000000004);
  CHECK(b.selection.seed == 18446744073709551615ull);

  CHECK(cli::ConfigKeys().size() ==
        static_cast<size_t>(std::count(defaults.begin(), defaults.end(), '\n')));
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code([&] { cli::SetValue(b, "no.such.key", "1"); }) == ErrorCode::kConfig);
  CHECK(code([&] { cli::SetValue(b, "trim.k", "abc"); }) == ErrorCode::kConfig);
  CHECK(code([&] { cli::SetValue(b, "associates.cap", "-3"); }) == ErrorCode::kConfig);
  CHECK(code([&] { cli::ApplyText(b, "threads 4\n"); }) == ErrorCode::kConfig);
}

TEST_CASE("settings precedence: file, environment, --set, flags") {
  TempDir dir;
  const auto corpus = dir.File("c.txt", "the cat sat\n");
  const auto config = dir.File("run.conf", "threads=2\ntrim.k=3\nassociates.cap=50\nca.low_below=10\n");
  const std::map<std::string, std::string> env = {
      {"COOCSEM_TRIM_K", "3.5"}, {"COOCSEM_ASSOCIATES_CAP", "70"}, {"COOCSEM_THREADS", "3"}};
  const auto r = Call({"--config", config, "--print-config", "index", "--corpus", corpus,
                       "--set", "associates.cap=90", "--threads", "4"},
                      env);
  REQUIRE(r.code == 0);
  CHECK(ConfigValue(r.err, "ca.low_below") == "10");
  CHECK(ConfigValue(r.err, "trim.k") == "3.5");
  CHECK(ConfigValue(r.err, "associates.cap") == "90");
  CHECK(ConfigValue(r.err, "threads") == "4");
  CHECK(ConfigValue(r.err, "corpus") == corpus);
}

TEST_CASE("index of a three sentence corpus") {
  TempDir dir;
  const auto corpus = dir.File("c.txt", "the cat sat\nthe dog sat\na cat ran\n");
  const auto r = Call({"index", "--corpus", corpus});
  REQUIRE(r.code == 0);
  // f_max = 2; class round(log2(2/1)) = 1 for the singletons.
  CHECK(r.out ==
        "#n_sentences=3\tf_max=2\n"
        "cat\t2\t2\t1\t0\n"
        "sat\t2\t2\t2\t0\n"
        "the\t2\t2\t3\t0\n"
        "a\t1\t1\t4\t1\n"
        "dog\t1\t1\t5\t1\n"
        "ran\t1\t1\t6\t1\n");
  const auto out = dir.File("index.tsv");
  CHECK(Call({"index", "--corpus", corpus, "--out", out}).code == 0);
  CHECK(Slurp(out) == r.out);
}

TEST_CASE("ca subcommand matches per-pair library calls") {
  TempDir dir;
  const auto lines = testing::TopicCorpus(3000, 5, 30, 200, 43);
  const auto corpus = dir.File("c.txt", testing::Join(lines));
  const auto pairs = dir.File("pairs.tsv",
                              "t0_1\tt0_3\nt0_2\tt1_4\nt2_0\tt2_5\nt0_1\tnothere\n");
  const auto r = Call({"ca", "--corpus", corpus, "--pairs", pairs, "--threads", "2"});
  REQUIRE(r.code == 0);

  std::istringstream in1(testing::Join(lines)), in2(testing::Join(lines));
  const auto index = Ingest(in1);
  const auto stats = CountPairs(in2, index);
  std::vector<std::string> all;
  for (int t = 0; t < 5; ++t) {
    for (int w = 0; w < 30; ++w) all.push_back("t" + std::to_string(t) + "_" + std::to_string(w));
  }
  const auto store = BuildStore(all, stats);
  std::string expected = "";
  std::istringstream got(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(got, line)) rows.push_back(line);
  REQUIRE(rows.size() >= 4);
  const std::vector<std::pair<std::string, std::string>> want = {
      {"t0_1", "t0_3"}, {"t0_2", "t1_4"}, {"t2_0", "t2_5"}};
  const size_t offset = rows.size() - 4;
  for (size_t i = 0; i < want.size(); ++i) {
    const auto ca = CommonAssociates(want[i].first, want[i].second, store);
    CHECK(rows[offset + i] == want[i].first + "\t" + want[i].second + "\t" +
                                  std::to_string(ca.ca_count) + "\t" +
                                  std::string(BandName(ca.band)));
  }
  CHECK(rows.back().find("NA") != std::string::npos);
}

TEST_CASE("usage errors and exit codes") {
  TempDir dir;
  auto r = Call({"frobnicate"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.rfind("error\tusage\t", 0) == 0);
  CHECK(r.err.find("Usage:") != std::string::npos);
  CHECK(Call({}).code == cli::kExitUsage);
  r = Call({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("stimgen") != std::string::npos);

  r = Call({"index", "--corpus", dir.File("missing.txt")});
  CHECK(r.code == cli::kExitMissingInput);
  CHECK(r.err.rfind("error\tio\t", 0) == 0);
  const auto corpus = dir.File("c.txt", "a b\n");
  CHECK(Call({"index", "--corpus", corpus, "--set", "trim.k=0"}).code == cli::kExitConfig);
  CHECK(Call({"index", "--corpus", corpus}, {{"COOCSEM_THREADS", "x"}}).code ==
        cli::kExitConfig);
  CHECK(Call({"index", "--corpus", dir.File("empty.txt", "\n")}).code == cli::kExitData);

  CHECK(cli::ExitCodeFor(ErrorCode::kInfeasible) == cli::kExitInfeasible);
  CHECK(cli::ExitCodeFor(ErrorCode::kStructural) == cli::kExitData);
}

TEST_CASE("stimgen selects a balanced set reproducibly") {
  TempDir dir;
  std::ostringstream pool;
  WriteItemsTsv(pool, testing::NormalPool(40, 5));
  const auto pool_path = dir.File("pool.tsv", pool.str());
  auto run = [&](const std::string &threads, const std::string &tag) {
    const auto set = dir.File("set" + tag + ".tsv");
    const auto bal = dir.File("bal" + tag + ".tsv");
    const auto r = Call({"stimgen", "--pool", pool_path, "--out-set", set, "--out-balance",
                         bal, "--set", "select.n_per_cell=10", "--threads", threads});
    return std::make_tuple(r, Slurp(set), Slurp(bal));
  };
  const auto [r1, set1, bal1] = run("1", "a");
  const auto [r2, set2, bal2] = run("3", "b");
  REQUIRE(r1.code == 0);
  CHECK(r2.code == 0);
  CHECK(set1 == set2);
  CHECK(bal1 == bal2);
  CHECK(bal1.find("#pass=true") != std::string::npos);
  std::istringstream in(set1);
  const auto items = ReadItemsTsv(in);
  CHECK(items.size() == 40);

  // Lists from the selected set.
  const auto prefix = (fs::path(dir.File("x")).parent_path() / "list").string();
  const auto fillers = dir.File("fillers.txt", "f1\nf2\nf3\nf4\n");
  const auto set_path = dir.File("seta.tsv");
  CHECK(Call({"lists", "--set", set_path, "--fillers", fillers, "--out-prefix", prefix}).code ==
        0);
  const auto list1 = Slurp(prefix + "1.tsv");
  CHECK(list1.find("#block=1") != std::string::npos);
  CHECK(list1.find("FILLER") != std::string::npos);

  // A pool shifted on one control cannot be balanced.
  std::ostringstream bad;
  WriteItemsTsv(bad, testing::NormalPool(12, 6, 10.0));
  const auto bad_path = dir.File("bad.tsv", bad.str());
  const auto r3 = Call({"stimgen", "--pool", bad_path, "--out-set", dir.File("s3.tsv"),
                        "--set", "select.n_per_cell=10"});
  CHECK(r3.code == cli::kExitInfeasible);
  CHECK(r3.err.find("noun_length") != std::string::npos);
  CHECK(Call({"stimgen", "--pool", bad_path, "--set", "select.n_per_cell=20"}).code ==
        cli::kExitInfeasible);
}

TEST_CASE("measures, analyze and report") {
  TempDir dir;
  // One trial: verb, adjective, target, then onward.
  const auto fix = dir.File("fix.tsv",
                            "subject_id\titem_id\tcondition\tword_index\tonset_ms\tduration_ms\teye\n"
                            "s1\ti1\tHH\t1\t0\t200\tR\n"
                            "s1\ti1\tHH\t3\t220\t210\tR\n"
                            "s1\ti1\tHH\t4\t450\t250\tR\n"
                            "s1\ti1\tHH\t5\t720\t180\tR\n");
  auto r = Call({"measures", "--fixations", fix});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("s1\ti1\tHH\tFFD\t250\tok") != std::string::npos);
  CHECK(r.out.find("s1\ti1\tHH\tGPD\t250\tok") != std::string::npos);
  CHECK(Call({"measures", "--fixations", dir.File("nofix.tsv")}).code ==
        cli::kExitMissingInput);

  std::ostringstream rows;
  const auto sim = testing::SimulateReading(8, 40, {}, 9);
  WriteMeasuresTsv(rows, sim);
  const auto measures = dir.File("m.tsv", rows.str());
  const auto coef = dir.File("coef.tsv");
  r = Call({"analyze", "--measures", measures, "--out-coefficients", coef});
  REQUIRE(r.code == 0);
  std::ostringstream want;
  WriteCoefficientsTsv(want, AnalyzeMeasures(sim));
  CHECK(Slurp(coef) == want.str());

  r = Call({"analyze", "--measures", measures});
  CHECK(r.out.rfind("measure\tcondition\tn\tmean\tse\n", 0) == 0);

  const auto balance = dir.File("bal.tsv", "variable\tF\n#pass=true\n");
  r = Call({"report", "--balance", balance, "--measures", measures});
  REQUIRE(r.code == 0);
  for (const char *h : {"## stimulus balance", "## cell means", "## contrasts", "## normality"}) {
    CHECK(r.out.find(h) != std::string::npos);
  }
  CHECK(Call({"report"}).code == cli::kExitMissingInput);
}

TEST_CASE("stimgen annotates raw candidate frames") {
  TempDir dir;
  const auto corpus = dir.File("c.txt", testing::Join(testing::TopicCorpus(3000, 5, 30, 200, 47)));
  std::string frames;
  for (int i = 0; i < 8; ++i) {
    frames += "c" + std::to_string(i) + "\tw0 t0_" + std::to_string(i) + " w1 t" +
              std::to_string(i % 2) + "_" + std::to_string(i + 1) + " t0_" +
              std::to_string(i + 2) + ", w2 w3 w4.\t0\t1\t2\t3\t4\t5\t6\t7\n";
  }
  frames += "bad\tw0 zzz w1 t0_1 t0_2 w2 w3 w4\t0\t1\t2\t3\t4\t5\t6\t7\n";
  const auto candidates = dir.File("cand.tsv", frames);
  const auto pool = dir.File("pool.tsv");
  const auto r = Call({"stimgen", "--corpus", corpus, "--candidates", candidates, "--out-pool",
                       pool, "--set", "select.n_per_cell=1", "--threads", "2"});
  // Too few candidates to fill every cell.
  CHECK(r.code == cli::kExitInfeasible);
  CHECK(r.err.find("warning\tannotation\titem bad") != std::string::npos);
  std::ifstream in(pool);
  const auto items = ReadItemsTsv(in);
  REQUIRE(items.size() == 8);
  for (const auto &item : items) {
    CHECK(item.comma_after_target);
    CHECK(item.closed[2] == "w4");
  }
}
