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

#ifndef COOCSEM_CLI_H_
#define COOCSEM_CLI_H_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "coocsem/assoc.h"
#include "coocsem/corpus.h"
#include "coocsem/cooc.h"
#include "coocsem/eyemeasures.h"
#include "coocsem/stimgen.h"

namespace coocsem::cli {

// Every tunable of the pipeline, with the standard parameters as defaults.
struct PipelineConfig {
  std::string corpus;
  unsigned threads = 1;
  IngestOptions ingest;
  uint64_t min_pair_freq = 2;
  AssociateConfig associates;
  BandThresholds bands;
  FrameRules frame;
  AssignmentRules assignment;
  SelectionConfig selection;
  ListRules lists;
  uint64_t list_seed = 1;
  MeasureConfig measures;
  RegionMap regions;
};

// Flat "key=value" lines in a fixed key order.
std::string Serialize(const PipelineConfig &config);

// Applies one setting. Throws kConfig on an unknown key or bad value.
void SetValue(PipelineConfig &config, const std::string &key,
              const std::string &value);

// Applies "key=value" lines; blank lines and '#' comments are skipped.
void ApplyText(PipelineConfig &config, const std::string &text);

// Applies COOCSEM_<KEY> variables, where KEY is the config key upper-cased
// with '.' replaced by '_'.
void ApplyEnvironment(PipelineConfig &config,
                      const std::map<std::string, std::string> &env);

std::vector<std::string> ConfigKeys();

enum ExitCode {
  kExitOk = 0,
  kExitOther = 1,
  kExitUsage = 2,
  kExitMissingInput = 3,
  kExitConfig = 4,
  kExitInfeasible = 5,
  kExitData = 6,
};

int ExitCodeFor(ErrorCode code);

// Runs one subcommand. `args` excludes the program name. Errors are written
// to `err` as a single "error\t<code>\t<message>" line.
int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
        const std::map<std::string, std::string> &env = {});

}  // namespace coocsem::cli

#endif  // COOCSEM_CLI_H_
