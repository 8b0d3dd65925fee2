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

#ifndef COOCSEM_TESTS_TRACES_H_
#define COOCSEM_TESTS_TRACES_H_

// Hand-traced reading trials with their expected measures.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "coocsem/eyemeasures.h"

namespace coocsem::testing {

// Word indices in the default frame.
constexpr int V = 1, A = 3, T = 4;

// Fixations laid out back to back with 25 ms saccades.
inline std::vector<FixationEvent> Trace(std::initializer_list<std::pair<int, double>> seq,
                                 Eye eye = Eye::kRight) {
  std::vector<FixationEvent> out;
  double t = 100;
  for (auto [word, dur] : seq) {
    out.push_back({t, dur, word, eye});
    t += dur + 25;
  }
  return out;
}

inline TrialRecord Trial(std::vector<FixationEvent> fix, std::string cond = "HH") {
  TrialRecord t;
  t.subject_id = "s1";
  t.item_id = "i1";
  t.condition = std::move(cond);
  t.fixations = std::move(fix);
  return t;
}

using Opt = std::optional<double>;

struct Golden {
  const char *name;
  std::vector<FixationEvent> fix;
  TrialStatus status;
  // ffd, sfd, gd, tvd, gpd
  std::array<Opt, kMeasureCount> expected;
  bool skipped = false;
  bool open_ended = false;
};

inline std::vector<Golden> GoldenTraces() {
  const Opt na;
  std::vector<Golden> g;
  g.push_back({"single fixation", Trace({{V, 200}, {A, 210}, {T, 235}, {5, 250}}),
               TrialStatus::kValid, {235.0, 235.0, 235.0, 235.0, 235.0}});
  g.push_back({"refixation", Trace({{V, 200}, {A, 210}, {T, 200}, {T, 150}, {5, 250}}),
               TrialStatus::kValid, {200.0, na, 350.0, 350.0, 350.0}});
  g.push_back({"regression then return",
               Trace({{V, 200}, {A, 210}, {T, 200}, {V, 180}, {T, 160}, {5, 250}}),
               TrialStatus::kValid, {200.0, 200.0, 200.0, 360.0, 540.0}});
  g.push_back({"target skipped", Trace({{V, 200}, {A, 210}, {5, 220}, {6, 230}}),
               TrialStatus::kTargetSkipped, {na, na, na, na, na}});
  g.push_back({"adjective only after target",
               Trace({{0, 150}, {V, 200}, {T, 230}, {A, 210}, {5, 200}}),
               TrialStatus::kPrimeSkipped, {na, na, na, na, na}});
  g.push_back({"left eye only", Trace({{V, 200}, {A, 210}, {T, 235}}, Eye::kLeft),
               TrialStatus::kWrongEye, {na, na, na, na, na}});
  g.push_back({"target entered by regression",
               Trace({{V, 200}, {A, 210}, {5, 200}, {T, 220}, {6, 240}}),
               TrialStatus::kValid, {na, na, na, 220.0, na}, true});
  g.push_back({"open-ended go-past", Trace({{V, 200}, {A, 210}, {T, 240}, {V, 100}}),
               TrialStatus::kValid, {240.0, 240.0, 240.0, 240.0, 340.0}, false, true});
  g.push_back({"late re-reading",
               Trace({{V, 200}, {A, 210}, {T, 200}, {5, 300}, {6, 180}, {T, 250}}),
               TrialStatus::kValid, {200.0, 200.0, 200.0, 450.0, 200.0}});
  g.push_back({"short fixation removed before refixation",
               Trace({{V, 200}, {A, 210}, {T, 200}, {A, 50}, {T, 150}, {5, 200}}),
               TrialStatus::kValid, {200.0, na, 350.0, 350.0, 350.0}});
  g.push_back({"off-text fixation inside go-past",
               Trace({{V, 200}, {A, 210}, {T, 200}, {kOffText, 100}, {T, 100}, {5, 200}}),
               TrialStatus::kValid, {200.0, 200.0, 200.0, 300.0, 400.0}});
  g.push_back({"prime seen only in a short fixation",
               Trace({{V, 60}, {A, 210}, {T, 235}, {5, 250}}),
               TrialStatus::kPrimeSkipped, {na, na, na, na, na}});
  g.push_back({"short target fixation removed",
               Trace({{V, 200}, {A, 210}, {T, 69}, {T, 300}, {5, 250}}),
               TrialStatus::kValid, {300.0, 300.0, 300.0, 300.0, 300.0}});
  g.push_back({"long first fixation above cutoff",
               Trace({{V, 200}, {A, 210}, {T, 801}, {T, 300}, {5, 250}}),
               TrialStatus::kValid, {na, na, na, 1101.0, 1101.0}});
  g.push_back({"fixations at every limit",
               Trace({{V, 200}, {A, 210}, {T, 800}, {5, 250}}),
               TrialStatus::kValid, {800.0, 800.0, 800.0, 800.0, 800.0}});
  g.push_back({"gaze at 1000, go-past at 1500",
               Trace({{V, 200}, {A, 210}, {T, 500}, {T, 500}, {V, 500}, {8, 100}}),
               TrialStatus::kValid, {500.0, na, 1000.0, 1000.0, 1500.0}});
  g.push_back({"gaze just above 1000",
               Trace({{V, 200}, {A, 210}, {T, 501}, {T, 500}, {5, 100}, {T, 500}}),
               TrialStatus::kValid, {501.0, na, na, na, 1001.0}});
  return g;
}

}  // namespace coocsem::testing

#endif  // COOCSEM_TESTS_TRACES_H_
