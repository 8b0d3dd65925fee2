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

#ifndef COOCSEM_TESTS_SIMULATE_H_
#define COOCSEM_TESTS_SIMULATE_H_

// Synthetic reading-time data with planted log-scale condition effects.

#include <cmath>
#include <string>
#include <vector>

#include "coocsem/analysis.h"
#include "coocsem/random.h"

namespace coocsem::testing {

struct PlantedEffects {
  double intercept = 5.5;  // log ms
  double verb = -0.04;
  double adjective = -0.02;
  double interaction = 0.01;
  double subject_sd = 0.1;
  double noise_sd = 0.3;
};

// Every subject reads every item once; item i belongs to condition i % 4.
inline std::vector<MeasureRow> SimulateReading(size_t subjects, size_t items,
                                               const PlantedEffects &e,
                                               uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  std::vector<MeasureRow> rows;
  rows.reserve(subjects * items);
  for (size_t s = 0; s < subjects; ++s) {
    const double subject_shift = e.subject_sd * rng.Normal();
    for (size_t i = 0; i < items; ++i) {
      const Condition c = kConditions[i % 4];
      const double v = VerbHigh(c) ? 0.5 : -0.5;
      const double a = AdjectiveHigh(c) ? 0.5 : -0.5;
      const double log_y = e.intercept + e.verb * v + e.adjective * a +
                           e.interaction * v * a + subject_shift +
                           e.noise_sd * rng.Normal();
      MeasureRow row;
      row.subject_id = "s" + std::to_string(s);
      row.item_id = "i" + std::to_string(i);
      row.condition = std::string(ConditionName(c));
      row.measure = kFfd;
      row.value = std::exp(log_y) * scale;
      row.status = "ok";
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace coocsem::testing

#endif  // COOCSEM_TESTS_SIMULATE_H_
