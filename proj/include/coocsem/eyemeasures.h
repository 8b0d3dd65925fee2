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

#ifndef COOCSEM_EYEMEASURES_H_
#define COOCSEM_EYEMEASURES_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coocsem {

enum class Eye { kLeft, kRight };

// Interest-area index for fixations that land outside the sentence.
inline constexpr int kOffText = -1;

struct FixationEvent {
  double onset = 0;     // ms from trial start
  double duration = 0;  // ms
  int word_index = kOffText;
  Eye eye = Eye::kRight;
};

// Word indices of the two primes and the target.
struct RegionMap {
  int verb = 1;
  int adjective = 3;
  int target = 4;
};

struct TrialRecord {
  std::string subject_id;
  std::string item_id;
  std::string condition;
  std::vector<FixationEvent> fixations;
  RegionMap regions;
};

enum class TrialStatus { kValid, kWrongEye, kTargetSkipped, kPrimeSkipped };

std::string_view TrialStatusName(TrialStatus s);

enum Measure : size_t { kFfd, kSfd, kGd, kTvd, kGpd, kMeasureCount };

std::string_view MeasureName(size_t measure);
std::optional<size_t> ParseMeasure(std::string_view name);

struct CutoffTable {
  // Values strictly above the limit are dropped.
  std::array<double, kMeasureCount> max_ms = {800, 800, 1000, 1500, 1500};
};

struct MeasureConfig {
  double min_fixation_ms = 70;  // shorter fixations are removed first
  Eye eye = Eye::kRight;
  CutoffTable cutoffs;
  double trim_k = 2.5;
};

// Fixations of the analyzed eye with short fixations removed. Throws
// kStructural when a duration is not positive or events of one eye are
// unordered or overlap.
std::vector<FixationEvent> PrepareFixations(std::span<const FixationEvent> raw,
                                            const MeasureConfig &config = {});

// Checks in order: analyzed-eye data present, target fixated, both primes
// fixated before the first target fixation.
TrialStatus ValidateTrial(const TrialRecord &trial, const MeasureConfig &config = {});

struct MeasureSet {
  std::array<std::optional<double>, kMeasureCount> values;
  // The target was first fixated after a fixation right of it.
  bool first_pass_skipped = false;
  // No fixation right of the target followed first entry.
  bool gpd_open_ended = false;

  const std::optional<double> &operator[](size_t m) const { return values[m]; }
  std::optional<double> &operator[](size_t m) { return values[m]; }
};

// Measures over prepared fixations. Throws kStructural on an empty list.
MeasureSet ComputeMeasures(std::span<const FixationEvent> fixations, int target);

// Drops each measure independently when above its limit.
MeasureSet ApplyCutoffs(const MeasureSet &m, const CutoffTable &cutoffs = {});

struct TrimResult {
  std::vector<bool> keep;
  double residual_sd = 0;
  std::vector<std::string> warnings;
};

// Single-pass trimming of log values on residuals from their group mean;
// values with |residual| > k * SD(residuals) are removed. Groups with fewer
// than three values pass through untrimmed and are excluded from the SD.
TrimResult TrimOutliers(std::span<const double> log_values,
                        std::span<const std::string> groups, double k = 2.5);

struct MeasureRow {
  std::string subject_id;
  std::string item_id;
  std::string condition;
  size_t measure = kFfd;
  std::optional<double> value;
  // ok, wrong_eye, target_skipped, prime_skipped, first_pass_skipped,
  // cutoff or trimmed.
  std::string status;
  std::string flags;  // "open_ended" or empty
};

struct MeasureRun {
  std::vector<MeasureRow> rows;
  std::vector<std::string> warnings;
};

// Validation, measures, cutoffs and per-measure, per-condition trimming.
MeasureRun ProcessTrials(std::span<const TrialRecord> trials,
                         const MeasureConfig &config = {}, unsigned threads = 1);

// Columns subject_id, item_id, condition, word_index, onset_ms,
// duration_ms, eye; an optional header row starting with "subject_id".
// Rows of one subject and item form a trial, in order of first appearance.
std::vector<TrialRecord> ReadFixationTsv(std::istream &in,
                                         const RegionMap &regions = {});

// subject, item, condition, measure, value ("NA" when absent), status, flags.
void WriteMeasuresTsv(std::ostream &out, std::span<const MeasureRow> rows);
std::vector<MeasureRow> ReadMeasuresTsv(std::istream &in);

}  // namespace coocsem

#endif  // COOCSEM_EYEMEASURES_H_
