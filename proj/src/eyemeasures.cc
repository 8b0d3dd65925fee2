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

#include "coocsem/eyemeasures.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "coocsem/error.h"
#include "coocsem/parallel.h"
#include "coocsem/text.h"

namespace coocsem {
namespace {

constexpr std::array<std::string_view, kMeasureCount> kMeasureNames = {
    "FFD", "SFD", "GD", "TVD", "GPD"};

[[noreturn]] void Structural(const std::string &what) {
  throw Error(ErrorCode::kStructural, what);
}

std::optional<Eye> ParseEye(std::string_view s) {
  const std::string folded = text::FoldCase(s);
  if (folded == "r" || folded == "right") return Eye::kRight;
  if (folded == "l" || folded == "left") return Eye::kLeft;
  return std::nullopt;
}

void CheckOrdering(std::span<const FixationEvent> raw) {
  for (Eye eye : {Eye::kLeft, Eye::kRight}) {
    const FixationEvent *prev = nullptr;
    for (const auto &f : raw) {
      if (!(f.duration > 0)) Structural("fixation duration must be positive");
      if (f.eye != eye) continue;
      if (prev && f.onset < prev->onset + prev->duration) {
        Structural("fixations unordered or overlapping at onset " +
                   text::FormatDouble(f.onset));
      }
      prev = &f;
    }
  }
}

}  // namespace

std::string_view TrialStatusName(TrialStatus s) {
  switch (s) {
    case TrialStatus::kValid: return "ok";
    case TrialStatus::kWrongEye: return "wrong_eye";
    case TrialStatus::kTargetSkipped: return "target_skipped";
    case TrialStatus::kPrimeSkipped: return "prime_skipped";
  }
  return "ok";
}

std::string_view MeasureName(size_t measure) { return kMeasureNames.at(measure); }

std::optional<size_t> ParseMeasure(std::string_view name) {
  for (size_t m = 0; m < kMeasureCount; ++m) {
    if (kMeasureNames[m] == name) return m;
  }
  return std::nullopt;
}

std::vector<FixationEvent> PrepareFixations(std::span<const FixationEvent> raw,
                                            const MeasureConfig &config) {
  CheckOrdering(raw);
  std::vector<FixationEvent> out;
  for (const auto &f : raw) {
    if (f.eye == config.eye && f.duration >= config.min_fixation_ms) out.push_back(f);
  }
  return out;
}

TrialStatus ValidateTrial(const TrialRecord &trial, const MeasureConfig &config) {
  if (trial.fixations.empty()) Structural("trial has no fixation events");
  const auto fix = PrepareFixations(trial.fixations, config);
  const bool any_eye =
      std::any_of(trial.fixations.begin(), trial.fixations.end(),
                  [&](const FixationEvent &f) { return f.eye == config.eye; });
  if (!any_eye) return TrialStatus::kWrongEye;

  const auto &r = trial.regions;
  const auto first_target =
      std::find_if(fix.begin(), fix.end(),
                   [&](const FixationEvent &f) { return f.word_index == r.target; });
  if (first_target == fix.end()) return TrialStatus::kTargetSkipped;
  auto seen_before = [&](int region) {
    return std::any_of(fix.begin(), first_target,
                       [&](const FixationEvent &f) { return f.word_index == region; });
  };
  if (!seen_before(r.verb) || !seen_before(r.adjective)) {
    return TrialStatus::kPrimeSkipped;
  }
  return TrialStatus::kValid;
}

MeasureSet ComputeMeasures(std::span<const FixationEvent> fix, int target) {
  if (fix.empty()) Structural("no fixations to measure");
  MeasureSet m;
  size_t first = fix.size();
  double tvd = 0;
  for (size_t i = 0; i < fix.size(); ++i) {
    if (fix[i].word_index != target) continue;
    if (first == fix.size()) first = i;
    tvd += fix[i].duration;
  }
  if (first == fix.size()) return m;
  m[kTvd] = tvd;

  m.first_pass_skipped =
      std::any_of(fix.begin(), fix.begin() + static_cast<std::ptrdiff_t>(first),
                  [&](const FixationEvent &f) { return f.word_index > target; });
  if (m.first_pass_skipped) return m;

  double gd = 0;
  size_t run = 0;
  for (size_t i = first; i < fix.size() && fix[i].word_index == target; ++i) {
    gd += fix[i].duration;
    ++run;
  }
  m[kFfd] = fix[first].duration;
  m[kGd] = gd;
  if (run == 1) m[kSfd] = fix[first].duration;

  double gpd = 0;
  size_t i = first;
  for (; i < fix.size() && fix[i].word_index <= target; ++i) gpd += fix[i].duration;
  m[kGpd] = gpd;
  m.gpd_open_ended = i == fix.size();
  return m;
}

MeasureSet ApplyCutoffs(const MeasureSet &m, const CutoffTable &cutoffs) {
  MeasureSet out = m;
  for (size_t k = 0; k < kMeasureCount; ++k) {
    if (out[k] && *out[k] > cutoffs.max_ms[k]) out[k].reset();
  }
  return out;
}

TrimResult TrimOutliers(std::span<const double> log_values,
                        std::span<const std::string> groups, double k) {
  if (log_values.size() != groups.size()) {
    throw Error(ErrorCode::kInvalidInput, "values and groups differ in length");
  }
  TrimResult result;
  result.keep.assign(log_values.size(), true);
  std::map<std::string, std::vector<size_t>> members;
  for (size_t i = 0; i < groups.size(); ++i) members[groups[i]].push_back(i);

  std::vector<double> residual(log_values.size(), 0.0);
  std::vector<bool> trimmable(log_values.size(), false);
  double ss = 0;
  size_t count = 0;
  for (const auto &[name, idx] : members) {
    if (idx.size() < 3) {
      result.warnings.push_back("group " + name + " has " +
                                std::to_string(idx.size()) +
                                " values; passed through untrimmed");
      continue;
    }
    double sum = 0;
    bool constant = true;
    for (size_t i : idx) {
      sum += log_values[i];
      constant = constant && log_values[i] == log_values[idx[0]];
    }
    // Exact mean for constant groups so their residuals are exactly zero.
    const double mean =
        constant ? log_values[idx[0]] : sum / static_cast<double>(idx.size());
    for (size_t i : idx) {
      residual[i] = log_values[i] - mean;
      trimmable[i] = true;
      ss += residual[i] * residual[i];
      ++count;
    }
  }
  if (count < 2) return result;
  result.residual_sd = std::sqrt(ss / static_cast<double>(count - 1));
  if (result.residual_sd == 0) return result;
  const double limit = k * result.residual_sd;
  for (size_t i = 0; i < log_values.size(); ++i) {
    if (trimmable[i] && std::abs(residual[i]) > limit) result.keep[i] = false;
  }
  return result;
}

MeasureRun ProcessTrials(std::span<const TrialRecord> trials,
                         const MeasureConfig &config, unsigned threads) {
  struct TrialOutcome {
    TrialStatus status = TrialStatus::kValid;
    MeasureSet raw;
    MeasureSet kept;
  };
  std::vector<TrialOutcome> outcomes(trials.size());
  ParallelSlices(trials.size(), threads, [&](unsigned, size_t begin, size_t end) {
    for (size_t t = begin; t < end; ++t) {
      auto &o = outcomes[t];
      o.status = ValidateTrial(trials[t], config);
      if (o.status != TrialStatus::kValid) continue;
      const auto fix = PrepareFixations(trials[t].fixations, config);
      o.raw = ComputeMeasures(fix, trials[t].regions.target);
      o.kept = ApplyCutoffs(o.raw, config.cutoffs);
    }
  });

  MeasureRun run;
  for (size_t t = 0; t < trials.size(); ++t) {
    const auto &o = outcomes[t];
    for (size_t m = 0; m < kMeasureCount; ++m) {
      MeasureRow row;
      row.subject_id = trials[t].subject_id;
      row.item_id = trials[t].item_id;
      row.condition = trials[t].condition;
      row.measure = m;
      if (o.status != TrialStatus::kValid) {
        row.status = TrialStatusName(o.status);
      } else if (o.kept[m]) {
        row.value = o.kept[m];
        row.status = "ok";
      } else if (o.raw[m]) {
        row.status = "cutoff";
      } else if (o.raw.first_pass_skipped) {
        row.status = "first_pass_skipped";
      } else {
        row.status = "multiple_fixations";  // SFD with a refixation
      }
      if (m == kGpd && o.status == TrialStatus::kValid && o.raw.gpd_open_ended &&
          o.raw[kGpd]) {
        row.flags = "open_ended";
      }
      run.rows.push_back(std::move(row));
    }
  }

  for (size_t m = 0; m < kMeasureCount; ++m) {
    std::vector<size_t> idx;
    std::vector<double> logs;
    std::vector<std::string> groups;
    for (size_t i = 0; i < run.rows.size(); ++i) {
      const auto &row = run.rows[i];
      if (row.measure != m || !row.value) continue;
      idx.push_back(i);
      logs.push_back(std::log(*row.value));
      groups.push_back(row.condition);
    }
    const auto trim = TrimOutliers(logs, groups, config.trim_k);
    for (const auto &w : trim.warnings) {
      run.warnings.push_back(std::string(MeasureName(m)) + ": " + w);
    }
    for (size_t j = 0; j < idx.size(); ++j) {
      if (trim.keep[j]) continue;
      run.rows[idx[j]].value.reset();
      run.rows[idx[j]].status = "trimmed";
    }
  }
  return run;
}

std::vector<TrialRecord> ReadFixationTsv(std::istream &in, const RegionMap &regions) {
  std::vector<TrialRecord> trials;
  std::map<std::pair<std::string, std::string>, size_t> where;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("subject_id", 0) == 0) continue;
    const auto f = text::SplitTabs(line);
    auto fail = [&](const std::string &why) {
      throw Error(ErrorCode::kInvalidInput,
                  "fixation line " + std::to_string(line_no) + ": " + why);
    };
    if (f.size() != 7) fail("expected 7 tab-separated fields");
    FixationEvent e;
    const auto word = text::ParseInt(f[3]);
    const auto onset = text::ParseDouble(f[4]);
    const auto duration = text::ParseDouble(f[5]);
    const auto eye = ParseEye(f[6]);
    if (!word || *word < kOffText) fail("bad word_index");
    if (!onset || !duration) fail("bad onset or duration");
    if (!eye) fail("eye must be L or R");
    e.word_index = static_cast<int>(*word);
    e.onset = *onset;
    e.duration = *duration;
    e.eye = *eye;
    const auto key = std::make_pair(std::string(f[0]), std::string(f[1]));
    auto [it, inserted] = where.emplace(key, trials.size());
    if (inserted) {
      TrialRecord t;
      t.subject_id = key.first;
      t.item_id = key.second;
      t.condition = std::string(f[2]);
      t.regions = regions;
      trials.push_back(std::move(t));
    }
    auto &trial = trials[it->second];
    if (trial.condition != f[2]) fail("condition changes within a trial");
    trial.fixations.push_back(e);
  }
  return trials;
}

void WriteMeasuresTsv(std::ostream &out, std::span<const MeasureRow> rows) {
  out << "subject_id\titem_id\tcondition\tmeasure\tvalue\tstatus\tflags\n";
  for (const auto &r : rows) {
    out << r.subject_id << '\t' << r.item_id << '\t' << r.condition << '\t'
        << MeasureName(r.measure) << '\t'
        << (r.value ? text::FormatDouble(*r.value) : "NA") << '\t' << r.status
        << '\t' << r.flags << '\n';
  }
}

std::vector<MeasureRow> ReadMeasuresTsv(std::istream &in) {
  std::vector<MeasureRow> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("subject_id\t", 0) == 0) continue;
    const auto f = text::SplitTabs(line);
    auto fail = [&](const std::string &why) {
      throw Error(ErrorCode::kInvalidInput,
                  "measure line " + std::to_string(line_no) + ": " + why);
    };
    if (f.size() != 7) fail("expected 7 tab-separated fields");
    MeasureRow r;
    r.subject_id = std::string(f[0]);
    r.item_id = std::string(f[1]);
    r.condition = std::string(f[2]);
    const auto m = ParseMeasure(f[3]);
    if (!m) fail("unknown measure");
    r.measure = *m;
    if (f[4] != "NA") {
      r.value = text::ParseDouble(f[4]);
      if (!r.value) fail("bad value");
    }
    r.status = std::string(f[5]);
    r.flags = std::string(f[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace coocsem
