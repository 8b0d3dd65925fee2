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

#ifndef COOCSEM_ANALYSIS_H_
#define COOCSEM_ANALYSIS_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coocsem/eyemeasures.h"
#include "coocsem/stimgen.h"

namespace coocsem {

struct CellStats {
  size_t n = 0;
  std::optional<double> mean;  // absent when n = 0
  std::optional<double> se;    // SD / sqrt(n); absent when n = 0
};

CellStats Summarize(std::span<const double> values);

struct CellSummary {
  size_t measure = kFfd;
  Condition condition = Condition::kHH;
  CellStats stats;
};

// Means and SEs in untransformed ms for every measure and condition, from
// rows that carry a value. Throws kInvalidInput on an unknown condition.
std::vector<CellSummary> SummarizeCells(std::span<const MeasureRow> rows);

struct Observation {
  double log_value = 0;
  Condition condition = Condition::kHH;
  std::string subject;
  std::string item;
};

// Log-transformed observations of one measure.
std::vector<Observation> Observations(std::span<const MeasureRow> rows,
                                      size_t measure);

enum Term : size_t { kIntercept, kVerbCa, kAdjCa, kInteraction, kTermCount };

std::string_view TermName(size_t term);

struct Coefficient {
  double b = 0;
  double se = 0;
  double t = 0;
  bool degenerate = false;  // SE of zero; t reported as 0
};

struct ContrastFit {
  std::array<Coefficient, kTermCount> terms;
  size_t n = 0;
  double residual_variance = 0;
  std::vector<double> residuals;
};

// OLS on intercept, verb CA, adjective CA and their product, with each
// factor coded +0.5 for High and -0.5 for Low; facilitation by High CA gives
// a negative B. Throws kInsufficientData below 5 observations and
// kSingularDesign for a rank-deficient design.
ContrastFit FitContrasts(std::span<const Observation> obs);

// The same model on one mean log value per subject and cell.
ContrastFit FitBySubject(std::span<const Observation> obs);

// Asymptotic upper tail of the Kolmogorov distribution.
double KolmogorovSurvival(double lambda);

struct KsResult {
  size_t n = 0;
  double d = 0;
  double p = 1;
};

// One-sample KS against a normal with the sample mean and SD. Throws
// kInsufficientData below 5 values or with zero variance.
KsResult KsNormality(std::span<const double> values);

struct MeasureAnalysis {
  size_t measure = kFfd;
  ContrastFit trials;
  std::optional<ContrastFit> subjects;
  std::optional<KsResult> ks;
  std::vector<std::string> notes;
};

// Fits every measure with at least 5 observations.
std::vector<MeasureAnalysis> AnalyzeMeasures(std::span<const MeasureRow> rows);

// measure, condition, n, mean, se ("NA" when absent).
void WriteSummaryTsv(std::ostream &out, std::span<const CellSummary> cells);

// measure, model (trial or subject), term, B, SE, t, flag.
void WriteCoefficientsTsv(std::ostream &out,
                          std::span<const MeasureAnalysis> analyses);

// measure, n, D, p.
void WriteNormalityTsv(std::ostream &out, std::span<const MeasureAnalysis> analyses);

}  // namespace coocsem

#endif  // COOCSEM_ANALYSIS_H_
