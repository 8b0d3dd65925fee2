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

#include "coocsem/analysis.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include "coocsem/error.h"
#include "coocsem/text.h"

namespace coocsem {
namespace {

constexpr std::array<std::string_view, kTermCount> kTermNames = {
    "intercept", "verb_ca", "adjective_ca", "interaction"};

Condition ConditionOf(const std::string &label) {
  const auto c = ParseCondition(label);
  if (!c) throw Error(ErrorCode::kInvalidInput, "unknown condition '" + label + "'");
  return *c;
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

std::string Num(const std::optional<double> &v) {
  return v ? text::FormatDouble(*v) : "NA";
}

}  // namespace

CellStats Summarize(std::span<const double> values) {
  CellStats s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(s.n);
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  s.mean = mean;
  s.se = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) /
                       std::sqrt(static_cast<double>(s.n))
                 : 0.0;
  return s;
}

std::vector<CellSummary> SummarizeCells(std::span<const MeasureRow> rows) {
  std::array<std::array<std::vector<double>, 4>, kMeasureCount> cells;
  for (const auto &r : rows) {
    if (!r.value) continue;
    cells[r.measure][static_cast<size_t>(ConditionOf(r.condition))].push_back(*r.value);
  }
  std::vector<CellSummary> out;
  for (size_t m = 0; m < kMeasureCount; ++m) {
    for (size_t c = 0; c < 4; ++c) {
      out.push_back({m, kConditions[c], Summarize(cells[m][c])});
    }
  }
  return out;
}

std::vector<Observation> Observations(std::span<const MeasureRow> rows,
                                      size_t measure) {
  std::vector<Observation> out;
  for (const auto &r : rows) {
    if (r.measure != measure || !r.value) continue;
    if (!(*r.value > 0)) {
      throw Error(ErrorCode::kInvalidInput, "durations must be positive to log");
    }
    out.push_back({std::log(*r.value), ConditionOf(r.condition), r.subject_id,
                   r.item_id});
  }
  return out;
}

std::string_view TermName(size_t term) { return kTermNames.at(term); }

ContrastFit FitContrasts(std::span<const Observation> obs) {
  const auto n = static_cast<Eigen::Index>(obs.size());
  if (obs.size() < 5) {
    throw Error(ErrorCode::kInsufficientData,
                "contrast fit needs at least 5 observations, got " +
                    std::to_string(obs.size()));
  }
  Eigen::MatrixXd x(n, kTermCount);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto &o = obs[static_cast<size_t>(i)];
    const double verb = VerbHigh(o.condition) ? 0.5 : -0.5;
    const double adj = AdjectiveHigh(o.condition) ? 0.5 : -0.5;
    x.row(i) << 1.0, verb, adj, verb * adj;
    y(i) = o.log_value;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < static_cast<Eigen::Index>(kTermCount)) {
    throw Error(ErrorCode::kSingularDesign,
                "design is rank deficient; all four conditions are required");
  }
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - x * beta;
  double rss = resid.squaredNorm();
  // Rounding noise of an exact fit.
  if (rss <= 1e-24 * std::max(1.0, y.squaredNorm())) rss = 0;

  ContrastFit fit;
  fit.n = obs.size();
  const double dof = static_cast<double>(n) - static_cast<double>(kTermCount);
  fit.residual_variance = dof > 0 ? rss / dof : 0.0;
  const Eigen::MatrixXd cov =
      (x.transpose() * x).inverse() * fit.residual_variance;
  for (size_t k = 0; k < kTermCount; ++k) {
    auto &c = fit.terms[k];
    const auto kk = static_cast<Eigen::Index>(k);
    c.b = beta(kk);
    c.se = std::sqrt(std::max(0.0, cov(kk, kk)));
    c.degenerate = c.se == 0;
    c.t = c.degenerate ? 0.0 : c.b / c.se;
  }
  fit.residuals.assign(resid.data(), resid.data() + resid.size());
  return fit;
}

ContrastFit FitBySubject(std::span<const Observation> obs) {
  std::map<std::pair<std::string, size_t>, std::pair<double, size_t>> cells;
  for (const auto &o : obs) {
    auto &acc = cells[{o.subject, static_cast<size_t>(o.condition)}];
    acc.first += o.log_value;
    acc.second += 1;
  }
  std::vector<Observation> means;
  for (const auto &[key, acc] : cells) {
    Observation m;
    m.subject = key.first;
    m.condition = kConditions[key.second];
    m.log_value = acc.first / static_cast<double>(acc.second);
    means.push_back(std::move(m));
  }
  return FitContrasts(means);
}

double KolmogorovSurvival(double lambda) {
  if (lambda <= 0) return 1.0;
  constexpr double kStop = 1e-10;
  double q = 0;
  if (lambda < 1.18) {
    // Complementary series for the CDF; converges fast for small lambda.
    const double c = std::numbers::pi * std::numbers::pi / (8 * lambda * lambda);
    double cdf = 0;
    for (int k = 1;; ++k) {
      const double term = std::exp(-(2 * k - 1) * (2 * k - 1) * c);
      cdf += term;
      if (term < kStop) break;
    }
    cdf *= std::sqrt(2 * std::numbers::pi) / lambda;
    q = 1 - cdf;
  } else {
    for (int k = 1;; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      q += (k % 2 ? 2 : -2) * term;
      if (term < kStop) break;
    }
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult KsNormality(std::span<const double> values) {
  if (values.size() < 5) {
    throw Error(ErrorCode::kInsufficientData,
                "normality test needs at least 5 values, got " +
                    std::to_string(values.size()));
  }
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double mean = 0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  if (!(sd > 0)) throw Error(ErrorCode::kInsufficientData, "values have zero variance");

  KsResult r;
  r.n = x.size();
  for (size_t i = 0; i < x.size(); ++i) {
    const double f = NormalCdf((x[i] - mean) / sd);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    r.d = std::max({r.d, above, below});
  }
  r.p = KolmogorovSurvival(std::sqrt(n) * r.d);
  return r;
}

std::vector<MeasureAnalysis> AnalyzeMeasures(std::span<const MeasureRow> rows) {
  std::vector<MeasureAnalysis> out;
  for (size_t m = 0; m < kMeasureCount; ++m) {
    const auto obs = Observations(rows, m);
    if (obs.size() < 5) continue;
    MeasureAnalysis a;
    a.measure = m;
    a.trials = FitContrasts(obs);
    try {
      a.subjects = FitBySubject(obs);
    } catch (const Error &e) {
      a.notes.push_back(std::string("subject fit: ") + e.what());
    }
    try {
      a.ks = KsNormality(a.trials.residuals);
    } catch (const Error &e) {
      a.notes.push_back(std::string("normality: ") + e.what());
    }
    out.push_back(std::move(a));
  }
  return out;
}

void WriteSummaryTsv(std::ostream &out, std::span<const CellSummary> cells) {
  out << "measure\tcondition\tn\tmean\tse\n";
  for (const auto &c : cells) {
    out << MeasureName(c.measure) << '\t' << ConditionName(c.condition) << '\t'
        << c.stats.n << '\t' << Num(c.stats.mean) << '\t' << Num(c.stats.se) << '\n';
  }
}

void WriteCoefficientsTsv(std::ostream &out,
                          std::span<const MeasureAnalysis> analyses) {
  out << "measure\tmodel\tterm\tB\tSE\tt\tflag\n";
  auto rows = [&](const MeasureAnalysis &a, std::string_view model,
                  const ContrastFit &fit) {
    for (size_t k = 0; k < kTermCount; ++k) {
      const auto &c = fit.terms[k];
      out << MeasureName(a.measure) << '\t' << model << '\t' << TermName(k) << '\t'
          << text::FormatDouble(c.b) << '\t' << text::FormatDouble(c.se) << '\t'
          << text::FormatDouble(c.t) << '\t' << (c.degenerate ? "degenerate" : "")
          << '\n';
    }
  };
  for (const auto &a : analyses) {
    rows(a, "trial", a.trials);
    if (a.subjects) rows(a, "subject", *a.subjects);
  }
}

void WriteNormalityTsv(std::ostream &out, std::span<const MeasureAnalysis> analyses) {
  out << "measure\tn\tD\tp\n";
  for (const auto &a : analyses) {
    if (!a.ks) continue;
    out << MeasureName(a.measure) << '\t' << a.ks->n << '\t'
        << text::FormatDouble(a.ks->d) << '\t' << text::FormatDouble(a.ks->p) << '\n';
  }
}

}  // namespace coocsem
