#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigscore/image.hpp"

namespace sigscore {

// Mean over every pixel and channel; the descriptor used by the statistical
// pipeline.
double mean_intensity(const Image& image);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool accept = true;  // accept the null hypothesis (p >= alpha)
};

// Levene's test for equality of variances, centered at the group medians
// (Brown-Forsythe). Degenerate inputs where every absolute deviation is zero
// in both groups yield (W=0, p=1); zero within-group spread with distinct
// group levels yields (inf, 0).
std::pair<double, double> levene(std::span<const double> a, std::span<const double> b);

// D'Agostino-Pearson omnibus normality test: combined skewness and kurtosis
// z-scores against chi-square with 2 degrees of freedom. Requires n >= 20.
std::pair<double, double> normality(std::span<const double> x);

// Kruskal-Wallis H for two groups on mid-ranks with tie correction; p from
// chi-square with 1 degree of freedom. Throws when all pooled values are
// identical (tie correction degenerates).
std::pair<double, double> kruskal_wallis(std::span<const double> a,
                                         std::span<const double> b);

// Verdict codes for the three-test pipeline: T1 maps to a/b, T2 to c/d,
// T3 to e/f. The e-verdict wording depends on whether T1 accepted.
struct Interpretation {
  std::string codes;  // e.g. "(b)(d)(e)"
  std::string prose;
};

Interpretation interpret(bool t1_accept, bool t2_accept, bool t3_accept);

struct StatReport {
  TestResult t1_levene;
  TestResult t2_normality_synthetic;
  TestResult t2_normality_original;  // informational
  TestResult t3_kruskal_wallis;
  Interpretation interpretation;
  double alpha = 0.05;
  std::size_t n_original = 0;
  std::size_t n_synthetic = 0;
};

// Runs the full descriptor pipeline on two samples of per-image mean
// intensities.
StatReport run_stat_pipeline(std::span<const double> original,
                             std::span<const double> synthetic, double alpha);

std::string stat_report_json(const StatReport& report);

}  // namespace sigscore
