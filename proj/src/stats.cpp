#include "sigscore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "sigscore/special_functions.hpp"

namespace sigscore {

namespace {

double median(std::vector<double> values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) {
    return values[n / 2];
  }
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

// Central moments about the mean with biased (1/n) normalization.
struct Moments {
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

Moments central_moments(std::span<const double> x) {
  const double mu = mean(x);
  Moments m;
  for (double value : x) {
    const double d = value - mu;
    const double d2 = d * d;
    m.m2 += d2;
    m.m3 += d2 * d;
    m.m4 += d2 * d2;
  }
  const double n = static_cast<double>(x.size());
  m.m2 /= n;
  m.m3 /= n;
  m.m4 /= n;
  return m;
}

// Skewness z-score (D'Agostino 1970).
double skew_z(double g1, double n) {
  const double y = g1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
  const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                       ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
  const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
  const double alpha = std::sqrt(2.0 / (w2 - 1.0));
  const double t = (y == 0.0 ? 1.0 : y) / alpha;
  return delta * std::log(t + std::sqrt(t * t + 1.0));
}

// Kurtosis z-score (Anscombe-Glynn 1983).
double kurtosis_z(double b2, double n) {
  const double e = 3.0 * (n - 1.0) / (n + 1.0);
  const double var = 24.0 * n * (n - 2.0) * (n - 3.0) /
                     ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
  const double x = (b2 - e) / std::sqrt(var);
  const double sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                            std::sqrt(6.0 * (n + 3.0) * (n + 5.0) /
                                      (n * (n - 2.0) * (n - 3.0)));
  const double a =
      6.0 + 8.0 / sqrt_beta1 *
                (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
  const double term1 = 1.0 - 2.0 / (9.0 * a);
  const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
  if (denom == 0.0) {
    throw std::runtime_error("kurtosis z-score undefined for this sample");
  }
  const double term2 =
      std::copysign(std::cbrt((1.0 - 2.0 / a) / std::abs(denom)), denom);
  return (term1 - term2) / std::sqrt(2.0 / (9.0 * a));
}

// Mid-ranks of the pooled sample plus the tie term sum(t^3 - t).
std::pair<std::vector<double>, double> midranks(std::span<const double> pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n);
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[idx[j + 1]] == pooled[idx[i]]) {
      ++j;
    }
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) {
      ranks[idx[k]] = rank;
    }
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  return {std::move(ranks), tie_term};
}

}  // namespace

double mean_intensity(const Image& image) {
  if (image.pixels.empty()) {
    throw std::invalid_argument("mean_intensity requires a nonempty image");
  }
  return mean(image.pixels);
}

std::pair<double, double> levene(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("levene requires at least 2 values per group");
  }
  const double med_a = median({a.begin(), a.end()});
  const double med_b = median({b.begin(), b.end()});
  std::vector<double> za(a.size());
  std::vector<double> zb(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    za[i] = std::abs(a[i] - med_a);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    zb[i] = std::abs(b[i] - med_b);
  }
  const double zbar_a = mean(za);
  const double zbar_b = mean(zb);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double total = na + nb;
  const double zbar = (na * zbar_a + nb * zbar_b) / total;

  const double between = na * (zbar_a - zbar) * (zbar_a - zbar) +
                         nb * (zbar_b - zbar) * (zbar_b - zbar);
  double within = 0.0;
  for (double z : za) {
    within += (z - zbar_a) * (z - zbar_a);
  }
  for (double z : zb) {
    within += (z - zbar_b) * (z - zbar_b);
  }

  const double df2 = total - 2.0;
  if (within == 0.0) {
    if (between == 0.0) {
      return {0.0, 1.0};  // every deviation vanishes: nothing to compare
    }
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  const double w = df2 * between / within;
  return {w, f_sf(w, 1.0, df2)};
}

std::pair<double, double> normality(std::span<const double> x) {
  if (x.size() < 20) {
    throw std::invalid_argument("normality test requires at least 20 samples");
  }
  const Moments m = central_moments(x);
  if (m.m2 == 0.0) {
    throw std::invalid_argument("normality test undefined for zero-variance sample");
  }
  const double n = static_cast<double>(x.size());
  const double g1 = m.m3 / std::pow(m.m2, 1.5);
  const double b2 = m.m4 / (m.m2 * m.m2);
  const double zs = skew_z(g1, n);
  const double zk = kurtosis_z(b2, n);
  const double k2 = zs * zs + zk * zk;
  return {k2, chi_square_sf(k2, 2.0)};
}

std::pair<double, double> kruskal_wallis(std::span<const double> a,
                                         std::span<const double> b) {
  if (a.empty() || b.empty() || a.size() + b.size() < 3) {
    throw std::invalid_argument(
        "kruskal_wallis requires nonempty groups and at least 3 values");
  }
  std::vector<double> pooled;
  pooled.reserve(a.size() + b.size());
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());

  const auto [ranks, tie_term] = midranks(pooled);
  const double m = static_cast<double>(pooled.size());
  const double tie_correction = 1.0 - tie_term / (m * m * m - m);
  if (tie_correction == 0.0) {
    throw std::invalid_argument(
        "kruskal_wallis is undefined when all pooled values are identical");
  }

  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    rank_sum_a += ranks[i];
  }
  double rank_sum_b = 0.0;
  for (std::size_t i = a.size(); i < pooled.size(); ++i) {
    rank_sum_b += ranks[i];
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double h = 12.0 / (m * (m + 1.0)) *
                 (rank_sum_a * rank_sum_a / na + rank_sum_b * rank_sum_b / nb) -
             3.0 * (m + 1.0);
  h /= tie_correction;
  return {h, chi_square_sf(h, 1.0)};
}

Interpretation interpret(bool t1_accept, bool t2_accept, bool t3_accept) {
  Interpretation result;
  result.codes += t1_accept ? "(a)" : "(b)";
  result.codes += t2_accept ? "(c)" : "(d)";
  result.codes += t3_accept ? "(e)" : "(f)";

  std::string prose;
  if (t1_accept) {
    prose +=
        "(a) Variances are equal; a necessary but not sufficient condition for "
        "the two populations to share a distribution. ";
  } else {
    prose +=
        "(b) Equal variances are rejected, so the descriptor alone cannot "
        "establish that both populations come from the same distribution. ";
  }
  if (t2_accept) {
    prose +=
        "(c) The synthetic descriptor still looks Gaussian: the generator output "
        "remains close to its initial noise distribution and likely needs more "
        "training before the samples show real fidelity. ";
  } else {
    prose +=
        "(d) The synthetic descriptor is no longer Gaussian: the generator has "
        "moved away from its initial noise and may be close to the target "
        "distribution. ";
  }
  if (t3_accept) {
    if (t1_accept) {
      prose +=
          "(e) Goodness of fit holds together with equal variances: there is "
          "evidence that both populations originate from the same distribution "
          "under this descriptor.";
    } else {
      prose +=
          "(e) Goodness of fit holds but equal variances do not, so the "
          "synthetic population can only be called a good approximation of the "
          "original.";
    }
  } else {
    prose +=
        "(f) Goodness of fit is rejected: there is not enough evidence that the "
        "two populations share a distribution.";
  }
  result.prose = std::move(prose);
  return result;
}

StatReport run_stat_pipeline(std::span<const double> original,
                             std::span<const double> synthetic, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("alpha must lie strictly between 0 and 1");
  }
  StatReport report;
  report.alpha = alpha;
  report.n_original = original.size();
  report.n_synthetic = synthetic.size();

  const auto [w, wp] = levene(original, synthetic);
  report.t1_levene = {w, wp, wp >= alpha};
  const auto [k2s, k2sp] = normality(synthetic);
  report.t2_normality_synthetic = {k2s, k2sp, k2sp >= alpha};
  const auto [k2o, k2op] = normality(original);
  report.t2_normality_original = {k2o, k2op, k2op >= alpha};
  const auto [h, hp] = kruskal_wallis(original, synthetic);
  report.t3_kruskal_wallis = {h, hp, hp >= alpha};

  report.interpretation = interpret(report.t1_levene.accept,
                                    report.t2_normality_synthetic.accept,
                                    report.t3_kruskal_wallis.accept);
  return report;
}

namespace {

nlohmann::ordered_json test_json(const TestResult& result) {
  return {{"statistic", result.statistic},
          {"p_value", result.p_value},
          {"accept", result.accept}};
}

}  // namespace

std::string stat_report_json(const StatReport& report) {
  nlohmann::ordered_json doc;
  doc["t1_levene"] = test_json(report.t1_levene);
  doc["t2_normality_synthetic"] = test_json(report.t2_normality_synthetic);
  doc["t2_normality_original"] = test_json(report.t2_normality_original);
  doc["t3_kruskal_wallis"] = test_json(report.t3_kruskal_wallis);
  doc["interpretation"] = {{"codes", report.interpretation.codes},
                           {"prose", report.interpretation.prose}};
  doc["alpha"] = report.alpha;
  doc["sample_counts"] = {{"original", report.n_original},
                          {"synthetic", report.n_synthetic}};
  return doc.dump(2) + "\n";
}

}  // namespace sigscore
