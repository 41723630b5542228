#include "sigscore/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "sigscore/rng.hpp"
#include "sigscore/text.hpp"

namespace sigscore {

namespace {

void require_finite(const Eigen::MatrixXd& data) {
  if (!data.allFinite()) {
    throw std::invalid_argument("data contains non-finite values");
  }
}

void fix_column_signs(Eigen::MatrixXd& scores) {
  for (Eigen::Index c = 0; c < scores.cols(); ++c) {
    Eigen::Index argmax = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
      const double magnitude = std::abs(scores(r, c));
      if (magnitude > best) {
        best = magnitude;
        argmax = r;
      }
    }
    if (scores(argmax, c) < 0.0) {
      scores.col(c) *= -1.0;
    }
  }
}

struct Spectrum {
  Eigen::MatrixXd scores;       // n x r, ordered by decreasing eigenvalue
  Eigen::VectorXd eigenvalues;  // r entries, decreasing, clamped at zero
  double total_variance = 0.0;
};

// Principal-component scores via the covariance matrix when p <= n and the
// Gram matrix otherwise; both give the same nonzero spectrum.
Spectrum pca_spectrum(const Eigen::MatrixXd& data) {
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  if (n < 2) {
    throw std::invalid_argument("PCA requires at least 2 samples");
  }
  require_finite(data);

  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  const double denom = static_cast<double>(n - 1);

  Spectrum spectrum;
  spectrum.total_variance = centered.squaredNorm() / denom;
  if (spectrum.total_variance == 0.0) {
    throw std::invalid_argument("PCA is undefined for zero-variance data");
  }

  if (p <= n) {
    const Eigen::MatrixXd cov = centered.transpose() * centered / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const Eigen::Index r = p;
    spectrum.eigenvalues.resize(r);
    spectrum.scores.resize(n, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      const Eigen::Index src = r - 1 - i;  // ascending -> descending
      spectrum.eigenvalues(i) = std::max(0.0, solver.eigenvalues()(src));
      spectrum.scores.col(i) = centered * solver.eigenvectors().col(src);
    }
  } else {
    const Eigen::MatrixXd gram = centered * centered.transpose() / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    const Eigen::Index r = n;
    spectrum.eigenvalues.resize(r);
    spectrum.scores.resize(n, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      const Eigen::Index src = r - 1 - i;
      const double eigenvalue = std::max(0.0, solver.eigenvalues()(src));
      spectrum.eigenvalues(i) = eigenvalue;
      // Gram eigenvector u maps to the score column sqrt(lambda (n-1)) u.
      spectrum.scores.col(i) =
          std::sqrt(eigenvalue * denom) * solver.eigenvectors().col(src);
    }
  }
  fix_column_signs(spectrum.scores);
  return spectrum;
}

double squared_distance(const Eigen::MatrixXd& data, Eigen::Index i, Eigen::Index j) {
  return (data.row(i) - data.row(j)).squaredNorm();
}

}  // namespace

PcaResult pca_adaptive(const Eigen::MatrixXd& data, double variance_target) {
  if (variance_target <= 0.0 || variance_target > 1.0) {
    throw std::invalid_argument("variance target must lie in (0, 1]");
  }
  Spectrum spectrum = pca_spectrum(data);
  PcaResult result;
  double cumulative = 0.0;
  Eigen::Index q = 0;
  while (q < spectrum.eigenvalues.size()) {
    cumulative += spectrum.eigenvalues(q);
    ++q;
    if (cumulative / spectrum.total_variance >= variance_target) {
      break;
    }
  }
  result.components = static_cast<int>(q);
  result.explained = std::min(1.0, cumulative / spectrum.total_variance);
  result.projected = spectrum.scores.leftCols(q);
  return result;
}

Eigen::MatrixXd pca2(const Eigen::MatrixXd& data) {
  Spectrum spectrum = pca_spectrum(data);
  Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(data.rows(), 2);
  const Eigen::Index available = std::min<Eigen::Index>(2, spectrum.scores.cols());
  projected.leftCols(available) = spectrum.scores.leftCols(available);
  return projected;
}

Clustering kmeans(const Eigen::MatrixXd& data, int k, std::uint64_t seed) {
  const Eigen::Index n = data.rows();
  if (k < 1 || static_cast<Eigen::Index>(k) > n) {
    throw std::invalid_argument("kmeans requires 1 <= k <= n");
  }
  require_finite(data);
  Rng rng(seed);

  // k-means++ seeding: first center uniform, then distance-squared sampling.
  Eigen::MatrixXd centroids(k, data.cols());
  std::vector<double> min_dist(static_cast<std::size_t>(n),
                               std::numeric_limits<double>::infinity());
  Eigen::Index first = static_cast<Eigen::Index>(
      rng.uniform_index(static_cast<std::uint64_t>(n)));
  centroids.row(0) = data.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = (data.row(i) - centroids.row(c - 1)).squaredNorm();
      min_dist[static_cast<std::size_t>(i)] =
          std::min(min_dist[static_cast<std::size_t>(i)], d);
      total += min_dist[static_cast<std::size_t>(i)];
    }
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double running = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        running += min_dist[static_cast<std::size_t>(i)];
        if (running >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      // all points coincide with existing centers
      chosen = static_cast<Eigen::Index>(
          rng.uniform_index(static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = data.row(chosen);
  }

  Clustering result;
  result.k = k;
  result.assignments.assign(static_cast<std::size_t>(n), 0);

  constexpr int kMaxIterations = 300;
  constexpr double kShiftTolerance = 1e-4;
  for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (data.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_dist) {
          best_dist = d;
          best = c;
        }
      }
      result.assignments[static_cast<std::size_t>(i)] = best;
      inertia += best_dist;
    }
    result.inertia_history.push_back(inertia);
    result.inertia = inertia;

    Eigen::MatrixXd updated = Eigen::MatrixXd::Zero(k, data.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = result.assignments[static_cast<std::size_t>(i)];
      updated.row(c) += data.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    double max_shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) {
        updated.row(c) = centroids.row(c);  // empty cluster keeps its centroid
        continue;
      }
      updated.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      max_shift = std::max(max_shift, (updated.row(c) - centroids.row(c)).norm());
    }
    centroids = updated;
    if (max_shift < kShiftTolerance) {
      break;
    }
  }

  // Final assignment against the settled centroids.
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double d = (data.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_dist) {
        best_dist = d;
        best = c;
      }
    }
    result.assignments[static_cast<std::size_t>(i)] = best;
    inertia += best_dist;
  }
  result.inertia_history.push_back(inertia);
  result.inertia = inertia;
  result.centroids = std::move(centroids);
  return result;
}

namespace {

// Conditional Gaussian affinities for one row, with the bandwidth found by
// bisection on the Shannon entropy (target log(perplexity), tolerance 1e-5).
void calibrate_row(const Eigen::MatrixXd& sq_dist, Eigen::Index i,
                   double log_perplexity, Eigen::MatrixXd& conditional) {
  const Eigen::Index n = sq_dist.rows();
  double beta = 1.0;
  double beta_min = -std::numeric_limits<double>::infinity();
  double beta_max = std::numeric_limits<double>::infinity();

  Eigen::VectorXd row(n);
  for (int attempt = 0; attempt < 50; ++attempt) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      row(j) = j == i ? 0.0 : std::exp(-beta * sq_dist(i, j));
      sum += row(j);
    }
    double entropy = 0.0;
    if (sum > 0.0) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (row(j) > 0.0) {
          const double p = row(j) / sum;
          entropy -= p * std::log(p);
        }
      }
    }
    const double diff = entropy - log_perplexity;
    if (std::abs(diff) < 1e-5) {
      break;
    }
    if (diff > 0.0) {
      beta_min = beta;
      beta = std::isinf(beta_max) ? beta * 2.0 : 0.5 * (beta + beta_max);
    } else {
      beta_max = beta;
      beta = std::isinf(beta_min) ? beta * 0.5 : 0.5 * (beta + beta_min);
    }
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    sum += row(j);
  }
  if (sum <= 0.0) {
    throw std::runtime_error("t-SNE affinity calibration collapsed");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    conditional(i, j) = row(j) / sum;
  }
}

double kl_divergence(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (i != j && p(i, j) > 0.0) {
        kl += p(i, j) * std::log(p(i, j) / q(i, j));
      }
    }
  }
  return kl;
}

}  // namespace

namespace {

Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& data,
                                       double perplexity) {
  const Eigen::Index n = data.rows();
  if (n < 5) {
    throw std::invalid_argument("tsne requires at least 5 samples");
  }
  if (perplexity <= 0.0 || perplexity >= static_cast<double>(n - 1) / 3.0) {
    throw std::invalid_argument("perplexity must lie in (0, (n-1)/3)");
  }
  require_finite(data);

  Eigen::MatrixXd sq_dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sq_dist(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = squared_distance(data, i, j);
      sq_dist(i, j) = d;
      sq_dist(j, i) = d;
    }
  }

  Eigen::MatrixXd conditional = Eigen::MatrixXd::Zero(n, n);
  const double log_perplexity = std::log(perplexity);
  for (Eigen::Index i = 0; i < n; ++i) {
    calibrate_row(sq_dist, i, log_perplexity, conditional);
  }
  return conditional;
}

}  // namespace

Eigen::MatrixXd tsne_conditional_affinities(const Eigen::MatrixXd& data,
                                            double perplexity) {
  return conditional_affinities(data, perplexity);
}

TsneResult tsne(const Eigen::MatrixXd& data, const TsneOptions& options) {
  const Eigen::Index n = data.rows();
  Eigen::MatrixXd conditional = conditional_affinities(data, options.perplexity);

  Eigen::MatrixXd p = conditional + conditional.transpose();
  p /= p.sum();
  p = p.cwiseMax(1e-12);
  p.diagonal().setZero();

  Rng rng(options.seed);
  Eigen::MatrixXd y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i, 0) = 1e-4 * rng.normal();
    y(i, 1) = 1e-4 * rng.normal();
  }

  Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(n, 2);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
  Eigen::MatrixXd q(n, n);
  Eigen::MatrixXd weights(n, n);
  Eigen::MatrixXd gradient(n, 2);

  TsneResult result;
  const double exaggeration = options.early_exaggeration;

  for (int iteration = 0; iteration < options.iterations; ++iteration) {
    const bool exaggerated = iteration < options.exaggeration_iterations;
    // Student-t affinities in the embedding.
    double weight_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      weights(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double w = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
        weights(i, j) = w;
        weights(j, i) = w;
        weight_sum += 2.0 * w;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        q(i, j) = i == j ? 0.0 : std::max(weights(i, j) / weight_sum, 1e-12);
      }
    }

    gradient.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) {
          continue;
        }
        const double pij = exaggerated ? exaggeration * p(i, j) : p(i, j);
        const double coefficient = 4.0 * (pij - q(i, j)) * weights(i, j);
        gradient.row(i) += coefficient * (y.row(i) - y.row(j));
      }
    }

    const double momentum = iteration < options.momentum_switch
                                ? options.initial_momentum
                                : options.final_momentum;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        const bool same_sign = (gradient(i, d) > 0.0) == (velocity(i, d) > 0.0);
        gains(i, d) = same_sign ? std::max(gains(i, d) * 0.8, 0.01)
                                : gains(i, d) + 0.2;
        velocity(i, d) = momentum * velocity(i, d) -
                         options.learning_rate * gains(i, d) * gradient(i, d);
      }
    }
    y += velocity;
    y.rowwise() -= y.colwise().mean();

    if (!exaggerated) {
      result.kl_history.push_back(kl_divergence(p, q));
    }
  }

  // KL at the final layout.
  double weight_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    weights(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double w = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
      weights(i, j) = w;
      weights(j, i) = w;
      weight_sum += 2.0 * w;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      q(i, j) = i == j ? 0.0 : std::max(weights(i, j) / weight_sum, 1e-12);
    }
  }
  result.final_kl = kl_divergence(p, q);
  result.coords = std::move(y);
  return result;
}

Embedding pca_adaptive_tsne(const Eigen::MatrixXd& data, double variance_target,
                            const TsneOptions& options) {
  const PcaResult pca = pca_adaptive(data, variance_target);
  const TsneResult layout = tsne(pca.projected, options);
  Embedding embedding;
  embedding.coords = layout.coords;
  embedding.pca_components_kept = pca.components;
  embedding.variance_explained = pca.explained;
  embedding.final_kl = layout.final_kl;
  embedding.seed = options.seed;
  return embedding;
}

void write_embedding_csv(const std::filesystem::path& path,
                         const Eigen::MatrixXd& coords,
                         const std::vector<std::string>& ids,
                         const std::vector<std::string>& labels) {
  if (static_cast<std::size_t>(coords.rows()) != ids.size() ||
      ids.size() != labels.size()) {
    throw std::invalid_argument("embedding CSV requires one id and label per row");
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open embedding output file: " + path.string());
  }
  out << "id,x,y,label\n";
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    out << csv_field(ids[static_cast<std::size_t>(i)]) << ','
        << format_double(coords(i, 0)) << ',' << format_double(coords(i, 1)) << ','
        << csv_field(labels[static_cast<std::size_t>(i)]) << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed writing embedding output file: " + path.string());
  }
}

}  // namespace sigscore
