#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sigscore {

struct PcaResult {
  Eigen::MatrixXd projected;  // n x components
  int components = 0;
  double explained = 0.0;  // fraction of total variance kept, in (0, 1]
};

// Mean-centers the data and projects onto the smallest leading set of
// principal axes whose cumulative explained variance reaches the target.
// The eigenproblem is solved on the smaller of the covariance and Gram
// matrices; each score column's sign is fixed so its largest-magnitude
// entry is positive.
PcaResult pca_adaptive(const Eigen::MatrixXd& data, double variance_target);

// Fixed two-component projection; zero-padded when the data has rank < 2.
Eigen::MatrixXd pca2(const Eigen::MatrixXd& data);

struct Clustering {
  std::vector<int> assignments;  // n values in [0, k)
  Eigen::MatrixXd centroids;     // k x q
  double inertia = 0.0;
  int k = 0;
  std::vector<double> inertia_history;  // after each assignment step
};

// Lloyd iterations from a k-means++ start, stopping when the largest
// centroid shift drops below 1e-4 or after 300 iterations. Deterministic
// for a given seed.
Clustering kmeans(const Eigen::MatrixXd& data, int k, std::uint64_t seed);

struct TsneOptions {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch = 250;
  std::uint64_t seed = 0;
};

struct TsneResult {
  Eigen::MatrixXd coords;  // n x 2
  double final_kl = 0.0;
  std::vector<double> kl_history;  // per iteration once exaggeration ends
};

// Exact pairwise t-SNE: Gaussian bandwidths calibrated by bisection to the
// target perplexity (entropy tolerance 1e-5), symmetrized P, Student-t Q,
// gradient descent with gains, momentum, and early exaggeration.
TsneResult tsne(const Eigen::MatrixXd& data, const TsneOptions& options);

// Row-conditional Gaussian affinities after perplexity calibration: row i
// sums to 1 and has Shannon perplexity close to the target. Exposed for
// diagnostics.
Eigen::MatrixXd tsne_conditional_affinities(const Eigen::MatrixXd& data,
                                            double perplexity);

struct Embedding {
  Eigen::MatrixXd coords;  // n x 2
  int pca_components_kept = 0;
  double variance_explained = 0.0;
  double final_kl = 0.0;
  std::uint64_t seed = 0;
};

// PCA at the variance target (0.99 by default in the CLI), then t-SNE.
Embedding pca_adaptive_tsne(const Eigen::MatrixXd& data, double variance_target,
                            const TsneOptions& options);

// CSV with header id,x,y,label; one row per sample.
void write_embedding_csv(const std::filesystem::path& path,
                         const Eigen::MatrixXd& coords,
                         const std::vector<std::string>& ids,
                         const std::vector<std::string>& labels);

}  // namespace sigscore
