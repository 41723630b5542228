#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigscore/embed.hpp"
#include "sigscore/ingest.hpp"
#include "sigscore/metrics.hpp"
#include "sigscore/parallel.hpp"
#include "sigscore/signature.hpp"
#include "sigscore/stats.hpp"
#include "sigscore/text.hpp"

namespace {

using sigscore::LoadedSet;
using sigscore::LoadOptions;

struct CommonOptions {
  std::string original_dir;
  std::string synthetic_dir;
  int order = 3;
  int size = 64;
  double alpha = 0.05;
  double perplexity = 30.0;
  double variance_target = 0.99;
  int iterations = 1000;
  int k = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string kind = "signature";
  bool column_mode = false;
  bool skip_corrupt = false;
  bool pretty = false;
  int threads = 0;
};

void add_threads_flag(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--threads", options.threads,
                  "Worker threads (0 = auto); never changes numerical output")
      ->envname("SIGSCORE_THREADS");
}

void add_ingest_flags(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--size", options.size, "Square resize target")
      ->default_val(64)
      ->check(CLI::Range(2, 4096));
  cmd->add_flag("--column-mode", options.column_mode,
                "Use image columns as stream steps instead of rows");
  cmd->add_flag("--skip-corrupt", options.skip_corrupt,
                "Skip undecodable files instead of aborting");
}

LoadedSet load_nonempty(const std::string& dir, const CommonOptions& options) {
  LoadOptions load_options;
  load_options.size = options.size;
  load_options.skip_corrupt = options.skip_corrupt;
  LoadedSet set = sigscore::load_directory(dir, load_options);
  for (const auto& path : set.skipped) {
    std::cerr << "warning: skipped corrupt file " << path << "\n";
  }
  if (set.images.empty()) {
    throw std::runtime_error("no decodable images in directory: " + dir);
  }
  return set;
}

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) {
    throw std::runtime_error("cannot open output file: " + out);
  }
  file << text;
  if (!file) {
    throw std::runtime_error("failed writing output file: " + out);
  }
}

std::filesystem::path sidecar_path(const std::string& out) {
  std::filesystem::path path(out);
  path.replace_extension(".json");
  return path;
}

int run_score(const CommonOptions& options) {
  const LoadedSet original = load_nonempty(options.original_dir, options);
  const LoadedSet synthetic = load_nonempty(options.synthetic_dir, options);
  const auto original_streams = sigscore::to_streams(original.images, options.column_mode);
  const auto synthetic_streams =
      sigscore::to_streams(synthetic.images, options.column_mode);

  sigscore::Preprocessing preprocessing{options.size, true, options.column_mode};
  const sigscore::ScoreReport report = sigscore::score_report(
      original_streams, synthetic_streams, options.order, preprocessing);

  if (options.pretty) {
    std::cout << "metric            value\n"
              << "rmse_sig          " << sigscore::format_double(report.rmse_sig) << "\n"
              << "mae_sig           " << sigscore::format_double(report.mae_sig) << "\n"
              << "rmse_logsig       " << sigscore::format_double(report.rmse_logsig) << "\n"
              << "mae_logsig        " << sigscore::format_double(report.mae_logsig) << "\n"
              << "order             " << report.order << "\n"
              << "samples           " << report.m_original << " original, "
              << report.m_synthetic << " synthetic\n";
  }
  const std::string json = sigscore::score_report_json(report);
  if (options.out.empty() && options.pretty) {
    return 0;
  }
  write_or_print(json, options.out);
  return 0;
}

int run_stats(const CommonOptions& options) {
  const auto original =
      sigscore::intensity_descriptors(options.original_dir, options.skip_corrupt);
  const auto synthetic =
      sigscore::intensity_descriptors(options.synthetic_dir, options.skip_corrupt);
  if (original.size() < 20 || synthetic.size() < 20) {
    throw std::runtime_error(
        "the normality test needs at least 20 images per directory (got " +
        std::to_string(original.size()) + " original, " +
        std::to_string(synthetic.size()) + " synthetic)");
  }
  const sigscore::StatReport report =
      sigscore::run_stat_pipeline(original, synthetic, options.alpha);

  if (options.pretty) {
    auto line = [](const char* name, const sigscore::TestResult& r) {
      std::cout << name << "  statistic=" << sigscore::format_double(r.statistic)
                << "  p=" << sigscore::format_double(r.p_value) << "  "
                << (r.accept ? "accept" : "reject") << "\n";
    };
    line("T1 levene          ", report.t1_levene);
    line("T2 normality (syn) ", report.t2_normality_synthetic);
    line("T2 normality (orig)", report.t2_normality_original);
    line("T3 kruskal-wallis  ", report.t3_kruskal_wallis);
    std::cout << "codes: " << report.interpretation.codes << "\n"
              << report.interpretation.prose << "\n";
  }
  const std::string json = sigscore::stat_report_json(report);
  if (options.out.empty() && options.pretty) {
    return 0;
  }
  write_or_print(json, options.out);
  return 0;
}

int run_spectrum(const CommonOptions& options) {
  const LoadedSet original = load_nonempty(options.original_dir, options);
  const LoadedSet synthetic = load_nonempty(options.synthetic_dir, options);
  const auto original_streams = sigscore::to_streams(original.images, options.column_mode);
  const auto synthetic_streams =
      sigscore::to_streams(synthetic.images, options.column_mode);
  const auto kind = options.kind == "log_signature"
                        ? sigscore::SignatureKind::log_signature
                        : sigscore::SignatureKind::signature;
  const auto mean_original =
      sigscore::mean_signature(original_streams, options.order, kind);
  const auto mean_synthetic =
      sigscore::mean_signature(synthetic_streams, options.order, kind);
  const std::string out = options.out.empty() ? "spectrum.csv" : options.out;
  sigscore::spectrum_export(mean_original, mean_synthetic, out);
  return 0;
}

int run_embed(const CommonOptions& options) {
  const LoadedSet original = load_nonempty(options.original_dir, options);
  const LoadedSet synthetic = load_nonempty(options.synthetic_dir, options);

  const std::size_t n = original.images.size() + synthetic.images.size();
  const std::size_t width = static_cast<std::size_t>(options.size) *
                            static_cast<std::size_t>(options.size);
  Eigen::MatrixXd data(n, width);
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  ids.reserve(n);
  labels.reserve(n);
  std::size_t row = 0;
  for (std::size_t set = 0; set < 2; ++set) {
    const LoadedSet& loaded = set == 0 ? original : synthetic;
    const char* label = set == 0 ? "original" : "synthetic";
    for (std::size_t i = 0; i < loaded.images.size(); ++i, ++row) {
      const auto& pixels = loaded.images[i].pixels;
      for (std::size_t c = 0; c < width; ++c) {
        data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = pixels[c];
      }
      ids.push_back(loaded.files[i].string());
      labels.emplace_back(label);
    }
  }

  sigscore::TsneOptions tsne_options;
  tsne_options.perplexity = options.perplexity;
  tsne_options.iterations = options.iterations;
  tsne_options.seed = options.seed;
  const sigscore::Embedding embedding =
      sigscore::pca_adaptive_tsne(data, options.variance_target, tsne_options);

  const std::string out = options.out.empty() ? "embedding.csv" : options.out;
  sigscore::write_embedding_csv(out, embedding.coords, ids, labels);

  nlohmann::ordered_json meta;
  meta["pca_components_kept"] = embedding.pca_components_kept;
  meta["variance_explained"] = embedding.variance_explained;
  meta["seed"] = embedding.seed;
  meta["final_kl"] = embedding.final_kl;
  meta["perplexity"] = options.perplexity;
  meta["iterations"] = options.iterations;
  write_or_print(meta.dump(2) + "\n", sidecar_path(out).string());
  return 0;
}

int run_cluster(const CommonOptions& options) {
  const LoadedSet original = load_nonempty(options.original_dir, options);
  std::vector<const LoadedSet*> sets{&original};
  LoadedSet synthetic;
  if (!options.synthetic_dir.empty()) {
    synthetic = load_nonempty(options.synthetic_dir, options);
    sets.push_back(&synthetic);
  }

  std::size_t n = 0;
  for (const LoadedSet* set : sets) {
    n += set->images.size();
  }
  const std::size_t width = static_cast<std::size_t>(options.size) *
                            static_cast<std::size_t>(options.size);
  Eigen::MatrixXd data(n, width);
  std::vector<std::string> ids;
  ids.reserve(n);
  std::size_t row = 0;
  for (const LoadedSet* set : sets) {
    for (std::size_t i = 0; i < set->images.size(); ++i, ++row) {
      for (std::size_t c = 0; c < width; ++c) {
        data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) =
            set->images[i].pixels[c];
      }
      ids.push_back(set->files[i].string());
    }
  }

  const Eigen::MatrixXd plane = sigscore::pca2(data);
  const sigscore::Clustering clustering = sigscore::kmeans(plane, options.k, options.seed);

  std::vector<std::string> labels;
  labels.reserve(n);
  for (int assignment : clustering.assignments) {
    labels.push_back(std::to_string(assignment));
  }
  const std::string out = options.out.empty() ? "clusters.csv" : options.out;
  sigscore::write_embedding_csv(out, plane, ids, labels);

  nlohmann::ordered_json meta;
  meta["k"] = clustering.k;
  meta["inertia"] = clustering.inertia;
  meta["seed"] = options.seed;
  meta["pca_components_kept"] = 2;
  write_or_print(meta.dump(2) + "\n", sidecar_path(out).string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image-distribution similarity via truncated signature transforms"};
  app.require_subcommand(1);

  CommonOptions options;

  auto* score = app.add_subcommand(
      "score", "RMSE/MAE signature and log-signature scores between two image sets");
  score->add_option("--original", options.original_dir, "Directory of original images")
      ->required();
  score->add_option("--synthetic", options.synthetic_dir, "Directory of synthetic images")
      ->required();
  score->add_option("--order", options.order, "Signature truncation order")
      ->default_val(3)
      ->check(CLI::Range(1, 6));
  score->add_option("--out", options.out, "Write the JSON report here (default: stdout)");
  score->add_flag("--pretty", options.pretty, "Print a human-readable table");
  add_ingest_flags(score, options);
  add_threads_flag(score, options);

  auto* stats = app.add_subcommand(
      "stats", "Levene / normality / Kruskal-Wallis pipeline on mean intensities");
  stats->add_option("--original", options.original_dir, "Directory of original images")
      ->required();
  stats->add_option("--synthetic", options.synthetic_dir, "Directory of synthetic images")
      ->required();
  stats->add_option("--alpha", options.alpha, "Significance level")
      ->default_val(0.05)
      ->check(CLI::Range(1e-9, 0.999999));
  stats->add_option("--out", options.out, "Write the JSON report here (default: stdout)");
  stats->add_flag("--pretty", options.pretty, "Print a human-readable table");
  stats->add_flag("--skip-corrupt", options.skip_corrupt,
                  "Skip undecodable files instead of aborting");
  add_threads_flag(stats, options);

  auto* spectrum = app.add_subcommand(
      "spectrum", "Export the mean (log-)signature spectrum of both sets as CSV");
  spectrum->add_option("--original", options.original_dir, "Directory of original images")
      ->required();
  spectrum->add_option("--synthetic", options.synthetic_dir, "Directory of synthetic images")
      ->required();
  spectrum->add_option("--order", options.order, "Signature truncation order")
      ->default_val(3)
      ->check(CLI::Range(1, 6));
  spectrum->add_option("--kind", options.kind, "signature or log_signature")
      ->default_val("signature")
      ->check(CLI::IsMember({"signature", "log_signature"}));
  spectrum->add_option("--out", options.out, "Output CSV path (default: spectrum.csv)");
  add_ingest_flags(spectrum, options);
  add_threads_flag(spectrum, options);

  auto* embed = app.add_subcommand(
      "embed", "PCA-adaptive t-SNE embedding of both image sets to 2D");
  embed->add_option("--original", options.original_dir, "Directory of original images")
      ->required();
  embed->add_option("--synthetic", options.synthetic_dir, "Directory of synthetic images")
      ->required();
  embed->add_option("--perplexity", options.perplexity, "t-SNE perplexity")
      ->default_val(30.0);
  embed->add_option("--iterations", options.iterations, "t-SNE iterations")
      ->default_val(1000)
      ->check(CLI::Range(1, 100000));
  embed->add_option("--variance-target", options.variance_target,
                    "Cumulative variance kept by the PCA step")
      ->default_val(0.99)
      ->check(CLI::Range(1e-6, 1.0));
  embed->add_option("--seed", options.seed, "Random seed")->default_val(0);
  embed->add_option("--out", options.out, "Output CSV path (default: embedding.csv)");
  add_ingest_flags(embed, options);
  add_threads_flag(embed, options);

  auto* cluster = app.add_subcommand(
      "cluster", "PCA(2) projection plus k-means clustering of an image set");
  cluster->add_option("--original", options.original_dir, "Directory of images")
      ->required();
  cluster->add_option("--synthetic", options.synthetic_dir,
                      "Optional second directory pooled into the clustering");
  cluster->add_option("--k", options.k, "Number of clusters")->required();
  cluster->add_option("--seed", options.seed, "Random seed")->default_val(0);
  cluster->add_option("--out", options.out, "Output CSV path (default: clusters.csv)");
  add_ingest_flags(cluster, options);
  add_threads_flag(cluster, options);

  CLI11_PARSE(app, argc, argv);

  try {
    sigscore::set_thread_count(options.threads);
    if (score->parsed()) {
      return run_score(options);
    }
    if (stats->parsed()) {
      return run_stats(options);
    }
    if (spectrum->parsed()) {
      return run_spectrum(options);
    }
    if (embed->parsed()) {
      return run_embed(options);
    }
    if (cluster->parsed()) {
      return run_cluster(options);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
