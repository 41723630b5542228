#include "sigscore/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "sigscore/parallel.hpp"
#include "sigscore/signature.hpp"
#include "sigscore/text.hpp"

namespace sigscore {

namespace {

// Compensated (Kahan) accumulator: the signature spectrum spans many orders
// of magnitude and sample counts reach the thousands.
class KahanAccumulator {
 public:
  explicit KahanAccumulator(std::size_t size) : sum_(size, 0.0), comp_(size, 0.0) {}

  void add(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double y = values[i] - comp_[i];
      const double t = sum_[i] + y;
      comp_[i] = (t - sum_[i]) - y;
      sum_[i] = t;
    }
  }

  std::vector<double> mean(std::size_t count) && {
    for (double& value : sum_) {
      value /= static_cast<double>(count);
    }
    return std::move(sum_);
  }

 private:
  std::vector<double> sum_;
  std::vector<double> comp_;
};

void require_nonempty_same_dim(std::span<const Stream> streams) {
  if (streams.empty()) {
    throw std::invalid_argument("mean_signature requires a nonempty sample set");
  }
  const int dim = streams.front().dim;
  for (const Stream& stream : streams) {
    if (stream.dim != dim) {
      throw std::invalid_argument("mean_signature requires streams of equal dimension");
    }
  }
}

void require_comparable(const MeanSignature& a, const MeanSignature& b) {
  if (a.kind != b.kind || a.dim != b.dim || a.order != b.order) {
    throw std::invalid_argument("mean signatures differ in kind, dim, or order");
  }
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("mean signatures differ in component count");
  }
}

double kahan_total(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double value : values) {
    const double y = value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

MeanSignature mean_signature(std::span<const Stream> streams, int order,
                             SignatureKind kind) {
  require_nonempty_same_dim(streams);
  const int dim = streams.front().dim;
  const std::size_t width = sig_dim(dim, order);
  const std::size_t m = streams.size();

  KahanAccumulator acc(width);
  const std::size_t block = static_cast<std::size_t>(thread_count());
  std::vector<std::vector<double>> buffers(std::min(block, m));
  for (std::size_t start = 0; start < m; start += buffers.size()) {
    const std::size_t end = std::min(m, start + buffers.size());
    parallel_for(end - start, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const Stream& stream = streams[start + i];
        buffers[i] = flatten(kind == SignatureKind::signature
                                 ? stream_signature(stream, order)
                                 : stream_log_signature(stream, order));
      }
    });
    for (std::size_t i = 0; i < end - start; ++i) {
      acc.add(buffers[i]);
    }
  }
  return MeanSignature{kind, dim, order, std::move(acc).mean(m), m};
}

std::pair<MeanSignature, MeanSignature> mean_signature_pair(
    std::span<const Stream> streams, int order) {
  require_nonempty_same_dim(streams);
  const int dim = streams.front().dim;
  const std::size_t width = sig_dim(dim, order);
  const std::size_t m = streams.size();

  KahanAccumulator sig_acc(width);
  KahanAccumulator log_acc(width);
  const std::size_t block = static_cast<std::size_t>(thread_count());
  std::vector<std::pair<std::vector<double>, std::vector<double>>> buffers(
      std::min(block, m));
  for (std::size_t start = 0; start < m; start += buffers.size()) {
    const std::size_t end = std::min(m, start + buffers.size());
    parallel_for(end - start, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const TruncatedTensor sig = stream_signature(streams[start + i], order);
        buffers[i].first = flatten(sig);
        buffers[i].second = flatten(tensor_log(sig));
      }
    });
    for (std::size_t i = 0; i < end - start; ++i) {
      sig_acc.add(buffers[i].first);
      log_acc.add(buffers[i].second);
    }
  }
  return {MeanSignature{SignatureKind::signature, dim, order,
                        std::move(sig_acc).mean(m), m},
          MeanSignature{SignatureKind::log_signature, dim, order,
                        std::move(log_acc).mean(m), m}};
}

Score score(const MeanSignature& original, const MeanSignature& synthetic) {
  require_comparable(original, synthetic);
  const std::size_t n = original.values.size();
  std::vector<double> sq(n);
  std::vector<double> ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = synthetic.values[i] - original.values[i];
    sq[i] = diff * diff;
    ab[i] = std::abs(diff);
  }
  Score result;
  result.rmse = std::sqrt(kahan_total(sq) / static_cast<double>(n));
  result.mae = kahan_total(ab) / static_cast<double>(n);
  return result;
}

ScoreReport score_report(std::span<const Stream> original,
                         std::span<const Stream> synthetic, int order,
                         const Preprocessing& preprocessing) {
  const auto [orig_sig, orig_log] = mean_signature_pair(original, order);
  const auto [synth_sig, synth_log] = mean_signature_pair(synthetic, order);
  const Score sig = score(orig_sig, synth_sig);
  const Score log = score(orig_log, synth_log);
  ScoreReport report;
  report.rmse_sig = sig.rmse;
  report.mae_sig = sig.mae;
  report.rmse_logsig = log.rmse;
  report.mae_logsig = log.mae;
  report.order = order;
  report.m_original = original.size();
  report.m_synthetic = synthetic.size();
  report.preprocessing = preprocessing;
  return report;
}

std::string score_report_json(const ScoreReport& report) {
  nlohmann::ordered_json doc;
  doc["rmse_sig"] = report.rmse_sig;
  doc["mae_sig"] = report.mae_sig;
  doc["rmse_logsig"] = report.rmse_logsig;
  doc["mae_logsig"] = report.mae_logsig;
  doc["order"] = report.order;
  doc["sample_counts"] = {{"original", report.m_original},
                          {"synthetic", report.m_synthetic}};
  doc["preprocessing"] = {{"size", report.preprocessing.size},
                          {"grayscale", report.preprocessing.grayscale},
                          {"column_mode", report.preprocessing.column_mode}};
  return doc.dump(2) + "\n";
}

void spectrum_export(const MeanSignature& original, const MeanSignature& synthetic,
                     const std::filesystem::path& path) {
  require_comparable(original, synthetic);
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open spectrum output file: " + path.string());
  }
  out << "index,original,synthetic\n";
  for (std::size_t i = 0; i < original.values.size(); ++i) {
    out << i << ',' << format_double(original.values[i]) << ','
        << format_double(synthetic.values[i]) << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed writing spectrum output file: " + path.string());
  }
}

}  // namespace sigscore
