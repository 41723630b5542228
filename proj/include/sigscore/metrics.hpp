#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sigscore/stream.hpp"

namespace sigscore {

enum class SignatureKind { signature, log_signature };

// Component-wise mean of the flattened (log-)signatures of a sample set.
struct MeanSignature {
  SignatureKind kind = SignatureKind::signature;
  int dim = 0;
  int order = 0;
  std::vector<double> values;
  std::size_t sample_count = 0;
};

struct Score {
  double rmse = 0.0;
  double mae = 0.0;
};

struct Preprocessing {
  int size = 64;
  bool grayscale = true;
  bool column_mode = false;
};

struct ScoreReport {
  double rmse_sig = 0.0;
  double mae_sig = 0.0;
  double rmse_logsig = 0.0;
  double mae_logsig = 0.0;
  int order = 0;
  std::size_t m_original = 0;
  std::size_t m_synthetic = 0;
  Preprocessing preprocessing;
};

// Per-stream signatures are computed in parallel; the accumulation into the
// mean is a sequential compensated sum in stream order, so the result does
// not depend on the thread count.
MeanSignature mean_signature(std::span<const Stream> streams, int order,
                             SignatureKind kind);

// Signature and log-signature means from a single signature pass per stream.
std::pair<MeanSignature, MeanSignature> mean_signature_pair(
    std::span<const Stream> streams, int order);

// RMSE and MAE between two mean signatures of matching kind/dim/order.
Score score(const MeanSignature& original, const MeanSignature& synthetic);

ScoreReport score_report(std::span<const Stream> original,
                         std::span<const Stream> synthetic, int order,
                         const Preprocessing& preprocessing);

std::string score_report_json(const ScoreReport& report);

// CSV with header index,original,synthetic and one row per component.
void spectrum_export(const MeanSignature& original, const MeanSignature& synthetic,
                     const std::filesystem::path& path);

}  // namespace sigscore
