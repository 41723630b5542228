#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sigscore/embed.hpp"
#include "sigscore/image.hpp"
#include "sigscore/ingest.hpp"
#include "sigscore/metrics.hpp"
#include "sigscore/parallel.hpp"
#include "sigscore/signature.hpp"
#include "sigscore/special_functions.hpp"
#include "sigscore/stats.hpp"
#include "sigscore/stream.hpp"

namespace py = pybind11;

namespace {

sigscore::Stream stream_from_array(const py::array_t<double>& points) {
  const auto buffer = points.request();
  if (buffer.ndim != 2) {
    throw std::invalid_argument("stream must be a 2-D array of shape (n, d)");
  }
  const auto n = static_cast<std::size_t>(buffer.shape[0]);
  const auto d = static_cast<int>(buffer.shape[1]);
  std::vector<double> data(n * static_cast<std::size_t>(d));
  auto view = points.unchecked<2>();
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      data[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] =
          view(static_cast<py::ssize_t>(i), j);
    }
  }
  return sigscore::make_stream(d, std::move(data));
}

py::array_t<double> to_array(const std::vector<double>& values) {
  py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(values.size())});
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

std::vector<sigscore::Stream> streams_from_list(const std::vector<py::array_t<double>>& paths) {
  std::vector<sigscore::Stream> streams;
  streams.reserve(paths.size());
  for (const auto& path : paths) {
    streams.push_back(stream_from_array(path));
  }
  return streams;
}

sigscore::SignatureKind kind_from_string(const std::string& kind) {
  if (kind == "signature") {
    return sigscore::SignatureKind::signature;
  }
  if (kind == "log_signature") {
    return sigscore::SignatureKind::log_signature;
  }
  throw std::invalid_argument("kind must be 'signature' or 'log_signature'");
}

using DenseArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

sigscore::Image image_from_array(const DenseArray& pixels) {
  const auto buffer = pixels.request();
  sigscore::Image image;
  if (buffer.ndim == 2) {
    image.height = static_cast<int>(buffer.shape[0]);
    image.width = static_cast<int>(buffer.shape[1]);
    image.channels = 1;
  } else if (buffer.ndim == 3 && (buffer.shape[2] == 1 || buffer.shape[2] == 3)) {
    image.height = static_cast<int>(buffer.shape[0]);
    image.width = static_cast<int>(buffer.shape[1]);
    image.channels = static_cast<int>(buffer.shape[2]);
  } else {
    throw std::invalid_argument("image must be (h, w) or (h, w, c) with c in {1, 3}");
  }
  image.pixels.resize(image.pixel_count() * static_cast<std::size_t>(image.channels));
  const double* data = static_cast<const double*>(buffer.ptr);
  std::copy(data, data + image.pixels.size(), image.pixels.begin());
  return image;
}

py::array_t<double> image_to_array(const sigscore::Image& image) {
  if (image.channels == 1) {
    py::array_t<double> out({image.height, image.width});
    std::copy(image.pixels.begin(), image.pixels.end(), out.mutable_data());
    return out;
  }
  py::array_t<double> out({image.height, image.width, image.channels});
  std::copy(image.pixels.begin(), image.pixels.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_sigscore, m) {
  m.doc() = "Signature-based similarity scores for image distributions";

  m.def("set_threads", &sigscore::set_thread_count, py::arg("threads"),
        "Worker threads used by batch operations (0 = auto)");

  m.def(
      "sig_dim",
      [](int dim, int order) { return sigscore::sig_dim(dim, order); },
      py::arg("dim"), py::arg("order"),
      "Flattened signature length excluding the constant term");

  m.def(
      "signature",
      [](const py::array_t<double>& points, int order) {
        return to_array(sigscore::flatten(
            sigscore::stream_signature(stream_from_array(points), order)));
      },
      py::arg("points"), py::arg("order"),
      "Flattened truncated signature of an (n, d) stream");

  m.def(
      "log_signature",
      [](const py::array_t<double>& points, int order) {
        return to_array(sigscore::flatten(
            sigscore::stream_log_signature(stream_from_array(points), order)));
      },
      py::arg("points"), py::arg("order"),
      "Flattened truncated log-signature of an (n, d) stream");

  m.def(
      "mean_signature",
      [](const std::vector<py::array_t<double>>& paths, int order,
         const std::string& kind) {
        const auto streams = streams_from_list(paths);
        return to_array(
            sigscore::mean_signature(streams, order, kind_from_string(kind)).values);
      },
      py::arg("paths"), py::arg("order"), py::arg("kind") = "signature",
      "Element-wise mean of the flattened (log-)signatures of a sample set");

  m.def(
      "rmse_mae",
      [](const py::array_t<double>& x, const py::array_t<double>& y) {
        if (x.size() != y.size()) {
          throw std::invalid_argument("vectors must have equal length");
        }
        sigscore::MeanSignature a;
        sigscore::MeanSignature b;
        a.values.assign(x.data(), x.data() + x.size());
        b.values.assign(y.data(), y.data() + y.size());
        a.sample_count = b.sample_count = 1;
        const auto result = sigscore::score(a, b);
        return py::make_tuple(result.rmse, result.mae);
      },
      py::arg("x"), py::arg("y"), "RMSE and MAE between two equal-length vectors");

  m.def(
      "score_report",
      [](const std::vector<py::array_t<double>>& original,
         const std::vector<py::array_t<double>>& synthetic, int order) {
        const auto orig = streams_from_list(original);
        const auto synth = streams_from_list(synthetic);
        const auto report =
            sigscore::score_report(orig, synth, order, sigscore::Preprocessing{});
        py::dict out;
        out["rmse_sig"] = report.rmse_sig;
        out["mae_sig"] = report.mae_sig;
        out["rmse_logsig"] = report.rmse_logsig;
        out["mae_logsig"] = report.mae_logsig;
        out["order"] = report.order;
        return out;
      },
      py::arg("original"), py::arg("synthetic"), py::arg("order") = 3,
      "Four similarity scores between two stream sample sets");

  m.def(
      "levene",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return sigscore::levene(a, b);
      },
      py::arg("a"), py::arg("b"),
      "Median-centered Levene test: (W, p)");

  m.def(
      "normality",
      [](const std::vector<double>& x) { return sigscore::normality(x); },
      py::arg("x"), "D'Agostino-Pearson omnibus normality test: (K2, p)");

  m.def(
      "kruskal_wallis",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return sigscore::kruskal_wallis(a, b);
      },
      py::arg("a"), py::arg("b"), "Kruskal-Wallis rank test for two groups: (H, p)");

  m.def(
      "interpret",
      [](bool t1_accept, bool t2_accept, bool t3_accept) {
        const auto result = sigscore::interpret(t1_accept, t2_accept, t3_accept);
        py::dict out;
        out["codes"] = result.codes;
        out["prose"] = result.prose;
        return out;
      },
      py::arg("t1_accept"), py::arg("t2_accept"), py::arg("t3_accept"),
      "Verdict codes and prose for the three-test pipeline");

  m.def("chi_square_sf", &sigscore::chi_square_sf, py::arg("x"), py::arg("df"));
  m.def("f_sf", &sigscore::f_sf, py::arg("x"), py::arg("df1"), py::arg("df2"));

  m.def(
      "pca_adaptive",
      [](const Eigen::MatrixXd& data, double variance_target) {
        const auto result = sigscore::pca_adaptive(data, variance_target);
        return py::make_tuple(result.projected, result.components, result.explained);
      },
      py::arg("data"), py::arg("variance_target") = 0.99,
      "PCA keeping the fewest components reaching the variance target: "
      "(projected, components, explained)");

  m.def("pca2", &sigscore::pca2, py::arg("data"), "Fixed two-component PCA projection");

  m.def(
      "kmeans",
      [](const Eigen::MatrixXd& data, int k, std::uint64_t seed) {
        const auto result = sigscore::kmeans(data, k, seed);
        py::dict out;
        out["assignments"] = result.assignments;
        out["centroids"] = result.centroids;
        out["inertia"] = result.inertia;
        return out;
      },
      py::arg("data"), py::arg("k"), py::arg("seed") = 0,
      "k-means++ / Lloyd clustering, deterministic for a given seed");

  m.def(
      "tsne",
      [](const Eigen::MatrixXd& data, double perplexity, int iterations,
         std::uint64_t seed) {
        sigscore::TsneOptions options;
        options.perplexity = perplexity;
        options.iterations = iterations;
        options.seed = seed;
        const auto result = sigscore::tsne(data, options);
        py::dict out;
        out["coords"] = result.coords;
        out["kl"] = result.final_kl;
        return out;
      },
      py::arg("data"), py::arg("perplexity") = 30.0, py::arg("iterations") = 1000,
      py::arg("seed") = 0, "Exact pairwise t-SNE to 2-D");

  m.def(
      "pca_adaptive_tsne",
      [](const Eigen::MatrixXd& data, double perplexity, double variance_target,
         int iterations, std::uint64_t seed) {
        sigscore::TsneOptions options;
        options.perplexity = perplexity;
        options.iterations = iterations;
        options.seed = seed;
        const auto result = sigscore::pca_adaptive_tsne(data, variance_target, options);
        py::dict out;
        out["coords"] = result.coords;
        out["pca_components_kept"] = result.pca_components_kept;
        out["variance_explained"] = result.variance_explained;
        out["final_kl"] = result.final_kl;
        out["seed"] = result.seed;
        return out;
      },
      py::arg("data"), py::arg("perplexity") = 30.0, py::arg("variance_target") = 0.99,
      py::arg("iterations") = 1000, py::arg("seed") = 0,
      "PCA at the variance target followed by t-SNE");

  m.def(
      "to_grayscale",
      [](const DenseArray& pixels) {
        return image_to_array(sigscore::to_grayscale(image_from_array(pixels)));
      },
      py::arg("pixels"), "Rec. 601 luma conversion of an RGB image in [0, 1]");

  m.def(
      "resize",
      [](const DenseArray& pixels, int size) {
        return image_to_array(
            sigscore::resize_bilinear(image_from_array(pixels), size, size));
      },
      py::arg("pixels"), py::arg("size"), "Bilinear resize to size x size");

  m.def(
      "mean_intensity",
      [](const DenseArray& pixels) {
        return sigscore::mean_intensity(image_from_array(pixels));
      },
      py::arg("pixels"), "Mean over every pixel and channel");

  m.def(
      "image_to_stream",
      [](const DenseArray& pixels, bool column_mode) {
        const auto stream =
            sigscore::image_to_stream(image_from_array(pixels), column_mode);
        py::array_t<double> out(
            {static_cast<py::ssize_t>(stream.point_count()),
             static_cast<py::ssize_t>(stream.dim)});
        std::copy(stream.points.begin(), stream.points.end(), out.mutable_data());
        return out;
      },
      py::arg("pixels"), py::arg("column_mode") = false,
      "Square grayscale image as an (s, s) stream, one point per row");

  m.def(
      "load_directory",
      [](const std::filesystem::path& dir, int size, bool skip_corrupt) {
        sigscore::LoadOptions options;
        options.size = size;
        options.skip_corrupt = skip_corrupt;
        const auto set = sigscore::load_directory(dir, options);
        py::array_t<double> images(
            {static_cast<py::ssize_t>(set.images.size()),
             static_cast<py::ssize_t>(size), static_cast<py::ssize_t>(size)});
        auto view = images.mutable_unchecked<3>();
        for (std::size_t i = 0; i < set.images.size(); ++i) {
          const auto& pixels = set.images[i].pixels;
          for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
              view(static_cast<py::ssize_t>(i), y, x) =
                  pixels[static_cast<std::size_t>(y) * size + x];
            }
          }
        }
        std::vector<std::string> paths;
        paths.reserve(set.files.size());
        for (const auto& path : set.files) {
          paths.push_back(path.string());
        }
        return py::make_tuple(images, paths);
      },
      py::arg("dir"), py::arg("size") = 64, py::arg("skip_corrupt") = false,
      "Decode, grayscale, and resize every PNG/JPEG under a directory; "
      "returns (images, paths) in sorted path order");
}
