"""Signature-based similarity scores for image distributions."""

from ._sigscore import (
    chi_square_sf,
    f_sf,
    image_to_stream,
    interpret,
    kmeans,
    kruskal_wallis,
    levene,
    load_directory,
    log_signature,
    mean_intensity,
    mean_signature,
    normality,
    pca2,
    pca_adaptive,
    pca_adaptive_tsne,
    resize,
    rmse_mae,
    score_report,
    set_threads,
    sig_dim,
    signature,
    to_grayscale,
    tsne,
)

__all__ = [
    "chi_square_sf",
    "f_sf",
    "image_to_stream",
    "interpret",
    "kmeans",
    "kruskal_wallis",
    "levene",
    "load_directory",
    "log_signature",
    "mean_intensity",
    "mean_signature",
    "normality",
    "pca2",
    "pca_adaptive",
    "pca_adaptive_tsne",
    "resize",
    "rmse_mae",
    "score_report",
    "set_threads",
    "sig_dim",
    "signature",
    "to_grayscale",
    "tsne",
]

__version__ = "0.1.0"
