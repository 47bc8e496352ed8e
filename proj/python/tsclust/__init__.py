"""Time-series clustering with soft-DTW k-means and k-shape."""

from ._core import (
    __version__,
    adjusted_rand_index,
    agreement,
    barycenter,
    calinski_harabasz,
    cross_correlation,
    dtw,
    fit_kshape,
    fit_soft_dtw_kmeans,
    gak,
    run_pipeline,
    sbd,
    silhouette,
    soft_dtw,
    soft_dtw_grad,
    znormalize,
)

__all__ = [
    "__version__",
    "adjusted_rand_index",
    "agreement",
    "barycenter",
    "calinski_harabasz",
    "cross_correlation",
    "dtw",
    "fit_kshape",
    "fit_soft_dtw_kmeans",
    "gak",
    "run_pipeline",
    "sbd",
    "silhouette",
    "soft_dtw",
    "soft_dtw_grad",
    "znormalize",
]
