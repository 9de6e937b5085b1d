"""Hub-value analysis and selection for high-dimensional Gaussian latents."""

from .classbalance import ClassHistogram, from_counts, total_variation, wasserstein_1d
from .geometry import (DistanceHistogram, TruncationReport,
                       central_clustering_report, distances_to, empirical_mean,
                       truncate)
from .hubness import (HubProfile, SelectionResult, hub_values, select_hq,
                      select_lq, select_top, spectrum)
from .knn import KnnResult, knn_exact, knn_oracle
from .latentfile import read_latents, write_latents
from .latents import (LatentSet, SamplerConfig, normalize_sphere,
                      sample_latents)

__all__ = [
    "ClassHistogram", "DistanceHistogram", "HubProfile", "KnnResult",
    "LatentSet", "SamplerConfig", "SelectionResult", "TruncationReport",
    "central_clustering_report", "distances_to", "empirical_mean",
    "from_counts", "hub_values", "knn_exact", "knn_oracle",
    "normalize_sphere", "read_latents", "sample_latents", "select_hq",
    "select_lq", "select_top", "spectrum", "total_variation", "truncate",
    "wasserstein_1d", "write_latents",
]
