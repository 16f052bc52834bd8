"""Time-series clustering on auto-encoded compact sequences.

A sequence-to-sequence LSTM autoencoder compresses each series into a short
latent code; average-linkage hierarchical clustering groups the codes under
several distance measures; the modified Hubert statistic picks the measure
whose clustering separates best.  See the README for the full tour.
"""

from .autoencoder import (
    AutoencoderModel,
    LatentMatrix,
    LSTMParams,
    SequenceAutoencoder,
    TrainConfig,
    TrainTrace,
    extract_aecs,
    forward,
    init_model,
    load_model,
    masked_mse,
    reconstruction_loss,
    save_model,
    train,
)
from .cluster import (
    AverageLinkageClustering,
    Dendrogram,
    FlatClustering,
    agglomerate,
    average_linkage,
    cut,
)
from .data import (
    FORMATS,
    TimeSeriesDataset,
    as_dataset,
    load_dataset,
    merge,
    save_dataset,
    ucr_paths,
    z_normalize,
)
from .distances import (
    MEASURES,
    CovarianceModel,
    canonical_measure,
    chebyshev,
    distance_matrix,
    fit_covariance,
    mahalanobis,
    manhattan,
)
from .errors import (
    AecsError,
    ConfigurationError,
    DataError,
    NumericInstabilityError,
    ParseError,
    ShapeError,
)
from .pipeline import (
    REPORT_SCHEMA,
    CompactSequenceClustering,
    RunConfig,
    RunReport,
    benchmark,
    cluster_rows,
    compute_latents,
    dataset_fingerprint,
    evaluate,
    flatten_series,
    load_input,
    read_labels_csv,
    read_latent_csv,
    run_hc_aecs,
    run_hc_raw,
    write_clusters_csv,
    write_dendrogram_text,
    write_labels_csv,
    write_latent_csv,
)
from .selection import (
    HubertScore,
    MeasureResult,
    SelectionReport,
    best_cluster,
    hubert_statistic,
    nmi,
    rand_index,
)

__version__ = "0.1.0"

__all__ = [
    "AecsError",
    "AutoencoderModel",
    "AverageLinkageClustering",
    "CompactSequenceClustering",
    "ConfigurationError",
    "CovarianceModel",
    "DataError",
    "Dendrogram",
    "FlatClustering",
    "FORMATS",
    "HubertScore",
    "LatentMatrix",
    "LSTMParams",
    "MEASURES",
    "MeasureResult",
    "NumericInstabilityError",
    "ParseError",
    "REPORT_SCHEMA",
    "RunConfig",
    "RunReport",
    "SelectionReport",
    "SequenceAutoencoder",
    "ShapeError",
    "TimeSeriesDataset",
    "TrainConfig",
    "TrainTrace",
    "agglomerate",
    "as_dataset",
    "average_linkage",
    "benchmark",
    "best_cluster",
    "canonical_measure",
    "chebyshev",
    "cluster_rows",
    "compute_latents",
    "cut",
    "dataset_fingerprint",
    "distance_matrix",
    "evaluate",
    "extract_aecs",
    "fit_covariance",
    "flatten_series",
    "forward",
    "hubert_statistic",
    "init_model",
    "load_dataset",
    "load_input",
    "load_model",
    "mahalanobis",
    "manhattan",
    "masked_mse",
    "merge",
    "nmi",
    "rand_index",
    "read_labels_csv",
    "read_latent_csv",
    "reconstruction_loss",
    "run_hc_aecs",
    "run_hc_raw",
    "save_dataset",
    "save_model",
    "train",
    "ucr_paths",
    "write_clusters_csv",
    "write_dendrogram_text",
    "write_labels_csv",
    "write_latent_csv",
    "z_normalize",
]
