"""Mobility taxonomy of temporal networks and growth-model experiments."""

from ._core import (
    MODELS,
    STATISTICS,
    ComputationError,
    ConfigError,
    Error,
    EventStream,
    InputError,
    ParseError,
    __version__,
    generate,
    gini,
    optimize,
    parse_edge_list,
    pca_fit,
    pearson,
    read_edge_list,
    taxonomy,
)

__all__ = [
    "MODELS",
    "STATISTICS",
    "ComputationError",
    "ConfigError",
    "Error",
    "EventStream",
    "InputError",
    "ParseError",
    "__version__",
    "generate",
    "gini",
    "optimize",
    "parse_edge_list",
    "pca_fit",
    "pearson",
    "read_edge_list",
    "taxonomy",
]
