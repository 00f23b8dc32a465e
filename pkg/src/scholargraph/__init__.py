"""Exploratory search over a single research institution's knowledge graph.

The pipeline links org units, researchers, publications and a
hierarchical field-of-study taxonomy into one typed graph snapshot,
classifies publications against the taxonomy, infers topic profiles
transitively, and serves search, recommendations and depth-level
analytics over HTTP.
"""

from .classify import ClassifierConfig
from .graph import EdgeKind, GraphBuilder, GraphSnapshot, GraphStore, NodeKind, validate_schema
from .ingest import IngestConfig, ingest_corpus, load_snapshot, save_snapshot
from .search import IndexConfig
from .server import ServerConfig, create_app, serve
from .taxonomy import Taxonomy, load_taxonomy

__version__ = "0.1.0"

__all__ = [
    "ClassifierConfig",
    "EdgeKind",
    "GraphBuilder",
    "GraphSnapshot",
    "GraphStore",
    "IndexConfig",
    "IngestConfig",
    "NodeKind",
    "ServerConfig",
    "Taxonomy",
    "__version__",
    "create_app",
    "ingest_corpus",
    "load_snapshot",
    "load_taxonomy",
    "save_snapshot",
    "serve",
    "validate_schema",
]
