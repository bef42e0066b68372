"""Locations of the packaged fixture library and cached loaders for it.

Two shape tiers share the per-module shape files:

* ``af``: module files plus ``constraint-library.ttl`` (components and target types)
* ``sparql``: module files plus ``inline/*.ttl`` (self-contained SPARQL constraints)

The tiers use the same constraint IRIs and are never loaded together.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path

from ..rdf.graph import Graph, PrefixMap
from ..shacl.loader import shapes_from_files
from ..shacl.model import ShapesGraph
from .catalog import VocabularyCatalog, load_ontology

logger = logging.getLogger(__name__)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
ONTOLOGY_DIR = FIXTURES / "ontology"
EXTENSIONS_DIR = FIXTURES / "extensions"
SHAPES_DIR = FIXTURES / "shapes"
CORPUS_DIR = FIXTURES / "tests"
GOLDEN_DIR = FIXTURES / "golden"

LIBRARY_FILE = "constraint-library.ttl"
INLINE_DIR = "inline"
TIERS = ("af", "sparql")


def _ttl(directory: Path) -> list[Path]:
    return sorted(directory.glob("*.ttl")) if directory.is_dir() else []


def ontology_files(directory: Path = ONTOLOGY_DIR) -> list[Path]:
    return _ttl(directory)


def extension_files(directory: Path = EXTENSIONS_DIR) -> list[Path]:
    return _ttl(directory)


def module_shape_files(directory: Path = SHAPES_DIR) -> list[Path]:
    return [p for p in _ttl(directory) if p.name != LIBRARY_FILE]


def tier_shape_files(tier: str, directory: Path = SHAPES_DIR) -> list[Path]:
    if tier not in TIERS:
        raise ValueError(f"Unknown tier {tier!r}, expected one of {', '.join(TIERS)}")
    files = module_shape_files(directory)
    if tier == "af":
        library = directory / LIBRARY_FILE
        if library.is_file():
            files.append(library)
    else:
        files.extend(_ttl(directory / INLINE_DIR))
    return files


def resolve_shape_files(paths, tier: str) -> list[Path]:
    """Expand directories to their tier's files; plain files are taken as given."""
    resolved: list[Path] = []
    for path in map(Path, paths):
        resolved.extend(tier_shape_files(tier, path) if path.is_dir() else [path])
    return resolved


def expand_ttl(paths) -> list[Path]:
    resolved: list[Path] = []
    for path in map(Path, paths):
        resolved.extend(_ttl(path) if path.is_dir() else [path])
    return resolved


@lru_cache(maxsize=4)
def load_fixture_ontology(include_extensions: bool = True) -> tuple[Graph, PrefixMap]:
    files = ontology_files() + (extension_files() if include_extensions else [])
    graph, prefixes = load_ontology(files)
    logger.debug("Fixture ontology: %d files, %d triples", len(files), len(graph))
    return graph, prefixes


@lru_cache(maxsize=4)
def load_fixture_shapes(tier: str = "af") -> ShapesGraph:
    return shapes_from_files(tier_shape_files(tier))


@lru_cache(maxsize=2)
def load_fixture_catalog(include_extensions: bool = True) -> VocabularyCatalog:
    return VocabularyCatalog.from_files(
        ontology_files(), extension_files() if include_extensions else ()
    )
