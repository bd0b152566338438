"""Source front-end: Java-subset parser and code-facts file I/O."""

from .facts import FactsError, load_facts, save_facts, snapshot_to_document, document_to_snapshot
from .tree import ParseDiagnostic, ParseOptions, parse_source, parse_tree

__all__ = [
    "FactsError",
    "ParseDiagnostic",
    "ParseOptions",
    "document_to_snapshot",
    "load_facts",
    "parse_source",
    "parse_tree",
    "save_facts",
    "snapshot_to_document",
]
