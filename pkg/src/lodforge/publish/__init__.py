"""Dumps, VoID description and the publication bundle."""

from .bundle import (QUALITY_JSON, QUALITY_TEXT, TRANSFORM_FILE, VOID_FILE, DumpManifest, PublishError,
                     bundle, bundle_files, digest_directory, dump_name, write_dump)
from .void import (FORMAT_FEATURES, VoidCounts, VoidError, VoidMetadata, dump_iri, generate_void,
                   used_vocabularies, void_counts)

__all__ = [
    "QUALITY_JSON", "QUALITY_TEXT", "TRANSFORM_FILE", "VOID_FILE", "DumpManifest", "PublishError",
    "bundle", "bundle_files", "digest_directory", "dump_name", "write_dump",
    "FORMAT_FEATURES", "VoidCounts", "VoidError", "VoidMetadata", "dump_iri", "generate_void",
    "used_vocabularies", "void_counts",
]
