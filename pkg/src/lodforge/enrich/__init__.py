"""Vocabulary links and label reconciliation."""

from .labels import life_dates, name_key, normalize_label
from .reconcile import (EndpointClient, ExternalEntry, FixtureClient, ReconcileError,
                        ReconcileResult, ReconciliationCandidate, apply_sameas, auto_accept,
                        read_acceptance, reconcile, score_candidate, write_acceptance)
from .vocab import (TextFallback, VocabularyRejection, VocabularyTable, VocabularyTables,
                    load_table, relator_terms, resolve_geographic_area, resolve_language,
                    resolve_relator)

__all__ = [
    "life_dates", "name_key", "normalize_label",
    "EndpointClient", "ExternalEntry", "FixtureClient", "ReconcileError", "ReconcileResult",
    "ReconciliationCandidate", "apply_sameas", "auto_accept", "read_acceptance", "reconcile",
    "score_candidate", "write_acceptance",
    "TextFallback", "VocabularyRejection", "VocabularyTable", "VocabularyTables", "load_table",
    "relator_terms", "resolve_geographic_area", "resolve_language", "resolve_relator",
]
