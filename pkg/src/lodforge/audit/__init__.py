"""Quality audit: criteria catalogue, shape mining, duplicates, links."""

from .completeness import (CompletenessResult, GoldClass, GoldError, GoldStandard, completeness,
                           load_gold)
from .consistency import Axioms, ConsistencyResult, ConsistencyViolation, consistency_check, load_axioms
from .duplicates import DuplicateResult, detect_duplicate_agents
from .evaluate import (DEFAULT_SEED, EVALUATORS, AuditConfig, evaluate, interlinking_rate,
                       load_reference, reserved_host)
from .links import (HttpLinkClient, LinkCheckResult, ProbeResult, StubServer, StubTransport,
                    check_links, external_iris, parse_stub_script, sample_links)
from .literals import LiteralResult, LiteralRule, Violation, load_literal_rules, syntactic_validity_literals
from .report import Criterion, QualityReport, catalogue, declared_defaults, dimensions
from .shapes import (ConformanceReport, NodeResult, ObjectKind, PropertyDeclaration, Shape, ShapeSet,
                     mine_shapes, to_shexc, validate_shapes)

__all__ = [
    "CompletenessResult", "GoldClass", "GoldError", "GoldStandard", "completeness", "load_gold",
    "Axioms", "ConsistencyResult", "ConsistencyViolation", "consistency_check", "load_axioms",
    "DuplicateResult", "detect_duplicate_agents",
    "DEFAULT_SEED", "EVALUATORS", "AuditConfig", "evaluate", "interlinking_rate", "load_reference",
    "reserved_host",
    "HttpLinkClient", "LinkCheckResult", "ProbeResult", "StubServer", "StubTransport", "check_links",
    "external_iris", "parse_stub_script", "sample_links",
    "LiteralResult", "LiteralRule", "Violation", "load_literal_rules", "syntactic_validity_literals",
    "Criterion", "QualityReport", "catalogue", "declared_defaults", "dimensions",
    "ConformanceReport", "NodeResult", "ObjectKind", "PropertyDeclaration", "Shape", "ShapeSet",
    "mine_shapes", "to_shexc", "validate_shapes",
]
