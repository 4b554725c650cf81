"""Record-to-RDF mapping for the BIBFRAME-style and Schema.org-style profiles."""

from .config import DEFAULT_BASE_URI, DEFAULT_DC_URL_PATTERNS, ConfigError, MappingConfig
from .dc import DcMapper, transform_dc_record
from .dump import TransformReport, transform_dump
from .marc import MappingError, MarcMapper, transform_marc_record
from .rules import (DC_HANDLERS, MARC_HANDLERS, MappingRuleSet, Rule, RuleSetError, load_rules,
                    parse_rules)
from .uris import MintError, encode_segment, mint_uri, pattern_regexes, pattern_uri, slugify

__all__ = [
    "DEFAULT_BASE_URI", "DEFAULT_DC_URL_PATTERNS", "ConfigError", "MappingConfig",
    "DcMapper", "transform_dc_record", "TransformReport", "transform_dump",
    "MappingError", "MarcMapper", "transform_marc_record",
    "DC_HANDLERS", "MARC_HANDLERS", "MappingRuleSet", "Rule", "RuleSetError", "load_rules",
    "parse_rules", "MintError", "encode_segment", "mint_uri", "pattern_regexes", "pattern_uri",
    "slugify",
]
