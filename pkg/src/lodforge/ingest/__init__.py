"""MARCXML and Dublin Core ingestion plus source profiling."""

from .dublincore import DublinCoreReader, parse_dublin_core
from .marcxml import MarcXmlReader, parse_marcxml
from .profile import SourceProfile, profile
from .records import (DC_ELEMENTS, ControlField, DataField, DcRecord, IngestError, MarcRecord,
                      RecordError)

__all__ = [
    "DublinCoreReader", "parse_dublin_core", "MarcXmlReader", "parse_marcxml",
    "SourceProfile", "profile", "DC_ELEMENTS", "ControlField", "DataField", "DcRecord",
    "IngestError", "MarcRecord", "RecordError",
]
