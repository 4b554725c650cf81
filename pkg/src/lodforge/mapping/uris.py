"""IRI minting for records and the resources derived from their fields."""

from __future__ import annotations

import re
import unicodedata
from urllib.parse import quote

from ..graph.terms import IRI
from .config import MappingConfig

RECORD_LEVEL_KINDS = ("Work", "Instance")
# RFC 3987 sub-delims plus ':' and '@' are legal in a path segment.
_PATH_SAFE = "!$&'()*+,;=:@-._~"
_WS = re.compile(r"\s+")
_PLACEHOLDER = re.compile(r"\{[^{}]*\}")


class MintError(ValueError):
    pass


def encode_segment(value: str, warnings: list | None = None, what: str = "identifier") -> str:
    """Percent-encode characters that cannot appear in an IRI path segment."""
    encoded = quote(value, safe=_PATH_SAFE)
    # quote() also encodes non-ASCII; IRIs allow it, so restore those characters
    encoded = re.sub(r"(%[89A-F][0-9A-F])+", lambda m: _undo_utf8(m.group(0)), encoded)
    if encoded != value and warnings is not None:
        warnings.append(("iri-encoding", f"{what} {value!r} percent-encoded as {encoded!r}"))
    return encoded


def _undo_utf8(chunk: str) -> str:
    try:
        text = bytes(int(h, 16) for h in chunk[1:].split("%")).decode("utf-8")
    except UnicodeDecodeError:
        return chunk
    return "".join(c if c.isprintable() and not c.isspace() else quote(c) for c in text)


def mint_uri(config: MappingConfig, kind: str, record_id: str, field_tag: str | int | None = None,
             ordinal: int | None = None, warnings: list | None = None) -> IRI:
    """``{base}{id}#Work`` / ``#Instance``, else ``{base}{id}#{Kind}{tag}-{ordinal}``."""
    if not record_id:
        raise MintError("record id must be non-empty")
    record_level = kind in RECORD_LEVEL_KINDS
    if record_level != (field_tag is None and ordinal is None):
        raise MintError(f"field tag and ordinal must be given for {kind} and only for it"
                        if not record_level else f"{kind} IRIs take no field tag or ordinal")
    rid = encode_segment(record_id, warnings, "record id")
    if record_level:
        return IRI(f"{config.base_uri}{rid}#{kind}")
    if field_tag is None or ordinal is None:
        raise MintError(f"{kind} needs both a field tag and an ordinal")
    tag = f"{int(field_tag):03d}" if isinstance(field_tag, int) else str(field_tag)
    return IRI(f"{config.base_uri}{rid}#{kind}{tag}-{int(ordinal)}")


def slugify(text: str) -> str:
    """NFC, lowercase, whitespace runs to one hyphen, percent-encode the rest."""
    text = unicodedata.normalize("NFC", text).strip().lower()
    text = _WS.sub("-", text)
    return quote(text, safe="-._~")


def pattern_uri(config: MappingConfig, kind: str, value: str, slug: bool = True,
                warnings: list | None = None) -> IRI:
    """Fill the configured URL pattern for ``kind`` (film, author, location, ...)."""
    try:
        template = config.dc_url_patterns[kind]
    except KeyError:
        raise MintError(f"no URL pattern configured for {kind!r}") from None
    if not value or not value.strip():
        raise MintError(f"empty value for {kind} URL")
    filler = slugify(value) if slug else encode_segment(value, warnings, f"{kind} id")
    return IRI(config.base_uri + _PLACEHOLDER.sub(lambda _: filler, template, count=1))


def pattern_regexes(config: MappingConfig) -> dict[str, re.Pattern]:
    """Regexes matching every IRI shape this configuration can mint."""
    base = re.escape(config.base_uri)
    out = {
        "record": re.compile(rf"^{base}[^#/]+#(Work|Instance)$"),
        "field": re.compile(rf"^{base}[^#/]+#[A-Z][A-Za-z]*[0-9]{{3}}-[0-9]+$"),
    }
    for kind, template in config.dc_url_patterns.items():
        head, tail = _PLACEHOLDER.split(template, 1)
        out[kind] = re.compile(rf"^{base}{re.escape(head)}[^/#?]+{re.escape(tail)}$")
    return out
