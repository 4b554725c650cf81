"""Label normalisation shared by reconciliation and the duplicate audit."""

from __future__ import annotations

import re
import unicodedata

LIFE_DATES = re.compile(r"\d{3,4}-\d{0,4}")
_WS = re.compile(r"\s+")
_TERMINAL = re.compile(r"[\s.,;:]+$")


def life_dates(label: str) -> str | None:
    m = LIFE_DATES.search(label)
    return m.group(0) if m else None


def normalize_label(label: str, drop_dates: bool = False) -> str:
    """NFC, case fold, collapse whitespace, strip terminal ``.,;:``."""
    text = unicodedata.normalize("NFC", label)
    if drop_dates:
        text = LIFE_DATES.sub(" ", text)
    text = _WS.sub(" ", text.casefold()).strip()
    text = _TERMINAL.sub("", text)
    if drop_dates:
        text = re.sub(r"\s*,\s*(?=,|$)", "", text)
    return text


def fold_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return unicodedata.normalize("NFC", stripped)


def name_key(label: str) -> str:
    """Key for loose matching: normalised, dates removed, diacritics folded."""
    return fold_diacritics(normalize_label(label, drop_dates=True))
