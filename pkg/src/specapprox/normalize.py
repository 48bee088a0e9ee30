"""Normalization of titles, author names, and DOIs into match keys."""

from __future__ import annotations

import re
import unicodedata

# Alphanumeric runs; underscore excluded so author keys stay unambiguous.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_DOI_PREFIXES = (
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
    "doi.org/",
    "doi:",
)


def normalize_title(raw_title: str, min_len: int = 5) -> frozenset[str]:
    """Case-folded title tokens, split on every non-alphanumeric character.

    Tokens shorter than ``min_len`` and digit-only tokens are dropped;
    duplicates collapse. Empty input yields an empty set.
    """
    if not raw_title:
        return frozenset()
    tokens = _TOKEN_RE.findall(raw_title.casefold())
    return frozenset(t for t in tokens if len(t) >= min_len and not t.isdigit())


def _strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def normalize_author(raw_name: str) -> str | None:
    """Author key ``surname_initial`` from "Surname, Given" / "Surname G" forms.

    The surname is diacritic-stripped, case-folded, and reduced to its
    alphanumeric characters; the initial is the first letter of the given
    part. Returns None when either piece cannot be extracted.
    """
    if not raw_name:
        return None
    name = raw_name.strip()
    if "," in name:
        surname_part, given_part = name.split(",", 1)
    else:
        tokens = name.split()
        if len(tokens) < 2:
            return None
        surname_part = " ".join(tokens[:-1])
        given_part = tokens[-1]

    surname = "".join(
        ch for ch in _strip_diacritics(surname_part).casefold() if ch.isalnum()
    )
    if not surname:
        return None
    given = _strip_diacritics(given_part).casefold()
    initial = next((ch for ch in given if ch.isalpha()), None)
    if initial is None:
        return None
    return f"{surname}_{initial}"


def normalize_doi(raw: str) -> str | None:
    """Lowercased, scheme-stripped DOI, or None when the string holds no DOI."""
    if not raw:
        return None
    doi = raw.strip().lower()
    for prefix in _DOI_PREFIXES:
        if doi.startswith(prefix):
            doi = doi[len(prefix):]
            break
    doi = doi.strip()
    if not doi.startswith("10.") or "/" not in doi:
        return None
    if any(ch.isspace() for ch in doi):
        return None
    return doi
