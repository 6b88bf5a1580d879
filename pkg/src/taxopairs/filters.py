"""Title filters and pair-level substring rejection.

A title survives :func:`passes_filter` only if it clears every active
rule. Rules are checked in a fixed order (length, digits, forbidden
characters, keyword tokens, Latin-script tokens) and a rejected title
is attributed to the first rule it fails, so per-reason tallies always
sum exactly to the number of rejected titles.

Keyword matching is whole-token and case-insensitive; tokens are
whitespace-delimited. The digit rule rejects a title if any character
is a digit. The Latin-token rule (for non-Latin-script datasets)
rejects titles containing a token made entirely of ASCII letters.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TextIO

from .errors import ConfigError

DEFAULT_MAX_LEN = 50
DEFAULT_KEYWORDS = frozenset(
    {"of", "at", "in", "by", "from", "to", "about", "stubs", "lists"}
)
DEFAULT_REJECT_CHARS = frozenset({".", "!", "?"})

_ASCII_LETTERS = frozenset(string.ascii_letters)

# attribution order; also the display order in reports
REJECT_REASONS = ("too_long", "digit", "forbidden_char", "keyword", "latin_token")


class ScriptFilter(Enum):
    REJECT_LATIN_TOKENS = "reject_latin_tokens"


@dataclass(frozen=True)
class FilterConfig:
    max_len: int = DEFAULT_MAX_LEN
    keyword_blacklist: frozenset[str] = DEFAULT_KEYWORDS
    reject_digits: bool = True
    reject_chars: frozenset[str] = DEFAULT_REJECT_CHARS
    script_filter: ScriptFilter | None = None
    substring_filter: bool = True

    def __post_init__(self):
        if self.max_len <= 0:
            raise ConfigError("max_len must be positive")

    def to_config_dict(self) -> dict:
        """Stable, JSON-safe form for hashing and reports."""
        return {
            "max_len": self.max_len,
            "keyword_blacklist": sorted(self.keyword_blacklist),
            "reject_digits": self.reject_digits,
            "reject_chars": sorted(self.reject_chars),
            "script_filter": self.script_filter.value if self.script_filter else None,
            "substring_filter": self.substring_filter,
        }


def rejection_reason(title: str, f: FilterConfig) -> str | None:
    """First failing rule's name from REJECT_REASONS, or None if clean."""
    if len(title) > f.max_len:
        return "too_long"
    if f.reject_digits and any(ch.isdigit() for ch in title):
        return "digit"
    if any(ch in f.reject_chars for ch in title):
        return "forbidden_char"
    tokens = title.split()
    if any(tok.lower() in f.keyword_blacklist for tok in tokens):
        return "keyword"
    if f.script_filter is ScriptFilter.REJECT_LATIN_TOKENS:
        if any(tok and all(ch in _ASCII_LETTERS for ch in tok) for tok in tokens):
            return "latin_token"
    return None


def passes_filter(title: str, f: FilterConfig) -> bool:
    return rejection_reason(title, f) is None


@dataclass
class FilterTally:
    """Counts titles checked, split by outcome and rejection reason."""

    checked: int = 0
    passed: int = 0
    rejected: dict[str, int] = field(
        default_factory=lambda: {r: 0 for r in REJECT_REASONS}
    )

    def record(self, title: str, f: FilterConfig) -> bool:
        self.checked += 1
        reason = rejection_reason(title, f)
        if reason is None:
            self.passed += 1
            return True
        self.rejected[reason] += 1
        return False

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "passed": self.passed,
            "rejected": dict(self.rejected),
        }


def substring_reject(a: str, b: str) -> bool:
    """True iff one title, lowercased, contains the other."""
    la, lb = a.lower(), b.lower()
    return la in lb or lb in la


def filter_config_from_json(stream: TextIO, base: FilterConfig | None = None) -> FilterConfig:
    """Apply a language-config JSON file on top of the defaults.

    Recognized keys: max_len, keyword_blacklist (list of tokens),
    reject_digits, reject_chars (list of single characters),
    script_filter ("reject_latin_tokens" or null), substring_filter.
    Unknown keys are errors so typos fail loudly.
    """
    if base is None:
        base = FilterConfig()
    try:
        raw = json.load(stream)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad language config JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("language config must be a JSON object")
    known = {
        "max_len",
        "keyword_blacklist",
        "reject_digits",
        "reject_chars",
        "script_filter",
        "substring_filter",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown language config keys: {sorted(unknown)}")
    updates: dict = {}
    if "max_len" in raw:
        if not isinstance(raw["max_len"], int):
            raise ConfigError("max_len must be an integer")
        updates["max_len"] = raw["max_len"]
    if "keyword_blacklist" in raw:
        kws = raw["keyword_blacklist"]
        if not isinstance(kws, list) or not all(isinstance(k, str) for k in kws):
            raise ConfigError("keyword_blacklist must be a list of strings")
        updates["keyword_blacklist"] = frozenset(k.lower() for k in kws)
    if "reject_digits" in raw:
        if not isinstance(raw["reject_digits"], bool):
            raise ConfigError("reject_digits must be a boolean")
        updates["reject_digits"] = raw["reject_digits"]
    if "reject_chars" in raw:
        chars = raw["reject_chars"]
        if not isinstance(chars, list) or not all(
            isinstance(c, str) and len(c) == 1 for c in chars
        ):
            raise ConfigError("reject_chars must be a list of single characters")
        updates["reject_chars"] = frozenset(chars)
    if "script_filter" in raw:
        sf = raw["script_filter"]
        if sf is None:
            updates["script_filter"] = None
        else:
            try:
                updates["script_filter"] = ScriptFilter(sf)
            except ValueError:
                raise ConfigError(f"unknown script_filter: {sf!r}") from None
    if "substring_filter" in raw:
        if not isinstance(raw["substring_filter"], bool):
            raise ConfigError("substring_filter must be a boolean")
        updates["substring_filter"] = raw["substring_filter"]
    return replace(base, **updates)
