"""Phrase translation via a 24-bucket chained hash table.

Locale files hold one `English key=translated text` pair per line. The key's
first character picks the bucket (code point mod 24); collisions chain in
insertion order. Lookups of unknown keys return the key itself, so untranslated
or missing locales degrade to English instead of failing.
"""
from __future__ import annotations

import os
from pathlib import Path
from typing import Iterator, Optional

from .errors import EmptyKey, MalformedLine

BUCKET_COUNT = 24


def bucket_index(key: str) -> int:
    """Bucket for a key: numeric value of its first character, mod 24."""
    if not key:
        raise EmptyKey("phrase keys must be non-empty")
    return ord(key[0]) % BUCKET_COUNT


class PhraseTable:
    """Chained hash table of phrases for one locale."""

    def __init__(self, locale: str):
        self.locale = locale
        self.buckets: list[list[tuple[str, str]]] = [[] for _ in range(BUCKET_COUNT)]

    def insert(self, key: str, value: str) -> None:
        """Add a phrase; a repeated key overwrites the stored value in place."""
        chain = self.buckets[bucket_index(key)]
        for i, (existing, _) in enumerate(chain):
            if existing == key:
                chain[i] = (key, value)
                return
        chain.append((key, value))

    def lookup(self, key: str) -> str:
        """Translated text for `key`, or the key itself when not loaded."""
        chain = self.buckets[bucket_index(key)]
        for existing, value in chain:
            if existing == key:
                return value
        return key

    def entries(self) -> Iterator[tuple[str, str]]:
        for chain in self.buckets:
            yield from chain

    def __len__(self) -> int:
        return sum(len(chain) for chain in self.buckets)

    def chain_lengths(self) -> list[int]:
        return [len(chain) for chain in self.buckets]


def lookup(table: PhraseTable, key: str) -> str:
    """Function form of PhraseTable.lookup."""
    return table.lookup(key)


def load_locale(text: str, locale: str) -> PhraseTable:
    """Parse locale file contents: one phrase per line, split at the first '='.

    Values may contain further '=' characters. Blank lines are skipped; a
    non-blank line without '=' raises MalformedLine with its 1-based number.
    """
    table = PhraseTable(locale)
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise MalformedLine(number, line)
        key, value = line.split("=", 1)
        table.insert(key, value)
    return table


def default_locales_dir() -> Path:
    return Path(__file__).parent / "locales"


def load_locale_file(path: os.PathLike, locale: Optional[str] = None) -> PhraseTable:
    path = Path(path)
    tag = locale if locale is not None else path.stem
    # utf-8-sig: tolerate a BOM so the first key hashes correctly
    return load_locale(path.read_text(encoding="utf-8-sig"), tag)


def load_locale_tag(tag: str, directory: Optional[os.PathLike] = None) -> PhraseTable:
    """Load `<tag>.conf` from `directory` (default: bundled locales).

    Raises FileNotFoundError; callers decide the fallback (typically an empty
    table, which makes every lookup echo its key).
    """
    base = Path(directory) if directory is not None else default_locales_dir()
    return load_locale_file(base / f"{tag}.conf", locale=tag)
