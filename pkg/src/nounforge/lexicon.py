"""Thesaurus categories and the word-level probability primitives.

A thesaurus is a flat set of categories, each a set of words.  A word may
belong to several categories (one per sense).  File format, one record per
line::

    <category_id>\t<word>

Blank lines and lines starting with ``#`` are skipped.  Words are lowercased.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, TextIO

from .errors import DomainError, ParseError, ValidationError


def normalize_word(text: str) -> str:
    """Lowercase ``text`` and check it is a single nonempty token."""
    word = text.strip().lower()
    if not word or any(ch.isspace() for ch in word):
        raise DomainError("not a single word: %r" % text)
    return word


class Word(NamedTuple):
    surface: str
    id: int


@dataclass(frozen=True)
class Category:
    id: str
    members: frozenset

    def __post_init__(self):
        if not self.members:
            raise ValidationError("category %r has no members" % self.id)

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Thesaurus:
    """Immutable category system with a word -> category index.

    Build one with :func:`load_thesaurus` or :meth:`from_mapping`; the
    constructor derives the index itself so it cannot drift from the
    categories.
    """

    categories: Mapping[str, Category]
    word_index: Mapping[str, frozenset] = field(init=False, repr=False)
    word_ids: Mapping[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        index: dict[str, set] = {}
        for cat in self.categories.values():
            for w in cat.members:
                index.setdefault(w, set()).add(cat.id)
        object.__setattr__(self, "word_index", {w: frozenset(c) for w, c in index.items()})
        object.__setattr__(self, "word_ids", {w: i for i, w in enumerate(sorted(index))})

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Iterable[str]]) -> "Thesaurus":
        """Build from ``{category_id: words}``."""
        cats = {}
        for cid, words in mapping.items():
            cats[cid] = Category(cid, frozenset(normalize_word(w) for w in words))
        return cls(cats)

    @property
    def class_count(self) -> int:
        return len(self.categories)

    def category_ids(self) -> list[str]:
        return sorted(self.categories)

    def size(self, category_id: str) -> int:
        try:
            return self.categories[category_id].size
        except KeyError:
            raise DomainError("unknown category %r" % category_id) from None

    def __contains__(self, word) -> bool:
        return word in self.word_index

    def word(self, surface: str) -> Word:
        w = normalize_word(surface)
        try:
            return Word(w, self.word_ids[w])
        except KeyError:
            raise DomainError("word %r is not in the thesaurus" % w) from None

    def cats(self, word: str) -> frozenset:
        return cats(self, word)

    def dump(self) -> str:
        """Canonical text form: records sorted by category id, then word."""
        out = io.StringIO()
        for cid in sorted(self.categories):
            for w in sorted(self.categories[cid].members):
                out.write("%s\t%s\n" % (cid, w))
        return out.getvalue()

    def digest(self) -> str:
        """SHA-256 hex digest of :meth:`dump`."""
        return hashlib.sha256(self.dump().encode("utf-8")).hexdigest()


def load_thesaurus(source: TextIO | Iterable[str]) -> Thesaurus:
    members: dict[str, set] = {}
    for lineno, raw in enumerate(source, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError("expected 2 tab-separated fields, got %d" % len(fields), lineno)
        cid, word = fields[0].strip(), fields[1].strip().lower()
        if not cid:
            raise ParseError("empty category id", lineno)
        bucket = members.setdefault(cid, set())
        if not word:
            # A bare category declaration; legal only if a member shows up later.
            continue
        if any(ch.isspace() for ch in word):
            raise ParseError("word %r contains whitespace" % word, lineno)
        bucket.add(word)
    for cid, words in members.items():
        if not words:
            raise ValidationError("category %r has no members" % cid)
    return Thesaurus({cid: Category(cid, frozenset(ws)) for cid, ws in members.items()})


def dump_thesaurus(t: Thesaurus, sink: TextIO) -> None:
    sink.write(t.dump())


def cats(t: Thesaurus, word: str) -> frozenset:
    """Categories containing ``word``; empty for unknown words."""
    return t.word_index.get(word.lower(), frozenset())


def ambiguity(t: Thesaurus, word: str) -> int:
    n = len(cats(t, word))
    if n == 0:
        raise DomainError("word %r is not in the thesaurus" % word)
    return n


def sense_prior_exact(t: Thesaurus, word: str, category_id: str) -> Fraction:
    """P(category | word) as an exact fraction.

    With every category equally likely a priori and P(word | s) = 1/|s|,
    Bayes' rule gives P(s | word) proportional to 1/|s| over cats(word).
    """
    senses = cats(t, word)
    if category_id not in senses:
        raise DomainError("%r is not a category of %r" % (category_id, word))
    total = sum(Fraction(1, t.categories[s].size) for s in senses)
    return Fraction(1, t.categories[category_id].size) / total


def sense_prior(t: Thesaurus, word: str, category_id: str) -> float:
    return float(sense_prior_exact(t, word, category_id))


def sense_priors(t: Thesaurus, word: str) -> dict[str, float]:
    """All of ``word``'s senses with their priors, keyed by category id."""
    senses = cats(t, word)
    if not senses:
        raise DomainError("word %r is not in the thesaurus" % word)
    inv = {s: Fraction(1, t.categories[s].size) for s in senses}
    total = sum(inv.values())
    return {s: float(v / total) for s, v in sorted(inv.items())}
