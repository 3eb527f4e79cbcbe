"""Estimating category association from two-word compound counts.

The trained quantity is P(s1 -> s2 | s2 is modified), the probability that
category s1 is the modifier given that a word of category s2 is modified.
Counts of word pairs are spread evenly over the senses of both words and
then normalised per head category with an additive epsilon floor.
"""

from __future__ import annotations

import hashlib
import io
import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

from .errors import DomainError, ParseError, ValidationError
from .lexicon import Thesaurus

DEFAULT_EPSILON = 1e-6
MODEL_MAGIC = "nounforge-model"
MODEL_VERSION = "v1"

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


@dataclass(frozen=True)
class PairCounts:
    """Sparse (modifier word, head word) -> count table."""

    counts: Mapping[tuple, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in self.counts.items():
            if c < 0:
                raise ValidationError("negative count for %r" % (key,))
            if c:
                clean[key] = c
        object.__setattr__(self, "counts", clean)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __len__(self):
        return len(self.counts)

    def __add__(self, other: "PairCounts") -> "PairCounts":
        merged = dict(self.counts)
        for key, c in other.counts.items():
            merged[key] = merged.get(key, 0) + c
        return PairCounts(merged)

    merge = __add__

    def dumps(self) -> str:
        return "".join("%s\t%s\t%d\n" % (w1, w2, c) for (w1, w2), c in sorted(self.counts.items()))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()


def ingest_pair_counts(source: TextIO | Iterable[str]) -> PairCounts:
    """Read ``word1<TAB>word2<TAB>count`` lines; repeated pairs are summed."""
    counts: dict = defaultdict(int)
    for lineno, raw in enumerate(source, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError("expected 3 tab-separated fields, got %d" % len(fields), lineno)
        w1, w2 = fields[0].strip().lower(), fields[1].strip().lower()
        if not w1 or not w2 or any(ch.isspace() for ch in w1 + w2):
            raise ParseError("bad word field", lineno)
        try:
            c = int(fields[2])
        except ValueError:
            raise ParseError("count %r is not an integer" % fields[2], lineno) from None
        if c < 0:
            raise ParseError("negative count %d" % c, lineno)
        counts[w1, w2] += c
    return PairCounts(dict(counts))


def tokenize(line: str) -> list:
    """Lowercased word tokens; punctuation becomes its own token."""
    return _TOKEN_RE.findall(line.lower())


def extract_pairs(tokens: Iterable[str], t: Thesaurus) -> PairCounts:
    """Count maximal runs of exactly two consecutive thesaurus words."""
    counts: dict = defaultdict(int)
    run: list = []
    for tok in list(tokens) + [None]:
        if tok is not None and tok.lower() in t:
            run.append(tok.lower())
            continue
        if len(run) == 2:
            counts[run[0], run[1]] += 1
        run = []
    return PairCounts(dict(counts))


def extract_pairs_from_text(lines: Iterable[str], t: Thesaurus) -> PairCounts:
    """Apply :func:`extract_pairs` line by line; line breaks end runs."""
    total = PairCounts()
    for line in lines:
        total = total + extract_pairs(tokenize(line), t)
    return total


def raw_affinity(c: PairCounts, t: Thesaurus, s1: str, s2: str) -> float:
    """Sum of count(w1 w2) / (ambiguity(w1) * ambiguity(w2)) over s1 x s2."""
    for s in (s1, s2):
        if s not in t.categories:
            raise DomainError("unknown category %r" % s)
    total = 0.0
    for w1 in sorted(t.categories[s1].members):
        for w2 in sorted(t.categories[s2].members):
            n = c.counts.get((w1, w2), 0)
            if n:
                total += n / (len(t.word_index[w1]) * len(t.word_index[w2]))
    return total


def affinity_table(c: PairCounts, t: Thesaurus) -> dict:
    """All nonzero raw affinities, keyed ``(s1, s2)``.

    Each count is split over the cross product of its words' senses, so the
    table sums to the count mass of pairs whose words are both known.
    Unknown words are skipped.
    """
    table: dict = defaultdict(list)
    for (w1, w2), n in sorted(c.counts.items()):
        c1, c2 = t.word_index.get(w1), t.word_index.get(w2)
        if not c1 or not c2:
            continue
        share = n / (len(c1) * len(c2))
        for s1 in c1:
            for s2 in c2:
                table[s1, s2].append(share)
    return {key: math.fsum(parts) for key, parts in table.items()}


@dataclass(frozen=True)
class AssociationModel:
    """Trained link probabilities P(s1 -> s2 | s2 is modified).

    Only cells seen in training are stored.  For a head category with stored
    cells, every absent cell shares the leftover mass equally (this is exactly
    the epsilon-smoothed value, recovered from the stored column).  Heads with
    no stored cells, and categories outside the thesaurus, get the uniform
    value 1/|S|.
    """

    thesaurus: Thesaurus
    link_prob: Mapping[tuple, float]
    epsilon: float = DEFAULT_EPSILON
    metadata: str = ""
    floors: Mapping[str, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = self.thesaurus
        if t.class_count == 0:
            raise ValidationError("thesaurus has no categories")
        if not self.epsilon > 0:
            raise ValidationError("epsilon must be positive, got %r" % self.epsilon)
        columns: dict = defaultdict(list)
        for (s1, s2), p in self.link_prob.items():
            if s1 not in t.categories or s2 not in t.categories:
                raise ValidationError("cell (%r, %r) names an unknown category" % (s1, s2))
            if not 0.0 < p <= 1.0:
                raise ValidationError("probability %r for (%r, %r) is outside (0, 1]" % (p, s1, s2))
            columns[s2].append(p)
        k = t.class_count
        floors = {}
        for s2, ps in columns.items():
            mass = math.fsum(ps)
            absent = k - len(ps)
            if absent == 0:
                if abs(mass - 1.0) > 1e-9:
                    raise ValidationError("column %r sums to %r" % (s2, mass))
                continue
            left = 1.0 - mass
            if not left > 0.0:
                raise ValidationError(
                    "column %r leaves no mass for unseen modifiers; epsilon is too small for these counts" % s2)
            floors[s2] = left / absent
        object.__setattr__(self, "floors", floors)

    @property
    def uniform(self) -> float:
        return 1.0 / self.thesaurus.class_count

    def prob(self, s1: str, s2: str) -> float:
        p = self.link_prob.get((s1, s2))
        if p is not None:
            return p
        return self.floors.get(s2, self.uniform)

    def column(self, s2: str) -> dict:
        """P(s1 -> s2) for every s1 in the thesaurus."""
        if s2 not in self.thesaurus.categories:
            raise DomainError("unknown category %r" % s2)
        return {s1: self.prob(s1, s2) for s1 in self.thesaurus.category_ids()}


def train(c: PairCounts, t: Thesaurus, epsilon: float = DEFAULT_EPSILON) -> AssociationModel:
    if not epsilon > 0:
        raise DomainError("epsilon must be positive, got %r" % epsilon)
    if t.class_count == 0:
        raise ValidationError("cannot train on an empty thesaurus")
    k = t.class_count
    table = affinity_table(c, t)
    by_head: dict = defaultdict(dict)
    for (s1, s2), a in table.items():
        by_head[s2][s1] = a
    link_prob = {}
    for s2 in sorted(by_head):
        column = by_head[s2]
        denom = math.fsum(column.values()) + k * epsilon
        for s1 in sorted(column):
            link_prob[s1, s2] = (column[s1] + epsilon) / denom
    meta = "pairs_digest=%s pairs_total=%d epsilon=%r" % (c.digest(), c.total, epsilon)
    return AssociationModel(t, link_prob, epsilon, meta)


def save_model(m: AssociationModel, sink: TextIO) -> None:
    sink.write("%s %s epsilon=%r thesaurus_digest=%s\n"
               % (MODEL_MAGIC, MODEL_VERSION, m.epsilon, m.thesaurus.digest()))
    if m.metadata:
        sink.write("# %s\n" % m.metadata)
    for (s1, s2) in sorted(m.link_prob, key=lambda key: (key[1], key[0])):
        sink.write("%s\t%s\t%s\n" % (s1, s2, format(m.link_prob[s1, s2], ".17g")))


def dumps_model(m: AssociationModel) -> str:
    buf = io.StringIO()
    save_model(m, buf)
    return buf.getvalue()


def load_model(source: TextIO | Iterable[str], t: Thesaurus) -> AssociationModel:
    """Read a model file written by :func:`save_model` against thesaurus ``t``."""
    lines = iter(source)
    header = next(lines, None)
    if header is None:
        raise ParseError("empty model file", 1)
    parts = header.split()
    if len(parts) != 4 or parts[0] != MODEL_MAGIC or parts[1] != MODEL_VERSION:
        raise ParseError("not a %s %s header" % (MODEL_MAGIC, MODEL_VERSION), 1)
    try:
        opts = dict(p.split("=", 1) for p in parts[2:])
        epsilon = float(opts["epsilon"])
        digest = opts["thesaurus_digest"]
    except (KeyError, ValueError):
        raise ParseError("malformed header fields", 1) from None
    if digest != t.digest():
        raise ValidationError("model was trained on a different thesaurus (digest %s, expected %s)"
                              % (digest, t.digest()))
    cells = {}
    meta = []
    for lineno, raw in enumerate(lines, 2):
        line = raw.rstrip("\r\n")
        if line.startswith("#"):
            meta.append(line[1:].strip())
            continue
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError("expected 3 tab-separated fields, got %d" % len(fields), lineno)
        try:
            p = float(fields[2])
        except ValueError:
            raise ParseError("bad probability %r" % fields[2], lineno) from None
        if (fields[0], fields[1]) in cells:
            raise ParseError("duplicate cell", lineno)
        cells[fields[0], fields[1]] = p
    return AssociationModel(t, cells, epsilon, "\n".join(meta))
