"""Gold-standard bracketing files and accuracy reports.

Gold file lines look like ``<w1> <w2> ... <wn><TAB><bracket>``, where the
bracket uses the ``((a b) c)`` grammar.  For three-word items the bracket may
be abbreviated to ``L`` (left-branching) or ``R`` (right-branching).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .analyzer import Compound, analyze
from .errors import NounforgeError, ParseError
from .structures import (
    BinaryParse, Leaf, Node, bracket_text, is_left_branching, left_branching_parse,
    parse_bracket, parse_to_structure,
)

SHORTHAND = {
    "L": Node(Node(Leaf(1), Leaf(2)), Leaf(3)),
    "R": Node(Leaf(1), Node(Leaf(2), Leaf(3))),
}


@dataclass(frozen=True)
class GoldItem:
    words: Compound
    gold: BinaryParse
    lineno: int = 0

    def __post_init__(self):
        if self.gold.n != len(self.words):
            raise ParseError("bracket covers %d words, compound has %d" % (self.gold.n, len(self.words)),
                             self.lineno or None)


@dataclass
class GoldFile:
    items: list = field(default_factory=list)
    errors: list = field(default_factory=list)


def _parse_gold_line(line: str, lineno: int, min_words: int) -> GoldItem:
    fields = line.split("\t")
    if len(fields) != 2:
        raise ParseError("expected words<TAB>bracket", lineno)
    words = fields[0].split()
    if len(words) < min_words:
        raise ParseError("need at least %d words, got %d" % (min_words, len(words)), lineno)
    label = fields[1].strip()
    if label in SHORTHAND:
        if len(words) != 3:
            raise ParseError("L/R shorthand is only defined for three words", lineno)
        gold = SHORTHAND[label]
    else:
        try:
            gold, bracket_words = parse_bracket(label)
        except ParseError as e:
            raise ParseError(str(e), lineno) from None
        if bracket_words != [w.lower() for w in words]:
            raise ParseError("bracket words %r do not match %r" % (bracket_words, words), lineno)
    try:
        compound = Compound(tuple(words))
    except NounforgeError as e:
        raise ParseError(str(e), lineno) from None
    return GoldItem(compound, gold, lineno)


def read_gold(source: TextIO | Iterable[str], min_words: int = 3) -> GoldFile:
    """Parse a gold file; bad lines are collected rather than raised."""
    out = GoldFile()
    for lineno, raw in enumerate(source, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        try:
            out.items.append(_parse_gold_line(line, lineno, min_words))
        except ParseError as e:
            out.errors.append({"line": lineno, "error": str(e)})
    return out


def _ratio(num: int, den: int):
    return num / den if den else None


@dataclass
class EvalReport:
    total: int = 0
    correct: int = 0
    baseline_correct: int = 0
    links_total: int = 0
    links_correct: int = 0
    items: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def accuracy(self):
        return _ratio(self.correct, self.total)

    @property
    def baseline_accuracy(self):
        return _ratio(self.baseline_correct, self.total)

    @property
    def link_accuracy(self):
        return _ratio(self.links_correct, self.links_total)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "baseline_correct": self.baseline_correct,
            "baseline_accuracy": self.baseline_accuracy,
            "link_accuracy": self.link_accuracy,
            "items": self.items,
            "errors": self.errors,
        }


def evaluate(model, gold: GoldFile, unknown_words: str = "singleton", max_n: int = 8) -> EvalReport:
    """Exact-match accuracy of the top analysis, with the left-branching baseline."""
    report = EvalReport(errors=list(gold.errors))
    for item in gold.items:
        words = item.words
        try:
            ranked = analyze(model, words, unknown_words=unknown_words, max_n=max_n)
        except NounforgeError as e:
            report.errors.append({"line": item.lineno, "error": str(e)})
            continue
        best = ranked[0]
        gap = ranked[0].log_score - ranked[1].log_score if len(ranked) > 1 else None
        if gap is not None and not math.isfinite(gap):
            gap = None
        gold_links = set(parse_to_structure(item.gold).links())
        hit_links = len(gold_links & set(best.structure.links()))
        is_correct = best.parse == item.gold
        baseline_hit = item.gold == left_branching_parse(len(words))
        report.total += 1
        report.correct += is_correct
        report.baseline_correct += baseline_hit
        report.links_total += len(gold_links)
        report.links_correct += hit_links
        report.items.append({
            "line": item.lineno,
            "words": list(words.words),
            "gold": bracket_text(item.gold, words.words),
            "predicted": best.bracket(words),
            "correct": is_correct,
            "gold_left_branching": is_left_branching(item.gold),
            "score_gap": gap,
        })
    return report
