"""Scoring modificational structures for a compound and ranking bracketings.

For a compound w1..wn and a structure m, the score is

    1/choice(m) * sum over senses s_j in cats(w_j) of
        prod_{links i -> j} P(s_i -> s_j) * prod_j P(s_j | w_j)

which is the posterior P(m | w1..wn) up to a factor |S|**n shared by every
structure over the same words.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .lexicon import normalize_word, sense_priors
from .structures import (
    BinaryParse, ModStructure, bracket_text, choice, enumerate_structures, structure_to_parse,
)

UNKNOWN_POLICIES = ("singleton", "error")
DEFAULT_MAX_N = 8
# Log scores closer than this are ties; mathematically equal scores reached
# through different products can differ in the last few bits.
TIE_DECIMALS = 9


@dataclass(frozen=True)
class Compound:
    words: tuple

    def __post_init__(self):
        words = tuple(normalize_word(w) for w in self.words)
        if not words:
            raise DomainError("a compound needs at least one word")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_text(cls, text: str) -> "Compound":
        return cls(tuple(text.split()))

    def __len__(self):
        return len(self.words)

    def __str__(self):
        return " ".join(self.words)


@dataclass(frozen=True)
class ScoredAnalysis:
    structure: ModStructure
    parse: BinaryParse
    score: float
    log_score: float

    def bracket(self, compound: Compound) -> str:
        return bracket_text(self.parse, compound.words)


def unknown_category(word: str) -> str:
    return "UNK:" + word


def resolve_senses(model, word: str, unknown_words: str = "singleton") -> dict:
    """``{category: P(category | word)}`` for one word.

    Words missing from the thesaurus either raise (``"error"``) or get a
    private singleton category ``UNK:<word>`` with prior 1 (``"singleton"``).
    """
    if unknown_words not in UNKNOWN_POLICIES:
        raise ValueError("unknown_words must be one of %s" % (UNKNOWN_POLICIES,))
    if word in model.thesaurus:
        return sense_priors(model.thesaurus, word)
    if unknown_words == "error":
        raise DomainError("word %r is not in the thesaurus" % word)
    return {unknown_category(word): 1.0}


def _compound_senses(model, c: Compound, unknown_words: str) -> list:
    return [resolve_senses(model, w, unknown_words) for w in c.words]


def _check_length(c: Compound, s: ModStructure):
    if s.n != len(c):
        raise DomainError("structure has %d positions, compound has %d words" % (s.n, len(c)))


def score_structure_bruteforce(model, c: Compound, s: ModStructure,
                               unknown_words: str = "singleton") -> float:
    """Direct sum over every joint sense assignment.  Exponential in n."""
    _check_length(c, s)
    senses = _compound_senses(model, c, unknown_words)
    links = s.links()
    total = []
    for assignment in itertools.product(*(sorted(d) for d in senses)):
        term = 1.0
        for i, j in links:
            term *= model.prob(assignment[i - 1], assignment[j - 1])
        for pos, cat in enumerate(assignment):
            term *= senses[pos][cat]
        total.append(term)
    return math.fsum(total) / choice(s)


def _messages(model, senses, s: ModStructure) -> dict:
    kids = s.children_table()
    msg = {}
    # Children always sit left of their head, so increasing position order is
    # a valid leaf-to-root schedule.
    for j in range(1, s.n + 1):
        out = {}
        for sj, prior in senses[j - 1].items():
            value = prior
            for i in kids[j]:
                value *= math.fsum(model.prob(si, sj) * mi for si, mi in msg[i].items())
            out[sj] = value
        msg[j] = out
    return msg


def score_structure_dp(model, c: Compound, s: ModStructure,
                       unknown_words: str = "singleton") -> float:
    """Same value as the brute-force sum, by leaf-to-root message passing."""
    _check_length(c, s)
    senses = _compound_senses(model, c, unknown_words)
    msg = _messages(model, senses, s)
    return math.fsum(msg[s.n].values()) / choice(s)


def _logsumexp(values) -> float:
    values = list(values)
    top = max(values)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def log_score_structure(model, c: Compound, s: ModStructure,
                        unknown_words: str = "singleton") -> float:
    """Natural log of :func:`score_structure_dp`, computed without underflow."""
    _check_length(c, s)
    senses = _compound_senses(model, c, unknown_words)
    kids = s.children_table()
    msg = {}
    for j in range(1, s.n + 1):
        out = {}
        for sj, prior in senses[j - 1].items():
            value = _log(prior)
            for i in kids[j]:
                value += _logsumexp(_log(model.prob(si, sj)) + mi for si, mi in msg[i].items())
            out[sj] = value
        msg[j] = out
    return _logsumexp(msg[s.n].values()) - math.log(choice(s))


def analyze(model, c: Compound, unknown_words: str = "singleton",
            max_n: int = DEFAULT_MAX_N, class_constant: bool = False) -> list:
    """Every structure for ``c`` scored and ranked best first.

    Ties (log scores equal to ``TIE_DECIMALS`` places) go to the structure
    that comes first in canonical enumeration order, which puts the fully
    left-branching parse first.
    With ``class_constant`` the dropped |S|**n factor is put back.
    """
    n = len(c)
    if n > max_n:
        raise DomainError("compound has %d words; the limit is %d" % (n, max_n))
    for w in c.words:
        resolve_senses(model, w, unknown_words)
    shift = n * math.log(model.thesaurus.class_count) if class_constant else 0.0
    scored = []
    for index, m in enumerate(enumerate_structures(n)):
        log_score = log_score_structure(model, c, m, unknown_words) + shift
        score = math.exp(log_score)
        key = -round(log_score, TIE_DECIMALS) if math.isfinite(log_score) else math.inf
        scored.append((key, index, ScoredAnalysis(m, structure_to_parse(m), score, log_score)))
    scored.sort(key=lambda item: (item[0], item[1]))
    return [item[2] for item in scored]


def best_parse(model, words: Sequence[str], **kwargs) -> BinaryParse:
    return analyze(model, Compound(tuple(words)), **kwargs)[0].parse
