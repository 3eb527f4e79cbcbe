"""Binary parses, modificational structures and the bijection between them.

Positions are 1-based.  A parse is an ordered binary tree whose leaves read
1..n left to right.  Each interior node of a parse contributes one link: the
rightmost leaf of its left child modifies the rightmost leaf of its right
child.  The resulting modificational structure is a tree rooted at n in
which every position i < n points to a parent further right.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

from .errors import DomainError, ParseError, ValidationError


@dataclass(frozen=True)
class Leaf:
    position: int

    @property
    def start(self) -> int:
        return self.position

    @property
    def end(self) -> int:
        return self.position

    @property
    def n(self) -> int:
        return 1


@dataclass(frozen=True)
class Node:
    left: "BinaryParse"
    right: "BinaryParse"
    start: int = field(init=False, compare=False, repr=False)
    end: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.left.end + 1 != self.right.start:
            raise ValidationError(
                "children are not adjacent: %d..%d then %d..%d"
                % (self.left.start, self.left.end, self.right.start, self.right.end))
        object.__setattr__(self, "start", self.left.start)
        object.__setattr__(self, "end", self.right.end)

    @property
    def n(self) -> int:
        return self.end - self.start + 1


BinaryParse = Union[Leaf, Node]


def interior_nodes(p: BinaryParse):
    """Yield the interior nodes of ``p`` in postorder."""
    if isinstance(p, Node):
        yield from interior_nodes(p.left)
        yield from interior_nodes(p.right)
        yield p


def check_parse(p: BinaryParse) -> None:
    if p.start != 1:
        raise ValidationError("parse must start at position 1, starts at %d" % p.start)


def left_branching_parse(n: int) -> BinaryParse:
    if n < 1:
        raise DomainError("n must be positive")
    p: BinaryParse = Leaf(1)
    for i in range(2, n + 1):
        p = Node(p, Leaf(i))
    return p


def is_left_branching(p: BinaryParse) -> bool:
    while isinstance(p, Node):
        if not isinstance(p.right, Leaf):
            return False
        p = p.left
    return True


def _parses(start: int, end: int) -> list:
    if start == end:
        return [Leaf(start)]
    out = []
    # Largest left part first, so the fully left-branching tree leads.
    for split in range(end - 1, start - 1, -1):
        for left in _parses(start, split):
            for right in _parses(split + 1, end):
                out.append(Node(left, right))
    return out


def enumerate_parses(n: int) -> list:
    """Every binary parse over 1..n, Catalan(n-1) of them.

    Order is canonical: at each node the split points are tried from the
    rightmost to the leftmost, so index 0 is the fully left-branching parse.
    """
    if n < 1:
        raise DomainError("n must be at least 1, got %r" % n)
    return _parses(1, n)


@dataclass(frozen=True)
class ModStructure:
    """Modification tree over positions 1..n, rooted at n.

    ``parents[i - 1]`` is the word that position ``i`` modifies, for
    i in 1..n-1.  Invalid tables are rejected on construction.
    """

    n: int
    parents: tuple

    def __post_init__(self):
        n, parents = self.n, tuple(self.parents)
        object.__setattr__(self, "parents", parents)
        if n < 1:
            raise ValidationError("n must be at least 1")
        if len(parents) != n - 1:
            raise ValidationError("need %d parent entries, got %d" % (n - 1, len(parents)))
        for i, p in enumerate(parents, 1):
            if not isinstance(p, int) or not i < p <= n:
                raise ValidationError("position %d must modify a word in %d..%d, got %r" % (i, i + 1, n, p))
        # Children precede parents, so one left-to-right sweep finalises each
        # subtree before it is folded into its parent.
        lo = list(range(n + 1))
        size = [1] * (n + 1)
        for i in range(1, n):
            if size[i] != i - lo[i] + 1:
                raise ValidationError("subtree of %d is not a contiguous span" % i)
            p = parents[i - 1]
            size[p] += size[i]
            lo[p] = min(lo[p], lo[i])
        for j in range(1, n + 1):
            if size[j] != j - lo[j] + 1:
                raise ValidationError("subtree of %d is not a contiguous span" % j)

    @classmethod
    def from_links(cls, n: int, links) -> "ModStructure":
        """Build from ``(modifier, head)`` pairs or a ``{modifier: head}`` dict."""
        table = dict(links)
        try:
            return cls(n, tuple(table[i] for i in range(1, n)))
        except KeyError as e:
            raise ValidationError("position %s has no head" % e.args[0]) from None

    @property
    def root(self) -> int:
        return self.n

    def parent(self, i: int) -> int:
        return self.parents[i - 1]

    def links(self) -> list:
        return [(i, p) for i, p in enumerate(self.parents, 1)]

    def children(self, j: int) -> list:
        return [i for i, p in enumerate(self.parents, 1) if p == j]

    def children_table(self) -> dict:
        table = {j: [] for j in range(1, self.n + 1)}
        for i, p in enumerate(self.parents, 1):
            table[p].append(i)
        return table


def parse_to_structure(p: BinaryParse) -> ModStructure:
    check_parse(p)
    links = {node.left.end: node.right.end for node in interior_nodes(p)}
    return ModStructure.from_links(p.n, links)


def structure_to_parse(m: ModStructure) -> BinaryParse:
    """The unique parse whose links are exactly those of ``m``."""
    kids = m.children_table()

    def build(j: int, remaining) -> BinaryParse:
        # Subtree of j with only the children in ``remaining`` attached.
        if not remaining:
            return Leaf(j)
        first = remaining[0]
        return Node(build(first, kids[first]), build(j, remaining[1:]))

    return build(m.n, kids[m.n])


def enumerate_structures(n: int) -> list:
    """Every modificational structure over n words, in canonical parse order."""
    return [parse_to_structure(p) for p in enumerate_parses(n)]


def choice(m: ModStructure) -> int:
    """Product of the child counts of all interior nodes (1 for a chain)."""
    return math.prod(len(c) for c in m.children_table().values() if c)


def generable_strings(m: ModStructure) -> set:
    """All postorder traversals of ``m`` as position tuples.

    Children of a node may be visited in any order; every subtree is emitted
    contiguously and each node after its descendants.
    """
    kids = m.children_table()

    def orders(j: int) -> list:
        if not kids[j]:
            return [(j,)]
        found = set()
        child_orders = {c: orders(c) for c in kids[j]}
        for perm in itertools.permutations(kids[j]):
            for combo in itertools.product(*(child_orders[c] for c in perm)):
                found.add(tuple(itertools.chain.from_iterable(combo)) + (j,))
        return sorted(found)

    return set(orders(m.n))


@lru_cache(maxsize=None)
def catalan(k: int) -> int:
    if k <= 1:
        return 1
    return sum(catalan(i) * catalan(k - 1 - i) for i in range(k))


def bracket_text(p: BinaryParse, words: Sequence[str]) -> str:
    """Render ``p`` as ``((a b) c)`` with one pair of parentheses per node."""
    check_parse(p)
    if len(words) != p.n:
        raise DomainError("parse covers %d words but %d were given" % (p.n, len(words)))

    def render(q):
        if isinstance(q, Leaf):
            return words[q.position - 1]
        return "(%s %s)" % (render(q.left), render(q.right))

    return render(p)


def parse_bracket(text: str) -> tuple:
    """Read ``expr := word | "(" expr " " expr ")"``.

    Returns ``(parse, words)``.  Whitespace is significant: exactly one space
    separates siblings and none appears elsewhere.
    """
    words: list[str] = []
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(text):
            raise ParseError("unexpected end of bracket text %r" % text)
        if text[pos] == "(":
            pos += 1
            left = expr()
            if text[pos:pos + 1] != " ":
                raise ParseError("expected a single space at offset %d in %r" % (pos, text))
            pos += 1
            right = expr()
            if text[pos:pos + 1] != ")":
                raise ParseError("expected ')' at offset %d in %r" % (pos, text))
            pos += 1
            return Node(left, right)
        start = pos
        while pos < len(text) and text[pos] not in "() \t\r\n":
            pos += 1
        if pos == start:
            raise ParseError("expected a word at offset %d in %r" % (pos, text))
        words.append(text[start:pos].lower())
        return Leaf(len(words))

    tree = expr()
    if pos != len(text):
        raise ParseError("trailing text at offset %d in %r" % (pos, text))
    return tree, words
