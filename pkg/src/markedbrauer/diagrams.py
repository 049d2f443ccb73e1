"""Diagram combinatorics: matchings, standard form, and the sign statistic.

A diagram on ``r`` top and ``s`` bottom vertices is a perfect matching of the
labelled vertex set.  Edges joining two top vertices are cups, two bottom
vertices caps, and top-to-bottom edges through strings.  Cups carry a bead
and caps an arrow; in the standard picture every arrow points right and the
markings are stacked by the canonical order (cups by increasing left
endpoint, then caps by decreasing left endpoint, first in the order on top).
Standard diagrams form the basis everything else is expressed in.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Tuple

from .scalars import Params

TOP = "t"
BOT = "b"

Vertex = Tuple[str, int]
Pair = Tuple[Vertex, Vertex]

BEAD = "bead"
ARROW = "arrow"
RIGHT = 1
LEFT = -1


def top(i: int) -> Vertex:
    return (TOP, i)


def bot(i: int) -> Vertex:
    return (BOT, i)


def vertex_name(v: Vertex) -> str:
    return f"{v[0]}{v[1]}"


def _canonical_pair(u: Vertex, v: Vertex) -> Pair:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True, order=True)
class Matching:
    """A perfect matching of r top and s bottom labelled vertices.

    ``pairs`` is stored canonically (each pair sorted, pairs sorted), which
    makes the lexicographic dataclass order the total order used for term
    sorting and serialization.
    """

    r: int
    s: int
    pairs: Tuple[Pair, ...]

    def __post_init__(self) -> None:
        if self.r < 0 or self.s < 0:
            raise ValueError("negative arity")
        canon = tuple(sorted(_canonical_pair(u, v) for u, v in self.pairs))
        object.__setattr__(self, "pairs", canon)
        seen = set()
        for u, v in canon:
            for w in (u, v):
                kind, i = w
                if kind == TOP and not (1 <= i <= self.r):
                    raise ValueError(f"top vertex {vertex_name(w)} out of range")
                if kind == BOT and not (1 <= i <= self.s):
                    raise ValueError(f"bottom vertex {vertex_name(w)} out of range")
                if w in seen:
                    raise ValueError(f"vertex {vertex_name(w)} appears twice")
                seen.add(w)
            if u == v:
                raise ValueError(f"degenerate pair at {vertex_name(u)}")
        if len(seen) != self.r + self.s:
            raise ValueError("not a perfect matching: some vertex is unpaired")

    # -- classification ----------------------------------------------------

    def classify(self) -> tuple[Tuple[Pair, ...], Tuple[Pair, ...], Tuple[Pair, ...]]:
        """Split the pairs into (cups, caps, through strings)."""
        cups, caps, throughs = [], [], []
        for p in self.pairs:
            kinds = (p[0][0], p[1][0])
            if kinds == (BOT, TOP):
                throughs.append(p)
            elif kinds == (TOP, TOP):
                cups.append(p)
            else:
                caps.append(p)
        return tuple(cups), tuple(caps), tuple(throughs)

    @property
    def cups(self) -> Tuple[Pair, ...]:
        return self.classify()[0]

    @property
    def caps(self) -> Tuple[Pair, ...]:
        return self.classify()[1]

    @property
    def throughs(self) -> Tuple[Pair, ...]:
        return self.classify()[2]

    def through_count(self) -> int:
        return len(self.throughs)

    def degree(self, params: Params) -> int:
        """Z_2 degree: always 0 for epsilon == +1, else number of markings mod 2."""
        if params.epsilon == 1:
            return 0
        cups, caps, _ = self.classify()
        return (len(cups) + len(caps)) % 2

    def marking_order(self) -> Tuple[Pair, ...]:
        """Canonical total order on marked edges: cups first by increasing
        left endpoint, then caps by decreasing left endpoint."""
        cups, caps, _ = self.classify()
        cups_sorted = sorted(cups, key=lambda p: min(v[1] for v in p))
        caps_sorted = sorted(caps, key=lambda p: -min(v[1] for v in p))
        return tuple(cups_sorted) + tuple(caps_sorted)

    def __str__(self) -> str:
        inner = ", ".join(f"{vertex_name(u)}-{vertex_name(v)}" for u, v in self.pairs)
        return f"[{inner}]"


# A standard diagram is a matching with the canonical marking layout implied.
StandardDiagram = Matching


def classify(m: Matching):
    return m.classify()


def _matchings(vertices: Sequence[Vertex]) -> Iterator[Tuple[Pair, ...]]:
    if not vertices:
        yield ()
        return
    first, rest = vertices[0], vertices[1:]
    for i, partner in enumerate(rest):
        head = _canonical_pair(first, partner)
        for tail in _matchings(rest[:i] + rest[i + 1 :]):
            yield (head,) + tail


def enumerate_basis(r: int, s: int) -> list[StandardDiagram]:
    """All standard diagrams on r top and s bottom vertices, in canonical order.

    Empty when r + s is odd: no perfect matching exists.
    """
    if r < 0 or s < 0:
        raise ValueError("negative arity")
    if (r + s) % 2:
        return []
    vertices = [top(i) for i in range(1, r + 1)] + [bot(j) for j in range(1, s + 1)]
    return sorted(Matching(r, s, pairs) for pairs in _matchings(tuple(vertices)))


@lru_cache(maxsize=None)
def basis_size(r: int, s: int) -> int:
    """(r+s-1)!! for r+s even, else 0."""
    n = r + s
    if n % 2:
        return 0
    out = 1
    for k in range(n - 1, 0, -2):
        out *= k
    return out


@dataclass(frozen=True)
class Marking:
    """One bead or arrow, attached to an edge; arrows carry a direction."""

    edge: Pair
    kind: str
    direction: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "edge", _canonical_pair(*self.edge))
        if self.kind == BEAD:
            if self.direction is not None:
                raise ValueError("beads carry no direction")
        elif self.kind == ARROW:
            if self.direction not in (LEFT, RIGHT):
                raise ValueError("arrows must point left or right")
        else:
            raise ValueError(f"unknown marking kind {self.kind!r}")


@dataclass(frozen=True)
class MarkedLayout:
    """A matching with its markings listed by height, topmost first.

    Exactly one bead per cup and one arrow per cap; through strings carry
    nothing.  Distinct latitudes are implied by the list order.
    """

    matching: Matching
    markings: Tuple[Marking, ...]

    def __post_init__(self) -> None:
        cups, caps, _ = self.matching.classify()
        want = {p: BEAD for p in cups}
        want.update({p: ARROW for p in caps})
        seen = []
        for m in self.markings:
            if m.edge not in want:
                raise ValueError(f"marking on a through string or unknown edge {m.edge}")
            if want[m.edge] != m.kind:
                raise ValueError(f"wrong marking kind on {m.edge}")
            seen.append(m.edge)
        if len(seen) != len(set(seen)) or len(seen) != len(want):
            raise ValueError("each cup and cap must carry exactly one marking")


def standard_layout(d: StandardDiagram) -> MarkedLayout:
    """The canonical layout: markings stacked in the marking order, arrows right."""
    cups, caps, _ = d.classify()
    bead_edges = set(cups)
    marks = tuple(
        Marking(e, BEAD) if e in bead_edges else Marking(e, ARROW, RIGHT)
        for e in d.marking_order()
    )
    return MarkedLayout(d, marks)


def normalization_sign(layout: MarkedLayout) -> tuple[int, StandardDiagram]:
    """Reduce a layout to standard form, returning the move count statistic.

    The count is the number of left pointing arrows plus, for each marking,
    the number of markings earlier in the canonical order that sit below it.
    The layout equals epsilon**count times the standard diagram on the same
    matching; it is standard exactly when the count is zero.
    """
    order = {edge: k for k, edge in enumerate(layout.matching.marking_order())}
    count = 0
    marks = layout.markings
    for i, m in enumerate(marks):
        if m.kind == ARROW and m.direction == LEFT:
            count += 1
        for j in range(i + 1, len(marks)):
            # marks[j] is below marks[i]; earlier in the order means inversion
            if order[marks[j].edge] < order[m.edge]:
                count += 1
    return count, layout.matching
