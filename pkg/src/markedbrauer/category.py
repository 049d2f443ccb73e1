"""The diagram category: composition, tensor product, generators, bending maps.

Morphisms from [r] to [s] are exact linear combinations of standard diagrams
on r top and s bottom vertices.  Composition stacks the left factor above the
right one and reduces the stacked picture back to standard form, tracking
every epsilon move explicitly:

* deleting a closed loop scales by delta;
* two adjacent markings trading latitudes scales by epsilon;
* reversing an arrow scales by epsilon;
* cancelling a bead against an arrow on the same strand is free when the
  arrow points toward the bead along the strand and scales by epsilon when
  it points away (the two pinned cancellation factors, see SignConventions).

The base cancellation factors are not forced move by move; they are pinned
as the unique assignment under which the full generator-relation suite of
``verify_category_presentation`` holds, and are cross-checked against the
tensor-space realization (see superrep).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .diagrams import (
    ARROW,
    BEAD,
    BOT,
    LEFT,
    RIGHT,
    TOP,
    MarkedLayout,
    Marking,
    Matching,
    StandardDiagram,
    bot,
    enumerate_basis,
    normalization_sign,
    top,
)
from .scalars import Params, ParamsMismatch, Scalar, lc_normalize


class ArityMismatch(ValueError):
    """Composition or word layers whose arities do not line up."""


@dataclass(frozen=True)
class SignConventions:
    """The two pinned cancellation exponents (powers of epsilon).

    ``away_exponent`` applies when the cancelling arrow points away from the
    bead along their shared strand, ``toward_exponent`` when it points toward
    it.  Flipping either one breaks the presentation check; the defaults are
    the unique consistent assignment.
    """

    away_exponent: int = 1
    toward_exponent: int = 0


DEFAULT_CONVENTIONS = SignConventions()


@dataclass(frozen=True)
class Element:
    """A morphism [r] -> [s]: a linear combination of standard diagrams."""

    params: Params
    r: int
    s: int
    terms: Tuple[Tuple[StandardDiagram, Scalar], ...]

    @classmethod
    def from_terms(
        cls,
        params: Params,
        r: int,
        s: int,
        items: Iterable[tuple[Scalar, StandardDiagram]],
    ) -> "Element":
        items = list(items)
        for coeff, d in items:
            params.require_same(coeff.params)
            if d.r != r or d.s != s:
                raise ArityMismatch(f"term {d} does not live in B_{{{r},{s}}}")
        return cls(params, r, s, lc_normalize(items))

    @classmethod
    def zero(cls, params: Params, r: int, s: int) -> "Element":
        return cls(params, r, s, ())

    @classmethod
    def from_diagram(cls, params: Params, d: StandardDiagram) -> "Element":
        return cls.from_terms(params, d.r, d.s, [(Scalar.one(params), d)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, d: StandardDiagram) -> Scalar:
        for key, c in self.terms:
            if key == d:
                return c
        return Scalar.zero(self.params)

    def _require_compatible(self, other: "Element") -> None:
        self.params.require_same(other.params)
        if (self.r, self.s) != (other.r, other.s):
            raise ArityMismatch(
                f"cannot add B_{{{self.r},{self.s}}} and B_{{{other.r},{other.s}}} elements"
            )

    def __add__(self, other: "Element") -> "Element":
        self._require_compatible(other)
        return Element.from_terms(
            self.params, self.r, self.s, [(c, d) for d, c in self.terms + other.terms]
        )

    def __neg__(self) -> "Element":
        return self.scale(-1)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, factor) -> "Element":
        if isinstance(factor, int):
            factor = Scalar.integer(self.params, factor)
        return Element.from_terms(
            self.params, self.r, self.s, [(factor * c, d) for d, c in self.terms]
        )

    def eps_scaled(self, k: int) -> "Element":
        """Multiply by epsilon**k."""
        if self.params.epsilon == -1 and k % 2:
            return -self
        return self

    def degree(self) -> Optional[int]:
        """Z_2 degree if homogeneous, else None; the zero element counts as even."""
        degs = {d.degree(self.params) for d, _ in self.terms}
        if not degs:
            return 0
        if len(degs) == 1:
            return degs.pop()
        return None

    def __str__(self) -> str:
        if not self.terms:
            return f"0 in B({self.r},{self.s})"
        return " + ".join(f"({c})*{d}" for d, c in self.terms)


# ---------------------------------------------------------------------------
# generators and simple diagram builders


SYM_I = "I"
SYM_X = "X"
SYM_CUP = "U"
SYM_CAP = "N"

SYMBOL_ARITIES = {SYM_I: (1, 1), SYM_X: (2, 2), SYM_CUP: (2, 0), SYM_CAP: (0, 2)}


def identity_diagram(r: int) -> StandardDiagram:
    return Matching(r, r, tuple((top(i), bot(i)) for i in range(1, r + 1)))


def identity(params: Params, r: int) -> Element:
    return Element.from_diagram(params, identity_diagram(r))


def generator(params: Params, sym: str) -> Element:
    if sym == SYM_I:
        d = identity_diagram(1)
    elif sym == SYM_X:
        d = Matching(2, 2, ((top(1), bot(2)), (top(2), bot(1))))
    elif sym == SYM_CUP:
        d = Matching(2, 0, ((top(1), top(2)),))
    elif sym == SYM_CAP:
        d = Matching(0, 2, ((bot(1), bot(2)),))
    else:
        raise ValueError(f"unknown generator symbol {sym!r}")
    return Element.from_diagram(params, d)


def braiding(params: Params, a: int, b: int) -> Element:
    """The crossing exchanging the first a strands with the last b."""
    pairs = [(top(i), bot(b + i)) for i in range(1, a + 1)]
    pairs += [(top(a + j), bot(j)) for j in range(1, b + 1)]
    return Element.from_diagram(params, Matching(a + b, a + b, tuple(pairs)))


def w_diagram(r: int) -> StandardDiagram:
    """The order reversing permutation diagram i -> r+1-i; self inverse."""
    return Matching(r, r, tuple((top(i), bot(r + 1 - i)) for i in range(1, r + 1)))


def w_element(params: Params, r: int) -> Element:
    return Element.from_diagram(params, w_diagram(r))


# ---------------------------------------------------------------------------
# composition


def _mids(edge) -> set[int]:
    return {v[1] for v in edge}


def _is_reversed(entry, exit) -> bool:
    # an arc traversed from its right endpoint to its left one
    return entry[1] > exit[1]


class _Stack:
    """The stacked picture of d1 above d2, with component walks."""

    def __init__(self, d1: Matching, d2: Matching):
        self.d1, self.d2 = d1, d2
        self.x_edge_at = {}  # vertex of d1 -> its pair
        for p in d1.pairs:
            self.x_edge_at[p[0]] = p
            self.x_edge_at[p[1]] = p
        self.y_edge_at = {}
        for p in d2.pairs:
            self.y_edge_at[p[0]] = p
            self.y_edge_at[p[1]] = p

    def _step(self, side: str, v):
        edge = self.x_edge_at[v] if side == "x" else self.y_edge_at[v]
        exit = edge[1] if edge[0] == v else edge[0]
        return edge, exit

    def walk(self, side: str, v):
        """Trace from a terminal vertex to the opposite terminal."""
        steps = []
        while True:
            edge, exit = self._step(side, v)
            steps.append((side, edge, v, exit))
            if side == "x":
                if exit[0] == TOP:
                    return ("x", exit), steps
                side, v = "y", top(exit[1])
            else:
                if exit[0] == BOT:
                    return ("y", exit), steps
                side, v = "x", bot(exit[1])

    def walk_loop(self, m: int):
        """Trace the closed component through middle vertex m, x side first."""
        steps = []
        side, v = "x", bot(m)
        while True:
            edge, exit = self._step(side, v)
            steps.append((side, edge, v, exit))
            if side == "x":
                side, v = "y", top(exit[1])
            else:
                side, v = "x", bot(exit[1])
            if (side, v) == ("x", bot(m)):
                return steps


def _marked_steps(side_of_marks, steps):
    out = []
    for side, edge, entry, exit in steps:
        key = (side, edge)
        if key in side_of_marks:
            out.append((key, _is_reversed(entry, exit)))
    return out


def compose_diagrams(
    d1: StandardDiagram,
    d2: StandardDiagram,
    conventions: SignConventions = DEFAULT_CONVENTIONS,
) -> tuple[int, int, StandardDiagram]:
    """Stack d1 above d2 and reduce to standard form.

    Returns (epsilon exponent, loop count, standard diagram); the composite
    element is epsilon**exponent * delta**loops times the diagram.
    """
    if d1.s != d2.r:
        raise ArityMismatch(f"middle arities differ: {d1.s} vs {d2.r}")
    stack = _Stack(d1, d2)

    x_cups, x_caps, _ = d1.classify()
    y_cups, y_caps, _ = d2.classify()
    kind_of = {("x", e): BEAD for e in x_cups}
    kind_of.update({("x", e): ARROW for e in x_caps})
    kind_of.update({("y", e): BEAD for e in y_cups})
    kind_of.update({("y", e): ARROW for e in y_caps})

    # initial latitudes: all of d1's markings above all of d2's, each in its
    # own standard stacking order
    lat = [("x", e) for e in d1.marking_order()] + [("y", e) for e in d2.marking_order()]

    components = []  # (kind, final_pair_or_None, marked walk entries)
    seen_mid = set()

    def note_mids(steps):
        for side, edge, _, _ in steps:
            for v in edge:
                if side == "x" and v[0] == BOT:
                    seen_mid.add(v[1])
                if side == "y" and v[0] == TOP:
                    seen_mid.add(v[1])

    seen_top = set()
    for i in range(1, d1.r + 1):
        if i in seen_top:
            continue
        (tside, tv), steps = stack.walk("x", top(i))
        note_mids(steps)
        seen_top.add(i)
        if tside == "x":  # ends on the top row: a composite cup
            seen_top.add(tv[1])
            components.append(("cup", (top(i), top(tv[1])), _marked_steps(kind_of, steps)))
        else:
            components.append(("through", (top(i), tv), _marked_steps(kind_of, steps)))

    seen_bot = {p[1][1] for k, p, _ in components if k == "through"}
    for j in range(1, d2.s + 1):
        if j in seen_bot:
            continue
        (tside, tv), steps = stack.walk("y", bot(j))
        note_mids(steps)
        seen_bot.add(j)
        seen_bot.add(tv[1])
        components.append(("cap", (bot(j), bot(tv[1])), _marked_steps(kind_of, steps)))

    loops = 0
    for m in range(1, d1.s + 1):
        if m in seen_mid:
            continue
        steps = stack.walk_loop(m)
        note_mids(steps)
        loops += 1
        components.append(("loop", None, _marked_steps(kind_of, steps)))

    # phase A: cancel bead/arrow pairs strand by strand, walking each
    # component from its canonical start
    exponent = 0
    survivors = {}  # latitude key -> (component kind, final pair, reversed flag)
    for kind, final, marked in components:
        keep = 1 if kind in ("cup", "cap") else 0
        marked = list(marked)
        while len(marked) > keep:
            (k1, rev1), (k2, rev2) = marked[0], marked[1]
            if kind_of[k1] == ARROW:
                arrow_key, bead_key = k1, k2
            else:
                arrow_key, bead_key = k2, k1
            i, j = lat.index(arrow_key), lat.index(bead_key)
            if i > j:
                raise AssertionError("arrow unexpectedly below its bead")
            exponent += j - i - 1
            shared = _mids(arrow_key[1]) & _mids(bead_key[1])
            if len(shared) == 1:
                if shared.pop() == min(_mids(arrow_key[1])):
                    exponent += conventions.away_exponent
                else:
                    exponent += conventions.toward_exponent
            # a pair sharing both endpoints closes a loop: free
            lat.remove(arrow_key)
            lat.remove(bead_key)
            del marked[0:2]
        if keep:
            key, reversed_flag = marked[0]
            survivors[key] = (kind, final, reversed_flag)

    # phase B: the survivors form an honest marked layout of the composite;
    # reduce it to standard position
    pairs = [final for kind, final, _ in components if kind != "loop"]
    result = Matching(d1.r, d2.s, tuple(pairs))
    markings = []
    for key in lat:
        kind, final, reversed_flag = survivors[key]
        if kind == "cup":
            markings.append(Marking(final, BEAD))
        else:
            markings.append(Marking(final, ARROW, LEFT if reversed_flag else RIGHT))
    d_stat, std = normalization_sign(MarkedLayout(result, tuple(markings)))
    return exponent + d_stat, loops, std


def compose(
    x: Element, y: Element, conventions: SignConventions = DEFAULT_CONVENTIONS
) -> Element:
    """Stacking composition: x above y, bilinear in both arguments."""
    x.params.require_same(y.params)
    if x.s != y.r:
        raise ArityMismatch(f"cannot compose B_{{{x.r},{x.s}}} with B_{{{y.r},{y.s}}}")
    params = x.params
    acc = []
    for d1, c1 in x.terms:
        for d2, c2 in y.terms:
            k, loops, d = compose_diagrams(d1, d2, conventions)
            coeff = (c1 * c2 * Scalar.delta_power(params, loops)).eps_pow(k)
            if not coeff.is_zero:
                acc.append((coeff, d))
    return Element.from_terms(params, x.r, y.s, acc)


def tensor_diagrams(d1: StandardDiagram, d2: StandardDiagram) -> tuple[int, StandardDiagram]:
    """Place d2 to the right of d1; returns (epsilon exponent, diagram).

    The exponent counts the latitude swaps needed to restore the standard
    stacking order: every cap marking of d1 passes every marking of d2.
    """

    def shift(v, dt, db):
        return top(v[1] + dt) if v[0] == TOP else bot(v[1] + db)

    pairs = list(d1.pairs) + [
        (shift(u, d1.r, d1.s), shift(v, d1.r, d1.s)) for u, v in d2.pairs
    ]
    c1 = len(d1.caps)
    u2, k2 = len(d2.cups), len(d2.caps)
    return c1 * (u2 + k2), Matching(d1.r + d2.r, d1.s + d2.s, tuple(pairs))


def tensor(x: Element, y: Element) -> Element:
    """Horizontal concatenation, bilinear; markings of x above those of y."""
    x.params.require_same(y.params)
    params = x.params
    acc = []
    for d1, c1 in x.terms:
        for d2, c2 in y.terms:
            k, d = tensor_diagrams(d1, d2)
            acc.append(((c1 * c2).eps_pow(k), d))
    return Element.from_terms(params, x.r + y.r, x.s + y.s, acc)


def tensor_all(factors: Sequence[Element]) -> Element:
    if not factors:
        raise ValueError("empty tensor product has no parameters")
    out = factors[0]
    for f in factors[1:]:
        out = tensor(out, f)
    return out


# ---------------------------------------------------------------------------
# generator words


@dataclass(frozen=True)
class GeneratorWord:
    """A composable stack of tensor layers over the symbols I, X, U, N.

    Layers are listed top to bottom; consecutive layers must have matching
    arities.  An empty layer list denotes the identity on ``top_arity``
    strands.
    """

    top_arity: int
    layers: Tuple[Tuple[str, ...], ...]

    def __post_init__(self) -> None:
        width = self.top_arity
        for k, layer in enumerate(self.layers):
            tops = sum(SYMBOL_ARITIES[sym][0] for sym in layer)
            if tops != width:
                raise ArityMismatch(
                    f"layer {k} expects {tops} strands from above, got {width}"
                )
            width = sum(SYMBOL_ARITIES[sym][1] for sym in layer)
        object.__setattr__(self, "_bottom", width)

    @property
    def bottom_arity(self) -> int:
        return self._bottom


def layer_element(params: Params, layer: Sequence[str]) -> Element:
    out = identity(params, 0)
    for sym in layer:
        out = tensor(out, generator(params, sym))
    return out


def evaluate_word(
    word: GeneratorWord,
    params: Params,
    conventions: SignConventions = DEFAULT_CONVENTIONS,
) -> Element:
    """Fold tensor within layers and composition across layers."""
    out = identity(params, word.top_arity)
    for layer in word.layers:
        out = compose(out, layer_element(params, layer), conventions)
    return out


def _x_layer(width: int, p: int) -> Tuple[str, ...]:
    return (SYM_I,) * p + (SYM_X,) + (SYM_I,) * (width - p - 2)


def factor_standard(d: StandardDiagram) -> GeneratorWord:
    """A generator word evaluating to exactly 1 * d.

    Built as cup layers (topmost = leftmost cup), then a permutation of
    crossings sorting the through strands, then cap layers (topmost =
    rightmost cap), with single-strand moves that never introduce a sign.
    """
    layers: list[Tuple[str, ...]] = []
    cups, caps, throughs = d.classify()

    cur = list(range(1, d.r + 1))  # top indices of live strands
    for cup in sorted(cups, key=lambda p: p[0][1]):
        a, b = cup[0][1], cup[1][1]
        i, j = cur.index(a), cur.index(b)
        for p in range(j - 1, i, -1):  # slide b's strand left until adjacent to a
            layers.append(_x_layer(len(cur), p))
            cur[p], cur[p + 1] = cur[p + 1], cur[p]
        layers.append((SYM_I,) * i + (SYM_CUP,) + (SYM_I,) * (len(cur) - i - 2))
        del cur[i : i + 2]

    partner = {}
    for u, v in throughs:  # pairs are stored (bottom, top)
        partner[v[1]] = u[1]
    target = sorted(cur, key=lambda t: partner[t])
    for i in range(len(cur)):  # selection sort by adjacent swaps
        j = cur.index(target[i])
        for p in range(j - 1, i - 1, -1):
            layers.append(_x_layer(len(cur), p))
            cur[p], cur[p + 1] = cur[p + 1], cur[p]

    frontier = [partner[t] for t in cur]  # final bottom positions, ascending
    for cap in sorted(caps, key=lambda p: -p[0][1]):
        u, v = cap[0][1], cap[1][1]
        p = 0
        while p < len(frontier) and frontier[p] < u:
            p += 1
        layers.append((SYM_I,) * p + (SYM_CAP,) + (SYM_I,) * (len(frontier) - p))
        frontier.insert(p, u)
        frontier.insert(p + 1, v)
        q = p + 1
        while q + 1 < len(frontier) and frontier[q + 1] < v:  # spread the right foot
            layers.append(_x_layer(len(frontier), q))
            frontier[q], frontier[q + 1] = frontier[q + 1], frontier[q]
            q += 1
    if frontier != list(range(1, d.s + 1)):
        raise AssertionError("cap insertion left the bottom row out of order")
    return GeneratorWord(d.r, tuple(layers))


# ---------------------------------------------------------------------------
# presentation check


def verify_category_presentation(
    params: Params, conventions: SignConventions = DEFAULT_CONVENTIONS
) -> list[dict]:
    """Evaluate both sides of the sixteen defining relations.

    Returns one report entry per relation with the evaluated sides; failures
    are entries with ``passed`` False.
    """

    def g(sym):
        return generator(params, sym)

    def c(*elts):
        out = elts[0]
        for e in elts[1:]:
            out = compose(out, e, conventions)
        return out

    def t(*elts):
        return tensor_all(elts)

    I, X, U, N = g(SYM_I), g(SYM_X), g(SYM_CUP), g(SYM_CAP)
    II = t(I, I)
    delta = Scalar.delta_power(params, 1)

    checks = [
        ("I.I = I", c(I, I), I),
        ("II.X = X = X.II", c(II, X), X),
        ("X.X = II", c(X, X), II),
        ("N.X = eps N", c(N, X), N.eps_scaled(1)),
        ("NI.IU = I", c(t(N, I), t(I, U)), I),
        ("NI.IX = IN.XI", c(t(N, I), t(I, X)), c(t(I, N), t(X, I))),
        ("IIU.U = eps(UII.U)", c(t(I, I, U), U), c(t(U, I, I), U).eps_scaled(1)),
        ("NII.IIU = eps(U.N)", c(t(N, I, I), t(I, I, U)), c(U, N).eps_scaled(1)),
        ("II.U = U", c(II, U), U),
        ("N.II = N", c(N, II), N),
        ("X.U = U", c(X, U), U),
        ("N.U = delta", c(N, U), identity(params, 0).scale(delta)),
        ("IN.UI = eps I", c(t(I, N), t(U, I)), I.eps_scaled(1)),
        ("IX.UI = XI.IU", c(t(I, X), t(U, I)), c(t(X, I), t(I, U))),
        ("N.IIN = eps(N.NII)", c(N, t(I, I, N)), c(N, t(N, I, I)).eps_scaled(1)),
        (
            "XI.IX.XI = IX.XI.IX",
            c(t(X, I), t(I, X), t(X, I)),
            c(t(I, X), t(X, I), t(I, X)),
        ),
    ]
    report = []
    for name, lhs, rhs in checks:
        entry = {"relation": name, "passed": lhs == rhs}
        if name == "II.X = X = X.II":
            entry["passed"] = entry["passed"] and c(X, II) == X
        report.append(entry)
    return report


# ---------------------------------------------------------------------------
# bending maps, transpose, endofunctors

BEND_CORNERS = (
    "bottom-right-up",
    "bottom-left-up",
    "top-right-down",
    "top-left-down",
)

# Normalization exponents (constant, degree coefficient) per corner, frozen
# from the round-trip identities and the transpose generator images; see
# scripts/solve_sign_conventions.py for the solving run.  The beta exponent
# multiplies the degree of the term being bent at that step.  The solution is
# unique up to one gauge bit (a global constant flip), resolved lexically.
BEND_NORMALIZATION = {
    "bottom-right-up": (0, 0),
    "bottom-left-up": (0, 1),
    "top-right-down": (0, 1),
    "top-left-down": (0, 0),
}


def _bend_once(x: Element, corner: str) -> Element:
    params = x.params
    one = identity(params, 1)
    alpha, beta = BEND_NORMALIZATION[corner]
    acc = Element.zero(
        params,
        x.r + 1 if corner.endswith("up") else x.r - 1,
        x.s - 1 if corner.endswith("up") else x.s + 1,
    )
    cup = generator(params, SYM_CUP)
    cap = generator(params, SYM_CAP)
    for d, cf in x.terms:
        term = Element.from_terms(params, x.r, x.s, [(cf, d)])
        if corner == "bottom-right-up":
            raw = compose(tensor(term, one), tensor(identity(params, x.s - 1), cup))
        elif corner == "bottom-left-up":
            raw = compose(tensor(one, term), tensor(cup, identity(params, x.s - 1)))
        elif corner == "top-right-down":
            raw = compose(tensor(identity(params, x.r - 1), cap), tensor(term, one))
        else:  # top-left-down
            raw = compose(tensor(cap, identity(params, x.r - 1)), tensor(one, term))
        acc = acc + raw.eps_scaled(alpha + beta * d.degree(params))
    return acc


def bend(x: Element, count: int, corner: str) -> Element:
    """Bend ``count`` strands around the given corner.

    Up bends move bottom strands to the top (count <= s), down bends move top
    strands to the bottom (count <= r).  Each single bend composes with a cup
    or cap at the corner, scaled so that the up/down round trips at the same
    side are exact inverses.
    """
    if corner not in BEND_CORNERS:
        raise ValueError(f"unknown corner {corner!r}")
    limit = x.s if corner.endswith("up") else x.r
    if not 0 <= count <= limit:
        raise ValueError(f"cannot bend {count} strands at {corner} from B({x.r},{x.s})")
    for _ in range(count):
        x = _bend_once(x, corner)
    return x


def transpose(x: Element) -> Element:
    """Rotate by 180 degrees: bend all bottoms up right, all tops down left.

    On generators: I -> I, X -> eps X, cup -> eps cap, cap -> cup; a graded
    anti-homomorphism for composition.
    """
    r = x.r
    out = bend(bend(x, x.s, "bottom-right-up"), r, "top-left-down")
    return out.eps_scaled(r * (r - 1) // 2)


def endofunctor(x: Element, which: str) -> Element:
    """Apply one of the three diagram symmetries.

    ``vflip`` mirrors across the vertical axis, ``rotate`` is the transpose,
    ``hflip`` reflects across the equator.
    """
    params = x.params
    if which == "vflip":
        return compose(compose(w_element(params, x.r), x), w_element(params, x.s))
    if which == "rotate":
        return transpose(x)
    if which == "hflip":
        return compose(compose(w_element(params, x.s), transpose(x)), w_element(params, x.r))
    raise ValueError(f"unknown endofunctor {which!r}")
