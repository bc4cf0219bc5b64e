"""Sliced diagrams of oriented positively-weighted 1-foams.

A diagram is a list of strand slices separated by events; event k transforms
slice k into slice k+1.  Reading bottom to top, a Merge joins two adjacent
same-direction strands into their sum, a Split divides one strand in two,
a Cross transposes neighbours, Cup/Cap create/annihilate an antiparallel
pair, and Dot/Label carry decorations for the flip and group-label calculi.

The nu invariant sums one local contribution per vertex and crossing.  With
x = left and y = right weight at the event (page coordinates):

    Merge Up:   L -> 0        R -> x^y
    Split Up:   L -> 0        R -> y^x
    Merge Down: L -> x^y      R -> 0
    Split Down: L -> y^x      R -> 0
    Cross:      parallel strands -> x^y, antiparallel -> y^x
    Cup/Cap:    0

The L/R flag records which thin edge attaches first at the vertex.  This
table is the unique assignment (up to global relabelling) under which
flipping a flag equals composing with a crossing of the thin strands and
the closure of an interval exchange satisfies nu = SAF/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import (
    DslSemanticError,
    FlippedIet,
    NonPositiveWeight,
    OpenDiagram,
    UnsupportedDecoration,
)
from .exterior import WedgeValue, wedge
from .iet import Iet, saf
from .weights import NEGATIVE, POSITIVE, GeneratorBasis, Weight


class Dir(Enum):
    UP = "u"
    DOWN = "d"

    def flip(self) -> "Dir":
        return Dir.DOWN if self is Dir.UP else Dir.UP


class Order(Enum):
    L = "L"
    R = "R"

    def flip(self) -> "Order":
        return Order.R if self is Order.L else Order.L


@dataclass(frozen=True)
class Strand:
    weight: Weight
    dir: Dir


@dataclass(frozen=True)
class Merge:
    pos: int
    order: Order


@dataclass(frozen=True)
class Split:
    pos: int
    order: Order
    left: Weight  # weight of the left output strand


@dataclass(frozen=True)
class Cross:
    pos: int


@dataclass(frozen=True)
class Cup:
    pos: int
    weight: Weight
    dir: Dir  # direction of the left created strand


@dataclass(frozen=True)
class Cap:
    pos: int


@dataclass(frozen=True)
class Dot:
    pos: int


@dataclass(frozen=True)
class Label:
    pos: int
    g: object  # a GroupLabel; opaque at this layer


Event = object


def _positive(w: Weight, what: str) -> None:
    if w.sign() != POSITIVE:
        raise NonPositiveWeight(f"{what} must be positive, got {w}")


def apply_event(strands: tuple[Strand, ...], e: Event) -> tuple[Strand, ...]:
    """One step of the slice semantics; raises DslSemanticError when the
    event does not validate against the input slice."""
    n = len(strands)
    if isinstance(e, Merge):
        if not 0 <= e.pos <= n - 2:
            raise DslSemanticError(f"merge at {e.pos} needs two strands")
        a, b = strands[e.pos], strands[e.pos + 1]
        if a.dir != b.dir:
            raise DslSemanticError("merge of strands with different directions")
        joined = Strand(a.weight + b.weight, a.dir)
        return strands[: e.pos] + (joined,) + strands[e.pos + 2 :]
    if isinstance(e, Split):
        if not 0 <= e.pos < n:
            raise DslSemanticError(f"split at {e.pos}: no such strand")
        s = strands[e.pos]
        right = s.weight - e.left
        _positive(e.left, "left part of a split")
        _positive(right, "right part of a split")
        out = (Strand(e.left, s.dir), Strand(right, s.dir))
        return strands[: e.pos] + out + strands[e.pos + 1 :]
    if isinstance(e, Cross):
        if not 0 <= e.pos <= n - 2:
            raise DslSemanticError(f"cross at {e.pos} needs two strands")
        a, b = strands[e.pos], strands[e.pos + 1]
        return strands[: e.pos] + (b, a) + strands[e.pos + 2 :]
    if isinstance(e, Cup):
        if not 0 <= e.pos <= n:
            raise DslSemanticError(f"cup at {e.pos}: position out of range")
        _positive(e.weight, "cup weight")
        pair = (Strand(e.weight, e.dir), Strand(e.weight, e.dir.flip()))
        return strands[: e.pos] + pair + strands[e.pos :]
    if isinstance(e, Cap):
        if not 0 <= e.pos <= n - 2:
            raise DslSemanticError(f"cap at {e.pos} needs two strands")
        a, b = strands[e.pos], strands[e.pos + 1]
        if a.weight != b.weight:
            raise DslSemanticError("cap of strands with different weights")
        if a.dir == b.dir:
            raise DslSemanticError("cap of strands with equal directions")
        return strands[: e.pos] + strands[e.pos + 2 :]
    if isinstance(e, (Dot, Label)):
        if not 0 <= e.pos < n:
            raise DslSemanticError(f"decoration at {e.pos}: no such strand")
        return strands
    raise DslSemanticError(f"unknown event {e!r}")


class FoamDiagram:
    """Immutable sliced diagram; slices are derived from start + events."""

    __slots__ = ("basis", "start", "events", "slices")

    def __init__(self, basis: GeneratorBasis, start: Iterable[Strand], events: Iterable[Event]):
        self.basis = basis
        self.start = tuple(start)
        self.events = tuple(events)
        slices = [self.start]
        for k, e in enumerate(self.events):
            try:
                slices.append(apply_event(slices[-1], e))
            except DslSemanticError as exc:
                raise DslSemanticError(f"event {k}: {exc}") from None
        self.slices = tuple(slices)

    def is_closed(self) -> bool:
        return not self.slices[0] and not self.slices[-1]

    def has_dots(self) -> bool:
        return any(isinstance(e, Dot) for e in self.events)

    def has_labels(self) -> bool:
        return any(isinstance(e, Label) for e in self.events)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FoamDiagram)
            and self.basis == other.basis
            and self.start == other.start
            and self.events == other.events
        )

    def __hash__(self) -> int:
        return hash((self.basis, self.start, self.events))

    def __repr__(self) -> str:
        return f"FoamDiagram({len(self.start)} start strands, {len(self.events)} events)"

    def replace_events(self, events: Iterable[Event]) -> "FoamDiagram":
        return FoamDiagram(self.basis, self.start, events)

    def to_json(self) -> dict:
        return {
            "start": [_strand_json(s) for s in self.start],
            "events": [event_to_json(e) for e in self.events],
        }


def _strand_json(s: Strand) -> dict:
    return {"weight": s.weight.to_json(), "dir": s.dir.value}


def event_to_json(e: Event) -> dict:
    if isinstance(e, Merge):
        return {"event": "merge", "pos": e.pos, "order": e.order.value}
    if isinstance(e, Split):
        return {"event": "split", "pos": e.pos, "order": e.order.value, "left": e.left.to_json()}
    if isinstance(e, Cross):
        return {"event": "cross", "pos": e.pos}
    if isinstance(e, Cup):
        return {"event": "cup", "pos": e.pos, "weight": e.weight.to_json(), "dir": e.dir.value}
    if isinstance(e, Cap):
        return {"event": "cap", "pos": e.pos}
    if isinstance(e, Dot):
        return {"event": "dot", "pos": e.pos}
    if isinstance(e, Label):
        return {"event": "label", "pos": e.pos, "free": list(e.g.free), "tors": list(e.g.tors)}
    raise DslSemanticError(f"unknown event {e!r}")


def vertex_contribution(kind: str, order: Order, d: Dir, x: Weight, y: Weight) -> WedgeValue:
    """Local nu value of a merge/split with left thin weight x, right y."""
    zero_order = Order.L if d is Dir.UP else Order.R
    if order is zero_order:
        return WedgeValue.zero(x.basis)
    if kind == "merge":
        return wedge(x, y)
    return wedge(y, x)


def cross_contribution(a: Strand, b: Strand) -> WedgeValue:
    if a.dir == b.dir:
        return wedge(a.weight, b.weight)
    return wedge(b.weight, a.weight)


def nu(d: FoamDiagram) -> WedgeValue:
    """Sum of local contributions; the complete invariant on closed diagrams."""
    if not d.is_closed():
        raise OpenDiagram("nu needs a closed diagram")
    if d.has_dots() or d.has_labels():
        raise UnsupportedDecoration("nu is defined for undecorated diagrams")
    return nu_events(d)


def nu_events(d: FoamDiagram) -> WedgeValue:
    """Local contribution sum, ignoring closure and decorations."""
    acc = WedgeValue.zero(d.basis)
    for cur, e in zip(d.slices, d.events):
        if isinstance(e, Merge):
            a, b = cur[e.pos], cur[e.pos + 1]
            acc = acc + vertex_contribution("merge", e.order, a.dir, a.weight, b.weight)
        elif isinstance(e, Split):
            s = cur[e.pos]
            acc = acc + vertex_contribution("split", e.order, s.dir, e.left, s.weight - e.left)
        elif isinstance(e, Cross):
            acc = acc + cross_contribution(cur[e.pos], cur[e.pos + 1])
    return acc


def classify(d: FoamDiagram) -> WedgeValue:
    """nu(d); the diagram is null-cobordant iff the result is zero."""
    return nu(d)


def iet_closure(t: Iet) -> FoamDiagram:
    """Closed diagram of the braid-like foam of t: split the total strand
    into the pieces, wire the permutation by insertion sort (crossings are
    exactly the inversions), merge in target order, and close up.  All
    vertices use the zero-contributing flag, so nu = SAF/2 term by term."""
    if t.is_flipped():
        raise FlippedIet("closure is defined for unflipped IETs")
    events: list[Event] = [Cup(0, t.total, Dir.DOWN)]
    for i in range(t.r - 1):
        events.append(Split(1 + i, Order.L, t.lengths[i]))
    ranks = list(t.perm)
    changed = True
    while changed:
        changed = False
        for j in range(len(ranks) - 1):
            if ranks[j] > ranks[j + 1]:
                ranks[j], ranks[j + 1] = ranks[j + 1], ranks[j]
                events.append(Cross(1 + j))
                changed = True
    for _ in range(t.r - 1):
        events.append(Merge(1, Order.L))
    events.append(Cap(0))
    d = FoamDiagram(t.basis, [], events)
    if nu(d) != saf(t).scale("1/2"):
        raise AssertionError("closure postcondition nu == SAF/2 violated")
    return d


def disjoint_union(a: FoamDiagram, b: FoamDiagram) -> FoamDiagram:
    """Place b to the right of a.  Both must be closed."""
    if not (a.is_closed() and b.is_closed()):
        raise OpenDiagram("disjoint union of open diagrams is not supported")
    return a.replace_events(list(a.events) + list(b.events))


def mirror(d: FoamDiagram) -> FoamDiagram:
    """Left-right reflection: nu negates on closed diagrams.

    Order flags are kept letter-for-letter: the flag encoding is relative
    to the strand direction, and reflection preserves which vertices are
    the zero-contributing kind while swapping the left/right thin roles,
    so every vertex term negates (as does every crossing term)."""
    new_events: list[Event] = []
    for cur, e in zip(d.slices, d.events):
        n = len(cur)
        if isinstance(e, Merge):
            new_events.append(Merge(n - 2 - e.pos, e.order))
        elif isinstance(e, Split):
            s = cur[e.pos]
            new_events.append(Split(n - 1 - e.pos, e.order, s.weight - e.left))
        elif isinstance(e, Cross):
            new_events.append(Cross(n - 2 - e.pos))
        elif isinstance(e, Cup):
            new_events.append(Cup(n - e.pos, e.weight, e.dir.flip()))
        elif isinstance(e, Cap):
            new_events.append(Cap(n - 2 - e.pos))
        elif isinstance(e, Dot):
            new_events.append(Dot(n - 1 - e.pos))
        elif isinstance(e, Label):
            new_events.append(Label(n - 1 - e.pos, e.g))
        else:
            raise DslSemanticError(f"unknown event {e!r}")
    return FoamDiagram(d.basis, tuple(reversed(d.start)), new_events)


def u_block_events(base: int, a: Weight, b: Weight) -> list[Event]:
    """Event block of the standard crossing foam with nu = a^b, inserted as
    a separate component at strand position ``base``."""
    return [
        Cup(base, a + b, Dir.DOWN),
        Split(base + 1, Order.L, a),
        Cross(base + 1),
        Merge(base + 1, Order.L),
        Cap(base),
    ]


def u_diagram(a: Weight, b: Weight) -> FoamDiagram:
    return FoamDiagram(a.basis, [], u_block_events(0, a, b))


def circle(w: Weight, d: Dir = Dir.UP) -> FoamDiagram:
    return FoamDiagram(w.basis, [], [Cup(0, w, d), Cap(0)])


def zerofoam_class(points: Iterable[tuple[int, Weight]]) -> Weight:
    """Invariant of a weighted oriented 0-foam: the signed weight sum."""
    points = list(points)
    if not points:
        raise DslSemanticError("zerofoam_class of nothing: pass at least one basis")
    basis = points[0][1].basis
    acc = Weight(basis, {})
    for sign, w in points:
        if w.sign() != POSITIVE:
            raise NonPositiveWeight(f"0-foam point weight {w} is not positive")
        if sign not in (POSITIVE, NEGATIVE):
            raise DslSemanticError("0-foam point sign must be +1 or -1")
        acc = acc + (w if sign == POSITIVE else -w)
    return acc
