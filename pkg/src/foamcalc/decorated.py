"""Decorated foams: flip dots and abelian group labels.

Dots mark flip (orientation-reversing) facets.  In their presence the
cobordism group is trivial, and :func:`flip_reduce` produces a certificate:
a trace of registered move applications taking any closed dotted diagram of
the braid-closure class down to the empty diagram.  Labels carry elements
of an abelian group presented by a free rank and torsion factors; their
invariant gamma pairs each labelled strand weight with the label's free
part and keeps nu as the second component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import (
    DslSemanticError,
    OpenDiagram,
    SchemaMismatch,
    UnsupportedDecoration,
)
from .exterior import TensorH1Value, WedgeValue
from .foamdiag import (
    Cap,
    Cross,
    Cup,
    Dot,
    FoamDiagram,
    Label,
    Merge,
    Order,
    Split,
    nu,
)
from .moves import MoveInstance, apply_move, move_from_json


@dataclass(frozen=True)
class AbelianGroupSpec:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise DslSemanticError("free rank must be non-negative")
        object.__setattr__(self, "torsion", tuple(int(n) for n in self.torsion))
        for n in self.torsion:
            if n < 2:
                raise DslSemanticError(f"torsion factor {n} must be at least 2")


@dataclass(frozen=True)
class GroupLabel:
    free: tuple[int, ...]
    tors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(int(n) for n in self.free))
        object.__setattr__(self, "tors", tuple(int(n) for n in self.tors))

    def __add__(self, other: "GroupLabel") -> "GroupLabel":
        if len(self.free) != len(other.free) or len(self.tors) != len(other.tors):
            raise DslSemanticError("labels of different shapes")
        return GroupLabel(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.tors, other.tors)),
        )

    def reduced(self, spec: AbelianGroupSpec) -> "GroupLabel":
        if len(self.free) != spec.free_rank or len(self.tors) != len(spec.torsion):
            raise DslSemanticError(
                f"label shape ({len(self.free)};{len(self.tors)}) does not match "
                f"the group ({spec.free_rank};{len(spec.torsion)})"
            )
        return GroupLabel(self.free, tuple(a % n for a, n in zip(self.tors, spec.torsion)))


def gamma(d: FoamDiagram, spec: AbelianGroupSpec) -> tuple[TensorH1Value, WedgeValue]:
    """(sum of weight-tensor-free-part over labels, nu of the bare diagram).
    Torsion label parts contribute nothing to the first component."""
    if not d.is_closed():
        raise OpenDiagram("gamma needs a closed diagram")
    if d.has_dots():
        raise UnsupportedDecoration("gamma is defined without flip dots")
    first = TensorH1Value.zero(d.basis, spec.free_rank)
    for cur, e in zip(d.slices, d.events):
        if isinstance(e, Label):
            g = e.g.reduced(spec)
            a = cur[e.pos].weight
            first = first + TensorH1Value([a.scale(n) for n in g.free])
    stripped = d.replace_events([e for e in d.events if not isinstance(e, Label)])
    return first, nu(stripped)


def label_merge(d: FoamDiagram, k: int) -> FoamDiagram:
    """Fuse two adjacent labels on the same strand into their product."""
    if not 0 <= k <= len(d.events) - 2:
        raise SchemaMismatch("label_merge needs two consecutive events")
    e, f = d.events[k], d.events[k + 1]
    if not (isinstance(e, Label) and isinstance(f, Label) and f.pos == e.pos):
        raise SchemaMismatch("no adjacent label pair here")
    ev = list(d.events)
    return d.replace_events(ev[:k] + [Label(e.pos, e.g + f.g)] + ev[k + 2 :])


def label_split(d: FoamDiagram, k: int) -> FoamDiagram:
    """Slide a label through a vertex seam: the label on the thick strand
    becomes the same label on both thin strands.  Unlike dots, no order
    flag is flipped."""
    if not 0 <= k <= len(d.events) - 2:
        raise SchemaMismatch("label_split needs two consecutive events")
    e, f = d.events[k], d.events[k + 1]
    ev = list(d.events)
    if isinstance(e, Merge) and isinstance(f, Label) and f.pos == e.pos:
        new = [Label(e.pos, f.g), Label(e.pos + 1, f.g), e]
        return d.replace_events(ev[:k] + new + ev[k + 2 :])
    if isinstance(e, Label) and isinstance(f, Split) and f.pos == e.pos:
        new = [f, Label(f.pos, e.g), Label(f.pos + 1, e.g)]
        return d.replace_events(ev[:k] + new + ev[k + 2 :])
    raise SchemaMismatch("no label against a vertex seam here")


# --- flip elimination ---------------------------------------------------------


def _step(d: FoamDiagram, trace: list[MoveInstance], schema: str, index: int,
          params: dict | None = None) -> FoamDiagram:
    m = MoveInstance(schema, index, params or {})
    out = apply_move(d, m)
    trace.append(m)
    return out


def _kill_dots(d: FoamDiagram, trace: list[MoveInstance]) -> FoamDiagram:
    """Split every dot off onto its own circle and kill the circle."""
    while True:
        j = next((i for i, e in enumerate(d.events) if isinstance(e, Dot)), None)
        if j is None:
            return d
        d = _step(d, trace, "dot_splitoff", j)
        d = _step(d, trace, "dotted_circle_death", len(d.events) - 3)


def _kill_crossings(d: FoamDiagram, trace: list[MoveInstance]) -> FoamDiagram:
    """Split each parallel crossing off as a standard block and kill it;
    smooth antiparallel crossings of equal weight."""
    while True:
        j = next((i for i, e in enumerate(d.events) if isinstance(e, Cross)), None)
        if j is None:
            return d
        e = d.events[j]
        a, b = d.slices[j][e.pos], d.slices[j][e.pos + 1]
        if a.dir == b.dir:
            d = _step(d, trace, "crossing_splitoff", j)
            d = _step(d, trace, "u_ab_death", len(d.events) - 5)
        elif a.weight == b.weight:
            d = _step(d, trace, "cross_smooth", j)
        else:
            raise SchemaMismatch(
                "antiparallel crossing with distinct weights: "
                "outside the reducible braid-closure class"
            )


def _normalize_flags(d: FoamDiagram, trace: list[MoveInstance]) -> FoamDiagram:
    """Turn every R-flag vertex into an L-flag one by passing a dot pair
    through it, then kill the stray dots."""
    while True:
        j = next(
            (i for i, e in enumerate(d.events)
             if isinstance(e, (Merge, Split)) and e.order is Order.R),
            None,
        )
        if j is None:
            return d
        e = d.events[j]
        if isinstance(e, Merge):
            d = _step(d, trace, "dot_pair_birth", j + 1, {"pos": e.pos})
            d = _step(d, trace, "dot_through_vertex", j, {"dir": "expand"})
        else:
            d = _step(d, trace, "dot_pair_birth", j, {"pos": e.pos})
            d = _step(d, trace, "dot_through_vertex", j + 1, {"dir": "expand"})
        d = _kill_dots(d, trace)


def _collapse(d: FoamDiagram, trace: list[MoveInstance]) -> FoamDiagram:
    """Cancel every split against a merge.  The last split is pushed along
    the word: it cancels on contact (singular saddle), re-associates past a
    touching merge, and exchanges past everything disjoint.  Its index
    strictly advances, so each split dies in finitely many steps."""
    while True:
        j = max((i for i, e in enumerate(d.events) if isinstance(e, Split)), default=None)
        if j is None:
            return d
        if j + 1 >= len(d.events):
            raise SchemaMismatch("split with nothing above it; diagram not closed")
        e, f = d.events[j], d.events[j + 1]
        if isinstance(f, Merge) and f.pos == e.pos:
            d = _step(d, trace, "singular_saddle", j)
        elif isinstance(f, Merge) and f.pos == e.pos + 1:
            d = _step(d, trace, "vertex_cobordism", j, {"pattern": "sm", "dir": "lr"})
        elif isinstance(f, Merge) and f.pos == e.pos - 1:
            d = _step(d, trace, "vertex_cobordism", j, {"pattern": "ms", "dir": "lr"})
        else:
            d = _step(d, trace, "exchange", j)


def _kill_circles(d: FoamDiagram, trace: list[MoveInstance]) -> FoamDiagram:
    while d.events:
        j = next(
            (i for i in range(len(d.events) - 1)
             if isinstance(d.events[i], Cup)
             and isinstance(d.events[i + 1], Cap)
             and d.events[i + 1].pos == d.events[i].pos),
            None,
        )
        if j is None:
            raise SchemaMismatch("residual diagram is not a union of circles")
        d = _step(d, trace, "circle_death", j)
    return d


def flip_reduce(d: FoamDiagram) -> list[MoveInstance]:
    """Certificate that d is null-cobordant once flips are allowed: a trace
    of registered moves ending at the empty diagram.  Phases: kill dots,
    split off and kill crossings, normalize vertex flags, cancel vertices,
    kill circles."""
    if not d.is_closed():
        raise OpenDiagram("flip_reduce needs a closed diagram")
    if d.has_labels():
        raise UnsupportedDecoration("flip_reduce handles dots, not labels")
    trace: list[MoveInstance] = []
    d = _kill_dots(d, trace)
    d = _kill_crossings(d, trace)
    d = _normalize_flags(d, trace)
    d = _collapse(d, trace)
    d = _kill_circles(d, trace)
    return trace


@dataclass(frozen=True)
class TraceCheck:
    ok: bool
    steps: int
    failed_at: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok, "steps": self.steps}
        if self.failed_at is not None:
            out["failed_at"] = self.failed_at
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def empty_diagram(basis) -> FoamDiagram:
    return FoamDiagram(basis, [], [])


def validate_trace(d: FoamDiagram, trace: Iterable[MoveInstance],
                   target: FoamDiagram | None = None) -> TraceCheck:
    """Replay the trace from d; every step must be a registered schema that
    applies, and the final diagram must equal the target (empty by
    default)."""
    if target is None:
        target = empty_diagram(d.basis)
    cur = d
    trace = list(trace)
    for i, m in enumerate(trace):
        try:
            cur = apply_move(cur, m)
        except SchemaMismatch as exc:
            return TraceCheck(False, len(trace), failed_at=i, reason=str(exc))
    if cur != target:
        return TraceCheck(False, len(trace), failed_at=len(trace),
                          reason="final diagram differs from the target")
    return TraceCheck(True, len(trace))


def trace_to_json(trace: Iterable[MoveInstance]) -> list:
    return [m.to_json() for m in trace]


def trace_from_json(basis, data) -> list[MoveInstance]:
    if not isinstance(data, list):
        raise DslSemanticError("a trace must be a JSON array of move records")
    return [move_from_json(basis, obj) for obj in data]
