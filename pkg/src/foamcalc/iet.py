"""Interval exchange transformations and the SAF invariant.

An IET is stored as positive lengths lambda_1..lambda_r plus a permutation
sigma given as an image array: sigma(i) is the rank of piece i in the target
order (1-based).  Optional per-piece flip flags turn a piece's translation
into the order-reversing map of that piece.

SAF(T) = 2 * sum over inverted pairs (i < j with sigma(j) < sigma(i)) of
lambda_i ^ lambda_j, an element of the exterior square over Q.  It is
refused for flipped IETs, whose cobordism theory is handled elsewhere.
"""

from __future__ import annotations

from functools import cmp_to_key

from .errors import (
    DslSemanticError,
    FlippedIet,
    NonPositiveWeight,
    OutOfDomain,
    TotalMismatch,
)
from .exterior import WedgeValue, wedge
from .weights import POSITIVE, GeneratorBasis, Weight, weight_cmp


class Iet:
    __slots__ = ("lengths", "perm", "flips", "total", "basis")

    def __init__(self, lengths, perm, flips=None):
        lengths = tuple(lengths)
        perm = tuple(int(k) for k in perm)
        if not lengths:
            raise DslSemanticError("an IET needs at least one piece")
        r = len(lengths)
        if sorted(perm) != list(range(1, r + 1)):
            raise DslSemanticError(f"perm {list(perm)} is not a bijection of 1..{r}")
        if flips is None:
            flips = (False,) * r
        else:
            flips = tuple(bool(f) for f in flips)
            if len(flips) != r:
                raise DslSemanticError("flips length differs from lengths")
        basis = lengths[0].basis
        total = Weight(basis, {})
        for lam in lengths:
            if lam.sign() != POSITIVE:
                raise NonPositiveWeight(f"piece length {lam} is not positive")
            total = total + lam
        self.lengths = lengths
        self.perm = perm
        self.flips = flips
        self.total = total
        self.basis = basis

    @classmethod
    def identity(cls, total: Weight) -> "Iet":
        return cls([total], [1])

    @property
    def r(self) -> int:
        return len(self.lengths)

    def is_flipped(self) -> bool:
        return any(self.flips)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Iet)
            and self.lengths == other.lengths
            and self.perm == other.perm
            and self.flips == other.flips
        )

    def __hash__(self) -> int:
        return hash((self.lengths, self.perm, self.flips))

    def __repr__(self) -> str:
        flip = f", flips={list(self.flips)}" if self.is_flipped() else ""
        return f"Iet(lengths={list(self.lengths)}, perm={list(self.perm)}{flip})"

    def source_starts(self) -> list[Weight]:
        starts, acc = [], Weight(self.basis, {})
        for lam in self.lengths:
            starts.append(acc)
            acc = acc + lam
        return starts

    def target_starts(self) -> list[Weight]:
        """Start of each piece's image, indexed like the pieces."""
        order = sorted(range(self.r), key=lambda i: self.perm[i])
        starts = [None] * self.r
        acc = Weight(self.basis, {})
        for i in order:
            starts[i] = acc
            acc = acc + self.lengths[i]
        return starts

    def to_json(self) -> dict:
        return {
            "lengths": [lam.to_json() for lam in self.lengths],
            "perm": list(self.perm),
            "flips": [bool(f) for f in self.flips],
        }

    def canonical(self) -> "Iet":
        """Coalesce adjacent pieces that continue each other in source and
        image with the same orientation.  The underlying map is unchanged."""
        pieces = list(zip(self.lengths, self.source_starts(), self.target_starts(), self.flips))
        merged: list[list] = []
        for lam, s, u, f in pieces:
            if merged:
                plam, ps, pu, pf = merged[-1]
                if pf == f and (
                    (not f and u == pu + plam) or (f and pu == u + lam)
                ):
                    merged[-1] = [plam + lam, ps, u if f else pu, f]
                    continue
            merged.append([lam, s, u, f])
        return _from_pieces(self.basis, [(s, lam, u, f) for lam, s, u, f in merged])


def _from_pieces(basis: GeneratorBasis, pieces) -> Iet:
    """Build an Iet from (source_start, length, image_start, flip) tuples
    already sorted by source start and tiling [0, total)."""
    ranked = sorted(
        range(len(pieces)), key=cmp_to_key(lambda a, b: weight_cmp(pieces[a][2], pieces[b][2]))
    )
    perm = [0] * len(pieces)
    for rank, idx in enumerate(ranked, start=1):
        perm[idx] = rank
    return Iet([p[1] for p in pieces], perm, [p[3] for p in pieces])


def iet_displacements(t: Iet) -> list[Weight]:
    """Exact displacement of each piece: image start minus source start."""
    if t.is_flipped():
        raise FlippedIet("displacements are defined for unflipped IETs only")
    src = t.source_starts()
    tgt = t.target_starts()
    return [u - s for s, u in zip(src, tgt)]


def saf(t: Iet) -> WedgeValue:
    """2 * sum of lambda_i ^ lambda_j over inverted pairs of sigma."""
    if t.is_flipped():
        raise FlippedIet("SAF is refused for flipped IETs")
    acc = WedgeValue.zero(t.basis)
    for i in range(t.r):
        for j in range(i + 1, t.r):
            if t.perm[j] < t.perm[i]:
                acc = acc + wedge(t.lengths[i], t.lengths[j])
    return acc.scale(2)


def iet_compose(second: Iet, first: Iet) -> Iet:
    """The composite map second(first(x)) on the common refinement.

    Zero-length refinement pieces are dropped and adjacent pieces that
    continue each other are coalesced, so inverse pairs compose to the
    one-piece identity.
    """
    if first.basis != second.basis:
        raise TotalMismatch("IETs over different bases")
    if not (first.total - second.total).is_zero():
        raise TotalMismatch("IETs have different total lengths")

    b_starts = second.source_starts() + [second.total]
    v_starts = second.target_starts()

    sub: list[tuple[Weight, Weight, Weight, bool]] = []
    f_src = first.source_starts()
    f_tgt = first.target_starts()
    for i in range(first.r):
        s, lam, u, f1 = f_src[i], first.lengths[i], f_tgt[i], first.flips[i]
        hi = u + lam
        cuts = [u]
        for k in range(1, second.r):
            bk = b_starts[k]
            if weight_cmp(bk, u) > 0 and weight_cmp(bk, hi) < 0:
                cuts.append(bk)
        cuts.append(hi)
        for c, d in zip(cuts, cuts[1:]):
            seg = d - c
            if seg.is_zero():
                continue
            k = _piece_containing(second, b_starts, c)
            f2 = second.flips[k]
            if f2:
                y0 = v_starts[k] + (b_starts[k] + second.lengths[k] - d)
            else:
                y0 = v_starts[k] + (c - b_starts[k])
            if f1:
                x0 = s + (hi - d)
            else:
                x0 = s + (c - u)
            sub.append((x0, seg, y0, f1 != f2))

    sub.sort(key=cmp_to_key(lambda a, b: weight_cmp(a[0], b[0])))
    composite = _from_pieces(first.basis, sub)
    return composite.canonical()


def _piece_containing(t: Iet, starts: list[Weight], x: Weight) -> int:
    for k in range(t.r):
        if weight_cmp(x, starts[k]) >= 0 and weight_cmp(x, starts[k + 1]) < 0:
            return k
    raise OutOfDomain(f"{x} outside [0, {t.total})")


def iet_inverse(t: Iet) -> Iet:
    """Pieces reindexed by target rank; flips are preserved per piece."""
    inv_index = [0] * t.r
    for i in range(t.r):
        inv_index[t.perm[i] - 1] = i
    lengths = [t.lengths[i] for i in inv_index]
    perm = [i + 1 for i in inv_index]
    flips = [t.flips[i] for i in inv_index]
    return Iet(lengths, perm, flips)


def iet_apply(t: Iet, x: Weight) -> Weight:
    """Image of x under the piecewise map.

    On a flipped piece [s, s+l) the interior maps by x -> u + (s + l - x)
    and the left endpoint maps to u, keeping the piece image half-open.
    """
    if x.sign() == -1:
        raise OutOfDomain(f"{x} is negative")
    if weight_cmp(x, t.total) >= 0:
        raise OutOfDomain(f"{x} is not below the total {t.total}")
    src = t.source_starts()
    tgt = t.target_starts()
    for i in reversed(range(t.r)):
        c = weight_cmp(x, src[i])
        if c >= 0:
            if not t.flips[i]:
                return tgt[i] + (x - src[i])
            if c == 0:
                return tgt[i]
            return tgt[i] + (src[i] + t.lengths[i] - x)
    raise OutOfDomain(f"no piece contains {x}")


def same_map(a: Iet, b: Iet) -> bool:
    """Equality as maps: canonical forms agree structurally."""
    return a.canonical() == b.canonical()
