"""Sliced foam diagrams and the nu invariant."""

from fractions import Fraction

import pytest

from foamcalc import (
    Cap,
    Cross,
    Cup,
    Dir,
    Dot,
    DslSemanticError,
    FoamDiagram,
    Iet,
    Merge,
    NonPositiveWeight,
    OpenDiagram,
    Order,
    Split,
    UnsupportedDecoration,
    WedgeValue,
    circle,
    classify,
    disjoint_union,
    iet_closure,
    mirror,
    nu,
    saf,
    u_diagram,
    wedge,
    zerofoam_class,
)

# ------------------------------------------------------------ slice rules


def test_split_then_merge_round_trip(w, basis):
    d = FoamDiagram(
        basis,
        [],
        [
            Cup(0, w("1 + 1*r2"), Dir.DOWN),
            Split(1, Order.L, w("1")),
            Merge(1, Order.L),
            Cap(0),
        ],
    )
    assert d.is_closed()
    assert [len(s) for s in d.slices] == [0, 2, 3, 2, 0]


def test_merge_needs_same_direction(w, basis):
    with pytest.raises(DslSemanticError):
        FoamDiagram(
            basis,
            [],
            [Cup(0, w("1"), Dir.UP), Merge(0, Order.L), Cap(0)],
        )


def test_split_parts_must_be_positive(w, basis):
    with pytest.raises(NonPositiveWeight):
        FoamDiagram(
            basis,
            [],
            [Cup(0, w("1"), Dir.DOWN), Split(1, Order.L, w("2"))],
        )


def test_cap_needs_equal_weights(w, basis):
    with pytest.raises(DslSemanticError):
        FoamDiagram(
            basis,
            [],
            [
                Cup(0, w("1 + 1*r2"), Dir.DOWN),
                Split(1, Order.L, w("1")),
                Cap(1),
            ],
        )


def test_event_errors_carry_index(w, basis):
    with pytest.raises(DslSemanticError) as exc_info:
        FoamDiagram(basis, [], [Cup(0, w("1"), Dir.UP), Dot(5)])
    assert "event 1" in str(exc_info.value)


# ------------------------------------------------------------ nu values


def test_u_diagram_value(w):
    a, b = w("1"), w("1*r2")
    assert nu(u_diagram(a, b)) == wedge(a, b)
    # a rationally dependent pair bounds: nu = 0
    assert nu(u_diagram(w("1"), w("3/2"))).is_zero()


def test_circle_is_trivial(w):
    assert nu(circle(w("2/3 + 5*r2"))).is_zero()


def test_closure_hand_value(w, basis):
    # cyclic shift: pieces 1 and 2 jump over piece 3, so
    # nu = l1^l3 + l2^l3 = 1^(1/2) + r2^(1/2) = -1/2 (1^r2)
    t = Iet([w("1"), w("1*r2"), w("1/2")], [2, 3, 1])
    d = iet_closure(t)
    assert nu(d) == WedgeValue(basis, {(0, 1): Fraction(-1, 2)})
    assert nu(d) == saf(t).scale(Fraction(1, 2))


def test_closure_of_swap(w):
    a, b = w("1"), w("1*r2")
    t = Iet([a, b], [2, 1])
    assert nu(iet_closure(t)) == wedge(a, b)
    assert nu(iet_closure(t)) == nu(u_diagram(a, b))


def test_mirror_negates(w):
    d = u_diagram(w("1"), w("1*r2"))
    assert nu(mirror(d)) == -nu(d)
    t = Iet([w("1"), w("1*r2"), w("1/2")], [3, 1, 2])
    c = iet_closure(t)
    assert nu(mirror(c)) == -nu(c)
    assert mirror(mirror(c)) == c
    # a foam together with its reflection bounds
    assert nu(disjoint_union(d, mirror(d))).is_zero()


def test_disjoint_union_adds(w):
    d = u_diagram(w("1"), w("1*r2"))
    e = iet_closure(Iet([w("1/2"), w("1*r2")], [2, 1]))
    assert nu(disjoint_union(d, e)) == nu(d) + nu(e)


def test_nu_preconditions(w, basis):
    from foamcalc import Strand

    open_diag = FoamDiagram(basis, [Strand(w("1"), Dir.UP)], [])
    with pytest.raises(OpenDiagram):
        nu(open_diag)
    dotted = FoamDiagram(basis, [], [Cup(0, w("1"), Dir.UP), Dot(0), Cap(0)])
    with pytest.raises(UnsupportedDecoration):
        nu(dotted)


def test_classify_is_nu(w):
    d = u_diagram(w("1"), w("1*r2"))
    assert classify(d) == nu(d)


def test_crossing_direction_rule(w):
    # parallel strands contribute left^right; antiparallel right^left
    from foamcalc import Strand
    from foamcalc.foamdiag import cross_contribution

    a, b = w("1"), w("1*r2")
    assert cross_contribution(Strand(a, Dir.UP), Strand(b, Dir.UP)) == wedge(a, b)
    assert cross_contribution(Strand(a, Dir.DOWN), Strand(b, Dir.DOWN)) == wedge(a, b)
    assert cross_contribution(Strand(a, Dir.UP), Strand(b, Dir.DOWN)) == wedge(b, a)


def test_two_circles_crossing_twice(w, basis):
    # pushing one circle across another is a cobordism to the disjoint
    # pair, so the two crossings must cancel
    a, b = w("1"), w("1*r2")
    d = FoamDiagram(
        basis,
        [],
        [
            Cup(0, a, Dir.UP),
            Cup(2, b, Dir.UP),
            Cross(1),
            Cross(1),
            Cap(2),
            Cap(0),
        ],
    )
    assert nu(d).is_zero()


# ------------------------------------------------------------ zero foams


def test_zerofoam_cancellation(w):
    x = w("5/7 + 2*r2")
    assert zerofoam_class([(1, x), (-1, x)]).is_zero()


def test_zerofoam_signed_sum(w):
    got = zerofoam_class([(1, w("1")), (1, w("1*r2")), (-1, w("1/2"))])
    assert got == w("1/2 + 1*r2")


def test_zerofoam_needs_points():
    with pytest.raises(DslSemanticError):
        zerofoam_class([])
