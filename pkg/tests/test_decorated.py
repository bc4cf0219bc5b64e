"""Decorated diagrams: flip elimination certificates and label invariants."""

import random

import pytest

from foamcalc import (
    AbelianGroupSpec,
    Cap,
    Cup,
    Dir,
    Dot,
    DslSemanticError,
    FoamDiagram,
    GroupLabel,
    Label,
    Merge,
    OpenDiagram,
    Order,
    SchemaMismatch,
    Split,
    Strand,
    TensorH1Value,
    UnsupportedDecoration,
    empty_diagram,
    flip_reduce,
    gamma,
    label_merge,
    label_split,
    nu,
    trace_from_json,
    trace_to_json,
    u_diagram,
    validate_trace,
    wedge,
)
from foamcalc.acceptance import demo_basis, rand_dotted_diagram, rand_labeled_diagram

# ------------------------------------------------------------- flip traces


def test_empty_diagram_reduces_to_nothing(basis):
    d = empty_diagram(basis)
    assert flip_reduce(d) == []
    assert validate_trace(d, [])


def test_dotted_circle_reduces(w, basis):
    d = FoamDiagram(basis, [], [Cup(0, w("1 + 1*r2"), Dir.UP), Dot(0), Cap(0)])
    trace = flip_reduce(d)
    assert trace
    chk = validate_trace(d, trace)
    assert chk.ok and chk.steps == len(trace)


def test_nontrivial_nu_still_reduces_with_flips(w):
    # nu(U) is nonzero, so U bounds only once flips are in play
    d = u_diagram(w("1"), w("1*r2"))
    assert not nu(d).is_zero()
    assert validate_trace(d, flip_reduce(d))


def test_corrupted_trace_fails_at_the_right_step(w, basis):
    d = FoamDiagram(basis, [], [Cup(0, w("1"), Dir.UP), Dot(0), Cap(0)])
    trace = flip_reduce(d)
    bad = list(trace)
    bad[1] = type(bad[1])(bad[1].schema, 99, bad[1].params)
    chk = validate_trace(d, bad)
    assert not chk.ok
    assert chk.failed_at == 1
    assert chk.reason


def test_truncated_trace_misses_target(w, basis):
    d = FoamDiagram(basis, [], [Cup(0, w("1"), Dir.UP), Dot(0), Cap(0)])
    trace = flip_reduce(d)
    chk = validate_trace(d, trace[:-1])
    assert not chk.ok
    assert chk.failed_at == len(trace) - 1
    assert "target" in chk.reason


def test_trace_json_round_trip(w, basis):
    d = FoamDiagram(basis, [], [Cup(0, w("1*r2"), Dir.DOWN), Dot(1), Cap(0)])
    trace = flip_reduce(d)
    back = trace_from_json(basis, trace_to_json(trace))
    assert back == trace
    with pytest.raises(DslSemanticError):
        trace_from_json(basis, {"not": "a list"})


def test_flip_reduce_preconditions(w, basis):
    with pytest.raises(OpenDiagram):
        flip_reduce(FoamDiagram(basis, [Strand(w("1"), Dir.UP)], []))
    labeled = FoamDiagram(
        basis,
        [],
        [Cup(0, w("1"), Dir.UP), Label(0, GroupLabel((1,), ())), Cap(0)],
    )
    with pytest.raises(UnsupportedDecoration):
        flip_reduce(labeled)


def test_flip_reduce_random_corpus():
    basis = demo_basis("r2", "r3")
    rng = random.Random(23)
    total_steps = 0
    for _ in range(25):
        d = rand_dotted_diagram(rng, basis)
        trace = flip_reduce(d)
        assert validate_trace(d, trace), trace
        total_steps += len(trace)
    assert total_steps > 25


# ------------------------------------------------------------- gamma


def _labeled_circle(w, basis, labels):
    events = [Cup(0, w, Dir.UP)]
    events += [Label(0, g) for g in labels]
    events.append(Cap(0))
    return FoamDiagram(basis, [], events)


def test_gamma_hand_value(w, basis):
    spec = AbelianGroupSpec(1)
    d = _labeled_circle(
        w("1"), basis, [GroupLabel((2,), ()), GroupLabel((-1,), ())]
    )
    first, second = gamma(d, spec)
    assert first == TensorH1Value([w("1")])
    assert second.is_zero()


def test_gamma_keeps_nu_of_stripped_diagram(w, basis):
    d = u_diagram(w("1"), w("1*r2"))
    labeled = d.replace_events(
        list(d.events[:2]) + [Label(1, GroupLabel((1,), ()))] + list(d.events[2:])
    )
    first, second = gamma(labeled, AbelianGroupSpec(1))
    assert second == wedge(w("1"), w("1*r2"))


def test_gamma_torsion_is_invisible_to_the_free_part(w, basis):
    spec = AbelianGroupSpec(1, (2,))
    d = _labeled_circle(
        w("1*r2"), basis, [GroupLabel((3,), (1,)), GroupLabel((0,), (1,))]
    )
    first, _ = gamma(d, spec)
    assert first == TensorH1Value([w("3*r2")])


def test_gamma_reduces_labels_mod_torsion(w, basis):
    spec = AbelianGroupSpec(0, (3,))
    d = _labeled_circle(w("1"), basis, [GroupLabel((), (5,))])
    first, second = gamma(d, spec)
    assert first == TensorH1Value.zero(basis, 0)
    assert second.is_zero()


def test_gamma_preconditions(w, basis):
    with pytest.raises(OpenDiagram):
        gamma(FoamDiagram(basis, [Strand(w("1"), Dir.UP)], []), AbelianGroupSpec(1))
    dotted = FoamDiagram(basis, [], [Cup(0, w("1"), Dir.UP), Dot(0), Cap(0)])
    with pytest.raises(UnsupportedDecoration):
        gamma(dotted, AbelianGroupSpec(1))
    bad_shape = _labeled_circle(w("1"), basis, [GroupLabel((1, 2), ())])
    with pytest.raises(DslSemanticError):
        gamma(bad_shape, AbelianGroupSpec(1))


# ------------------------------------------------------------- label moves


def test_label_merge_hand_case(w, basis):
    spec = AbelianGroupSpec(1)
    d = _labeled_circle(
        w("1"), basis, [GroupLabel((2,), ()), GroupLabel((-1,), ())]
    )
    merged = label_merge(d, 1)
    assert sum(isinstance(e, Label) for e in merged.events) == 1
    assert gamma(merged, spec) == gamma(d, spec)
    with pytest.raises(SchemaMismatch):
        label_merge(d, 0)


def test_label_split_through_merge_vertex(w, basis):
    a, b = w("1"), w("1*r2")
    spec = AbelianGroupSpec(1)
    d = FoamDiagram(
        basis,
        [],
        [
            Cup(0, a + b, Dir.DOWN),
            Split(1, Order.L, a),
            Merge(1, Order.L),
            Label(1, GroupLabel((1,), ())),
            Cap(0),
        ],
    )
    moved = label_split(d, 2)
    assert sum(isinstance(e, Label) for e in moved.events) == 2
    assert gamma(moved, spec) == gamma(d, spec)


def test_label_moves_random_corpus():
    basis = demo_basis("r2")
    rng = random.Random(31)
    spec = AbelianGroupSpec(1, (2,))
    checked = 0
    for _ in range(20):
        d = rand_labeled_diagram(rng, basis, spec)
        base = gamma(d, spec)
        for k in range(len(d.events) - 1):
            for op in (label_merge, label_split):
                try:
                    moved = op(d, k)
                except SchemaMismatch:
                    continue
                assert gamma(moved, spec) == base, (op.__name__, k)
                checked += 1
    assert checked > 10
