from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from micp_forge.convex import linear_max, vertices_and_rays
from micp_forge.errors import MicpError
from micp_forge.fixtures import figure2_pwl
from micp_forge.formulations import enumerate_slices, slice_set
from micp_forge.pwl import (
    NotPeriodic,
    PwlFunction,
    PwlPeriod,
    Segment,
    SegmentSet,
    decomposition_window,
    detect_pwl_period,
    graph_segments,
    minimal_period,
    pwl_decompose,
    pwl_to_milp,
)

slopes = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def slice_segments(F, window):
    fam = enumerate_slices(F, window)
    out = set()
    for S in fam.slices.values():
        vs = sorted(vertices_and_rays(S).vertices)
        assert len(vs) == 2 and vs[1][0] - vs[0][0] == 1, "slice is not a unit-step segment"
        out.add(tuple(vs))
    return out


def brute_min_period(word):
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and all(word[i] == word[i % p] for i in range(n)):
            return p


def test_figure2_values_and_detection():
    P = figure2_pwl()
    assert [P.value(i) for i in range(5)] == [1, 0, Q(3, 2), 3, Q(9, 2)]
    assert detect_pwl_period(P, "global") == NotPeriodic(1, 1)
    assert detect_pwl_period(P) == PwlPeriod(1, 1)


def test_figure2_decomposition():
    dec = pwl_decompose(figure2_pwl())
    assert dec.head.segments == (Segment(0, Q(1), Q(-1)),)
    assert dec.period == PwlPeriod(1, 1)
    got = slice_segments(dec.formulation, decomposition_window(dec, 30))
    top = int(max(seg[0][0] for seg in got))
    assert top >= 30 and got == graph_segments(figure2_pwl(), top + 1)


def test_figure2_tail_slices():
    P = figure2_pwl()
    F = pwl_to_milp(P, origin=1)
    for lam in range(4):
        S = slice_set(F, (1, lam))
        assert sorted(vertices_and_rays(S).vertices) == [(1 + lam, Q(3, 2) * lam), (2 + lam, Q(3, 2) * (lam + 1))]


@pytest.mark.parametrize("P,want", [
    (PwlFunction((0,), (1, -1)), PwlPeriod(0, 2)),
    (PwlFunction((0,), (Q(5, 2),)), PwlPeriod(0, 1)),
    (PwlFunction((0,), (1, 1, 1)), PwlPeriod(0, 1)),
    (PwlFunction((0, 1, 0), (1, -1)), PwlPeriod(0, 2)),
    (PwlFunction((0, 5, 0, 1), (1, -1)), PwlPeriod(3, 2)),
    (PwlFunction((0, 5, 0, -1), (1, -1)), PwlPeriod(2, 2)),
])
def test_detect_examples(P, want):
    assert detect_pwl_period(P) == want


def test_zigzag_slice():
    F = pwl_to_milp(PwlFunction((0,), (1, -1)))
    S = slice_set(F, (1, 0, 3))
    assert sorted(vertices_and_rays(S).vertices) == [(6, 0), (7, 1)]


def test_identity_slope_line():
    F = pwl_to_milp(PwlFunction((0,), (1,)))
    for lam in range(5):
        assert sorted(vertices_and_rays(slice_set(F, (1, lam))).vertices) == [(lam, lam), (lam + 1, lam + 1)]


def test_global_compile_rejects_head():
    with pytest.raises(MicpError, match="pwl_decompose"):
        pwl_to_milp(figure2_pwl())


def test_globally_periodic_decompose_has_empty_head():
    P = PwlFunction((0,), (1, -1))
    dec = pwl_decompose(P)
    assert len(dec.head) == 0 and dec.formulation is dec.tail_formulation


def test_three_prefix_slopes_then_constant_block():
    P = PwlFunction((0, 3, -1, Q(1, 2)), (2,))
    dec = pwl_decompose(P)
    assert len(dec.head) == 3 and dec.period.t == 1
    got = slice_segments(dec.formulation, decomposition_window(dec, 30))
    top = int(max(seg[0][0] for seg in got))
    assert top >= 30 and got == graph_segments(P, top + 1)


def test_segment_set_invariants():
    with pytest.raises(MicpError):
        SegmentSet((Segment(0, Q(0), Q(1)), Segment(1, Q(2), Q(0))))
    SegmentSet((Segment(0, Q(0), Q(1)), Segment(1, Q(2), Q(0))), graph=False)
    with pytest.raises(MicpError):
        SegmentSet((Segment(0, Q(0), Q(1)), Segment(0, Q(0), Q(1))))


def test_pwl_function_validation_and_interpolation():
    with pytest.raises(MicpError):
        PwlFunction((), (1,))
    with pytest.raises(MicpError):
        PwlFunction((0,), ())
    P = figure2_pwl()
    assert P.at(Q(1, 2)) == Q(1, 2) and P.at(Q(5, 2)) == Q(9, 4)
    assert P.shifted(3).value(0) == 3 and P.shifted(3).value(2) == 6


@settings(max_examples=200)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=12))
def test_minimal_period_matches_brute(word):
    assert minimal_period(word) == brute_min_period(word)


@settings(max_examples=25)
@given(st.lists(slopes, min_size=0, max_size=3), st.lists(slopes, min_size=1, max_size=3), slopes)
def test_graph_equality_and_full_segments(prefix_slopes, block, start):
    vals = [start]
    for c in prefix_slopes:
        vals.append(vals[-1] + c)
    P = PwlFunction(tuple(vals), tuple(block))
    dec = pwl_decompose(P)
    thr, t = dec.period.threshold, dec.period.t
    window = decomposition_window(dec, 30)
    fam = enumerate_slices(dec.formulation, window)
    segs = set()
    for S in fam.slices.values():
        # endpoints from directional maxima: the slice is exactly a unit segment
        hi = linear_max(S, (1, 0))
        lo = -linear_max(S, (-1, 0))
        assert hi - lo == 1 and lo.denominator == 1
        i = int(lo)
        segs.add(((Q(i), P.value(i)), (Q(i + 1), P.value(i + 1))))
        vs = sorted(vertices_and_rays(S).vertices)
        assert vs == [(Q(i), P.value(i)), (Q(i + 1), P.value(i + 1))]
    top = max(s[0][0] for s in segs)
    assert segs == graph_segments(P, int(top) + 1) and top >= 30
    # the slope word is t-periodic from the threshold and t is minimal
    assert all(P.slope(i) == P.slope(i + t) for i in range(thr, thr + 40))
    for t2 in range(1, 3 * len(block) + 1):
        if all(P.slope(i) == P.slope(i + t2) for i in range(thr, thr + 60)):
            assert t2 % t == 0


@settings(max_examples=25)
@given(st.lists(slopes, min_size=1, max_size=4), slopes)
def test_translation_vector_correspondence(block, start):
    P = PwlFunction((start,), tuple(block))
    per = detect_pwl_period(P, "global")
    assert isinstance(per, PwlPeriod) and per.threshold == 0
    t = per.t
    r = (t, P.value(t) - P.value(0))
    pts = {(Q(i, 2), P.at(Q(i, 2))) for i in range(0, 80)}
    for x, y in pts:
        if x + r[0] < 40:
            assert (x + r[0], y + r[1]) in pts
    # integer shifts preserving the sampled graph are multiples of t
    for s in range(1, 3 * len(block) + 1):
        dy = P.value(s) - P.value(0)
        if all((x + s, y + dy) in pts for x, y in pts if x + s < 40):
            assert s % t == 0
