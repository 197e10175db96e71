import random
from fractions import Fraction

import pytest

from dirtop.exactnum import ONE, ZERO, Scalar
from dirtop.dfun import (
    Cell,
    PiecewiseScalarFn,
    Piece,
    TestFunction,
    compose,
    is_locally_nondecreasing,
    is_monotone_along,
    reverse_function,
)
from dirtop.plgeom import Ambient, Box, Interval, IntervalUnion, OpenSet, PLPath

from .util import grid_samples, rand_path

F = Fraction
E1 = Ambient.euclidean(1)
E2 = Ambient.euclidean(2)
T1 = Ambient.torus(1)

BIG = Box.of((-10, -10), (10, 10))
UNIT = Box.of((0, 0), (1, 1))


def first_coordinate(box=BIG):
    return TestFunction.affine(E2, box, (1, 0), 0, label="clamp(x0)")


def monotone_oracle(g: PiecewiseScalarFn) -> bool:
    """Brute force: sample piece endpoints and midpoints pairwise per component."""
    for pieces in g.components:
        ts = []
        for piece in pieces:
            ts += [piece.lo, (piece.lo + piece.hi) / 2, piece.hi]
        ts = sorted(set(ts))
        vals = [g.evaluate(t) for t in ts]
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if vals[i] > vals[j]:
                    return False
    return True


class TestValidation:
    def test_cells_must_cover_domain(self):
        with pytest.raises(ValueError, match="do not cover"):
            TestFunction(
                E2,
                OpenSet(E2, [BIG]),
                [Cell(UNIT, (Scalar(1), ZERO), ZERO)],
            )

    def test_cells_must_agree_on_shared_faces(self):
        left = Cell(Box.of((0, 0), (1, 1)), (Scalar(1), ZERO), ZERO)
        right_bad = Cell(Box.of((1, 0), (2, 1)), (ZERO, ZERO), ZERO)
        with pytest.raises(ValueError, match="disagree"):
            TestFunction(
                E2, OpenSet(E2, [Box.of((0, 0), (2, 1))]), [left, right_bad]
            )

    def test_continuous_two_cell_function_accepted(self):
        # x on [0,1], constant 1 on [1,2]: continuous at the seam
        left = Cell(Box.of((0, 0), (1, 1)), (Scalar(1), ZERO), ZERO)
        right = Cell(Box.of((1, 0), (2, 1)), (ZERO, ZERO), ONE)
        f = TestFunction(E2, OpenSet(E2, [Box.of((0, 0), (2, 1))]), [left, right])
        assert f.evaluate_lift((Scalar(F(3, 2)), Scalar(F(1, 2)))) == ONE

    def test_unclamped_range_enforced(self):
        with pytest.raises(ValueError, match="outside"):
            TestFunction(
                E2,
                OpenSet(E2, [UNIT]),
                [Cell(UNIT, (Scalar(3), ZERO), ZERO)],
                clamp=False,
            )


class TestCompose:
    def test_first_coordinate_along_unit_segment(self):
        p = PLPath.segment(E2, (0, 0), (1, 0))
        g = compose(first_coordinate(), p)
        for t in grid_samples(10):
            assert g.evaluate(t) == Scalar(t)

    def test_locally_constant_gives_constant(self):
        f = TestFunction.piecewise_constant(E2, [(UNIT, F(1, 2))])
        p = PLPath.segment(E2, (F(-1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
        g = compose(f, p)
        assert len(g.domain) == 1
        iv = g.domain.intervals[0]
        assert g.evaluate(iv.midpoint()) == Scalar(F(1, 2))

    def test_antidiagonal_saturates_sum(self):
        f = TestFunction.affine(E2, UNIT, (1, 1), 0, label="clamp(x+y)")
        p = PLPath.segment(E2, (0, 1), (1, 0))
        g = compose(f, p)
        # x + y == 1 along the anti-diagonal, so the clamped composite is 1
        iv = g.domain.intervals[0]
        assert g.evaluate(iv.midpoint()) == ONE

    def test_matches_pointwise_evaluation_on_random_data(self):
        rng = random.Random(11)
        samples = grid_samples(40)
        checked = 0
        for _ in range(70):
            p = rand_path(rng, E2)
            lo = (F(rng.randint(-12, -4), 4), F(rng.randint(-12, -4), 4))
            hi = (lo[0] + rng.randint(2, 7), lo[1] + rng.randint(2, 7))
            box = Box.of(lo, hi)
            coeffs = (F(rng.randint(-2, 2), 2), F(rng.randint(-2, 2), 2))
            f = TestFunction.affine(E2, box, coeffs, F(rng.randint(-2, 2), 2))
            g = compose(f, p)
            for t in samples:
                if g.domain.contains(t):
                    expected = f.evaluate_lift(p.evaluate_lift(t))
                    assert g.evaluate(t) == expected
                    checked += 1
        assert checked >= 1000

    def test_torus_chart_shift(self):
        chart = Box.of((F(-1, 4),), (F(1, 4),))
        f = TestFunction.affine(T1, chart, (1,), 0, label="clamp(x) near 0")
        forward = PLPath.segment(T1, (0,), (1,))
        g = compose(f, forward)
        # near t=1 the lift is t, represented in the chart as t - 1 <= 0
        assert g.evaluate(Scalar(F(9, 10))) == ZERO
        assert g.evaluate(Scalar(F(1, 8))) == Scalar(F(1, 8))


class TestMonotonicity:
    def test_constant_true(self):
        dom = IntervalUnion([Interval(ZERO, ONE, True, True)])
        g = PiecewiseScalarFn(dom, [(Piece(ZERO, ONE, ZERO, Scalar(F(1, 2))),)])
        assert is_locally_nondecreasing(g).accepting

    def test_value_drop_across_components_is_fine(self):
        dom = IntervalUnion(
            [
                Interval(ZERO, Scalar(F(1, 4)), True, False),
                Interval(Scalar(F(3, 4)), ONE, False, True),
            ]
        )
        g = PiecewiseScalarFn(
            dom,
            [
                (Piece(ZERO, Scalar(F(1, 4)), ZERO, ONE),),
                (Piece(Scalar(F(3, 4)), ONE, ZERO, ZERO),),
            ],
        )
        verdict = is_locally_nondecreasing(g)
        assert verdict.accepting and verdict.certified

    def test_decreasing_witness(self):
        dom = IntervalUnion([Interval(ZERO, ONE, True, True)])
        g = PiecewiseScalarFn(dom, [(Piece(ZERO, ONE, Scalar(-1), ONE),)])
        verdict = is_locally_nondecreasing(g)
        assert not verdict.accepting
        w = verdict.witness
        assert w.t1 < w.t2 and w.v1 > w.v2
        assert g.evaluate(w.t1) == w.v1 and g.evaluate(w.t2) == w.v2

    def test_agrees_with_brute_force_oracle(self):
        rng = random.Random(23)
        for _ in range(40):
            p = rand_path(rng, E2)
            coeffs = (F(rng.randint(-2, 2), 2), F(rng.randint(-2, 2), 2))
            f = TestFunction.affine(E2, BIG, coeffs, F(rng.randint(-4, 4), 4))
            g = compose(f, p)
            if g.domain.is_empty():
                continue
            assert is_locally_nondecreasing(g).accepting is monotone_oracle(g)


class TestMonotoneAlong:
    def test_constant_path_passes_everything(self):
        f = first_coordinate()
        p = PLPath.constant(E2, (F(1, 2), F(1, 2)))
        assert is_monotone_along(f, p).accepting

    def test_horizontal_path_passes_ordinate_threshold(self):
        f = TestFunction.affine(E2, BIG, (0, 1), F(-1, 2), label="clamp(x1 - 1/2)")
        p = PLPath.segment(E2, (0, 1), (5, 1))
        assert is_monotone_along(f, p).accepting

    def test_decreasing_first_coordinate_fails(self):
        f = first_coordinate()
        p = PLPath.segment(E2, (1, 0), (0, 0))
        verdict = is_monotone_along(f, p)
        assert not verdict.accepting
        assert verdict.witness.function is f

    def test_witness_revalidates(self):
        rng = random.Random(5)
        found = 0
        for _ in range(60):
            p = rand_path(rng, E2)
            coeffs = (F(rng.randint(-2, 2), 2), F(rng.randint(-2, 2), 2))
            f = TestFunction.affine(E2, BIG, coeffs, 0)
            verdict = is_monotone_along(f, p)
            if not verdict.accepting:
                w = verdict.witness
                g = compose(f, p)
                assert w.t1 < w.t2
                assert g.evaluate(w.t1) > g.evaluate(w.t2)
                found += 1
        assert found >= 10


class TestReverseFunction:
    def test_half_constant_is_fixed_point(self):
        f = TestFunction.affine(E2, BIG, (0, 0), F(1, 2))
        assert reverse_function(f) == f

    def test_involution(self):
        f = TestFunction.affine(E2, BIG, (1, 0), F(-1, 3))
        assert reverse_function(reverse_function(f)) == f

    def test_reversed_threshold_along_reversed_path(self):
        f = first_coordinate()
        backwards = PLPath.segment(E2, (1, 0), (0, 0))
        assert not is_monotone_along(f, backwards).accepting
        assert is_monotone_along(reverse_function(f), backwards).accepting

    def test_torus_reversed_loop_detected(self):
        chart = Box.of((F(-1, 4),), (F(1, 4),))
        f = TestFunction.affine(T1, chart, (1,), 0)
        backward = PLPath.segment(T1, (0,), (-1,))
        verdict = is_monotone_along(f, backward)
        assert not verdict.accepting
