from fractions import Fraction

import pytest

from dirtop.exactnum import ONE, SQRT2, ZERO, Scalar
from dirtop.dspace import (
    DMap,
    DSpace,
    SchemaFamily,
    build_predicate,
    check_axioms,
    check_morphism,
    path_is_directed,
    register_predicate,
    sheaf_membership,
)
from dirtop.plgeom import Ambient, Box, OpenSet, PLPath, concat

F = Fraction
E1 = Ambient.euclidean(1)
E2 = Ambient.euclidean(2)
T1 = Ambient.torus(1)

S0 = Scalar(0)
S1 = Scalar(1)


def interval_space() -> DSpace:
    return DSpace(
        E1,
        "predicate",
        predicate=build_predicate("nondecreasing", (), E1),
        generators=SchemaFamily(E1, [("thresholds_up", (S0,))], complete=True),
        name="interval",
    )


def ex1_space() -> DSpace:
    return DSpace(
        E2,
        "predicate",
        predicate=build_predicate("horizontal_rational_ordinate", (), E2),
        generators=SchemaFamily(
            E2, [("thresholds_up", (S1,)), ("thresholds_down", (S1,))], complete=True
        ),
        name="ex1",
    )


def ex5_space() -> DSpace:
    return DSpace(
        E2,
        "predicate",
        predicate=build_predicate("piecewise_axis_parallel", (), E2),
        generators=SchemaFamily(E2, [("locally_constant", ())], complete=True),
        name="ex5",
    )


def ex3_space() -> DSpace:
    return DSpace(
        E2,
        "predicate",
        predicate=build_predicate(
            "horizontal_nondecreasing_rational_ordinate", (), E2
        ),
        generators=SchemaFamily(
            E2,
            [
                ("thresholds_up", (S0,)),
                ("thresholds_up", (S1,)),
                ("thresholds_down", (S1,)),
            ],
            complete=True,
        ),
        name="ex3",
    )


def circle_space() -> DSpace:
    return DSpace(
        T1,
        "predicate",
        predicate=build_predicate("nondecreasing", (), T1),
        generators=SchemaFamily(T1, [("thresholds_up", (S0,))], complete=True),
        name="circle",
    )


def horizontal(y, x0=0, x1=1):
    return PLPath.segment(E2, (x0, y), (x1, y))


class TestPredicateMembership:
    def test_rational_ordinate_accepted(self):
        verdict = path_is_directed(ex1_space(), horizontal(F(1, 3)))
        assert verdict.accepting and verdict.certified

    def test_irrational_ordinate_rejected(self):
        verdict = path_is_directed(ex1_space(), horizontal(SQRT2))
        assert not verdict.accepting
        assert "irrational" in verdict.detail

    def test_constant_at_irrational_ordinate_is_directed(self):
        # closure under constants holds even where the ordinate is irrational
        const = PLPath.constant(E2, (0, SQRT2))
        assert path_is_directed(ex1_space(), const).accepting

    def test_rational_slope_examples(self):
        space = DSpace(
            E2,
            "predicate",
            predicate=build_predicate("piecewise_rational_slope", (), E2),
            name="ex8",
        )
        slope_half = PLPath.segment(E2, (0, 0), (2, 1))
        assert path_is_directed(space, slope_half).accepting
        vertical = PLPath.segment(E2, (0, 0), (0, 1))
        assert not path_is_directed(space, vertical).accepting
        irrational = PLPath.segment(E2, (0, 0), (1, SQRT2))
        assert not path_is_directed(space, irrational).accepting


class TestSheafMembership:
    def test_constant_passes(self):
        space = DSpace(
            E1,
            "sheaf",
            generators=SchemaFamily(E1, [("thresholds_up", (S0,))], complete=True),
        )
        verdict = path_is_directed(space, PLPath.constant(E1, (F(1, 3),)))
        assert verdict.accepting and verdict.certified

    def test_monotone_certified_true(self):
        space = interval_space()
        p = PLPath.from_pairs(E1, [(0, (0,)), (F(1, 2), (F(1, 4),)), (1, (1,))])
        verdict = sheaf_membership(space.generators, p)
        assert verdict.accepting and verdict.certified

    def test_decreasing_rejected_with_threshold_witness(self):
        space = interval_space()
        p = PLPath.segment(E1, (1,), (0,))
        verdict = sheaf_membership(space.generators, p)
        assert not verdict.accepting
        assert verdict.witness is not None
        assert verdict.witness.v1 > verdict.witness.v2

    def test_budget_truncation_downgrades_certification(self):
        space = interval_space()
        p = PLPath.from_pairs(E1, [(0, (0,)), (F(1, 2), (F(1, 4),)), (1, (1,))])
        verdict = sheaf_membership(space.generators, p, budget=1)
        assert verdict.accepting and not verdict.certified

    def test_two_presentations_agree_on_interval(self):
        space = interval_space()
        paths = [
            PLPath.segment(E1, (0,), (1,)),
            PLPath.segment(E1, (1,), (0,)),
            PLPath.constant(E1, (F(1, 2),)),
            PLPath.from_pairs(E1, [(0, (0,)), (F(1, 2), (1,)), (1, (F(1, 2),))]),
        ]
        for p in paths:
            by_pred = path_is_directed(space, p).accepting
            by_sheaf = sheaf_membership(space.generators, p).accepting
            assert by_pred == by_sheaf


class TestCircleOrientation:
    def test_forward_loop_accepted(self):
        space = circle_space()
        loop = PLPath.segment(T1, (0,), (1,))
        assert sheaf_membership(space.generators, loop).accepting

    def test_reversed_loop_rejected_by_chart(self):
        space = circle_space()
        loop = PLPath.segment(T1, (0,), (-1,))
        verdict = sheaf_membership(space.generators, loop)
        assert not verdict.accepting
        assert "chart" in verdict.witness.function.label

    def test_no_global_generators_exist_on_circle(self):
        space = circle_space()
        loop = PLPath.segment(T1, (0,), (-1,))
        enum = space.generators.enumerate_global(loop)
        assert enum.functions == ()


class TestAxioms:
    def monotone_corpus(self):
        return [
            PLPath.segment(E1, (0,), (1,)),
            PLPath.segment(E1, (1,), (2,)),
            PLPath.constant(E1, (0,)),
            PLPath.from_pairs(E1, [(0, (0,)), (F(1, 3), (F(1, 2),)), (1, (1,))]),
        ]

    def test_interval_passes(self):
        report = check_axioms(interval_space(), self.monotone_corpus())
        assert report.ok
        assert report.constants_checked > 0
        assert report.concat_checked > 0
        assert report.reparam_checked > 0

    def test_axis_paths_closed_under_concat(self):
        space = ex5_space()
        h = PLPath.segment(E2, (0, 0), (1, 0))
        v = PLPath.segment(E2, (1, 0), (1, 1))
        report = check_axioms(space, [h, v])
        assert report.ok
        assert path_is_directed(space, concat(h, v)).accepting

    def test_broken_predicate_fails_concat_with_witness(self):
        # horizontal paths of x-span <= 1: concatenation escapes the bound
        @register_predicate("x_span_at_most_test")
        def _span(ambient, params):
            (bound,) = params

            def decide(path):
                xs = [l[0] for l in path.lifts]
                span = max(xs) - min(xs)
                if span <= bound and all(
                    l[1] == path.lifts[0][1] for l in path.lifts
                ):
                    return True, "horizontal with bounded span"
                return False, f"span {span} exceeds {bound} or not horizontal"

            return decide

        space = DSpace(
            E2,
            "predicate",
            predicate=build_predicate("x_span_at_most_test", (S1,), E2),
            name="broken",
        )
        left = PLPath.segment(E2, (0, 0), (1, 0))
        right = PLPath.segment(E2, (1, 0), (2, 0))
        report = check_axioms(space, [left, right])
        assert not report.ok
        assert any("concat" in case for case, _ in report.failures)


class TestMorphisms:
    def test_identity_is_morphism(self):
        space = interval_space()
        ident = DMap.affine(space, space, [[1]], label="identity")
        corpus = [PLPath.segment(E1, (0,), (1,)), PLPath.constant(E1, (F(1, 2),))]
        assert check_morphism(ident, corpus).accepting

    def product_interval_squared(self):
        return DSpace(
            E2,
            "predicate",
            predicate=build_predicate("nondecreasing", (), E2),
            generators=SchemaFamily(
                E2,
                [("thresholds_up", (S0,)), ("thresholds_up", (S1,))],
                complete=True,
            ),
            name="interval x interval",
        )

    def test_first_projection_is_morphism(self):
        square = self.product_interval_squared()
        line = interval_space()
        proj = DMap.affine(square, line, [[1, 0]], label="first projection")
        corpus = [
            PLPath.from_pairs(
                E2, [(0, (0, 0)), (F(1, 2), (F(1, 2), 0)), (1, (1, 1))]
            ),
            PLPath.constant(E2, (0, 0)),
            PLPath.segment(E2, (0, 1), (1, 0)),  # not directed; must be skipped
        ]
        assert check_morphism(proj, corpus, mode="path").accepting
        assert check_morphism(proj, corpus, mode="function").accepting

    def test_function_mode_implies_path_mode(self):
        square = self.product_interval_squared()
        line = interval_space()
        corpus = [
            PLPath.segment(E2, (0, 0), (1, 1)),
            PLPath.segment(E2, (1, 1), (0, 0)),
            PLPath.constant(E2, (F(1, 2), F(1, 2))),
        ]
        for matrix in ([[1, 0]], [[0, 1]], [[1, 1]]):
            fmap = DMap.affine(square, line, matrix)
            fn_mode = check_morphism(fmap, corpus, mode="function")
            path_mode = check_morphism(fmap, corpus, mode="path")
            if fn_mode.accepting:
                assert path_mode.accepting

    def test_swap_on_ex3_is_not_morphism(self):
        space = ex3_space()
        swap = DMap.affine(space, space, [[0, 1], [1, 0]], label="swap")
        corpus = [horizontal(F(1, 3))]
        verdict = check_morphism(swap, corpus, mode="path")
        assert not verdict.accepting
        assert "varies" in verdict.detail or "not directed" in verdict.detail

    def test_torus_identity_requires_integer_matrix(self):
        space = circle_space()
        with pytest.raises(ValueError, match="integer"):
            DMap.affine(space, space, [[F(1, 2)]])
        ident = DMap.affine(space, space, [[1]])
        loop = PLPath.segment(T1, (0,), (1,))
        assert check_morphism(ident, [loop]).accepting


class TestLocallyConstantFamily:
    def test_never_rejects_but_documents_components(self):
        space = ex5_space()
        diagonal = PLPath.segment(E2, (0, 0), (1, 1))
        verdict = sheaf_membership(space.generators, diagonal)
        assert verdict.accepting and verdict.certified
        enum = space.generators.enumerate(diagonal)
        labels = [f.label for f in enum.functions]
        assert any("1 near start" in l for l in labels)

    def test_loop_skips_two_region_section(self):
        family = SchemaFamily(T1, [("locally_constant", ())], complete=True)
        loop = PLPath.segment(T1, (0,), (1,))
        enum = family.enumerate(loop)
        assert all("near start" not in f.label for f in enum.functions)
