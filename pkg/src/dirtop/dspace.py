"""Directed-space presentations, membership checks, axioms, and morphisms.

A :class:`DSpace` is presented either by a named path predicate (membership
decided directly) or by a generating family of test functions (membership =
every enumerated generator is monotone along the path; exact when the family
is marked complete, budget-qualified otherwise).  Sheaf-presented spaces are
saturated by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .dfun import TestFunction, is_monotone_along, reverse_function
from .exactnum import ONE, ZERO, Scalar, ScalarLike
from .plgeom import (
    Ambient,
    Box,
    OpenSet,
    PLPath,
    Point,
    box_crossing_events,
    concat,
    reparameterize,
    standard_reparams,
)
from .verdict import Verdict

__all__ = [
    "PathPredicate",
    "register_predicate",
    "build_predicate",
    "GeneratorFamily",
    "SchemaFamily",
    "RestrictedFamily",
    "ReversedFamily",
    "ProductFamily",
    "Enumeration",
    "register_generator_schema",
    "DSpace",
    "path_is_directed",
    "AxiomReport",
    "check_axioms",
    "MapCell",
    "DMap",
    "check_morphism",
]

_QUARTER = Scalar(Fraction(1, 4))
_HALF = Scalar(Fraction(1, 2))


# -- path predicates ----------------------------------------------------------

DecideFn = Callable[[PLPath], tuple[bool, str]]
PredicateBuilder = Callable[[Ambient, tuple[Scalar, ...]], DecideFn]

_PREDICATES: dict[str, PredicateBuilder] = {}


def register_predicate(name: str) -> Callable[[PredicateBuilder], PredicateBuilder]:
    def wrap(builder: PredicateBuilder) -> PredicateBuilder:
        if name in _PREDICATES:
            raise ValueError(f"predicate schema {name!r} already registered")
        _PREDICATES[name] = builder
        return builder

    return wrap


@dataclass(frozen=True)
class PathPredicate:
    """A named, parameterized decision procedure for path membership."""

    name: str
    params: tuple[Scalar, ...]
    ambient: Ambient

    def __post_init__(self) -> None:
        if self.name not in _PREDICATES:
            raise ValueError(f"unknown predicate schema {self.name!r}")
        object.__setattr__(
            self, "_decide", _PREDICATES[self.name](self.ambient, self.params)
        )

    def decide(self, path: PLPath) -> tuple[bool, str]:
        if path.ambient != self.ambient:
            raise ValueError("ambient mismatch")
        return self._decide(path)

    def spec(self) -> str:
        args = ", ".join(str(p) for p in self.params)
        return f"{self.name}({args})"


def build_predicate(
    name: str, params: Iterable[ScalarLike], ambient: Ambient
) -> PathPredicate:
    return PathPredicate(name, tuple(Scalar.of(p) for p in params), ambient)


def _require_dim(ambient: Ambient, dim: int, name: str) -> None:
    if ambient.dim != dim:
        raise ValueError(f"predicate {name} needs dimension {dim}, got {ambient.dim}")


def _deltas(path: PLPath):
    for a, b in zip(path.lifts, path.lifts[1:]):
        yield tuple(y - x for x, y in zip(a, b))


@register_predicate("all_paths")
def _all_paths(ambient, params):
    return lambda path: (True, "every path is accepted")


@register_predicate("constant_only")
def _constant_only(ambient, params):
    def decide(path):
        if path.is_constant():
            return True, "constant path"
        return False, "path is not constant"

    return decide


@register_predicate("nondecreasing")
def _nondecreasing(ambient, params):
    def decide(path):
        for i, d in enumerate(_deltas(path)):
            for axis, v in enumerate(d):
                if v < ZERO:
                    return False, f"coordinate {axis} decreases on segment {i}"
        return True, "all lift coordinates non-decreasing"

    return decide


def _is_horizontal(path: PLPath) -> bool:
    return all(l[1] == path.lifts[0][1] for l in path.lifts)


@register_predicate("horizontal_any")
def _horizontal_any(ambient, params):
    _require_dim(ambient, 2, "horizontal_any")

    def decide(path):
        if _is_horizontal(path):
            return True, "second coordinate constant"
        return False, "second coordinate varies"

    return decide


@register_predicate("vertical_any")
def _vertical_any(ambient, params):
    _require_dim(ambient, 2, "vertical_any")

    def decide(path):
        if all(l[0] == path.lifts[0][0] for l in path.lifts):
            return True, "first coordinate constant"
        return False, "first coordinate varies"

    return decide


@register_predicate("horizontal_rational_ordinate")
def _horizontal_rational_ordinate(ambient, params):
    _require_dim(ambient, 2, "horizontal_rational_ordinate")

    def decide(path):
        if path.is_constant():
            return True, "constant path"
        if not _is_horizontal(path):
            return False, "second coordinate varies"
        ordinate = path.lifts[0][1]
        if ordinate.is_rational():
            return True, f"horizontal at rational ordinate {ordinate}"
        return False, f"ordinate {ordinate} is irrational"

    return decide


@register_predicate("horizontal_nondecreasing")
def _horizontal_nondecreasing(ambient, params):
    _require_dim(ambient, 2, "horizontal_nondecreasing")

    def decide(path):
        if not _is_horizontal(path):
            return False, "second coordinate varies"
        for i, d in enumerate(_deltas(path)):
            if d[0] < ZERO:
                return False, f"first coordinate decreases on segment {i}"
        return True, "horizontal with non-decreasing first coordinate"

    return decide


@register_predicate("horizontal_nondecreasing_rational_ordinate")
def _horizontal_nondecreasing_rational_ordinate(ambient, params):
    _require_dim(ambient, 2, "horizontal_nondecreasing_rational_ordinate")
    inner = _PREDICATES["horizontal_nondecreasing"](ambient, ())

    def decide(path):
        if path.is_constant():
            return True, "constant path"
        ok, why = inner(path)
        if not ok:
            return ok, why
        ordinate = path.lifts[0][1]
        if ordinate.is_rational():
            return True, f"non-decreasing horizontal at rational ordinate {ordinate}"
        return False, f"ordinate {ordinate} is irrational"

    return decide


@register_predicate("piecewise_axis_parallel")
def _piecewise_axis_parallel(ambient, params):
    def decide(path):
        for i, d in enumerate(_deltas(path)):
            moving = [axis for axis, v in enumerate(d) if v != ZERO]
            if len(moving) > 1:
                return False, f"segment {i} moves in coordinates {moving}"
        return True, "every segment is axis-parallel"

    return decide


@register_predicate("piecewise_axis_parallel_nondecreasing")
def _piecewise_axis_parallel_nondecreasing(ambient, params):
    parallel = _PREDICATES["piecewise_axis_parallel"](ambient, ())
    monotone = _PREDICATES["nondecreasing"](ambient, ())

    def decide(path):
        ok, why = parallel(path)
        if not ok:
            return ok, why
        return monotone(path)

    return decide


@register_predicate("piecewise_rational_slope")
def _piecewise_rational_slope(ambient, params):
    _require_dim(ambient, 2, "piecewise_rational_slope")

    def decide(path):
        for i, d in enumerate(_deltas(path)):
            if d == (ZERO, ZERO):
                continue
            if d[0] == ZERO:
                return False, f"segment {i} is vertical (infinite slope)"
            slope = d[1] / d[0]
            if not slope.is_rational():
                return False, f"segment {i} has irrational slope {slope}"
        return True, "all segments have rational slope"

    return decide


@register_predicate("constant_or_avoids_zero")
def _constant_or_avoids_zero(ambient, params):
    _require_dim(ambient, 1, "constant_or_avoids_zero")

    def decide(path):
        if path.is_constant():
            return True, "constant path"
        signs = {l[0].sign() for l in path.lifts}
        if 0 in signs:
            return False, "path passes through 0"
        if len(signs) > 1:
            return False, "path crosses 0"
        return True, "path avoids 0"

    return decide


@register_predicate("chord_paths")
def _chord_paths(ambient, params):
    """Directed paths of the chord space: constants, or monotone runs inside
    one registered chord, ordered from its rational to its irrational end."""
    _require_dim(ambient, 3, "chord_paths")
    if len(params) % 2:
        raise ValueError("chord_paths needs an even parameter list (a,b pairs)")
    chords = [(params[i], params[i + 1]) for i in range(0, len(params), 2)]

    def cubic_point(t: Scalar):
        return (t, t * t, t * t * t)

    def decide(path):
        if path.is_constant():
            return True, "constant path"
        for a, b in chords:
            pa, pb = cubic_point(a), cubic_point(b)
            span = pb[0] - pa[0]
            ss = []
            good = True
            for l in path.lifts:
                s = (l[0] - pa[0]) / span
                if not (ZERO <= s <= ONE):
                    good = False
                    break
                for j in (1, 2):
                    if pa[j] + s * (pb[j] - pa[j]) != l[j]:
                        good = False
                        break
                if not good:
                    break
                ss.append(s)
            if good and all(x <= y for x, y in zip(ss, ss[1:])):
                return True, f"monotone inside the chord from t={a} to t={b}"
        return False, "not constant and not monotone inside a single chord"

    return decide


# -- generator schema enumerations -------------------------------------------

GeneratorEnum = Callable[[Ambient, tuple[Scalar, ...], PLPath], list[TestFunction]]

_GENERATOR_SCHEMAS: dict[str, GeneratorEnum] = {}


def register_generator_schema(name: str):
    def wrap(fn: GeneratorEnum) -> GeneratorEnum:
        if name in _GENERATOR_SCHEMAS:
            raise ValueError(f"generator schema {name!r} already registered")
        _GENERATOR_SCHEMAS[name] = fn
        return fn

    return wrap


def _threshold_levels(path: PLPath, axis: int) -> list[Scalar]:
    """Breakpoint values plus midpoints of consecutive distinct values.

    A PL coordinate that decreases anywhere crosses one of these levels
    strictly, so threshold functions at these levels witness every violation.
    """
    vals = path.coordinate_values(axis)
    levels = list(vals)
    for a, b in zip(vals, vals[1:]):
        levels.append((a + b) * _HALF)
    return sorted(levels)


def _window(path: PLPath, pad: int = 1) -> Box:
    bb = path.bbox()
    return Box(
        tuple(c - Scalar(pad) for c in bb.lo), tuple(c + Scalar(pad) for c in bb.hi)
    )


def _chart_around(center: Sequence[Scalar]) -> Box:
    return Box(
        tuple(c - _QUARTER for c in center), tuple(c + _QUARTER for c in center)
    )


def _axis_param(params: tuple[Scalar, ...]) -> int:
    if len(params) != 1 or not params[0].is_integer():
        raise ValueError("threshold schema takes a single integer axis parameter")
    return int(params[0].rat)


def _enum_thresholds(ambient, params, path, downward: bool):
    axis = _axis_param(params)
    if axis >= ambient.dim:
        raise ValueError(f"axis {axis} out of range for {ambient}")
    sign = "-" if not downward else ""
    out: list[TestFunction] = []
    unit = [ZERO] * ambient.dim
    unit[axis] = -ONE if downward else ONE
    if not ambient.is_torus:
        window = _window(path)
        for c in _threshold_levels(path, axis):
            const = c if downward else -c
            label = (
                f"clamp({c} - x{axis})" if downward else f"clamp(x{axis} - {c})"
            )
            out.append(
                TestFunction.affine(
                    ambient,
                    window,
                    unit,
                    const,
                    global_domain=True,
                    label=label,
                )
            )
        return out
    for c in _threshold_levels(path, axis):
        for t0, t1, a, b in path.segments():
            x0, x1 = a[axis], b[axis]
            if x0 == x1:
                continue
            if x0 == c:
                t_star = t0
            elif x1 == c:
                t_star = t1
            elif (x0 < c < x1) or (x1 < c < x0):
                t_star = t0 + (c - x0) * (t1 - t0) / (x1 - x0)
            else:
                continue
            center = path.evaluate_lift(t_star)
            label = (
                f"clamp({c} - x{axis}) on chart at t={t_star}"
                if downward
                else f"clamp(x{axis} - {c}) on chart at t={t_star}"
            )
            out.append(
                TestFunction.affine(
                    ambient,
                    _chart_around(center),
                    unit,
                    c if downward else -c,
                    label=label,
                    anchors=(t_star,),
                )
            )
    return out


@register_generator_schema("thresholds_up")
def _thresholds_up(ambient, params, path):
    return _enum_thresholds(ambient, params, path, downward=False)


@register_generator_schema("thresholds_down")
def _thresholds_down(ambient, params, path):
    return _enum_thresholds(ambient, params, path, downward=True)


@register_generator_schema("locally_constant")
def _locally_constant(ambient, params, path):
    out: list[TestFunction] = []
    if ambient.is_torus:
        base = _chart_around(path.lifts[0])
    else:
        base = _window(path)
    out.append(
        TestFunction.piecewise_constant(
            ambient,
            [(base, Scalar(Fraction(1, 2)))],
            global_domain=True,
            label="constant 1/2",
        )
    )
    # a two-region 0/1 function separating the endpoints, when they are apart;
    # its composite drops across components, which is exactly the permitted
    # kind of non-monotonicity
    start, end = path.lifts[0], path.lifts[-1]
    gap = max((abs(a - b) for a, b in zip(start, end)), default=ZERO)
    if gap > ZERO:
        r = gap / 4
        if ambient.is_torus and Scalar(Fraction(1, 8)) < r:
            r = Scalar(Fraction(1, 8))
        box0 = Box(tuple(c - r for c in start), tuple(c + r for c in start))
        box1 = Box(tuple(c - r for c in end), tuple(c + r for c in end))
        try:
            out.append(
                TestFunction.piecewise_constant(
                    ambient,
                    [(box0, ONE), (box1, ZERO)],
                    label="locally constant: 1 near start, 0 near end",
                    anchors=(ZERO, ONE),
                )
            )
        except ValueError:
            pass  # regions overlap (e.g. a loop); no such section exists
    return out


# -- generator families --------------------------------------------------------


@dataclass(frozen=True)
class Enumeration:
    functions: tuple[TestFunction, ...]
    truncated: bool = False


def _dedupe_cap(fns: Iterable[TestFunction], budget: int | None) -> Enumeration:
    seen = {}
    for f in fns:
        seen.setdefault(f.key(), f)
    functions = list(seen.values())
    if budget is not None and len(functions) > budget:
        return Enumeration(tuple(functions[:budget]), truncated=True)
    return Enumeration(tuple(functions))


class GeneratorFamily:
    """Base for declared generating families of directed functions.

    ``complete`` asserts that the enumerated functions decide weak
    directedness exactly for this space (the per-space characterizations of
    the sheaf justify the flag); without it all accepting verdicts are
    budget-qualified.
    """

    complete: bool = False

    def enumerate(self, path: PLPath, budget: int | None = None) -> Enumeration:
        raise NotImplementedError

    def enumerate_global(self, path: PLPath, budget: int | None = None) -> Enumeration:
        """Only the generators defined on the whole space."""
        inner = self.enumerate(path, None)
        fns = tuple(f for f in inner.functions if f.global_domain)
        if budget is not None and len(fns) > budget:
            return Enumeration(fns[:budget], truncated=True)
        return Enumeration(fns, inner.truncated)

    def restricted(self, region: OpenSet) -> GeneratorFamily:
        return RestrictedFamily(self, region)

    def reversed(self) -> GeneratorFamily:
        return ReversedFamily(self)


class SchemaFamily(GeneratorFamily):
    """A family given by named parametric schemas (the serializable form)."""

    def __init__(
        self,
        ambient: Ambient,
        schemas: Iterable[tuple[str, tuple[Scalar, ...]]],
        complete: bool = False,
    ) -> None:
        schemas = tuple((name, tuple(params)) for name, params in schemas)
        for name, _ in schemas:
            if name not in _GENERATOR_SCHEMAS:
                raise ValueError(f"unknown generator schema {name!r}")
        self.ambient = ambient
        self.schemas = schemas
        self.complete = complete

    def enumerate(self, path: PLPath, budget: int | None = None) -> Enumeration:
        if path.ambient != self.ambient:
            raise ValueError("ambient mismatch")
        fns: list[TestFunction] = []
        for name, params in self.schemas:
            fns.extend(_GENERATOR_SCHEMAS[name](self.ambient, params, path))
        return _dedupe_cap(fns, budget)

    def spec(self) -> str:
        parts = []
        for name, params in self.schemas:
            args = ", ".join(str(p) for p in params)
            parts.append(f"{name}({args})")
        return "[" + ", ".join(parts) + "]"


class RestrictedFamily(GeneratorFamily):
    """The family cut down to an open subspace: domains meet the region only."""

    def __init__(self, inner: GeneratorFamily, region: OpenSet) -> None:
        self.inner = inner
        self.region = region
        self.complete = inner.complete

    def _restrict(self, f: TestFunction) -> TestFunction | None:
        torus = f.ambient.is_torus
        boxes: list[Box] = []
        for fbox in f.domain.boxes:
            for rbox in self.region.boxes:
                if torus:
                    for k in f._lattice_offsets(fbox, rbox):
                        cut = fbox.intersect(rbox.translate(k))
                        if cut is not None:
                            boxes.append(cut)
                else:
                    cut = fbox.intersect(rbox)
                    if cut is not None:
                        boxes.append(cut)
        if not boxes:
            return None
        seen = []
        for b in boxes:
            if b not in seen:
                seen.append(b)
        return TestFunction(
            f.ambient,
            OpenSet(f.ambient, seen),
            f.cells,
            clamp=f.clamp,
            global_domain=False,
            label=f"{f.label} restricted",
            anchors=f.anchors,
        )

    def enumerate(self, path: PLPath, budget: int | None = None) -> Enumeration:
        inner = self.inner.enumerate(path, None)
        fns = [g for g in (self._restrict(f) for f in inner.functions) if g is not None]
        out = _dedupe_cap(fns, budget)
        return Enumeration(out.functions, out.truncated or inner.truncated)


class ReversedFamily(GeneratorFamily):
    """Generators of the reversed space: exactly {1 - f} for inner generators."""

    def __init__(self, inner: GeneratorFamily) -> None:
        self.inner = inner
        self.complete = inner.complete

    def enumerate(self, path: PLPath, budget: int | None = None) -> Enumeration:
        inner = self.inner.enumerate(path.reverse(), None)
        fns = []
        for f in inner.functions:
            rf = reverse_function(f)
            if rf.anchors:
                rf = TestFunction(
                    rf.ambient,
                    rf.domain,
                    rf.cells,
                    clamp=rf.clamp,
                    global_domain=rf.global_domain,
                    label=rf.label,
                    anchors=tuple(ONE - t for t in rf.anchors),
                )
            fns.append(rf)
        out = _dedupe_cap(fns, budget)
        return Enumeration(out.functions, out.truncated or inner.truncated)


class ProductFamily(GeneratorFamily):
    """Pullbacks of two factor families along the product projections."""

    def __init__(
        self,
        ambient: Ambient,
        left: GeneratorFamily,
        left_ambient: Ambient,
        right: GeneratorFamily,
        right_ambient: Ambient,
        complete: bool = False,
    ) -> None:
        self.ambient = ambient
        self.left = left
        self.left_ambient = left_ambient
        self.right = right
        self.right_ambient = right_ambient
        self.complete = complete

    def _embed(
        self, f: TestFunction, path: PLPath, offset: int, other: tuple[int, int]
    ) -> list[TestFunction]:
        dim = self.ambient.dim
        o_lo, o_hi = other

        def widen(factor_box: Box, window: Box) -> Box:
            lo = [None] * dim
            hi = [None] * dim
            for i in range(factor_box.dim):
                lo[offset + i] = factor_box.lo[i]
                hi[offset + i] = factor_box.hi[i]
            for i in range(o_hi - o_lo):
                lo[o_lo + i] = window.lo[i]
                hi[o_lo + i] = window.hi[i]
            return Box(tuple(lo), tuple(hi))

        def build(window: Box, anchors) -> TestFunction:
            from .dfun import Cell

            cells = []
            for cell in f.cells:
                coeffs = [ZERO] * dim
                for i, c in enumerate(cell.coeffs):
                    coeffs[offset + i] = c
                cells.append(Cell(widen(cell.box, window), tuple(coeffs), cell.const))
            domain = OpenSet(self.ambient, [widen(b, window) for b in f.domain.boxes])
            constant = all(c == ZERO for cell in f.cells for c in cell.coeffs)
            return TestFunction(
                self.ambient,
                domain,
                cells,
                clamp=f.clamp,
                global_domain=f.global_domain and (not self.ambient.is_torus or constant),
                label=f"{f.label} (pulled back)",
                anchors=anchors,
            )

        if not self.ambient.is_torus:
            other_lo = tuple(
                min(l[i] for l in path.lifts) - ONE for i in range(o_lo, o_hi)
            )
            other_hi = tuple(
                max(l[i] for l in path.lifts) + ONE for i in range(o_lo, o_hi)
            )
            return [build(Box(other_lo, other_hi), f.anchors)]
        anchors = f.anchors if f.anchors else path.breaks
        out = []
        for t in anchors:
            center = path.evaluate_lift(t)[o_lo:o_hi]
            out.append(build(_chart_around(center), (t,)))
        return out

    def enumerate(self, path: PLPath, budget: int | None = None) -> Enumeration:
        dl = self.left_ambient.dim
        dim = self.ambient.dim
        left_path = path.project(range(dl), self.left_ambient)
        right_path = path.project(range(dl, dim), self.right_ambient)
        fns: list[TestFunction] = []
        left = self.left.enumerate(left_path, None)
        right = self.right.enumerate(right_path, None)
        for f in left.functions:
            fns.extend(self._embed(f, path, 0, (dl, dim)))
        for f in right.functions:
            fns.extend(self._embed(f, path, dl, (0, dl)))
        out = _dedupe_cap(fns, budget)
        return Enumeration(out.functions, out.truncated or left.truncated or right.truncated)


# -- directed spaces ------------------------------------------------------------


@dataclass
class DSpace:
    """A presented directed space.

    ``presentation`` selects how membership is decided: "predicate" uses the
    named path predicate; "sheaf" quantifies over the generator family, and
    such spaces are saturated by construction.
    """

    ambient: Ambient
    presentation: str
    predicate: PathPredicate | None = None
    generators: GeneratorFamily | None = None
    oracle: PathPredicate | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.presentation not in ("predicate", "sheaf"):
            raise ValueError(f"unknown presentation {self.presentation!r}")
        if self.presentation == "predicate" and self.predicate is None:
            raise ValueError("predicate presentation needs a predicate")
        if self.presentation == "sheaf" and self.generators is None:
            raise ValueError("sheaf presentation needs a generator family")
        if self.predicate is None and self.generators is None:
            raise ValueError("a space needs a predicate or a generator family")

    @property
    def saturated_by_construction(self) -> bool:
        return self.presentation == "sheaf"

    def __repr__(self) -> str:
        return f"DSpace({self.name or self.presentation}, {self.ambient})"


def sheaf_membership(
    family: GeneratorFamily, path: PLPath, budget: int | None = None
) -> Verdict:
    """Membership by quantification over the enumerated generator family."""
    enum = family.enumerate(path, budget)
    for f in enum.functions:
        verdict = is_monotone_along(f, path)
        if not verdict.accepting:
            return Verdict.false(
                witness=verdict.witness,
                detail=f"generator {f.label} decreases along the path",
            )
    if family.complete and not enum.truncated:
        return Verdict.true(
            f"monotone along all {len(enum.functions)} enumerated generators "
            "(complete family)"
        )
    return Verdict.no_violation(
        budget=len(enum.functions),
        detail="no violating generator found at this enumeration budget",
    )


def path_is_directed(space: DSpace, path: PLPath, budget: int | None = None) -> Verdict:
    """Is the path a directed path of the presented space?"""
    if path.ambient != space.ambient:
        raise ValueError("ambient mismatch")
    if space.presentation == "predicate":
        ok, why = space.predicate.decide(path)
        return Verdict.true(why) if ok else Verdict.false(detail=why)
    return sheaf_membership(space.generators, path, budget)


# -- axiom checks ----------------------------------------------------------------


@dataclass
class AxiomReport:
    """Outcome of the three closure checks on a corpus."""

    space: str
    constants_checked: int = 0
    concat_checked: int = 0
    reparam_checked: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} FAILURES"
        return (
            f"axioms[{self.space}]: constants {self.constants_checked}, "
            f"concatenations {self.concat_checked}, "
            f"reparameterizations {self.reparam_checked} -> {status}"
        )

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "constants_checked": self.constants_checked,
            "concat_checked": self.concat_checked,
            "reparam_checked": self.reparam_checked,
            "failures": [{"case": c, "why": w} for c, w in self.failures],
            "ok": self.ok,
        }


def check_axioms(
    space: DSpace,
    corpus: Sequence[PLPath],
    reparams: Sequence[tuple[str, PLPath]] | None = None,
    budget: int | None = None,
) -> AxiomReport:
    """Constant, concatenation and reparameterization closure on a corpus."""
    if reparams is None:
        reparams = standard_reparams()
    report = AxiomReport(space=space.name or str(space.ambient))

    seen_points: set[Point] = set()
    for p in corpus:
        for point in (p.start(), p.end()):
            if point in seen_points:
                continue
            seen_points.add(point)
            const = PLPath.constant(space.ambient, point.coords)
            verdict = path_is_directed(space, const, budget)
            report.constants_checked += 1
            if not verdict.accepting:
                report.failures.append(
                    (f"constant at {point}", verdict.describe())
                )

    directed = [p for p in corpus if path_is_directed(space, p, budget).accepting]
    for p in directed:
        for q in directed:
            if p.end() != q.start():
                continue
            verdict = path_is_directed(space, concat(p, q), budget)
            report.concat_checked += 1
            if not verdict.accepting:
                report.failures.append(
                    (
                        f"concat of directed paths through {p.end()}",
                        verdict.describe(),
                    )
                )

    for p in directed:
        for rname, r in reparams:
            verdict = path_is_directed(space, reparameterize(p, r), budget)
            report.reparam_checked += 1
            if not verdict.accepting:
                report.failures.append(
                    (f"reparameterization {rname}", verdict.describe())
                )
    return report


# -- morphisms --------------------------------------------------------------------


@dataclass(frozen=True)
class MapCell:
    """An affine piece of a PL map; ``box=None`` means defined everywhere."""

    box: Box | None
    matrix: tuple[tuple[Scalar, ...], ...]
    offset: tuple[Scalar, ...]

    def apply(self, x: Sequence[Scalar]) -> tuple[Scalar, ...]:
        out = []
        for row, b in zip(self.matrix, self.offset):
            acc = b
            for c, v in zip(row, x):
                acc = acc + c * v
            out.append(acc)
        return tuple(out)


class DMap:
    """A PL map between presented spaces, given cellwise by affine forms."""

    def __init__(
        self,
        source: DSpace,
        target: DSpace,
        cells: Iterable[MapCell],
        label: str = "",
    ) -> None:
        cells = tuple(cells)
        if not cells:
            raise ValueError("a map needs at least one cell")
        has_global = any(c.box is None for c in cells)
        if has_global and len(cells) > 1:
            raise ValueError("a global cell must be the only cell")
        sdim, tdim = source.ambient.dim, target.ambient.dim
        for cell in cells:
            if len(cell.matrix) != tdim or any(len(r) != sdim for r in cell.matrix):
                raise ValueError("matrix shape does not match ambients")
            if len(cell.offset) != tdim:
                raise ValueError("offset dimension mismatch")
            if cell.box is not None and cell.box.dim != sdim:
                raise ValueError("cell box dimension mismatch")
        if source.ambient.is_torus:
            if not has_global:
                raise ValueError("torus-source maps must use a single global cell")
            for row in cells[0].matrix:
                for entry in row:
                    if not entry.is_integer():
                        raise ValueError(
                            "torus-source maps need integer linear parts"
                        )
        self.source = source
        self.target = target
        self.cells = cells
        self.label = label or "map"
        self._check_continuity()

    def _check_continuity(self) -> None:
        for i, ci in enumerate(self.cells):
            for cj in self.cells[i + 1 :]:
                if ci.box is None or cj.box is None:
                    continue
                cut = ci.box.intersect_closed(cj.box)
                if cut is None:
                    continue
                for v in cut.vertices():
                    if ci.apply(v) != cj.apply(v):
                        raise ValueError(f"map cells disagree at {v}")

    @classmethod
    def affine(
        cls,
        source: DSpace,
        target: DSpace,
        matrix: Iterable[Iterable[ScalarLike]],
        offset: Iterable[ScalarLike] | None = None,
        label: str = "",
    ) -> DMap:
        rows = tuple(tuple(Scalar.of(v) for v in row) for row in matrix)
        off = (
            tuple(Scalar.of(v) for v in offset)
            if offset is not None
            else tuple(ZERO for _ in range(target.ambient.dim))
        )
        return cls(source, target, [MapCell(None, rows, off)], label=label)

    def _locate(self, lift: Sequence[Scalar]) -> MapCell:
        for cell in self.cells:
            if cell.box is None or cell.box.contains_closed(tuple(lift)):
                return cell
        raise ValueError(f"map cells do not cover the point {lift}")

    def apply_lift(self, lift: Sequence[Scalar]) -> tuple[Scalar, ...]:
        return self._locate(lift).apply(lift)

    def apply_point(self, point: Point) -> Point:
        return Point(self.target.ambient, self.apply_lift(point.coords))

    def apply_path(self, path: PLPath) -> PLPath:
        if path.ambient != self.source.ambient:
            raise ValueError("ambient mismatch")
        events: set[Scalar] = set(path.breaks)
        for cell in self.cells:
            if cell.box is not None:
                events.update(box_crossing_events(path, cell.box, False))
        breaks = sorted(events)
        lifts = [self.apply_lift(path.evaluate_lift(t)) for t in breaks]
        return PLPath(self.target.ambient, breaks, lifts)

    def __repr__(self) -> str:
        return f"DMap({self.label})"


def check_morphism(
    F: DMap,
    corpus: Sequence[PLPath],
    mode: str = "path",
    budget: int | None = None,
) -> Verdict:
    """Does the map send directed corpus paths to directed/weakly-monotone images?

    "path" mode requires images of directed paths to be directed in the
    target.  "function" mode (for sheaf-style targets) checks every enumerated
    target generator against every image; for saturated targets this
    certifies morphism-hood at corpus scale.
    """
    if mode not in ("path", "function"):
        raise ValueError(f"unknown mode {mode!r}")
    all_certified = True
    checked = 0
    for p in corpus:
        source_verdict = path_is_directed(F.source, p, budget)
        all_certified = all_certified and source_verdict.certified
        if not source_verdict.accepting:
            continue
        image = F.apply_path(p)
        if mode == "path":
            verdict = path_is_directed(F.target, image, budget)
            checked += 1
            if not verdict.accepting:
                return Verdict.false(
                    witness=verdict.witness,
                    detail=f"image of a directed path is not directed: {verdict.detail}",
                )
            all_certified = all_certified and verdict.certified
        else:
            if F.target.generators is None:
                raise ValueError("function mode needs target generators")
            enum = F.target.generators.enumerate(image, budget)
            for f in enum.functions:
                verdict = is_monotone_along(f, image)
                checked += 1
                if not verdict.accepting:
                    return Verdict.false(
                        witness=verdict.witness,
                        detail=f"pullback of {f.label} decreases along a directed path",
                    )
            all_certified = all_certified and F.target.generators.complete and not enum.truncated
    if all_certified:
        return Verdict.true(f"morphism on the corpus ({checked} checks)")
    return Verdict.no_violation(budget=checked, detail="no violation on the corpus")
