"""Directed test functions and the local monotonicity decision.

A :class:`TestFunction` is a piecewise-affine map from a finite union of open
boxes to [0,1], optionally clamped.  Composing one with a PL path gives an
exact piecewise-affine function of the parameter, and directedness questions
reduce to: is that composite non-decreasing on every connected component of
its domain?  Monotonicity is never required across distinct components.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import ONE, ZERO, Scalar, ScalarLike
from .plgeom import (
    Ambient,
    Box,
    IntervalUnion,
    OpenSet,
    PLPath,
    box_crossing_events,
    preimage,
)
from .verdict import MonotonicityWitness, Verdict

__all__ = [
    "Cell",
    "TestFunction",
    "Piece",
    "PiecewiseScalarFn",
    "compose",
    "is_locally_nondecreasing",
    "is_monotone_along",
    "reverse_function",
]

_HALF = Scalar(Fraction(1, 2))


@dataclass(frozen=True)
class Cell:
    """A closed box with an affine form ``coeffs . x + const`` on it."""

    box: Box
    coeffs: tuple[Scalar, ...]
    const: Scalar

    def raw_value(self, x: Sequence[Scalar]) -> Scalar:
        acc = self.const
        for c, v in zip(self.coeffs, x):
            acc = acc + c * v
        return acc

    def negated(self) -> Cell:
        return Cell(self.box, tuple(-c for c in self.coeffs), ONE - self.const)


def _clamp(v: Scalar) -> Scalar:
    if v < ZERO:
        return ZERO
    if v > ONE:
        return ONE
    return v


class TestFunction:
    """A PL map from a union of open boxes to [0,1].

    ``cells`` must cover the domain and agree wherever their closed boxes
    overlap (on a torus: overlap modulo the lattice), so the function is a
    well-defined continuous section.  With ``clamp`` set, the affine values
    are clamped into [0,1]; otherwise they must already lie there.

    ``global_domain`` marks functions whose formula extends to the whole
    ambient (the domain box is then only a computation window); this is what
    separates honest local sections from globally defined ones.
    """

    __slots__ = ("ambient", "domain", "cells", "clamp", "global_domain", "label", "anchors")

    def __init__(
        self,
        ambient: Ambient,
        domain: OpenSet,
        cells: Iterable[Cell],
        clamp: bool = True,
        global_domain: bool = False,
        label: str = "",
        anchors: tuple[Scalar, ...] = (),
    ) -> None:
        cells = tuple(cells)
        if domain.ambient != ambient:
            raise ValueError("domain ambient mismatch")
        if not cells:
            raise ValueError("a test function needs at least one cell")
        for cell in cells:
            if cell.box.dim != ambient.dim or len(cell.coeffs) != ambient.dim:
                raise ValueError("cell dimension mismatch")
            if not cell.box.is_nonempty():
                raise ValueError("empty cell box")
            if ambient.is_torus and not cell.box.sides_below_one():
                raise ValueError("torus cells must have sides < 1")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "clamp", clamp)
        object.__setattr__(self, "global_domain", global_domain)
        object.__setattr__(self, "label", label or "test function")
        object.__setattr__(self, "anchors", anchors)
        self._validate_cover()
        self._validate_agreement()
        if not clamp:
            self._validate_range()

    # -- validation ----------------------------------------------------

    def _validate_cover(self) -> None:
        for dom in self.domain.boxes:
            leftovers = [dom]
            for cell in self.cells:
                leftovers = [
                    piece for rest in leftovers for piece in rest.subtract(cell.box)
                ]
            if leftovers:
                raise ValueError(
                    f"cells do not cover domain box {dom}; gap near {leftovers[0]}"
                )

    def _lattice_offsets(self, a: Box, b: Box) -> Iterable[tuple[Scalar, ...]]:
        """Offsets k with (b + k) meeting a; only (0,..,0) when euclidean."""
        if not self.ambient.is_torus:
            yield tuple(ZERO for _ in range(a.dim))
            return
        ranges = []
        for axis in range(a.dim):
            k_lo = (a.lo[axis] - b.hi[axis]).ceil()
            k_hi = (a.hi[axis] - b.lo[axis]).floor()
            ranges.append(range(k_lo, k_hi + 1))

        def rec(axis: int, acc: list[Scalar]):
            if axis == a.dim:
                yield tuple(acc)
                return
            for k in ranges[axis]:
                acc.append(Scalar(k))
                yield from rec(axis + 1, acc)
                acc.pop()

        yield from rec(0, [])

    def _validate_agreement(self) -> None:
        for i, ci in enumerate(self.cells):
            for cj in self.cells[i + 1 :]:
                for k in self._lattice_offsets(ci.box, cj.box):
                    shifted = cj.box.translate(k)
                    lo = tuple(max(a, b) for a, b in zip(ci.box.lo, shifted.lo))
                    hi = tuple(min(a, b) for a, b in zip(ci.box.hi, shifted.hi))
                    if any(a > b for a, b in zip(lo, hi)):
                        continue
                    probe = Box(lo, hi)
                    for v in probe.vertices():
                        unshifted = tuple(c - o for c, o in zip(v, k))
                        if ci.raw_value(v) != cj.raw_value(unshifted):
                            raise ValueError(
                                f"cells disagree at {v}: {ci.raw_value(v)} vs "
                                f"{cj.raw_value(unshifted)} ({self.label})"
                            )

    def _validate_range(self) -> None:
        for cell in self.cells:
            for v in cell.box.vertices():
                val = cell.raw_value(v)
                if val < ZERO or val > ONE:
                    raise ValueError(
                        f"unclamped cell value {val} outside [0,1] at {v}"
                    )

    # -- constructors ----------------------------------------------------

    @classmethod
    def affine(
        cls,
        ambient: Ambient,
        box: Box,
        coeffs: Iterable[ScalarLike],
        const: ScalarLike,
        clamp: bool = True,
        global_domain: bool = False,
        label: str = "",
        anchors: tuple[Scalar, ...] = (),
    ) -> TestFunction:
        cell = Cell(box, tuple(Scalar.of(c) for c in coeffs), Scalar.of(const))
        return cls(
            ambient,
            OpenSet(ambient, [box]),
            [cell],
            clamp=clamp,
            global_domain=global_domain,
            label=label,
            anchors=anchors,
        )

    @classmethod
    def piecewise_constant(
        cls,
        ambient: Ambient,
        pieces: Iterable[tuple[Box, ScalarLike]],
        global_domain: bool = False,
        label: str = "",
        anchors: tuple[Scalar, ...] = (),
    ) -> TestFunction:
        pieces = list(pieces)
        zero = tuple(ZERO for _ in range(ambient.dim))
        cells = [Cell(box, zero, Scalar.of(v)) for box, v in pieces]
        return cls(
            ambient,
            OpenSet(ambient, [box for box, _ in pieces]),
            cells,
            clamp=False,
            global_domain=global_domain,
            label=label or "locally constant",
            anchors=anchors,
        )

    # -- evaluation ------------------------------------------------------

    def _locate(self, lift: tuple[Scalar, ...]) -> tuple[Cell, tuple[Scalar, ...]] | None:
        for cell in self.cells:
            if self.ambient.is_torus:
                rep = cell.box.shift_into_closed(lift)
                if rep is not None:
                    return cell, rep
            elif cell.box.contains_closed(lift):
                return cell, lift
        return None

    def evaluate_lift(self, lift: tuple[Scalar, ...]) -> Scalar | None:
        """Value at a lift, or None when outside every cell."""
        hit = self._locate(lift)
        if hit is None:
            return None
        cell, rep = hit
        raw = cell.raw_value(rep)
        return _clamp(raw) if self.clamp else raw

    # -- identity ----------------------------------------------------------

    def key(self):
        return (
            self.ambient,
            self.domain.boxes,
            self.cells,
            self.clamp,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TestFunction):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"TestFunction({self.label})"


def reverse_function(f: TestFunction) -> TestFunction:
    """The function 1 - f on the same domain."""
    label = f.label[4:] if f.label.startswith("1 - ") else f"1 - {f.label}"
    return TestFunction(
        f.ambient,
        f.domain,
        [c.negated() for c in f.cells],
        clamp=f.clamp,
        global_domain=f.global_domain,
        label=label,
        anchors=f.anchors,
    )


# -- composites ---------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """Affine piece slope*t + icept on the closed parameter range [lo, hi]."""

    lo: Scalar
    hi: Scalar
    slope: Scalar
    icept: Scalar

    def value(self, t: Scalar) -> Scalar:
        return self.slope * t + self.icept


class PiecewiseScalarFn:
    """An exact PL function on an interval union, one piece list per component."""

    __slots__ = ("domain", "components")

    def __init__(
        self, domain: IntervalUnion, components: Iterable[tuple[Piece, ...]]
    ) -> None:
        comps = tuple(tuple(c) for c in components)
        if len(comps) != len(domain.intervals):
            raise ValueError("one piece list per domain component required")
        for interval, pieces in zip(domain.intervals, comps):
            if not pieces:
                raise ValueError("empty component")
            if pieces[0].lo != interval.lo or pieces[-1].hi != interval.hi:
                raise ValueError("pieces do not span their component")
            for a, b in zip(pieces, pieces[1:]):
                if a.hi != b.lo:
                    raise ValueError("pieces must be contiguous")
                if a.value(a.hi) != b.value(b.lo):
                    raise ValueError(
                        f"discontinuity at t={a.hi}: {a.value(a.hi)} vs {b.value(b.lo)}"
                    )
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "components", comps)

    def evaluate(self, t: ScalarLike) -> Scalar:
        t = Scalar.of(t)
        for pieces in self.components:
            if pieces[0].lo <= t <= pieces[-1].hi:
                for piece in pieces:
                    if t <= piece.hi:
                        return piece.value(t)
        raise ValueError(f"t={t} outside the domain")

    def __repr__(self) -> str:
        return f"PiecewiseScalarFn({self.domain})"


def compose(f: TestFunction, p: PLPath) -> PiecewiseScalarFn:
    """The exact composite f o p on preimage(p, f.domain)."""
    if f.ambient != p.ambient:
        raise ValueError("ambient mismatch")
    dom = preimage(p, f.domain)
    torus = p.ambient.is_torus
    cell_events: set[Scalar] = set(p.breaks)
    for cell in f.cells:
        cell_events.update(box_crossing_events(p, cell.box, torus))

    components = []
    for interval in dom.intervals:
        events = {interval.lo, interval.hi}
        events.update(t for t in cell_events if interval.lo < t < interval.hi)
        evs = sorted(events)
        raw_pieces: list[Piece] = []
        for e0, e1 in zip(evs, evs[1:]):
            x0 = p.evaluate_lift(e0)
            x1 = p.evaluate_lift(e1)
            mid = tuple((a + b) * _HALF for a, b in zip(x0, x1))
            hit = f._locate(mid)
            if hit is None:
                raise AssertionError(
                    f"cells do not cover the path image at t={(e0 + e1) * _HALF}"
                )
            cell, rep = hit
            shift = tuple(r - m for r, m in zip(rep, mid))
            span = e1 - e0
            slope = ZERO
            for c, a, b in zip(cell.coeffs, x0, x1):
                slope = slope + c * ((b - a) / span)
            value0 = cell.raw_value(tuple(a + s for a, s in zip(x0, shift)))
            icept = value0 - slope * e0
            raw_pieces.append(Piece(e0, e1, slope, icept))
        if f.clamp:
            raw_pieces = _clamp_pieces(raw_pieces)
        components.append(tuple(raw_pieces))
    return PiecewiseScalarFn(dom, components)


def _clamp_pieces(pieces: list[Piece]) -> list[Piece]:
    out: list[Piece] = []
    for piece in pieces:
        cuts = {piece.lo, piece.hi}
        if piece.slope != ZERO:
            for level in (ZERO, ONE):
                t = (level - piece.icept) / piece.slope
                if piece.lo < t < piece.hi:
                    cuts.add(t)
        ts = sorted(cuts)
        for a, b in zip(ts, ts[1:]):
            v_mid = piece.value((a + b) * _HALF)
            if v_mid <= ZERO:
                out.append(Piece(a, b, ZERO, ZERO))
            elif v_mid >= ONE:
                out.append(Piece(a, b, ZERO, ONE))
            else:
                out.append(Piece(a, b, piece.slope, piece.icept))
    return out


def is_locally_nondecreasing(g: PiecewiseScalarFn) -> Verdict:
    """Certified monotonicity per component; witnesses are exact parameter pairs."""
    for pieces in g.components:
        for piece in pieces:
            if piece.slope < ZERO:
                return Verdict.false(
                    MonotonicityWitness(
                        t1=piece.lo,
                        t2=piece.hi,
                        v1=piece.value(piece.lo),
                        v2=piece.value(piece.hi),
                    ),
                    detail="decreasing piece",
                )
    return Verdict.true()


def is_monotone_along(f: TestFunction, p: PLPath) -> Verdict:
    """Is f (locally) non-decreasing along p?  Exact for PL data."""
    verdict = is_locally_nondecreasing(compose(f, p))
    if verdict.witness is not None:
        verdict = replace(verdict, witness=replace(verdict.witness, function=f))
    return verdict
