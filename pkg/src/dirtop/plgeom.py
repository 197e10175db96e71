"""Piecewise-linear geometry: ambient spaces, paths, open box sets, preimages.

Paths live on Euclidean n-space or on the n-torus R^n/Z^n.  A torus path is
stored through a continuous lift in the universal cover, so winding numbers
are exact data rather than something reconstructed from wrapped samples.
Open sets are finite unions of open axis-aligned boxes; on a torus every box
is a chart box with all side lengths < 1, given in lift coordinates, which
makes membership chart-unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exactnum import ONE, ZERO, Scalar, ScalarLike

__all__ = [
    "Ambient",
    "Point",
    "Box",
    "OpenSet",
    "Interval",
    "IntervalUnion",
    "PLPath",
    "box_crossing_events",
    "concat",
    "reparameterize",
    "restrict",
    "preimage",
    "standard_reparams",
]

Coords = tuple[Scalar, ...]


def _coords(values: Iterable[ScalarLike]) -> Coords:
    return tuple(Scalar.of(v) for v in values)


@dataclass(frozen=True)
class Ambient:
    """Euclidean n-space or the n-torus R^n/Z^n."""

    kind: str
    dim: int

    def __post_init__(self) -> None:
        if self.kind not in ("euclidean", "torus"):
            raise ValueError(f"unknown ambient kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("ambient dimension must be >= 1")

    @classmethod
    def euclidean(cls, dim: int) -> Ambient:
        return cls("euclidean", dim)

    @classmethod
    def torus(cls, dim: int) -> Ambient:
        return cls("torus", dim)

    @property
    def is_torus(self) -> bool:
        return self.kind == "torus"

    def __str__(self) -> str:
        return f"{self.kind} {self.dim}"


class Point:
    """A point of an ambient; torus coordinates are canonicalized into [0,1)."""

    __slots__ = ("ambient", "coords")

    def __init__(self, ambient: Ambient, coords: Iterable[ScalarLike]) -> None:
        cs = _coords(coords)
        if len(cs) != ambient.dim:
            raise ValueError(f"expected {ambient.dim} coordinates, got {len(cs)}")
        if ambient.is_torus:
            cs = tuple(c - c.floor() for c in cs)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "coords", cs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Point):
            return NotImplemented
        return self.ambient == other.ambient and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.ambient, self.coords))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"Point({self.ambient}, {self})"


@dataclass(frozen=True)
class Box:
    """An axis-aligned box with exact corners; open or closed use is contextual."""

    lo: Coords
    hi: Coords

    def __post_init__(self) -> None:
        if len(self.lo) != len(self.hi):
            raise ValueError("corner dimension mismatch")

    @classmethod
    def of(cls, lo: Iterable[ScalarLike], hi: Iterable[ScalarLike]) -> Box:
        return cls(_coords(lo), _coords(hi))

    @property
    def dim(self) -> int:
        return len(self.lo)

    def is_nonempty(self) -> bool:
        return all(a < b for a, b in zip(self.lo, self.hi))

    def sides_below_one(self) -> bool:
        return all(b - a < ONE for a, b in zip(self.lo, self.hi))

    def vertices(self) -> Iterator[Coords]:
        corners = [(a, b) for a, b in zip(self.lo, self.hi)]
        n = len(corners)
        for mask in range(1 << n):
            yield tuple(corners[i][(mask >> i) & 1] for i in range(n))

    def contains_open(self, x: Coords) -> bool:
        return all(a < c < b for a, c, b in zip(self.lo, x, self.hi))

    def contains_closed(self, x: Coords) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lo, x, self.hi))

    def shift_into_open(self, x: Coords) -> Coords | None:
        """Lattice translate of ``x`` lying strictly inside, if one exists.

        Requires all side lengths < 1 so the translate is unique.
        """
        shift = []
        for a, c, b in zip(self.lo, x, self.hi):
            # the unique integer candidate k with a < c + k < a + 1
            k = (a - c).floor() + 1
            if not (c + k < b):
                return None
            shift.append(k)
        return tuple(c + k for c, k in zip(x, shift))

    def shift_into_closed(self, x: Coords) -> Coords | None:
        shift = []
        for a, c, b in zip(self.lo, x, self.hi):
            k = (a - c).ceil()
            if not (c + k <= b):
                return None
            shift.append(k)
        return tuple(c + k for c, k in zip(x, shift))

    def intersect(self, other: Box) -> Box | None:
        lo = tuple(max(a, c) for a, c in zip(self.lo, other.lo))
        hi = tuple(min(b, d) for b, d in zip(self.hi, other.hi))
        box = Box(lo, hi)
        return box if box.is_nonempty() else None

    def intersect_closed(self, other: Box) -> Box | None:
        """Closed intersection; may be degenerate (a shared face or point)."""
        lo = tuple(max(a, c) for a, c in zip(self.lo, other.lo))
        hi = tuple(min(b, d) for b, d in zip(self.hi, other.hi))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def translate(self, offset: Sequence[ScalarLike]) -> Box:
        off = _coords(offset)
        return Box(
            tuple(a + o for a, o in zip(self.lo, off)),
            tuple(b + o for b, o in zip(self.hi, off)),
        )

    def subtract(self, other: Box) -> list[Box]:
        """Closed-box difference self \\ other, as nonempty boxes."""
        cut = self.intersect(other)
        if cut is None:
            return [self]
        out = []
        lo, hi = list(self.lo), list(self.hi)
        for axis in range(self.dim):
            if lo[axis] < cut.lo[axis]:
                piece_hi = list(hi)
                piece_hi[axis] = cut.lo[axis]
                out.append(Box(tuple(lo), tuple(piece_hi)))
                lo = list(lo)
                lo[axis] = cut.lo[axis]
            if cut.hi[axis] < hi[axis]:
                piece_lo = list(lo)
                piece_lo[axis] = cut.hi[axis]
                out.append(Box(tuple(piece_lo), tuple(hi)))
                hi = list(hi)
                hi[axis] = cut.hi[axis]
        return [b for b in out if b.is_nonempty()]

    def __str__(self) -> str:
        return ", ".join(f"{a}..{b}" for a, b in zip(self.lo, self.hi))


class OpenSet:
    """A finite union of open boxes in an ambient.

    On a torus, boxes are chart boxes (all sides < 1) in lift coordinates;
    a point belongs to the set when some lattice translate of its lift lies
    inside some box.
    """

    __slots__ = ("ambient", "boxes")

    def __init__(self, ambient: Ambient, boxes: Iterable[Box]) -> None:
        bs = tuple(boxes)
        for b in bs:
            if b.dim != ambient.dim:
                raise ValueError("box dimension does not match ambient")
            if not b.is_nonempty():
                raise ValueError(f"empty box {b}")
            if ambient.is_torus and not b.sides_below_one():
                raise ValueError(f"torus chart box must have sides < 1: {b}")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "boxes", bs)

    def contains_lift(self, lift: Coords) -> bool:
        if self.ambient.is_torus:
            return any(b.shift_into_open(lift) is not None for b in self.boxes)
        return any(b.contains_open(lift) for b in self.boxes)

    def contains_point(self, point: Point) -> bool:
        if point.ambient != self.ambient:
            raise ValueError("ambient mismatch")
        return self.contains_lift(point.coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OpenSet):
            return NotImplemented
        return self.ambient == other.ambient and self.boxes == other.boxes

    def __hash__(self) -> int:
        return hash((self.ambient, self.boxes))

    def __str__(self) -> str:
        return " ; ".join(str(b) for b in self.boxes)


@dataclass(frozen=True)
class Interval:
    """A subinterval of [0,1], open except possibly at the global endpoints."""

    lo: Scalar
    hi: Scalar
    closed_lo: bool = False
    closed_hi: bool = False

    def __post_init__(self) -> None:
        if not (ZERO <= self.lo < self.hi <= ONE):
            raise ValueError(f"bad interval ({self.lo}, {self.hi})")
        if self.closed_lo and self.lo != ZERO:
            raise ValueError("interval may be closed only at 0")
        if self.closed_hi and self.hi != ONE:
            raise ValueError("interval may be closed only at 1")

    def contains(self, t: Scalar) -> bool:
        if self.lo < t < self.hi:
            return True
        if self.closed_lo and t == self.lo:
            return True
        if self.closed_hi and t == self.hi:
            return True
        return False

    def midpoint(self) -> Scalar:
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        left = "[" if self.closed_lo else "("
        right = "]" if self.closed_hi else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


class IntervalUnion:
    """Disjoint sorted intervals; the components of a preimage of an open set."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval]) -> None:
        ivs = tuple(intervals)
        for a, b in zip(ivs, ivs[1:]):
            if not a.hi <= b.lo:
                raise ValueError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def empty(cls) -> IntervalUnion:
        return cls(())

    @classmethod
    def full(cls) -> IntervalUnion:
        return cls((Interval(ZERO, ONE, True, True),))

    def is_empty(self) -> bool:
        return not self.intervals

    def is_full(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0] == Interval(
            ZERO, ONE, True, True
        )

    def contains(self, t: ScalarLike) -> bool:
        t = Scalar.of(t)
        return any(iv.contains(t) for iv in self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.intervals == other.intervals

    def __str__(self) -> str:
        if not self.intervals:
            return "(empty)"
        return " u ".join(str(iv) for iv in self.intervals)


class PLPath:
    """A piecewise-linear path [0,1] -> ambient, via breakpoints and lifts.

    ``breaks`` are strictly increasing with endpoints 0 and 1; ``lifts[i]``
    is the (cover) position at ``breaks[i]`` and the path interpolates
    linearly in the cover between consecutive breakpoints.
    """

    __slots__ = ("ambient", "breaks", "lifts")

    def __init__(
        self,
        ambient: Ambient,
        breaks: Iterable[ScalarLike],
        lifts: Iterable[Iterable[ScalarLike]],
    ) -> None:
        bs = tuple(Scalar.of(b) for b in breaks)
        ls = tuple(_coords(l) for l in lifts)
        if len(bs) < 2:
            raise ValueError("a path needs at least breakpoints 0 and 1")
        if bs[0] != ZERO or bs[-1] != ONE:
            raise ValueError("breakpoints must start at 0 and end at 1")
        for a, b in zip(bs, bs[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing")
        if len(ls) != len(bs):
            raise ValueError("one lift per breakpoint required")
        for l in ls:
            if len(l) != ambient.dim:
                raise ValueError("lift dimension does not match ambient")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "breaks", bs)
        object.__setattr__(self, "lifts", ls)

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_pairs(
        cls, ambient: Ambient, pairs: Iterable[tuple[ScalarLike, Iterable[ScalarLike]]]
    ) -> PLPath:
        pts = list(pairs)
        return cls(ambient, [t for t, _ in pts], [c for _, c in pts])

    @classmethod
    def constant(cls, ambient: Ambient, coords: Iterable[ScalarLike]) -> PLPath:
        c = _coords(coords)
        return cls(ambient, (ZERO, ONE), (c, c))

    @classmethod
    def segment(
        cls,
        ambient: Ambient,
        start: Iterable[ScalarLike],
        end: Iterable[ScalarLike],
    ) -> PLPath:
        return cls(ambient, (ZERO, ONE), (_coords(start), _coords(end)))

    # -- evaluation -------------------------------------------------------

    def segment_index(self, t: Scalar) -> int:
        if not (ZERO <= t <= ONE):
            raise ValueError(f"parameter {t} outside [0,1]")
        for i in range(len(self.breaks) - 1):
            if t <= self.breaks[i + 1]:
                return i
        return len(self.breaks) - 2

    def evaluate_lift(self, t: ScalarLike) -> Coords:
        t = Scalar.of(t)
        i = self.segment_index(t)
        t0, t1 = self.breaks[i], self.breaks[i + 1]
        if t == t0:
            return self.lifts[i]
        if t == t1:
            return self.lifts[i + 1]
        lam = (t - t0) / (t1 - t0)
        return tuple(
            a + lam * (b - a) for a, b in zip(self.lifts[i], self.lifts[i + 1])
        )

    def evaluate(self, t: ScalarLike) -> Point:
        return Point(self.ambient, self.evaluate_lift(t))

    def start(self) -> Point:
        return Point(self.ambient, self.lifts[0])

    def end(self) -> Point:
        return Point(self.ambient, self.lifts[-1])

    # -- structure ---------------------------------------------------------

    def segments(self) -> Iterator[tuple[Scalar, Scalar, Coords, Coords]]:
        for i in range(len(self.breaks) - 1):
            yield self.breaks[i], self.breaks[i + 1], self.lifts[i], self.lifts[i + 1]

    def is_constant(self) -> bool:
        return all(l == self.lifts[0] for l in self.lifts)

    def reverse(self) -> PLPath:
        bs = tuple(ONE - b for b in reversed(self.breaks))
        return PLPath(self.ambient, bs, tuple(reversed(self.lifts)))

    def translate_lift(self, offset: Sequence[ScalarLike]) -> PLPath:
        off = _coords(offset)
        return PLPath(
            self.ambient,
            self.breaks,
            tuple(tuple(c + o for c, o in zip(l, off)) for l in self.lifts),
        )

    def project(self, axes: Sequence[int], ambient: Ambient) -> PLPath:
        if ambient.dim != len(axes):
            raise ValueError("projection ambient dimension mismatch")
        return PLPath(
            ambient, self.breaks, tuple(tuple(l[a] for a in axes) for l in self.lifts)
        )

    def bbox(self) -> Box:
        los = tuple(
            min(l[i] for l in self.lifts) for i in range(self.ambient.dim)
        )
        his = tuple(
            max(l[i] for l in self.lifts) for i in range(self.ambient.dim)
        )
        return Box(los, his)

    def coordinate_values(self, axis: int) -> list[Scalar]:
        """Sorted distinct lift values taken at breakpoints on one axis."""
        return sorted(set(l[axis] for l in self.lifts))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLPath):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.breaks == other.breaks
            and self.lifts == other.lifts
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.breaks, self.lifts))

    def __repr__(self) -> str:
        pieces = ", ".join(
            f"{b}:({', '.join(str(c) for c in l)})"
            for b, l in zip(self.breaks, self.lifts)
        )
        return f"PLPath[{self.ambient}; {pieces}]"


# -- path operations ---------------------------------------------------------


def concat(p: PLPath, q: PLPath) -> PLPath:
    """Concatenation at the midpoint: p on [0,1/2], q on [1/2,1]."""
    if p.ambient != q.ambient:
        raise ValueError("ambient mismatch")
    if p.end() != q.start():
        raise ValueError(
            f"endpoint mismatch: first path ends at {p.end()}, "
            f"second starts at {q.start()}"
        )
    shift = tuple(a - b for a, b in zip(p.lifts[-1], q.lifts[0]))
    if p.ambient.is_torus:
        for s in shift:
            if not s.is_integer():
                raise AssertionError("matching endpoints must differ by a lattice vector")
    half = Scalar(Fraction(1, 2))
    breaks = [b * half for b in p.breaks]
    lifts = list(p.lifts)
    for b, l in zip(q.breaks[1:], q.lifts[1:]):
        breaks.append(half + b * half)
        lifts.append(tuple(c + s for c, s in zip(l, shift)))
    return PLPath(p.ambient, breaks, lifts)


def reparameterize(p: PLPath, r: PLPath) -> PLPath:
    """Precompose with a non-decreasing PL self-map of [0,1].

    ``r`` need not be surjective; any continuous non-decreasing map into
    [0,1] is accepted.
    """
    if r.ambient != Ambient.euclidean(1):
        raise ValueError("reparameterization must be a 1-dimensional euclidean path")
    for t0, t1, a, b in r.segments():
        if b[0] < a[0]:
            raise ValueError(
                f"reparameterization decreases on [{t0}, {t1}]: {a[0]} -> {b[0]}"
            )
    lo, hi = r.lifts[0][0], r.lifts[-1][0]
    if lo < ZERO or hi > ONE:
        raise ValueError("reparameterization must map into [0,1]")

    events: set[Scalar] = set(r.breaks)
    for t0, t1, a, b in r.segments():
        v0, v1 = a[0], b[0]
        if v0 == v1:
            continue
        for pb in p.breaks:
            if v0 < pb < v1:
                events.add(t0 + (pb - v0) * (t1 - t0) / (v1 - v0))
    new_breaks = sorted(events)
    new_lifts = [p.evaluate_lift(r.evaluate_lift(t)[0]) for t in new_breaks]
    return PLPath(p.ambient, new_breaks, new_lifts)


def restrict(p: PLPath, a: ScalarLike, b: ScalarLike) -> PLPath:
    """The affinely rescaled restriction of ``p`` to [a,b], as a path on [0,1]."""
    a, b = Scalar.of(a), Scalar.of(b)
    if not (ZERO <= a < b <= ONE):
        raise ValueError(f"need 0 <= a < b <= 1, got a={a}, b={b}")
    span = b - a
    inner = [t for t in p.breaks if a < t < b]
    params = [a, *inner, b]
    breaks = [(t - a) / span for t in params]
    lifts = [p.evaluate_lift(t) for t in params]
    return PLPath(p.ambient, breaks, lifts)


def _segment_crossings(
    t0: Scalar, t1: Scalar, x0: Scalar, x1: Scalar, level: Scalar
) -> Scalar | None:
    """Parameter in the open segment (t0,t1) where the affine coordinate hits level."""
    if x0 == x1:
        return None
    t = t0 + (level - x0) * (t1 - t0) / (x1 - x0)
    if t0 < t < t1:
        return t
    return None


def _wall_offsets(lo: Scalar, hi: Scalar, vmin: Scalar, vmax: Scalar, torus: bool):
    """Wall levels of (lo,hi) shifted by every lattice offset meeting [vmin,vmax]."""
    if not torus:
        return [lo, hi]
    walls = []
    # need lo - k <= vmax and hi - k >= vmin, i.e. k in [lo - vmax, hi - vmin]
    k_lo = (lo - vmax).floor()
    k_hi = (hi - vmin).ceil()
    for k in range(k_lo, k_hi + 1):
        walls.append(lo - Scalar(k))
        walls.append(hi - Scalar(k))
    return walls


def box_crossing_events(p: PLPath, box: Box, torus: bool) -> list[Scalar]:
    """Parameters where the path crosses a wall hyperplane of the box.

    On a torus, all lattice translates of the walls that meet the segment's
    coordinate range are considered.
    """
    out: list[Scalar] = []
    for t0, t1, a, b in p.segments():
        for axis in range(p.ambient.dim):
            x0, x1 = a[axis], b[axis]
            vmin, vmax = (x0, x1) if x0 <= x1 else (x1, x0)
            for wall in _wall_offsets(box.lo[axis], box.hi[axis], vmin, vmax, torus):
                t = _segment_crossings(t0, t1, x0, x1, wall)
                if t is not None:
                    out.append(t)
    return out


def preimage(p: PLPath, region: OpenSet) -> IntervalUnion:
    """The exact parameter set {t : p(t) in region}, relatively open in [0,1].

    Interior endpoints are always open (the preimage of an open set is open);
    0 and 1 are included when the path starts or ends inside the region.
    Isolated parameters where the path merely touches a box wall are excluded.
    """
    if p.ambient != region.ambient:
        raise ValueError("ambient mismatch")
    torus = p.ambient.is_torus
    events: set[Scalar] = set(p.breaks)
    for box in region.boxes:
        events.update(box_crossing_events(p, box, torus))
    evs = sorted(events)
    at_event = [region.contains_lift(p.evaluate_lift(t)) for t in evs]
    half = Scalar(Fraction(1, 2))
    in_gap = [
        region.contains_lift(p.evaluate_lift((evs[i] + evs[i + 1]) * half))
        for i in range(len(evs) - 1)
    ]

    intervals = []
    i = 0
    n_gaps = len(in_gap)
    while i < n_gaps:
        if not in_gap[i]:
            i += 1
            continue
        j = i
        while j + 1 < n_gaps and at_event[j + 1] and in_gap[j + 1]:
            j += 1
        intervals.append(
            Interval(
                evs[i],
                evs[j + 1],
                closed_lo=(evs[i] == ZERO and at_event[i]),
                closed_hi=(evs[j + 1] == ONE and at_event[j + 1]),
            )
        )
        i = j + 1
    return IntervalUnion(intervals)


def standard_reparams() -> list[tuple[str, PLPath]]:
    """Monotone PL self-maps of [0,1] used by the axiom checks."""
    line = Ambient.euclidean(1)
    f = Fraction

    def path(pairs):
        return PLPath.from_pairs(line, [(t, (v,)) for t, v in pairs])

    return [
        ("identity", path([(0, 0), (1, 1)])),
        ("constant-at-0", path([(0, 0), (1, 0)])),
        ("constant-at-1", path([(0, 1), (1, 1)])),
        ("slow-then-fast", path([(0, 0), (f(1, 2), f(1, 4)), (1, 1)])),
        ("pause-in-middle", path([(0, 0), (f(1, 3), f(1, 2)), (f(2, 3), f(1, 2)), (1, 1)])),
        ("non-surjective", path([(0, f(1, 4)), (1, f(3, 4))])),
    ]
