"""Weakly directed paths, saturation, and the saturation-process properties.

A path is weakly directed when every local directed function is locally
non-decreasing along it; computationally the quantifier runs over the space's
declared generator family.  Saturating a presented space replaces its
membership by weak directedness, producing a sheaf-presented space that is
saturated by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dfun import is_monotone_along
from .dspace import (
    DSpace,
    GeneratorFamily,
    SchemaFamily,
    _dedupe_cap,
    path_is_directed,
    sheaf_membership,
)
from .exactnum import Scalar
from .plgeom import OpenSet, PLPath, preimage
from .verdict import Verdict

__all__ = [
    "is_weakly_directed",
    "SaturationResult",
    "saturation",
    "SaturationReport",
    "check_saturated",
    "restricted_space",
    "LocalityReport",
    "check_locality",
    "PitfallReport",
    "check_global_only_pitfall",
    "SynthesizedFamily",
]


def is_weakly_directed(space: DSpace, path: PLPath, budget: int | None = None) -> Verdict:
    """Is every enumerated local directed function monotone along the path?"""
    if space.generators is None:
        raise ValueError(f"space {space.name or space.ambient} has no generator family")
    if path.ambient != space.ambient:
        raise ValueError("ambient mismatch")
    return sheaf_membership(space.generators, path, budget)


@dataclass(frozen=True)
class SaturationResult:
    """A sheaf-presented space whose membership is weak directedness."""

    space: DSpace
    source: DSpace
    family: GeneratorFamily


def saturation(space: DSpace, probes: Sequence[PLPath] | None = None) -> SaturationResult:
    """Replace membership by weak directedness.

    Needs a generator family.  When the space has none but ``probes`` are
    supplied, a fallback family is synthesized by filtering clamp-affine
    candidates against the predicate on the probe paths; such a family is
    never complete, so all accepting verdicts stay budget-qualified.
    """
    family = space.generators
    if family is None:
        if probes is None:
            raise ValueError(
                f"space {space.name or space.ambient} has no generator family"
            )
        family = SynthesizedFamily(space, probes)
    sat = DSpace(
        ambient=space.ambient,
        presentation="sheaf",
        predicate=None,
        generators=family,
        oracle=space.oracle,
        name=f"saturation({space.name})" if space.name else "saturation",
    )
    return SaturationResult(space=sat, source=space, family=family)


@dataclass
class SaturationReport:
    """Pointwise comparison of directedness and weak directedness on a corpus."""

    space: str
    checked: int = 0
    mismatches: list[tuple[str, str, str]] = field(default_factory=list)
    unit_violations: list[str] = field(default_factory=list)

    @property
    def saturated_on_corpus(self) -> bool:
        return not self.mismatches and not self.unit_violations

    def summary(self) -> str:
        state = (
            "saturated on corpus"
            if self.saturated_on_corpus
            else f"NOT saturated ({len(self.mismatches)} witnesses)"
        )
        return f"saturation[{self.space}]: {self.checked} paths -> {state}"

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "checked": self.checked,
            "mismatches": [
                {"path": p, "directed": d, "weakly_directed": w}
                for p, d, w in self.mismatches
            ],
            "unit_violations": list(self.unit_violations),
            "saturated_on_corpus": self.saturated_on_corpus,
        }


def check_saturated(
    space: DSpace,
    corpus: Sequence[PLPath],
    budget: int | None = None,
    labels: Sequence[str] | None = None,
) -> SaturationReport:
    """Does weak directedness agree with directedness on the corpus?

    A weakly-directed-but-not-directed path witnesses non-saturation.  The
    opposite gap would break the reflection unit (directed paths are always
    weakly directed) and is reported separately as an anomaly.
    """
    if space.generators is None:
        raise ValueError("check_saturated needs a generator family")
    if space.predicate is None and space.presentation != "sheaf":
        raise ValueError("check_saturated needs a membership presentation")
    report = SaturationReport(space=space.name or str(space.ambient))
    for i, p in enumerate(corpus):
        label = labels[i] if labels is not None else f"corpus[{i}]"
        directed = path_is_directed(space, p, budget)
        weak = is_weakly_directed(space, p, budget)
        report.checked += 1
        if directed.accepting and not weak.accepting:
            report.unit_violations.append(
                f"{label}: directed but not weakly directed ({weak.describe()})"
            )
        elif weak.accepting and not directed.accepting:
            report.mismatches.append((label, directed.describe(), weak.describe()))
    return report


def restricted_space(space: DSpace, region: OpenSet) -> DSpace:
    """The open subspace with the generator family cut down to the region."""
    if space.generators is None:
        raise ValueError("restriction needs a generator family")
    if region.ambient != space.ambient:
        raise ValueError("ambient mismatch")
    return DSpace(
        ambient=space.ambient,
        presentation="sheaf",
        generators=space.generators.restricted(region),
        name=f"{space.name}|Y" if space.name else "restricted",
    )


@dataclass
class LocalityReport:
    """Weak directedness survives restriction to an open subspace."""

    space: str
    region: str
    checked: int = 0
    skipped: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        state = "ok" if self.ok else f"{len(self.failures)} FAILURES"
        return (
            f"locality[{self.space} -> {self.region}]: {self.checked} paths in "
            f"region, {self.skipped} outside -> {state}"
        )

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "region": self.region,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": [{"path": p, "why": w} for p, w in self.failures],
            "ok": self.ok,
        }


def check_locality(
    space: DSpace,
    region: OpenSet,
    corpus: Sequence[PLPath],
    budget: int | None = None,
    labels: Sequence[str] | None = None,
) -> LocalityReport:
    """Paths inside the region that are weakly directed stay weakly directed
    in the restricted subspace."""
    sub = restricted_space(space, region)
    report = LocalityReport(space=space.name or str(space.ambient), region=str(region))
    for i, p in enumerate(corpus):
        label = labels[i] if labels is not None else f"corpus[{i}]"
        if not preimage(p, region).is_full():
            report.skipped += 1
            continue
        outer = is_weakly_directed(space, p, budget)
        if not outer.accepting:
            report.skipped += 1
            continue
        inner = is_weakly_directed(sub, p, budget)
        report.checked += 1
        if not inner.accepting:
            report.failures.append((label, inner.describe()))
    return report


@dataclass
class PitfallReport:
    """Membership as seen by global-only generators versus local charts."""

    space: str
    rows: list[tuple[str, Verdict, Verdict]] = field(default_factory=list)

    def pitfall_rows(self) -> list[str]:
        return [
            label
            for label, global_v, local_v in self.rows
            if global_v.accepting and not local_v.accepting
        ]

    @property
    def pitfall_exhibited(self) -> bool:
        return bool(self.pitfall_rows())

    def summary(self) -> str:
        wrong = self.pitfall_rows()
        if wrong:
            return (
                f"global-only pitfall[{self.space}]: {len(wrong)} path(s) pass the "
                f"global-only test but fail against local sections: {', '.join(wrong)}"
            )
        return f"global-only pitfall[{self.space}]: no divergence on this corpus"

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "rows": [
                {
                    "path": label,
                    "global_only": g.to_json(),
                    "local": l.to_json(),
                }
                for label, g, l in self.rows
            ],
            "pitfall_exhibited": self.pitfall_exhibited,
        }


def check_global_only_pitfall(
    space: DSpace,
    corpus: Sequence[PLPath],
    budget: int | None = None,
    labels: Sequence[str] | None = None,
) -> PitfallReport:
    """Compare membership tested only against globally-defined directed
    functions with the honest local test.

    On the circle no non-constant global directed function exists, so the
    global-only test accepts reversed loops; the local charts reject them.
    """
    if space.generators is None:
        raise ValueError("pitfall check needs a generator family")
    report = PitfallReport(space=space.name or str(space.ambient))
    for i, p in enumerate(corpus):
        label = labels[i] if labels is not None else f"corpus[{i}]"
        enum = space.generators.enumerate_global(p, budget)
        global_verdict: Verdict | None = None
        for f in enum.functions:
            v = is_monotone_along(f, p)
            if not v.accepting:
                global_verdict = Verdict.false(
                    witness=v.witness,
                    detail=f"global generator {f.label} decreases",
                )
                break
        if global_verdict is None:
            note = (
                "no non-constant global directed functions exist; "
                "nothing can reject the path"
                if not enum.functions
                else f"monotone along all {len(enum.functions)} global generators"
            )
            global_verdict = Verdict.true(note)
        local_verdict = is_weakly_directed(space, p, budget)
        report.rows.append((label, global_verdict, local_verdict))
    return report


class SynthesizedFamily(GeneratorFamily):
    """Fallback generators for spaces presented only by a predicate.

    Clamp-affine candidates (axis thresholds both ways, locally constant
    functions) are filtered by monotonicity along every probe path the
    predicate accepts.  The family is never complete: verdicts built from it
    stay budget-qualified.
    """

    complete = False

    def __init__(self, space: DSpace, probes: Sequence[PLPath]) -> None:
        if space.predicate is None:
            raise ValueError("synthesis needs a predicate to filter against")
        self.ambient = space.ambient
        self.probes = tuple(p for p in probes if space.predicate.decide(p)[0])
        schemas: list[tuple[str, tuple]] = [("locally_constant", ())]
        for axis in range(space.ambient.dim):
            schemas.append(("thresholds_up", (Scalar(axis),)))
            schemas.append(("thresholds_down", (Scalar(axis),)))
        self._candidates = SchemaFamily(space.ambient, schemas, complete=False)

    def enumerate(self, path: PLPath, budget: int | None = None):
        cands = self._candidates.enumerate(path, None)
        kept = [
            f
            for f in cands.functions
            if all(is_monotone_along(f, q).accepting for q in self.probes)
        ]
        return _dedupe_cap(kept, budget)
