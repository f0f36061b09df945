"""Scenario parameters for a negative line bundle over a closed symplectic base.

All scalars are exact :class:`fractions.Fraction`; admissibility questions
(semi-positivity, which case of the vanishing argument applies) are answered
symbolically, never with floats.  Sphere classes are coordinatized by a single
integer ``a``: the class with omega-area ``nu * a``.  In aspherical scenarios
the sphere group is trivial and ``a = 0`` everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


@dataclass(frozen=True)
class CritPoint:
    """A critical point of the auxiliary Morse function on the base."""

    name: str
    index: int          # Morse index, expected in [0, dim_m]
    value: Fraction     # critical value, expected in the open interval (0, 1)


@dataclass(frozen=True)
class BundleParams:
    """Geometric scenario: base dimension, circle-bundle level, Morse data.

    ``nu``/``c`` are given together for spherical scenarios (omega takes values
    ``nu * Z`` on spheres, and the first Chern class of the base equals
    ``c * omega`` on spheres) and are both ``None`` for aspherical ones.  The
    C^2-smallness of the Morse function is an unchecked modelling assumption;
    no quantitative bound is available, so none is validated.
    """

    dim_m: int
    tau: Fraction
    morse: tuple[CritPoint, ...]
    nu: int | None = None
    c: int | None = None

    @property
    def aspherical(self) -> bool:
        return self.nu is None and self.c is None

    def crit(self, name: str) -> CritPoint:
        for cp in self.morse:
            if cp.name == name:
                return cp
        raise KeyError(f"unknown critical point id {name!r}")

    @property
    def min_value(self) -> Fraction:
        return min(cp.value for cp in self.morse)

    @property
    def max_value(self) -> Fraction:
        return max(cp.value for cp in self.morse)


class CaseTag(Enum):
    ASPHERICAL = "aspherical"
    C_NON_NEGATIVE = "c-nonnegative"
    C_VERY_NEGATIVE = "c-very-negative"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class TheoremCase:
    """Which branch of the vanishing argument a scenario falls into.

    For ``c >= 1`` the flag ``cz_finiteness_ok`` records whether
    ``(c - 1) * tau < 1`` holds, the hypothesis under which the Novikov
    condition is equivalent to downstairs-index finiteness; it is ``None``
    in every other case.
    """

    tag: CaseTag
    cz_finiteness_ok: bool | None = None


@dataclass(frozen=True)
class SemiPositivity:
    holds: bool
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(params: BundleParams) -> ValidationReport:
    """Collect every violated scenario invariant (empty report means admissible)."""
    bad: list[str] = []
    if params.dim_m < 0:
        bad.append(f"dim_M negative: {params.dim_m}")
    elif params.dim_m % 2:
        bad.append(f"dim_M odd: {params.dim_m}")
    if params.tau <= 0:
        bad.append(f"tau must be positive, got {params.tau}")
    if (params.nu is None) != (params.c is None):
        bad.append("nu and c must be given together (spherical) or both omitted (aspherical)")
    if params.nu is not None and params.nu < 1:
        bad.append(f"nu must be a positive integer, got {params.nu}")
    if not params.morse:
        bad.append("Morse data empty: at least one critical point required")
    seen: set[str] = set()
    for cp in params.morse:
        if cp.name in seen:
            bad.append(f"duplicate critical point id {cp.name!r}")
        seen.add(cp.name)
        if not 0 <= cp.index <= params.dim_m:
            bad.append(f"Morse index of {cp.name!r} outside [0, {params.dim_m}]: {cp.index}")
        if not 0 < cp.value < 1:
            bad.append(f"critical value of {cp.name!r} not in (0,1): {cp.value}")
    return ValidationReport(tuple(bad))


def minimal_chern_number(params: BundleParams) -> int:
    """|c - 1| * nu, the minimal Chern number of the total space."""
    if params.aspherical:
        raise ValueError("minimal Chern number is undefined for aspherical scenarios")
    return abs(params.c - 1) * params.nu


def is_semi_positive(params: BundleParams) -> SemiPositivity:
    """Semi-positivity of the total space, with the clause that fired.

    Clauses, in order: aspherical base; monotone total space (c > 1);
    vanishing first Chern class of the total space (c = 1); minimal Chern
    number at least dim_E/2 - 2, i.e. |c-1|*nu >= dim_M/2 - 1.
    """
    if params.aspherical:
        return SemiPositivity(True, "symplectically aspherical")
    if params.c > 1:
        return SemiPositivity(True, f"monotone total space (c = {params.c} > 1)")
    if params.c == 1:
        return SemiPositivity(True, "first Chern class of the total space vanishes (c = 1)")
    n_e = minimal_chern_number(params)
    threshold = params.dim_m // 2 - 1
    if n_e >= threshold:
        return SemiPositivity(
            True, f"minimal Chern number {n_e} >= dim_E/2 - 2 = {threshold}"
        )
    return SemiPositivity(
        False,
        f"no clause applies: |c-1|*nu = {n_e} < dim_M/2 - 1 = {threshold} and c < 1",
    )


def theorem_case(params: BundleParams) -> TheoremCase:
    """Classify the scenario for the vanishing algorithm.

    Scenarios tagged NOT_APPLICABLE are rejected downstream, never silently
    processed.
    """
    if params.aspherical:
        return TheoremCase(CaseTag.ASPHERICAL)
    if params.c >= 1:
        return TheoremCase(
            CaseTag.C_NON_NEGATIVE, cz_finiteness_ok=(params.c - 1) * params.tau < 1
        )
    if params.c == 0 and is_semi_positive(params).holds:
        return TheoremCase(CaseTag.C_NON_NEGATIVE)
    if 2 * params.c * params.nu <= -params.dim_m:
        return TheoremCase(CaseTag.C_VERY_NEGATIVE)
    return TheoremCase(CaseTag.NOT_APPLICABLE)
