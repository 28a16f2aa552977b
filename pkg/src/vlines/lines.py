"""
Vanishing lines.

A LineSpec (m, b, r) names the region s >= m(t-s) + b of the (t-s, s) chart at page r.
The four conditions checked here are

    (1)_{r,b}  D_r^{s,t} = 0 in the region, i.e. g^{r-1}: F_{s+r-1} -> F_s is zero on H_{t-s}
    (2)_{r,b}  E_r^{s,t} = 0 in the region
    (3)_{r,b}  for every W in a family with w = -conn(DW): W -> F_{s+r-1} -> F_s is null
               whenever s >= m w + b
    (4)_{r,b}  for every W in a family with w = conn(W): E_r^{s,t}(T ∧ W) = 0 whenever
               s >= m(t-s-w) + b

Intercepts are exact rationals; b = None stands for -∞ (every bidegree is in the region).
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import conint, root_validator

from .complexes import GradedComplex, connectivity, dual, induced_on_homology, is_ghost, shift
from .config import DEFAULT_CONNECTIVITY_CONVENTION, ConnectivityConvention, Settings, get_settings
from .couples import Page, couples, e_infinity, pages, page_dims_agree, verify_les
from .errors import NotARetractError, UndefinedConnectivityError
from .flinalg import rank
from .model.util import BaseModel, Rational
from .towers import (
    GeneratorParams,
    Tower,
    TowerMap,
    cofiber_tower,
    direct_sum_towers,
    is_retract,
    nonzero_composite_cycle,
    random_complex,
    random_tower,
    random_tower_map,
    smash,
)

logger = logging.getLogger(__name__)

Intercept = Optional[Fraction]

# Default slopes for corpus runs.
CORPUS_SLOPES = tuple(Fraction(m) for m in ("-2", "-1", "-1/2", "0", "1/2", "1", "2"))


class Flavor(str, Enum):
    D = "D"
    E = "E"


class LemmaCase(str, Enum):
    A = "a"
    B = "b"
    C = "c"
    D = "d"


class InterceptVariant(str, Enum):
    """Which intercept cases (b) and (d) conclude with when r >= 1 - m: b - m or b + m."""

    STATEMENT = "statement"
    PROOF = "proof"


class LineSpec(BaseModel):
    m: Rational
    b: Optional[Rational] = None
    r: conint(ge=1)  # type: ignore
    strict: bool = False

    def admits(self, value: Fraction) -> bool:
        """Is a point with s - m(t-s) = value in the region?"""

        if self.b is None:
            return True
        return value > self.b if self.strict else value >= self.b

    def contains(self, s: int, t: int) -> bool:
        return self.admits(s - self.m * (t - s))

    def __str__(self) -> str:
        b = "-inf" if self.b is None else str(self.b)
        op = ">" if self.strict else ">="
        return f"r={self.r}: s {op} {self.m}(t-s) + {b}"


def _format_intercept(b: Intercept) -> str:
    return "-inf" if b is None else str(b)


def _plus(b: Intercept, delta) -> Intercept:
    return None if b is None else Fraction(b) + delta


def _larger(a: Intercept, b: Intercept) -> Intercept:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


# #### Reports


class Witness(BaseModel):
    s: int
    t: int
    dim: int
    cycle: Optional[Tuple[int, ...]] = None
    family_member: Optional[str] = None


class VerificationReport(BaseModel):
    condition: str
    premises: List[LineSpec] = []
    conclusion: Optional[LineSpec] = None
    holds: bool
    witnesses: List[Witness] = []
    variant: Optional[InterceptVariant] = None
    cases: List["VerificationReport"] = []
    note: Optional[str] = None

    @root_validator(skip_on_failure=True)
    @classmethod
    def check_holds(cls, values: dict) -> dict:
        if values["holds"] == bool(values["witnesses"]):
            raise ValueError("a report holds exactly when it has no witnesses")
        return values

    def outcome(self) -> Tuple[bool, Tuple[Tuple[int, int, int], ...]]:
        """What two checks of the same region must agree on."""
        return self.holds, tuple((w.s, w.t, w.dim) for w in self.witnesses)


VerificationReport.update_forward_refs()


def _report(condition: str, spec: LineSpec, witnesses: List[Witness], **extra) -> VerificationReport:
    witnesses = sorted(witnesses, key=lambda w: (w.s, w.t, w.family_member or ""))
    return VerificationReport(condition=condition, conclusion=spec, holds=not witnesses, witnesses=witnesses, **extra)


# #### W-families


class FamilyMember(BaseModel):
    name: str
    base: str
    suspension: int
    complex: GradedComplex


class WFamily(BaseModel):
    """Finite complexes W for conditions (3) and (4): base complexes and their suspensions."""

    members: List[FamilyMember]

    @root_validator(skip_on_failure=True)
    @classmethod
    def check_members(cls, values: dict) -> dict:
        for member in values["members"]:
            if member.complex.is_acyclic():
                raise UndefinedConnectivityError(f"family member {member.name} has zero homology")
        return values

    @classmethod
    def from_complexes(cls, complexes: Sequence[GradedComplex], names: Optional[Sequence[str]] = None) -> "WFamily":
        names = list(names or [f"W{k + 1}" for k in range(len(complexes))])
        return cls(
            members=[FamilyMember(name=n, base=n, suspension=0, complex=c) for n, c in zip(names, complexes)]
        )

    def bases(self) -> "WFamily":
        """One member per base complex; condition (4) does not see suspensions."""

        seen, members = set(), []
        for member in self.members:
            if member.base not in seen:
                seen.add(member.base)
                members.append(member)
        return WFamily(members=members)

    def __len__(self) -> int:
        return len(self.members)


def _base_complexes(p: int, settings: Settings) -> List[Tuple[str, GradedComplex]]:
    bases = [
        ("S0", GradedComplex(p=p, dims={0: 1})),
        ("S0vS1", GradedComplex(p=p, dims={0: 1, 1: 1})),
        ("S0vS2", GradedComplex(p=p, dims={0: 1, 2: 1})),
        # x2 -> y1, with z1 a free cycle next to it
        ("x2y1z1", GradedComplex.create(p, {2: 1, 1: 2}, {2: [[1], [0]]})),
    ]
    rng = np.random.default_rng(settings.family_seed)
    while len(bases) < 4 + settings.family_random_count:
        candidate = random_complex(rng, p=p, max_generators=4, degree_window=(0, 2))
        if not candidate.is_acyclic():
            bases.append((f"random{len(bases) - 3}", candidate))
    # Normalize so that homology starts in degree 0.
    return [(name, shift(c, -connectivity(c))) for name, c in bases]


def default_family(tower: Tower, settings: Optional[Settings] = None) -> WFamily:
    """
    The spheres, two wedges of spheres, a three-cell complex and a few seeded random
    complexes, each suspended so that its bottom homology degree runs over the tower's
    degrees widened by family_window_padding.
    """

    settings = settings or get_settings()
    pad = settings.family_window_padding
    lo, hi = tower.degree_range() or (0, 0)
    members = []
    for name, base in _base_complexes(tower.p, settings):
        for k in range(lo - pad, hi + pad + 1):
            members.append(FamilyMember(name=f"{name}[{k}]", base=name, suspension=k, complex=shift(base, k)))
    logger.debug("default W-family: %d members over degrees %d..%d", len(members), lo - pad, hi + pad)
    return WFamily(members=members)


def _smashed_page(tower: Tower, member: FamilyMember, r: int, cache: Optional[Dict[str, Page]]) -> Page:
    if cache and member.name in cache:
        return cache[member.name]
    return pages(smash(tower, member.complex), r)[-1]


def _w3(w: GradedComplex, convention: ConnectivityConvention) -> int:
    return -connectivity(dual(w), convention)


# #### Conditions


def _level_range(tower: Tower, r: int) -> range:
    # Below 1-r every composite equals the one at 1-r; above S-r+1 the source vanishes.
    return range(1 - r, tower.S - r + 2)


def check_cond1(tower: Tower, spec: LineSpec) -> VerificationReport:
    """D_r^{s,t} = 0 for every (s, t) in the region."""

    r = spec.r
    witnesses = []
    for s in _level_range(tower, r):
        for n in tower.levels[0].degrees:
            if not spec.contains(s, s + n):
                continue
            cycle = nonzero_composite_cycle(tower, s, r, n)
            if cycle is not None:
                dim = rank(induced_on_homology(tower.composite(s, r), n))
                witnesses.append(Witness(s=s, t=s + n, dim=dim, cycle=cycle))
    return _report("1", spec, witnesses)


def check_cond2(tower: Tower, spec: LineSpec, page_r: Optional[Page] = None) -> VerificationReport:
    """E_r^{s,t} = 0 for every (s, t) in the region."""

    page_r = page_r or pages(tower, spec.r)[-1]
    witnesses = [
        Witness(s=s, t=t, dim=dim) for (s, t), dim in page_r.module.dims.items() if spec.contains(s, t)
    ]
    return _report("2", spec, witnesses)


def check_cond3(
    tower: Tower,
    spec: LineSpec,
    family: WFamily,
    convention: ConnectivityConvention = DEFAULT_CONNECTIVITY_CONVENTION,
) -> VerificationReport:
    """Every composite W -> F_{s+r-1} -> F_s is null when s - m w is in the region."""

    r = spec.r
    witnesses = []
    for member in family.members:
        w = _w3(member.complex, convention)
        degrees = member.complex.betti_numbers()
        for s in _level_range(tower, r):
            if not spec.admits(s - spec.m * w):
                continue
            for n in degrees:
                if nonzero_composite_cycle(tower, s, r, n) is not None:
                    dim = rank(induced_on_homology(tower.composite(s, r), n))
                    witnesses.append(Witness(s=s, t=s + n, dim=dim, family_member=member.name))
    return _report("3", spec, witnesses)


def check_cond4(
    tower: Tower,
    spec: LineSpec,
    family: WFamily,
    convention: ConnectivityConvention = DEFAULT_CONNECTIVITY_CONVENTION,
    smashed_pages: Optional[Dict[str, Page]] = None,
) -> VerificationReport:
    """E_r^{s,t}(T ∧ W) = 0 when s - m(t-s-w) is in the region, w = conn(W)."""

    witnesses = []
    for member in family.members:
        w = connectivity(member.complex, convention)
        page_r = _smashed_page(tower, member, spec.r, smashed_pages)
        for (s, t), dim in page_r.module.dims.items():
            if spec.admits(s - spec.m * (t - s - w)):
                witnesses.append(Witness(s=s, t=t, dim=dim, family_member=member.name))
    return _report("4", spec, witnesses)


# #### Minimal intercepts


def min_intercept(
    tower: Tower, m: Fraction, r: int, which: Flavor = Flavor.E, page_r: Optional[Page] = None
) -> Intercept:
    """
    β = max{s - m(t-s)} over the nonzero D_r (or E_r) entries, None when there are none.
    Condition (1) (or (2)) holds at intercept b exactly when b > β.
    """

    m = Fraction(m)
    values: List[Fraction] = []
    if Flavor(which) is Flavor.D:
        for s in _level_range(tower, r):
            for n in tower.levels[0].degrees:
                if nonzero_composite_cycle(tower, s, r, n) is not None:
                    values.append(s - m * n)
    else:
        page_r = page_r or pages(tower, r)[-1]
        values = [s - m * (t - s) for s, t in page_r.module.support]
    return max(values) if values else None


def min_family_intercept(
    tower: Tower,
    m: Fraction,
    r: int,
    condition: int,
    family: WFamily,
    convention: ConnectivityConvention = DEFAULT_CONNECTIVITY_CONVENTION,
    smashed_pages: Optional[Dict[str, Page]] = None,
) -> Intercept:
    """The condition-(3) or condition-(4) analogue of min_intercept over a family."""

    m = Fraction(m)
    values: List[Fraction] = []
    for member in family.members:
        if condition == 3:
            w = _w3(member.complex, convention)
            for s in _level_range(tower, r):
                if any(nonzero_composite_cycle(tower, s, r, n) is not None for n in member.complex.betti_numbers()):
                    values.append(s - m * w)
        elif condition == 4:
            w = connectivity(member.complex, convention)
            page_r = _smashed_page(tower, member, r, smashed_pages)
            values.extend(s - m * (t - s - w) for s, t in page_r.module.support)
        else:
            raise ValueError(f"family intercepts exist for conditions 3 and 4, not {condition}")
    return max(values) if values else None


# #### Reindexing


class LemmaShift(BaseModel):
    condition: int
    spec: LineSpec


def lemma_shift(
    case: LemmaCase, m: Fraction, r: int, b: Intercept, variant: InterceptVariant = InterceptVariant.STATEMENT
) -> LemmaShift:
    """
    (a) (1)_{r,b} => (2)_{r,b+r-1} if r >= -m, else (2)_{r,b-m}
    (b) (2)_{r,b} => (1)_{r,b-m} (statement) or (1)_{r,b+m} (proof) if r >= 1-m, else (1)_{r,b-r+1}
    (c), (d) the same with (3) and (4) in place of (1) and (2).
    """

    case, m = LemmaCase(case), Fraction(m)
    if case in (LemmaCase.A, LemmaCase.C):
        shifted = _plus(b, r - 1) if r >= -m else _plus(b, -m)
        condition = 2 if case is LemmaCase.A else 4
    else:
        if r >= 1 - m:
            shifted = _plus(b, -m) if InterceptVariant(variant) is InterceptVariant.STATEMENT else _plus(b, m)
        else:
            shifted = _plus(b, 1 - r)
        condition = 1 if case is LemmaCase.B else 3
    return LemmaShift(condition=condition, spec=LineSpec(m=m, b=shifted, r=r))


class LemmaReport(BaseModel):
    m: Rational
    r_max: int
    reports: List[VerificationReport]

    @property
    def holds(self) -> bool:
        return all(report.holds for report in self.reports)

    def counterexamples(self) -> List[VerificationReport]:
        return [report for report in self.reports if not report.holds]

    def variant_table(self) -> List[Tuple[str, int, bool, bool]]:
        """(case, r, statement intercept holds, proof intercept holds) for cases (b) and (d)."""

        table = []
        for report in self.reports:
            if report.cases:
                outcomes = {case.variant: case.holds for case in report.cases}
                table.append(
                    (
                        report.condition,
                        report.conclusion.r if report.conclusion else 0,
                        outcomes[InterceptVariant.STATEMENT],
                        outcomes[InterceptVariant.PROOF],
                    )
                )
        return table


def verify_lemma(
    tower: Tower,
    m: Fraction,
    family: Optional[WFamily] = None,
    r_max: Optional[int] = None,
    cases: Iterable[LemmaCase] = tuple(LemmaCase),
    convention: ConnectivityConvention = DEFAULT_CONNECTIVITY_CONVENTION,
) -> LemmaReport:
    """
    For each case and r <= r_max: take the minimal premise intercept β, reindex it with
    lemma_shift and check the conclusion on the strict region. Cases (b) and (d) are
    checked with both intercept variants and hold when either does.
    """

    m = Fraction(m)
    r_max = r_max or tower.S + 2
    cases = [LemmaCase(case) for case in cases]
    family = family if family is not None else default_family(tower)
    bases = family.bases()
    own_pages = pages(tower, r_max)
    smashed = {}
    if LemmaCase.C in cases or LemmaCase.D in cases:
        smashed = {member.name: pages(smash(tower, member.complex), r_max) for member in bases.members}

    reports = []
    for r in range(1, r_max + 1):
        page_r = own_pages[r - 1]
        smashed_r = {name: ps[r - 1] for name, ps in smashed.items()}
        for case in cases:
            if case is LemmaCase.A:
                beta = min_intercept(tower, m, r, Flavor.D)
                premise = LineSpec(m=m, b=beta, r=r, strict=True)
                conclusion = _strict(lemma_shift(case, m, r, beta).spec)
                sub = check_cond2(tower, conclusion, page_r)
                reports.append(_lemma_report(case, premise, sub))
            elif case is LemmaCase.C:
                beta = min_family_intercept(tower, m, r, 3, family, convention)
                premise = LineSpec(m=m, b=beta, r=r, strict=True)
                conclusion = _strict(lemma_shift(case, m, r, beta).spec)
                sub = check_cond4(tower, conclusion, bases, convention, smashed_r)
                reports.append(_lemma_report(case, premise, sub))
            else:
                if case is LemmaCase.B:
                    beta = min_intercept(tower, m, r, Flavor.E, page_r)
                else:
                    beta = min_family_intercept(tower, m, r, 4, bases, convention, smashed_r)
                premise = LineSpec(m=m, b=beta, r=r, strict=True)
                variants = []
                for variant in InterceptVariant:
                    conclusion = _strict(lemma_shift(case, m, r, beta, variant).spec)
                    if case is LemmaCase.B:
                        sub = check_cond1(tower, conclusion)
                    else:
                        sub = check_cond3(tower, conclusion, family, convention)
                    variants.append(sub.copy(update={"variant": variant, "premises": [premise]}))
                best = next((v for v in variants if v.holds), variants[0])
                reports.append(
                    VerificationReport(
                        condition=f"lemma-{case.value}",
                        premises=[premise],
                        conclusion=best.conclusion,
                        holds=best.holds,
                        witnesses=[] if best.holds else best.witnesses,
                        variant=best.variant,
                        cases=variants,
                    )
                )
    for report in reports:
        if not report.holds:
            logger.warning("lemma %s fails at %s for %r", report.condition, report.conclusion, tower)
    return LemmaReport(m=m, r_max=r_max, reports=reports)


def _strict(spec: LineSpec) -> LineSpec:
    return spec.copy(update={"strict": True})


def _lemma_report(case: LemmaCase, premise: LineSpec, sub: VerificationReport) -> VerificationReport:
    return VerificationReport(
        condition=f"lemma-{case.value}",
        premises=[premise],
        conclusion=sub.conclusion,
        holds=sub.holds,
        witnesses=sub.witnesses,
    )


# #### Genericity


def verify_generic_cofiber(f: TowerMap, m: Fraction, r_max: Optional[int] = None) -> VerificationReport:
    """
    For X -> Y -> Z = cofiber(f): if X satisfies (1)_{r,b} and Z satisfies (1)_{r',b'},
    then Y satisfies (1)_{r+r'-1, max(b, b'-r+1)}. Checked for every r, r' <= r_max with
    the minimal intercepts of X and Z.
    """

    m = Fraction(m)
    x, y = f.source, f.target
    z = cofiber_tower(f).tower
    r_max = r_max or f.S + 2
    x_beta = {r: min_intercept(x, m, r, Flavor.D) for r in range(1, r_max + 1)}
    z_beta = {r: min_intercept(z, m, r, Flavor.D) for r in range(1, r_max + 1)}
    # Observed least intercepts of Y; only the inequality against them is asserted.
    y_beta = {r: min_intercept(y, m, r, Flavor.D) for r in range(1, 2 * r_max)}

    sub_reports = []
    for r in range(1, r_max + 1):
        for r2 in range(1, r_max + 1):
            b = _larger(x_beta[r], _plus(z_beta[r2], 1 - r))
            conclusion = LineSpec(m=m, b=b, r=r + r2 - 1, strict=True)
            sub = check_cond1(y, conclusion)
            sub_reports.append(
                sub.copy(
                    update={
                        "condition": "theorem-cofiber",
                        "premises": [
                            LineSpec(m=m, b=x_beta[r], r=r, strict=True),
                            LineSpec(m=m, b=z_beta[r2], r=r2, strict=True),
                        ],
                        "note": f"least intercept of Y: {_format_intercept(y_beta[r + r2 - 1])}",
                    }
                )
            )
    witnesses = [w for sub in sub_reports for w in sub.witnesses]
    if witnesses:
        logger.error("cofiber genericity counterexample for %r", f)
    return VerificationReport(
        condition="theorem-cofiber",
        holds=not witnesses,
        witnesses=sorted(witnesses, key=lambda w: (w.s, w.t)),
        cases=sub_reports,
    )


def verify_generic_retract(i: TowerMap, j: TowerMap, spec: LineSpec) -> VerificationReport:
    """If Y is a retract of X (j o i ~ id) and X satisfies (1) at spec, so does Y."""

    if not is_retract(i, j):
        raise NotARetractError("j o i is not levelwise homotopic to the identity")
    x, y = i.target, i.source
    premise = check_cond1(x, spec)
    if not premise.holds:
        return VerificationReport(
            condition="theorem-retract", premises=[spec], conclusion=spec, holds=True, note="premise fails on X"
        )
    conclusion = check_cond1(y, spec)
    return conclusion.copy(update={"condition": "theorem-retract", "premises": [spec]})


def verify_ghost_corollary(tower: Tower, r: int, b: Rational) -> VerificationReport:
    """g^{r-1}: F_{s+r-1} -> F_s is a ghost for every s >= b."""

    spec = LineSpec(m=0, b=b, r=r)
    witnesses = []
    for s in _level_range(tower, r):
        if not spec.admits(Fraction(s)):
            continue
        g = tower.composite(s, r)
        if is_ghost(g):
            continue
        for n in tower.levels[0].degrees:
            if g.source.betti(n) and g.target.betti(n):
                dim = rank(induced_on_homology(g, n))
                if dim:
                    witnesses.append(Witness(s=s, t=s + n, dim=dim))
    return _report("ghost", spec, witnesses)


# #### Corpus runs


class InstanceReport(BaseModel):
    seed: int
    S: int
    generators: int
    has_differential: bool
    oracle_mismatches: List[Tuple[int, int, int, int, int]] = []
    exactness_failures: int = 0
    converges: bool = True
    lemma_counterexamples: List[VerificationReport] = []
    variant_table: List[Tuple[str, str, int, bool, bool]] = []  # (m, case, r, statement, proof)
    cofiber_counterexamples: List[VerificationReport] = []
    retract_counterexamples: List[VerificationReport] = []

    @property
    def holds(self) -> bool:
        return (
            not self.oracle_mismatches
            and not self.exactness_failures
            and self.converges
            and not self.lemma_counterexamples
            and not self.cofiber_counterexamples
            and not self.retract_counterexamples
        )


class CorpusReport(BaseModel):
    params: GeneratorParams
    ms: List[Rational]
    instances: List[InstanceReport]

    @property
    def holds(self) -> bool:
        return all(instance.holds for instance in self.instances)

    def summary(self) -> Dict[str, int]:
        return {
            "instances": len(self.instances),
            "oracle_mismatches": sum(len(i.oracle_mismatches) for i in self.instances),
            "exactness_failures": sum(i.exactness_failures for i in self.instances),
            "convergence_failures": sum(not i.converges for i in self.instances),
            "lemma_counterexamples": sum(len(i.lemma_counterexamples) for i in self.instances),
            "cofiber_counterexamples": sum(len(i.cofiber_counterexamples) for i in self.instances),
            "retract_counterexamples": sum(len(i.retract_counterexamples) for i in self.instances),
        }


def run_instance(
    seed: int,
    params: GeneratorParams,
    ms: Sequence[Fraction],
    r_max: Optional[int] = None,
    cases: Sequence[LemmaCase] = tuple(LemmaCase),
    generic: bool = True,
    settings: Optional[Settings] = None,
) -> InstanceReport:
    """Everything the corpus checks, for the random tower (and tower map) of one seed."""

    settings = settings or get_settings()
    tower = random_tower(seed, params)
    stable = tower.S + 2
    limit = min(r_max or stable, stable)

    mismatches = page_dims_agree(tower, range(1, stable + 1))
    exactness = sum(len(verify_les(c).failures) for c in couples(tower, stable))
    _, convergence = e_infinity(tower)

    family = default_family(tower, settings) if {LemmaCase.C, LemmaCase.D} & set(cases) else WFamily(members=[])
    lemma_failures: List[VerificationReport] = []
    table = []
    for m in ms:
        lemma = verify_lemma(tower, m, family, limit, cases, settings.connectivity_convention)
        lemma_failures.extend(lemma.counterexamples())
        table.extend((str(m), *row) for row in lemma.variant_table())

    cofiber_failures: List[VerificationReport] = []
    retract_failures: List[VerificationReport] = []
    if generic:
        f = random_tower_map(seed, params)
        other = random_tower(seed + 1, params)
        split = direct_sum_towers(tower, other)
        x = split.tower
        for m in ms:
            report = verify_generic_cofiber(f, m, min(r_max or f.S + 2, f.S + 2))
            if not report.holds:
                cofiber_failures.append(report)
            for r in range(1, limit + 1):
                spec = LineSpec(m=m, b=min_intercept(x, m, r, Flavor.D), r=r, strict=True)
                report = verify_generic_retract(split.inclusions[0], split.projections[0], spec)
                if not report.holds:
                    retract_failures.append(report)

    return InstanceReport(
        seed=seed,
        S=tower.S,
        generators=tower.levels[0].total_dim,
        has_differential=bool(tower.levels[0].differentials),
        oracle_mismatches=mismatches,
        exactness_failures=exactness,
        converges=convergence.holds,
        lemma_counterexamples=lemma_failures,
        variant_table=table,
        cofiber_counterexamples=cofiber_failures,
        retract_counterexamples=retract_failures,
    )


def _run_instance_args(args) -> InstanceReport:
    return run_instance(*args)


def run_corpus(
    seeds: Iterable[int],
    params: Optional[GeneratorParams] = None,
    ms: Sequence[Fraction] = CORPUS_SLOPES,
    r_max: Optional[int] = None,
    cases: Sequence[LemmaCase] = tuple(LemmaCase),
    generic: bool = True,
    settings: Optional[Settings] = None,
    jobs: int = 1,
) -> CorpusReport:
    """Run every seed; with jobs > 1 instances run in worker processes. Results are in seed order."""

    params = params or GeneratorParams()
    settings = settings or get_settings()
    seeds = sorted(seeds)
    ms = [Fraction(m) for m in ms]
    work = [(seed, params, ms, r_max, tuple(cases), generic, settings) for seed in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            instances = list(pool.map(_run_instance_args, work))
    else:
        instances = [_run_instance_args(args) for args in work]
    for instance in instances:
        logger.info(
            "seed %d: S=%d, %d generators, holds=%s", instance.seed, instance.S, instance.generators, instance.holds
        )
    return CorpusReport(params=params, ms=ms, instances=instances)
