"""
Exact couples of towers and the spectral sequences they generate.

Every node D^{s,t}, E^{s,t} of a couple is F_p^dim in a chosen basis; the structure maps
are matrices keyed by the bidegree of their source:

    i: D^{s,t} -> D^{s-1,t-1}
    j: D^{s,t} -> E^{s+r-1,t+r-1}
    k: E^{s,t} -> D^{s+1,t}

D is kept for filtrations floor..S. Below 0 the tower is constant, so a floor of -(S+1)
is enough to see every exactness relation up to r = S+2.
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import conint, validator

from .complexes import induced_on_homology
from .errors import InexactCoupleError
from .flinalg import FpMatrix, Subspace, image, kernel, rank, subquotient
from .model.util import BaseModel
from .towers import Tower

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]


class BigradedModule(BaseModel):
    """Dimensions of the nonzero entries; entry (s, t) is F_p^dims[(s, t)]."""

    p: int
    dims: Dict[Bidegree, conint(ge=0)] = {}  # type: ignore

    @validator("dims")
    @classmethod
    def validate_dims(cls, dims: Dict[Bidegree, int]) -> Dict[Bidegree, int]:
        return {st: d for st, d in sorted(dims.items()) if d}

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    @property
    def support(self) -> List[Bidegree]:
        return list(self.dims)

    def is_zero(self) -> bool:
        return not self.dims

    def total(self) -> int:
        return sum(self.dims.values())

    def restrict(self, lowest_s: int) -> "BigradedModule":
        return BigradedModule(p=self.p, dims={st: d for st, d in self.dims.items() if st[0] >= lowest_s})


class ExactCouple(BaseModel):
    r: conint(ge=1)  # type: ignore
    p: int
    floor: int
    top: int
    D: BigradedModule
    E: BigradedModule
    i: Dict[Bidegree, FpMatrix] = {}
    j: Dict[Bidegree, FpMatrix] = {}
    k: Dict[Bidegree, FpMatrix] = {}

    @validator("i", "j", "k")
    @classmethod
    def validate_maps(cls, maps: Dict[Bidegree, FpMatrix], values: dict, field) -> Dict[Bidegree, FpMatrix]:
        if not {"r", "D", "E"} <= set(values):
            return maps
        for (s, t), m in maps.items():
            source, target = cls._ends(field.name, values["r"], values["D"], values["E"], s, t)
            if m.shape != (target, source):
                raise ValueError(f"{field.name} at ({s},{t}) has shape {m.shape}, expected {(target, source)}")
        return maps

    @staticmethod
    def _ends(name: str, r: int, d: BigradedModule, e: BigradedModule, s: int, t: int) -> Tuple[int, int]:
        if name == "i":
            return d.dim(s, t), d.dim(s - 1, t - 1)
        if name == "j":
            return d.dim(s, t), e.dim(s + r - 1, t + r - 1)
        return e.dim(s, t), d.dim(s + 1, t)

    def _map(self, name: str, s: int, t: int) -> FpMatrix:
        m = getattr(self, name).get((s, t))
        if m is None:
            source, target = self._ends(name, self.r, self.D, self.E, s, t)
            return FpMatrix.zeros(self.p, target, source)
        return m

    def i_map(self, s: int, t: int) -> FpMatrix:
        """i: D^{s,t} -> D^{s-1,t-1}."""
        return self._map("i", s, t)

    def j_map(self, s: int, t: int) -> FpMatrix:
        """j: D^{s,t} -> E^{s+r-1,t+r-1}."""
        return self._map("j", s, t)

    def k_map(self, s: int, t: int) -> FpMatrix:
        """k: E^{s,t} -> D^{s+1,t}."""
        return self._map("k", s, t)

    def d_map(self, s: int, t: int) -> FpMatrix:
        """d = j o k: E^{s,t} -> E^{s+r,t+r-1}."""
        return self.j_map(s + 1, t) @ self.k_map(s, t)

    def page(self) -> "Page":
        differential = {}
        for s, t in self.E.support:
            d = self.d_map(s, t)
            if not d.is_zero():
                differential[(s, t)] = d
        return Page(r=self.r, module=self.E, differential=differential)


class Page(BaseModel):
    """E_r with d_r: E_r^{s,t} -> E_r^{s+r,t+r-1}, keyed by source bidegree."""

    r: conint(ge=1)  # type: ignore
    module: BigradedModule
    differential: Dict[Bidegree, FpMatrix] = {}

    @validator("differential")
    @classmethod
    def validate_differential(cls, differential: Dict[Bidegree, FpMatrix], values: dict) -> Dict[Bidegree, FpMatrix]:
        if not {"r", "module"} <= set(values):
            return differential
        r, module = values["r"], values["module"]
        for (s, t), d in differential.items():
            expected = (module.dim(s + r, t + r - 1), module.dim(s, t))
            if d.shape != expected:
                raise ValueError(f"d_{r} at ({s},{t}) has shape {d.shape}, expected {expected}")
            after = differential.get((s + r, t + r - 1))
            if after is not None and not (after @ d).is_zero():
                raise ValueError(f"d_{r} o d_{r} is not zero at ({s},{t})")
        return differential

    @property
    def p(self) -> int:
        return self.module.p

    def d(self, s: int, t: int) -> FpMatrix:
        d = self.differential.get((s, t))
        if d is None:
            return FpMatrix.zeros(self.p, self.module.dim(s + self.r, t + self.r - 1), self.module.dim(s, t))
        return d

    def dims(self) -> Dict[Bidegree, int]:
        return dict(self.module.dims)


# #### Reports


class ExactnessWitness(BaseModel):
    """A node where ker(out) != im(in); dims are of the node, the kernel and the image."""

    node: str
    s: int
    t: int
    incoming: str
    outgoing: str
    dim: int
    kernel_dim: int
    image_dim: int


class ExactnessReport(BaseModel):
    r: int
    holds: bool
    checked: int
    failures: List[ExactnessWitness] = []
    skipped: List[Tuple[str, int, int]] = []


class ConvergenceReport(BaseModel):
    """E_∞ against the filtration quotients of H_*(F_0)."""

    holds: bool
    homology: Dict[int, int]
    e_infinity_totals: Dict[int, int]
    mismatches: List[Tuple[int, int, int, int]] = []  # (s, t, dim E_∞, dim of the quotient)


# #### Construction from towers


def couple_from_tower(tower: Tower, floor: Optional[int] = None) -> ExactCouple:
    """
    D_1^{s,t} = H_{t-s}(F_s), E_1^{s,t} = H_{t-s}(K_s), with i, j, k from the long exact
    sequence of F_{s+1} -> F_s -> K_s.
    """

    S = tower.S  # noqa: N806
    floor = -(S + 1) if floor is None else floor
    if floor > 0:
        raise ValueError(f"couple floor must be at most 0, got {floor}")
    degrees = tower.levels[0].degrees
    cone_degrees = sorted({n for s in range(S + 1) for n in tower.cofiber(s).complex.degrees})

    d_dims = {}
    for s in range(floor, S + 1):
        for n in degrees:
            d_dims[(s, s + n)] = tower.level(s).betti(n)
    e_dims = {}
    for s in range(S + 1):
        for n in cone_degrees:
            e_dims[(s, s + n)] = tower.cofiber(s).complex.betti(n)
    D = BigradedModule(p=tower.p, dims=d_dims)  # noqa: N806
    E = BigradedModule(p=tower.p, dims=e_dims)  # noqa: N806

    i, j, k = {}, {}, {}
    for s, t in D.support:
        n = t - s
        if s - 1 >= floor and D.dim(s - 1, t - 1):
            i[(s, t)] = _induced(tower.structure_map(s - 1).component(n), tower.level(s), tower.level(s - 1), n)
        if E.dim(s, t):
            cofiber = tower.cofiber(s)
            j[(s, t)] = _induced(cofiber.inclusion.component(n), tower.level(s), cofiber.complex, n)
    for s, t in E.support:
        n = t - s
        if D.dim(s + 1, t):
            cofiber = tower.cofiber(s)
            # The projection lands in shift(F_{s+1}, 1); its degree-n part is F_{s+1} in degree n-1.
            raw = cofiber.projection.component(n)
            k[(s, t)] = tower.level(s + 1).homology(n - 1).projection @ raw @ cofiber.complex.homology(n).lift

    return ExactCouple(r=1, p=tower.p, floor=floor, top=S, D=D, E=E, i=i, j=j, k=k)


def _induced(matrix: FpMatrix, source, target, n: int) -> FpMatrix:
    return target.homology(n).projection @ matrix @ source.homology(n).lift


# #### Exactness


def _exact_at(dim: int, incoming: FpMatrix, outgoing: FpMatrix) -> Tuple[bool, int, int]:
    kernel_dim = dim - rank(outgoing)
    image_dim = rank(incoming)
    holds = (outgoing @ incoming).is_zero() and kernel_dim == image_dim
    return holds, kernel_dim, image_dim


def verify_les(couple: ExactCouple) -> ExactnessReport:
    """
    Check exactness of ... -> E^{s,t+1} -k-> D^{s+1,t+1} -i-> D^{s,t} -j-> E^{s+r-1,t+r-1} -> ...
    at every stored node, by rank counting. Nodes whose incoming map starts outside the
    stored window are skipped and listed.
    """

    r = couple.r
    failures: List[ExactnessWitness] = []
    skipped: List[Tuple[str, int, int]] = []
    checked = 0

    def record(node, s, t, incoming_name, outgoing_name, dim, incoming, outgoing):
        nonlocal checked
        checked += 1
        holds, kernel_dim, image_dim = _exact_at(dim, incoming, outgoing)
        if not holds:
            failures.append(
                ExactnessWitness(
                    node=node,
                    s=s,
                    t=t,
                    incoming=incoming_name,
                    outgoing=outgoing_name,
                    dim=dim,
                    kernel_dim=kernel_dim,
                    image_dim=image_dim,
                )
            )

    for (s, t), dim in couple.D.dims.items():
        # ker j = im i; above the top level i comes from a zero node.
        record("D", s, t, "i", "j", dim, couple.i_map(s + 1, t + 1), couple.j_map(s, t))
        # ker i = im k
        if s - 1 >= couple.floor:
            record("D", s, t, "k", "i", dim, couple.k_map(s - 1, t), couple.i_map(s, t))
        else:
            skipped.append(("D", s, t))
    for (s, t), dim in couple.E.dims.items():
        # ker k = im j
        source_s = s - r + 1
        if source_s >= couple.floor:
            record("E", s, t, "j", "k", dim, couple.j_map(source_s, t - r + 1), couple.k_map(s, t))
        else:
            skipped.append(("E", s, t))

    if skipped:
        logger.debug("exactness at r=%d skipped %d boundary nodes", r, len(skipped))
    failures.sort(key=lambda w: (w.s, w.t, w.node, w.incoming))
    return ExactnessReport(r=r, holds=not failures, checked=checked, failures=failures, skipped=sorted(skipped))


# #### Derivation


def derive(couple: ExactCouple, check: bool = True) -> ExactCouple:
    """
    The derived couple: D' = im(i), E' = ker d / im d with d = j o k, and
    i' = restriction of i, j'(i y) = [j y], k'[z] = k z.
    """

    if check:
        report = verify_les(couple)
        if not report.holds:
            first = report.failures[0]
            raise InexactCoupleError(
                f"couple at r={couple.r} is not exact at {first.node}^({first.s},{first.t}): "
                f"kernel dim {first.kernel_dim}, image dim {first.image_dim}"
            )
    p, r = couple.p, couple.r

    # D'^{s,t} = image of i: D^{s+1,t+1} -> D^{s,t}, based on the pivot columns of i.
    d_basis: Dict[Bidegree, Subspace] = {}
    pivots: Dict[Bidegree, Tuple[int, ...]] = {}
    for s, t in couple.D.support:
        m = couple.i_map(s + 1, t + 1)
        if m.cols and rank(m):
            d_basis[(s, t)] = image(m)
            pivots[(s, t)] = m.reduction().pivots

    # E' = ker d / im d.
    e_quotients = {}
    for s, t in couple.E.support:
        cycles = kernel(couple.d_map(s, t))
        boundaries = image(couple.d_map(s - r, t - r + 1))
        quotient = subquotient(cycles, boundaries)
        if quotient.dim:
            e_quotients[(s, t)] = quotient

    new_d = BigradedModule(p=p, dims={st: sub.dim for st, sub in d_basis.items()})
    new_e = BigradedModule(p=p, dims={st: q.dim for st, q in e_quotients.items()})

    i, j, k = {}, {}, {}
    for (s, t), sub in d_basis.items():
        below = d_basis.get((s - 1, t - 1))
        if below is not None:
            i[(s, t)] = below.coordinate_matrix(couple.i_map(s, t) @ sub.basis)
        target = e_quotients.get((s + r, t + r))
        if target is not None:
            raw_j = couple.j_map(s + 1, t + 1)
            lift_columns = raw_j.submatrix(range(raw_j.rows), pivots[(s, t)])
            j[(s, t)] = target.projection @ lift_columns
    for (s, t), quotient in e_quotients.items():
        target = d_basis.get((s + 1, t))
        if target is not None:
            k[(s, t)] = target.coordinate_matrix(couple.k_map(s, t) @ quotient.lift)

    logger.debug("derived couple r=%d: |D|=%d |E|=%d", r + 1, new_d.total(), new_e.total())
    return ExactCouple(r=r + 1, p=p, floor=couple.floor, top=couple.top, D=new_d, E=new_e, i=i, j=j, k=k)


def couples(tower: Tower, r_max: int, check: bool = True) -> List[ExactCouple]:
    """Couples at levels 1..r_max, each derived from the previous one."""

    if r_max < 1:
        raise ValueError(f"page index r must be at least 1, got {r_max}")
    current = couple_from_tower(tower)
    result = [current]
    for _ in range(1, r_max):
        current = derive(current, check=check)
        result.append(current)
    return result


# #### Pages


def stable_index(tower: Tower) -> int:
    """d_r = 0 for r >= S+1 since E is concentrated in filtrations 0..S."""
    return tower.S + 1


def pages(tower: Tower, r_max: int) -> List[Page]:
    """E_1..E_{r_max}; pages past the stable index repeat it with zero differential."""

    if r_max < 1:
        raise ValueError(f"page index r must be at least 1, got {r_max}")
    computed = [c.page() for c in couples(tower, min(r_max, stable_index(tower)))]
    stable = computed[-1]
    for r in range(len(computed) + 1, r_max + 1):
        computed.append(Page(r=r, module=stable.module))
    return computed


def page(tower: Tower, r: int) -> Page:
    if r > stable_index(tower):
        logger.debug("page r=%d of a tower of length %d is the stable page", r, tower.S)
    return pages(tower, r)[-1]


def oracle_page(tower: Tower, r: int) -> BigradedModule:
    """
    E_r from cycles and boundaries in F_0, without exact couples:

        E_r^{s,t} = Z_r^s / (Z_{r-1}^{s+1} + d Z_{r-1}^{s-r+1}),  Z_r^s = {x in F_s : dx in F_{s+r}}

    in degree n = t - s. F_s is its image in F_0; F_s = F_0 for s < 0 and 0 for s > S.
    """

    if r < 1:
        raise ValueError(f"page index r must be at least 1, got {r}")
    top = tower.levels[0]
    p = tower.p
    filtered: Dict[Tuple[int, int], Subspace] = {}

    def level(s: int, n: int) -> Subspace:
        s = max(s, 0)
        if s > tower.S:
            return Subspace.zero(p, top.dim(n))
        if (s, n) not in filtered:
            filtered[(s, n)] = image(tower.composite(0, s + 1).component(n))
        return filtered[(s, n)]

    def cycles(r_: int, s: int, n: int) -> Subspace:
        return level(s, n).preimage(top.d(n), level(s + r_, n - 1))

    dims = {}
    for s in range(tower.S + 1):
        for n in top.degrees:
            numerator = cycles(r, s, n)
            if not numerator.dim:
                continue
            boundaries = cycles(r - 1, s - r + 1, n + 1).image_under(top.d(n + 1))
            denominator = cycles(r - 1, s + 1, n).sum(boundaries)
            dims[(s, s + n)] = subquotient(numerator, denominator).dim
    return BigradedModule(p=p, dims=dims)


# #### Convergence


def abutment_dimensions(tower: Tower) -> BigradedModule:
    """dim of im(H_n F_s -> H_n F_0) / im(H_n F_{s+1} -> H_n F_0) at (s, s+n)."""

    dims = {}
    for n in tower.levels[0].degrees:
        ranks = [rank(induced_on_homology(tower.composite(0, s + 1), n)) for s in range(tower.S + 2)]
        for s in range(tower.S + 1):
            dims[(s, s + n)] = ranks[s] - ranks[s + 1]
    return BigradedModule(p=tower.p, dims=dims)


def e_infinity(tower: Tower) -> Tuple[BigradedModule, ConvergenceReport]:
    stable = page(tower, stable_index(tower)).module
    abutment = abutment_dimensions(tower)
    homology = tower.levels[0].betti_numbers()

    totals: Dict[int, int] = {}
    for (s, t), dim in stable.dims.items():
        totals[t - s] = totals.get(t - s, 0) + dim
    mismatches = [
        (s, t, stable.dim(s, t), abutment.dim(s, t))
        for s, t in sorted(set(stable.support) | set(abutment.support))
        if stable.dim(s, t) != abutment.dim(s, t)
    ]
    holds = not mismatches and totals == homology
    if not holds:
        logger.warning("spectral sequence of %r does not converge to H_*(F_0)", tower)
    report = ConvergenceReport(holds=holds, homology=homology, e_infinity_totals=totals, mismatches=mismatches)
    return stable, report


def page_dims_agree(tower: Tower, r_values: Iterable[int]) -> List[Tuple[int, int, int, int, int]]:
    """(r, s, t, couple dim, oracle dim) wherever page() and oracle_page() disagree."""

    r_values = sorted(r_values)
    if not r_values:
        return []
    computed = pages(tower, r_values[-1])
    mismatches = []
    for r in r_values:
        mine = computed[r - 1].module
        oracle = oracle_page(tower, r)
        for s, t in sorted(set(mine.support) | set(oracle.support)):
            if mine.dim(s, t) != oracle.dim(s, t):
                mismatches.append((r, s, t, mine.dim(s, t), oracle.dim(s, t)))
    return mismatches

