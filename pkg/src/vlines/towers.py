"""
Adams towers modelled by strictly filtered bounded complexes.

A Tower is F_0 <- F_1 <- ... <- F_S with degreewise injective structure maps
g_s: F_{s+1} -> F_s. Outside 0..S the tower is extended in the usual way: F_s = F_0 with
identity structure maps for s < 0 and F_s = 0 for s > S.

FilteredComplex is the concrete description used by documents and random generators:
a basis of generators, each with a degree and a filtration, and F_s spanned by the
generators of filtration at least s.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import PrivateAttr, conint, constr, validator

from .complexes import (
    Cofiber,
    ComplexMap,
    GradedComplex,
    compose,
    cone,
    direct_sum,
    direct_sum_maps,
    hom_blocks,
    hom_complex,
    identity_map,
    induced_on_homology,
    is_ghost,
    is_null_homotopic,
    same_complex,
    shift,
    shift_map,
    tensor,
    tensor_maps,
    zero_complex,
    zero_map,
)
from .errors import PrimeMismatchError, ShapeMismatchError
from .flinalg import FpMatrix, Subspace, check_prime, image, inverse, kernel, subquotient
from .model.util import BaseModel

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator]

NON_GHOST_ATTEMPTS = 12


class Tower(BaseModel):
    levels: List[GradedComplex]
    maps: List[ComplexMap] = []

    _zero: Optional[GradedComplex] = PrivateAttr(default=None)
    _composites: Dict[Tuple[int, int], ComplexMap] = PrivateAttr(default_factory=dict)
    _cofibers: Dict[int, Cofiber] = PrivateAttr(default_factory=dict)

    @validator("levels")
    @classmethod
    def validate_levels(cls, levels: List[GradedComplex]) -> List[GradedComplex]:
        if not levels:
            raise ValueError("a tower needs at least the level F_0")
        primes = sorted({level.p for level in levels})
        if len(primes) != 1:
            raise PrimeMismatchError(f"tower levels over different primes: {primes}")
        return levels

    @validator("maps", always=True)
    @classmethod
    def validate_maps(cls, maps: List[ComplexMap], values: dict) -> List[ComplexMap]:
        levels = values.get("levels")
        if levels is None:
            return maps
        if len(maps) != len(levels) - 1:
            raise ValueError(f"a tower with {len(levels)} levels needs {len(levels) - 1} maps, got {len(maps)}")
        for s, g in enumerate(maps):
            if not same_complex(g.source, levels[s + 1]) or not same_complex(g.target, levels[s]):
                raise ValueError(f"structure map g_{s} does not go from F_{s + 1} to F_{s}")
            if not g.is_degreewise_injective():
                raise ValueError(f"structure map g_{s}: F_{s + 1} -> F_{s} is not degreewise injective")
        return maps

    @property
    def p(self) -> int:
        return self.levels[0].p

    @property
    def S(self) -> int:  # noqa: N802
        """Index of the last stored level; F_s = 0 beyond it."""
        return len(self.levels) - 1

    def is_zero(self) -> bool:
        return all(level.is_zero() for level in self.levels)

    def degree_range(self) -> Optional[Tuple[int, int]]:
        """(lowest, highest) degree of F_0, which contains every level."""

        degrees = self.levels[0].degrees
        return (min(degrees), max(degrees)) if degrees else None

    # #### Extended levels and maps

    def level(self, s: int) -> GradedComplex:
        if s < 0:
            return self.levels[0]
        if s > self.S:
            if self._zero is None:
                self._zero = zero_complex(self.p)
            return self._zero
        return self.levels[s]

    def structure_map(self, s: int) -> ComplexMap:
        """g_s: F_{s+1} -> F_s."""
        return self.composite(s, 2)

    def _raw_map(self, s: int) -> ComplexMap:
        if s < 0:
            return identity_map(self.levels[0])
        if s >= self.S:
            return zero_map(self.level(s + 1), self.level(s))
        return self.maps[s]

    def composite(self, s: int, r: int) -> ComplexMap:
        """g^{r-1}: F_{s+r-1} -> F_s; the identity of F_s when r = 1."""

        if r < 1:
            raise ValueError(f"page index r must be at least 1, got {r}")
        key = (s, r)
        if key not in self._composites:
            if r == 1:
                self._composites[key] = identity_map(self.level(s))
            elif r == 2:
                self._composites[key] = self._raw_map(s)
            else:
                self._composites[key] = compose(self.composite(s, r - 1), self._raw_map(s + r - 2))
        return self._composites[key]

    def cofiber(self, s: int) -> Cofiber:
        """K_s = cone(g_s) with its maps F_s -> K_s -> shift(F_{s+1}, 1)."""

        if s not in self._cofibers:
            self._cofibers[s] = cone(self.structure_map(s))
        return self._cofibers[s]

    # #### Derived towers

    def pad(self, length: int) -> "Tower":
        """The same tower with zero levels appended up to index `length`."""

        if length <= self.S:
            return self
        levels = list(self.levels)
        maps = list(self.maps)
        while len(levels) <= length:
            levels.append(zero_complex(self.p))
            maps.append(zero_map(levels[-1], levels[-2]))
        return Tower(levels=levels, maps=maps)

    def shift(self, k: int) -> "Tower":
        """Every level suspended k times."""

        return Tower(levels=[shift(level, k) for level in self.levels], maps=[shift_map(g, k) for g in self.maps])

    def __repr__(self) -> str:
        return f"Tower(p={self.p}, S={self.S}, dims={[level.dims for level in self.levels]})"


class TowerMap(BaseModel):
    """Levelwise chain maps f_s: X_s -> Y_s commuting with the structure maps."""

    source: Tower
    target: Tower
    components: List[ComplexMap]

    @validator("target")
    @classmethod
    def validate_target(cls, target: Tower, values: dict) -> Tower:
        source = values.get("source")
        if source is None:
            return target
        if source.p != target.p:
            raise PrimeMismatchError(f"tower map from F_{source.p} to F_{target.p}")
        if source.S != target.S:
            raise ShapeMismatchError(f"tower map between lengths {source.S} and {target.S}; pad the shorter one")
        return target

    @validator("components")
    @classmethod
    def validate_components(cls, components: List[ComplexMap], values: dict) -> List[ComplexMap]:
        source, target = values.get("source"), values.get("target")
        if source is None or target is None:
            return components
        if len(components) != source.S + 1:
            raise ValueError(f"tower map needs {source.S + 1} level maps, got {len(components)}")
        for s, f in enumerate(components):
            if not same_complex(f.source, source.level(s)) or not same_complex(f.target, target.level(s)):
                raise ValueError(f"level map f_{s} does not go from X_{s} to Y_{s}")
        for s in range(source.S):
            left = compose(components[s], source.structure_map(s))
            right = compose(target.structure_map(s), components[s + 1])
            if any(left.component(n) != right.component(n) for n in source.level(s + 1).degrees):
                raise ValueError(f"level maps f_{s}, f_{s + 1} do not commute with the structure maps")
        return components

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def S(self) -> int:  # noqa: N802
        return self.source.S

    def component(self, s: int) -> ComplexMap:
        if s < 0:
            return self.components[0]
        if s > self.S:
            return zero_map(self.source.level(s), self.target.level(s))
        return self.components[s]


class TowerCofiber(BaseModel):
    """Z = cofiber of f: X -> Y, with the maps Y -> Z -> shift(X, 1)."""

    tower: Tower
    inclusion: TowerMap
    projection: TowerMap


class TowerDirectSum(BaseModel):
    tower: Tower
    inclusions: Tuple[TowerMap, TowerMap]
    projections: Tuple[TowerMap, TowerMap]


# #### Construction


def make_tower(levels: Sequence[GradedComplex], maps: Sequence[ComplexMap] = ()) -> Tower:
    return Tower(levels=list(levels), maps=list(maps))


def zero_tower(p: int = 2) -> Tower:
    return Tower(levels=[zero_complex(p)])


def sphere_tower(n: int = 0, p: int = 2) -> Tower:
    """F_0 = S^n and nothing above it."""
    return Tower(levels=[GradedComplex(p=p, dims={n: 1})])


def make_tower_map(source: Tower, target: Tower, components: Sequence[ComplexMap]) -> TowerMap:
    """Pad both towers (and the missing level maps) to a common length."""

    length = max(source.S, target.S, len(components) - 1)
    source, target = source.pad(length), target.pad(length)
    padded = list(components)
    while len(padded) <= length:
        s = len(padded)
        padded.append(zero_map(source.level(s), target.level(s)))
    return TowerMap(source=source, target=target, components=padded)


def identity_tower_map(tower: Tower) -> TowerMap:
    return TowerMap(source=tower, target=tower, components=[identity_map(level) for level in tower.levels])


def compose_tower_maps(f: TowerMap, g: TowerMap) -> TowerMap:
    """f after g."""

    if g.S != f.S or not all(same_complex(g.target.level(s), f.source.level(s)) for s in range(f.S + 1)):
        raise ShapeMismatchError("cannot compose tower maps: target of the first is not the source of the second")
    return TowerMap(
        source=g.source, target=f.target, components=[compose(f.component(s), g.component(s)) for s in range(f.S + 1)]
    )


# #### Operations


def smash(tower: Tower, w: GradedComplex) -> Tower:
    """Level s is F_s ⊗ W with structure maps g_s ⊗ id."""

    if tower.p != w.p:
        raise PrimeMismatchError(f"smash of a tower over F_{tower.p} with a complex over F_{w.p}")
    levels = [tensor(level, w) for level in tower.levels]
    identity = identity_map(w)
    maps = [
        tensor_maps(g, identity, source=levels[s + 1], target=levels[s]) for s, g in enumerate(tower.maps)
    ]
    return Tower(levels=levels, maps=maps)


def cofiber_tower(f: TowerMap) -> TowerCofiber:
    """
    Level s is cone(f_s). The structure maps are the induced maps of cones,
    diag(g^Y_s, g^X_s), which stay degreewise injective.
    """

    p, x, y = f.p, f.source, f.target
    cofibers = [cone(f.component(s)) for s in range(f.S + 1)]
    levels = [c.complex for c in cofibers]
    maps = []
    for s in range(f.S):
        components = {}
        for n in levels[s + 1].degrees:
            gy, gx = y.structure_map(s).component(n), x.structure_map(s).component(n - 1)
            components[n] = FpMatrix.block(p, [gy.rows, gx.rows], [gy.cols, gx.cols], {(0, 0): gy, (1, 1): gx})
        maps.append(ComplexMap(source=levels[s + 1], target=levels[s], components=components))
    z = Tower(levels=levels, maps=maps)
    logger.debug("cofiber tower of %r has level dims %s", f.source, [level.dims for level in levels])
    return TowerCofiber(
        tower=z,
        inclusion=TowerMap(source=y, target=z, components=[c.inclusion for c in cofibers]),
        projection=TowerMap(source=z, target=x.shift(1), components=[c.projection for c in cofibers]),
    )


def direct_sum_towers(a: Tower, b: Tower) -> TowerDirectSum:
    length = max(a.S, b.S)
    a, b = a.pad(length), b.pad(length)
    sums = [direct_sum(a.level(s), b.level(s)) for s in range(length + 1)]
    levels = [ds.complex for ds in sums]
    maps = [
        direct_sum_maps(a.maps[s], b.maps[s], source=levels[s + 1], target=levels[s]) for s in range(length)
    ]
    tower = Tower(levels=levels, maps=maps)
    inclusions = tuple(
        TowerMap(source=part, target=tower, components=[ds.inclusions[k] for ds in sums])
        for k, part in enumerate((a, b))
    )
    projections = tuple(
        TowerMap(source=tower, target=part, components=[ds.projections[k] for ds in sums])
        for k, part in enumerate((a, b))
    )
    return TowerDirectSum(tower=tower, inclusions=inclusions, projections=projections)


def is_retract(i: TowerMap, j: TowerMap) -> bool:
    """True iff j o i: Y -> Y is levelwise chain-homotopic to the identity."""

    if i.S != j.S:
        raise ShapeMismatchError(f"retraction data of lengths {i.S} and {j.S}")
    for s in range(i.S + 1):
        if not same_complex(i.target.level(s), j.source.level(s)) or not same_complex(
            i.source.level(s), j.target.level(s)
        ):
            raise ShapeMismatchError(f"i and j do not form maps Y -> X -> Y at level {s}")
    for s in range(i.S + 1):
        y = i.source.level(s)
        ji = compose(j.component(s), i.component(s))
        difference = ComplexMap(
            source=y, target=y, components={n: FpMatrix.identity(y.p, y.dim(n)) - ji.component(n) for n in y.degrees}
        )
        if not is_null_homotopic(difference):
            logger.debug("j o i is not homotopic to the identity at level %d", s)
            return False
    return True


def nonzero_composite_cycle(tower: Tower, s: int, r: int, n: int) -> Optional[Tuple[int, ...]]:
    """A cycle of F_{s+r-1} in degree n whose image in H_n(F_s) is nonzero, or None."""

    if r < 1:
        raise ValueError(f"page index r must be at least 1, got {r}")
    if s + r - 1 > tower.S or not tower.level(s + r - 1).betti(n):
        return None
    g = tower.composite(s, r)
    induced = induced_on_homology(g, n)
    for k in range(induced.cols):
        if any(induced.column(k)):
            return tower.level(s + r - 1).homology(n).lift.column(k)
    return None


def composite_zero_on_H(tower: Tower, s: int, r: int, n: int) -> bool:  # noqa: N802
    """H_n(g^{r-1}: F_{s+r-1} -> F_s) = 0."""
    return nonzero_composite_cycle(tower, s, r, n) is None


def composite_null_from(tower: Tower, w: GradedComplex, s: int, r: int) -> bool:
    """
    Every map W -> F_{s+r-1} becomes null in F_s.

    Over a field [W, F] splits as a sum of Hom(H_n W, H_n F), so this holds iff
    H_n(g^{r-1}) vanishes in every degree where W has homology.
    """

    return all(composite_zero_on_H(tower, s, r, n) for n in w.betti_numbers())


# #### Filtered bases


class Generator(BaseModel):
    name: constr(min_length=1)  # type: ignore
    degree: int
    filtration: conint(ge=0)  # type: ignore


class FilteredComplex(BaseModel):
    """
    Generators with degree and filtration, plus the differential in their basis.

    differentials[n] is indexed by the degree-(n-1) and degree-n generators in list
    order. It may only raise (never lower) filtration, so F_s = span{filtration >= s}
    is a subcomplex.
    """

    p: int
    generators: List[Generator]
    differentials: Dict[int, FpMatrix] = {}
    length: Optional[conint(ge=0)] = None  # type: ignore

    _complex: Optional[GradedComplex] = PrivateAttr(default=None)

    @validator("p")
    @classmethod
    def validate_p(cls, p: int) -> int:
        return check_prime(p)

    @validator("generators")
    @classmethod
    def validate_generators(cls, generators: List[Generator]) -> List[Generator]:
        seen = set()
        for g in generators:
            if g.name in seen:
                raise ValueError(f"generator name {g.name!r} is not unique")
            seen.add(g.name)
        return generators

    @validator("differentials")
    @classmethod
    def validate_differentials(cls, differentials: Dict[int, FpMatrix], values: dict) -> Dict[int, FpMatrix]:
        generators = values.get("generators")
        if generators is None or "p" not in values:
            return differentials
        by_degree = generators_by_degree(generators)
        for n, d in differentials.items():
            sources, targets = by_degree.get(n, []), by_degree.get(n - 1, [])
            if d.shape != (len(targets), len(sources)):
                raise ValueError(f"d_{n} has shape {d.shape}, expected {(len(targets), len(sources))}")
            for col, src in enumerate(sources):
                for row, tgt in enumerate(targets):
                    if d.array[row, col] and tgt.filtration < src.filtration:
                        raise ValueError(
                            f"d({src.name}) has a {tgt.name} term of lower filtration "
                            f"({tgt.filtration} < {src.filtration})"
                        )
        GradedComplex(
            p=values["p"], dims={n: len(gens) for n, gens in by_degree.items()}, differentials=differentials
        )
        return differentials

    @validator("length")
    @classmethod
    def validate_length(cls, length: Optional[int], values: dict) -> Optional[int]:
        generators = values.get("generators") or []
        if length is not None and any(g.filtration > length for g in generators):
            raise ValueError(f"length {length} is below the highest generator filtration")
        return length

    def basis(self, n: int) -> List[Generator]:
        return generators_by_degree(self.generators).get(n, [])

    @property
    def top_filtration(self) -> int:
        if self.length is not None:
            return self.length
        return max((g.filtration for g in self.generators), default=0)

    def complex(self) -> GradedComplex:
        if self._complex is None:
            by_degree = generators_by_degree(self.generators)
            self._complex = GradedComplex(
                p=self.p, dims={n: len(gens) for n, gens in by_degree.items()}, differentials=self.differentials
            )
        return self._complex

    def selection(self, s: int) -> Dict[int, List[int]]:
        """Positions, per degree, of the generators spanning F_s."""
        by_degree = generators_by_degree(self.generators)
        return {n: [k for k, g in enumerate(gens) if g.filtration >= s] for n, gens in by_degree.items()}

    def tower(self, length: Optional[int] = None) -> Tower:
        """F_s = span of the generators of filtration >= s, for s = 0..length."""

        length = max(self.top_filtration, length or 0)
        whole = self.complex()
        selections = [self.selection(s) for s in range(length + 1)]
        levels = []
        for sel in selections:
            dims = {n: len(ks) for n, ks in sel.items()}
            differentials = {
                n: whole.d(n).submatrix(sel.get(n - 1, []), ks) for n, ks in sel.items() if sel.get(n - 1)
            }
            levels.append(GradedComplex(p=self.p, dims=dims, differentials=differentials))
        maps = []
        for s in range(length):
            components = {}
            for n, ks in selections[s + 1].items():
                position = {k: row for row, k in enumerate(selections[s][n])}
                inclusion = np.zeros((len(selections[s][n]), len(ks)), dtype=np.int64)
                for col, k in enumerate(ks):
                    inclusion[position[k], col] = 1
                components[n] = FpMatrix(self.p, inclusion)
            maps.append(ComplexMap(source=levels[s + 1], target=levels[s], components=components))
        return Tower(levels=levels, maps=maps)

    @classmethod
    def from_tower(cls, tower: Tower) -> "FilteredComplex":
        """
        An adapted basis of F_0: generators x<n>_<i> such that, for each s, the image of
        F_s in F_0 is spanned by the generators of filtration >= s.
        """

        p, top = tower.p, tower.levels[0]
        generators: List[Generator] = []
        bases: Dict[int, FpMatrix] = {}
        for n in top.degrees:
            columns: List[FpMatrix] = []
            filtrations: List[int] = []
            above = Subspace.zero(p, top.dim(n))
            for s in range(tower.S, -1, -1):
                here = image(tower.composite(0, s + 1).component(n))
                lift = subquotient(here, above).lift
                columns.insert(0, lift)
                filtrations[:0] = [s] * lift.cols
                above = here
            bases[n] = FpMatrix.hstack(p, top.dim(n), columns)
            generators.extend(
                Generator(name=f"x{n}_{i}", degree=n, filtration=f) for i, f in enumerate(filtrations)
            )
        differentials = {}
        for n in top.degrees:
            if n - 1 in bases:
                differentials[n] = inverse(bases[n - 1]) @ top.d(n) @ bases[n]
        return cls(p=p, generators=generators, differentials=differentials, length=tower.S)


class FilteredMap(BaseModel):
    """A filtration-preserving chain map between FilteredComplexes, in generator bases."""

    source: FilteredComplex
    target: FilteredComplex
    components: Dict[int, FpMatrix] = {}

    @validator("components")
    @classmethod
    def validate_components(cls, components: Dict[int, FpMatrix], values: dict) -> Dict[int, FpMatrix]:
        source, target = values.get("source"), values.get("target")
        if source is None or target is None:
            return components
        ComplexMap(source=source.complex(), target=target.complex(), components=components)
        for n, f in components.items():
            for col, src in enumerate(source.basis(n)):
                for row, tgt in enumerate(target.basis(n)):
                    if f.array[row, col] and tgt.filtration < src.filtration:
                        raise ValueError(f"{src.name} maps to {tgt.name} of lower filtration")
        return components

    def tower_map(self, length: Optional[int] = None) -> TowerMap:
        length = max(self.source.top_filtration, self.target.top_filtration, length or 0)
        x, y = self.source.tower(length), self.target.tower(length)
        whole = ComplexMap(source=self.source.complex(), target=self.target.complex(), components=self.components)
        source_sel = [self.source.selection(s) for s in range(length + 1)]
        target_sel = [self.target.selection(s) for s in range(length + 1)]
        components = []
        for s in range(length + 1):
            parts = {
                n: whole.component(n).submatrix(target_sel[s].get(n, []), ks) for n, ks in source_sel[s].items()
            }
            components.append(ComplexMap(source=x.level(s), target=y.level(s), components=parts))
        return TowerMap(source=x, target=y, components=components)


def generators_by_degree(generators: Sequence[Generator]) -> Dict[int, List[Generator]]:
    by_degree: Dict[int, List[Generator]] = {}
    for g in generators:
        by_degree.setdefault(g.degree, []).append(g)
    return dict(sorted(by_degree.items()))


# #### Random generation


class GeneratorParams(BaseModel):
    """Bounds for random towers; the defaults match Settings."""

    p: int = 2
    max_levels: conint(ge=1, le=6) = 4  # type: ignore
    max_generators: conint(ge=1, le=40) = 12  # type: ignore
    degree_window: Tuple[int, int] = (-2, 4)

    @validator("p")
    @classmethod
    def validate_p(cls, p: int) -> int:
        return check_prime(p)

    @validator("degree_window")
    @classmethod
    def validate_degree_window(cls, window: Tuple[int, int]) -> Tuple[int, int]:
        if window[0] > window[1]:
            raise ValueError(f"degree window {window} is empty")
        return window

    @classmethod
    def from_settings(cls, settings, **overrides) -> "GeneratorParams":
        values = dict(
            p=settings.prime,
            max_levels=settings.max_levels,
            max_generators=settings.max_generators,
            degree_window=settings.degree_window,
        )
        values.update(overrides)
        return cls(**values)


def random_filtered_complex(
    seed: Seed, params: Optional[GeneratorParams] = None, levels: Optional[int] = None
) -> FilteredComplex:
    """
    A direct sum of spheres and disks with random degrees and filtrations, conjugated
    by a random filtration-preserving change of basis in each degree.
    """

    params = params or GeneratorParams()
    rng = np.random.default_rng(seed)
    p, (lo, hi) = params.p, params.degree_window
    if levels is None:
        top = params.max_levels - 1
        length = int(rng.integers(max(0, top - 1), top + 1))
    else:
        length = levels - 1

    remaining = int(rng.integers(1, params.max_generators + 1))
    cells: List[Tuple[int, int]] = []  # (degree, filtration)
    pairs: List[Tuple[int, int]] = []  # (top cell, bottom cell) of each disk
    while remaining > 0:
        if remaining >= 2 and hi > lo and rng.random() < 0.5:
            n = int(rng.integers(lo + 1, hi + 1))
            upper = int(rng.integers(0, length + 1))
            lower = int(rng.integers(upper, length + 1))
            pairs.append((len(cells), len(cells) + 1))
            cells.extend([(n, upper), (n - 1, lower)])
            remaining -= 2
        else:
            cells.append((int(rng.integers(lo, hi + 1)), int(rng.integers(0, length + 1))))
            remaining -= 1

    order = sorted(range(len(cells)), key=lambda k: (cells[k][0], cells[k][1], k))
    position: Dict[int, int] = {}
    by_degree: Dict[int, List[int]] = {}
    for k in order:
        n = cells[k][0]
        position[k] = len(by_degree.setdefault(n, []))
        by_degree[n].append(k)

    raw = {n: np.zeros((len(by_degree.get(n - 1, [])), len(ks)), dtype=np.int64) for n, ks in by_degree.items()}
    for upper, lower in pairs:
        raw[cells[upper][0]][position[lower], position[upper]] = int(rng.integers(1, p))

    # Lower triangular in (filtration, index) order, so it preserves filtration.
    change = {}
    for n, ks in by_degree.items():
        m = np.tril(rng.integers(0, p, size=(len(ks), len(ks))), -1)
        m[np.diag_indices(len(ks))] = rng.integers(1, p, size=len(ks))
        change[n] = FpMatrix(p, m)
    differentials = {}
    for n, d in raw.items():
        if n - 1 in change:
            differentials[n] = change[n - 1] @ FpMatrix(p, d) @ inverse(change[n])

    generators = [
        Generator(name=f"x{n}_{i}", degree=n, filtration=cells[k][1])
        for n, ks in sorted(by_degree.items())
        for i, k in enumerate(ks)
    ]
    logger.debug("random filtered complex: %d generators, %d disks, length %d", len(cells), len(pairs), length)
    return FilteredComplex(p=p, generators=generators, differentials=differentials, length=length)


def random_tower(seed: Seed, params: Optional[GeneratorParams] = None) -> Tower:
    """Deterministic in (seed, params)."""
    return random_filtered_complex(seed, params).tower()


def random_complex(
    seed: Seed, p: int = 2, max_generators: int = 4, degree_window: Tuple[int, int] = (0, 2)
) -> GradedComplex:
    params = GeneratorParams(p=p, max_levels=1, max_generators=max_generators, degree_window=degree_window)
    return random_filtered_complex(seed, params, levels=1).complex()


def random_filtered_map(seed: Seed, source: FilteredComplex, target: FilteredComplex) -> FilteredMap:
    """
    A uniformly random filtration-preserving chain map.

    The chain-map condition is the degree-0 differential of Hom(source, target); its
    kernel, restricted to filtration-preserving entries, is sampled with random
    coefficients.
    """

    rng = np.random.default_rng(seed)
    p = check_prime(source.p)
    x, y = source.complex(), target.complex()
    blocks = hom_blocks(x, y, 0)
    allowed: List[int] = []
    offset = 0
    for n, size in blocks:
        sources, targets = source.basis(n), target.basis(n)
        for row, tgt in enumerate(targets):
            for col, src in enumerate(sources):
                if tgt.filtration >= src.filtration:
                    allowed.append(offset + row * len(sources) + col)
        offset += size

    vector = np.zeros(offset, dtype=np.int64)
    if allowed:
        constraint = hom_complex(x, y).d(0)
        solutions = kernel(constraint.submatrix(range(constraint.rows), allowed))
        if solutions.dim:
            coefficients = rng.integers(0, p, size=solutions.dim)
            vector[allowed] = (solutions.basis.array @ coefficients) % p

    components = {}
    offset = 0
    for n, size in blocks:
        shape = (y.dim(n), x.dim(n))
        components[n] = FpMatrix(p, vector[offset : offset + size].reshape(shape))
        offset += size
    return FilteredMap(source=source, target=target, components=components)


def random_tower_map(seed: Seed, params: Optional[GeneratorParams] = None) -> TowerMap:
    """
    A random filtration-preserving chain map between two random towers.

    Most draws are ghosts, so source, target and map are redrawn up to NON_GHOST_ATTEMPTS times
    until the map on F_0 is nonzero on homology. The last draw is returned if none is.
    """

    rng = np.random.default_rng(seed)
    for _ in range(NON_GHOST_ATTEMPTS):
        source = random_filtered_complex(rng, params)
        target = random_filtered_complex(rng, params)
        f = random_filtered_map(rng, source, target).tower_map()
        if not is_ghost(f.component(0)):
            break
    else:
        logger.debug("random_tower_map: ghost after %d attempts", NON_GHOST_ATTEMPTS)
    return f
