"""
Bounded chain complexes of finite-dimensional F_p vector spaces.

These are the desk-scale stand-ins for spectra: homology plays the part of homotopy
groups, the tensor product the smash product, the mapping cone the cofiber and the
degreewise linear dual with negated grading the Spanier-Whitehead dual.

Differentials lower degree by one: d_n: C_n -> C_{n-1} is a dim(n-1) x dim(n) matrix.
Degrees not mentioned have dimension zero.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import PrivateAttr, conint, validator

from .config import CONNECTIVITY_OFFSETS, DEFAULT_CONNECTIVITY_CONVENTION, ConnectivityConvention
from .errors import PrimeMismatchError, ShapeMismatchError, UndefinedConnectivityError
from .flinalg import FpMatrix, Subquotient, Subspace, check_prime, image, induced_map, kernel, rank, subquotient
from .model.util import BaseModel

logger = logging.getLogger(__name__)


class GradedComplex(BaseModel):
    p: int
    dims: Dict[int, conint(ge=0)]  # type: ignore
    differentials: Dict[int, FpMatrix] = {}

    _homology: Dict[int, Subquotient] = PrivateAttr(default_factory=dict)

    @validator("p")
    @classmethod
    def validate_p(cls, p: int) -> int:
        return check_prime(p)

    @validator("dims")
    @classmethod
    def validate_dims(cls, dims: Dict[int, int]) -> Dict[int, int]:
        return {n: d for n, d in sorted(dims.items()) if d}

    @validator("differentials")
    @classmethod
    def validate_differentials(cls, differentials: Dict[int, FpMatrix], values: dict) -> Dict[int, FpMatrix]:
        if "p" not in values or "dims" not in values:
            return differentials
        p, dims = values["p"], values["dims"]
        kept = {}
        for n, d in sorted(differentials.items()):
            if d.p != p:
                raise ValueError(f"d_{n} is over F_{d.p} but the complex is over F_{p}")
            expected = (dims.get(n - 1, 0), dims.get(n, 0))
            if d.shape != expected:
                raise ValueError(f"d_{n} has shape {d.shape}, expected {expected}")
            if not d.is_zero():
                kept[n] = d
        for n, d in kept.items():
            if n - 1 in kept and not (kept[n - 1] @ d).is_zero():
                raise ValueError(f"d_{n - 1} o d_{n} is not zero")
        return kept

    @classmethod
    def create(
        cls, p: int, dims: Dict[int, int], differentials: Optional[Dict[int, Sequence[Sequence[int]]]] = None
    ) -> "GradedComplex":
        """Build a complex from plain nested lists: differentials[n] has dims[n-1] rows."""

        mats = {n: FpMatrix.from_rows(p, rows, dims.get(n, 0)) for n, rows in (differentials or {}).items()}
        return cls(p=p, dims=dims, differentials=mats)

    # #### Shape

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int) -> FpMatrix:
        d = self.differentials.get(n)
        if d is None:
            return FpMatrix.zeros(self.p, self.dim(n - 1), self.dim(n))
        return d

    @property
    def degrees(self) -> List[int]:
        return list(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    # #### Homology

    def homology(self, n: int) -> Subquotient:
        """ker d_n / im d_{n+1}; the presentation's lift columns are representative cycles."""

        if n not in self._homology:
            cycles = kernel(self.d(n))
            boundaries = image(self.d(n + 1))
            self._homology[n] = subquotient(cycles, boundaries)
        return self._homology[n]

    def betti(self, n: int) -> int:
        if not self.dim(n):
            return 0
        return self.homology(n).dim

    def betti_numbers(self) -> Dict[int, int]:
        """Nonzero homology dimensions by degree."""
        return {n: self.betti(n) for n in self.degrees if self.betti(n)}

    def is_acyclic(self) -> bool:
        return not self.betti_numbers()

    def __repr__(self) -> str:
        return f"GradedComplex(p={self.p}, dims={self.dims})"


class ComplexMap(BaseModel):
    """A chain map; components[n]: source_n -> target_n, missing components are zero."""

    source: GradedComplex
    target: GradedComplex
    components: Dict[int, FpMatrix] = {}

    @validator("target")
    @classmethod
    def validate_target(cls, target: GradedComplex, values: dict) -> GradedComplex:
        source = values.get("source")
        if source is not None and source.p != target.p:
            raise PrimeMismatchError(f"map from a complex over F_{source.p} to one over F_{target.p}")
        return target

    @validator("components")
    @classmethod
    def validate_components(cls, components: Dict[int, FpMatrix], values: dict) -> Dict[int, FpMatrix]:
        source, target = values.get("source"), values.get("target")
        if source is None or target is None:
            return components
        kept = {}
        for n, f in sorted(components.items()):
            expected = (target.dim(n), source.dim(n))
            if f.p != source.p or f.shape != expected:
                raise ValueError(f"component f_{n} has shape {f.shape} over F_{f.p}, expected {expected}")
            if not f.is_zero():
                kept[n] = f
        for n in source.degrees:
            lhs = target.d(n) @ cls._component(kept, source, target, n)
            rhs = cls._component(kept, source, target, n - 1) @ source.d(n)
            if lhs != rhs:
                raise ValueError(f"not a chain map in degree {n}: d' o f_{n} != f_{n - 1} o d")
        return kept

    @staticmethod
    def _component(components: dict, source: GradedComplex, target: GradedComplex, n: int) -> FpMatrix:
        f = components.get(n)
        return f if f is not None else FpMatrix.zeros(source.p, target.dim(n), source.dim(n))

    @property
    def p(self) -> int:
        return self.source.p

    def component(self, n: int) -> FpMatrix:
        return self._component(self.components, self.source, self.target, n)

    def is_degreewise_injective(self) -> bool:
        return all(rank(self.component(n)) == self.source.dim(n) for n in self.source.degrees)

    def __repr__(self) -> str:
        return f"ComplexMap({self.source!r} -> {self.target!r})"


class Cofiber(BaseModel):
    """cone(f) with its canonical maps target -> cone(f) -> shift(source, 1)."""

    complex: GradedComplex
    inclusion: ComplexMap
    projection: ComplexMap


class DirectSum(BaseModel):
    complex: GradedComplex
    inclusions: Tuple[ComplexMap, ComplexMap]
    projections: Tuple[ComplexMap, ComplexMap]


# #### Elementary complexes


def zero_complex(p: int = 2) -> GradedComplex:
    return GradedComplex(p=p, dims={})


def sphere(n: int, p: int = 2) -> GradedComplex:
    """One generator in degree n."""
    return GradedComplex(p=p, dims={n: 1})


def disk(n: int, p: int = 2) -> GradedComplex:
    """Generators in degrees n and n-1 with d an isomorphism; acyclic."""
    return GradedComplex(p=p, dims={n: 1, n - 1: 1}, differentials={n: FpMatrix.identity(p, 1)})


def shift(c: GradedComplex, k: int) -> GradedComplex:
    """shift(C, k)_n = C_{n-k} with differential (-1)^k d."""

    sign = -1 if k % 2 else 1
    return GradedComplex(
        p=c.p,
        dims={n + k: dim for n, dim in c.dims.items()},
        differentials={n + k: d.scale(sign) for n, d in c.differentials.items()},
    )


def shift_map(f: ComplexMap, k: int) -> ComplexMap:
    return ComplexMap(
        source=shift(f.source, k),
        target=shift(f.target, k),
        components={n + k: m for n, m in f.components.items()},
    )


def identity_map(c: GradedComplex) -> ComplexMap:
    return ComplexMap(source=c, target=c, components={n: FpMatrix.identity(c.p, dim) for n, dim in c.dims.items()})


def zero_map(source: GradedComplex, target: GradedComplex) -> ComplexMap:
    return ComplexMap(source=source, target=target)


def compose(f: ComplexMap, g: ComplexMap) -> ComplexMap:
    """f after g."""

    if g.target.dims != f.source.dims:
        raise ShapeMismatchError("cannot compose: target of the first map is not the source of the second")
    return ComplexMap(
        source=g.source,
        target=f.target,
        components={n: f.component(n) @ g.component(n) for n in g.source.degrees},
    )


def direct_sum(c: GradedComplex, w: GradedComplex) -> DirectSum:
    p = _common_prime(c, w)
    total = GradedComplex(
        p=p,
        dims={n: c.dim(n) + w.dim(n) for n in set(c.dims) | set(w.dims)},
        differentials={
            n: _block_diag(p, c.d(n), w.d(n)) for n in set(c.differentials) | set(w.differentials)
        },
    )
    inclusions = []
    projections = []
    for part, first in ((c, True), (w, False)):
        parts = {}
        for n in part.degrees:
            eye = FpMatrix.identity(p, part.dim(n))
            other = FpMatrix.zeros(p, (w if first else c).dim(n), part.dim(n))
            blocks = [eye, other] if first else [other, eye]
            parts[n] = FpMatrix.vstack(p, part.dim(n), blocks)
        inclusions.append(ComplexMap(source=part, target=total, components=parts))
        projections.append(ComplexMap(source=total, target=part, components={n: m.T for n, m in parts.items()}))
    return DirectSum(complex=total, inclusions=tuple(inclusions), projections=tuple(projections))


def direct_sum_maps(
    f: ComplexMap, g: ComplexMap, source: Optional[GradedComplex] = None, target: Optional[GradedComplex] = None
) -> ComplexMap:
    """f ⊕ g between the direct sums of sources and targets (pass them in to reuse existing complexes)."""

    source = source if source is not None else direct_sum(f.source, g.source).complex
    target = target if target is not None else direct_sum(f.target, g.target).complex
    p = _common_prime(source, target)
    return ComplexMap(
        source=source,
        target=target,
        components={n: _block_diag(p, f.component(n), g.component(n)) for n in source.degrees},
    )


def same_complex(a: GradedComplex, b: GradedComplex) -> bool:
    """Equal as complexes: same prime, dimensions and differentials."""
    return a is b or (a.p == b.p and a.dims == b.dims and a.differentials == b.differentials)


def _block_diag(p: int, a: FpMatrix, b: FpMatrix) -> FpMatrix:
    return FpMatrix.block(p, [a.rows, b.rows], [a.cols, b.cols], {(0, 0): a, (1, 1): b})


def _common_prime(*complexes: GradedComplex) -> int:
    primes = {c.p for c in complexes}
    if len(primes) != 1:
        raise PrimeMismatchError(f"complexes over different primes: {sorted(primes)}")
    return primes.pop()


# #### Homology


def homology(c: GradedComplex, n: int) -> Subquotient:
    return c.homology(n)


def induced_on_homology(f: ComplexMap, n: int) -> FpMatrix:
    """Matrix of H_n(f) in the bases chosen by homology()."""
    return induced_map(f.component(n), f.source.homology(n), f.target.homology(n))


def is_ghost(f: ComplexMap) -> bool:
    """True iff f induces zero on homology in every degree."""

    for n in f.source.degrees:
        if f.source.betti(n) and f.target.betti(n) and not induced_on_homology(f, n).is_zero():
            return False
    return True


def connectivity(w: GradedComplex, convention: ConnectivityConvention = DEFAULT_CONNECTIVITY_CONVENTION) -> int:
    betti = w.betti_numbers()
    if not betti:
        raise UndefinedConnectivityError(f"connectivity of an acyclic complex {w!r} is undefined")
    return min(betti) + CONNECTIVITY_OFFSETS[convention]


# #### Cones


def cone(f: ComplexMap) -> Cofiber:
    """
    cone(f)_n = target_n ⊕ source_{n-1} with d = [[d', f], [0, -d]].

    The inclusion of the target is [I; 0]; the projection [0 I] lands in shift(source, 1).
    """

    p, source, target = f.p, f.source, f.target
    degrees = set(target.degrees) | {n + 1 for n in source.degrees}
    dims = {n: target.dim(n) + source.dim(n - 1) for n in degrees}
    differentials = {}
    for n in degrees:
        rows = [target.dim(n - 1), source.dim(n - 2)]
        cols = [target.dim(n), source.dim(n - 1)]
        differentials[n] = FpMatrix.block(
            p, rows, cols, {(0, 0): target.d(n), (0, 1): f.component(n - 1), (1, 1): -source.d(n - 1)}
        )
    complex = GradedComplex(p=p, dims=dims, differentials=differentials)

    inclusion = {}
    for n in target.degrees:
        top, bottom = target.dim(n), source.dim(n - 1)
        inclusion[n] = FpMatrix.vstack(p, top, [FpMatrix.identity(p, top), FpMatrix.zeros(p, bottom, top)])
    suspended = shift(source, 1)
    projection = {}
    for n in suspended.degrees:
        top, bottom = target.dim(n), source.dim(n - 1)
        projection[n] = FpMatrix.hstack(p, bottom, [FpMatrix.zeros(p, bottom, top), FpMatrix.identity(p, bottom)])
    return Cofiber(
        complex=complex,
        inclusion=ComplexMap(source=target, target=complex, components=inclusion),
        projection=ComplexMap(source=complex, target=suspended, components=projection),
    )


# #### Tensor products


def _tensor_blocks(c: GradedComplex, w: GradedComplex, n: int) -> List[Tuple[int, int, int]]:
    """(i, j, size) for the summands C_i ⊗ W_j of degree n, ordered by i."""
    return [(i, n - i, c.dim(i) * w.dim(n - i)) for i in c.degrees if w.dim(n - i)]


def tensor(c: GradedComplex, w: GradedComplex) -> GradedComplex:
    """
    (C⊗W)_n = ⊕_{i+j=n} C_i ⊗ W_j with d(a⊗b) = da⊗b + (-1)^i a⊗db.

    The basis of C_i ⊗ W_j is the Kronecker one (index a * dim W_j + b).
    """

    p = _common_prime(c, w)
    degrees = sorted({i + j for i in c.degrees for j in w.degrees})
    dims = {n: sum(size for _, _, size in _tensor_blocks(c, w, n)) for n in degrees}
    differentials = {}
    for n in degrees:
        sources = _tensor_blocks(c, w, n)
        targets = _tensor_blocks(c, w, n - 1)
        if not targets:
            continue
        index = {(i, j): k for k, (i, j, _) in enumerate(targets)}
        blocks = {}
        for col, (i, j, _) in enumerate(sources):
            if (i - 1, j) in index:
                blocks[(index[(i - 1, j)], col)] = c.d(i).kron(FpMatrix.identity(p, w.dim(j)))
            if (i, j - 1) in index:
                sign = -1 if i % 2 else 1
                blocks[(index[(i, j - 1)], col)] = FpMatrix.identity(p, c.dim(i)).kron(w.d(j)).scale(sign)
        differentials[n] = FpMatrix.block(p, [s for *_, s in targets], [s for *_, s in sources], blocks)
    return GradedComplex(p=p, dims=dims, differentials=differentials)


def tensor_maps(
    f: ComplexMap, g: ComplexMap, source: Optional[GradedComplex] = None, target: Optional[GradedComplex] = None
) -> ComplexMap:
    """f ⊗ g, with components kron(f_i, g_j) on the summands."""

    p = _common_prime(f.source, g.source)
    source = source if source is not None else tensor(f.source, g.source)
    target = target if target is not None else tensor(f.target, g.target)
    components = {}
    for n in source.degrees:
        sources = _tensor_blocks(f.source, g.source, n)
        targets = _tensor_blocks(f.target, g.target, n)
        index = {(i, j): k for k, (i, j, _) in enumerate(targets)}
        blocks = {}
        for col, (i, j, _) in enumerate(sources):
            if (i, j) in index:
                blocks[(index[(i, j)], col)] = f.component(i).kron(g.component(j))
        components[n] = FpMatrix.block(p, [s for *_, s in targets], [s for *_, s in sources], blocks)
    return ComplexMap(source=source, target=target, components=components)


# #### Duality


def dual(w: GradedComplex) -> GradedComplex:
    """dual(W)_n = (W_{-n})^*, differential (-1)^n times the transpose of d_{1-n}."""

    differentials = {}
    for m, d in w.differentials.items():
        # d_m: W_m -> W_{m-1} dualizes to (W_{m-1})^* -> (W_m)^*, i.e. degree 1-m -> -m.
        n = 1 - m
        differentials[n] = d.T.scale(-1 if n % 2 else 1)
    return GradedComplex(p=w.p, dims={-n: dim for n, dim in w.dims.items()}, differentials=differentials)


# #### Maps up to homotopy


def hom_blocks(w: GradedComplex, y: GradedComplex, k: int) -> List[Tuple[int, int]]:
    """(n, size) for the summands Hom(W_n, Y_{n+k}) of Hom_k, each vectorized row-major."""
    return [(n, y.dim(n + k) * w.dim(n)) for n in w.degrees if y.dim(n + k)]


def hom_complex(w: GradedComplex, y: GradedComplex) -> GradedComplex:
    """
    Hom(W, Y)_k = ⊕_n Hom(W_n, Y_{n+k}) with D(φ) = d φ - (-1)^k φ d.

    Degree-0 cycles are chain maps, degree-0 boundaries are null-homotopic maps.
    """

    p = _common_prime(w, y)
    degrees = sorted({j - n for n in w.degrees for j in y.degrees})
    dims = {k: sum(size for _, size in hom_blocks(w, y, k)) for k in degrees}
    differentials = {}
    for k in degrees:
        sources = hom_blocks(w, y, k)
        targets = hom_blocks(w, y, k - 1)
        if not targets:
            continue
        index = {n: idx for idx, (n, _) in enumerate(targets)}
        sign = 1 if k % 2 else -1
        blocks: Dict[Tuple[int, int], FpMatrix] = {}
        for col, (n, _) in enumerate(sources):
            # d_Y φ_n lands in the degree-n summand.
            if n in index:
                _add_block(blocks, (index[n], col), y.d(n + k).kron(FpMatrix.identity(p, w.dim(n))))
            # φ_n d_W lands in the degree-(n+1) summand.
            if n + 1 in index:
                term = FpMatrix.identity(p, y.dim(n + k)).kron(w.d(n + 1).T).scale(sign)
                _add_block(blocks, (index[n + 1], col), term)
        differentials[k] = FpMatrix.block(p, [s for _, s in targets], [s for _, s in sources], blocks)
    return GradedComplex(p=p, dims=dims, differentials=differentials)


def _add_block(blocks: Dict[Tuple[int, int], FpMatrix], key: Tuple[int, int], m: FpMatrix) -> None:
    blocks[key] = blocks[key] + m if key in blocks else m


def hom_vector(f: ComplexMap) -> Tuple[int, ...]:
    """f as a degree-0 element of hom_complex(f.source, f.target)."""

    entries: List[int] = []
    for n, _ in hom_blocks(f.source, f.target, 0):
        entries.extend(f.component(n).entries)
    return tuple(entries)


def homotopy_classes(w: GradedComplex, y: GradedComplex) -> Dict[int, int]:
    """dim [W, Y]_k (maps raising degree by k, modulo homotopy) for every k where it is nonzero."""

    hom = hom_complex(w, y)
    return hom.betti_numbers()


def is_null_homotopic(f: ComplexMap) -> bool:
    hom = hom_complex(f.source, f.target)
    return image(hom.d(1)).contains(hom_vector(f))


def postcomposition_is_null(w: GradedComplex, f: ComplexMap) -> bool:
    """
    True iff f o φ is null-homotopic for every chain map φ: W -> source(f).

    Postcomposition with f maps the degree-0 cycles of Hom(W, source) into Hom(W, target);
    the answer is whether their images are all boundaries.
    """

    p = _common_prime(w, f.source)
    source_hom = hom_complex(w, f.source)
    target_hom = hom_complex(w, f.target)
    cycles = kernel(source_hom.d(0))
    if not cycles.dim:
        return True

    sources = hom_blocks(w, f.source, 0)
    targets = hom_blocks(w, f.target, 0)
    index = {n: idx for idx, (n, _) in enumerate(targets)}
    blocks = {}
    for col, (n, _) in enumerate(sources):
        if n in index:
            blocks[(index[n], col)] = f.component(n).kron(FpMatrix.identity(p, w.dim(n)))
    post = FpMatrix.block(p, [s for _, s in targets], [s for _, s in sources], blocks)
    composites = Subspace.span(p, target_hom.dim(0), (post @ cycles.basis).columns())
    return image(target_hom.d(1)).contains_subspace(composites)

