"""
JSON documents for towers, finite complexes and tower maps.

A tower document lists generators (name, degree, filtration) and the differential as
`{"from": name, "to": [[name, coefficient], ...]}` entries. F_s is the span of the
generators of filtration >= s. A map document names its source and target tower
documents by relative path or JSON reference and lists its entries the same way.
"""

import json
import logging
from pathlib import Path
from typing import ClassVar, Dict, List, NewType, Optional, Tuple, Union

import jsonref  # type: ignore
import numpy as np
from pydantic import Field, StrictInt, conint, constr, validator

from ..complexes import GradedComplex
from ..errors import DocumentError
from ..flinalg import FpMatrix, check_prime
from ..towers import FilteredComplex, FilteredMap, Generator, Tower, TowerMap, generators_by_degree
from .supported_versions import CURRENT_VERSION
from .util import BaseModel, CommentableModelMixin, DocumentInput, Exporter
from .util import Loader as BaseLoader
from .util import SchemaVersion

logger = logging.getLogger(__name__)

GeneratorName = NewType("GeneratorName", str)

# #### Model classes


class GeneratorEntry(CommentableModelMixin, BaseModel):
    name: constr(min_length=1)  # type: ignore
    degree: int
    filtration: conint(ge=0)  # type: ignore


class Entry(CommentableModelMixin, BaseModel):
    """The image of one generator: a list of (generator, coefficient) terms."""

    source: GeneratorName = Field(alias="from")
    to: List[Tuple[GeneratorName, StrictInt]] = []

    class Config:
        allow_population_by_field_name = True


class TowerDocument(CommentableModelMixin, BaseModel):

    check_filtration: ClassVar[bool] = True

    p: int
    generators: List[GeneratorEntry] = []
    differential: List[Entry] = []

    # The tower's last level; levels above the top filtration are zero.
    length: Optional[conint(ge=0)] = None  # type: ignore

    @validator("p")
    @classmethod
    def validate_p(cls, p: int) -> int:
        return check_prime(p)

    @validator("generators")
    @classmethod
    def validate_generators(cls, generators: List[GeneratorEntry]) -> List[GeneratorEntry]:
        seen = set()
        for g in generators:
            if g.name in seen:
                raise ValueError(f"generator {g.name!r} is listed twice")
            seen.add(g.name)
        return generators

    @validator("differential")
    @classmethod
    def validate_differential(cls, differential: List[Entry], values: dict) -> List[Entry]:
        generators = values.get("generators")
        if generators is None:
            return differential
        _check_entries("d", differential, {g.name: g for g in generators}, {g.name: g for g in generators}, -1)
        if cls.check_filtration:
            by_name = {g.name: g for g in generators}
            for entry in differential:
                src = by_name[entry.source]
                for name, coefficient in entry.to:
                    if coefficient % values.get("p", 2) and by_name[name].filtration < src.filtration:
                        raise ValueError(
                            f"d({src.name}) has a {name} term of lower filtration "
                            f"({by_name[name].filtration} < {src.filtration})"
                        )
        return differential

    def _generators(self) -> List[Generator]:
        return [Generator(name=g.name, degree=g.degree, filtration=g.filtration) for g in self.generators]

    def filtered_complex(self) -> FilteredComplex:
        generators = self._generators()
        return FilteredComplex(
            p=self.p,
            generators=generators,
            differentials=_matrices(self.p, generators, generators, self.differential, -1),
            length=self.length,
        )

    def tower(self) -> Tower:
        return self.filtered_complex().tower()

    @classmethod
    def from_tower(cls, tower: Tower) -> "TowerDocument":
        """The tower in an adapted basis; generators are named x<degree>_<index>."""

        filtered = FilteredComplex.from_tower(tower)
        by_degree = generators_by_degree(filtered.generators)
        differential = []
        for n, sources in by_degree.items():
            targets = by_degree.get(n - 1, [])
            d = filtered.differentials.get(n)
            for col, src in enumerate(sources):
                terms = [] if d is None else [(targets[row].name, c) for row, c in enumerate(d.column(col)) if c]
                if terms:
                    differential.append({"from": src.name, "to": terms})
        return cls.parse_obj(
            {
                "p": tower.p,
                "generators": [g.dict() for g in filtered.generators],
                "differential": differential,
                "length": tower.S,
            }
        )


class ComplexGeneratorEntry(GeneratorEntry):
    filtration: conint(ge=0) = 0  # type: ignore


class ComplexDocument(TowerDocument):
    """A finite complex W: a tower document whose filtrations are ignored."""

    check_filtration: ClassVar[bool] = False

    generators: List[ComplexGeneratorEntry] = []  # type: ignore

    def _generators(self) -> List[Generator]:
        return [Generator(name=g.name, degree=g.degree, filtration=0) for g in self.generators]

    def complex(self) -> GradedComplex:
        return self.filtered_complex().complex()


class MapDocument(CommentableModelMixin, BaseModel):
    source: TowerDocument
    target: TowerDocument
    entries: List[Entry] = []

    @validator("entries")
    @classmethod
    def validate_entries(cls, entries: List[Entry], values: dict) -> List[Entry]:
        source, target = values.get("source"), values.get("target")
        if source is None or target is None:
            return entries
        _check_entries(
            "f", entries, {g.name: g for g in source.generators}, {g.name: g for g in target.generators}, 0
        )
        # Chain-map and filtration conditions are checked by FilteredMap.
        cls._filtered_map(source, target, entries)
        return entries

    @staticmethod
    def _filtered_map(source: TowerDocument, target: TowerDocument, entries: List[Entry]) -> FilteredMap:
        x, y = source.filtered_complex(), target.filtered_complex()
        return FilteredMap(
            source=x, target=y, components=_matrices(source.p, x.generators, y.generators, entries, 0)
        )

    def filtered_map(self) -> FilteredMap:
        return self._filtered_map(self.source, self.target, self.entries)

    def tower_map(self) -> TowerMap:
        return self.filtered_map().tower_map()


def _check_entries(
    symbol: str,
    entries: List[Entry],
    sources: Dict[str, GeneratorEntry],
    targets: Dict[str, GeneratorEntry],
    degree_shift: int,
) -> None:
    seen = set()
    for entry in entries:
        if entry.source not in sources:
            raise ValueError(f"{symbol}({entry.source}): unknown generator {entry.source!r}")
        if entry.source in seen:
            raise ValueError(f"{symbol}({entry.source}) is given twice")
        seen.add(entry.source)
        src = sources[entry.source]
        for name, _ in entry.to:
            if name not in targets:
                raise ValueError(f"{symbol}({src.name}): unknown generator {name!r}")
            expected = src.degree + degree_shift
            if targets[name].degree != expected:
                raise ValueError(
                    f"{symbol}({src.name}): {name} has degree {targets[name].degree}, expected {expected}"
                )


def _matrices(
    p: int, sources: List[Generator], targets: List[Generator], entries: List[Entry], degree_shift: int
) -> Dict[int, FpMatrix]:
    """Per source degree n, the matrix from the degree-n sources to the degree-(n + shift) targets."""

    source_by_degree, target_by_degree = generators_by_degree(sources), generators_by_degree(targets)
    row_of = {g.name: k for gens in target_by_degree.values() for k, g in enumerate(gens)}
    col_of = {g.name: k for gens in source_by_degree.values() for k, g in enumerate(gens)}
    degree_of = {g.name: g.degree for g in sources}

    arrays: Dict[int, np.ndarray] = {}
    for entry in entries:
        n = degree_of[entry.source]
        if n not in arrays:
            shape = (len(target_by_degree.get(n + degree_shift, [])), len(source_by_degree[n]))
            arrays[n] = np.zeros(shape, dtype=np.int64)
        for name, coefficient in entry.to:
            arrays[n][row_of[name], col_of[entry.source]] += coefficient
    return {n: FpMatrix(p, array) for n, array in sorted(arrays.items()) if np.any(array % p)}


# #### Custom Loaders


class Loader(BaseLoader):
    def __init__(self, *, model=TowerDocument, version: Union[SchemaVersion, str] = CURRENT_VERSION):
        super().__init__(model=model, version=version)


class MapLoader(Loader):
    """
    `source` and `target` are tower documents given as a relative path or a JSON
    reference `{"$ref": "tower.json"}`, resolved relative to the map document.
    """

    def __init__(self, *, version: Union[SchemaVersion, str] = CURRENT_VERSION):
        super().__init__(model=MapDocument, version=version)

    def make_compatible(self, *, data: dict, data_version: SchemaVersion, base_path: Optional[Path]) -> dict:
        data = super().make_compatible(data=data, data_version=data_version, base_path=base_path)
        for key in ("source", "target"):
            if isinstance(data.get(key), str):
                data[key] = {"$ref": data[key]}
        base = (base_path or Path.cwd()).resolve()
        try:
            resolved = jsonref.JsonRef.replace_refs(data, base_uri=base.as_uri() + "/")
            # Materialize the lazy references so that errors surface here.
            data = json.loads(json.dumps(resolved, default=lambda o: o.__subject__))
        except jsonref.JsonRefError as e:
            raise DocumentError(f"cannot resolve tower reference: {e}")
        for key in ("source", "target"):
            if isinstance(data.get(key), dict):
                data[key].pop("schema_version", None)
        return data


class TowerExporter(Exporter):
    def __init__(self, *, version: Union[SchemaVersion, str] = CURRENT_VERSION):
        super().__init__(model=TowerDocument, version=version)


def load_tower(input: DocumentInput) -> Tower:
    document = Loader().load(input=input)
    logger.debug("loaded tower document with %d generators", len(document.generators))
    return document.tower()


def load_complex(input: DocumentInput) -> GradedComplex:
    return Loader(model=ComplexDocument).load(input=input).complex()


def load_tower_map(input: DocumentInput) -> TowerMap:
    return MapLoader().load(input=input).tower_map()


def export_tower(tower: Tower) -> str:
    return TowerExporter().export(input=TowerDocument.from_tower(tower))
