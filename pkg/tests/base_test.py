import io
from pathlib import Path
from typing import List, Tuple

import pytest

# We are testing the public interface so we will import from
# the package modules rather than reach into private helpers.
from vlines.cli import run
from vlines.config import Settings
from vlines.flinalg import FpMatrix
from vlines.towers import FilteredComplex, Generator, GeneratorParams, Tower, sphere_tower

# Small corpora keep the suite fast; the fuzz command runs the large ones.
SMALL = GeneratorParams(max_levels=3, max_generators=6, degree_window=(-1, 2))


def t1_filtered() -> FilteredComplex:
    """a (degree 1, filtration 0), b (degree 0, filtration 1), d(a) = b."""

    return FilteredComplex(
        p=2,
        generators=[Generator(name="a", degree=1, filtration=0), Generator(name="b", degree=0, filtration=1)],
        differentials={1: FpMatrix.from_rows(2, [[1]])},
    )


class BaseTest:

    # Fixtures for the two towers every module is tested against.

    @pytest.fixture
    def t1(self) -> Tower:
        return t1_filtered().tower()

    @pytest.fixture
    def sphere(self) -> Tower:
        return sphere_tower(0)

    @pytest.fixture
    def settings(self) -> Settings:
        return Settings(family_random_count=1)

    @pytest.fixture
    def t1_path(self, resource_path_root) -> Path:
        """Returns a fully qualified PosixPath to the t1.json document"""
        return resource_path_root / "t1.json"

    @pytest.fixture
    def golden(self, resource_path_root):
        """Returns a function reading an expected output from testresources/golden."""

        def read(name: str) -> str:
            return (resource_path_root / "golden" / name).read_text()

        return read

    @pytest.fixture
    def cli(self, settings):
        """Returns a function running the command line and capturing (status, stdout, stderr)."""

        def invoke(*argv) -> Tuple[int, str, str]:
            stdout, stderr = io.StringIO(), io.StringIO()
            status = run([str(a) for a in argv], stdout=stdout, stderr=stderr, settings=settings)
            return status, stdout.getvalue(), stderr.getvalue()

        return invoke

    # Utility methods

    @staticmethod
    def dims(tower: Tower, r: int) -> dict:
        from vlines.couples import page

        return page(tower, r).module.dims

    @staticmethod
    def seeds(count: int, start: int = 0) -> List[int]:
        return list(range(start, start + count))

    @staticmethod
    def homology_rank(f, n: int) -> int:
        from vlines.complexes import induced_on_homology
        from vlines.flinalg import rank

        if not f.source.betti(n) or not f.target.betti(n):
            return 0
        return rank(induced_on_homology(f, n))

    @classmethod
    def assert_cofiber_sequence(cls, f, cofiber) -> None:
        """Checks exactness of H(X) -> H(Y) -> H(C) -> H(shift(X, 1)) -> H(shift(Y, 1)) at every degree."""
        from vlines.complexes import compose, is_ghost, shift_map

        suspended = shift_map(f, 1)
        assert is_ghost(compose(cofiber.inclusion, f))
        assert is_ghost(compose(cofiber.projection, cofiber.inclusion))
        assert is_ghost(compose(suspended, cofiber.projection))

        degrees = set(f.source.degrees) | set(f.target.degrees) | set(cofiber.complex.degrees)
        if not degrees:
            return
        for n in range(min(degrees) - 1, max(degrees) + 2):
            f_rank = cls.homology_rank(f, n)
            i_rank = cls.homology_rank(cofiber.inclusion, n)
            p_rank = cls.homology_rank(cofiber.projection, n)
            assert f.target.betti(n) - i_rank == f_rank, f"not exact at H_{n}(Y)"
            assert cofiber.complex.betti(n) - p_rank == i_rank, f"not exact at H_{n}(C)"
            assert f.source.betti(n - 1) - cls.homology_rank(suspended, n) == p_rank, f"not exact at H_{n - 1}(X)"

    @staticmethod
    def null_homotopic_map(x, y, rng):
        """d o h + h o d for a random degree-raising h: X -> Y."""
        from vlines.complexes import ComplexMap

        chosen = {n: FpMatrix(x.p, rng.integers(0, x.p, size=(y.dim(n + 1), x.dim(n)))) for n in x.degrees}

        def h(n: int) -> FpMatrix:
            return chosen[n] if n in chosen else FpMatrix.zeros(x.p, y.dim(n + 1), x.dim(n))

        components = {n: y.d(n + 1) @ h(n) + h(n - 1) @ x.d(n) for n in x.degrees if y.dim(n)}
        return ComplexMap(source=x, target=y, components=components)

    @staticmethod
    def add_maps(f, g):
        from vlines.complexes import ComplexMap

        components = {n: f.component(n) + g.component(n) for n in f.source.degrees if f.target.dim(n)}
        return ComplexMap(source=f.source, target=f.target, components=components)
