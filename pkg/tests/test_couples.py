import pytest

from vlines.couples import (
    BigradedModule,
    ExactCouple,
    abutment_dimensions,
    couple_from_tower,
    couples,
    derive,
    e_infinity,
    oracle_page,
    page,
    page_dims_agree,
    pages,
    stable_index,
    verify_les,
)
from vlines.errors import InexactCoupleError
from vlines.towers import GeneratorParams, random_tower, zero_tower

from .base_test import BaseTest


class TestT1(BaseTest):
    def test_first_page(self, t1):
        e1 = page(t1, 1)
        assert e1.module.dims == {(0, 1): 1, (1, 1): 1}
        assert list(e1.differential) == [(0, 1)]
        assert e1.d(0, 1).shape == (1, 1)
        assert not e1.d(0, 1).is_zero()

    def test_second_page_vanishes(self, t1):
        assert page(t1, 2).module.is_zero()

    def test_d_modules(self, t1):
        d1, d2 = couples(t1, 2)
        assert d1.D.dims == {(1, 1): 1}
        assert d2.D.is_zero()

    def test_stable_pages_repeat(self, t1):
        assert stable_index(t1) == 2
        later = pages(t1, 5)
        assert len(later) == 5
        assert [p.r for p in later] == [1, 2, 3, 4, 5]
        assert all(p.module.is_zero() and not p.differential for p in later[1:])

    def test_convergence(self, t1):
        stable, report = e_infinity(t1)
        assert stable.is_zero()
        assert report.holds
        assert report.homology == {}

    def test_exactness(self, t1):
        for couple in couples(t1, 3):
            assert verify_les(couple).holds


class TestSphere(BaseTest):
    def test_pages(self, sphere):
        assert page(sphere, 1).module.dims == {(0, 0): 1}
        assert page(sphere, 4).module.dims == {(0, 0): 1}

    def test_abutment(self, sphere):
        assert abutment_dimensions(sphere).dims == {(0, 0): 1}
        assert e_infinity(sphere)[1].holds


class TestEdgeCases(BaseTest):
    def test_zero_tower(self):
        tower = zero_tower()
        assert page(tower, 1).module.is_zero()
        assert e_infinity(tower)[1].holds

    def test_page_index(self, t1):
        with pytest.raises(ValueError):
            pages(t1, 0)
        with pytest.raises(ValueError):
            oracle_page(t1, 0)

    def test_inexact_couple(self):
        couple = ExactCouple(
            r=1, p=2, floor=0, top=0, D=BigradedModule(p=2, dims={(0, 0): 1}), E=BigradedModule(p=2)
        )
        assert not verify_les(couple).holds
        with pytest.raises(InexactCoupleError):
            derive(couple)

    def test_floor(self, t1):
        with pytest.raises(ValueError):
            couple_from_tower(t1, floor=1)


class TestOracle(BaseTest):
    @pytest.mark.parametrize("p", [2, 3])
    def test_agreement(self, p):
        params = GeneratorParams(p=p)
        for seed in self.seeds(40):
            tower = random_tower(seed, params)
            assert page_dims_agree(tower, range(1, tower.S + 3)) == [], f"seed {seed}"

    @pytest.mark.slow
    @pytest.mark.parametrize("p", [2, 3])
    def test_agreement_large_corpus(self, p):
        params = GeneratorParams(p=p, max_levels=5, max_generators=16)
        for seed in self.seeds(200, start=1000):
            tower = random_tower(seed, params)
            assert page_dims_agree(tower, range(1, tower.S + 3)) == [], f"seed {seed}"

    def test_t1(self, t1):
        assert oracle_page(t1, 1).dims == {(0, 1): 1, (1, 1): 1}
        assert oracle_page(t1, 2).is_zero()


class TestRandomCouples(BaseTest):
    @pytest.mark.parametrize("seed", range(20))
    def test_exactness(self, seed):
        tower = random_tower(seed, GeneratorParams(p=3))
        for couple in couples(tower, tower.S + 1):
            report = verify_les(couple)
            assert report.holds, report.failures

    @pytest.mark.parametrize("seed", range(20))
    def test_convergence(self, seed):
        _, report = e_infinity(random_tower(seed))
        assert report.holds, report.mismatches
