from fractions import Fraction

import pytest
import hypothesis
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from vlines.complexes import disk, sphere
from vlines.errors import NotARetractError
from vlines.lines import (
    CORPUS_SLOPES,
    Flavor,
    InterceptVariant,
    LemmaCase,
    LineSpec,
    VerificationReport,
    WFamily,
    check_cond1,
    check_cond2,
    check_cond3,
    check_cond4,
    default_family,
    lemma_shift,
    min_family_intercept,
    min_intercept,
    run_corpus,
    verify_generic_cofiber,
    verify_generic_retract,
    verify_ghost_corollary,
    verify_lemma,
)
from vlines.towers import GeneratorParams, direct_sum_towers, identity_tower_map, random_tower, random_tower_map

from .base_test import SMALL, BaseTest

SLOPES = [Fraction(0), Fraction(1, 2), Fraction(1)]

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)


def sphere_family(tower) -> WFamily:
    degrees = tower.levels[0].degrees
    return WFamily.from_complexes([sphere(n) for n in degrees], names=[f"S{n}" for n in degrees])


class TestLineSpec(BaseTest):
    def test_contains(self):
        line = LineSpec(m=Fraction(1, 2), b=0, r=1)
        # s - m(t-s) = 1 - 1 = 0
        assert line.contains(1, 3)
        assert not line.copy(update={"strict": True}).contains(1, 3)
        assert not line.contains(0, 1)

    def test_minus_infinity(self):
        line = LineSpec(m=3, r=2)
        assert line.b is None
        assert line.contains(-10, 40)

    def test_str(self):
        assert str(LineSpec(m=Fraction(1, 2), b=-1, r=3)) == "r=3: s >= 1/2(t-s) + -1"
        assert str(LineSpec(m=0, r=1, strict=True)) == "r=1: s > 0(t-s) + -inf"

    def test_rationals(self):
        assert LineSpec(m="2/3", b="-1", r=1).m == Fraction(2, 3)
        with pytest.raises(ValidationError):
            LineSpec(m=0.5, b=0, r=1)
        with pytest.raises(ValidationError):
            LineSpec(m=0, b=0, r=0)

    def test_report_consistency(self):
        with pytest.raises(ValidationError):
            VerificationReport(condition="1", holds=False)


class TestConditions(BaseTest):
    def test_cond2_t1(self, t1):
        assert check_cond2(t1, LineSpec(m=0, b=0, r=2)).holds
        report = check_cond2(t1, LineSpec(m=0, b=1, r=1))
        assert report.outcome() == (False, ((1, 1, 1),))

    def test_cond1_t1(self, t1):
        assert check_cond1(t1, LineSpec(m=0, b=0, r=2)).holds
        report = check_cond1(t1, LineSpec(m=0, b=1, r=1))
        assert report.outcome() == (False, ((1, 1, 1),))
        assert report.witnesses[0].cycle == (1,)

    def test_cond1_sphere(self, sphere):
        report = check_cond1(sphere, LineSpec(m=0, b=0, r=1))
        assert report.outcome() == (False, ((0, 0, 1),))
        assert check_cond1(sphere, LineSpec(m=0, b=0, r=2)).holds

    def test_cond3_with_a_sphere(self, sphere):
        report = check_cond3(sphere, LineSpec(m=0, b=0, r=1), sphere_family(sphere))
        assert report.outcome() == (False, ((0, 0, 1),))
        assert report.witnesses[0].family_member == "S0"

    def test_acyclic_family_member(self):
        with pytest.raises(ValidationError) as exc_info:
            WFamily.from_complexes([disk(1)])
        assert "zero homology" in str(exc_info.value)

    def test_default_family(self, t1, settings):
        family = default_family(t1, settings)
        bases = family.bases()
        assert len(bases) == 5
        assert bases.members[0].name.startswith("S0[")
        # degrees 0..1 of F_0, widened by one on each side
        assert len(family) == 5 * 4

    @pytest.mark.parametrize("seed", range(8))
    def test_cond1_matches_min_intercept(self, seed):
        tower = random_tower(seed, SMALL)
        for m in SLOPES:
            for r in range(1, tower.S + 3):
                beta = min_intercept(tower, m, r, Flavor.D)
                if beta is None:
                    assert check_cond1(tower, LineSpec(m=m, b=-100, r=r)).holds
                    continue
                assert not check_cond1(tower, LineSpec(m=m, b=beta, r=r)).holds
                assert check_cond1(tower, LineSpec(m=m, b=beta + Fraction(1, 7), r=r)).holds
                assert check_cond1(tower, LineSpec(m=m, b=beta, r=r, strict=True)).holds

    @pytest.mark.parametrize("seed", range(8))
    def test_cond2_matches_min_intercept(self, seed):
        tower = random_tower(seed, SMALL)
        for m in SLOPES:
            for r in range(1, tower.S + 3):
                beta = min_intercept(tower, m, r, Flavor.E)
                if beta is None:
                    assert check_cond2(tower, LineSpec(m=m, r=r)).holds
                    continue
                assert not check_cond2(tower, LineSpec(m=m, b=beta, r=r)).holds
                assert check_cond2(tower, LineSpec(m=m, b=beta, r=r, strict=True)).holds

    @pytest.mark.parametrize("seed", range(8))
    def test_cond4_with_unit_is_cond2(self, seed):
        tower = random_tower(seed, SMALL)
        unit = WFamily.from_complexes([sphere(0)])
        for m in SLOPES:
            for r in range(1, tower.S + 3):
                for b in (-1, 0, 1, 2):
                    spec = LineSpec(m=m, b=b, r=r)
                    assert check_cond4(tower, spec, unit).outcome() == check_cond2(tower, spec).outcome()

    @pytest.mark.parametrize("seed", range(8))
    def test_cond3_with_spheres_is_cond1(self, seed):
        tower = random_tower(seed, SMALL)
        if tower.is_zero():
            return
        family = sphere_family(tower)
        for m in SLOPES:
            for r in range(1, tower.S + 3):
                for b in (-1, 0, 1, 2):
                    spec = LineSpec(m=m, b=b, r=r)
                    assert check_cond3(tower, spec, family).outcome() == check_cond1(tower, spec).outcome()

    def test_family_intercepts(self, t1):
        assert min_family_intercept(t1, 0, 1, 4, WFamily.from_complexes([sphere(0)])) == min_intercept(t1, 0, 1)
        assert min_family_intercept(t1, 0, 1, 3, sphere_family(t1)) == min_intercept(t1, 0, 1, Flavor.D)
        with pytest.raises(ValueError):
            min_family_intercept(t1, 0, 1, 2, sphere_family(t1))


class TestMinIntercept(BaseTest):
    def test_t1(self, t1):
        assert min_intercept(t1, 0, 1) == 1
        assert min_intercept(t1, 1, 1) == 1
        assert min_intercept(t1, -1, 1) == 1
        assert min_intercept(t1, 0, 1, Flavor.D) == 1
        assert min_intercept(t1, 0, 2, Flavor.D) is None
        assert min_intercept(t1, 0, 2) is None

    def test_sphere(self, sphere):
        assert min_intercept(sphere, 0, 1, Flavor.D) == 0
        assert min_intercept(sphere, 5, 3) == 0


class TestLemmaShift(BaseTest):
    def test_examples(self):
        assert lemma_shift(LemmaCase.B, 0, 2, 4).spec.b == 4
        assert lemma_shift(LemmaCase.B, 0, 2, 4).condition == 1
        assert lemma_shift(LemmaCase.A, 0, 3, 1).spec.b == 3
        assert lemma_shift(LemmaCase.A, -5, 2, 1).spec.b == 6
        assert lemma_shift(LemmaCase.B, 1, 1, 0).spec.b == -1
        assert lemma_shift(LemmaCase.B, 1, 1, 0, InterceptVariant.PROOF).spec.b == 1
        assert lemma_shift(LemmaCase.B, -3, 2, 0).spec.b == -1
        assert lemma_shift(LemmaCase.C, 0, 2, 0).condition == 4
        assert lemma_shift(LemmaCase.D, 0, 2, 0).condition == 3

    def test_minus_infinity(self):
        for case in LemmaCase:
            assert lemma_shift(case, 1, 2, None).spec.b is None

    @hypothesis.settings(max_examples=100, deadline=None)
    @given(st.sampled_from(list(LemmaCase)), rationals, st.integers(1, 8), rationals, rationals)
    def test_translation(self, case, m, r, b, c):
        # Moving the premise intercept moves the conclusion by the same amount.
        shifted = lemma_shift(case, m, r, b + c).spec.b
        assert shifted == lemma_shift(case, m, r, b).spec.b + c

    @hypothesis.settings(max_examples=100, deadline=None)
    @given(st.sampled_from(list(LemmaCase)), rationals, st.integers(1, 8), rationals)
    def test_pure(self, case, m, r, b):
        assert lemma_shift(case, m, r, b) == lemma_shift(case, m, r, b)
        assert lemma_shift(case, m, r, b).spec.m == m
        assert lemma_shift(case, m, r, b).spec.r == r


class TestLemma(BaseTest):
    def test_t1(self, t1, settings):
        lemma = verify_lemma(t1, 0, default_family(t1, settings))
        assert lemma.holds
        assert lemma.r_max == 3
        assert len(lemma.reports) == 4 * 3
        assert {row[0] for row in lemma.variant_table()} == {"lemma-b", "lemma-d"}

    def test_sphere(self, sphere, settings):
        assert verify_lemma(sphere, 1, default_family(sphere, settings)).holds

    @pytest.mark.parametrize("seed", range(6))
    def test_random(self, seed, settings):
        tower = random_tower(seed, SMALL)
        family = default_family(tower, settings)
        for m in SLOPES:
            lemma = verify_lemma(tower, m, family)
            assert lemma.holds, [str(r.conclusion) for r in lemma.counterexamples()]

    @pytest.mark.parametrize("seed", range(4))
    @pytest.mark.parametrize("m", CORPUS_SLOPES, ids=str)
    def test_all_slopes(self, seed, m, settings):
        tower = random_tower(seed, SMALL)
        lemma = verify_lemma(tower, m, default_family(tower, settings), r_max=5)
        assert lemma.holds, [str(r.conclusion) for r in lemma.counterexamples()]
        table = lemma.variant_table()
        assert sorted((condition, r) for condition, r, _, _ in table) == [
            (condition, r) for condition in ("lemma-b", "lemma-d") for r in range(1, 6)
        ]
        assert all(statement or proof for _, _, statement, proof in table)

    @pytest.mark.slow
    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("seed", range(12))
    def test_all_slopes_larger_towers(self, p, seed, settings):
        tower = random_tower(seed, GeneratorParams(p=p))
        family = default_family(tower, settings)
        for m in CORPUS_SLOPES:
            lemma = verify_lemma(tower, m, family, r_max=5)
            assert lemma.holds, (m, [str(r.conclusion) for r in lemma.counterexamples()])

    def test_cases_subset(self, t1):
        lemma = verify_lemma(t1, 0, cases=[LemmaCase.A, LemmaCase.B], r_max=2)
        assert {r.condition for r in lemma.reports} == {"lemma-a", "lemma-b"}


class TestGenericity(BaseTest):
    @pytest.mark.parametrize("seed", range(6))
    def test_cofiber(self, seed):
        f = random_tower_map(seed, SMALL)
        for m in SLOPES:
            report = verify_generic_cofiber(f, m)
            assert report.holds, report.witnesses
            assert report.condition == "theorem-cofiber"
            assert len(report.cases) == (f.S + 2) ** 2

    def test_cofiber_of_identity(self, t1):
        report = verify_generic_cofiber(identity_tower_map(t1), 0)
        assert report.holds
        assert all(case.note.startswith("least intercept of Y: ") for case in report.cases)

    @pytest.mark.parametrize("seed", range(6))
    def test_retract(self, seed):
        split = direct_sum_towers(random_tower(seed, SMALL), random_tower(seed + 1, SMALL))
        for r in range(1, split.tower.S + 2):
            beta = min_intercept(split.tower, 0, r, Flavor.D)
            spec = LineSpec(m=0, b=beta, r=r, strict=True)
            assert verify_generic_retract(split.inclusions[0], split.projections[0], spec).holds

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(100))
    def test_cofiber_corpus(self, seed):
        f = random_tower_map(seed)
        for m in SLOPES:
            report = verify_generic_cofiber(f, m)
            assert report.holds, (m, report.witnesses)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(100))
    def test_retract_corpus(self, seed):
        split = direct_sum_towers(random_tower(seed), random_tower(seed + 1000))
        for m in SLOPES:
            for r in range(1, split.tower.S + 3):
                beta = min_intercept(split.tower, m, r, Flavor.D)
                spec = LineSpec(m=m, b=beta, r=r, strict=True)
                for k in (0, 1):
                    report = verify_generic_retract(split.inclusions[k], split.projections[k], spec)
                    assert report.holds, (m, r, k, report.witnesses)

    def test_retract_with_failing_premise(self, t1):
        identity = identity_tower_map(t1)
        report = verify_generic_retract(identity, identity, LineSpec(m=0, b=0, r=1))
        assert report.holds
        assert report.note == "premise fails on X"

    def test_not_a_retract(self, t1):
        split = direct_sum_towers(t1, t1)
        with pytest.raises(NotARetractError):
            verify_generic_retract(split.inclusions[0], split.projections[1], LineSpec(m=0, b=0, r=1))


class TestGhost(BaseTest):
    def test_t1(self, t1):
        assert verify_ghost_corollary(t1, 2, 0).holds
        report = verify_ghost_corollary(t1, 1, 1)
        assert report.outcome() == (False, ((1, 1, 1),))

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_cond1(self, seed):
        tower = random_tower(seed, SMALL)
        for r in range(1, tower.S + 3):
            for b in (-1, 0, 1, 2):
                ghost = verify_ghost_corollary(tower, r, b)
                assert ghost.outcome() == check_cond1(tower, LineSpec(m=0, b=b, r=r)).outcome()


class TestCorpus(BaseTest):
    def test_small_corpus(self, settings):
        corpus = run_corpus(self.seeds(4), SMALL, ms=[0, 1], settings=settings)
        assert corpus.holds, corpus.summary()
        assert [i.seed for i in corpus.instances] == [0, 1, 2, 3]
        assert corpus.summary()["instances"] == 4

    def test_deterministic(self, settings):
        first = run_corpus([3, 1], SMALL, r_max=2, generic=False, settings=settings)
        second = run_corpus([1, 3], SMALL, r_max=2, generic=False, settings=settings)
        assert first.json() == second.json()

    @pytest.mark.slow
    def test_worker_processes(self, settings):
        serial = run_corpus(self.seeds(3), SMALL, r_max=2, settings=settings)
        parallel = run_corpus(self.seeds(3), SMALL, r_max=2, settings=settings, jobs=2)
        assert serial.json() == parallel.json()
