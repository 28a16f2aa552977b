import pytest
from pydantic import ValidationError

from vlines.complexes import cone, identity_map, is_ghost, same_complex, sphere, tensor, zero_map
from vlines.couples import pages
from vlines.errors import ShapeMismatchError
from vlines.flinalg import FpMatrix
from vlines.towers import (
    FilteredComplex,
    Generator,
    GeneratorParams,
    Tower,
    TowerMap,
    cofiber_tower,
    compose_tower_maps,
    composite_null_from,
    composite_zero_on_H,
    direct_sum_towers,
    identity_tower_map,
    is_retract,
    make_tower,
    make_tower_map,
    nonzero_composite_cycle,
    random_complex,
    random_tower,
    random_tower_map,
    smash,
    sphere_tower,
    zero_tower,
)

from .base_test import SMALL, BaseTest


class TestTower(BaseTest):
    def test_t1_levels(self, t1):
        assert t1.S == 1
        assert t1.levels[0].dims == {0: 1, 1: 1}
        assert t1.levels[1].dims == {0: 1}
        assert t1.levels[0].is_acyclic()

    def test_t1_cofibers(self, t1):
        assert t1.cofiber(0).complex.betti_numbers() == {1: 1}
        assert t1.cofiber(1).complex.betti_numbers() == {0: 1}

    def test_extended_levels(self, t1):
        assert same_complex(t1.level(-3), t1.levels[0])
        assert t1.level(2).is_zero()
        assert t1.composite(-4, 2).components == identity_map(t1.levels[0]).components
        assert t1.composite(1, 3).source.is_zero()

    def test_composite_identity(self, t1):
        assert t1.composite(0, 1).components == identity_map(t1.levels[0]).components

    def test_non_injective_map_rejected(self):
        with pytest.raises(ValidationError) as exc_info:
            Tower(levels=[sphere(0), sphere(0)], maps=[zero_map(sphere(0), sphere(0))])
        assert "not degreewise injective" in str(exc_info.value)

    def test_map_count(self):
        with pytest.raises(ValidationError):
            Tower(levels=[sphere(0), sphere(0)])

    def test_make_tower(self):
        tower = make_tower([sphere(1)])
        assert tower.S == 0
        assert tower.levels[0].betti_numbers() == {1: 1}

    def test_empty_tower_rejected(self):
        with pytest.raises(ValidationError):
            Tower(levels=[])

    def test_zero_tower(self):
        assert zero_tower().is_zero()
        assert zero_tower().degree_range() is None

    def test_pad(self, t1):
        padded = t1.pad(3)
        assert padded.S == 3
        assert padded.level(3).is_zero()
        assert t1.pad(0) is t1

    def test_shift(self, t1):
        dims = self.dims(t1.shift(2), 1)
        assert dims == {(s, t + 2): d for (s, t), d in self.dims(t1, 1).items()}

    def test_smash_with_unit(self):
        tower = random_tower(5, SMALL)
        assert [p.module.dims for p in pages(smash(tower, sphere(0)), 3)] == [
            p.module.dims for p in pages(tower, 3)
        ]

    @pytest.mark.parametrize("seed", range(10))
    def test_smash_associates(self, seed):
        tower = random_tower(seed, SMALL)
        w, v = random_complex(seed + 100), random_complex(seed + 200)
        r_max = tower.S + 2
        at_once = pages(smash(tower, tensor(w, v)), r_max)
        in_turn = pages(smash(smash(tower, w), v), r_max)
        assert [p.module.dims for p in at_once] == [p.module.dims for p in in_turn]

    @pytest.mark.parametrize("seed", range(10))
    def test_smash_pages_follow_kunneth(self, seed):
        tower = random_tower(seed, SMALL)
        w = random_complex(seed + 100, max_generators=5, degree_window=(-1, 2))
        betti = w.betti_numbers()
        r_max = tower.S + 2
        for own, smashed in zip(pages(tower, r_max), pages(smash(tower, w), r_max)):
            expected = {}
            for (s, t), dim in own.module.dims.items():
                for j, b in betti.items():
                    expected[(s, t + j)] = expected.get((s, t + j), 0) + dim * b
            assert smashed.module.dims == expected


class TestComposites(BaseTest):
    def test_t1(self, t1):
        # g_0: F_1 -> F_0 is zero on homology since F_0 is acyclic.
        assert nonzero_composite_cycle(t1, 0, 2, 0) is None
        assert nonzero_composite_cycle(t1, 1, 1, 0) == (1,)
        assert composite_null_from(t1, sphere(0), 0, 2)
        assert not composite_null_from(t1, sphere(0), 1, 1)
        assert composite_zero_on_H(t1, 0, 2, 0)
        assert not composite_zero_on_H(t1, 1, 1, 0)
        assert composite_zero_on_H(t1, 1, 1, 1)

    def test_sphere(self, sphere):
        assert nonzero_composite_cycle(sphere, 0, 1, 0) == (1,)
        assert nonzero_composite_cycle(sphere, 0, 2, 0) is None

    def test_r_must_be_positive(self, t1):
        with pytest.raises(ValueError):
            nonzero_composite_cycle(t1, 0, 0, 0)

    @pytest.mark.parametrize("seed", range(20))
    def test_vanishing_persists(self, seed):
        tower = random_tower(seed, SMALL)
        for s in range(-1, tower.S + 1):
            for n in tower.levels[0].degrees:
                vanishing = [composite_zero_on_H(tower, s, r, n) for r in range(1, tower.S + 4)]
                assert vanishing == sorted(vanishing), f"s={s} n={n}"

    @pytest.mark.parametrize("seed", range(20))
    def test_cofiber_sequences(self, seed):
        tower = random_tower(seed, SMALL)
        for s in range(tower.S + 1):
            self.assert_cofiber_sequence(tower.structure_map(s), tower.cofiber(s))
            for r in (2, 3):
                f = tower.composite(s, r)
                self.assert_cofiber_sequence(f, cone(f))


class TestTowerMaps(BaseTest):
    def test_identity(self, t1):
        assert is_retract(identity_tower_map(t1), identity_tower_map(t1))

    def test_zero_is_not_a_retraction(self, sphere):
        zero = TowerMap(source=sphere, target=sphere, components=[zero_map(sphere.levels[0], sphere.levels[0])])
        assert not is_retract(identity_tower_map(sphere), zero)

    def test_compose(self, t1, sphere):
        f = make_tower_map(sphere, t1, [])
        composite = compose_tower_maps(identity_tower_map(f.target), f)
        for s in range(f.S + 1):
            for n in f.source.level(s).degrees:
                assert composite.component(s).component(n) == f.component(s).component(n)
        with pytest.raises(ShapeMismatchError):
            compose_tower_maps(f, f)

    def test_padding(self, t1, sphere):
        f = make_tower_map(sphere, t1, [])
        assert f.S == 1
        assert f.source.S == 1

    @pytest.mark.parametrize("seed", range(6))
    def test_direct_sum_retract(self, seed):
        split = direct_sum_towers(random_tower(seed, SMALL), random_tower(seed + 50, SMALL))
        assert is_retract(split.inclusions[0], split.projections[0])
        assert is_retract(split.inclusions[1], split.projections[1])

    @pytest.mark.parametrize("seed", range(6))
    def test_cofiber_tower(self, seed):
        f = random_tower_map(seed, SMALL)
        z = cofiber_tower(f).tower
        assert z.S == f.S
        for s in range(f.S + 1):
            assert z.level(s).total_dim == f.source.level(s).total_dim + f.target.level(s).total_dim

    def test_cofiber_of_identity(self, t1):
        z = cofiber_tower(identity_tower_map(t1)).tower
        assert all(level.is_acyclic() for level in z.levels)


class TestFilteredComplex(BaseTest):
    def test_filtration_violation(self):
        with pytest.raises(ValidationError) as exc_info:
            FilteredComplex(
                p=2,
                generators=[Generator(name="a", degree=1, filtration=1), Generator(name="b", degree=0, filtration=0)],
                differentials={1: FpMatrix.from_rows(2, [[1]])},
            )
        assert "d(a)" in str(exc_info.value)

    def test_duplicate_names(self):
        with pytest.raises(ValidationError):
            FilteredComplex(
                p=2,
                generators=[Generator(name="a", degree=1, filtration=0), Generator(name="a", degree=0, filtration=0)],
            )

    @pytest.mark.parametrize("seed", range(10))
    def test_adapted_basis(self, seed):
        tower = random_tower(seed, SMALL)
        rebuilt = FilteredComplex.from_tower(tower).tower()
        assert rebuilt.S == tower.S
        r_max = tower.S + 2
        assert [p.module.dims for p in pages(rebuilt, r_max)] == [p.module.dims for p in pages(tower, r_max)]


class TestRandomTowers(BaseTest):
    def test_deterministic(self):
        a, b = random_tower(11), random_tower(11)
        assert a.S == b.S
        assert all(same_complex(x, y) for x, y in zip(a.levels, b.levels))

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_prime(self, p):
        assert random_tower(1, GeneratorParams(p=p)).p == p

    def test_corpus_is_not_trivial(self):
        towers = [random_tower(seed) for seed in range(200)]
        assert sum(len(t.levels) for t in towers) / len(towers) >= 3
        assert sum(bool(t.levels[0].differentials) for t in towers) >= 100

    def test_maps_are_mostly_not_ghosts(self):
        maps = [random_tower_map(seed) for seed in range(100)]
        assert sum(not is_ghost(f.component(0)) for f in maps) >= 50

    def test_sphere_tower(self):
        assert sphere_tower(2).levels[0].betti_numbers() == {2: 1}
