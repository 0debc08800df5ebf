from fractions import Fraction

import pytest

from circledyn.errors import InvalidInput
from circledyn.expanding import (
    cesaro_cylinder,
    conjugate,
    cylinder_pushforward,
    expanding_map,
    rotation_companions,
    wicked_perturb,
)
from circledyn.measures import CircleMeasure, CylinderSpec, pushforward
from circledyn.partitions import family_from_homeo
from circledyn.plmaps import PLCircleMap

from conftest import random_pl_homeo

F = Fraction


class TestExpandingMap:
    def test_doubling_lift(self):
        e2 = expanding_map(2)
        assert e2.breakpoints == (F(0), F(1))
        assert e2.lift_values == (F(0), F(2))
        assert e2.evaluate(F(3, 8)) == F(3, 4)

    def test_tripling_fixed_points(self):
        comps = expanding_map(3).fixed_point_components()
        assert sorted(c.point for c in comps) == [F(0), F(1, 2)]

    def test_degree_bound(self):
        with pytest.raises(InvalidInput):
            expanding_map(1)
        with pytest.raises(InvalidInput):
            expanding_map(-1)

    def test_negative_degree(self):
        em = expanding_map(-2)
        assert em.degree == -2
        assert len(em.fixed_point_components()) == 3


class TestConjugate:
    def test_identity_conjugator(self):
        conj = conjugate(PLCircleMap.identity(), 3)
        assert conj.f == expanding_map(3)

    def test_rotation_conjugator_fixed_count(self):
        conj = conjugate(PLCircleMap.rotation(F(1, 4)), 2)
        assert conj.fixed_point_count == 1

    def test_degree_matches(self, rng):
        for ell in (2, 3, -2):
            h = random_pl_homeo(rng)
            conj = conjugate(h, ell)
            assert conj.f.degree == ell
            assert conj.fixed_point_count == abs(ell - 1)

    def test_non_homeo_rejected(self):
        with pytest.raises(InvalidInput):
            conjugate(expanding_map(2), 2)


class TestRotationCompanions:
    def test_ell2_single(self, rng):
        h = random_pl_homeo(rng)
        assert rotation_companions(h, 2) == [h]

    def test_ell3_identity(self):
        comps = rotation_companions(PLCircleMap.identity(), 3)
        assert comps == [PLCircleMap.identity(), PLCircleMap.rotation(F(1, 2))]
        for c in comps:
            assert conjugate(c, 3).f == expanding_map(3)

    @pytest.mark.parametrize("ell", [2, 3, 4])
    def test_companions_give_identical_map(self, ell, rng):
        h = random_pl_homeo(rng)
        fs = [conjugate(c, ell).f for c in rotation_companions(h, ell)]
        assert len(fs) == ell - 1
        assert all(f == fs[0] for f in fs)

    def test_other_rotation_differs(self, rng):
        h = random_pl_homeo(rng)
        ell = 3
        base = conjugate(h, ell).f
        other = conjugate(PLCircleMap.rotation(F(1, 3)).compose(h), ell).f
        assert other != base

    def test_conjugacy_classes_separate_at_half(self, rng):
        f2 = conjugate(random_pl_homeo(rng), 2).f
        f3 = conjugate(random_pl_homeo(rng), 3).f
        assert f2.c0_distance(f3) == F(1, 2)


class TestCylinderPushforward:
    def test_identity_gives_lebesgue(self):
        for q in (0, 3, 6):
            spec = cylinder_pushforward(PLCircleMap.identity(), 2, q, 3)
            assert spec == CylinderSpec.lebesgue(2, 3)

    def test_q0_matches_pushforward_cylinders(self, rng):
        h = random_pl_homeo(rng)
        spec = cylinder_pushforward(h, 2, 0, 3)
        hm = pushforward(h, CircleMeasure.lebesgue())
        assert spec == hm.cylinder_vector(2, 3)

    def test_matches_iterated_measure_path(self, rng):
        h = random_pl_homeo(rng)
        spec = cylinder_pushforward(h, 2, 3, 2)
        mu = pushforward(h, CircleMeasure.lebesgue())
        e2 = expanding_map(2)
        for _ in range(3):
            mu = pushforward(e2, mu)
        assert spec == mu.cylinder_vector(2, 2)

    def test_depth_validated(self, rng):
        fam = family_from_homeo(random_pl_homeo(rng), 2, 3)
        with pytest.raises(InvalidInput):
            cylinder_pushforward(fam, 2, 3, 2)


class TestWickedPerturb:
    def test_dirac_window_exact(self):
        target = CylinderSpec.dirac_zero(2, 3)
        res = wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 4), 8)
        assert res.n0 == 2
        assert res.is_degenerate
        for k in range(2, 8):
            assert res.cylinder_pushforward(k, 3).distance(target) == 0
        dist = res.c0_distance_to(PLCircleMap.identity())
        assert dist < F(1, 4)
        assert dist == F(255, 1024)

    def test_dirac_realization_refused(self):
        target = CylinderSpec.dirac_zero(2, 3)
        res = wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 4), 8)
        with pytest.raises(InvalidInput):
            res.homeomorphism()

    def test_lebesgue_target_reproduces_lebesgue(self):
        target = CylinderSpec.lebesgue(2, 2)
        res = wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 4), 7)
        assert not res.is_degenerate
        for k in range(res.depth - 2):
            assert res.cylinder_pushforward(k, 2) == target
        assert res.homeomorphism() == PLCircleMap.identity()

    def test_bernoulli_window_and_homeo(self, rng):
        target = CylinderSpec.bernoulli([F(2, 3), F(1, 3)], 2)
        res = wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 8), 9)
        assert res.n0 == 3
        for k in range(3, 9):
            assert res.cylinder_pushforward(k, 2).distance(target) == 0
        hp = res.homeomorphism()
        dist = PLCircleMap.identity().c0_distance(hp)
        assert dist < F(1, 8)
        assert res.c0_distance_to(PLCircleMap.identity()) == dist
        # the honest preimage route reproduces the window equality
        assert cylinder_pushforward(hp, 2, 5, 2) == target
        # agreement between family view and realized-homeo view everywhere
        fam = res.to_family(allow_degenerate=False)
        assert family_from_homeo(hp, 2, res.depth) == fam

    def test_window_from_random_base(self, rng):
        h = random_pl_homeo(rng)
        target = CylinderSpec.bernoulli([F(1, 4), F(3, 4)], 2)
        res = wicked_perturb(h, 2, target, F(1, 4), 7)
        for k in range(res.n0, 7):
            assert res.cylinder_pushforward(k, 2) == target
        assert res.c0_distance_to(h) < F(1, 4)

    def test_non_invariant_target_rejected(self):
        bad = CylinderSpec(
            2, 2,
            {(0, 0): F(1, 2), (0, 1): F(1, 4), (1, 0): F(1, 8), (1, 1): F(1, 8)},
        )
        with pytest.raises(InvalidInput):
            wicked_perturb(PLCircleMap.identity(), 2, bad, F(1, 4), 8)

    def test_window_length_validated(self):
        target = CylinderSpec.dirac_zero(2, 3)
        with pytest.raises(InvalidInput):
            wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 4), 5)

    def test_degenerate_distance_dominates_samples(self):
        # the reported sup distance bounds the pointwise distance to the jump
        # realization (affine on positive deepest cells) on a fine sample
        from circledyn.exact import circle_dist, mod1

        ident = PLCircleMap.identity()
        target = CylinderSpec.dirac_zero(2, 3)
        res = wicked_perturb(ident, 2, target, F(1, 4), 8)
        sup = res.c0_distance_to(ident)
        scale = F(1, 2**res.depth)
        worst = F(0)
        for word, (pos, length) in res.tables[res.depth - 1].items():
            value = F(0)
            for d in word:
                value = 2 * value + d
            a_w = value * scale
            for j in range(50):
                t = pos + length * F(j, 50)
                image = a_w + (t - pos) * scale / length
                d_here = circle_dist(ident.evaluate(mod1(t)), mod1(image))
                worst = max(worst, d_here)
        assert worst <= sup
        assert sup - worst < F(1, 64)

    def test_family_view_agrees_with_tables(self):
        target = CylinderSpec.bernoulli([F(2, 3), F(1, 3)], 2)
        res = wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 4), 7)
        fam = res.to_family()
        for q in (0, 2, 4):
            assert cylinder_pushforward(fam, 2, q, 2) == res.cylinder_pushforward(q, 2)
        assert cesaro_cylinder(fam, 2, 5, 2) == res.cesaro_spec(5, 2)
        # and against the realized homeomorphism, depth permitting
        hp = res.homeomorphism()
        assert cesaro_cylinder(hp, 2, 5, 2) == res.cesaro_spec(5, 2)


class TestCesaroCylinder:
    def test_identity_lebesgue(self):
        for n in (1, 3, 6):
            spec = cesaro_cylinder(PLCircleMap.identity(), 2, n, 2)
            assert spec == CylinderSpec.lebesgue(2, 2)

    def test_dirac_window_bound(self):
        target = CylinderSpec.dirac_zero(2, 3)
        n = 12
        res = wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 4), n)
        spec = res.cesaro_spec(n - 1, 3)
        assert spec.distance(target) <= F(res.n0, n - 1)

    def test_convexity(self):
        target = CylinderSpec.bernoulli([F(2, 3), F(1, 3)], 2)
        res = wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 4), 8)
        n = 6
        acc = {w: F(0) for w in res.cylinder_pushforward(0, 2).values}
        for k in range(n):
            for w, v in res.cylinder_pushforward(k, 2).values.items():
                acc[w] += v / n
        spec = res.cesaro_spec(n, 2)
        assert all(spec.value(w) == acc[w] for w in acc)
        assert sum(spec.values.values()) == 1

    def test_bernoulli_cesaro_window_bound(self):
        target = CylinderSpec.bernoulli([F(2, 3), F(1, 3)], 2)
        n = 8
        res = wicked_perturb(PLCircleMap.identity(), 2, target, F(1, 8), n)
        spec = res.cesaro_spec(n, 2)
        assert spec.distance(target) <= F(res.n0 + 2, n)
