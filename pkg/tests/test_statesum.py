import random
from fractions import Fraction

import pytest

from twogauge import complexes, groups, statesum
from twogauge.cochains import coboundary, random_cochain
from twogauge.complexes import boundary_simplex, disjoint_union, prism
from twogauge.connections import enumerate_flat, gauge_classes, simple_gauge_1
from twogauge.scalars import Scalar
from twogauge.statesum import (
    StateSumConfig,
    action,
    cobordism_matrix,
    count_gauge_maps_brute,
    cylinder_projector,
    groupoid_integral,
    pachner_harness,
    partition,
)


SPHERE_VALUES = [
    ("Z2", Fraction(1, 2)),
    ("BZ2", Fraction(2)),
    ("Z2xZ2", Fraction(1)),
    ("Z2xZ2[alpha]", Fraction(1)),
]


@pytest.mark.parametrize("name,expected", SPHERE_VALUES)
@pytest.mark.parametrize("dim", [3, 4])
def test_sphere_partition_values(name, expected, dim):
    tg = groups.shipped_two_groups()[name]()
    cfg = StateSumConfig(tg, degree=dim)
    z = partition(cfg, boundary_simplex(dim))
    assert z.as_rational() == expected


def test_trivial_cochain_gives_zero_phase(tg_z2z2_alpha, sphere3):
    cfg = StateSumConfig(tg_z2z2_alpha, degree=3)
    tau = next(iter(enumerate_flat(tg_z2z2_alpha, sphere3)))
    assert action(cfg, sphere3, tau).is_zero()


def test_coboundary_action_vanishes_on_closed(tg_z2, sphere4):
    rng = random.Random(8)
    beta = random_cochain(tg_z2, 3, rng, denominators=(4, 8))
    cfg = StateSumConfig(tg_z2, omega=coboundary(tg_z2, beta), check_closed=False)
    for tau in enumerate_flat(tg_z2, sphere4):
        assert action(cfg, sphere4, tau).is_zero()


def test_partition_invariant_under_coboundary_twist(tg_z2z2_alpha, sphere3):
    rng = random.Random(21)
    base = partition(StateSumConfig(tg_z2z2_alpha, degree=3), sphere3)
    for _ in range(2):
        beta = random_cochain(tg_z2z2_alpha, 2, rng)
        cfg = StateSumConfig(tg_z2z2_alpha, omega=coboundary(tg_z2z2_alpha, beta))
        assert partition(cfg, sphere3) == base


def test_action_constant_on_gauge_orbits(tg_z2z2_alpha, sphere3):
    rng = random.Random(5)
    beta = random_cochain(tg_z2z2_alpha, 2, rng)
    cfg = StateSumConfig(tg_z2z2_alpha, omega=coboundary(tg_z2z2_alpha, beta))
    flats = list(enumerate_flat(tg_z2z2_alpha, sphere3))
    for tau in flats[:24]:
        value = action(cfg, sphere3, tau)
        for v in sphere3.vertices[:3]:
            moved = simple_gauge_1(tg_z2z2_alpha, sphere3, tau, 1, v).target(
                tg_z2z2_alpha, sphere3
            )
            assert action(cfg, sphere3, moved) == value


def test_groupoid_integral_single_object():
    value = groupoid_integral([("x", 2)], lambda key: Scalar.one())
    assert value.as_rational() == Fraction(1, 2)


def test_one_group_integral_matches_sphere_value(tg_z2, sphere3):
    n_vertices = len(sphere3.vertices)
    objects = [
        (tau.key(sphere3), 2 ** n_vertices) for tau in enumerate_flat(tg_z2, sphere3)
    ]
    integral = groupoid_integral(objects, lambda key: Scalar.one())
    assert integral.as_rational() == Fraction(1, 2)


def test_two_groupoid_integral_reproduces_partition(tg_z2z2_alpha, sphere3):
    from twogauge.connections import gauge_out_count

    cfg = StateSumConfig(tg_z2z2_alpha, degree=3)
    out = gauge_out_count(tg_z2z2_alpha, sphere3)
    objects = [(tau.key(sphere3), out) for tau in enumerate_flat(tg_z2z2_alpha, sphere3)]
    integral = groupoid_integral(objects, lambda key: Scalar.one())
    z = partition(cfg, sphere3)
    assert z == integral.scaled(Fraction(tg_z2z2_alpha.a.order))


def test_cylinder_projector_idempotent_rank(tg_z2, tg_bz2, tg_z2z2_alpha, sphere2):
    for tg, expected_rank in ((tg_z2, 1), (tg_bz2, 2), (tg_z2z2_alpha, 2)):
        cfg = StateSumConfig(tg, degree=3)
        p = cylinder_projector(cfg, sphere2)
        assert p.is_idempotent()
        assert p.trace().as_rational() == expected_rank
        assert expected_rank == len(gauge_classes(tg, sphere2))


def test_cylinder_fast_path_matches_direct(tg_z2, tg_bz2, sphere2):
    for tg in (tg_z2, tg_bz2):
        cfg = StateSumConfig(tg, degree=3)
        assert cylinder_projector(cfg, sphere2) == cobordism_matrix(cfg, prism(sphere2))


def test_cylinder_counts_match_brute_force(tg_z2z2_alpha, sphere2):
    cfg = StateSumConfig(tg_z2z2_alpha, degree=3)
    fast = cylinder_projector(cfg, sphere2)
    flats = list(enumerate_flat(tg_z2z2_alpha, sphere2))
    norm = Fraction(1, 2 ** 4 * 2 ** 6)
    for tau in flats[:3]:
        hist = count_gauge_maps_brute(tg_z2z2_alpha, sphere2, tau)
        col = tau.key(sphere2)
        assert sum(hist.values()) == 2 ** 4 * 2 ** 6
        for target, count in hist.items():
            assert fast.entry(target, col) == Scalar.rational(count * norm)


def test_cylinder_annihilates_nonflat(tg_z2, sphere2):
    cfg = StateSumConfig(tg_z2, degree=3)
    p = cylinder_projector(cfg, sphere2)
    from twogauge.connections import Connection

    tau = Connection.identity(sphere2)
    tau.tau1[(0, 1)] = 1  # breaks the edge law
    assert tau.key(sphere2) not in p.columns


def test_gluing_composes(tg_z2, sphere2):
    cfg = StateSumConfig(tg_z2, degree=3)
    w = prism(sphere2)
    single = cobordism_matrix(cfg, w)
    double = cobordism_matrix(cfg, complexes.glue(w, prism(sphere2)))
    assert single.compose(single) == double


def test_disjoint_union_multiplicative(tg_z2, sphere3):
    cfg = StateSumConfig(tg_z2, degree=3)
    z1 = partition(cfg, sphere3)
    z2 = partition(cfg, disjoint_union(sphere3, sphere3))
    assert z2 == z1 * z1


def test_tensor_of_matrices(tg_z2, sphere2):
    cfg = StateSumConfig(tg_z2, degree=3)
    p = cylinder_projector(cfg, sphere2)
    pp = p.tensor(p)
    assert pp.trace().as_rational() == p.trace().as_rational() ** 2


def test_harness_invariance_seeded(tg_z2z2_alpha, sphere3):
    ks = set()
    for seed in range(3):
        cfg = StateSumConfig(tg_z2z2_alpha, degree=3)
        report = pachner_harness(cfg, sphere3, seed=seed, moves=3, extension_sample=6,
                                 cap_states=40000)
        assert report["invariant"], report
        ks.update(mv["k"] for mv in report["moves"])
    assert 1 in ks


def test_harness_dimension_four(tg_bz2, sphere4):
    cfg = StateSumConfig(tg_bz2, degree=4)
    report = pachner_harness(cfg, sphere4, seed=1, moves=2, extension_sample=4)
    assert report["invariant"], report


def test_extension_counts_per_move_type(tg_z2z2_alpha, sphere3):
    from twogauge.complexes import PachnerMove, apply_pachner, legal_moves
    from twogauge.statesum import count_extensions, expected_extension_count

    cfg = StateSumConfig(tg_z2z2_alpha, degree=3)
    flats = list(enumerate_flat(tg_z2z2_alpha, sphere3))[:10]
    cone = PachnerMove(1, (1, 2, 3, 4), fresh_low=True)
    for tau in flats:
        assert count_extensions(cfg, sphere3, cone, tau) == 2 * 2 ** 3
    m1 = apply_pachner(sphere3, cone)
    mv2 = next(mv for mv in legal_moves(m1) if mv.k == 2)
    flats1 = list(enumerate_flat(tg_z2z2_alpha, m1))[:10]
    for tau in flats1:
        assert count_extensions(cfg, m1, mv2, tau) == 2


def test_resource_cap(tg_z2z2_alpha, sphere3):
    from twogauge.connections import GaugeError

    cfg = StateSumConfig(tg_z2z2_alpha, degree=3, cap=10)
    with pytest.raises(GaugeError):
        partition(cfg, sphere3)
