import random
from fractions import Fraction

from twogauge import cochains, groups
from twogauge.cochains import (
    FlatLabeling,
    OmegaCochain,
    coboundary,
    enumerate_flat_labelings,
    group_cochain,
    random_cochain,
    verify_omega_cocycle,
)
from twogauge.scalars import Phase


def test_flat_labeling_counts(tg_z2z2_alpha):
    labelings = list(enumerate_flat_labelings(tg_z2z2_alpha, 3))
    assert len(labelings) == 2 ** 3 * 2 ** 3


def test_trivial_cochain_is_closed(tg_z2z2_alpha):
    omega = OmegaCochain.trivial(tg_z2z2_alpha, 3)
    assert omega.is_normalized()
    assert verify_omega_cocycle(tg_z2z2_alpha, omega) == []


def test_coboundary_of_zero_is_zero(tg_z2):
    zero = OmegaCochain.trivial(tg_z2, 2)
    d = coboundary(tg_z2, zero)
    assert all(d(l).is_zero() for l in enumerate_flat_labelings(tg_z2, 3))


def test_bar_resolution_face_formula():
    """For a 1-group 2-cochain the coboundary follows the four-term
    alternating formula with merged consecutive arguments."""
    tg = groups.make_two_group(groups.cyclic_group(4), groups.trivial_abelian())
    rng = random.Random(3)
    table = {
        (g, h): Fraction(rng.randrange(12), 12) for g in range(4) for h in range(4)
    }
    table[(0, 0)] = Fraction(0)

    def beta_fn(g, h):
        return Phase(table[(g, h)])

    beta = group_cochain(tg, 2, beta_fn)
    d_beta = coboundary(tg, beta)
    G = tg.g
    for labeling in enumerate_flat_labelings(tg, 3):
        g, h, k = labeling.group_tuple()
        expect = (
            table[(h, k)]
            - table[(G.mul(g, h), k)]
            + table[(g, G.mul(h, k))]
            - table[(g, h)]
        )
        assert d_beta(labeling) == Phase(expect)


def test_d_squared_is_zero_degrees_2_3_4(tg_z2):
    rng = random.Random(11)
    beta = random_cochain(tg_z2, 2, rng, denominators=(3, 5, 8))
    d1 = coboundary(tg_z2, beta)
    d2 = coboundary(tg_z2, d1)
    for labeling in enumerate_flat_labelings(tg_z2, 4):
        assert d2(labeling).is_zero()


def test_coboundary_is_closed_cochain(tg_z2z2_alpha):
    rng = random.Random(5)
    beta = random_cochain(tg_z2z2_alpha, 3, rng)
    omega = coboundary(tg_z2z2_alpha, beta)
    assert verify_omega_cocycle(tg_z2z2_alpha, omega) == []


def test_random_noncocycle_detected(tg_z2):
    rng = random.Random(7)
    for attempt in range(5):
        omega = random_cochain(tg_z2, 4, rng, denominators=(16,))
        failures = verify_omega_cocycle(tg_z2, omega)
        if failures:
            assert failures[0] is not None
            return
    raise AssertionError("five random degree-4 tables were all closed")


def test_omega_json_round_trip(tg_z2z2_alpha):
    rng = random.Random(2)
    beta = random_cochain(tg_z2z2_alpha, 3, rng, denominators=(2,))
    data = cochains.omega_to_json(tg_z2z2_alpha, beta)
    back = cochains.omega_from_json(tg_z2z2_alpha, data)
    for labeling in enumerate_flat_labelings(tg_z2z2_alpha, 3):
        assert back(labeling) == beta(labeling)


def test_identity_labeling_construction(tg_z2z2_alpha):
    labeling = FlatLabeling.identity(tg_z2z2_alpha, 4)
    assert all(v == 0 for v in labeling.edges.values())
    assert all(v == 0 for v in labeling.triangles.values())
