import pytest
from hypothesis import given, settings, strategies as st

from twogauge import groups
from twogauge.groups import GroupError


def test_cyclic_groups_valid():
    for n in (1, 2, 3, 4, 5):
        g = groups.cyclic_group(n)
        assert not g.validate()
        assert g.exponent() == n


def test_characters_count_and_distinct():
    for n in (2, 3, 4):
        a = groups.cyclic_abelian(n)
        assert len(a.characters) == n
        assert len(set(a.characters)) == n
    prod = groups.product_abelian(groups.cyclic_abelian(2), groups.cyclic_abelian(2))
    assert len(prod.characters) == 4


def test_characters_are_homomorphisms():
    a = groups.product_abelian(groups.cyclic_abelian(2), groups.cyclic_abelian(4))
    for chi in range(a.order):
        for x in range(a.order):
            for y in range(a.order):
                assert a.char_value(chi, a.mul(x, y)) == a.char_value(chi, x) + a.char_value(chi, y)


def test_shipped_two_groups_all_valid():
    for name, builder in groups.shipped_two_groups().items():
        tg = builder()
        assert not groups.verify_two_group(tg), name


def test_identity_two_group_case():
    tg = groups.two_group_z2()
    assert tg.a.order == 1
    assert not groups.verify_two_group(tg)


def test_cube_cocycle_verified_by_enumeration():
    tg = groups.two_group_z2z2(True)
    g, a, act, alpha = tg.g, tg.a, tg.action, tg.alpha
    for w in range(2):
        for x in range(2):
            for y in range(2):
                for z in range(2):
                    lhs = a.mul(act.act(w, alpha(x, y, z)),
                                a.mul(alpha(w, g.mul(x, y), z), alpha(w, x, y)))
                    rhs = a.mul(alpha(w, x, g.mul(y, z)), alpha(g.mul(w, x), y, z))
                    assert lhs == rhs


def test_non_normalized_cocycle_rejected():
    g = groups.cyclic_group(2)
    a = groups.cyclic_abelian(2)
    act = groups.trivial_action(g, a)
    table = [[[0, 0], [0, 0]], [[0, 1], [0, 0]]]  # alpha(u, e, u) = u
    bad = groups.Cocycle3(g, a, act, table, validate=False)
    report = bad.validate()
    assert any("normalized" in line for line in report)
    tg = groups.TwoGroup(g, a, act, bad, validate=False)
    assert any("normalized" in line for line in groups.verify_two_group(tg))


def test_broken_action_rejected():
    g = groups.cyclic_group(2)
    a = groups.cyclic_abelian(3)
    table = [[0, 1, 2], [0, 0, 0]]
    with pytest.raises(GroupError):
        groups.GAction(g, a, table)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.permutations(range(3)), min_size=3, max_size=3))
def test_random_tables_mostly_rejected(rows):
    table = [list(r) for r in rows]
    g = groups.FiniteGroup(table, validate=False)
    report = g.validate()
    if not report:
        # a latin-square that validates must genuinely be a group
        for x in range(3):
            for y in range(3):
                for z in range(3):
                    assert g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z))


def test_two_group_json_round_trip():
    tg = groups.two_group_z2z2(True)
    data = groups.two_group_to_json(tg)
    back = groups.two_group_from_json(data)
    assert back.g.mul_table == tg.g.mul_table
    assert back.alpha.table == tg.alpha.table
    assert not groups.verify_two_group(back)
