"""Finite groups by multiplication table, abelian coefficient groups with
their character tables, group actions, normalized 3-cocycles, and 2-groups.

Elements are dense indices 0..order-1 with the identity at index 0.  All
structural identities are verified by exhaustive enumeration; groups here
are desk scale (|G|, |A| <= 16).
"""

from fractions import Fraction
from math import gcd

from .scalars import Phase


class GroupError(ValueError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


class FiniteGroup:
    """A finite group given by a total multiplication table."""

    def __init__(self, mul, names=None, validate=True):
        self.order = len(mul)
        self.mul_table = [list(row) for row in mul]
        if names is None:
            names = [str(i) for i in range(self.order)]
        self.names = list(names)
        self.identity = 0
        self.inv_table = self._build_inverses()
        if validate:
            report = self.validate()
            if report:
                raise GroupError("; ".join(report))

    def _build_inverses(self):
        inv = [None] * self.order
        n = self.order
        if any(len(row) != n or any(not (0 <= v < n) for v in row) for row in self.mul_table):
            return inv  # malformed table; validate() reports it
        for a in range(n):
            for b in range(n):
                if self.mul_table[a][b] == 0 and self.mul_table[b][a] == 0:
                    inv[a] = b
                    break
        return inv

    def mul(self, a, b):
        return self.mul_table[a][b]

    def inv(self, a):
        x = self.inv_table[a]
        if x is None:
            raise GroupError("element %d has no inverse" % a)
        return x

    def element_order(self, a):
        x, n = a, 1
        while x != 0:
            x = self.mul(x, a)
            n += 1
        return n

    def exponent(self):
        e = 1
        for a in range(self.order):
            e = _lcm(e, self.element_order(a))
        return e

    def is_abelian(self):
        n = self.order
        return all(self.mul(a, b) == self.mul(b, a) for a in range(n) for b in range(n))

    def index(self, name):
        return self.names.index(name)

    def validate(self):
        """List of violated group laws; empty iff this is a group."""
        report = []
        n = self.order
        for row in self.mul_table:
            if len(row) != n or any(not (0 <= v < n) for v in row):
                report.append("multiplication table is not total on 0..%d" % (n - 1))
                return report
        for a in range(n):
            if self.mul(0, a) != a or self.mul(a, 0) != a:
                report.append("identity law fails at %d" % a)
        for a in range(n):
            if self.inv_table[a] is None:
                report.append("no inverse for %d" % a)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        report.append("associativity fails at (%d,%d,%d)" % (a, b, c))
                        return report
        return report

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.mul_table == other.mul_table

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.mul_table))

    def __repr__(self):
        return "FiniteGroup(order=%d)" % self.order


class AbelianGroup(FiniteGroup):
    """Abelian group plus its character table.

    Characters are additive-phase homomorphisms A -> Q/Z, found by brute
    force over generator images; there are exactly |A| of them and the
    trivial character has index 0.
    """

    def __init__(self, mul, names=None, validate=True):
        super().__init__(mul, names, validate=validate)
        if validate and not self.is_abelian():
            raise GroupError("multiplication is not commutative")
        self.characters = self._find_characters()
        if validate:
            if len(self.characters) != self.order:
                raise GroupError(
                    "found %d characters, expected %d" % (len(self.characters), self.order)
                )

    def char_value(self, chi, a):
        """Value of character chi on element a, as a Phase."""
        return Phase(self.characters[chi][a])

    def char_mul(self, chi1, chi2):
        """Index of the product character (cached table)."""
        table = getattr(self, "_char_mul_table", None)
        if table is None:
            index = {c: i for i, c in enumerate(self.characters)}
            table = [
                [
                    index[tuple((p + q) % 1 for p, q in zip(c1, c2))]
                    for c2 in self.characters
                ]
                for c1 in self.characters
            ]
            self._char_mul_table = table
        return table[chi1][chi2]

    def char_inv(self, chi):
        table = getattr(self, "_char_inv_table", None)
        if table is None:
            index = {c: i for i, c in enumerate(self.characters)}
            table = [index[tuple((-p) % 1 for p in c)] for c in self.characters]
            self._char_inv_table = table
        return table[chi]

    def _generating_sequence(self):
        gens = []
        generated = {0}
        while len(generated) < self.order:
            g = min(a for a in range(self.order) if a not in generated)
            gens.append(g)
            frontier = list(generated)
            for base in frontier:
                x = base
                while True:
                    x = self.mul(x, g)
                    if x in generated:
                        break
                    generated.add(x)
            # close under the whole new subgroup
            changed = True
            while changed:
                changed = False
                for a in list(generated):
                    for b in list(generated):
                        c = self.mul(a, b)
                        if c not in generated:
                            generated.add(c)
                            changed = True
        return gens

    def _expand_character(self, gens, values):
        """Extend generator exponents to a full map, or None on conflict."""
        table = {0: Fraction(0)}
        frontier = [0]
        while frontier:
            new_frontier = []
            for a in frontier:
                for g, v in zip(gens, values):
                    b = self.mul(a, g)
                    w = (table[a] + v) % 1
                    if b in table:
                        if table[b] != w:
                            return None
                    else:
                        table[b] = w
                        new_frontier.append(b)
            frontier = new_frontier
        if len(table) != self.order:
            return None
        return tuple(table[a] for a in range(self.order))

    def _find_characters(self):
        gens = self._generating_sequence()
        if not gens:
            return [tuple([Fraction(0)])] if self.order == 1 else []
        orders = [self.element_order(g) for g in gens]
        found = []
        seen = set()

        def rec(i, values):
            if i == len(gens):
                table = self._expand_character(gens, values)
                if table is not None and table not in seen:
                    seen.add(table)
                    found.append(table)
                return
            for j in range(orders[i]):
                rec(i + 1, values + [Fraction(j, orders[i])])

        rec(0, [])
        found.sort()
        return found


class GAction:
    """A left action of G on A by automorphisms, as a table."""

    def __init__(self, group, coeffs, table, validate=True):
        self.group = group
        self.coeffs = coeffs
        self.table = [list(row) for row in table]
        if validate:
            report = self.validate()
            if report:
                raise GroupError("; ".join(report))

    def act(self, g, a):
        return self.table[g][a]

    def act_char(self, g, chi):
        """Index of the transported character (g.chi)(a) = chi(g^-1.a)."""
        table = getattr(self, "_char_act_table", None)
        if table is None:
            index = {c: i for i, c in enumerate(self.coeffs.characters)}
            table = []
            for gg in range(self.group.order):
                ginv = self.group.inv(gg)
                row = [
                    index[
                        tuple(
                            self.coeffs.characters[cc][self.act(ginv, a)]
                            for a in range(self.coeffs.order)
                        )
                    ]
                    for cc in range(self.coeffs.order)
                ]
                table.append(row)
            self._char_act_table = table
        return table[g][chi]

    def validate(self):
        report = []
        G, A = self.group, self.coeffs
        if len(self.table) != G.order or any(len(r) != A.order for r in self.table):
            return ["action table is not total"]
        for a in range(A.order):
            if self.act(0, a) != a:
                report.append("identity does not act trivially at %d" % a)
        for g in range(G.order):
            if sorted(self.table[g]) != list(range(A.order)):
                report.append("action of %d is not a bijection" % g)
                continue
            for a in range(A.order):
                for b in range(A.order):
                    if self.act(g, A.mul(a, b)) != A.mul(self.act(g, a), self.act(g, b)):
                        report.append("action of %d is not a homomorphism" % g)
                        break
                else:
                    continue
                break
        for g in range(G.order):
            for h in range(G.order):
                gh = G.mul(g, h)
                for a in range(A.order):
                    if self.act(gh, a) != self.act(g, self.act(h, a)):
                        report.append("composition fails at (%d,%d)" % (g, h))
                        break
                else:
                    continue
                break
        return report


class Cocycle3:
    """A normalized 3-cocycle on G with coefficients in A (twisted by an action)."""

    def __init__(self, group, coeffs, action, table, validate=True):
        self.group = group
        self.coeffs = coeffs
        self.action = action
        self.table = table
        if validate:
            report = self.validate()
            if report:
                raise GroupError("; ".join(report))

    def __call__(self, g, h, k):
        return self.table[g][h][k]

    def validate(self):
        report = []
        G, A, act = self.group, self.coeffs, self.action
        n = G.order
        for g in range(n):
            for h in range(n):
                for k in range(n):
                    if (g == 0 or h == 0 or k == 0) and self(g, h, k) != 0:
                        report.append("not normalized at (%d,%d,%d)" % (g, h, k))
        for g in range(n):
            for h in range(n):
                for k in range(n):
                    for l in range(n):
                        lhs = A.mul(
                            act.act(g, self(h, k, l)),
                            A.mul(self(g, G.mul(h, k), l), self(g, h, k)),
                        )
                        rhs = A.mul(self(g, h, G.mul(k, l)), self(G.mul(g, h), k, l))
                        if lhs != rhs:
                            report.append(
                                "cocycle identity fails at (%d,%d,%d,%d)" % (g, h, k, l)
                            )
                            return report
        return report


class TwoGroup:
    """Skeletal 2-group: (G, A, action, alpha) with alpha normalized."""

    def __init__(self, g, a, action, alpha, name=None, validate=True):
        self.g = g
        self.a = a
        self.action = action
        self.alpha = alpha
        self.name = name
        if validate:
            report = verify_two_group(self)
            if report:
                raise GroupError("; ".join(report))

    def act(self, g, a):
        return self.action.act(g, a)

    def alpha_is_trivial(self):
        n = self.g.order
        return all(
            self.alpha(g, h, k) == 0 for g in range(n) for h in range(n) for k in range(n)
        )

    def __repr__(self):
        label = self.name or "|G|=%d,|A|=%d" % (self.g.order, self.a.order)
        return "TwoGroup(%s)" % label


def verify_two_group(tg):
    """All violated identities of the 2-group data; empty iff valid."""
    report = []
    report.extend("G: " + line for line in tg.g.validate())
    report.extend("A: " + line for line in tg.a.validate())
    if not tg.a.is_abelian():
        report.append("A: multiplication is not commutative")
    report.extend("action: " + line for line in tg.action.validate())
    report.extend("alpha: " + line for line in tg.alpha.validate())
    return report


# ---------------------------------------------------------------------------
# builders

def trivial_group():
    return FiniteGroup([[0]], names=["e"])


def trivial_abelian():
    return AbelianGroup([[0]], names=["e"])


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def cyclic_group(n):
    names = ["e", "u"] if n == 2 else ["e"] + ["g%d" % i for i in range(1, n)]
    return FiniteGroup(cyclic_table(n), names=names)


def cyclic_abelian(n):
    names = ["e", "u"] if n == 2 else ["e"] + ["a%d" % i for i in range(1, n)]
    return AbelianGroup(cyclic_table(n), names=names)


def product_abelian(a, b):
    """Direct product of two abelian groups, elements indexed i*|B|+j."""
    n, m = a.order, b.order
    mul = [[0] * (n * m) for _ in range(n * m)]
    for i1 in range(n):
        for j1 in range(m):
            for i2 in range(n):
                for j2 in range(m):
                    mul[i1 * m + j1][i2 * m + j2] = a.mul(i1, i2) * m + b.mul(j1, j2)
    names = ["%s.%s" % (a.names[i], b.names[j]) for i in range(n) for j in range(m)]
    return AbelianGroup(mul, names=names)


def trivial_action(group, coeffs):
    table = [list(range(coeffs.order)) for _ in range(group.order)]
    return GAction(group, coeffs, table)


def inversion_action(group, coeffs):
    """Nontrivial Z2 action a -> a^-1 for non-identity group elements."""
    if group.order != 2:
        raise GroupError("inversion action is defined for |G| = 2")
    table = [list(range(coeffs.order)), [coeffs.inv(a) for a in range(coeffs.order)]]
    return GAction(group, coeffs, table)


def trivial_cocycle(group, coeffs, action):
    n = group.order
    table = [[[0] * n for _ in range(n)] for _ in range(n)]
    return Cocycle3(group, coeffs, action, table)


def cube_cocycle_z2(group, coeffs, action):
    """The nontrivial class on Z2 with Z2 coefficients: alpha(u,u,u) = u."""
    table = [[[0, 0], [0, 0]], [[0, 0], [0, 1]]]
    return Cocycle3(group, coeffs, action, table)


def carry_cocycle(group, coeffs, action):
    """alpha(a,b,c) = a * floor((b+c)/n) on Z_n with Z_n coefficients.

    This is the standard carry representative generating H^3(Z_n; Z_n)
    for the trivial action; it is normalized.
    """
    n = group.order
    if coeffs.order != n:
        raise GroupError("carry cocycle needs |A| = |G|")
    table = [[[(a * ((b + c) // n)) % n for c in range(n)] for b in range(n)] for a in range(n)]
    return Cocycle3(group, coeffs, action, table)


def make_two_group(g, a, action=None, alpha=None, name=None):
    if action is None:
        action = trivial_action(g, a)
    if alpha is None:
        alpha = trivial_cocycle(g, a, action)
    return TwoGroup(g, a, action, alpha, name=name)


def two_group_z2():
    """The 1-group Z2 viewed as a 2-group (A trivial)."""
    return make_two_group(cyclic_group(2), trivial_abelian(), name="Z2")


def two_group_bz2():
    """G trivial, A = Z2."""
    return make_two_group(trivial_group(), cyclic_abelian(2), name="BZ2")


def two_group_z2z2(nontrivial_alpha=False):
    """G = A = Z2 with trivial action; alpha trivial or the cube class."""
    g = cyclic_group(2)
    a = cyclic_abelian(2)
    action = trivial_action(g, a)
    alpha = cube_cocycle_z2(g, a, action) if nontrivial_alpha else trivial_cocycle(g, a, action)
    name = "Z2xZ2[alpha]" if nontrivial_alpha else "Z2xZ2"
    return TwoGroup(g, a, action, alpha, name=name)


def shipped_two_groups():
    """Named 2-group tables shipped with the package (|G|, |A| <= 4)."""
    registry = {}

    def add(name, builder):
        registry[name] = builder

    add("trivial", lambda: make_two_group(trivial_group(), trivial_abelian(), name="trivial"))
    add("Z2", two_group_z2)
    add("BZ2", two_group_bz2)
    add("Z3", lambda: make_two_group(cyclic_group(3), trivial_abelian(), name="Z3"))
    add("BZ3", lambda: make_two_group(trivial_group(), cyclic_abelian(3), name="BZ3"))
    add("BZ4", lambda: make_two_group(trivial_group(), cyclic_abelian(4), name="BZ4"))
    add("Z2xZ2", lambda: two_group_z2z2(False))
    add("Z2xZ2[alpha]", lambda: two_group_z2z2(True))

    def z2_on_z3():
        g = cyclic_group(2)
        a = cyclic_abelian(3)
        return make_two_group(g, a, action=inversion_action(g, a), name="Z2|>Z3")

    add("Z2|>Z3", z2_on_z3)

    def z2_on_z4():
        g = cyclic_group(2)
        a = cyclic_abelian(4)
        return make_two_group(g, a, action=inversion_action(g, a), name="Z2|>Z4")

    add("Z2|>Z4", z2_on_z4)

    def z3_carry():
        g = cyclic_group(3)
        a = cyclic_abelian(3)
        act = trivial_action(g, a)
        return TwoGroup(g, a, act, carry_cocycle(g, a, act), name="Z3xZ3[carry]")

    add("Z3xZ3[carry]", z3_carry)

    def z4_carry():
        g = cyclic_group(4)
        a = cyclic_abelian(4)
        act = trivial_action(g, a)
        return TwoGroup(g, a, act, carry_cocycle(g, a, act), name="Z4xZ4[carry]")

    add("Z4xZ4[carry]", z4_carry)

    def z2z2_coeff():
        g = cyclic_group(2)
        a = product_abelian(cyclic_abelian(2), cyclic_abelian(2))
        return make_two_group(g, a, name="Z2x(Z2.Z2)")

    add("Z2x(Z2.Z2)", z2z2_coeff)
    return registry


# ---------------------------------------------------------------------------
# JSON interchange

def group_to_json(group):
    return {"order": group.order, "mul": group.mul_table, "names": group.names}


def group_from_json(data, abelian=False):
    cls = AbelianGroup if abelian else FiniteGroup
    return cls(data["mul"], names=data.get("names"))


def two_group_to_json(tg):
    alpha_entries = {}
    G, A = tg.g, tg.a
    for g in range(G.order):
        for h in range(G.order):
            for k in range(G.order):
                v = tg.alpha(g, h, k)
                if v != 0:
                    key = "%s,%s,%s" % (G.names[g], G.names[h], G.names[k])
                    alpha_entries[key] = A.names[v]
    return {
        "G": group_to_json(G),
        "A": group_to_json(A),
        "action": tg.action.table,
        "alpha": alpha_entries,
    }


def two_group_from_json(data, validate=True):
    g = group_from_json(data["G"])
    a = group_from_json(data["A"], abelian=True)
    n = g.order
    action_table = data.get("action")
    if action_table is None:
        action_table = [list(range(a.order)) for _ in range(n)]
    action = GAction(g, a, action_table, validate=validate)
    alpha_table = [[[0] * n for _ in range(n)] for _ in range(n)]
    for key, value in data.get("alpha", {}).items():
        gn, hn, kn = key.split(",")
        alpha_table[g.index(gn)][g.index(hn)][g.index(kn)] = a.index(value)
    alpha = Cocycle3(g, a, action, alpha_table, validate=validate)
    return TwoGroup(g, a, action, alpha, validate=validate)
