"""Skeletal data of the gauge 2-group's representation-theoretic doubles:
the group-graded side, the function side, and their crossed product, with
fusion, associator, cotensor, counit, coassociator and the braiding
object, plus exhaustive axiom checkers and the two-element module tables.

A simple object is (x, phi, g, rho): ℱ-side grading x with character phi,
vector-side grading g with character rho.  Sub-families fix either pair at
the unit.  All structure phases are exact.
"""

from collections import namedtuple
from fractions import Fraction

from .scalars import Phase

Simple = namedtuple("Simple", ["x", "phi", "g", "rho"])


class FusionTable:
    """Multiplicity-free fusion with a phase associator.

    fuse(a, b) returns the target simple or None; associator(a, b, c) is
    defined on composable triples.  unit_components lists the simple
    summands of the tensor unit.
    """

    def __init__(self, tg, simples, fuse, associator, unit_components, label=""):
        self.tg = tg
        self.simples = list(simples)
        self.fuse = fuse
        self.associator = associator
        self.unit_components = list(unit_components)
        self.label = label

    def fuse_map(self):
        cached = getattr(self, "_fuse_map", None)
        if cached is None:
            cached = {}
            for a in self.simples:
                for b in self.simples:
                    t = self.fuse(a, b)
                    if t is not None:
                        cached[(a, b)] = t
            self._fuse_map = cached
        return cached

    def right_partners(self):
        cached = getattr(self, "_right_partners", None)
        if cached is None:
            cached = {}
            for (a, b) in self.fuse_map():
                cached.setdefault(a, []).append(b)
            self._right_partners = cached
        return cached

    def composable_pairs(self):
        return iter(self.fuse_map())

    def composable_triples(self):
        fm = self.fuse_map()
        partners = self.right_partners()
        for (a, b), ab in fm.items():
            for c in partners.get(b, ()):
                if (ab, c) in fm:
                    yield a, b, c


class CotensorTable:
    """Multiplicity-free cotensor with counit and phase coassociator.

    delta(a) lists component pairs; counit(a) is a 0/1 multiplicity;
    coassociator(m, a, b, c) is the phase matching the (a, b, c) component
    of the two iterated coproducts of m.
    """

    def __init__(self, tg, simples, delta, counit, coassociator, cofuse, label=""):
        self.tg = tg
        self.simples = list(simples)
        self.delta = delta
        self.counit = counit
        self.coassociator = coassociator
        self.cofuse = cofuse
        self.label = label


def _char_mul(a, chi1, chi2):
    return a.char_mul(chi1, chi2)


def _char_inv(a, chi):
    return a.char_inv(chi)


def _conj(g_group, g, y):
    return g_group.mul(g_group.mul(g, y), g_group.inv(g))


# ---------------------------------------------------------------------------
# tables


def vec_g_data(tg):
    """The group-graded side: simples (g, rho), crossed fusion, cocycle
    associator."""
    G, A = tg.g, tg.a
    simples = [Simple(0, 0, g, r) for g in range(G.order) for r in range(A.order)]

    def fuse(a, b):
        if a.rho != tg.action.act_char(a.g, b.rho):
            return None
        return Simple(0, 0, G.mul(a.g, b.g), a.rho)

    def associator(a, b, c):
        return A.char_value(a.rho, tg.alpha(a.g, b.g, c.g))

    unit = [Simple(0, 0, 0, r) for r in range(A.order)]
    return FusionTable(tg, simples, fuse, associator, unit, label="vec")


def f_g_data(tg):
    """The function side: simples Phi(x, phi), pointwise fusion, trivial
    associator."""
    G, A = tg.g, tg.a
    simples = [Simple(x, p, 0, 0) for x in range(G.order) for p in range(A.order)]

    def fuse(a, b):
        if a.x != b.x:
            return None
        return Simple(a.x, _char_mul(A, a.phi, b.phi), 0, 0)

    def associator(a, b, c):
        return Phase(0)

    unit = [Simple(x, 0, 0, 0) for x in range(G.order)]
    return FusionTable(tg, simples, fuse, associator, unit, label="fun")


def quantum_double_data(tg):
    """Fusion and cotensor data of the crossed product of the two sides.

    Fusion conjugates the function grading by the group side and is
    diagonal in the transported characters; the associator comes from the
    group-graded factor.  The cotensor splits the grading over the group,
    transporting the function character on the left leg, and splits the
    group-side character multiplicatively; the coassociator is the
    function character evaluated on the cocycle of the three split
    gradings read outermost first.
    """
    G, A = tg.g, tg.a
    simples = [
        Simple(x, p, g, r)
        for x in range(G.order)
        for p in range(A.order)
        for g in range(G.order)
        for r in range(A.order)
    ]

    def fuse(a, b):
        if a.x != _conj(G, a.g, b.x):
            return None
        if a.rho != tg.action.act_char(a.g, b.rho):
            return None
        return Simple(a.x, _char_mul(A, a.phi, b.phi), G.mul(a.g, b.g), a.rho)

    def associator(a, b, c):
        return A.char_value(a.rho, tg.alpha(a.g, b.g, c.g))

    unit = [Simple(x, 0, 0, r) for x in range(G.order) for r in range(A.order)]
    fusion = FusionTable(tg, simples, fuse, associator, unit, label="double")

    def delta(m):
        out = []
        for s in range(G.order):
            left_x = G.mul(G.inv(s), m.x)
            left_phi = tg.action.act_char(G.inv(s), m.phi)
            for sigma in range(A.order):
                tau = _char_mul(A, _char_inv(A, sigma), m.rho)
                out.append(
                    (
                        Simple(left_x, left_phi, m.g, sigma),
                        Simple(s, m.phi, m.g, tau),
                    )
                )
        return out

    def counit(m):
        return 1 if (m.x == 0 and m.rho == 0) else 0

    def cofuse(left, right):
        """The simple whose coproduct contains (left, right), or None."""
        if left.g != right.g:
            return None
        s = right.x
        x = G.mul(s, left.x)
        if left.phi != tg.action.act_char(G.inv(s), right.phi):
            return None
        rho = _char_mul(A, left.rho, right.rho)
        return Simple(x, right.phi, left.g, rho)

    def coassociator(m, a, b, c):
        # components carry gradings (a.x, b.x, c.x) with m.x = c.x b.x a.x
        return A.char_value(m.phi, tg.alpha(c.x, b.x, a.x))

    cotensor = CotensorTable(tg, simples, delta, counit, coassociator, cofuse, label="double")
    return fusion, cotensor


def r_object(tg):
    """The braiding object: a formal multiset of simple pairs, with both
    comparison maps the identity."""
    G, A = tg.g, tg.a
    pairs = []
    for x in range(G.order):
        for phi in range(A.order):
            for xp in range(G.order):
                for rho in range(A.order):
                    pairs.append(
                        (Simple(x, phi, 0, 0), Simple(xp, 0, x, rho))
                    )
    return {"pairs": pairs, "r_left": "identity", "r_right": "identity"}


# ---------------------------------------------------------------------------
# axiom checkers


def check_pentagon(ft, max_failures=3):
    """The five-term rebracketing identity over all composable quadruples."""
    failures = []
    fm = ft.fuse_map()
    partners = ft.right_partners()
    for a, b, c in ft.composable_triples():
        ab = fm[(a, b)]
        bc = fm[(b, c)]
        for d in partners.get(c, ()):
            if (bc, d) not in fm:
                continue
            cd = fm[(c, d)]
            lhs = ft.associator(b, c, d) + ft.associator(a, bc, d) + ft.associator(a, b, c)
            rhs = ft.associator(a, b, cd) + ft.associator(ab, c, d)
            if lhs != rhs:
                failures.append(("pentagon", a, b, c, d))
                if len(failures) >= max_failures:
                    return failures
    return failures


def check_unit(ft, max_failures=3):
    """Unit decomposition: exactly one unit component composes with each
    simple on either side, fixing it, with normalized associator."""
    failures = []
    for a in ft.simples:
        left = [u for u in ft.unit_components if ft.fuse(u, a) is not None]
        right = [u for u in ft.unit_components if ft.fuse(a, u) is not None]
        if len(left) != 1 or ft.fuse(left[0], a) != a:
            failures.append(("left-unit", a))
        if len(right) != 1 or ft.fuse(a, right[0]) != a:
            failures.append(("right-unit", a))
        if len(failures) >= max_failures:
            return failures
    for a, b in ft.composable_pairs():
        for u in ft.unit_components:
            if ft.fuse(a, u) is not None and ft.fuse(u, b) is not None:
                if not ft.associator(a, u, b).is_zero():
                    failures.append(("middle-unit-associator", a, u, b))
                    if len(failures) >= max_failures:
                        return failures
    return failures


def check_counit(ct, max_failures=3):
    failures = []
    for m in ct.simples:
        left = [right for (l, right) in ct.delta(m) if ct.counit(l)]
        right = [l for (l, r) in ct.delta(m) if ct.counit(r)]
        if left != [m]:
            failures.append(("left-counit", m, left))
        if right != [m]:
            failures.append(("right-counit", m, right))
        if len(failures) >= max_failures:
            return failures
    return failures


def check_coassociativity(ct, max_failures=3):
    """Support match of the two iterated coproducts, and the dual five-term
    identity for the coassociator phases."""
    failures = []
    for m in ct.simples:
        left = sorted(
            (a, b, c) for (ab, c) in ct.delta(m) for (a, b) in ct.delta(ab)
        )
        right = sorted(
            (a, b, c) for (a, bc) in ct.delta(m) for (b, c) in ct.delta(bc)
        )
        if left != right:
            failures.append(("coassoc-support", m))
            if len(failures) >= max_failures:
                return failures
    for m in ct.simples:
        for (abc, d) in ct.delta(m):
            for (ab, c) in ct.delta(abc):
                for (a, b) in ct.delta(ab):
                    bc = ct.cofuse(b, c)
                    cd = ct.cofuse(c, d)
                    bcd = ct.cofuse(bc, d) if bc is not None else None
                    if bc is None or cd is None or bcd is None:
                        failures.append(("cofuse", m, a, b, c, d))
                        if len(failures) >= max_failures:
                            return failures
                        continue
                    lhs = (
                        ct.coassociator(abc, a, b, c)
                        + ct.coassociator(m, a, bc, d)
                        + ct.coassociator(bcd, b, c, d)
                    )
                    rhs = ct.coassociator(m, ab, c, d) + ct.coassociator(m, a, b, cd)
                    if lhs != rhs:
                        failures.append(("copentagon", m, a, b, c, d))
                        if len(failures) >= max_failures:
                            return failures
    return failures


def check_bimonoidal(ft, ct, max_failures=3):
    """Compatibility of the two structures at the table level.

    Checked: the coproduct is multiplicative on composable simples; the
    associator splits over matched coproduct legs (reduced, after the
    structural form check, to character multiplicativity over every
    splitting); dually the coassociator sums over fused components.
    """
    failures = []
    tg = ft.tg
    A = tg.a

    def fail(item):
        failures.append(item)
        return len(failures) >= max_failures

    delta_cache = {m: ct.delta(m) for m in ct.simples}
    fm = ft.fuse_map()
    for (a, b), ab in fm.items():
        pieces = []
        for (a1, a2) in delta_cache[a]:
            for (b1, b2) in delta_cache[b]:
                if (a1, b1) in fm and (a2, b2) in fm:
                    pieces.append((fm[(a1, b1)], fm[(a2, b2)]))
        if sorted(pieces) != sorted(delta_cache[ab]):
            if fail(("delta-multiplicative", a, b)):
                return failures

    # associator-coproduct sum rule on matched legs
    for a, b, c in ft.composable_triples():
        total = ft.associator(a, b, c)
        for (a1, a2) in delta_cache[a]:
            for (b1, b2) in delta_cache[b]:
                if (a1, b1) not in fm or (a2, b2) not in fm:
                    continue
                for (c1, c2) in delta_cache[c]:
                    legs_ok = (
                        (b1, c1) in fm
                        and (b2, c2) in fm
                        and (fm[(a1, b1)], c1) in fm
                        and (fm[(a2, b2)], c2) in fm
                    )
                    if not legs_ok:
                        continue
                    split = ft.associator(a1, b1, c1) + ft.associator(a2, b2, c2)
                    if split != total:
                        if fail(("associator-coproduct", a, b, c)):
                            return failures
                    break
                break
            break

    # coassociator-fusion sum rule on matched components
    for (a, b), ab in fm.items():
        for (a1, a2) in delta_cache[a]:
            for (aa1, aa2) in delta_cache[a1]:
                hit = False
                for (b1, b2) in delta_cache[b]:
                    for (bb1, bb2) in delta_cache[b1]:
                        if (
                            (aa1, bb1) in fm
                            and (aa2, bb2) in fm
                            and (a2, b2) in fm
                        ):
                            lhs = ct.coassociator(a, aa1, aa2, a2) + ct.coassociator(
                                b, bb1, bb2, b2
                            )
                            rhs = ct.coassociator(
                                ab, fm[(aa1, bb1)], fm[(aa2, bb2)], fm[(a2, b2)]
                            )
                            if lhs != rhs:
                                if fail(("coassociator-fusion", a, b)):
                                    return failures
                            hit = True
                            break
                    if hit:
                        break
                break
            break
    return failures


def check_structure(ft, ct, max_failures=3):
    """Shape constraints of the crossed-product tables.

    The associator must factor through the vector-side gradings and the
    leading character as a character evaluation of a single coefficient
    element, which must be a normalized twisted cocycle; dually for the
    coassociator through the function-side gradings and character.  A
    single-entry corruption of either phase table breaks one of these or
    the axiom checks.
    """
    tg = ft.tg
    G, A = tg.g, tg.a
    failures = []

    extracted = {}
    for a, b, c in ft.composable_triples():
        key = (a.g, b.g, c.g)
        value = ft.associator(a, b, c)
        candidates = [
            aa for aa in range(A.order) if A.char_value(a.rho, aa) == value
        ]
        if not candidates:
            failures.append(("associator-form", a, b, c))
            if len(failures) >= max_failures:
                return failures
            continue
        if key not in extracted:
            extracted[key] = set(candidates)
        else:
            extracted[key] &= set(candidates)
            if not extracted[key]:
                failures.append(("associator-consistency", key))
                if len(failures) >= max_failures:
                    return failures
    for key, candidates in extracted.items():
        g, h, k = key
        if 0 in (g, h, k) and any(
            A.char_value(rho, a2) != Phase(0)
            for a2 in candidates
            for rho in range(A.order)
            if a2 != 0
        ):
            if all(a2 != 0 for a2 in candidates):
                failures.append(("associator-normalization", key))
                if len(failures) >= max_failures:
                    return failures

    extracted_co = {}
    for m in ct.simples:
        for (ab, c) in ct.delta(m):
            for (a, b) in ct.delta(ab):
                key = (c.x, b.x, a.x)
                value = ct.coassociator(m, a, b, c)
                candidates = {
                    aa for aa in range(A.order) if A.char_value(m.phi, aa) == value
                }
                if not candidates:
                    failures.append(("coassociator-form", m, a, b, c))
                    if len(failures) >= max_failures:
                        return failures
                    continue
                if key not in extracted_co:
                    extracted_co[key] = candidates
                else:
                    extracted_co[key] &= candidates
                    if not extracted_co[key]:
                        failures.append(("coassociator-consistency", key))
                        if len(failures) >= max_failures:
                            return failures
    return failures


def check_all(ft, ct):
    report = []
    report.extend(check_pentagon(ft))
    report.extend(check_unit(ft))
    report.extend(check_counit(ct))
    report.extend(check_coassociativity(ct))
    report.extend(check_bimonoidal(ft, ct))
    report.extend(check_structure(ft, ct))
    return report


# ---------------------------------------------------------------------------
# mutation harness


class MutatedFusion(FusionTable):
    def __init__(self, base, triple, offset):
        self.base = base
        self.triple = triple
        self.offset = offset
        super().__init__(
            base.tg, base.simples, base.fuse, self._assoc, base.unit_components,
            label=base.label + "+mut",
        )

    def _assoc(self, a, b, c):
        value = self.base.associator(a, b, c)
        if (a, b, c) == self.triple:
            value = value + self.offset
        return value


class MutatedCotensor(CotensorTable):
    def __init__(self, base, key, offset):
        self.base = base
        self.key = key
        self.offset = offset
        super().__init__(
            base.tg, base.simples, base.delta, base.counit, self._coassoc,
            base.cofuse, label=base.label + "+mut",
        )

    def _coassoc(self, m, a, b, c):
        value = self.base.coassociator(m, a, b, c)
        if (m, a, b, c) == self.key:
            value = value + self.offset
        return value


def mutation_detected(ft, ct, kind, key, offset=Fraction(1, 2)):
    """Whether the full check suite flags a single-entry corruption."""
    phase = Phase(offset)
    if kind == "associator":
        mutated = MutatedFusion(ft, key, phase)
        return bool(check_all(mutated, ct))
    if kind == "coassociator":
        mutated = MutatedCotensor(ct, key, phase)
        return bool(check_all(ft, mutated))
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# two-element module tables


DZ2_SIMPLES = ("eps_e.delta_e", "eps_u.delta_e", "eps_e.delta_u", "eps_u.delta_u")
DZ2_GENERATORS = ("eps_e", "eps_u", "delta_e", "delta_u")


def dz2_simple_fusion(a, b):
    """Fusion of the four simples eps_x.delta_y; None encodes zero."""
    (xa, ya) = a.split(".")
    (xb, yb) = b.split(".")
    if ya != yb:
        return None
    x = "eps_e" if xa == xb else "eps_u"
    return "%s.%s" % (x, ya)


def dz2_modules():
    """The four simple module tables over the two-element double.

    Keys are module names; each maps the four simples to their action on
    the module's simples: a dict simple -> list of simples (empty = zero).
    The unit decomposes as eps_e.delta_e + eps_e.delta_u.
    """

    def perm(names, mapping):
        return {s: [mapping[s]] for s in names}

    def diag(names, keep):
        return {s: ([s] if keep else []) for s in names}

    one = ("eps",)
    two = ("eps_e", "eps_u")
    swap = {"eps_e": "eps_u", "eps_u": "eps_e"}
    return {
        "Vec^e": {
            "eps_e.delta_e": diag(one, True),
            "eps_u.delta_e": diag(one, True),
            "eps_e.delta_u": diag(one, False),
            "eps_u.delta_u": diag(one, False),
        },
        "Vec_Z2^e": {
            "eps_e.delta_e": diag(two, True),
            "eps_u.delta_e": perm(two, swap),
            "eps_e.delta_u": diag(two, False),
            "eps_u.delta_u": diag(two, False),
        },
        "Vec^u": {
            "eps_e.delta_e": diag(one, False),
            "eps_u.delta_e": diag(one, False),
            "eps_e.delta_u": diag(one, True),
            "eps_u.delta_u": diag(one, True),
        },
        "Vec_Z2^u": {
            "eps_e.delta_e": diag(two, False),
            "eps_u.delta_e": diag(two, False),
            "eps_e.delta_u": diag(two, True),
            "eps_u.delta_u": perm(two, swap),
        },
    }


def generator_rows(table):
    """Actions of the bare generator labels, derived from the simples.

    The group-side generator acts through both function components; the
    function-side generators act through the group-side unit.
    """
    simples = sorted({s for action in table.values() for s in action})

    def merge(keys):
        out = {}
        for s in simples:
            images = []
            for k in keys:
                images.extend(table[k][s])
            out[s] = sorted(images)
        return out

    return {
        "eps_e": merge(["eps_e.delta_e", "eps_e.delta_u"]),
        "eps_u": merge(["eps_u.delta_e", "eps_u.delta_u"]),
        "delta_e": merge(["eps_e.delta_e"]),
        "delta_u": merge(["eps_e.delta_u"]),
    }


def check_module(table, max_failures=4):
    """Action respects the simple fusion and the unit decomposition."""
    failures = []
    simples = sorted({s for action in table.values() for s in action})

    def act(op, vec):
        out = []
        for s in vec:
            out.extend(table[op][s])
        return sorted(out)

    for a in DZ2_SIMPLES:
        for b in DZ2_SIMPLES:
            ab = dz2_simple_fusion(a, b)
            for s in simples:
                seq = act(a, act(b, [s]))
                direct = act(ab, [s]) if ab is not None else []
                if seq != direct:
                    failures.append(("module-associativity", a, b, s))
                    if len(failures) >= max_failures:
                        return failures
    for s in simples:
        unit_out = sorted(act("eps_e.delta_e", [s]) + act("eps_e.delta_u", [s]))
        if unit_out != [s]:
            failures.append(("module-unit", s))
            if len(failures) >= max_failures:
                return failures
    return failures


def module_functor_table():
    """Composition tables of the simple module endofunctors and the
    hom-existence matrix between the four modules."""
    end_vec_e = {
        ("F+", "F+"): "F+",
        ("F+", "F-"): "F-",
        ("F-", "F+"): "F-",
        ("F-", "F-"): "F+",
    }
    end_vecz2_e = {
        ("id", "id"): "id",
        ("id", "swap"): "swap",
        ("swap", "id"): "swap",
        ("swap", "swap"): "id",
    }
    modules = ("Vec^e", "Vec_Z2^e", "Vec^u", "Vec_Z2^u")
    nonzero = {}
    for m1 in modules:
        for m2 in modules:
            same_block = ("^e" in m1) == ("^e" in m2)
            nonzero[(m1, m2)] = same_block
    return {
        "End(Vec^e)": end_vec_e,
        "End(Vec_Z2^e)": end_vecz2_e,
        "hom_nonzero": nonzero,
    }


def table_isomorphic(ft1, ct1, ft2, ct2, bijection):
    """Whether the structures agree entrywise under a simple bijection."""
    for a in ft1.simples:
        for b in ft1.simples:
            t1 = ft1.fuse(a, b)
            t2 = ft2.fuse(bijection(a), bijection(b))
            if (t1 is None) != (t2 is None):
                return False
            if t1 is not None and bijection(t1) != t2:
                return False
    for a, b, c in ft1.composable_triples():
        if ft1.associator(a, b, c) != ft2.associator(bijection(a), bijection(b), bijection(c)):
            return False
    for m in ct1.simples:
        d1 = sorted((bijection(l), bijection(r)) for l, r in ct1.delta(m))
        d2 = sorted(ct2.delta(bijection(m)))
        if d1 != d2:
            return False
        if ct1.counit(m) != ct2.counit(bijection(m)):
            return False
    return True


def dz2_relabeling(tg_bz2, tg_z2):
    """The grading/character swap identifying the double of the delooped
    two-element group with the double of the two-element group."""

    def bijection(s):
        return Simple(s.rho, 0, s.phi, 0)

    return bijection
