"""The 3+1D commuting-projector model on a triangulated 3-complex.

Basis states are all connections on the spatial complex (edge labels in G,
triangle labels in A), ordered lexicographically.  Operators are held as
closures mapping a basis state to a sparse combination of basis states
with exact coefficients; they are materialized to matrices only inside
check harnesses.  The heavy exhaustive checks at dimension |G|^E * |A|^T
run through the vectorized two-element kernel in bitops.
"""

from fractions import Fraction

from .connections import (
    Connection,
    GaugeTransformation,
    apply_gauge,
    compose_gauge,
    enumerate_flat,
    gauge_classes,
    is_equivalence,
    simple_gauge_1,
    two_flat_defect,
)
from .scalars import Phase, Scalar


class ModelError(ValueError):
    pass


class ModelSpace:
    """State space of the model on a closed 3-complex."""

    def __init__(self, tg, sigma):
        if sigma.dim != 3:
            raise ModelError("the model lives on a 3-complex")
        self.tg = tg
        self.sigma = sigma
        self.edges = sigma.simplices(1)
        self.triangles = sigma.simplices(2)
        self.tets = sigma.simplices(3)
        self.vertices = sigma.vertices
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.tri_index = {p: i for i, p in enumerate(self.triangles)}

    @property
    def dimension(self):
        return self.tg.g.order ** len(self.edges) * self.tg.a.order ** len(self.triangles)

    def state_of(self, tau):
        """Basis state tuple (edge labels..., triangle labels...)."""
        return tuple(tau.tau1[e] for e in self.edges) + tuple(
            tau.tau2[p] for p in self.triangles
        )

    def connection_of(self, state):
        ne = len(self.edges)
        return Connection(
            dict(zip(self.edges, state[:ne])), dict(zip(self.triangles, state[ne:]))
        )

    def all_states(self):
        import itertools

        ne, nt = len(self.edges), len(self.triangles)
        for gv in itertools.product(range(self.tg.g.order), repeat=ne):
            for av in itertools.product(range(self.tg.a.order), repeat=nt):
                yield gv + av

    def flat_states(self):
        for tau in enumerate_flat(self.tg, self.sigma):
            yield self.state_of(tau)


class LocalOperator:
    """Sparse operator given by a basis-state action closure."""

    def __init__(self, space, fn, label=""):
        self.space = space
        self.fn = fn
        self.label = label

    def __call__(self, state):
        """dict {state: coefficient}; coefficients Fraction or Scalar."""
        return self.fn(state)

    def apply_vector(self, vec):
        out = {}
        for state, coeff in vec.items():
            for target, value in self.fn(state).items():
                cur = out.get(target)
                total = _vadd(cur, _vmul(value, coeff)) if cur is not None else _vmul(value, coeff)
                if _vzero(total):
                    out.pop(target, None)
                else:
                    out[target] = total
        return out

    def compose(self, other):
        """self after other."""

        def fn(state):
            return self.apply_vector(other.fn(state))

        return LocalOperator(self.space, fn, "%s*%s" % (self.label, other.label))

    def materialize(self, states=None):
        """Columns over the given (default: all) basis states."""
        if states is None:
            states = list(self.space.all_states())
        return {s: self.fn(s) for s in states}


def _vadd(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _lift(a) + _lift(b)


def _vmul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return _lift(a) * _lift(b)


def _vzero(v):
    return v == 0 if isinstance(v, Fraction) else v.is_zero()


def _lift(v):
    return v if isinstance(v, Scalar) else Scalar.rational(v)


def _veq(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return _lift(a) == _lift(b)


def vectors_equal(u, v):
    for key in set(u) | set(v):
        if not _veq(u.get(key, Fraction(0)), v.get(key, Fraction(0))):
            return False
    return True


# ---------------------------------------------------------------------------
# local operator builders


def build_D_t(space, t):
    """Projector onto square-law-satisfying labels of one tetrahedron."""
    tg = space.tg

    def fn(state):
        tau = space.connection_of(state)
        return {state: Fraction(1)} if two_flat_defect(tg, tau, t) == 0 else {}

    return LocalOperator(space, fn, "D[%s]" % (t,))


def build_Dphi_t(space, t, phi):
    """Character-weighted diagonal on the square-law defect of t."""
    tg = space.tg

    def fn(state):
        tau = space.connection_of(state)
        value = tg.a.char_value(phi, two_flat_defect(tg, tau, t))
        if value.is_zero():
            return {state: Fraction(1)}
        return {state: Scalar.from_phase(value)}

    return LocalOperator(space, fn, "D%d[%s]" % (phi, t))


def holonomy(space, tau, v, p):
    """Edge-composition defect of the triangle p based at its vertex v."""
    G = space.tg.g
    p0, p1, p2 = p
    a, b, c = tau.tau1[(p1, p2)], tau.tau1[(p0, p1)], tau.tau1[(p0, p2)]
    if v == p0:
        return G.mul(G.inv(c), G.mul(a, b))
    if v == p1:
        return G.mul(b, G.mul(G.inv(c), a))
    if v == p2:
        return G.mul(a, G.mul(b, G.inv(c)))
    raise ModelError("vertex %r is not on triangle %r" % (v, p))


def build_B_p(space, p):
    """Projector onto edge-composition-satisfying labels of one triangle."""

    def fn(state):
        tau = space.connection_of(state)
        return {state: Fraction(1)} if holonomy(space, tau, p[0], p) == 0 else {}

    return LocalOperator(space, fn, "B[%s]" % (p,))


def build_Bx_vp(space, v, p, x):
    """Projector onto holonomy value x at the based triangle (v, p)."""

    def fn(state):
        tau = space.connection_of(state)
        return {state: Fraction(1)} if holonomy(space, tau, v, p) == x else {}

    return LocalOperator(space, fn, "B%d[%s@%s]" % (x, p, v))


def build_Ca_e(space, e, a):
    """The one-edge label shift: the basis permutation of the simple
    edge-supported transformation."""
    tg = space.tg
    e = tuple(e)

    def fn(state):
        tau = space.connection_of(state)
        phi = _simple_phi1(space, e, a)
        target = apply_gauge(tg, space.sigma, tau, _zero_phi0(space), phi)
        return {space.state_of(target): Fraction(1)}

    return LocalOperator(space, fn, "C%d[%s]" % (a, e))


def _zero_phi0(space):
    return {v: 0 for v in space.vertices}


def _simple_phi1(space, e, a):
    phi1 = {f: 0 for f in space.edges}
    phi1[e] = a
    return phi1


def build_Ce(space, e):
    """Average of the one-edge shifts: a projector."""
    tg = space.tg
    ops = [build_Ca_e(space, e, a) for a in range(tg.a.order)]
    norm = Fraction(1, tg.a.order)

    def fn(state):
        out = {}
        for op in ops:
            for target, value in op.fn(state).items():
                out[target] = out.get(target, Fraction(0)) + value * norm
        return out

    return LocalOperator(space, fn, "C[%s]" % (e,))


def build_Crho_e(space, e, rho):
    """Character-weighted average of one-edge shifts."""
    tg = space.tg
    norm = Fraction(1, tg.a.order)

    def fn(state):
        tau = space.connection_of(state)
        out = {}
        for a in range(tg.a.order):
            weight = Scalar.from_phase(-tg.a.char_value(rho, a), norm)
            target = space.state_of(
                apply_gauge(tg, space.sigma, tau, _zero_phi0(space), _simple_phi1(space, e, a))
            )
            cur = out.get(target)
            out[target] = weight if cur is None else _vadd(cur, weight)
        return {k: v for k, v in out.items() if not _vzero(v)}

    return LocalOperator(space, fn, "C(rho%d)[%s]" % (rho, e))


def build_Atilde_g_v(space, v, g):
    """The one-vertex gauge permutation."""
    tg = space.tg

    def fn(state):
        tau = space.connection_of(state)
        phi = simple_gauge_1(tg, space.sigma, tau, g, v)
        return {space.state_of(phi.target(tg, space.sigma)): Fraction(1)}

    return LocalOperator(space, fn, "At%d[%s]" % (g, v))


def build_Ag_v(space, v, g):
    """One-vertex gauge permutation dressed by the incident edge averages.

    With a nontrivial cocycle the bare product fails to commute between
    vertices off the edge-law sector (the cocycle corrections of composed
    transformations are covariant only modulo the edge composition law),
    so the incident triangle projectors are included; this matches the
    operator obtained by evaluating the lattice functor on the star of the
    vertex, which annihilates locally non-flat states.  For a trivial
    cocycle the corrections vanish identically and the bare product is
    kept, preserving the spin-model form of the operators.
    """
    tilde = build_Atilde_g_v(space, v, g)
    ce_ops = [build_Ce(space, e) for e in space.edges if v in e]
    op = tilde
    for ce in ce_ops:
        op = op.compose(ce)
    if not space.tg.alpha_is_trivial():
        bp_ops = [build_B_p(space, p) for p in space.triangles if v in p]
        for bp in bp_ops:
            op = op.compose(bp)
    return LocalOperator(space, op.fn, "A%d[%s]" % (g, v))


def build_Av(space, v):
    """The vertex projector: group average of the dressed permutations."""
    tg = space.tg
    ops = [build_Ag_v(space, v, g) for g in range(tg.g.order)]
    norm = Fraction(1, tg.g.order)

    def fn(state):
        out = {}
        for op in ops:
            for target, value in op.fn(state).items():
                cur = out.get(target, Fraction(0))
                total = _vadd(cur, _vmul(value, norm))
                if _vzero(total):
                    out.pop(target, None)
                else:
                    out[target] = total
        return out

    return LocalOperator(space, fn, "A[%s]" % (v,))


def stabilizer_families(space):
    """The four operator families of the Hamiltonian, labeled."""
    ops = {}
    for v in space.vertices:
        ops[("A", v)] = build_Av(space, v)
    for p in space.triangles:
        ops[("B", p)] = build_B_p(space, p)
    for e in space.edges:
        ops[("C", e)] = build_Ce(space, e)
    for t in space.tets:
        ops[("D", t)] = build_D_t(space, t)
    return ops


def hamiltonian(space):
    """Minus the sum of all four projector families."""
    families = stabilizer_families(space)

    def fn(state):
        out = {}
        for op in families.values():
            for target, value in op.fn(state).items():
                cur = out.get(target, Fraction(0))
                total = _vadd(cur, _vmul(value, Fraction(-1)))
                if _vzero(total):
                    out.pop(target, None)
                else:
                    out[target] = total
        return out

    return LocalOperator(space, fn, "H")


def ground_projector(space):
    """Product of the vertex, triangle and tetrahedron projectors."""
    families = stabilizer_families(space)

    def fn(state):
        tau = space.connection_of(state)
        for t in space.tets:
            if two_flat_defect(space.tg, tau, t) != 0:
                return {}
        for p in space.triangles:
            if holonomy(space, tau, p[0], p) != 0:
                return {}
        vec = {state: Fraction(1)}
        for v in space.vertices:
            vec = families[("A", v)].apply_vector(vec)
        return vec

    return LocalOperator(space, fn, "P")


def gsd_closure(space):
    """Trace of the ground projector over the flat basis, exactly."""
    p = ground_projector(space)
    total = Fraction(0)
    for state in space.flat_states():
        out = p.fn(state)
        value = out.get(state, Fraction(0))
        total = _vadd(total, value)
    total = _lift(total)
    rational = total.as_rational()
    if rational.denominator != 1:
        raise ModelError("projector trace %s is not an integer" % rational)
    return int(rational)


def gsd(space):
    """Ground-space dimension; uses the two-element kernel when it applies."""
    from . import bitops

    if bitops.eligible(space.tg):
        return bitops.BitKernel(space).gsd()
    return gsd_closure(space)


def commuting_check(space, use_bitops=True):
    """Exhaustive pairwise commutation and idempotency report.

    Dispatches to the vectorized kernel for two-element label groups;
    falls back to closure-materialized checks otherwise (desk scale only).
    """
    from . import bitops

    if use_bitops and bitops.eligible(space.tg):
        return bitops.BitKernel(space).commuting_check()
    return commuting_check_closure(space)


def commuting_check_closure(space, states=None):
    """Pairwise check through the closures; exponential, desk scale only."""
    ops = stabilizer_families(space)
    if states is None:
        states = list(space.all_states())
    labels = sorted(ops, key=repr)
    report = {"pairs_checked": 0, "failures": []}
    for i, la in enumerate(labels):
        for lb in labels[i:]:
            for s in states:
                ab = ops[la].apply_vector(ops[lb].fn(s))
                ba = ops[lb].apply_vector(ops[la].fn(s))
                if not vectors_equal(ab, ba):
                    report["failures"].append(("commutator", la, lb, s))
                    break
            report["pairs_checked"] += 1
    for la in labels:
        for s in states:
            sq = ops[la].apply_vector(ops[la].fn(s))
            if not vectors_equal(sq, ops[la].fn(s)):
                report["failures"].append(("idempotent", la, s))
                break
    return report


# ---------------------------------------------------------------------------
# ribbons and string operators


class Ribbon:
    """A closed string in the lattice paired with an adjacent dual string.

    path: cyclic vertex sequence; edges between consecutive vertices must
    exist.  pairs: (vertex, triangle) holonomy base points with the vertex
    on the path.  dual: cyclic tetrahedron sequence, consecutive ones
    sharing a triangle, each containing at least one pair triangle.
    """

    def __init__(self, path, pairs, dual):
        self.path = tuple(path)
        self.pairs = tuple((v, tuple(p)) for v, p in pairs)
        self.dual = tuple(tuple(t) for t in dual)

    @property
    def edges(self):
        out = []
        k = len(self.path)
        for i in range(k):
            a, b = self.path[i], self.path[(i + 1) % k]
            out.append(tuple(sorted((a, b))))
        return sorted(set(out))

    def validate(self, space):
        report = []
        k = len(self.path)
        if k < 3:
            report.append("path too short to close")
        for i in range(k):
            a, b = self.path[i], self.path[(i + 1) % k]
            if a == b or not space.sigma.has_simplex(tuple(sorted((a, b)))):
                report.append("missing path edge (%r,%r)" % (a, b))
        for v, p in self.pairs:
            if v not in self.path:
                report.append("pair vertex %r off the path" % (v,))
            if v not in p or not space.sigma.has_simplex(p):
                report.append("pair triangle %r invalid" % (p,))
        nd = len(self.dual)
        for i in range(nd):
            t1, t2 = self.dual[i], self.dual[(i + 1) % nd]
            if nd > 1 and len(set(t1) & set(t2)) != 3:
                report.append("dual steps %r, %r not adjacent" % (t1, t2))
            if not space.sigma.has_simplex(t1):
                report.append("dual tetrahedron %r missing" % (t1,))
        return report


def smallest_ribbon(space):
    """A minimal closed ribbon fixture on the boundary-of-a-4-simplex
    complex: the triangle loop (0,1,2) with its enclosing dual pair."""
    path = (0, 1, 2)
    pairs = ((0, (0, 1, 2)), (1, (0, 1, 2)), (2, (0, 1, 2)))
    dual = ((0, 1, 2, 3), (0, 1, 2, 4))
    return Ribbon(path, pairs, dual)


def string_phi(space, r, g):
    """Vertex data of the string gauge transformation: g on the path."""
    return {v: (g if v in r.path else 0) for v in space.vertices}


def build_As(space, r, g):
    """The string permutation: one gauge transformation along the path,
    not a product of one-vertex operators."""
    tg = space.tg
    phi0 = string_phi(space, r, g)
    phi1 = {e: 0 for e in space.edges}

    def fn(state):
        tau = space.connection_of(state)
        target = apply_gauge(tg, space.sigma, tau, phi0, phi1)
        return {space.state_of(target): Fraction(1)}

    return LocalOperator(space, fn, "As%d" % g)


def build_Bs(space, r, x):
    ops = [build_Bx_vp(space, v, p, x) for v, p in r.pairs]

    def fn(state):
        vec = {state: Fraction(1)}
        for op in ops:
            vec = op.apply_vector(vec)
            if not vec:
                return {}
        return vec

    return LocalOperator(space, fn, "Bs%d" % x)


def build_Cs(space, r, rho):
    ops = [build_Crho_e(space, e, rho) for e in r.edges]

    def fn(state):
        vec = {state: Fraction(1)}
        for op in ops:
            vec = op.apply_vector(vec)
            if not vec:
                return {}
        return vec

    return LocalOperator(space, fn, "Cs(rho%d)" % rho)


def build_Ds(space, r, phi):
    ops = [build_Dphi_t(space, t, phi) for t in r.dual]

    def fn(state):
        vec = {state: Fraction(1)}
        for op in ops:
            vec = op.apply_vector(vec)
        return vec

    return LocalOperator(space, fn, "Ds(phi%d)" % phi)


def string_ops(space, r):
    """The four string-operator families on a validated ribbon."""
    problems = r.validate(space)
    if problems:
        raise ModelError("invalid ribbon: %s" % "; ".join(problems))
    tg = space.tg
    return {
        "A": {g: build_As(space, r, g) for g in range(tg.g.order)},
        "B": {x: build_Bs(space, r, x) for x in range(tg.g.order)},
        "C": {rho: build_Cs(space, r, rho) for rho in range(tg.a.order)},
        "D": {phi: build_Ds(space, r, phi) for phi in range(tg.a.order)},
    }


def string_composition_dressing(space, r, g, h, tau):
    """Edge labels a_e with string(g) after string(h) = dressing * string(gh)
    on the given state: the edge part of the composite transformation."""
    tg = space.tg
    psi = GaugeTransformation(string_phi(space, r, h), {e: 0 for e in space.edges}, tau)
    middle = psi.target(tg, space.sigma)
    phi = GaugeTransformation(string_phi(space, r, g), {e: 0 for e in space.edges}, middle)
    comp = compose_gauge(tg, space.sigma, phi, psi)
    return {e: comp.phi1[e] for e in space.edges if comp.phi1[e] != 0}


# ---------------------------------------------------------------------------
# scalar and associator extraction


class IncompatibleSector(ModelError):
    pass


def extract_scalar_defect(space, r, rho, g, h, sample=None):
    """The pairing of the chosen junction isomorphism with the character:
    the constant ratio between C A(g) C' A(h) and C A(gh) on the flat
    sector, where C' carries the inverse-transported character.

    Raises IncompatibleSector when the products vanish identically.
    """
    tg = space.tg
    sigma_char = tg.action.act_char(tg.g.inv(g), rho)
    lhs = build_Cs(space, r, rho).compose(build_As(space, r, g)).compose(
        build_Cs(space, r, sigma_char).compose(build_As(space, r, h))
    )
    rhs = build_Cs(space, r, rho).compose(build_As(space, r, tg.g.mul(g, h)))
    ratio = None
    states = list(space.flat_states())
    if sample is not None:
        states = states[:sample]
    for state in states:
        left = lhs.fn(state)
        right = rhs.fn(state)
        for key, rv in right.items():
            lv = left.get(key)
            if lv is None or _vzero(rv):
                continue
            if _vzero(lv):
                raise IncompatibleSector("left product vanishes where right does not")
            quotient = _phase_ratio(lv, rv)
            if ratio is None:
                ratio = quotient
            elif ratio != quotient:
                raise IncompatibleSector("ratio is not constant on the flat sector")
    if ratio is None:
        raise IncompatibleSector("products vanish on the flat sector")
    return ratio


def _phase_ratio(left, right):
    """left = e^{2 pi i r} right, for exact values supported on one phase."""
    lv, rv = _lift(left), _lift(right)
    if len(lv._terms) != 1 or len(rv._terms) != 1:
        raise IncompatibleSector("values are not phase multiples: %r vs %r" % (left, right))
    (exp_l, coeff_l), = lv._terms.items()
    (exp_r, coeff_r), = rv._terms.items()
    if coeff_l == coeff_r:
        return Phase(exp_l - exp_r)
    if coeff_l == -coeff_r:
        return Phase(exp_l - exp_r + Fraction(1, 2))
    raise IncompatibleSector("values are not phase multiples: %r vs %r" % (left, right))


def extract_associator(space, r, rho, g, h, k, samples=4):
    """The rebracketing phase of three string layers at the junction.

    Both bracketings of the three one-vertex transformations at the
    junction vertex (the smallest on the path) are composed; the unique
    equivalence between them supported at the junction is solved from the
    edge conditions and paired with the character.  The result is checked
    for independence of the underlying flat state.
    """
    tg = space.tg
    v = min(r.path)
    m = space.sigma
    result = None
    count = 0
    for tau in enumerate_flat(tg, m):
        count += 1
        if count > samples:
            break
        t_k = simple_gauge_1(tg, m, tau, k, v)
        mid1 = t_k.target(tg, m)
        t_h = simple_gauge_1(tg, m, mid1, h, v)
        mid2 = t_h.target(tg, m)
        t_g = simple_gauge_1(tg, m, mid2, g, v)
        left = compose_gauge(tg, m, compose_gauge(tg, m, t_g, t_h), t_k)
        right = compose_gauge(tg, m, t_g, compose_gauge(tg, m, t_h, t_k))
        xi_v = _solve_junction_equivalence(tg, m, left, right, v)
        phase = tg.a.char_value(rho, xi_v)
        if result is None:
            result = phase
        elif result != phase:
            raise IncompatibleSector("junction phase depends on the state")
    return result


def _solve_junction_equivalence(tg, m, left, right, v):
    """The value at v of the equivalence left => right supported at v."""
    A = tg.a
    target = left.target(tg, m)
    if right.target(tg, m) != target:
        raise ModelError("bracketings disagree beyond an equivalence")
    xi_v = None
    for e in m.simplices(1):
        e0, e1 = e
        if v not in e:
            if left.phi1[e] != right.phi1[e]:
                raise ModelError("difference is not supported at the junction")
            continue
        if v == e0:
            # left1 * (tau'.act xi(v)) = right1
            diff = A.mul(A.inv(left.phi1[e]), right.phi1[e])
            value = tg.act(tg.g.inv(target.tau1[e]), diff)
        else:
            # left1 = right1 * xi(v)
            value = A.mul(A.inv(right.phi1[e]), left.phi1[e])
        if xi_v is None:
            xi_v = value
        elif xi_v != value:
            raise ModelError("junction equivalence is inconsistent")
    if xi_v is None:
        raise ModelError("junction vertex touches no edges")
    xi = {w: (xi_v if w == v else 0) for w in m.vertices}
    if not is_equivalence(tg, m, left, right, xi):
        raise ModelError("solved junction data is not an equivalence")
    return xi_v


def gauge_class_count(space):
    return len(gauge_classes(space.tg, space.sigma))
