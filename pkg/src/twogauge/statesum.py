"""State sums: the action, partition functions, groupoid integrals, the
lattice linear maps of cobordisms, cylinder projectors, and a seeded
retriangulation harness.

All normalization exponents are recomputed from the complex at hand on
every call; nothing is cached across moves.  Partition values and matrix
entries are exact Scalars.
"""

import random
from fractions import Fraction

from .cochains import OmegaCochain, enumerate_flat_labelings
from .complexes import apply_pachner, glued_region, legal_moves, prism
from .connections import apply_gauge, enumerate_flat
from .scalars import Phase, Scalar


class ResourceCap(RuntimeError):
    pass


class StateSumConfig:
    """A 2-group with a top-degree cochain and resource limits."""

    def __init__(self, tg, omega=None, degree=None, check_closed=True, cap=None):
        self.tg = tg
        if omega is None:
            if degree is None:
                raise ValueError("give omega or its degree")
            omega = OmegaCochain.trivial(tg, degree)
            check_closed = False
        self.omega = omega
        self.degree = omega.degree
        self.cap = cap
        if check_closed:
            from .cochains import verify_omega_cocycle

            failures = verify_omega_cocycle(tg, omega, max_failures=1)
            if failures:
                raise ValueError("omega is not closed; first failure %r" % (failures[0],))
        self._table, self.trivial_omega = self._tabulate()

    def _tabulate(self):
        table = {}
        trivial = True
        for labeling in enumerate_flat_labelings(self.tg, self.degree):
            value = self.omega(labeling)
            if not value.is_zero():
                trivial = False
                table[labeling.free_key()] = value.exponent
        return table, trivial

    def omega_exponent(self, key):
        return self._table.get(key, _ZERO)


_ZERO = Fraction(0)


def _restriction_key(tau, simplex):
    """Free-coordinate key of the restriction of tau to a top simplex."""
    x0 = simplex[0]
    rest = simplex[1:]
    gpart = tuple(tau.tau1[(x0, v)] for v in rest)
    apart = tuple(
        tau.tau2[(x0, rest[i], rest[j])]
        for i in range(len(rest))
        for j in range(i + 1, len(rest))
    )
    return (gpart, apart)


def action_exponent(cfg, tops, signs, tau):
    """Sum over top simplices of the signed cochain values, in Q/Z."""
    if cfg.trivial_omega:
        return _ZERO
    total = _ZERO
    for x in tops:
        value = cfg.omega_exponent(_restriction_key(tau, x))
        if value:
            total += value if signs[x] == 1 else -value
    return total % 1


def action(cfg, m, tau):
    """The phase of one flat connection on a closed oriented complex."""
    if m.dim != cfg.degree:
        raise ValueError("cochain degree %d does not match dim %d" % (cfg.degree, m.dim))
    return Phase(action_exponent(cfg, m.tops, m.signs, tau))


def _partition_with_count(cfg, m):
    if m.dim != cfg.degree:
        raise ValueError("cochain degree %d does not match dim %d" % (cfg.degree, m.dim))
    counts = {}
    total_count = 0
    for tau in enumerate_flat(cfg.tg, m, cap=cfg.cap):
        e = action_exponent(cfg, m.tops, m.signs, tau)
        counts[e] = counts.get(e, 0) + 1
        total_count += 1
    n_vertices = len(m.vertices)
    n_edges = len(m.simplices(1))
    norm = Fraction(1, cfg.tg.g.order ** n_vertices) * Fraction(
        cfg.tg.a.order
    ) ** (n_vertices - n_edges)
    total = Scalar({e: Fraction(c) for e, c in counts.items()})
    return total.scaled(norm), total_count


def partition(cfg, m):
    """Z(M): normalized sum of action phases over all flat connections."""
    return _partition_with_count(cfg, m)[0]


def groupoid_integral(objects, beta):
    """Sum of beta(x)/#(morphisms out of x) over the given objects.

    objects yields (key, out_count); beta maps a key to a Scalar and must
    be constant on each isomorphism class.
    """
    total = Scalar.zero()
    for key, out_count in objects:
        value = beta(key)
        if not isinstance(value, Scalar):
            value = Scalar.rational(value)
        total = total + value.scaled(Fraction(1, out_count))
    return total


# ---------------------------------------------------------------------------
# boundary vectors and cobordism matrices


class BoundaryVector:
    """Vector over the basis of all (not necessarily flat) connections."""

    def __init__(self, sigma, coeffs=None):
        self.sigma = sigma
        self.coeffs = dict(coeffs or {})

    @classmethod
    def basis_state(cls, sigma, tau):
        return cls(sigma, {tau.key(sigma): Scalar.one()})

    def dimension_bound(self, tg):
        e = len(self.sigma.simplices(1))
        p = len(self.sigma.simplices(2))
        return tg.g.order ** e * tg.a.order ** p


def _lift(value):
    return value if isinstance(value, Scalar) else Scalar.rational(value)


def _vadd(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _lift(a) + _lift(b)


def _vmul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return _lift(a) * _lift(b)


def _vzero(value):
    if isinstance(value, Fraction):
        return value == 0
    return value.is_zero()


def _veq(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return _lift(a) == _lift(b)


def _vcanon(value):
    if isinstance(value, Fraction):
        return value
    if value.is_rational():
        return value.as_rational()
    return repr(value)


class CobordismMatrix:
    """Sparse matrix over connection-key bases, columns keyed first.

    Entries are exact: plain Fractions or Scalars; mixed arithmetic lifts
    to Scalars.
    """

    def __init__(self, columns=None):
        self.columns = columns or {}

    def entry(self, row, col):
        return self.columns.get(col, {}).get(row, Fraction(0))

    def add(self, row, col, value):
        column = self.columns.setdefault(col, {})
        new = _vadd(column.get(row, Fraction(0)), value)
        if _vzero(new):
            column.pop(row, None)
        else:
            column[row] = new

    def apply(self, vec):
        out = {}
        for col, coeff in vec.items():
            for row, value in self.columns.get(col, {}).items():
                cur = _vadd(out.get(row, Fraction(0)), _vmul(value, coeff))
                if _vzero(cur):
                    out.pop(row, None)
                else:
                    out[row] = cur
        return out

    def compose(self, other):
        """self after other (apply other first)."""
        result = CobordismMatrix()
        for col, column in other.columns.items():
            out = self.apply(column)
            for row, value in out.items():
                result.add(row, col, value)
        return result

    def __eq__(self, other):
        if not isinstance(other, CobordismMatrix):
            return NotImplemented
        keys = set(self.columns) | set(other.columns)
        for col in keys:
            rows = set(self.columns.get(col, {})) | set(other.columns.get(col, {}))
            for row in rows:
                if not _veq(self.entry(row, col), other.entry(row, col)):
                    return False
        return True

    def tensor(self, other):
        """Kronecker product with keys paired per factor."""
        result = CobordismMatrix()
        for c1, col1 in self.columns.items():
            for c2, col2 in other.columns.items():
                col = (c1, c2)
                for r1, v1 in col1.items():
                    for r2, v2 in col2.items():
                        result.add((r1, r2), col, _vmul(v1, v2))
        return result

    def trace(self):
        total = Fraction(0)
        for col, column in self.columns.items():
            if col in column:
                total = _vadd(total, column[col])
        return _lift(total)

    def distinct_columns(self):
        """Group column keys by identical column content."""
        groups = {}
        for col, column in self.columns.items():
            canon = tuple(sorted((row, _vcanon(v)) for row, v in column.items()))
            groups.setdefault(canon, []).append(col)
        return groups

    def is_idempotent(self):
        """Exact check that the matrix fixes each of its columns.

        Squaring a projector-candidate needs each column's image under the
        matrix to reproduce the column; identical columns are grouped so
        the check is linear in the number of distinct columns.  The
        matrix-vector product itself is decomposed over the groups.
        """
        groups = self.distinct_columns()
        col_group = {}
        for canon, cols in groups.items():
            for c in cols:
                col_group[c] = canon
        reps = {canon: self.columns[cols[0]] for canon, cols in groups.items()}
        for canon, cols in groups.items():
            column = reps[canon]
            weights = {}
            ok = True
            for row, coeff in column.items():
                g = col_group.get(row)
                if g is None:
                    # image hits a basis vector outside the column space
                    ok = False
                    break
                weights[g] = _vadd(weights.get(g, Fraction(0)), coeff)
            if not ok:
                return False
            image = {}
            for g, w in weights.items():
                if _vzero(w):
                    continue
                for row, value in reps[g].items():
                    cur = _vadd(image.get(row, Fraction(0)), _vmul(value, w))
                    if _vzero(cur):
                        image.pop(row, None)
                    else:
                        image[row] = cur
            rows = set(column) | set(image)
            for row in rows:
                if not _veq(image.get(row, Fraction(0)), column.get(row, Fraction(0))):
                    return False
        return True


def _halved(value):
    if value % 2:
        raise ValueError("normalization requires an even boundary count")
    return value // 2


def cobordism_matrix(cfg, w, cap=None):
    """The linear map of a triangulated cobordism by direct enumeration.

    Entries are indexed by flat boundary connections; non-flat basis
    states are annihilated by convention.
    """
    tg = cfg.tg
    body = w.body
    n_vertices = len(body.vertices)
    n_edges = len(body.simplices(1))
    b_vertices = len(w.sigma0.vertices) + len(w.sigma1.vertices)
    b_edges = len(w.sigma0.simplices(1)) + len(w.sigma1.simplices(1))
    g_exp = n_vertices - _halved(b_vertices)
    a_exp = n_edges - n_vertices - (_halved(b_edges) - _halved(b_vertices))
    norm = Fraction(1, tg.g.order ** g_exp) * Fraction(tg.a.order) ** (-a_exp)

    inv0 = {w.inc0[v]: v for v in w.sigma0.vertices}
    inv1 = {w.inc1[v]: v for v in w.sigma1.vertices}
    edges0 = [w.map_simplex(w.inc0, e) for e in w.sigma0.simplices(1)]
    tris0 = [w.map_simplex(w.inc0, p) for p in w.sigma0.simplices(2)]
    edges1 = [w.map_simplex(w.inc1, e) for e in w.sigma1.simplices(1)]
    tris1 = [w.map_simplex(w.inc1, p) for p in w.sigma1.simplices(2)]

    matrix = CobordismMatrix()
    cap = cap or cfg.cap
    for tau in enumerate_flat(tg, body, cap=cap):
        gamma0 = tau.restrict(edges0, tris0, rename=lambda v: inv0[v]).key(w.sigma0)
        gamma1 = tau.restrict(edges1, tris1, rename=lambda v: inv1[v]).key(w.sigma1)
        exponent = action_exponent(cfg, body.tops, w.signs, tau)
        matrix.add(gamma1, gamma0, Scalar({exponent: norm}))
    return matrix


def _shift_image_subgroup(tg, sigma, tau1_target):
    """Image of the edge-data homomorphism into triangle shifts.

    For fixed vertex data, varying edge data shifts the transformed
    triangle labels by
        shift(p) = phi1[p0,p2] - tau1'[p1,p2].phi1[p0,p1] - phi1[p1,p2],
    a homomorphism A^edges -> A^triangles; its image is closed under the
    group operation and found by breadth-first closure over generators.
    """
    A = tg.a
    triangles = sigma.simplices(2)
    edges = sigma.simplices(1)
    tri_index = {p: i for i, p in enumerate(triangles)}
    generators = set()
    for e in edges:
        for a in range(1, A.order):
            shift = [0] * len(triangles)
            for p in triangles:
                p0, p1, p2 = p
                if e == (p0, p2):
                    shift[tri_index[p]] = A.mul(shift[tri_index[p]], a)
                if e == (p0, p1):
                    shift[tri_index[p]] = A.mul(
                        shift[tri_index[p]], A.inv(tg.act(tau1_target[(p1, p2)], a))
                    )
                if e == (p1, p2):
                    shift[tri_index[p]] = A.mul(shift[tri_index[p]], A.inv(a))
            generators.add(tuple(shift))
    zero = tuple([0] * len(triangles))
    subgroup = {zero}
    frontier = [zero]
    while frontier:
        base = frontier.pop()
        for gen in generators:
            combined = tuple(A.mul(x, y) for x, y in zip(base, gen))
            if combined not in subgroup:
                subgroup.add(combined)
                frontier.append(combined)
    return subgroup


def cylinder_projector(cfg, sigma, cap=None):
    """The idempotent of the cylinder over a closed complex.

    For the trivial cochain, entries count gauge transformations between
    the boundary restrictions: the column of a flat connection is the
    uniform distribution over its image set under all vertex data, with
    the edge-data freedom folded into a subgroup-image count.  For a
    nontrivial cochain this falls back to direct enumeration on the prism.
    """
    tg = cfg.tg
    if not cfg.trivial_omega:
        return cobordism_matrix(cfg, prism(sigma), cap=cap)
    G, A = tg.g, tg.a
    vertices = sigma.vertices
    edges = sigma.simplices(1)
    triangles = sigma.simplices(2)
    n_v, n_e = len(vertices), len(edges)
    total_phi = Fraction(G.order) ** n_v * Fraction(A.order) ** n_e

    import itertools

    zero_phi1 = {e: 0 for e in edges}
    subgroup_cache = {}
    weight_cache = {}
    key_intern = {}
    columns = {}
    for tau in enumerate_flat(tg, sigma, cap=cap or cfg.cap):
        col = tau.key(sigma)
        column = columns.setdefault(col, {})
        for phi0_vals in itertools.product(range(G.order), repeat=n_v):
            phi0 = dict(zip(vertices, phi0_vals))
            base = apply_gauge(tg, sigma, tau, phi0, zero_phi1)
            base_key = base.key(sigma)
            subgroup = subgroup_cache.get(base_key[0])
            if subgroup is None:
                subgroup = _shift_image_subgroup(tg, sigma, base.tau1)
                subgroup_cache[base_key[0]] = subgroup
            weight = weight_cache.get(len(subgroup))
            if weight is None:
                weight = Fraction(A.order) ** n_e / len(subgroup) / total_phi
                weight_cache[len(subgroup)] = weight
            for shift in subgroup:
                tau2 = tuple(A.mul(v, s) for v, s in zip(base_key[1], shift))
                row = key_intern.setdefault((base_key[0], tau2), (base_key[0], tau2))
                column[row] = column.get(row, Fraction(0)) + weight
    return CobordismMatrix(columns)


def count_gauge_maps_brute(tg, sigma, tau):
    """Histogram {target key: #(phi0, phi1) mapping tau there}, by brute
    force over all gauge data.  Exponential; for cross-checks only."""
    import itertools

    G, A = tg.g, tg.a
    vertices = sigma.vertices
    edges = sigma.simplices(1)
    hist = {}
    for phi0_vals in itertools.product(range(G.order), repeat=len(vertices)):
        phi0 = dict(zip(vertices, phi0_vals))
        for phi1_vals in itertools.product(range(A.order), repeat=len(edges)):
            phi1 = dict(zip(edges, phi1_vals))
            key = apply_gauge(tg, sigma, tau, phi0, phi1).key(sigma)
            hist[key] = hist.get(key, 0) + 1
    return hist


# ---------------------------------------------------------------------------
# retriangulation harness


EXPECTED_EXTENSIONS = {1: lambda tg, n: tg.g.order * tg.a.order ** n}


def expected_extension_count(tg, n, k):
    if k == 1:
        return tg.g.order * tg.a.order ** n
    if k == 2:
        return tg.a.order
    return 1


def count_extensions(cfg, m, move, tau):
    """Number of flat connections on the move's glued region extending tau."""
    region = glued_region(m, move)
    count = 0
    for _ in enumerate_flat(cfg.tg, region, fixed1=tau.tau1, fixed2=tau.tau2):
        count += 1
    return count


def _count_factor(tg, n, k):
    """Multiplier of the flat-connection count across a k move."""
    up = Fraction(expected_extension_count(tg, n, k))
    down = Fraction(expected_extension_count(tg, n, n + 2 - k))
    return up / down


def pachner_harness(cfg, m, seed=0, moves=4, extension_sample=16, cap_states=100000):
    """Apply a seeded sequence of legal moves, checking exact invariance.

    After each move the partition value is recomputed and compared, the
    number of flat extensions across the move is checked against the
    expected count on a seeded sample of flat connections, and the complex
    is revalidated.  Moves whose projected flat-connection count exceeds
    cap_states are not sampled.
    """
    import itertools as _it

    rng = random.Random(seed)
    report = {"seed": seed, "moves": [], "invariant": True}
    z0, n_flat = _partition_with_count(cfg, m)
    current = m
    for step in range(moves):
        options = [
            mv
            for mv in legal_moves(current)
            if n_flat * _count_factor(cfg.tg, current.dim, mv.k) <= cap_states
        ]
        if not options:
            break
        move = rng.choice(options)
        taus = list(_it.islice(enumerate_flat(cfg.tg, current), 4 * extension_sample))
        if len(taus) > extension_sample:
            taus = rng.sample(taus, extension_sample)
        expected = expected_extension_count(cfg.tg, current.dim, move.k)
        extensions_ok = all(
            count_extensions(cfg, current, move, tau) == expected for tau in taus
        )
        current = apply_pachner(current, move)
        z1, n_flat = _partition_with_count(cfg, current)
        same = z1 == z0
        report["moves"].append(
            {
                "k": move.k,
                "verts": list(move.verts),
                "z_before": z0.to_json(),
                "z_after": z1.to_json(),
                "invariant": same,
                "extensions_expected": expected,
                "extensions_ok": extensions_ok,
            }
        )
        if not same or not extensions_ok or current.validate():
            report["invariant"] = False
            break
        z0 = z1
    report["final_counts"] = list(current.counts())
    return report
