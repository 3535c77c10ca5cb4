"""Cochains on flat labelings of standard simplices.

A flat labeling of the standard n-simplex assigns a G element to each edge
(i,j) and an A element to each triangle (i,j,k), subject to the edge
composition law on every triangle and the square-commutation law on every
tetrahedron.  Such a labeling is determined freely by the values on edges
(0,i) and triangles (0,i,j); all enumeration and table keys use those free
coordinates.

Face maps follow the bar-resolution indexing: face i of an n-labeling is
the restriction to the subsimplex omitting vertex n-i, so that for a
1-group 2-cochain beta,

    (d beta)(g,h,k) = beta(h,k) - beta(g h,k) + beta(g,h k) - beta(g,h)

when the labeling reads edge values top-down, the same order in which an
n-cochain is evaluated inside the action of the state sum.
"""

import itertools
from fractions import Fraction

from .scalars import Phase


class FlatLabeling:
    """Flat (G, A)-labeling of the standard n-simplex."""

    __slots__ = ("n", "edges", "triangles")

    def __init__(self, n, edges, triangles):
        self.n = n
        self.edges = edges
        self.triangles = triangles

    @classmethod
    def from_free(cls, tg, n, gvec, avec):
        """Build from free coordinates.

        gvec[i-1] labels edge (0,i) for 1 <= i <= n; avec[(i,j)] labels
        triangle (0,i,j) for 1 <= i < j <= n.  The rest is forced by
        flatness.
        """
        G, A = tg.g, tg.a
        edges = {}
        for i in range(1, n + 1):
            edges[(0, i)] = gvec[i - 1]
        # tau([i,j]) = tau([0,j]) tau([0,i])^-1 from the triangle (0,i,j)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                edges[(i, j)] = G.mul(edges[(0, j)], G.inv(edges[(0, i)]))
        triangles = {}
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                triangles[(0, i, j)] = avec[(i, j)]
        # tetrahedron (0,i,j,k) forces triangle (i,j,k)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for k in range(j + 1, n + 1):
                    ajk = triangles[(0, j, k)]
                    aij = triangles[(0, i, j)]
                    aik = triangles[(0, i, k)]
                    twist = tg.act(edges[(j, k)], aij)
                    corr = tg.alpha(edges[(j, k)], edges[(i, j)], edges[(0, i)])
                    value = A.mul(A.mul(twist, ajk), A.mul(corr, A.inv(aik)))
                    triangles[(i, j, k)] = value
        return cls(n, edges, triangles)

    @classmethod
    def identity(cls, tg, n):
        gvec = [0] * n
        avec = {(i, j): 0 for i in range(1, n + 1) for j in range(i + 1, n + 1)}
        return cls.from_free(tg, n, gvec, avec)

    def free_key(self):
        """Canonical key (free edge values, free triangle values)."""
        n = self.n
        gpart = tuple(self.edges[(0, i)] for i in range(1, n + 1))
        apart = tuple(
            self.triangles[(0, i, j)] for i in range(1, n + 1) for j in range(i + 1, n + 1)
        )
        return (gpart, apart)

    def name_key(self, tg):
        gpart, apart = self.free_key()
        gs = ",".join(tg.g.names[v] for v in gpart)
        as_ = ",".join(tg.a.names[v] for v in apart)
        return "%s|%s" % (gs, as_)

    def restrict(self, vertices):
        """Restriction to a subsimplex, relabeled to 0..len-1."""
        vertices = tuple(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        edges = {}
        for (a, b), val in self.edges.items():
            if a in pos and b in pos:
                edges[(pos[a], pos[b])] = val
        triangles = {}
        for (a, b, c), val in self.triangles.items():
            if a in pos and b in pos and c in pos:
                triangles[(pos[a], pos[b], pos[c])] = val
        return FlatLabeling(len(vertices) - 1, edges, triangles)

    def face(self, i):
        """Bar-indexed face i: drop vertex n - i."""
        drop = self.n - i
        return self.restrict([v for v in range(self.n + 1) if v != drop])

    def group_tuple(self):
        """Consecutive edge values read top-down: (tau[n-1,n], ..., tau[0,1])."""
        return tuple(self.edges[(self.n - 1 - i, self.n - i)] for i in range(self.n))


def enumerate_flat_labelings(tg, n):
    """All flat labelings of the standard n-simplex, lexicographic in the
    free coordinates."""
    G, A = tg.g, tg.a
    tri_slots = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for gvec in itertools.product(range(G.order), repeat=n):
        for avals in itertools.product(range(A.order), repeat=len(tri_slots)):
            avec = dict(zip(tri_slots, avals))
            yield FlatLabeling.from_free(tg, n, list(gvec), avec)


class OmegaCochain:
    """U(1)-valued cochain on flat labelings of the standard n-simplex."""

    def __init__(self, tg, degree, fn=None, label="custom"):
        self.tg = tg
        self.degree = degree
        self._fn = fn or (lambda labeling: Phase(0))
        self.label = label

    @classmethod
    def trivial(cls, tg, degree):
        return cls(tg, degree, lambda labeling: Phase(0), label="trivial")

    @classmethod
    def from_table(cls, tg, degree, table, label="table"):
        """Explicit table keyed by FlatLabeling.free_key(); missing keys are 0."""

        def fn(labeling):
            return table.get(labeling.free_key(), Phase(0))

        return cls(tg, degree, fn, label=label)

    def __call__(self, labeling):
        if labeling.n != self.degree:
            raise ValueError(
                "cochain of degree %d evaluated on a %d-simplex" % (self.degree, labeling.n)
            )
        return self._fn(labeling)

    def is_normalized(self):
        return self(FlatLabeling.identity(self.tg, self.degree)).is_zero()


def coboundary(tg, beta):
    """The degree n+1 cochain (d beta)(s) = sum_i (-1)^i beta(face_i s)."""
    degree = beta.degree + 1

    def fn(labeling):
        total = Fraction(0)
        for i in range(degree + 1):
            value = beta(labeling.face(i)).exponent
            total += value if i % 2 == 0 else -value
        return Phase(total)

    return OmegaCochain(tg, degree, fn, label="d(%s)" % beta.label)


def verify_omega_cocycle(tg, omega, max_failures=5):
    """Check d(omega) = 0 on all flat labelings of the (degree+1)-simplex.

    Returns the failing labelings' free keys, at most max_failures of them.
    """
    if omega.degree < 3:
        raise ValueError("cochain degree must be at least 3, got %d" % omega.degree)
    failures = []
    d_omega = coboundary(tg, omega)
    for labeling in enumerate_flat_labelings(tg, omega.degree + 1):
        if not d_omega(labeling).is_zero():
            failures.append(labeling.free_key())
            if len(failures) >= max_failures:
                break
    return failures


def group_cochain(tg, degree, fn, label="group"):
    """Cochain induced by a function of the top-down edge tuple.

    For a 1-group this is the usual inhomogeneous cochain; A labels are
    ignored.
    """
    return OmegaCochain(tg, degree, lambda labeling: fn(*labeling.group_tuple()), label=label)


def random_cochain(tg, degree, rng, denominators=(2, 3, 4), label="random"):
    """Random table-backed cochain, normalized on the identity labeling."""
    table = {}
    for labeling in enumerate_flat_labelings(tg, degree):
        key = labeling.free_key()
        q = rng.choice(denominators)
        table[key] = Phase(Fraction(rng.randrange(q), q))
    identity_key = FlatLabeling.identity(tg, degree).free_key()
    table[identity_key] = Phase(0)
    return OmegaCochain.from_table(tg, degree, table, label=label)


def omega_to_json(tg, omega, degree_simplices=None):
    entries = {}
    for labeling in enumerate_flat_labelings(tg, omega.degree):
        value = omega(labeling)
        if not value.is_zero():
            entries[labeling.name_key(tg)] = str(value.exponent)
    return {"degree": omega.degree, "entries": entries}


def omega_from_json(tg, data):
    degree = data["degree"]
    table = {}
    by_name = {}
    for labeling in enumerate_flat_labelings(tg, degree):
        by_name[labeling.name_key(tg)] = labeling.free_key()
    for name, value in data.get("entries", {}).items():
        if name not in by_name:
            raise ValueError("unknown labeling key %r" % name)
        table[by_name[name]] = Phase(Fraction(value))
    return OmegaCochain.from_table(tg, degree, table, label="json")
