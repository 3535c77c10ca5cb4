"""Connections on ordered complexes: flatness, gauge transformations,
their composition and equivalences, orbit enumeration, and the prism
consistency check.

A connection assigns a G element to every edge and an A element to every
triangle.  Flatness is the edge composition law on triangles plus the
square commutation law on tetrahedra.  A gauge transformation is vertex
data phi0 and edge data phi1 together with its source connection; the
target is solved explicitly from the two transformation laws, which makes
application total even on non-flat inputs (the lattice model relies on
that).
"""

from collections import deque


class GaugeError(ValueError):
    pass


class Connection:
    """tau1: edges -> G, tau2: triangles -> A (dense dicts keyed by tuples)."""

    __slots__ = ("tau1", "tau2")

    def __init__(self, tau1, tau2):
        self.tau1 = dict(tau1)
        self.tau2 = dict(tau2)

    @classmethod
    def identity(cls, m):
        return cls({e: 0 for e in m.simplices(1)}, {p: 0 for p in m.simplices(2)})

    def key(self, m):
        """Canonical tuple of values in lexicographic simplex order."""
        return (
            tuple(self.tau1[e] for e in m.simplices(1)),
            tuple(self.tau2[p] for p in m.simplices(2)),
        )

    @classmethod
    def from_key(cls, m, key):
        gvals, avals = key
        return cls(dict(zip(m.simplices(1), gvals)), dict(zip(m.simplices(2), avals)))

    def restrict(self, simplices1, simplices2, rename=None):
        """Restriction to listed cells, optionally renaming vertices."""
        if rename is None:
            rename = lambda v: v
        tau1 = {tuple(rename(v) for v in e): self.tau1[e] for e in simplices1}
        tau2 = {tuple(rename(v) for v in p): self.tau2[p] for p in simplices2}
        return Connection(tau1, tau2)

    def __eq__(self, other):
        return isinstance(other, Connection) and self.tau1 == other.tau1 and self.tau2 == other.tau2

    def __repr__(self):
        return "Connection(%d edges, %d triangles)" % (len(self.tau1), len(self.tau2))


def two_flat_defect(tg, tau, t):
    """The A-valued obstruction on tetrahedron t; identity iff 2-flat.

    defect = (tau1[t2,t3] . tau2[t0,t1,t2]) tau2[t0,t2,t3]
             alpha(tau1[t2,t3], tau1[t1,t2], tau1[t0,t1])
             (tau2[t0,t1,t3] tau2[t1,t2,t3])^-1
    """
    A = tg.a
    t0, t1, t2, t3 = t
    lhs = A.mul(tau.tau2[(t1, t2, t3)], tau.tau2[(t0, t1, t3)])
    rhs = A.mul(
        tg.act(tau.tau1[(t2, t3)], tau.tau2[(t0, t1, t2)]),
        A.mul(
            tau.tau2[(t0, t2, t3)],
            tg.alpha(tau.tau1[(t2, t3)], tau.tau1[(t1, t2)], tau.tau1[(t0, t1)]),
        ),
    )
    return A.mul(rhs, A.inv(lhs))


def is_flat(tg, m, tau, collect=False):
    """(one_flat, two_flat, violations) for tau on m."""
    G = tg.g
    violations = []
    one_flat = True
    for p in m.simplices(2):
        p0, p1, p2 = p
        if tau.tau1[(p0, p2)] != G.mul(tau.tau1[(p1, p2)], tau.tau1[(p0, p1)]):
            one_flat = False
            if collect:
                violations.append(("triangle", p))
            else:
                break
    two_flat = True
    for t in m.simplices(3):
        if two_flat_defect(tg, tau, t) != 0:
            two_flat = False
            if collect:
                violations.append(("tetrahedron", t))
            else:
                break
    return one_flat, two_flat, violations


def enumerate_flat(tg, m, cap=None, fixed1=None, fixed2=None):
    """Yield every flat connection exactly once, deterministically.

    Backtracking assigns edges in lexicographic order (each triangle whose
    other two edges are known forces the third), then triangles (each
    tetrahedron whose other three faces are known forces the fourth).
    fixed1/fixed2 preassign edge and triangle values (used to count flat
    extensions of a connection on a subcomplex).
    """
    G, A = tg.g, tg.a
    edges = m.simplices(1)
    triangles = m.simplices(2)
    tets = m.simplices(3)
    edge_index = {e: i for i, e in enumerate(edges)}
    tri_index = {p: i for i, p in enumerate(triangles)}
    tris_of_edge = [[] for _ in edges]
    for p in triangles:
        p0, p1, p2 = p
        for e in ((p0, p1), (p0, p2), (p1, p2)):
            tris_of_edge[edge_index[e]].append(p)
    tets_of_tri = [[] for _ in triangles]
    for t in tets:
        t0, t1, t2, t3 = t
        for p in ((t1, t2, t3), (t0, t2, t3), (t0, t1, t3), (t0, t1, t2)):
            tets_of_tri[tri_index[p]].append(t)

    count = 0

    def propagate_edge(vals, queue, pinned):
        """Force third edges of triangles; False on contradiction.

        Forced positions are appended to the caller-owned pinned list even
        when a later contradiction aborts the pass, so the caller can
        always undo them.
        """
        while queue:
            p = queue.popleft()
            p0, p1, p2 = p
            ids = (edge_index[(p0, p1)], edge_index[(p1, p2)], edge_index[(p0, p2)])
            known = [vals[i] is not None for i in ids]
            if sum(known) < 2:
                continue
            a, b, c = ids  # tau[c] = tau[b] tau[a]
            if all(known):
                if vals[c] != G.mul(vals[b], vals[a]):
                    return False
                continue
            if vals[a] is None:
                vals[a] = G.mul(G.inv(vals[b]), vals[c])
                forced = a
            elif vals[b] is None:
                vals[b] = G.mul(vals[c], G.inv(vals[a]))
                forced = b
            else:
                vals[c] = G.mul(vals[b], vals[a])
                forced = c
            pinned.append(forced)
            for q in tris_of_edge[forced]:
                queue.append(q)
        return True

    def edge_dfs(vals, pos):
        nonlocal count
        while pos < len(edges) and vals[pos] is not None:
            pos += 1
        if pos == len(edges):
            yield list(vals)
            return
        for g in range(G.order):
            vals[pos] = g
            queue = deque(tris_of_edge[pos])
            pinned = []
            if propagate_edge(vals, queue, pinned):
                yield from edge_dfs(vals, pos + 1)
            for i in pinned:
                vals[i] = None
            vals[pos] = None

    def propagate_tri(evals, tvals, queue, alpha_term, pinned):
        while queue:
            t = queue.popleft()
            t0, t1, t2, t3 = t
            f123, f023, f013, f012 = (
                tri_index[(t1, t2, t3)],
                tri_index[(t0, t2, t3)],
                tri_index[(t0, t1, t3)],
                tri_index[(t0, t1, t2)],
            )
            ids = (f123, f023, f013, f012)
            unknown = [i for i in ids if tvals[i] is None]
            if len(unknown) > 1:
                continue
            g23 = evals[edge_index[(t2, t3)]]
            corr = alpha_term(t, evals)
            # law: tvals[f123] * tvals[f013] = (g23 . tvals[f012]) * tvals[f023] * corr
            A_ = tg.a
            if not unknown:
                lhs = A_.mul(tvals[f123], tvals[f013])
                rhs = A_.mul(tg.act(g23, tvals[f012]), A_.mul(tvals[f023], corr))
                if lhs != rhs:
                    return False
                continue
            i = unknown[0]
            if i == f123:
                rhs = A_.mul(tg.act(g23, tvals[f012]), A_.mul(tvals[f023], corr))
                tvals[i] = A_.mul(rhs, A_.inv(tvals[f013]))
            elif i == f013:
                rhs = A_.mul(tg.act(g23, tvals[f012]), A_.mul(tvals[f023], corr))
                tvals[i] = A_.mul(A_.inv(tvals[f123]), rhs)
            elif i == f023:
                lhs = A_.mul(tvals[f123], tvals[f013])
                tvals[i] = A_.mul(lhs, A_.inv(A_.mul(tg.act(g23, tvals[f012]), corr)))
            else:  # f012
                lhs = A_.mul(tvals[f123], tvals[f013])
                val = A_.mul(lhs, A_.inv(A_.mul(tvals[f023], corr)))
                # val = g23 . tvals[f012]
                tvals[i] = tg.act(tg.g.inv(g23), val)
            pinned.append(i)
            for q in tets_of_tri[i]:
                queue.append(q)
        return True

    def alpha_term(t, evals):
        t0, t1, t2, t3 = t
        return tg.alpha(
            evals[edge_index[(t2, t3)]],
            evals[edge_index[(t1, t2)]],
            evals[edge_index[(t0, t1)]],
        )

    def tri_dfs(evals, tvals, pos):
        while pos < len(triangles) and tvals[pos] is not None:
            pos += 1
        if pos == len(triangles):
            yield list(tvals)
            return
        for a in range(A.order):
            tvals[pos] = a
            queue = deque(tets_of_tri[pos])
            pinned = []
            if propagate_tri(evals, tvals, queue, alpha_term, pinned):
                yield from tri_dfs(evals, tvals, pos + 1)
            for i in pinned:
                tvals[i] = None
            tvals[pos] = None

    init_evals = [None] * len(edges)
    init_tvals = [None] * len(triangles)
    if fixed1:
        for e, g in fixed1.items():
            init_evals[edge_index[tuple(e)]] = g
        if not propagate_edge(init_evals, deque(triangles), []):
            return
    if fixed2:
        for p, a in fixed2.items():
            init_tvals[tri_index[tuple(p)]] = a

    for evals in edge_dfs(init_evals, 0):
        seed_tvals = list(init_tvals)
        if fixed2 and not propagate_tri(evals, seed_tvals, deque(tets), alpha_term, []):
            continue
        for tvals in tri_dfs(evals, seed_tvals, 0):
            count += 1
            if cap is not None and count > cap:
                raise GaugeError("flat connection cap %d exceeded" % cap)
            yield Connection(dict(zip(edges, evals)), dict(zip(triangles, tvals)))


def count_flat(tg, m, cap=None):
    return sum(1 for _ in enumerate_flat(tg, m, cap=cap))


class GaugeTransformation:
    """phi0: vertices -> G, phi1: edges -> A, with an explicit source."""

    __slots__ = ("phi0", "phi1", "source", "_target")

    def __init__(self, phi0, phi1, source):
        self.phi0 = dict(phi0)
        self.phi1 = dict(phi1)
        self.source = source
        self._target = None

    @classmethod
    def identity(cls, m, source):
        return cls({v: 0 for v in m.vertices}, {e: 0 for e in m.simplices(1)}, source)

    def target(self, tg, m):
        if self._target is None:
            self._target = apply_gauge(tg, m, self.source, self.phi0, self.phi1)
        return self._target

    def __repr__(self):
        return "GaugeTransformation(%d vertices, %d edges)" % (len(self.phi0), len(self.phi1))


def simple_gauge_1(tg, m, source, g, v):
    """The gauge transformation supported at one vertex."""
    phi0 = {w: (g if w == v else 0) for w in m.vertices}
    phi1 = {e: 0 for e in m.simplices(1)}
    return GaugeTransformation(phi0, phi1, source)


def simple_gauge_2(tg, m, source, a, e):
    """The gauge transformation supported at one edge."""
    phi0 = {w: 0 for w in m.vertices}
    phi1 = {f: (a if f == tuple(e) else 0) for f in m.simplices(1)}
    return GaugeTransformation(phi0, phi1, source)


def apply_gauge(tg, m, tau, phi0, phi1):
    """The transformed connection, solved from the transformation laws.

    tau1'(e) = phi0(e1) tau1(e) phi0(e0)^-1 on every edge, and on every
    triangle tau2' is the unique solution of the square transformation law.
    """
    G, A = tg.g, tg.a
    tau1p = {}
    for e in m.simplices(1):
        e0, e1 = e
        tau1p[e] = G.mul(G.mul(phi0[e1], tau.tau1[e]), G.inv(phi0[e0]))
    tau2p = {}
    for p in m.simplices(2):
        p0, p1, p2 = p
        correction = A.mul(
            tg.alpha(tau1p[(p1, p2)], tau1p[(p0, p1)], phi0[p0]),
            A.mul(
                tg.alpha(phi0[p2], tau.tau1[(p1, p2)], tau.tau1[(p0, p1)]),
                A.inv(tg.alpha(tau1p[(p1, p2)], phi0[p1], tau.tau1[(p0, p1)])),
            ),
        )
        rhs = A.mul(tg.act(phi0[p2], tau.tau2[p]), A.mul(phi1[(p0, p2)], correction))
        absorb = A.mul(tg.act(tau1p[(p1, p2)], phi1[(p0, p1)]), phi1[(p1, p2)])
        tau2p[p] = A.mul(rhs, A.inv(absorb))
    return Connection(tau1p, tau2p)


def is_gauge(tg, m, tau, tau_prime, phi0, phi1):
    """Whether (phi0, phi1) transforms tau into tau_prime."""
    return apply_gauge(tg, m, tau, phi0, phi1) == tau_prime


def compose_gauge(tg, m, phi, psi):
    """The composite that applies psi first, then phi.

    Requires target(psi) = source(phi); the edge part picks up three
    cocycle correction factors referring to the source, middle and target
    connections.
    """
    G, A = tg.g, tg.a
    tau = psi.source
    middle = psi.target(tg, m)
    if phi.source != middle:
        raise GaugeError("source of the outer transformation must match the target of the inner")
    final = phi.target(tg, m)
    phi0 = {v: G.mul(phi.phi0[v], psi.phi0[v]) for v in m.vertices}
    phi1 = {}
    for e in m.simplices(1):
        e0, e1 = e
        corr = A.mul(
            tg.alpha(final.tau1[e], phi.phi0[e0], psi.phi0[e0]),
            A.mul(
                tg.alpha(phi.phi0[e1], psi.phi0[e1], tau.tau1[e]),
                A.inv(tg.alpha(phi.phi0[e1], middle.tau1[e], psi.phi0[e0])),
            ),
        )
        phi1[e] = A.mul(
            phi.phi1[e],
            A.mul(tg.act(phi.phi0[e1], psi.phi1[e]), corr),
        )
    return GaugeTransformation(phi0, phi1, tau)


def is_equivalence(tg, m, phi, psi, xi):
    """Whether xi: vertices -> A is an equivalence phi => psi."""
    if phi.phi0 != psi.phi0:
        raise GaugeError("equivalent transformations must share phi0")
    if phi.source != psi.source:
        raise GaugeError("equivalent transformations must share their source")
    if phi.target(tg, m) != psi.target(tg, m):
        raise GaugeError("equivalent transformations must share their target")
    A = tg.a
    tgt = phi.target(tg, m)
    for e in m.simplices(1):
        e0, e1 = e
        lhs = A.mul(phi.phi1[e], tg.act(tgt.tau1[e], xi[e0]))
        rhs = A.mul(psi.phi1[e], xi[e1])
        if lhs != rhs:
            return False
    return True


def gauge_out_count(tg, m):
    """Number of equivalence classes of gauge transformations out of any
    flat connection: |G|^V * |A|^(E - V + components)."""
    v = len(m.vertices)
    e = len(m.simplices(1))
    return tg.g.order ** v * tg.a.order ** (e - v + m.component_count())


class GaugeClasses:
    def __init__(self, orbits, out_count):
        self.orbits = orbits
        self.out_count = out_count

    @property
    def stabilizer_counts(self):
        counts = []
        for orbit in self.orbits:
            if self.out_count % len(orbit):
                raise GaugeError("orbit size does not divide the morphism count")
            counts.append(self.out_count // len(orbit))
        return counts

    def __len__(self):
        return len(self.orbits)


def gauge_classes(tg, m, cap=None):
    """Orbits of flat connections under all gauge transformations.

    Breadth-first closure under the one-vertex and one-edge generators,
    which generate every gauge transformation up to equivalence.
    """
    all_keys = []
    for tau in enumerate_flat(tg, m, cap=cap):
        all_keys.append(tau.key(m))
    remaining = set(all_keys)
    orbits = []
    vertices = m.vertices
    edges = m.simplices(1)
    while remaining:
        seed = min(remaining)
        orbit = {seed}
        frontier = deque([seed])
        while frontier:
            key = frontier.popleft()
            tau = Connection.from_key(m, key)
            neighbors = []
            for v in vertices:
                for g in range(1, tg.g.order):
                    neighbors.append(simple_gauge_1(tg, m, tau, g, v))
            for e in edges:
                for a in range(1, tg.a.order):
                    neighbors.append(simple_gauge_2(tg, m, tau, a, e))
            for mv in neighbors:
                nk = mv.target(tg, m).key(m)
                if nk not in orbit:
                    orbit.add(nk)
                    frontier.append(nk)
        orbits.append(tuple(sorted(orbit)))
        remaining -= orbit
    orbits.sort()
    return GaugeClasses(orbits, gauge_out_count(tg, m))


def prism_cross_check(tg, m, tau, phi, claimed_target=None):
    """Assemble the connection on M x I induced by a gauge transformation
    and test its flatness: an independent validation of the two
    transformation laws via the prism triangulation.

    Bottom copy carries tau, top copy carries the (claimed) target,
    vertical edges carry phi0; of the two triangles over each edge, the
    one through the later top vertex carries 1 and the other carries phi1;
    the two triangles over each base triangle are solved from the square
    law on the first two prism tetrahedra, and flatness of the whole
    assembly is then equivalent to the transformation laws holding for the
    claimed triple (tau, target, phi).
    """
    from .complexes import prism

    G, A = tg.g, tg.a
    w = prism(m)
    shift = max(m.vertices) + 1
    tgt = claimed_target if claimed_target is not None else phi.target(tg, m)
    tau1 = {}
    tau2 = {}
    for e in m.simplices(1):
        e0, e1 = e
        tau1[e] = tau.tau1[e]
        tau1[(e0 + shift, e1 + shift)] = tgt.tau1[e]
        tau1[(e0, e1 + shift)] = G.mul(phi.phi0[e1], tau.tau1[e])
    for v in m.vertices:
        tau1[(v, v + shift)] = phi.phi0[v]
    for p in m.simplices(2):
        p0, p1, p2 = p
        tau2[p] = tau.tau2[p]
        tau2[(p0 + shift, p1 + shift, p2 + shift)] = tgt.tau2[p]
    for e in m.simplices(1):
        e0, e1 = e
        tau2[(e0, e0 + shift, e1 + shift)] = 0
        tau2[(e0, e1, e1 + shift)] = phi.phi1[e]
    for p in m.simplices(2):
        p0, p1, p2 = p
        h1 = A.mul(
            tgt.tau2[p],
            A.inv(tg.alpha(tgt.tau1[(p1, p2)], tgt.tau1[(p0, p1)], phi.phi0[p0])),
        )
        tau2[(p0, p1 + shift, p2 + shift)] = h1
        h2 = A.mul(
            h1,
            A.mul(
                tg.act(tgt.tau1[(p1, p2)], phi.phi1[(p0, p1)]),
                tg.alpha(tgt.tau1[(p1, p2)], phi.phi0[p1], tau.tau1[(p0, p1)]),
            ),
        )
        tau2[(p0, p1, p2 + shift)] = h2
    prism_tau = Connection(tau1, tau2)
    one_flat, two_flat, _ = is_flat(tg, w.body, prism_tau)
    return one_flat and two_flat


# ---------------------------------------------------------------------------
# JSON interchange

def connection_to_json(tg, m, tau):
    t1 = {
        ",".join(str(v) for v in e): tg.g.names[tau.tau1[e]]
        for e in m.simplices(1)
        if tau.tau1[e] != 0
    }
    t2 = {
        ",".join(str(v) for v in p): tg.a.names[tau.tau2[p]]
        for p in m.simplices(2)
        if tau.tau2[p] != 0
    }
    return {"tau1": t1, "tau2": t2}


def connection_from_json(tg, m, data):
    tau1 = {e: 0 for e in m.simplices(1)}
    tau2 = {p: 0 for p in m.simplices(2)}
    for key, name in data.get("tau1", {}).items():
        e = tuple(int(v) for v in key.split(","))
        if e not in tau1:
            raise GaugeError("unknown edge %r" % (e,))
        tau1[e] = tg.g.index(name)
    for key, name in data.get("tau2", {}).items():
        p = tuple(int(v) for v in key.split(","))
        if p not in tau2:
            raise GaugeError("unknown triangle %r" % (p,))
        tau2[p] = tg.a.index(name)
    return Connection(tau1, tau2)
