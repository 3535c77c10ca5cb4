"""Ordered simplicial complexes with branching structure and orientations.

Simplices are strictly increasing vertex tuples; the global total order on
integer vertex ids is the branching structure.  Closed oriented complexes
carry a sign for each top simplex, validated by exact cancellation of the
signed boundary chain.  Built-in constructions: boundary of a simplex (the
minimal sphere) and the standard prism triangulation of M x I.  Bistellar
(Pachner) moves are applied by gluing the boundary sphere of one
higher-dimensional simplex along an order-preserving embedded subcomplex.
"""

import itertools
import json
from collections import defaultdict


class ComplexError(ValueError):
    pass


def faces_of(simplex):
    """All nonempty proper faces plus the simplex itself."""
    out = []
    verts = tuple(simplex)
    for r in range(1, len(verts) + 1):
        out.extend(itertools.combinations(verts, r))
    return out


def boundary_faces(simplex):
    """Codimension-1 faces with alternating signs: (face, (-1)^i)."""
    verts = tuple(simplex)
    out = []
    for i in range(len(verts)):
        face = verts[:i] + verts[i + 1:]
        out.append((face, 1 if i % 2 == 0 else -1))
    return out


class Complex:
    """Face-closed ordered simplicial complex."""

    def __init__(self, dim, top_simplices, validate=True):
        self.dim = dim
        tops = [tuple(t) for t in top_simplices]
        by_dim = defaultdict(set)
        for t in tops:
            for f in faces_of(t):
                by_dim[len(f) - 1].add(f)
        self._simplices = {k: sorted(v) for k, v in by_dim.items()}
        self.tops = sorted(set(tops))
        if validate:
            report = self.validate()
            if report:
                raise ComplexError("; ".join(report))

    @property
    def vertices(self):
        return [v for (v,) in self.simplices(0)]

    def simplices(self, k):
        """k-simplices in lexicographic order."""
        return self._simplices.get(k, [])

    def counts(self):
        return tuple(len(self.simplices(k)) for k in range(self.dim + 1))

    def has_simplex(self, simplex):
        simplex = tuple(simplex)
        return simplex in set(self._simplices.get(len(simplex) - 1, []))

    def cofaces(self, simplex, k):
        """k-simplices containing the given simplex."""
        simplex = set(simplex)
        return [s for s in self.simplices(k) if simplex.issubset(s)]

    def component_count(self):
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in self.simplices(1):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in self.vertices})

    def validate(self):
        report = []
        for k, simps in self._simplices.items():
            for s in simps:
                if list(s) != sorted(set(s)):
                    report.append("simplex %r is not strictly increasing" % (s,))
        for t in self.tops:
            if len(t) - 1 > self.dim:
                report.append("top simplex %r exceeds dim %d" % (t, self.dim))
        # closure is guaranteed by construction; re-check for safety
        listed = {k: set(v) for k, v in self._simplices.items()}
        for k, simps in listed.items():
            if k == 0:
                continue
            for s in simps:
                for f, _ in boundary_faces(s):
                    if f not in listed.get(k - 1, set()):
                        report.append("missing face %r of %r" % (f, s))
        return report


class OrientedClosedComplex(Complex):
    """Closed complex with orientation signs on top simplices."""

    def __init__(self, dim, top_simplices, signs, validate=True):
        super().__init__(dim, top_simplices, validate=False)
        self.signs = {tuple(t): s for t, s in signs.items()}
        if validate:
            report = self.validate()
            if report:
                raise ComplexError("; ".join(report))

    def sign(self, top):
        return self.signs[tuple(top)]

    def signed_boundary(self):
        chain = defaultdict(int)
        for t in self.tops:
            s = self.signs[t]
            for f, eps in boundary_faces(t):
                chain[f] += s * eps
        return {f: c for f, c in chain.items() if c != 0}

    def validate(self):
        report = super().validate()
        for t in self.tops:
            if len(t) - 1 != self.dim:
                report.append("top simplex %r is not %d-dimensional" % (t, self.dim))
        if set(self.signs) != set(self.tops):
            report.append("signs must be given exactly on top simplices")
            return report
        if any(s not in (1, -1) for s in self.signs.values()):
            report.append("signs must be +-1")
        incidence = defaultdict(int)
        for t in self.tops:
            for f, _ in boundary_faces(t):
                incidence[f] += 1
        for f in self.simplices(self.dim - 1):
            if incidence[f] != 2:
                report.append(
                    "codimension-1 simplex %r lies in %d tops, not 2" % (f, incidence[f])
                )
        leftover = self.signed_boundary()
        if leftover:
            report.append("signed boundary does not cancel: %d terms" % len(leftover))
        return report


def boundary_simplex(n):
    """The boundary of the (n+1)-simplex: the minimal n-sphere.

    The face omitting vertex i carries sign (-1)^i, so the signed boundary
    cancels exactly.
    """
    if n < 1:
        raise ComplexError("dimension must be >= 1")
    verts = tuple(range(n + 2))
    tops = []
    signs = {}
    for i in range(n + 2):
        face = verts[:i] + verts[i + 1:]
        tops.append(face)
        signs[face] = 1 if i % 2 == 0 else -1
    return OrientedClosedComplex(n, tops, signs)


class Cobordism:
    """Oriented triangulated cobordism from sigma0 (incoming) to sigma1.

    body: the (possibly boundaryless) complex with signs on top simplices;
    inc0/inc1: injective vertex maps from the boundary pieces into body.
    """

    def __init__(self, body_dim, tops, signs, sigma0, inc0, sigma1, inc1):
        self.body = Complex(body_dim, tops, validate=True)
        self.signs = {tuple(t): s for t, s in signs.items()}
        self.sigma0 = sigma0
        self.inc0 = dict(inc0)
        self.sigma1 = sigma1
        self.inc1 = dict(inc1)
        if set(self.signs) != set(self.body.tops):
            raise ComplexError("cobordism signs must cover exactly the top simplices")

    def map_simplex(self, inc, simplex):
        return tuple(sorted(inc[v] for v in simplex))

    def boundary_images(self):
        """Image simplex sets of the two boundary inclusions."""
        img0 = {self.map_simplex(self.inc0, s) for k in range(self.sigma0.dim + 1)
                for s in self.sigma0.simplices(k)}
        img1 = {self.map_simplex(self.inc1, s) for k in range(self.sigma1.dim + 1)
                for s in self.sigma1.simplices(k)}
        return img0, img1

    def validate(self):
        report = []
        for inc, sigma, tag in ((self.inc0, self.sigma0, "incoming"),
                                (self.inc1, self.sigma1, "outgoing")):
            for k in range(sigma.dim + 1):
                for s in sigma.simplices(k):
                    if not self.body.has_simplex(self.map_simplex(inc, s)):
                        report.append("%s boundary simplex %r missing in body" % (tag, s))
        img0, img1 = self.boundary_images()
        if img0 & img1:
            report.append("boundary images overlap")
        # every codim-1 simplex is shared by 2 tops, or 1 top and a boundary face
        incidence = defaultdict(int)
        for t in self.body.tops:
            for f, _ in boundary_faces(t):
                incidence[f] += 1
        boundary_faces_all = {s for s in img0 | img1 if len(s) == self.body.dim}
        for f in self.body.simplices(self.body.dim - 1):
            expected = 1 if f in boundary_faces_all else 2
            if incidence[f] != expected:
                report.append("face %r has incidence %d, expected %d" % (f, incidence[f], expected))
        return report


def prism(m):
    """Standard triangulation of M x I as a cobordism M -> M.

    Vertex (v, 0) keeps id v; vertex (v, 1) gets id v + V where V is one
    more than the largest vertex id of M.  Each top k-simplex x with sign s
    yields pieces [(x_0,0)..(x_j,0),(x_j,1)..(x_k,1)] with signs s*(-1)^j,
    so the signed boundary of the prism is (M x 1) - (M x 0).
    """
    if isinstance(m, OrientedClosedComplex):
        signs_in = m.signs
    else:
        signs_in = {t: 1 for t in m.tops}
    shift = max(m.vertices) + 1
    tops = []
    signs = {}
    for x in m.tops:
        s = signs_in[x]
        k = len(x) - 1
        for j in range(k + 1):
            piece = tuple(x[:j + 1]) + tuple(v + shift for v in x[j:])
            tops.append(piece)
            signs[piece] = s * (1 if j % 2 == 0 else -1)
    inc0 = {v: v for v in m.vertices}
    inc1 = {v: v + shift for v in m.vertices}
    return Cobordism(m.dim + 1, tops, signs, m, inc0, m, inc1)


def glue(w1, w2):
    """Compose cobordisms: w1 followed by w2 along w1.sigma1 = w2.sigma0.

    The outgoing boundary of w1 and incoming boundary of w2 must be the
    same complex object (or equal); vertices of w2 are shifted and the
    shared boundary identified.
    """
    if w1.sigma1.tops != w2.sigma0.tops:
        raise ComplexError("boundaries do not match")
    shift = max(w1.body.vertices) + 1
    ident = {}
    for v in w2.sigma0.vertices:
        ident[w2.inc0[v]] = w1.inc1[v]

    def rename(v):
        return ident.get(v, v + shift)

    tops = list(w1.body.tops)
    signs = dict(w1.signs)
    for t in w2.body.tops:
        nt = tuple(sorted(rename(v) for v in t))
        tops.append(nt)
        signs[nt] = w2.signs[t]
    inc0 = dict(w1.inc0)
    inc1 = {v: rename(w2.inc1[v]) for v in w2.sigma1.vertices}
    return Cobordism(w1.body.dim, tops, signs, w1.sigma0, inc0, w2.sigma1, inc1)


def disjoint_union(m1, m2):
    """Disjoint union of closed oriented complexes (ids of m2 shifted)."""
    if m1.dim != m2.dim:
        raise ComplexError("dimension mismatch")
    shift = max(m1.vertices) + 1
    tops = list(m1.tops)
    signs = dict(m1.signs)
    for t in m2.tops:
        nt = tuple(v + shift for v in t)
        tops.append(nt)
        signs[nt] = m2.signs[t]
    return OrientedClosedComplex(m1.dim, tops, signs)


# ---------------------------------------------------------------------------
# Pachner moves


class PachnerMove:
    """A k-to-(n+2-k) bistellar move.

    For k >= 2, verts is the increasing (n+2)-tuple of vertex ids carrying
    an order-preserving embedding of the first k boundary faces of the
    (n+1)-simplex.  For k = 1, verts is the single top n-simplex to be
    coned off; the fresh cone vertex is allocated past the end of the
    vertex order chosen by fresh_low (min id - 1 when True, else
    max id + 1; the low position matches the labeled gluing of the
    subdivision move, the high one is the exact inverse of the k = n+1
    move).
    """

    def __init__(self, k, verts, fresh_low=True):
        self.k = k
        self.verts = tuple(verts)
        self.fresh_low = bool(fresh_low) if k == 1 else False

    def __repr__(self):
        return "PachnerMove(k=%d, verts=%r, fresh_low=%r)" % (self.k, self.verts, self.fresh_low)

    def __eq__(self, other):
        return isinstance(other, PachnerMove) and (
            (self.k, self.verts, self.fresh_low) == (other.k, other.verts, other.fresh_low)
        )

    def __hash__(self):
        return hash((self.k, self.verts, self.fresh_low))


def _move_scheme(m, move):
    """Old tops, new tops, removed faces and added faces of a move.

    Returns None with a reason string when the move is illegal.
    """
    n = m.dim
    k = move.k
    if not 1 <= k <= n + 1:
        return None, "k out of range"
    if k == 1:
        target = move.verts
        if len(target) != n + 1 or not m.has_simplex(target):
            return None, "target is not a top simplex"
        if move.fresh_low:
            fresh = min(m.vertices) - 1
            full = (fresh,) + tuple(target)
        else:
            fresh = max(m.vertices) + 1
            full = tuple(target) + (fresh,)
        old_tops = [target]
        new_tops = [tuple(sorted(set(full) - {target[i]})) for i in range(n + 1)]
        removed = [target]
        added = sorted(
            f for f in faces_of(full) if fresh in f and len(f) < len(full)
        )
        return (old_tops, new_tops, removed, added, full), None
    verts = move.verts
    if len(verts) != n + 2 or list(verts) != sorted(set(verts)):
        return None, "verts must be n+2 distinct increasing ids"
    old_tops = [verts[:i] + verts[i + 1:] for i in range(k)]
    for t in old_tops:
        if t not in set(m.tops):
            return None, "embedded face %r is not a top simplex" % (t,)
    new_tops = [verts[:i] + verts[i + 1:] for i in range(k, n + 2)]
    low = set(verts[:k])
    high = set(verts[k:])
    removed = [f for f in faces_of(verts) if high.issubset(f) and len(f) < len(verts)]
    added = [f for f in faces_of(verts) if low.issubset(f) and len(f) < len(verts)]
    return (old_tops, new_tops, removed, added, verts), None


def check_pachner(m, move):
    """Validate a move; returns (scheme, None) or (None, reason)."""
    scheme, reason = _move_scheme(m, move)
    if scheme is None:
        return None, reason
    old_tops, new_tops, removed, added, full = scheme
    top_set = set(m.tops)
    # removed faces must not be used by tops outside the replaced region
    removed_set = set(removed)
    for t in top_set:
        if t in set(old_tops):
            continue
        for f in faces_of(t):
            if f in removed_set:
                return None, "face %r of the region is shared outside it" % (f,)
    # added simplices must be genuinely new
    for f in added:
        if m.has_simplex(f):
            return None, "simplex %r already present" % (f,)
    # orientation of the embedded region must alternate coherently
    if move.k >= 2:
        base = m.signs[old_tops[0]]
        for i, t in enumerate(old_tops):
            if m.signs[t] != base * (1 if i % 2 == 0 else -1):
                return None, "region orientation is incoherent"
    return scheme, None


def apply_pachner(m, move):
    """Apply a legal move, returning the retriangulated complex.

    New top-simplex signs are solved from signed-boundary cancellation and
    verified; an illegal move raises ComplexError.
    """
    scheme, reason = check_pachner(m, move)
    if scheme is None:
        raise ComplexError("illegal Pachner move: %s" % reason)
    old_tops, new_tops, removed, added, full = scheme

    removed_chain = defaultdict(int)
    for t in old_tops:
        s = m.signs[t]
        for f, eps in boundary_faces(t):
            removed_chain[f] += s * eps

    tops = [t for t in m.tops if t not in set(old_tops)]
    signs = {t: m.signs[t] for t in tops}

    # Every new top shares a codimension-1 face with the removed region
    # and is the only new top containing it, so its sign is forced by the
    # cancellation equation on that face; the final validation re-checks
    # the whole signed boundary.
    new_signs = {}
    for t in new_tops:
        for f, eps in boundary_faces(t):
            coeff = removed_chain.get(f, 0)
            if coeff in (1, -1):
                new_signs[t] = coeff * eps
                break
        else:
            raise ComplexError("could not orient new simplex %r" % (t,))

    tops.extend(new_tops)
    signs.update(new_signs)
    return OrientedClosedComplex(m.dim, tops, signs)


def legal_moves(m):
    """All legal Pachner moves on m, deterministically ordered."""
    n = m.dim
    moves = []
    for t in m.tops:
        for fresh_low in (True, False):
            mv = PachnerMove(1, t, fresh_low=fresh_low)
            if check_pachner(m, mv)[0] is not None:
                moves.append(mv)
    candidates = set()
    tops = set(m.tops)
    for t1 in m.tops:
        for t2 in m.tops:
            if t2 <= t1:
                continue
            union = tuple(sorted(set(t1) | set(t2)))
            if len(union) == n + 2:
                candidates.add(union)
    for verts in sorted(candidates):
        for k in range(2, n + 2):
            if all(verts[:i] + verts[i + 1:] in tops for i in range(k)):
                mv = PachnerMove(k, verts)
                if check_pachner(m, mv)[0] is not None:
                    moves.append(mv)
    return moves


def glued_region(m, move):
    """The complex of m with the full (n+1)-simplex of the move glued on.

    Used to count flat extensions across a move; top simplices of mixed
    dimension are fine here since only low-dimensional cells matter.
    """
    scheme, reason = check_pachner(m, move)
    if scheme is None:
        raise ComplexError("illegal Pachner move: %s" % reason)
    _, _, _, _, full = scheme
    return Complex(m.dim + 1, list(m.tops) + [full], validate=False)


# ---------------------------------------------------------------------------
# JSON and registry

def complex_to_json(m):
    return {
        "dim": m.dim,
        "vertices": list(m.vertices),
        "top": [{"verts": list(t), "sign": m.signs[t]} for t in m.tops],
    }


def complex_from_json(data):
    tops = [tuple(item["verts"]) for item in data["top"]]
    signs = {tuple(item["verts"]): item["sign"] for item in data["top"]}
    return OrientedClosedComplex(data["dim"], tops, signs)


def resolve_complex(name_or_path):
    """Resolve "sphere:n", "prism:<name>" or a JSON file path."""
    if name_or_path.startswith("sphere:"):
        return boundary_simplex(int(name_or_path.split(":", 1)[1]))
    if name_or_path.startswith("prism:"):
        return prism(resolve_complex(name_or_path.split(":", 1)[1]))
    with open(name_or_path) as fh:
        return complex_from_json(json.load(fh))
