"""Two-element stabilizer fast path on the periodic cubic lattice: the
3+1D spin code on edges, its plaquette-dual, defect sectors of closed
loops, and the string-operator module tables.

Everything here is bit-packed integer linear algebra over F2; no floating
point and no state vectors.  Defect sectors are handled symbolically as
constraint systems (a stabilizer group with signs); operator actions on a
sector are read off from span membership, tracked signs, and commutation
parities.
"""

from collections import namedtuple


class ToricError(ValueError):
    pass


def _parity(x):
    return bin(x).count("1") & 1


class BitSystem:
    """Rows of a F2 matrix with sign bits, kept in echelon form."""

    def __init__(self, width):
        self.width = width
        self.rows = []  # (row, sign) pairs, echelonized
        self.pivots = {}

    def reduce(self, row, sign=0):
        for pivot, (prow, psign) in self.pivots.items():
            if (row >> pivot) & 1:
                row ^= prow
                sign ^= psign
        return row, sign

    def add(self, row, sign=0):
        """Insert a row; returns False on an inconsistent dependency."""
        row, sign = self.reduce(row, sign)
        if row == 0:
            return sign == 0
        pivot = row.bit_length() - 1
        self.pivots[pivot] = (row, sign)
        self.rows.append((row, sign))
        return True

    @property
    def rank(self):
        return len(self.pivots)

    def membership_sign(self, row):
        """Sign of the row as a combination of stored rows, or None."""
        row, sign = self.reduce(row, 0)
        if row != 0:
            return None
        return sign


class CubicLattice:
    """Periodic cubic lattice of linear size L >= 2."""

    def __init__(self, L):
        if L < 2:
            raise ToricError("linear size must be >= 2")
        self.L = L
        self.n_vertices = L ** 3
        self.n_edges = 3 * L ** 3
        self.n_plaquettes = 3 * L ** 3
        self.n_cubes = L ** 3
        if self.n_vertices - self.n_edges + self.n_plaquettes - self.n_cubes != 0:
            raise ToricError("cell count bookkeeping failed")

    def vertex(self, x, y, z):
        L = self.L
        return (x % L) + L * ((y % L) + L * (z % L))

    def coords(self, v):
        L = self.L
        return (v % L, (v // L) % L, v // (L * L))

    def shift(self, v, axis, step=1):
        x, y, z = self.coords(v)
        delta = [0, 0, 0]
        delta[axis] = step
        return self.vertex(x + delta[0], y + delta[1], z + delta[2])

    def edge(self, v, axis):
        return 3 * v + axis

    def plaquette(self, v, normal):
        return 3 * v + normal

    def edge_data(self, e):
        return e // 3, e % 3

    def star_edges(self, v):
        out = []
        for axis in range(3):
            out.append(self.edge(v, axis))
            out.append(self.edge(self.shift(v, axis, -1), axis))
        return out

    def plaquette_edges(self, p):
        v, normal = p // 3, p % 3
        a, b = (normal + 1) % 3, (normal + 2) % 3
        return [
            self.edge(v, a),
            self.edge(v, b),
            self.edge(self.shift(v, a), b),
            self.edge(self.shift(v, b), a),
        ]

    def cube_plaquettes(self, t):
        out = []
        for normal in range(3):
            out.append(self.plaquette(t, normal))
            out.append(self.plaquette(self.shift(t, normal), normal))
        return out

    def plaquettes_of_edge(self, e):
        v, axis = self.edge_data(e)
        out = []
        for normal in range(3):
            if normal == axis:
                continue
            other = 3 - axis - normal
            out.append(self.plaquette(v, normal))
            out.append(self.plaquette(self.shift(v, other, -1), normal))
        return out

    def loop_x(self, y, z):
        """Straight noncontractible loop of x-edges."""
        return [self.edge(self.vertex(x, y, z), 0) for x in range(self.L)]

    def square_loop(self, v, a, b):
        """The contractible boundary loop of one plaquette."""
        return [
            self.edge(v, a),
            self.edge(self.shift(v, a), b),
            self.edge(self.shift(v, b), a),
            self.edge(v, b),
        ]

    def loop_vertices(self, edges):
        verts = set()
        for e in edges:
            v, axis = self.edge_data(e)
            verts.add(v)
            verts.add(self.shift(v, axis))
        return verts


PauliWord = namedtuple("PauliWord", ["x_mask", "z_mask", "sign"])


def pauli_commute(a, b):
    return (_parity(a.x_mask & b.z_mask) ^ _parity(a.z_mask & b.x_mask)) == 0


def x_word(edge_ids, sign=0):
    mask = 0
    for e in edge_ids:
        mask ^= 1 << e
    return PauliWord(mask, 0, sign)


def z_word(edge_ids, sign=0):
    mask = 0
    for e in edge_ids:
        mask ^= 1 << e
    return PauliWord(0, mask, sign)


class StabilizerGroup:
    """Commuting Pauli generators over n qubits, with F2 rank."""

    def __init__(self, n_qubits, generators):
        self.n_qubits = n_qubits
        self.generators = list(generators)
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                if not pauli_commute(a, b):
                    raise ToricError("generators do not commute")

    @property
    def rank(self):
        system = BitSystem(2 * self.n_qubits)
        for w in self.generators:
            if not system.add(w.x_mask | (w.z_mask << self.n_qubits), w.sign):
                raise ToricError("inconsistent generator signs")
        return system.rank

    def gsd(self):
        return 1 << (self.n_qubits - self.rank)


def toric_code(L):
    """Edge-spin code: star X-products and plaquette Z-products."""
    lat = CubicLattice(L)
    gens = [x_word(lat.star_edges(v)) for v in range(lat.n_vertices)]
    gens += [z_word(lat.plaquette_edges(p)) for p in range(lat.n_plaquettes)]
    return lat, StabilizerGroup(lat.n_edges, gens)


def dual_toric_code(L):
    """Plaquette-spin code: edge X-products and cube Z-products."""
    lat = CubicLattice(L)
    gens = [
        PauliWord(sum(1 << p for p in lat.plaquettes_of_edge(e)), 0, 0)
        for e in range(lat.n_edges)
    ]
    gens += [
        PauliWord(0, sum(1 << p for p in lat.cube_plaquettes(t)), 0)
        for t in range(lat.n_cubes)
    ]
    return lat, StabilizerGroup(lat.n_plaquettes, gens)


def gsd_f2(stabilizer_group):
    return stabilizer_group.gsd()


# ---------------------------------------------------------------------------
# defect sectors


class Sector:
    """A joint eigenspace given by X-type and Z-type sign constraints."""

    def __init__(self, lattice, x_rows, z_rows):
        self.lattice = lattice
        n = lattice.n_edges
        self.x_system = BitSystem(n)
        self.z_system = BitSystem(n)
        for mask, sign in x_rows:
            if not self.x_system.add(mask, sign):
                raise ToricError("inconsistent X constraints")
        for mask, sign in z_rows:
            if not self.z_system.add(mask, sign):
                raise ToricError("inconsistent Z constraints")

    @property
    def dimension(self):
        return 1 << (self.lattice.n_edges - self.x_system.rank - self.z_system.rank)

    def z_eigenvalue(self, mask):
        """Sign bit of a Z-type word on the sector, or None if undetermined."""
        return self.z_system.membership_sign(mask)

    def x_eigenvalue(self, mask):
        return self.x_system.membership_sign(mask)

    def commutes_with_constraints(self, word):
        for system, flip in ((self.x_system, "z"), (self.z_system, "x")):
            for row, _ in system.rows:
                other = PauliWord(row, 0, 0) if flip == "z" else PauliWord(0, row, 0)
                if not pauli_commute(word, other):
                    return False
        return True


def flux_lines(lat, avoid_vertices):
    """Three straight noncontractible Z-lines avoiding given vertices."""
    lines = []
    avoid = set(avoid_vertices)
    for axis in range(3):
        found = None
        for c1 in range(lat.L):
            for c2 in range(lat.L):
                edges = []
                ok = True
                for c0 in range(lat.L):
                    coords = [0, 0, 0]
                    coords[axis] = c0
                    coords[(axis + 1) % 3] = c1
                    coords[(axis + 2) % 3] = c2
                    v = lat.vertex(*coords)
                    if v in avoid or lat.shift(v, axis) in avoid:
                        ok = False
                        break
                    edges.append(lat.edge(v, axis))
                if ok:
                    found = edges
                    break
            if found:
                break
        if found is None:
            raise ToricError("no flux line avoids the loop")
        lines.append(found)
    return lines


def _far_vertex(lat, loop_vertices):
    for v in range(lat.n_vertices):
        if v in loop_vertices:
            continue
        star = set(lat.loop_vertices(lat.star_edges(v)))
        if not (star & loop_vertices):
            return v
    raise ToricError("no background vertex is clear of the loop")


def defect_subspace(L, loop_edges, anchored=True, flipped_plaquettes=()):
    """Dimensions and exchange data of the loop defect sector.

    The sector keeps the star constraints away from the loop, all
    plaquette constraints (with optional sign flips), and pins the loop
    edges up.  With anchored=True one far background star is released and
    the three line fluxes are fixed, which reproduces the open-string
    counting on the closed lattice: the global product of stars forces the
    loop exchange operator to act trivially otherwise.  Returns a dict
    with dim_v, dim_w, and whether the loop star-product exchanges a
    basis pair of the sector without fixed vectors.
    """
    lat = CubicLattice(L)
    loop_edges = list(loop_edges)
    loop_verts = lat.loop_vertices(loop_edges)
    # validate the loop: every touched vertex has exactly two loop edges
    for v in loop_verts:
        deg = sum(1 for e in loop_edges for w in lat.loop_vertices([e]) if w == v)
        if deg != 2:
            raise ToricError("edge set is not a simple closed loop")
    anchor = _far_vertex(lat, loop_verts) if anchored else None

    flips = set(flipped_plaquettes)
    x_rows = []
    for v in range(lat.n_vertices):
        if v in loop_verts or v == anchor:
            continue
        x_rows.append((x_word(lat.star_edges(v)).x_mask, 0))
    z_rows = []
    for p in range(lat.n_plaquettes):
        sign = 1 if p in flips else 0
        z_rows.append((z_word(lat.plaquette_edges(p)).z_mask, sign))
    if anchored:
        for line in flux_lines(lat, loop_verts | {anchor}):
            z_rows.append((z_word(line).z_mask, 0))
    w_sector = Sector(lat, x_rows, z_rows)
    z_rows_v = z_rows + [(1 << e, 0) for e in loop_edges]
    v_sector = Sector(lat, x_rows, z_rows_v)

    exchange_word = x_word([e for v in loop_verts for e in lat.star_edges(v)])
    commutes = v_sector.commutes_with_constraints(exchange_word)
    diag = v_sector.x_eigenvalue(exchange_word.x_mask)
    exchange = None
    if commutes and diag is None and anchored:
        label = _label_word(lat, anchor, loop_verts)
        label_ok = (
            v_sector.commutes_with_constraints(label)
            and v_sector.z_eigenvalue(label.z_mask) is None
        )
        exchange = label_ok and not pauli_commute(exchange_word, label)
    return {
        "dim_v": v_sector.dimension,
        "dim_w": w_sector.dimension,
        "exchange_without_fixed_vectors": bool(exchange),
        "exchange_is_constrained_identity": diag == 0,
        "anchor": anchor,
    }


def _label_word(lat, anchor, loop_verts):
    """A Z-path from the anchor to the loop: the sector label operator."""
    targets = set(loop_verts)
    from collections import deque

    prev = {anchor: None}
    queue = deque([anchor])
    end = None
    while queue:
        v = queue.popleft()
        if v in targets:
            end = v
            break
        for axis in range(3):
            for step in (1, -1):
                w = lat.shift(v, axis, step)
                if w not in prev:
                    prev[w] = (v, axis, step)
                    queue.append(w)
    if end is None:
        raise ToricError("loop unreachable from the anchor")
    edges = []
    v = end
    while prev[v] is not None:
        u, axis, step = prev[v]
        edges.append(lat.edge(u if step == 1 else v, axis))
        v = u
    return z_word(edges)


# ---------------------------------------------------------------------------
# string-operator module tables


def _sector_tables(lat, sector, loop_edges, dual_plaquettes, anchor):
    """Action rows of the four product operators on one sector."""
    loop_verts = lat.loop_vertices(loop_edges)
    exchange_word = x_word([e for v in loop_verts for e in lat.star_edges(v)])
    if not sector.commutes_with_constraints(exchange_word):
        raise ToricError("loop operator leaves the sector")

    flux_signs = []
    for p in dual_plaquettes:
        sign = sector.z_eigenvalue(z_word(lat.plaquette_edges(p)).z_mask)
        if sign is None:
            raise ToricError("plaquette flux undetermined on the sector")
        flux_signs.append(sign)
    b_e_scalar = 1 if all(s == 0 for s in flux_signs) else 0
    b_u_scalar = 1 if all(s == 1 for s in flux_signs) else 0

    diag = sector.x_eigenvalue(exchange_word.x_mask)
    if sector.dimension == 1:
        simples = ("eps",)
        if diag != 0:
            raise ToricError("loop operator is not the identity on the sector")
        eps_u_row = {"eps": ["eps"]}
    elif sector.dimension == 2:
        simples = ("eps_e", "eps_u")
        label = _label_word(lat, anchor, loop_verts)
        if pauli_commute(exchange_word, label):
            raise ToricError("loop operator fails to exchange the basis pair")
        eps_u_row = {"eps_e": ["eps_u"], "eps_u": ["eps_e"]}
    else:
        raise ToricError("sector dimension %d unsupported" % sector.dimension)

    identity_row = {s: [s] for s in simples}
    zero_row = {s: [] for s in simples}

    def scaled(row, scalar):
        return {s: (list(images) if scalar else []) for s, images in row.items()}

    return {
        "eps_e.delta_e": scaled(identity_row, b_e_scalar),
        "eps_u.delta_e": scaled(eps_u_row, b_e_scalar),
        "eps_e.delta_u": scaled(identity_row, b_u_scalar),
        "eps_u.delta_u": scaled(eps_u_row, b_u_scalar),
    }


def string_action_tables(L):
    """Module tables of the four defect sectors, shaped exactly like the
    categorical tables.

    The trivial and dual-flux sectors use the fully constrained lattice;
    the loop sectors release the loop stars with a marked background
    vertex and fixed line fluxes so the loop exchange acts freely.
    """
    lat = CubicLattice(L)
    loop = lat.loop_x(0, 0)
    loop_verts = lat.loop_vertices(loop)
    dual = [lat.plaquette(lat.vertex(0, L // 2, L // 2), 0)]

    def base_rows(release_loop, flips):
        x_rows = []
        anchor = _far_vertex(lat, loop_verts) if release_loop else None
        for v in range(lat.n_vertices):
            if release_loop and (v in loop_verts or v == anchor):
                continue
            x_rows.append((x_word(lat.star_edges(v)).x_mask, 0))
        z_rows = []
        for p in range(lat.n_plaquettes):
            z_rows.append((z_word(lat.plaquette_edges(p)).z_mask, 1 if p in flips else 0))
        if release_loop:
            for line in flux_lines(lat, loop_verts | {anchor}):
                z_rows.append((z_word(line).z_mask, 0))
            for e in loop:
                z_rows.append((1 << e, 0))
        else:
            for line in flux_lines(lat, set()):
                z_rows.append((z_word(line).z_mask, 0))
        return x_rows, z_rows, anchor

    # m-sector flips: the four plaquettes around one edge away from the loop
    m_edge = lat.edge(lat.vertex(L // 2, L // 2, L // 2), 0)
    m_flips = set(lat.plaquettes_of_edge(m_edge))

    tables = {}
    for name, release, flips, dual_ps in (
        ("Vec^e", False, set(), dual),
        ("Vec^u", False, m_flips, sorted(m_flips)),
        ("Vec_Z2^e", True, set(), dual),
        ("Vec_Z2^u", True, m_flips, sorted(m_flips)),
    ):
        x_rows, z_rows, anchor = base_rows(release, flips)
        sector = Sector(lat, x_rows, z_rows)
        tables[name] = _sector_tables(lat, sector, loop, dual_ps, anchor)
    return tables
