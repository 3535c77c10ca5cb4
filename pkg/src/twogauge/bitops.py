"""Vectorized exact kernel for two-element label groups.

When |G| <= 2 and |A| <= 2 (the action is then forced trivial) a basis
state is a bit string: edge bits low, triangle bits high.  Conjugating by
the triangle-label Hadamard transform turns every local operator into a
short sum of monomial maps

    state -> coeff * (-1)^{phase(state)} * mask(state) * (state XOR delta),

so products stay short and operator identities can be checked exactly on
the whole state space with integer numpy arithmetic.  The transform is a
fixed invertible rational change of basis, so identities verified here are
identities of the original operators.
"""

from fractions import Fraction
from math import lcm

import numpy as np

from .connections import simple_gauge_1


def eligible(tg):
    return tg.g.order <= 2 and tg.a.order <= 2


class Monomial:
    """coeff * (-1)^phase * mask * XOR-shift, phase/mask over all states."""

    __slots__ = ("coeff", "dx", "dy", "phase", "mask")

    def __init__(self, coeff, dx=0, dy=0, phase=None, mask=None):
        self.coeff = Fraction(coeff)
        self.dx = dx
        self.dy = dy
        self.phase = phase
        self.mask = mask


class BitKernel:
    """Exact operator algebra on the bit-encoded state space."""

    def __init__(self, space):
        if not eligible(space.tg):
            raise ValueError("kernel needs two-element label groups")
        self.space = space
        self.tg = space.tg
        self.has_g = space.tg.g.order == 2
        self.has_a = space.tg.a.order == 2
        self.ne = len(space.edges) if self.has_g else 0
        self.nt = len(space.triangles) if self.has_a else 0
        self.nbits = self.ne + self.nt
        self.size = 1 << self.nbits
        self.states = np.arange(self.size, dtype=np.uint32)
        self._alpha8 = self._alpha_table()
        self._xbits = {}
        self._edge_pos = {e: i for i, e in enumerate(space.edges)} if self.has_g else {}
        self._tri_pos = (
            {p: i for i, p in enumerate(space.triangles)} if self.has_a else {}
        )

    # -- encoding ----------------------------------------------------------

    def encode(self, state):
        ne_all = len(self.space.edges)
        bits = 0
        if self.has_g:
            for i, v in enumerate(state[:ne_all]):
                bits |= v << i
        if self.has_a:
            for i, v in enumerate(state[ne_all:]):
                bits |= v << (self.ne + i)
        return bits

    def decode(self, bits):
        ne_all = len(self.space.edges)
        nt_all = len(self.space.triangles)
        gpart = tuple((bits >> i) & 1 for i in range(ne_all)) if self.has_g else (0,) * ne_all
        apart = (
            tuple((bits >> (self.ne + i)) & 1 for i in range(nt_all))
            if self.has_a
            else (0,) * nt_all
        )
        return gpart + apart

    def edge_mask(self, edges):
        mask = 0
        for e in edges:
            mask |= 1 << self._edge_pos[e]
        return mask

    def tri_mask(self, triangles):
        mask = 0
        for p in triangles:
            mask |= 1 << (self.ne + self._tri_pos[p])
        return mask

    def _alpha_table(self):
        table = np.zeros(8, dtype=np.uint8)
        if self.has_g and self.has_a:
            for a in range(2):
                for b in range(2):
                    for c in range(2):
                        table[(a << 2) | (b << 1) | c] = self.tg.alpha(a, b, c)
        return table

    def xbit(self, e):
        """Bit array of one edge over the whole space."""
        if e not in self._xbits:
            pos = self._edge_pos[e]
            self._xbits[e] = ((self.states >> np.uint32(pos)) & np.uint32(1)).astype(np.uint8)
        return self._xbits[e]

    def parity(self, mask):
        """Parity of the state bits under a constant mask, as uint8."""
        return (np.bitwise_count(self.states & np.uint32(mask)) & 1).astype(np.uint8)

    def _alpha_bits(self, a, b, c):
        idx = (a.astype(np.uint8) << 2) | (b.astype(np.uint8) << 1) | c.astype(np.uint8)
        return self._alpha8[idx]

    def _const_bits(self, value):
        return np.full(self.size, value, dtype=np.uint8)

    # -- gauge data --------------------------------------------------------

    def gauge_shift(self, phi0):
        """(dx mask, triangle-shift phase bits) of a vertex transformation.

        The triangle shift of the transformed state is a function of the
        edge bits only; returned as a per-triangle dict of bit arrays.
        """
        dx = 0
        if self.has_g:
            for e in self.space.edges:
                e0, e1 = e
                if (phi0[e0] ^ phi0[e1]) & 1:
                    dx |= 1 << self._edge_pos[e]
        shifts = {}
        if not self.has_a:
            return dx, shifts
        for p in self.space.triangles:
            p0, p1, p2 = p
            if self.has_g:
                a = self.xbit((p1, p2))
                b = self.xbit((p0, p1))
                ap = a ^ ((phi0[p1] ^ phi0[p2]) & 1)
                bp = b ^ ((phi0[p0] ^ phi0[p1]) & 1)
                f0 = self._const_bits(phi0[p0] & 1)
                f1 = self._const_bits(phi0[p1] & 1)
                f2 = self._const_bits(phi0[p2] & 1)
                n_p = (
                    self._alpha_bits(ap, bp, f0)
                    ^ self._alpha_bits(f2, a, b)
                    ^ self._alpha_bits(ap, f1, b)
                )
            else:
                n_p = self._const_bits(0)
            if n_p.any():
                shifts[p] = n_p
        return dx, shifts

    def gauge_monomial(self, phi0):
        """The vertex-data permutation as a single monomial."""
        dx, shifts = self.gauge_shift(phi0)
        phase = None
        for p, bits in shifts.items():
            yhat = self.parity(1 << (self.ne + self._tri_pos[p]))
            term = bits & yhat
            phase = term if phase is None else phase ^ term
        return Monomial(1, dx=dx, dy=0, phase=phase, mask=None)

    # -- operator builders (triangle-Hadamard frame) ------------------------

    def op_Atilde(self, v, g):
        if g == 0 or not self.has_g:
            return [Monomial(1)]
        phi0 = {w: (1 if w == v else 0) for w in self.space.vertices}
        return [self.gauge_monomial(phi0)]

    def op_As(self, path, g):
        if g == 0 or not self.has_g:
            return [Monomial(1)]
        phi0 = {w: (1 if w in path else 0) for w in self.space.vertices}
        return [self.gauge_monomial(phi0)]

    def _edge_projector_mask(self, v):
        mask = None
        if not self.has_a:
            return mask
        for e in self.space.edges:
            if v in e:
                tris = self.tri_mask(self.space.sigma.cofaces(e, 2))
                cond = self.parity(tris) == 0
                mask = cond if mask is None else (mask & cond)
        return None if mask is None else mask.astype(np.uint8)

    def _flatness_mask(self, v):
        """Edge-law indicator on the triangles at v (twisted models only)."""
        if not self.has_g or self.tg.alpha_is_trivial():
            return None
        mask = None
        for p in self.space.triangles:
            if v not in p:
                continue
            p0, p1, p2 = p
            hol = self.xbit((p0, p1)) ^ self.xbit((p1, p2)) ^ self.xbit((p0, p2))
            cond = hol == 0
            mask = cond if mask is None else (mask & cond)
        return None if mask is None else mask.astype(np.uint8)

    def op_Ag(self, v, g):
        base = self.op_Atilde(v, g)[0]
        mask = self._edge_projector_mask(v)
        flat = self._flatness_mask(v)
        if flat is not None:
            mask = flat if mask is None else (mask & flat)
        if mask is None:
            return [base]
        merged = mask if base.mask is None else (base.mask & mask)
        return [Monomial(base.coeff, base.dx, base.dy, base.phase, merged)]

    def op_Av(self, v):
        order = self.tg.g.order
        out = []
        for g in range(order):
            term = self.op_Ag(v, g)[0]
            out.append(Monomial(term.coeff / order, term.dx, term.dy, term.phase, term.mask))
        return out

    def op_Bp(self, p, value=0):
        if not self.has_g:
            empty = self._const_bits(1 if value == 0 else 0)
            return [Monomial(1, mask=empty)]
        p0, p1, p2 = p
        hol = self.xbit((p0, p1)) ^ self.xbit((p1, p2)) ^ self.xbit((p0, p2))
        return [Monomial(1, mask=(hol == value).astype(np.uint8))]

    def op_Ca(self, e, a):
        if a == 0 or not self.has_a:
            return [Monomial(1)]
        tris = self.tri_mask(self.space.sigma.cofaces(e, 2))
        return [Monomial(1, phase=self.parity(tris))]

    def op_Ce(self, e):
        if not self.has_a:
            return [Monomial(1)]
        tris = self.tri_mask(self.space.sigma.cofaces(e, 2))
        return [Monomial(1, mask=(self.parity(tris) == 0).astype(np.uint8))]

    def op_Crho(self, e, rho):
        if rho == 0:
            return self.op_Ce(e)
        tris = self.tri_mask(self.space.sigma.cofaces(e, 2))
        return [Monomial(1, mask=(self.parity(tris) == 1).astype(np.uint8))]

    def _tet_data(self, t):
        t0, t1, t2, t3 = t
        faces = ((t1, t2, t3), (t0, t2, t3), (t0, t1, t3), (t0, t1, t2))
        n_t = self.tri_mask(faces) if self.has_a else 0
        if self.has_g:
            alpha_bits = self._alpha_bits(
                self.xbit((t2, t3)), self.xbit((t1, t2)), self.xbit((t0, t1))
            )
        else:
            alpha_bits = self._const_bits(0)
        return n_t, alpha_bits

    def op_Dt(self, t):
        if not self.has_a:
            # defect reduces to the bare cocycle bit on the edge labels
            n_t, alpha_bits = self._tet_data(t)
            return [Monomial(1, mask=(alpha_bits == 0).astype(np.uint8))]
        n_t, alpha_bits = self._tet_data(t)
        half = Fraction(1, 2)
        plain = Monomial(half)
        flip = Monomial(half, dy=n_t, phase=alpha_bits.copy())
        return [plain, flip]

    def op_Dphi(self, t, phi):
        if phi == 0:
            return [Monomial(1)]
        n_t, alpha_bits = self._tet_data(t)
        if not self.has_a:
            sign = alpha_bits.copy()
            return [Monomial(1, phase=sign)]
        return [Monomial(1, dy=n_t, phase=alpha_bits.copy())]

    # -- algebra -----------------------------------------------------------

    def compose_monomials(self, m1, m2):
        """m1 applied after m2."""
        delta2 = np.uint32(m2.dx | m2.dy)
        if m1.phase is not None or m1.mask is not None:
            idx = self.states ^ delta2
        phase = None if m2.phase is None else m2.phase.copy()
        if m1.phase is not None:
            moved = m1.phase[idx]
            phase = moved if phase is None else (phase ^ moved)
        mask = None if m2.mask is None else m2.mask.copy()
        if m1.mask is not None:
            moved = m1.mask[idx]
            mask = moved if mask is None else (mask & moved)
        return Monomial(m1.coeff * m2.coeff, m1.dx ^ m2.dx, m1.dy ^ m2.dy, phase, mask)

    def op_compose(self, op1, op2):
        return [self.compose_monomials(a, b) for a in op1 for b in op2]

    def op_scale(self, op, factor):
        return [Monomial(m.coeff * factor, m.dx, m.dy, m.phase, m.mask) for m in op]

    def _accumulate(self, op, sign, buckets, denominator):
        for m in op:
            key = (m.dx, m.dy)
            weight = int(m.coeff * denominator) * sign
            values = np.full(self.size, weight, dtype=np.int64)
            if m.phase is not None:
                values[m.phase.astype(bool)] *= -1
            if m.mask is not None:
                values *= m.mask
            if key in buckets:
                buckets[key] += values
            else:
                buckets[key] = values

    def op_equal(self, op1, op2):
        denom = 1
        for m in op1 + op2:
            denom = lcm(denom, m.coeff.denominator)
        buckets = {}
        self._accumulate(op1, 1, buckets, denom)
        self._accumulate(op2, -1, buckets, denom)
        return all(not arr.any() for arr in buckets.values())

    def op_is_zero(self, op):
        return self.op_equal(op, [])

    # -- checks ------------------------------------------------------------

    def stabilizer_ops(self):
        ops = {}
        for v in self.space.vertices:
            ops[("A", v)] = self.op_Av(v)
        for p in self.space.triangles:
            ops[("B", p)] = self.op_Bp(p)
        for e in self.space.edges:
            ops[("C", e)] = self.op_Ce(e)
        for t in self.space.tets:
            ops[("D", t)] = self.op_Dt(t)
        return ops

    def commuting_check(self):
        """Pairwise commutators, idempotency, and the incidence identity
        A_v C_e = A_v = C_e A_v, verified on every state."""
        ops = self.stabilizer_ops()
        labels = sorted(ops, key=repr)
        report = {"pairs_checked": 0, "failures": [], "dimension": self.size}
        for i, la in enumerate(labels):
            for lb in labels[i + 1:]:
                ab = self.op_compose(ops[la], ops[lb])
                ba = self.op_compose(ops[lb], ops[la])
                if not self.op_equal(ab, ba):
                    report["failures"].append(("commutator", la, lb))
                report["pairs_checked"] += 1
        for la in labels:
            sq = self.op_compose(ops[la], ops[la])
            if not self.op_equal(sq, ops[la]):
                report["failures"].append(("idempotent", la))
        for e in self.space.edges:
            ce = ops[("C", e)]
            for v in e:
                av = ops[("A", v)]
                if not self.op_equal(self.op_compose(av, ce), av):
                    report["failures"].append(("absorb-right", v, e))
                if not self.op_equal(self.op_compose(ce, av), av):
                    report["failures"].append(("absorb-left", v, e))
        return report

    def one_flat_mask(self):
        """Indicator of the edge-composition law on every triangle."""
        ok = np.ones(self.size, dtype=np.uint8)
        if self.has_g:
            for p in self.space.triangles:
                p0, p1, p2 = p
                hol = self.xbit((p0, p1)) ^ self.xbit((p1, p2)) ^ self.xbit((p0, p2))
                ok &= (hol == 0).astype(np.uint8)
        return ok

    def flat_mask(self):
        """Indicator of flat states in the plain (untransformed) basis."""
        ok = np.ones(self.size, dtype=bool)
        if self.has_g:
            for p in self.space.triangles:
                p0, p1, p2 = p
                hol = self.xbit((p0, p1)) ^ self.xbit((p1, p2)) ^ self.xbit((p0, p2))
                ok &= hol == 0
        if self.has_a:
            for t in self.space.tets:
                n_t, alpha_bits = self._tet_data(t)
                ybits = (np.bitwise_count(self.states & np.uint32(n_t)) & 1).astype(np.uint8)
                ok &= (ybits ^ alpha_bits) == 0
        else:
            for t in self.space.tets:
                _, alpha_bits = self._tet_data(t)
                ok &= alpha_bits == 0
        return ok

    def vertex_product_op(self):
        """The composition of all vertex projectors, as a monomial sum."""
        op = [Monomial(1)]
        for v in self.space.vertices:
            op = self.op_compose(self.op_Av(v), op)
        return op

    def gsd(self):
        """Exact trace of (product of vertex projectors) restricted to the
        flat sector, computed per monomial via a Hadamard sum."""
        flat = self.flat_mask()
        flat_states = self.states[flat]
        if flat_states.size == 0:
            return 0
        op = self.vertex_product_op()
        ymask = self.size - (1 << self.ne)
        total = Fraction(0)
        scale = Fraction(1, 1 << self.nt)
        for m in op:
            if m.dx != 0:
                continue
            signs = np.ones(self.size, dtype=np.int64)
            if m.phase is not None:
                signs[m.phase.astype(bool)] = -1
            if m.mask is not None:
                signs *= m.mask
            dy_dot = (np.bitwise_count(flat_states & np.uint32(m.dy)) & 1).astype(np.int64)
            dy_sign = 1 - 2 * dy_dot
            if self.nt:
                per_x = signs.reshape(-1, 1 << self.ne).sum(axis=0)
                slice_sum = per_x[(flat_states & np.uint32((1 << self.ne) - 1)).astype(np.int64)]
            else:
                slice_sum = signs[flat_states.astype(np.int64)]
            contribution = int((dy_sign * slice_sum).sum())
            total += m.coeff * scale * contribution
        if total.denominator != 1:
            raise ValueError("projector trace %s is not an integer" % total)
        return int(total)

    # -- string operators ----------------------------------------------------

    def op_Bs(self, pairs, x):
        """Product of based holonomy projectors along the ribbon."""
        mask = None
        for v, p in pairs:
            term = self.op_Bp(p, value=x)[0].mask
            mask = term if mask is None else (mask & term)
        return [Monomial(1, mask=mask)]

    def op_Cs(self, edges, rho):
        mask = None
        phase = None
        for e in edges:
            term = self.op_Crho(e, rho)[0]
            if term.mask is not None:
                mask = term.mask if mask is None else (mask & term.mask)
            if term.phase is not None:
                phase = term.phase if phase is None else (phase ^ term.phase)
        return [Monomial(1, phase=phase, mask=mask)]

    def op_Ds(self, dual, phi):
        op = [Monomial(1)]
        for t in dual:
            op = self.op_compose(self.op_Dphi(t, phi), op)
        return op

    def string_relation_report(self, ribbon):
        """Exact full-space checks of the string-operator exchange and
        fusion relations on a ribbon."""
        tg = self.tg
        path, pairs, dual = ribbon.path, ribbon.pairs, ribbon.dual
        edges = ribbon.edges
        gs = range(tg.g.order)
        chars = range(tg.a.order)
        A = {g: self.op_As(path, g) for g in gs}
        B = {x: self.op_Bs(pairs, x) for x in gs}
        Cc = {r: self.op_Cs(edges, r) for r in chars}
        D = {f: self.op_Ds(dual, f) for f in chars}
        failures = []

        def check(name, lhs, rhs):
            if not self.op_equal(lhs, rhs):
                failures.append(name)

        for x in gs:
            for y in gs:
                expect = B[x] if x == y else []
                check("BB[%d,%d]" % (x, y), self.op_compose(B[x], B[y]), expect)
        for g in gs:
            for x in gs:
                conj = tg.g.mul(tg.g.mul(g, x), tg.g.inv(g))
                check(
                    "AB[%d,%d]" % (g, x),
                    self.op_compose(A[g], B[x]),
                    self.op_compose(B[conj], A[g]),
                )
        for r in chars:
            for s_ in chars:
                expect = Cc[r] if r == s_ else []
                check("CC[%d,%d]" % (r, s_), self.op_compose(Cc[r], Cc[s_]), expect)
        for f1 in chars:
            for f2 in chars:
                prod = _char_mul(tg.a, f1, f2)
                check("DD[%d,%d]" % (f1, f2), self.op_compose(D[f1], D[f2]), D[prod])
        for r in chars:
            for f in chars:
                check("CD[%d,%d]" % (r, f), self.op_compose(Cc[r], D[f]), self.op_compose(D[f], Cc[r]))
        for g in gs:
            for r in chars:
                moved = tg.action.act_char(g, r)
                check(
                    "AC[%d,%d]" % (g, r),
                    self.op_compose(A[g], Cc[r]),
                    self.op_compose(Cc[moved], A[g]),
                )
        for x in gs:
            for f in chars:
                check("BD[%d,%d]" % (x, f), self.op_compose(B[x], D[f]), self.op_compose(D[f], B[x]))
        for g in gs:
            for f in chars:
                check("AD[%d,%d]" % (g, f), self.op_compose(A[g], D[f]), self.op_compose(D[f], A[g]))
        for r in chars:
            for x in gs:
                check("CB[%d,%d]" % (r, x), self.op_compose(Cc[r], B[x]), self.op_compose(B[x], Cc[r]))
        return failures

    def string_pair_plain(self, ribbon, g, h):
        """Exact global identity A(g)A(h) = A(gh) (trivial-cocycle case)."""
        prod = self.op_compose(self.op_As(ribbon.path, g), self.op_As(ribbon.path, h))
        return self.op_equal(prod, self.op_As(ribbon.path, tg_mul(self.tg, g, h)))

    # -- columns in the plain basis (for cross-formalism comparisons) -------

    def flat_columns(self):
        """Ground-projector columns over flat states in the plain basis.

        For each flat state, a dict {state: Fraction} of the image under
        the product of all four projector families; exact, computed per
        monomial through an integer Hadamard sum over the triangle labels.
        """
        flat = self.flat_mask()
        flat_states = [int(s) for s in self.states[flat]]
        op = self.vertex_product_op()
        ne = self.ne
        xspace = 1 << ne
        yspace = 1 << self.nt
        denom = yspace
        for m in op:
            denom = lcm(denom, (m.coeff / yspace).denominator)
        prepared = []
        for m in op:
            values = np.ones(self.size, dtype=np.int64)
            if m.phase is not None:
                values[m.phase.astype(bool)] = -1
            if m.mask is not None:
                values = values * m.mask
            grid = values.reshape(-1, xspace)
            num = int(m.coeff / yspace * denom)
            dyv = m.dy >> ne
            sign_vec = 1 - 2 * (
                (np.bitwise_count(np.arange(yspace, dtype=np.uint32) & np.uint32(dyv)) & 1)
            ).astype(np.int64)
            prepared.append((m.dx, num, sign_vec, grid, {}))
        y_range = np.arange(yspace, dtype=np.int64)
        frac_cache = {}
        columns = {}
        for s0 in flat_states:
            x0 = s0 & (xspace - 1)
            y0 = s0 >> ne
            blocks = {}
            for dx, num, sign_vec, grid, cache in prepared:
                hat = cache.get(x0)
                if hat is None:
                    hat = _walsh(grid[:, x0].astype(np.int64))
                    cache[x0] = hat
                amp = hat[y0 ^ y_range] * sign_vec * num
                x1 = x0 ^ dx
                if x1 in blocks:
                    blocks[x1] += amp
                else:
                    blocks[x1] = amp.copy()
            out = {}
            for x1, arr in blocks.items():
                for y1 in np.nonzero(arr)[0]:
                    value = int(arr[y1])
                    frac = frac_cache.get(value)
                    if frac is None:
                        frac = Fraction(value, denom)
                        frac_cache[value] = frac
                    out[x1 | (int(y1) << ne)] = frac
            columns[s0] = out
        return columns


def _walsh(vec):
    """In-place integer Walsh-Hadamard transform of a power-of-two vector."""
    v = vec.copy()
    h = 1
    n = v.size
    while h < n:
        v = v.reshape(-1, 2, h)
        a = v[:, 0, :].copy()
        b = v[:, 1, :].copy()
        v[:, 0, :] = a + b
        v[:, 1, :] = a - b
        v = v.reshape(n)
        h *= 2
    return v


def _popcount_parity(x):
    return bin(x).count("1") & 1


def _char_mul(a, chi1, chi2):
    """Index of the product character."""
    values = tuple((x + y) % 1 for x, y in zip(a.characters[chi1], a.characters[chi2]))
    return a.characters.index(values)


def tg_mul(tg, g, h):
    return tg.g.mul(g, h)

