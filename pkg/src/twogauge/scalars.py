"""Exact phases in Q/Z and formal rational combinations of them.

A Phase is the exponent x of e^{2*pi*i*x}, stored as a Fraction mod 1.  A
Scalar is a finite Q-linear combination of phases, kept in a reduced form:
every exponent is folded into [0, 1/2) using e^{2*pi*i*(x+1/2)} = -e^{2*pi*i*x},
so any combination supported on phases of order <= 2 collapses to a single
rational and comparison there is exact.  For support of higher order, zero
testing falls back to a 256-bit numeric embedding with tolerance 1e-9.
"""

from fractions import Fraction

import mpmath

ZERO_TOL = 1e-9
PRECISION_BITS = 256

_HALF = Fraction(1, 2)


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError("expected an exact rational, got %r" % (value,))


class Phase:
    """An element of Q/Z; the exponent of a root of unity."""

    __slots__ = ("exponent",)

    def __init__(self, exponent=0):
        self.exponent = _as_fraction(exponent) % 1

    @property
    def order(self):
        """Smallest n >= 1 with n copies of the phase summing to zero."""
        return self.exponent.denominator

    def __add__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.exponent + other.exponent)

    def __sub__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.exponent - other.exponent)

    def __neg__(self):
        return Phase(-self.exponent)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Phase(self.exponent * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Phase):
            return self.exponent == other.exponent
        return NotImplemented

    def __hash__(self):
        return hash(self.exponent)

    def __repr__(self):
        return "Phase(%s)" % self.exponent

    def __str__(self):
        return str(self.exponent)

    def is_zero(self):
        return self.exponent == 0


def parse_phase(text):
    """Parse "p/q" (an additive exponent in Q/Z) into a Phase."""
    return Phase(Fraction(text))


class Scalar:
    """Formal finite Q-combination of phases, canonically reduced.

    Internally a map {exponent in [0, 1/2) -> rational coefficient}; the
    exponent 0 slot is the plain rational part.  Addition, multiplication
    and negation are exact.  Equality is exact whenever the difference
    reduces structurally to zero, otherwise decided numerically at 256-bit
    precision with the documented tolerance.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        reduced = {}
        if terms:
            for exponent, coeff in terms.items():
                exponent = _as_fraction(exponent) % 1
                coeff = _as_fraction(coeff)
                if exponent >= _HALF:
                    exponent -= _HALF
                    coeff = -coeff
                if coeff:
                    new = reduced.get(exponent, 0) + coeff
                    if new:
                        reduced[exponent] = new
                    else:
                        reduced.pop(exponent, None)
        self._terms = reduced

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({Fraction(0): Fraction(1)})

    @classmethod
    def rational(cls, value):
        return cls({Fraction(0): _as_fraction(value)})

    @classmethod
    def from_phase(cls, phase, coeff=1):
        return cls({phase.exponent: _as_fraction(coeff)})

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Scalar(terms)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Scalar({e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Scalar(terms)

    __rmul__ = __mul__

    def scaled(self, rational):
        rational = _as_fraction(rational)
        return Scalar({e: c * rational for e, c in self._terms.items()})

    def is_rational(self):
        return all(e == 0 for e in self._terms)

    def as_rational(self):
        """The exact rational value; raises if irrational support remains."""
        if not self._terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError("scalar has irrational phase support: %r" % self)
        return self._terms[Fraction(0)]

    def complex_value(self, precision_bits=PRECISION_BITS):
        with mpmath.workprec(precision_bits):
            total = mpmath.mpc(0)
            for e, c in self._terms.items():
                weight = mpmath.mpf(c.numerator) / c.denominator
                total += weight * mpmath.expjpi(2 * mpmath.mpf(e.numerator) / e.denominator)
            return complex(total)

    def is_zero(self, tol=ZERO_TOL):
        if not self._terms:
            return True
        if self.is_rational():
            return False  # reduced nonzero rational
        return abs(self.complex_value()) < tol

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self - other).is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if not self._terms:
            return "Scalar(0)"
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            if e == 0:
                parts.append(str(c))
            else:
                parts.append("%s*e(%s)" % (c, e))
        return "Scalar(%s)" % " + ".join(parts)

    def to_json(self):
        """Serialize: exact "p/q" when rational, else a numeric embedding."""
        if self.is_rational():
            return {"value": str(self.as_rational()), "exact": True}
        z = self.complex_value()
        return {"re": z.real, "im": z.imag, "err": ZERO_TOL, "exact": False}


def phase_sum(phases):
    """Sum an iterable of Phases in Q/Z."""
    total = Fraction(0)
    for p in phases:
        total += p.exponent
    return Phase(total)
