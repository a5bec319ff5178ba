"""Integer-coefficient graded polynomials and truncated power series in one variable.

A ``Poly`` is a sparse map ``degree -> coefficient``.  ``truncation=None``
means the polynomial is known exactly in every degree; ``truncation=D``
means coefficients are only known for degrees ``<= D`` (power-series mode).
Coefficients are ints, or Fractions transiently while averaging; results
that are meant to be Poincare polynomials must pass :func:`as_integer`.

Division is exact over the integers and fails hard on a nonzero remainder;
a remainder in a Molien average signals a bug, never a rounding problem.
"""

from __future__ import annotations

from fractions import Fraction


class Poly:
    __slots__ = ("coeffs", "truncation")

    def __init__(self, coeffs=None, truncation=None):
        cs = {}
        if coeffs:
            for d, c in coeffs.items():
                if c == 0:
                    continue
                if truncation is not None and d > truncation:
                    continue
                cs[int(d)] = c
        self.coeffs = cs
        self.truncation = truncation

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(truncation=None):
        return Poly({}, truncation)

    @staticmethod
    def one(truncation=None):
        return Poly({0: 1}, truncation)

    @staticmethod
    def monomial(degree, coeff=1, truncation=None):
        return Poly({degree: coeff}, truncation)

    @staticmethod
    def one_minus(degree):
        """1 - x^degree, exact."""
        return Poly({0: 1, degree: -1})

    @staticmethod
    def geometric(degree, truncation):
        """1/(1 - x^degree) as a series truncated at ``truncation``."""
        if degree <= 0:
            raise ValueError("geometric series needs a positive degree")
        return Poly({d: 1 for d in range(0, truncation + 1, degree)}, truncation)

    @staticmethod
    def from_map(m, truncation=None):
        return Poly({int(d): int(c) for d, c in m.items()}, truncation)

    # -- basic structure ----------------------------------------------

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, degree):
        if self.truncation is not None and degree > self.truncation:
            raise KeyError("degree %d beyond truncation %d" % (degree, self.truncation))
        return self.coeffs.get(degree, 0)

    def degree(self):
        """Top degree with a nonzero coefficient, or -1 for the zero polynomial."""
        return max(self.coeffs) if self.coeffs else -1

    def support(self):
        return sorted(self.coeffs)

    def is_exact(self):
        return self.truncation is None

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _common_truncation(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other):
        other = _promote(other)
        t = self._common_truncation(self.truncation, other.truncation)
        cs = dict(self.coeffs)
        for d, c in other.coeffs.items():
            cs[d] = cs.get(d, 0) + c
        return Poly(cs, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly({d: -c for d, c in self.coeffs.items()}, self.truncation)

    def __sub__(self, other):
        return self + (-_promote(other))

    def __rsub__(self, other):
        return _promote(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly.zero(self.truncation)
            return Poly({d: c * other for d, c in self.coeffs.items()}, self.truncation)
        other = _promote(other)
        t = self._common_truncation(self.truncation, other.truncation)
        cs = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                if t is not None and d > t:
                    continue
                cs[d] = cs.get(d, 0) + c1 * c2
        return Poly(cs, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _promote(other)
        return self.coeffs == other.coeffs and self.truncation == other.truncation

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.truncation))

    def substitute_power(self, e):
        """Replace the variable x by x^e (regrades degree d to d*e)."""
        t = None if self.truncation is None else self.truncation * e
        return Poly({d * e: c for d, c in self.coeffs.items()}, t)

    def truncate(self, cutoff):
        t = cutoff if self.truncation is None else min(cutoff, self.truncation)
        return Poly({d: c for d, c in self.coeffs.items() if d <= t}, t)

    def agrees(self, other, through=None):
        """Coefficientwise equality in every degree both sides know about."""
        other = _promote(other)
        limit = self._common_truncation(self.truncation, other.truncation)
        limit = self._common_truncation(limit, through)
        if limit is None:
            return self.coeffs == other.coeffs
        for d in range(limit + 1):
            if self.coeffs.get(d, 0) != other.coeffs.get(d, 0):
                return False
        return True

    # -- exact division -----------------------------------------------

    def divide_exact(self, divisor):
        """Exact polynomial division; raises ArithmeticError on a remainder.

        Both operands must be exact polynomials (no truncation).
        """
        divisor = _promote(divisor)
        if self.truncation is not None or divisor.truncation is not None:
            raise ValueError("exact division requires untruncated polynomials")
        if not divisor.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        rem = dict(self.coeffs)
        dd = divisor.degree()
        lead = divisor.coeffs[dd]
        quot = {}
        while rem:
            rd = max(rem)
            if rd < dd:
                raise ArithmeticError("non-exact polynomial division (remainder of degree %d)" % rd)
            c = rem[rd]
            q = c / lead if isinstance(c, Fraction) or isinstance(lead, Fraction) else None
            if q is None:
                if c % lead != 0:
                    q = Fraction(c, lead)
                else:
                    q = c // lead
            quot[rd - dd] = q
            for d2, c2 in divisor.coeffs.items():
                nd = rd - dd + d2
                nc = rem.get(nd, 0) - q * c2
                if nc:
                    rem[nd] = nc
                else:
                    rem.pop(nd, None)
        return Poly(quot)

    # -- shape checks ---------------------------------------------------

    def as_integer(self):
        """Force all coefficients to int; ArithmeticError on a true fraction."""
        cs = {}
        for d, c in self.coeffs.items():
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ArithmeticError("non-integral coefficient %s in degree %d" % (c, d))
                c = int(c)
            cs[d] = c
        return Poly(cs, self.truncation)

    def is_palindromic(self):
        """P(x) == x^d P(1/x) for d the top degree.  Zero counts as palindromic."""
        if not self.coeffs:
            return True
        d = self.degree()
        return all(self.coeffs.get(i, 0) == self.coeffs.get(d - i, 0) for i in range(d + 1))

    # -- formatting ------------------------------------------------------

    def pretty(self, var="t"):
        if not self.coeffs:
            return "0"
        terms = []
        for d in sorted(self.coeffs):
            c = self.coeffs[d]
            if d == 0:
                body = str(abs(c))
            else:
                mag = abs(c)
                power = var if d == 1 else "%s^%d" % (var, d)
                body = power if mag == 1 else "%d%s" % (mag, power)
            if not terms:
                terms.append(body if c > 0 else "-" + body)
            else:
                terms.append(("+ " if c > 0 else "- ") + body)
        return " ".join(terms)

    def to_map(self):
        """JSON-friendly map with string keys in sorted numeric order."""
        return {str(d): self.coeffs[d] for d in sorted(self.coeffs)}

    def __repr__(self):
        tail = "" if self.truncation is None else " (through degree %d)" % self.truncation
        return "<Poly %s%s>" % (self.pretty(), tail)


def _promote(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly({0: x})
    raise TypeError("cannot interpret %r as a polynomial" % (x,))


def prod(polys, truncation=None):
    acc = Poly.one(truncation)
    for p in polys:
        acc = acc * p
    return acc
