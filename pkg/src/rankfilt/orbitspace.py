"""Canonical descriptors of unitary orbit spaces and the Molien engine.

An orbit space U(k)/H is described by the restriction of the standard
representation to the isotropy group H:

* blocks: a factor U(a) embedded as ``u -> u (x) I_l`` on a subspace of
  dimension a*l (tensor multiplicity l);
* a complement of dimension c carrying a full U(c) factor;
* a fixed subspace of dimension k - sum(a*l) - c on which H acts trivially;
* a finite part permuting identical blocks, recorded structurally as a
  generalized wreath tree (``Wreath`` nodes carry full symmetric groups on
  identical copies, plain juxtaposition carries no symmetry).

When every block has tensor multiplicity 1 and there is no fixed subspace,
the identity component of H contains a maximal torus of U(k) and the graded
dimensions of H*(U(k)/H; Q) are computed by a Molien average over the
induced subgroup W of the symmetric group S_k: in each even degree 2d the
dimension is the multiplicity of the trivial character in the degree-d part
of the coinvariant algebra of S_k.  The average is taken over cycle types
with class-size weights (a cycle index), never element by element.

Grading convention, fixed globally: one power of q is cohomological degree 2
(complex cells), so all Poincare polynomials substitute q -> t^2.

Descriptor grammar (round-trip parsed, used as cache key and CLI argument)::

    descriptor := 'U(' k ')/' factor ('x' factor)*
    factor     := 'U(' c ')'          complement with a full unitary group
                | 'e'                 trivial isotropy marker
                | unit
    unit       := '(' a [',' l] ')'   single block, l defaults to 1
                | 'S' g 'wr' unit     g identical copies permuted by Sym(g)
                | '{' unit ('x' unit)* '}'
    k, c, a, l, g := positive decimal integers (c may be 0)

If no complement factor is written, the complement is the full leftover
k - sum(a*l); with an explicit complement the leftover beyond it is the
fixed subspace.  So ``U(2)/(1)xU(1)`` is the projective line while
``U(2)/U(1)`` is the unit sphere in C^2.  Bracketed forms such as
``U(4)/[2x(1,1)|S2]xU(2)`` and ``U(3)/[S2wr(1)|x(1)]`` are accepted on
input: inside brackets '|' separates terms, 'n x unit' abbreviates n
juxtaposed copies, and a bare 'S<n>' marker upgrades the preceding
n-fold term to a wreath.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly, prod


class DescriptorError(ValueError):
    """Malformed orbit descriptor (bad structure or unparsable string)."""


class NotTorusCommensurable(ValueError):
    """Molien engine called on a descriptor whose isotropy misses the torus."""


# ---------------------------------------------------------------------------
# descriptor structure


@dataclass(frozen=True)
class Block:
    size: int
    mult: int = 1

    def __post_init__(self):
        if self.size < 1 or self.mult < 1:
            raise DescriptorError("block sizes and multiplicities must be >= 1")


@dataclass(frozen=True)
class Wreath:
    """``copies`` identical copies of ``inner``, permuted by the full symmetric group."""

    inner: object
    copies: int

    def __post_init__(self):
        if self.copies < 1:
            raise DescriptorError("wreath copy count must be >= 1")


@dataclass(frozen=True)
class Bunch:
    """Juxtaposed units with no symmetry between them."""

    units: tuple


def _unit_weight(u):
    if isinstance(u, Block):
        return u.size * u.mult
    if isinstance(u, Wreath):
        return u.copies * _unit_weight(u.inner)
    if isinstance(u, Bunch):
        return sum(_unit_weight(v) for v in u.units)
    raise DescriptorError("unknown unit %r" % (u,))


def _unit_leaves(u, out):
    if isinstance(u, Block):
        out.append(u)
    elif isinstance(u, Wreath):
        for _ in range(u.copies):
            _unit_leaves(u.inner, out)
    elif isinstance(u, Bunch):
        for v in u.units:
            _unit_leaves(v, out)
    else:
        raise DescriptorError("unknown unit %r" % (u,))


def _unit_key(u):
    if isinstance(u, Block):
        return (0, u.size, u.mult)
    if isinstance(u, Wreath):
        return (1, u.copies) + (_unit_key(u.inner),)
    return (2, len(u.units)) + tuple(_unit_key(v) for v in u.units)


def _canonical_unit(u):
    if isinstance(u, Block):
        return u
    if isinstance(u, Wreath):
        inner = _canonical_unit(u.inner)
        if u.copies == 1:
            return inner
        return Wreath(inner, u.copies)
    if isinstance(u, Bunch):
        flat = []
        for v in u.units:
            cv = _canonical_unit(v)
            if isinstance(cv, Bunch):
                flat.extend(cv.units)
            else:
                flat.append(cv)
        flat.sort(key=_unit_key)
        if len(flat) == 1:
            return flat[0]
        return Bunch(tuple(flat))
    raise DescriptorError("unknown unit %r" % (u,))


@dataclass(frozen=True)
class OrbitDescriptor:
    """U(k)/H for H built from blocks, a full complement, and a fixed subspace."""

    k: int
    units: tuple = ()
    complement: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise DescriptorError("ambient rank must be >= 1")
        if self.complement < 0:
            raise DescriptorError("complement dimension must be >= 0")
        if self.fixed < 0:
            raise DescriptorError(
                "blocks and complement overfill the ambient space (fixed part %d)" % self.fixed
            )

    @property
    def fixed(self):
        return self.k - sum(_unit_weight(u) for u in self.units) - self.complement

    def blocks(self):
        """Leaf blocks (size, mult) in tree order."""
        out = []
        for u in self.units:
            _unit_leaves(u, out)
        return out

    def canonicalize(self):
        flat = []
        for u in self.units:
            cu = _canonical_unit(u)
            if isinstance(cu, Bunch):
                flat.extend(cu.units)
            else:
                flat.append(cu)
        flat.sort(key=_unit_key)
        return OrbitDescriptor(self.k, tuple(flat), self.complement)

    def canonical_string(self):
        d = self.canonicalize()
        parts = [_unit_string(u) for u in d.units]
        if d.complement > 0:
            parts.append("U(%d)" % d.complement)
        body = "x".join(parts) if parts else "e"
        return "U(%d)/%s" % (d.k, body)

    def is_torus_commensurable(self):
        """True when the identity component of H contains a maximal torus of U(k)."""
        return self.fixed == 0 and all(b.mult == 1 for b in self.blocks())

    def __str__(self):
        return self.canonical_string()


def _unit_string(u):
    if isinstance(u, Block):
        if u.mult == 1:
            return "(%d)" % u.size
        return "(%d,%d)" % (u.size, u.mult)
    if isinstance(u, Wreath):
        return "S%dwr%s" % (u.copies, _unit_string(u.inner))
    return "{%s}" % "x".join(_unit_string(v) for v in u.units)


def real_dimension(d):
    """dim U(k)/H = k^2 - sum of block dims - complement dim (finite part contributes 0)."""
    return d.k * d.k - sum(b.size * b.size for b in d.blocks()) - d.complement * d.complement


# ---------------------------------------------------------------------------
# descriptor parsing


class _Scanner:
    def __init__(self, text):
        self.text = text.replace(" ", "")
        self.pos = 0

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, s):
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def expect(self, s):
        if not self.take(s):
            raise DescriptorError(
                "expected %r at position %d in %r" % (s, self.pos, self.text)
            )

    def integer(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise DescriptorError("expected an integer at position %d in %r" % (start, self.text))
        return int(self.text[start:self.pos])

    def done(self):
        return self.pos >= len(self.text)


def parse_descriptor(text):
    """Parse a descriptor string; see the module docstring for the grammar."""
    sc = _Scanner(text)
    sc.expect("U(")
    k = sc.integer()
    sc.expect(")")
    sc.expect("/")
    units, complement = _parse_factors(sc, bracket=False)
    if not sc.done():
        raise DescriptorError("trailing input at position %d in %r" % (sc.pos, sc.text))
    if complement is None:
        complement = k - sum(_unit_weight(u) for u in units)
        if complement < 0:
            raise DescriptorError("blocks overfill U(%d)" % k)
    return OrbitDescriptor(k, tuple(units), complement).canonicalize()


def _parse_factors(sc, bracket):
    units = []
    complement = None
    pending = None  # (unit, copies) awaiting a possible S<g> upgrade
    explicit_trivial = False

    def flush():
        nonlocal pending
        if pending is not None:
            unit, copies = pending
            units.extend([unit] * copies)
            pending = None

    while True:
        if sc.peek() in ("x", "|"):
            sc.pos += 1
            continue
        if bracket and sc.take("]"):
            break
        if sc.done():
            if bracket:
                raise DescriptorError("unterminated '[' in %r" % sc.text)
            break
        if sc.take("["):
            flush()
            inner_units, inner_c = _parse_factors(sc, bracket=True)
            units.extend(inner_units)
            if inner_c is not None:
                if complement is not None:
                    raise DescriptorError("more than one complement factor")
                complement = inner_c
            continue
        if sc.take("U("):
            flush()
            c = sc.integer()
            sc.expect(")")
            if complement is not None:
                raise DescriptorError("more than one complement factor")
            complement = c
            continue
        if sc.take("e"):
            flush()
            explicit_trivial = True
            continue
        if sc.peek().isdigit():
            n = sc.integer()
            sc.expect("x")
            flush()
            pending = (_parse_unit(sc), n)
            continue
        if sc.peek() == "S":
            save = sc.pos
            sc.pos += 1
            g = sc.integer()
            if sc.take("wr"):
                sc.pos = save
                flush()
                units.append(_parse_unit(sc))
            else:
                # bare S<g>: wreath marker for the pending multiplicity group
                if pending is None or pending[1] != g:
                    raise DescriptorError(
                        "symmetry marker S%d has no matching %d-fold term" % (g, g)
                    )
                units.append(Wreath(pending[0], g))
                pending = None
            continue
        flush()
        units.append(_parse_unit(sc))
    flush()
    if explicit_trivial and complement is None:
        complement = 0
    return units, complement


def _parse_unit(sc):
    if sc.peek() == "S":
        sc.expect("S")
        g = sc.integer()
        sc.expect("wr")
        return Wreath(_parse_unit(sc), g)
    if sc.take("{"):
        inner = [_parse_unit(sc)]
        while sc.take("x") or sc.take("|"):
            inner.append(_parse_unit(sc))
        sc.expect("}")
        return Bunch(tuple(inner))
    if sc.take("("):
        a = sc.integer()
        l = sc.integer() if sc.take(",") else 1
        sc.expect(")")
        return Block(a, l)
    raise DescriptorError("cannot parse a unit at position %d in %r" % (sc.pos, sc.text))


# ---------------------------------------------------------------------------
# cycle indices

# A cycle index is a map {cycle type -> weight}: cycle types are partitions
# stored as descending tuples, weights are Fractions summing to 1.


def partitions_of(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def _z_lambda(part):
    """Size of the S_n centralizer of a permutation of cycle type ``part``."""
    z = 1
    mult = {}
    for p in part:
        mult[p] = mult.get(p, 0) + 1
    for p, m in mult.items():
        f = 1
        for i in range(1, m + 1):
            f *= i
        z *= (p ** m) * f
    return z


def sym_cycle_index(n):
    """Cycle index of the full symmetric group S_n."""
    if n == 0:
        return {(): Fraction(1)}
    return {part: Fraction(1, _z_lambda(part)) for part in partitions_of(n)}


def ci_product(z1, z2):
    """Cycle index of a direct product acting on the disjoint union."""
    out = {}
    for p1, w1 in z1.items():
        for p2, w2 in z2.items():
            p = tuple(sorted(p1 + p2, reverse=True))
            out[p] = out.get(p, Fraction(0)) + w1 * w2
    return out


def _ci_scale(z, factor):
    out = {}
    for p, w in z.items():
        sp = tuple(sorted((c * factor for c in p), reverse=True))
        out[sp] = out.get(sp, Fraction(0)) + w
    return out


def ci_plethysm(outer, inner):
    """Cycle index of the wreath product: ``outer`` permutes copies of ``inner``.

    Each cycle of length i in an outer term contributes one independent copy
    of the inner index with all cycle lengths multiplied by i.
    """
    out = {}
    for mu, w in outer.items():
        term = {(): Fraction(1)}
        for i in mu:
            term = ci_product(term, _ci_scale(inner, i))
        for p, u in term.items():
            out[p] = out.get(p, Fraction(0)) + w * u
    return out


def _unit_cycle_index(u):
    if isinstance(u, Block):
        if u.mult != 1:
            raise NotTorusCommensurable(
                "not torus-commensurable: block of tensor multiplicity %d" % u.mult
            )
        return sym_cycle_index(u.size)
    if isinstance(u, Wreath):
        return ci_plethysm(sym_cycle_index(u.copies), _unit_cycle_index(u.inner))
    if isinstance(u, Bunch):
        z = {(): Fraction(1)}
        for v in u.units:
            z = ci_product(z, _unit_cycle_index(v))
        return z
    raise DescriptorError("unknown unit %r" % (u,))


def descriptor_cycle_index(d):
    """Cycle index on k points of the Weyl-level group W <= S_k of the isotropy.

    W is generated by the symmetric groups inside each block and the
    complement, extended by the finite part permuting identical blocks.
    """
    if not d.is_torus_commensurable():
        raise NotTorusCommensurable(
            "not torus-commensurable: %s" % d.canonical_string()
        )
    z = sym_cycle_index(d.complement)
    for u in d.units:
        z = ci_product(z, _unit_cycle_index(u))
    return z


def group_order(cycle_index, n):
    """Order of the group behind a cycle index on n points."""
    ident = tuple([1] * n)
    w = cycle_index.get(ident)
    if not w:
        raise ValueError("cycle index has no identity term")
    return int(Fraction(1) / w)


# ---------------------------------------------------------------------------
# coinvariant characters and the Molien average


def graded_char_coinv(cycle_type, k):
    """Graded character of the S_k coinvariant algebra at a given cycle type.

    Returns the polynomial prod_{i=1..k} (1 - q^i) / prod_{c in type} (1 - q^c)
    in the variable q; division is exact by construction and any remainder is
    an error.  The identity type yields the q-factorial [k]_q!.
    """
    cycle_type = tuple(sorted(cycle_type, reverse=True))
    if sum(cycle_type) != k or any(c < 1 for c in cycle_type):
        raise DescriptorError("%r is not a partition of %d" % (cycle_type, k))
    num = prod(Poly.one_minus(i) for i in range(1, k + 1))
    den = prod(Poly.one_minus(c) for c in cycle_type)
    return num.divide_exact(den).as_integer()


def molien_poincare(d):
    """Poincare polynomial of U(k)/H for torus-commensurable isotropy H.

    Averages the coinvariant-algebra characters over the cycle index of the
    Weyl-level group and regrades q -> t^2.  The result is exact: an
    integer polynomial with non-negative coefficients and constant term 1.
    """
    d = d.canonicalize()
    z = descriptor_cycle_index(d)
    acc = Poly.zero()
    for part, w in z.items():
        acc = acc + graded_char_coinv(part, d.k) * w
    p = acc.as_integer()
    if p[0] != 1 or any(c < 0 for c in p.coeffs.values()):
        raise ArithmeticError("Molien average is not a Poincare polynomial: %s" % p.pretty("q"))
    return p.substitute_power(2)


# ---------------------------------------------------------------------------
# independent flag-manifold oracle

_gauss_cache = {}


def gaussian_binomial(n, j):
    """Gaussian binomial [n choose j]_q via the Pascal recursion.

    Independent of the Molien engine on purpose: this is the oracle side of
    the dual-route check.
    """
    if j < 0 or j > n:
        return Poly.zero()
    if j == 0 or j == n:
        return Poly.one()
    key = (n, min(j, n - j))
    got = _gauss_cache.get(key)
    if got is None:
        j = key[1]
        got = gaussian_binomial(n - 1, j - 1) + gaussian_binomial(n - 1, j) * Poly.monomial(j)
        _gauss_cache[key] = got
    return got


def flag_poincare_oracle(composition):
    """Poincare polynomial of the flag manifold of a composition (k_1, ..., k_r).

    Computed as a product of Gaussian binomials, then regraded q -> t^2.
    """
    composition = tuple(composition)
    if any(c < 0 for c in composition):
        raise DescriptorError("composition parts must be non-negative")
    acc = Poly.one()
    total = 0
    for c in composition:
        total += c
        acc = acc * gaussian_binomial(total, c)
    return acc.substitute_power(2)
