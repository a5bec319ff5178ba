"""Koszul-model computation of H*(U(k)/H; Q) for arbitrary descriptors.

For the identity component H_0 = prod_b U(a_b) x U(c) of the isotropy
(embedded with tensor multiplicities and possibly a fixed subspace), the
rational cohomology of U(k)/H_0 is the cohomology of the Koszul complex

    Q[generators of H*(BH_0)] (x) Lambda(y_1, ..., y_k),
    deg y_i = 2i - 1,    d(y_i) = restriction of the i-th Chern class,

where the restricted total Chern class is prod_b c(V_b)^{l_b} * c(W):
each block of size a contributes polynomial generators in degrees
2, 4, ..., 2a, the complement contributes degrees 2, ..., 2c, and the
fixed subspace contributes the factor 1.

A finite part permuting identical blocks acts on the generators by
permutation, commutes with d (the Chern images are symmetric in identical
blocks, which is verified, not assumed), and rational cohomology of the
disconnected quotient is the cohomology of the invariant subcomplex.  The
invariant subcomplex is spanned by orbit sums of monomials, so the whole
computation stays over the integers.

Everything is graded and computed degree by degree on explicit monomial
bases with exact sparse elimination; there is no floating point and no
Groebner machinery.  This engine is deliberately independent of the Molien
engine so the two can cross-check each other.
"""

from __future__ import annotations

import itertools

from .cache import memo
from .linalg import sparse_rank
from .orbitspace import (
    Block,
    Bunch,
    OrbitDescriptor,
    Wreath,
    molien_poincare,
    real_dimension,
)
from .poly import Poly

DEFAULT_CUTOFF_CAP = 24
DEFAULT_BASIS_BUDGET = 500_000


class ResourceLimit(RuntimeError):
    """A graded piece exceeded the configured basis budget."""

    def __init__(self, degree, size, budget):
        self.degree = degree
        self.size = size
        self.budget = budget
        super().__init__(
            "degree %d needs a basis of size %d, over the budget %d" % (degree, size, budget)
        )


class EngineMismatch(ArithmeticError):
    """Molien and Cartan engines disagree: a genuine math bug signal."""

    def __init__(self, descriptor, molien, cartan):
        self.descriptor = descriptor
        self.molien = molien
        self.cartan = cartan
        super().__init__(
            "engines disagree on %s: molien %s vs cartan %s"
            % (descriptor.canonical_string(), molien.pretty(), cartan.pretty())
        )


class InvariantViolation(AssertionError):
    """The finite part failed to commute with the differential."""


# ---------------------------------------------------------------------------
# integer multivariate polynomials on exponent tuples


def _poly_mul(p, q, nvars):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(m1[i] + m2[i] for i in range(nvars))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _unit_leaf_slots(u, acc):
    if isinstance(u, Block):
        acc.append(u)
    elif isinstance(u, Wreath):
        for _ in range(u.copies):
            _unit_leaf_slots(u.inner, acc)
    elif isinstance(u, Bunch):
        for v in u.units:
            _unit_leaf_slots(v, acc)


def _unit_leaf_count(u):
    acc = []
    _unit_leaf_slots(u, acc)
    return len(acc)


def _unit_automorphisms(u):
    """All leaf-slot permutations of the finite part of a unit, as tuples."""
    if isinstance(u, Block):
        return [(0,)]
    if isinstance(u, Bunch):
        parts = [_unit_automorphisms(v) for v in u.units]
        sizes = [_unit_leaf_count(v) for v in u.units]
        out = []
        for combo in itertools.product(*parts):
            perm = []
            offset = 0
            for p, size in zip(combo, sizes):
                perm.extend(offset + i for i in p)
                offset += size
            out.append(tuple(perm))
        return out
    if isinstance(u, Wreath):
        inner = _unit_automorphisms(u.inner)
        size = _unit_leaf_count(u.inner)
        out = []
        for sigma in itertools.permutations(range(u.copies)):
            for combo in itertools.product(inner, repeat=u.copies):
                perm = [0] * (u.copies * size)
                for i in range(u.copies):
                    tau = combo[i]
                    for j in range(size):
                        perm[i * size + j] = sigma[i] * size + tau[j]
                out.append(tuple(perm))
        return out
    raise TypeError("unknown unit %r" % (u,))


def _descriptor_automorphisms(d):
    """Finite-part elements as permutations of the leaf blocks of ``d``."""
    return _unit_automorphisms(Bunch(tuple(d.units))) if d.units else [()]


class KoszulComplex:
    """The Cartan model of U(k)/H for a canonical orbit descriptor."""

    def __init__(self, descriptor, basis_budget=DEFAULT_BASIS_BUDGET):
        d = descriptor.canonicalize()
        self.descriptor = d
        self.k = d.k
        self.basis_budget = basis_budget

        # polynomial generators: per leaf block, then the complement
        self.var_degrees = []
        self.var_owner = []  # (leaf index, chern index) or ('c', j)
        leaves = d.blocks()
        self.leaf_sizes = [b.size for b in leaves]
        self.leaf_var_start = []
        for li, b in enumerate(leaves):
            self.leaf_var_start.append(len(self.var_degrees))
            for j in range(1, b.size + 1):
                self.var_degrees.append(2 * j)
                self.var_owner.append((li, j))
        self.complement_var_start = len(self.var_degrees)
        for j in range(1, d.complement + 1):
            self.var_degrees.append(2 * j)
            self.var_owner.append(("c", j))
        self.nvars = len(self.var_degrees)

        self.chern = self._chern_images(leaves)
        self.group = self._variable_permutations(leaves)
        if len(self.group) > 1:
            self._check_equivariance()

        self._mono_cache = {}
        self._orbit_min_cache = {}
        self._ext_list = None
        self._rank_cache = {}
        self._basis_cache = {}

    # -- construction ---------------------------------------------------

    def _chern_images(self, leaves):
        """Degree-2i parts of the restricted total Chern class, i = 1..k."""
        nv = self.nvars
        zero = tuple([0] * nv)
        total = {zero: 1}
        for li, b in enumerate(leaves):
            start = self.leaf_var_start[li]
            factor = {zero: 1}
            for j in range(b.size):
                mono = list(zero)
                mono[start + j] = 1
                factor[tuple(mono)] = 1
            for _ in range(b.mult):
                total = _poly_mul(total, factor, nv)
        if self.descriptor.complement:
            factor = {zero: 1}
            for j in range(self.descriptor.complement):
                mono = list(zero)
                mono[self.complement_var_start + j] = 1
                factor[tuple(mono)] = 1
            total = _poly_mul(total, factor, nv)
        by_degree = {}
        for mono, c in total.items():
            deg = self._mono_degree(mono)
            if deg % 2 or deg > 2 * self.k:
                raise InvariantViolation("restricted Chern class has a stray degree %d" % deg)
            by_degree.setdefault(deg, {})[mono] = c
        return [by_degree.get(2 * i, {}) for i in range(1, self.k + 1)]

    def _mono_degree(self, mono):
        return sum(e * self.var_degrees[i] for i, e in enumerate(mono) if e)

    def _variable_permutations(self, leaves):
        perms = set()
        for leaf_perm in _descriptor_automorphisms(self.descriptor):
            var_perm = list(range(self.nvars))
            for li, target in enumerate(leaf_perm):
                if self.leaf_sizes[li] != self.leaf_sizes[target]:
                    raise InvariantViolation("finite part permutes unequal blocks")
                src = self.leaf_var_start[li]
                dst = self.leaf_var_start[target]
                for j in range(self.leaf_sizes[li]):
                    var_perm[src + j] = dst + j
            perms.add(tuple(var_perm))
        return sorted(perms)

    def _check_equivariance(self):
        for perm in self.group:
            for rho in self.chern:
                moved = {}
                for mono, c in rho.items():
                    moved[self._apply_perm(mono, perm)] = c
                if moved != rho:
                    raise InvariantViolation(
                        "finite part does not commute with the differential"
                    )

    def _apply_perm(self, mono, perm):
        out = [0] * self.nvars
        for i, e in enumerate(mono):
            if e:
                out[perm[i]] = e
        return tuple(out)

    # -- bases ------------------------------------------------------------

    def _monomials(self, degree):
        """Exponent tuples of weighted degree ``degree`` (degree is even)."""
        key = degree
        got = self._mono_cache.get(key)
        if got is not None:
            return got

        out = []

        def rec(idx, remaining, current):
            if idx == self.nvars:
                if remaining == 0:
                    out.append(tuple(current))
                return
            d = self.var_degrees[idx]
            for e in range(remaining // d + 1):
                current.append(e)
                rec(idx + 1, remaining - e * d, current)
                current.pop()

        if degree % 2 == 0 and degree >= 0:
            rec(0, degree, [])
        self._mono_cache[key] = out
        return out

    def _orbit_min(self, mono):
        got = self._orbit_min_cache.get(mono)
        if got is None:
            got = min(self._apply_perm(mono, p) for p in self.group)
            self._orbit_min_cache[mono] = got
        return got

    def _exterior(self):
        if self._ext_list is None:
            gens = list(range(1, self.k + 1))
            subsets = []
            for r in range(self.k + 1):
                for comb in itertools.combinations(gens, r):
                    subsets.append((comb, sum(2 * i - 1 for i in comb)))
            self._ext_list = subsets
        return self._ext_list

    def basis(self, degree, invariants=True):
        """Basis of the degree-``degree`` piece: pairs (exterior tuple, monomial).

        With ``invariants`` (and a nontrivial finite part) monomials are orbit
        representatives and each pair stands for the orbit sum.
        """
        key = (degree, invariants and len(self.group) > 1)
        got = self._basis_cache.get(key)
        if got is not None:
            return got
        use_orbits = invariants and len(self.group) > 1
        out = []
        for ext, edeg in self._exterior():
            rest = degree - edeg
            if rest < 0 or rest % 2:
                continue
            for mono in self._monomials(rest):
                if use_orbits and self._orbit_min(mono) != mono:
                    continue
                out.append((ext, mono))
        if len(out) > self.basis_budget:
            raise ResourceLimit(degree, len(out), self.basis_budget)
        self._basis_cache[key] = out
        return out

    # -- the differential ---------------------------------------------------

    def _image_rows(self, degree, invariants):
        """Rows of d: C^degree -> C^(degree+1) in the chosen basis pair."""
        use_orbits = invariants and len(self.group) > 1
        src = self.basis(degree, invariants)
        tgt = self.basis(degree + 1, invariants)
        tgt_index = {b: i for i, b in enumerate(tgt)}
        rows = []
        for ext, mono in src:
            row = {}
            expansion = [mono] if not use_orbits else self._orbit_elements(mono)
            for x in expansion:
                for pos, i in enumerate(ext):
                    rho = self.chern[i - 1]
                    if not rho:
                        continue
                    sign = -1 if pos % 2 else 1
                    new_ext = ext[:pos] + ext[pos + 1:]
                    for mu, c in rho.items():
                        tm = tuple(x[v] + mu[v] for v in range(self.nvars))
                        if use_orbits and self._orbit_min(tm) != tm:
                            continue
                        j = tgt_index.get((new_ext, tm))
                        if j is None:
                            continue
                        row[j] = row.get(j, 0) + sign * c
            rows.append({j: v for j, v in row.items() if v})
        return rows

    def _orbit_elements(self, mono):
        return sorted({self._apply_perm(mono, p) for p in self.group})

    def differential_rank(self, degree, invariants=True):
        key = (degree, invariants and len(self.group) > 1)
        got = self._rank_cache.get(key)
        if got is None:
            got = sparse_rank(self._image_rows(degree, invariants))
            self._rank_cache[key] = got
        return got

    def dims(self, cutoff, invariants=True):
        """Dimensions of the graded pieces of the (invariant) complex."""
        return [len(self.basis(d, invariants)) for d in range(cutoff + 1)]

    def cohomology_dims(self, cutoff, invariants=True):
        """Graded dimensions of cohomology in degrees 0..cutoff."""
        dims = self.dims(cutoff, invariants)
        ranks = [self.differential_rank(d, invariants) for d in range(cutoff + 1)]
        out = []
        for d in range(cutoff + 1):
            below = ranks[d - 1] if d > 0 else 0
            out.append(dims[d] - ranks[d] - below)
        return out

    def verify_d_squared(self, degrees):
        """Check d(d(b)) == 0 on every basis element in the given degrees."""
        for d in degrees:
            src = self.basis(d, invariants=False)
            mid = self.basis(d + 1, invariants=False)
            rows = self._image_rows(d, invariants=False)
            rows_next = self._image_rows(d + 1, invariants=False)
            for row in rows:
                acc = {}
                for j, v in row.items():
                    for j2, v2 in rows_next[j].items():
                        acc[j2] = acc.get(j2, 0) + v * v2
                if any(acc.values()):
                    raise InvariantViolation("d^2 != 0 in degree %d" % d)
        del src, mid
        return True


def invariant_dims(complex_, cutoff):
    """Graded dimensions of the finite-part-invariant cohomology of a complex."""
    return complex_.cohomology_dims(cutoff, invariants=True)


def cartan_cohomology(descriptor, cutoff, basis_budget=DEFAULT_BASIS_BUDGET):
    """Poincare polynomial of U(k)/H through ``cutoff`` via the Koszul model.

    For a disconnected H the invariant subcomplex is used, which over Q
    computes the cohomology of the quotient by the finite part.
    """
    d = descriptor.canonicalize()
    key = ("cartan", d.canonical_string(), cutoff)

    def compute():
        kc = KoszulComplex(d, basis_budget=basis_budget)
        dims = kc.cohomology_dims(cutoff, invariants=True)
        return Poly({i: c for i, c in enumerate(dims)}, truncation=cutoff)

    return memo.get_or_compute(key, compute)


def default_cutoff(descriptor, cap=DEFAULT_CUTOFF_CAP):
    """Twice the real dimension of the orbit, capped: past the dimension the
    cohomology is zero, so the factor two is pure safety margin."""
    return min(max(2 * real_dimension(descriptor), 0), cap)


def poincare(descriptor, cutoff=None, engine="auto", basis_budget=DEFAULT_BASIS_BUDGET):
    """Poincare polynomial dispatcher.

    Torus-commensurable descriptors go to the Molien engine and come back
    exact; everything else goes to the Cartan engine truncated at ``cutoff``
    (defaulting to :func:`default_cutoff`).  In ``auto`` mode with an explicit
    cutoff both engines run when both apply and must agree; disagreement
    raises :class:`EngineMismatch` rather than picking a side.
    """
    d = descriptor.canonicalize()
    commensurable = d.is_torus_commensurable()
    if engine == "molien":
        return memo.get_or_compute(
            ("molien", d.canonical_string()), lambda: molien_poincare(d)
        )
    if engine == "cartan":
        return cartan_cohomology(d, default_cutoff(d) if cutoff is None else cutoff, basis_budget)
    if engine != "auto":
        raise ValueError("unknown engine %r" % (engine,))
    if commensurable:
        p = memo.get_or_compute(("molien", d.canonical_string()), lambda: molien_poincare(d))
        if cutoff is not None:
            q = cartan_cohomology(d, cutoff, basis_budget)
            if not p.agrees(q, cutoff):
                raise EngineMismatch(d, p, q)
        return p
    return cartan_cohomology(d, default_cutoff(d) if cutoff is None else cutoff, basis_budget)
