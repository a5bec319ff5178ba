"""Pointed-multiset calculus and wedge-summand indexing of the rank filtration.

Index tuples (m_1, ..., m_t) of non-negative integers label the wedge
summands of the value of the mapping functor on the pointed set [t], in
ambient context (k, l).  The rank of a tuple is the sum of its entries;
a non-basepoint summand exists only when l * rank <= k, so the filtration
stage bound is always clipped to floor(k / l).  The all-zero tuple is the
basepoint and is never stored in a summand set.

``max_rank=None`` throughout means the unfiltered functor (stage infinity),
which internally coincides with stage floor(k / l).
"""

from __future__ import annotations

from dataclasses import dataclass, field


class ContractViolation(ValueError):
    """An operation was called outside its stated preconditions."""


# ---------------------------------------------------------------------------
# pointed maps


@dataclass(frozen=True)
class PointedMap:
    """A basepoint-preserving function [t] -> [s], with 0 the basepoint.

    ``values[i-1]`` is the image of i for 1 <= i <= t; the basepoint's image
    is implicitly 0 and not stored.
    """

    source_size: int
    target_size: int
    values: tuple

    def __post_init__(self):
        if self.source_size < 0 or self.target_size < 0:
            raise ContractViolation("negative set size")
        if len(self.values) != self.source_size:
            raise ContractViolation("value list does not match source size")
        for v in self.values:
            if not 0 <= v <= self.target_size:
                raise ContractViolation("value %r outside [0..%d]" % (v, self.target_size))

    @staticmethod
    def identity(t):
        return PointedMap(t, t, tuple(range(1, t + 1)))

    def __call__(self, i):
        if i == 0:
            return 0
        return self.values[i - 1]

    def compose(self, other):
        """self after other: [r] -> [t] -> [s]."""
        if other.target_size != self.source_size:
            raise ContractViolation("composition size mismatch")
        return PointedMap(
            other.source_size,
            self.target_size,
            tuple(self(v) for v in other.values),
        )

    def preimage(self, j):
        return tuple(i for i in range(1, self.source_size + 1) if self.values[i - 1] == j)


def pushforward(alpha, entries):
    """Push a tuple of multiplicities forward along a pointed map.

    Entry j of the result sums the entries of ``entries`` mapping to j;
    entries sent to the basepoint are discarded.
    """
    entries = tuple(entries)
    if alpha.source_size != len(entries):
        raise ContractViolation(
            "map source [%d] does not match tuple length %d" % (alpha.source_size, len(entries))
        )
    out = [0] * alpha.target_size
    for i, m in enumerate(entries, start=1):
        j = alpha(i)
        if j != 0:
            out[j - 1] += m
    return tuple(out)


# ---------------------------------------------------------------------------
# index tuples and summand sets


def rank_of(entries):
    return sum(entries)


@dataclass(frozen=True)
class IndexTuple:
    """An ordered tuple of multiplicities labelling a wedge summand over (k, l)."""

    entries: tuple
    k: int
    l: int

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ContractViolation("ambient ranks must be >= 1")
        if any(m < 0 for m in self.entries):
            raise ContractViolation("negative multiplicity")
        r = self.rank
        if r > 0 and self.l * r > self.k:
            raise ContractViolation(
                "tuple of rank %d cannot label a summand: %d * %d > %d" % (r, self.l, r, self.k)
            )

    @property
    def rank(self):
        return rank_of(self.entries)

    @property
    def is_basepoint(self):
        return self.rank == 0

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class SummandSet:
    """A canonically (lexicographically) ordered set of non-basepoint index tuples."""

    k: int
    l: int
    t: int
    max_rank: object  # int, or None for the unfiltered functor
    tuples: tuple = field(default=())

    def __post_init__(self):
        seen = set()
        prev = None
        for it in self.tuples:
            if it.is_basepoint:
                raise ContractViolation("basepoint tuple stored in a summand set")
            if len(it) != self.t:
                raise ContractViolation("tuple length differs from t")
            if it.entries in seen:
                raise ContractViolation("duplicate tuple in summand set")
            if prev is not None and not prev < it.entries:
                raise ContractViolation("summand set not in lexicographic order")
            seen.add(it.entries)
            prev = it.entries

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, entries):
        entries = tuple(entries)
        return any(it.entries == entries for it in self.tuples)

    def entry_tuples(self):
        return [it.entries for it in self.tuples]

    def to_json(self):
        return {
            "k": self.k,
            "l": self.l,
            "t": self.t,
            "max_rank": self.max_rank,
            "tuples": [list(it.entries) for it in self.tuples],
        }


def rank_bound(k, l, max_rank=None):
    """Effective rank bound: min(max_rank, floor(k/l)); None means unfiltered."""
    bound = k // l
    if max_rank is None:
        return bound
    return min(max_rank, bound)


def _tuples_with_sum_range(t, lo, hi):
    """All length-t tuples of non-negative ints with lo <= sum <= hi, in lex order."""
    if hi < 0 or hi < lo:
        return
    if t == 0:
        if lo <= 0 <= hi:
            yield ()
        return

    def rec(prefix, remaining_positions, min_sum, max_sum):
        if remaining_positions == 0:
            if min_sum <= 0:
                yield tuple(prefix)
            return
        for v in range(0, max_sum + 1):
            prefix.append(v)
            yield from rec(prefix, remaining_positions - 1, min_sum - v, max_sum - v)
            prefix.pop()

    yield from rec([], t, lo, hi)


def _check_context(k, l, t, max_rank):
    if k < 1 or l < 1:
        raise ContractViolation("need k, l >= 1")
    if t < 0:
        raise ContractViolation("need t >= 0")
    if max_rank is not None and max_rank < 0:
        raise ContractViolation("need max_rank >= 0")


def enumerate_summands(k, l, t, max_rank=None):
    """All non-basepoint tuples (m_1, ..., m_t) with sum <= min(max_rank, floor(k/l))."""
    _check_context(k, l, t, max_rank)
    bound = rank_bound(k, l, max_rank)
    tuples = tuple(
        IndexTuple(e, k, l) for e in _tuples_with_sum_range(t, 1, bound)
    )
    return SummandSet(k, l, t, max_rank, tuples)


def subquotient_summands(k, l, t, m, positive_only=False):
    """Tuples with sum exactly m; empty unless l*m <= k.

    With ``positive_only`` every entry must be >= 1 (the unpointed summand
    family on the set of supports).
    """
    _check_context(k, l, t, m)
    if l * m > k:
        return SummandSet(k, l, t, m, ())
    out = []
    for e in _tuples_with_sum_range(t, m, m):
        if positive_only and any(v == 0 for v in e):
            continue
        if sum(e) > 0:
            out.append(IndexTuple(e, k, l))
    return SummandSet(k, l, t, m, tuple(out))


def latching_quotient(k, l, t, max_rank=None):
    """Tuples with every entry >= 1 and sum <= min(max_rank, floor(k/l)).

    Empty exactly when t exceeds the effective rank bound: the latching
    quotient of the functor is trivial beyond that stage.
    """
    _check_context(k, l, t, max_rank)
    bound = rank_bound(k, l, max_rank)
    out = []
    for e in _tuples_with_sum_range(t, max(t, 1), bound):
        if all(v >= 1 for v in e):
            out.append(IndexTuple(e, k, l))
    return SummandSet(k, l, t, max_rank, tuple(out))


# ---------------------------------------------------------------------------
# composition


def compose_rank(r, s):
    """Rank of a composite: ranks multiply."""
    if r < 0 or s < 0:
        raise ContractViolation("ranks must be non-negative")
    return r * s


def compose_indices(m_tuple, n_tuple):
    """Compose index tuples; contexts must share the middle matrix rank.

    For M over (k, l) and N over (l, n) the composite lives over (k, n) and
    consists of all pairwise products m_i * n_j, ordered lexicographically in
    (i, j).  Its rank is rank(M) * rank(N).
    """
    if m_tuple.l != n_tuple.k:
        raise ContractViolation(
            "incompatible contexts: (%d, %d) then (%d, %d)"
            % (m_tuple.k, m_tuple.l, n_tuple.k, n_tuple.l)
        )
    entries = tuple(m * n for m in m_tuple.entries for n in n_tuple.entries)
    return IndexTuple(entries, m_tuple.k, n_tuple.l)


# ---------------------------------------------------------------------------
# primes and the p-local regrading


def is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def is_prime_power(m):
    """True when m = p^e for a prime p and e >= 1.  1 is not a prime power."""
    if m < 2:
        return False
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return m == 1
        p += 1
    return True  # m itself is prime


def regrade_p(m, p):
    """The p-local filtration stage of m: the i with p^i <= m < p^(i+1)."""
    if m < 1:
        raise ContractViolation("need m >= 1")
    if not is_prime(p):
        raise ContractViolation("%d is not prime" % p)
    i = 0
    q = p
    while q <= m:
        i += 1
        q *= p
    return i
