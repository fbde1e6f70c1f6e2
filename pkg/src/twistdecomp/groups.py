"""Finite groups as dense multiplication tables, subgroups, and quotients.

Elements are dense indices 0..n-1 with the identity forced to index 0,
so tables are canonical and cheap to compare.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    ClosureTooLarge,
    InputError,
    NoIdentity,
    NoInverse,
    NotAPermutation,
    NotAssociative,
    NotLatinSquare,
    NotNormal,
)

ASSOC_EXHAUSTIVE_MAX = 512
ASSOC_SAMPLES = 10_000
DEFAULT_CLOSURE_CAP = 10_000


@dataclass(eq=False)
class FiniteGroup:
    """A finite group given by its full multiplication table."""

    order: int
    mul: np.ndarray                # (n, n) int, mul[g, h] = g*h
    inv: np.ndarray                # (n,) int
    labels: tuple[str, ...]
    identity: int = 0

    def __post_init__(self):
        self.mul = np.ascontiguousarray(self.mul, dtype=np.int64)
        self.inv = np.ascontiguousarray(self.inv, dtype=np.int64)
        self.mul.flags.writeable = False
        self.inv.flags.writeable = False

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def conjugate(self, g: int, a: int) -> int:
        """g a g^-1."""
        return int(self.mul[self.mul[g, a], self.inv[g]])

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = int(self.mul[x, g])
            k += 1
        return k

    def power(self, g: int, k: int) -> int:
        if k < 0:
            return self.power(int(self.inv[g]), -k)
        x = self.identity
        for _ in range(k):
            x = int(self.mul[x, g])
        return x

    def label(self, g: int) -> str:
        return self.labels[g]

    def same_table(self, other: "FiniteGroup") -> bool:
        return self.order == other.order and np.array_equal(self.mul, other.mul)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def _check_latin(mul: np.ndarray) -> None:
    n = mul.shape[0]
    want = np.arange(n)
    for g in range(n):
        if not np.array_equal(np.sort(mul[g]), want):
            raise NotLatinSquare(f"row {g} is not a permutation of 0..{n - 1}")
        if not np.array_equal(np.sort(mul[:, g]), want):
            raise NotLatinSquare(f"column {g} is not a permutation of 0..{n - 1}")


def _find_identity(mul: np.ndarray) -> int:
    n = mul.shape[0]
    want = np.arange(n)
    for e in range(n):
        if np.array_equal(mul[e], want) and np.array_equal(mul[:, e], want):
            return e
    raise NoIdentity("no two-sided identity element found")


def _find_inverses(mul: np.ndarray, e: int) -> np.ndarray:
    n = mul.shape[0]
    inv = np.empty(n, dtype=np.int64)
    for g in range(n):
        right = np.flatnonzero(mul[g] == e)
        if right.size != 1 or mul[right[0], g] != e:
            raise NoInverse(f"element {g} has no two-sided inverse")
        inv[g] = right[0]
    return inv


def _check_associative(mul: np.ndarray) -> None:
    n = mul.shape[0]
    if n <= ASSOC_EXHAUSTIVE_MAX:
        for g in range(n):
            left = mul[mul[g], :]     # [h, k] -> (g h) k
            right = mul[g, mul]       # [h, k] -> g (h k)
            if not np.array_equal(left, right):
                h, k = map(int, np.argwhere(left != right)[0])
                raise NotAssociative(f"({g}*{h})*{k} != {g}*({h}*{k})")
    else:
        rng = np.random.default_rng(0)
        gs, hs, ks = rng.integers(0, n, size=(3, ASSOC_SAMPLES))
        bad = np.flatnonzero(mul[mul[gs, hs], ks] != mul[gs, mul[hs, ks]])
        if bad.size:
            i = int(bad[0])
            raise NotAssociative(
                f"({int(gs[i])}*{int(hs[i])})*{int(ks[i])} != "
                f"{int(gs[i])}*({int(hs[i])}*{int(ks[i])}) (sampled)"
            )


def _validated_group(mul: np.ndarray, labels=None) -> FiniteGroup:
    n = mul.shape[0]
    _check_latin(mul)
    e = _find_identity(mul)
    if e != 0:
        # relabel so the identity sits at index 0
        perm = np.arange(n)
        perm[0], perm[e] = e, 0
        inverse_perm = perm  # the swap is an involution
        mul = inverse_perm[mul[np.ix_(perm, perm)]]
        if labels is not None:
            labels = [labels[perm[i]] for i in range(n)]
    inv = _find_inverses(mul, 0)
    _check_associative(mul)
    if labels is None:
        labels = [str(i) for i in range(n)]
    return FiniteGroup(order=n, mul=mul, inv=inv, labels=tuple(labels))


def from_multiplication_table(table, labels=None) -> FiniteGroup:
    """Validate a square table of element indices and build the group."""
    mul = np.asarray(table, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] < 1:
        raise InputError(f"table must be square and non-empty, got shape {mul.shape}")
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise InputError(f"table entries must lie in [0, {n})")
    return _validated_group(mul, labels)


def _compose(p: tuple, q: tuple) -> tuple:
    """(p o q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(q)))


def _cycle_label(p: tuple) -> str:
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) if parts else "()"


def from_permutation_generators(degree: int, generators,
                                max_order: int = DEFAULT_CLOSURE_CAP) -> FiniteGroup:
    """Close a set of permutations of {0..degree-1} under composition."""
    if degree < 1:
        raise InputError("degree must be at least 1")
    gens = []
    for p in generators:
        p = tuple(int(x) for x in p)
        if sorted(p) != list(range(degree)):
            raise NotAPermutation(f"{p} is not a permutation of 0..{degree - 1}")
        gens.append(p)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in gens:
                r = _compose(p, q)
                if r not in index:
                    if len(elems) >= max_order:
                        raise ClosureTooLarge(f"closure exceeds {max_order} elements")
                    index[r] = len(elems)
                    elems.append(r)
                    nxt.append(r)
        frontier = nxt
    n = len(elems)
    mul = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            mul[i, j] = index[_compose(p, q)]
    return _validated_group(mul, [_cycle_label(p) for p in elems])


def _dihedral_label(k: int, l: int) -> str:
    parts = []
    if k == 1:
        parts.append("a")
    elif k > 1:
        parts.append(f"a^{k}")
    if l:
        parts.append("b")
    return " ".join(parts) if parts else "1"


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; index(a^k b^l) = k + n*l.

    The element encoding is part of the external contract: cocycle files
    reference it.
    """
    if n < 1:
        raise InputError("dihedral requires n >= 1")
    ks = np.arange(n)
    # l = 0 block rows: a^j * a^k b^m = a^(j+k) b^m
    # l = 1 block rows: a^j b * a^k b^m = a^(j-k) b^(1+m)
    plus = (ks[:, None] + ks[None, :]) % n
    minus = (ks[:, None] - ks[None, :]) % n
    mul = np.empty((2 * n, 2 * n), dtype=np.int64)
    mul[:n, :n] = plus
    mul[:n, n:] = plus + n
    mul[n:, :n] = minus + n
    mul[n:, n:] = minus
    labels = [_dihedral_label(k, l) for l in (0, 1) for k in range(n)]
    return _validated_group(mul, labels)


def cyclic(n: int) -> FiniteGroup:
    """Cyclic group of order n with generator labelled g."""
    if n < 1:
        raise InputError("cyclic requires n >= 1")
    ks = np.arange(n)
    mul = (ks[:, None] + ks[None, :]) % n
    labels = ["1"] + ["g" if k == 1 else f"g^{k}" for k in range(1, n)]
    return _validated_group(mul, labels[:n])


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Direct product with index encoding (x, y) -> x*|G2| + y."""
    n1, n2 = g1.order, g2.order
    i1, j1 = np.divmod(np.arange(n1 * n2), n2)
    mul = g1.mul[np.ix_(i1, i1)] * n2 + g2.mul[np.ix_(j1, j1)]
    labels = [f"({g1.labels[a]},{g2.labels[b]})" for a in range(n1) for b in range(n2)]
    return _validated_group(mul, labels)


@dataclass(eq=False)
class SubgroupHandle:
    """A subgroup of a parent group, stored as a sorted index sequence."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        self.elements = tuple(sorted(int(x) for x in self.elements))
        elems = set(self.elements)
        G = self.parent
        if G.identity not in elems:
            raise InputError("subgroup must contain the identity")
        for a in self.elements:
            if int(G.inv[a]) not in elems:
                raise InputError(f"subgroup not closed under inverse at element {a}")
            for b in self.elements:
                if int(G.mul[a, b]) not in elems:
                    raise InputError(f"subgroup not closed under product at ({a},{b})")

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _position(self) -> dict[int, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def contains(self, g: int) -> bool:
        return int(g) in self._position

    def position(self, g: int) -> int:
        """Index of a parent element inside this subgroup's own numbering."""
        return self._position[int(g)]

    @cached_property
    def _as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        G = self.parent
        elems = self.elements
        pos = self._position
        m = len(elems)
        mul = np.empty((m, m), dtype=np.int64)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                mul[i, j] = pos[int(G.mul[a, b])]
        labels = [G.labels[a] for a in elems]
        return _validated_group(mul, labels), elems

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup re-indexed 0..m-1, plus the map back to parent indices."""
        return self._as_group

    def __repr__(self):
        return f"SubgroupHandle(order={self.order}, elements={self.elements})"


def subgroup_closure(G: FiniteGroup, seeds) -> SubgroupHandle:
    """Smallest subgroup of G containing the seed elements."""
    elems = {G.identity}
    frontier = []
    for s in seeds:
        s = int(s)
        if not 0 <= s < G.order:
            raise InputError(f"seed {s} out of range")
        if s not in elems:
            elems.add(s)
            frontier.append(s)
    while frontier:
        nxt = []
        for a in list(elems):
            for b in frontier:
                for c in (int(G.mul[a, b]), int(G.mul[b, a])):
                    if c not in elems:
                        elems.add(c)
                        nxt.append(c)
        for b in frontier:
            c = int(G.inv[b])
            if c not in elems:
                elems.add(c)
                nxt.append(c)
        frontier = nxt
    return SubgroupHandle(G, tuple(sorted(elems)))


def trivial_subgroup(G: FiniteGroup) -> SubgroupHandle:
    return SubgroupHandle(G, (G.identity,))


def full_subgroup(G: FiniteGroup) -> SubgroupHandle:
    return SubgroupHandle(G, tuple(range(G.order)))


def is_normal(G: FiniteGroup, A: SubgroupHandle) -> bool:
    """True iff g a g^-1 lies in A for every g in G, a in A."""
    if A.parent is not G and not A.parent.same_table(G):
        raise InputError("subgroup belongs to a different group")
    members = set(A.elements)
    for g in range(G.order):
        for a in A.elements:
            if G.conjugate(g, a) not in members:
                return False
    return True


def center(G: FiniteGroup) -> SubgroupHandle:
    central = [a for a in range(G.order) if np.array_equal(G.mul[a], G.mul[:, a])]
    return SubgroupHandle(G, tuple(central))


def conjugacy_classes(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Conjugacy classes as sorted tuples, ordered by smallest member."""
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in range(G.order):
        if seen[g]:
            continue
        orbit = {G.conjugate(h, g) for h in range(G.order)}
        for x in orbit:
            seen[x] = True
        classes.append(tuple(sorted(orbit)))
    return classes


def generating_set(G: FiniteGroup) -> list[int]:
    """A small generating set, grown greedily by smallest missing element."""
    gens: list[int] = []
    current = trivial_subgroup(G)
    while current.order < G.order:
        g = next(i for i in range(G.order) if not current.contains(i))
        gens.append(g)
        current = subgroup_closure(G, gens)
    return gens


def normal_subgroups(G: FiniteGroup, max_order: int | None = None) -> list[SubgroupHandle]:
    """All normal subgroups, as joins of conjugacy-class closures."""
    found: dict[tuple[int, ...], SubgroupHandle] = {}

    def add(h: SubgroupHandle):
        found.setdefault(h.elements, h)

    add(trivial_subgroup(G))
    for cls in conjugacy_classes(G):
        add(subgroup_closure(G, cls))
    changed = True
    while changed:
        changed = False
        existing = list(found.values())
        for h1 in existing:
            for h2 in existing:
                key = tuple(sorted(set(h1.elements) | set(h2.elements)))
                if key in found:
                    continue
                join = subgroup_closure(G, key)
                if join.elements not in found:
                    add(join)
                    changed = True
    subs = sorted(found.values(), key=lambda h: (h.order, h.elements))
    if max_order is not None:
        subs = [h for h in subs if h.order <= max_order]
    return subs


def all_subgroups(G: FiniteGroup) -> list[SubgroupHandle]:
    """Every subgroup, found by one-generator extensions. Desk scale only."""
    found: dict[tuple[int, ...], SubgroupHandle] = {}
    triv = trivial_subgroup(G)
    found[triv.elements] = triv
    frontier = [triv]
    while frontier:
        nxt = []
        for h in frontier:
            for g in range(G.order):
                if h.contains(g):
                    continue
                bigger = subgroup_closure(G, h.elements + (g,))
                if bigger.elements not in found:
                    found[bigger.elements] = bigger
                    nxt.append(bigger)
        frontier = nxt
    return sorted(found.values(), key=lambda h: (h.order, h.elements))


@dataclass(eq=False)
class QuotientWithSection:
    """The quotient G/A with a fixed set-theoretic section sigma: Q -> G.

    sigma picks the smallest element index in each coset, so sigma(1) = 1.
    """

    parent: FiniteGroup
    subgroup: SubgroupHandle
    quotient: FiniteGroup
    projection: tuple[int, ...]     # G index -> Q index
    section: tuple[int, ...]        # Q index -> G index


def quotient_with_section(G: FiniteGroup, A: SubgroupHandle) -> QuotientWithSection:
    if not is_normal(G, A):
        raise NotNormal("quotient requires a normal subgroup")
    n = G.order
    coset_id = np.full(n, -1, dtype=np.int64)
    section: list[int] = []
    for g in range(n):
        if coset_id[g] >= 0:
            continue
        q = len(section)
        section.append(g)  # g is the smallest member: ascending scan
        for a in A.elements:
            coset_id[int(G.mul[g, a])] = q
    m = len(section)
    qmul = np.empty((m, m), dtype=np.int64)
    for q1 in range(m):
        for q2 in range(m):
            qmul[q1, q2] = coset_id[int(G.mul[section[q1], section[q2]])]
    labels = [f"[{G.labels[s]}]" for s in section]
    quotient = _validated_group(qmul, labels)
    # projection must be a homomorphism with kernel exactly A
    for g in range(n):
        for h in range(n):
            assert coset_id[int(G.mul[g, h])] == int(qmul[coset_id[g], coset_id[h]])
    kernel = tuple(sorted(int(x) for x in np.flatnonzero(coset_id == 0)))
    assert kernel == A.elements, "projection kernel differs from the subgroup"
    assert section[0] == G.identity
    return QuotientWithSection(
        parent=G,
        subgroup=A,
        quotient=quotient,
        projection=tuple(int(x) for x in coset_id),
        section=tuple(section),
    )


def chi(qs: QuotientWithSection, q1: int, q2: int) -> int:
    """sigma(q1 q2)^-1 sigma(q1) sigma(q2); always lies in the subgroup."""
    G = qs.parent
    s = qs.section
    q12 = int(qs.quotient.mul[q1, q2])
    out = int(G.mul[G.inv[s[q12]], G.mul[s[q1], s[q2]]])
    assert qs.subgroup.contains(out), "section is broken: chi value left the subgroup"
    return out
