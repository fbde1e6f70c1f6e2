"""Roots of unity, 2-cocycles as exponent tables, and central extensions.

Exact cocycles take values in the group mu_K of K-th roots of unity and are
stored as integer exponent tables, so validation and restriction are exact.
Induced cocycles produced downstream carry float values and live in
NumericCocycle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import InputError, InvalidCocycle, OddN, SearchSpaceTooLarge
from .groups import (
    FiniteGroup,
    QuotientWithSection,
    SubgroupHandle,
    chi,
    dihedral,
    from_multiplication_table,
)


@dataclass(frozen=True)
class UnitScalar:
    """exp(2*pi*i * exponent / order), an element of mu_order."""

    exponent: int
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise InputError("UnitScalar order must be positive")
        object.__setattr__(self, "exponent", self.exponent % self.order)

    def __mul__(self, other: "UnitScalar") -> "UnitScalar":
        k = math.lcm(self.order, other.order)
        e = self.exponent * (k // self.order) + other.exponent * (k // other.order)
        return UnitScalar(e % k, k)

    def inverse(self) -> "UnitScalar":
        return UnitScalar(-self.exponent, self.order)

    def value(self) -> complex:
        return complex(np.exp(2j * np.pi * self.exponent / self.order))

    @classmethod
    def one(cls, order: int = 1) -> "UnitScalar":
        return cls(0, order)


@dataclass(eq=False)
class CocycleReport:
    """Validation outcome; empty violation list means the table is a cocycle."""

    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_cocycle_table(group: FiniteGroup, order: int, exponents: np.ndarray) -> CocycleReport:
    """Check normalization and the 2-cocycle identity on an exponent table."""
    n = group.order
    table = np.asarray(exponents, dtype=np.int64)
    violations: list = []
    if table.shape != (n, n):
        return CocycleReport([("shape", table.shape, (n, n))])
    if order < 1:
        return CocycleReport([("order", order)])
    table = table % order
    e = group.identity
    for g in range(n):
        if table[g, e] % order:
            violations.append(("normalization", g, e))
        if table[e, g] % order:
            violations.append(("normalization", e, g))
    mul = group.mul
    for g in range(n):
        # alpha(gh, k) + alpha(g, h) == alpha(g, hk) + alpha(h, k)  (mod order)
        lhs = table[mul[g], :] + table[g][:, None]
        rhs = table[g][mul] + table
        bad = np.argwhere((lhs - rhs) % order != 0)
        for h, k in bad:
            violations.append(("cocycle", g, int(h), int(k)))
    return CocycleReport(violations)


@dataclass(eq=False)
class Cocycle:
    """A normalized 2-cocycle with values in mu_order, stored as exponents."""

    group: FiniteGroup
    order: int
    exponents: np.ndarray

    def __post_init__(self):
        self.exponents = np.ascontiguousarray(self.exponents, dtype=np.int64) % self.order
        self.exponents.flags.writeable = False

    def scalar(self, g: int, h: int) -> UnitScalar:
        return UnitScalar(int(self.exponents[g, h]), self.order)

    @cached_property
    def complex_table(self) -> np.ndarray:
        table = np.exp(2j * np.pi * self.exponents / self.order)
        table.flags.writeable = False
        return table

    @property
    def is_exact(self) -> bool:
        return True

    def is_trivial(self) -> bool:
        return not self.exponents.any()

    def same_as(self, other) -> bool:
        if isinstance(other, Cocycle):
            if not self.group.same_table(other.group):
                return False
            lcm = math.lcm(self.order, other.order)
            return np.array_equal(
                self.exponents * (lcm // self.order),
                other.exponents * (lcm // other.order),
            )
        return _tables_close(self.complex_table, other)

    def __repr__(self):
        return f"Cocycle(order={self.order}, group_order={self.group.order})"


@dataclass(eq=False)
class NumericCocycle:
    """A 2-cocycle with unit complex float values (e.g. an induced beta)."""

    group: FiniteGroup
    table: np.ndarray

    def __post_init__(self):
        self.table = np.ascontiguousarray(self.table, dtype=np.complex128)
        self.table.flags.writeable = False

    @property
    def complex_table(self) -> np.ndarray:
        return self.table

    @property
    def is_exact(self) -> bool:
        return False

    def same_as(self, other) -> bool:
        if isinstance(other, Cocycle):
            return other.same_as(self)
        return _tables_close(self.table, other)

    def __repr__(self):
        return f"NumericCocycle(group_order={self.group.order})"


def _tables_close(table: np.ndarray, other) -> bool:
    other_table = other.complex_table if not isinstance(other, np.ndarray) else other
    return table.shape == other_table.shape and np.allclose(
        table, other_table, atol=1e-12, rtol=0.0
    )


def make_cocycle(group: FiniteGroup, order: int, exponents) -> Cocycle:
    """Build a Cocycle, requiring a clean validation report."""
    exponents = np.asarray(exponents, dtype=np.int64)
    report = validate_cocycle_table(group, order, exponents)
    if not report.ok:
        raise InvalidCocycle(
            f"not a normalized 2-cocycle ({len(report.violations)} violations, "
            f"first: {report.violations[0]})",
            report=report,
        )
    return Cocycle(group=group, order=order, exponents=exponents)


def validate_cocycle(alpha: Cocycle) -> CocycleReport:
    return validate_cocycle_table(alpha.group, alpha.order, alpha.exponents)


def validate_numeric_cocycle(beta: NumericCocycle, tol: Tolerances | None = None) -> CocycleReport:
    """Check |values| = 1, normalization, and the cocycle identity within tolerance."""
    tol = tol or default_tolerances()
    G = beta.group
    n = G.order
    t = beta.table
    violations: list = []
    if t.shape != (n, n):
        return CocycleReport([("shape", t.shape, (n, n))])
    off_unit = np.argwhere(np.abs(np.abs(t) - 1.0) > tol.unitary)
    for g, h in off_unit:
        violations.append(("unit", int(g), int(h)))
    e = G.identity
    for g in range(n):
        if abs(t[g, e] - 1.0) > tol.cocycle:
            violations.append(("normalization", g, e))
        if abs(t[e, g] - 1.0) > tol.cocycle:
            violations.append(("normalization", e, g))
    mul = G.mul
    for g in range(n):
        lhs = t[mul[g], :] * t[g][:, None]
        rhs = t[g][mul] * t
        bad = np.argwhere(np.abs(lhs - rhs) > tol.cocycle)
        for h, k in bad:
            violations.append(("cocycle", g, int(h), int(k)))
    return CocycleReport(violations)


def make_numeric_cocycle(group: FiniteGroup, table, tol: Tolerances | None = None) -> NumericCocycle:
    beta = NumericCocycle(group=group, table=np.asarray(table, dtype=np.complex128))
    report = validate_numeric_cocycle(beta, tol)
    if not report.ok:
        raise InvalidCocycle(
            f"numeric table is not a 2-cocycle within tolerance "
            f"({len(report.violations)} violations, first: {report.violations[0]})",
            report=report,
        )
    return beta


def trivial_cocycle(group: FiniteGroup, order: int = 1) -> Cocycle:
    return Cocycle(group=group, order=order, exponents=np.zeros((group.order, group.order), dtype=np.int64))


def numeric_from_exact(alpha: Cocycle) -> NumericCocycle:
    return NumericCocycle(group=alpha.group, table=np.array(alpha.complex_table))


def dihedral_alpha(n: int) -> Cocycle:
    """The standard nontrivial cocycle on dihedral(n) for even n, K = n.

    Rows indexed by a^j (exponent 0) and a^j b (exponent k against a^k b^l).
    """
    if n < 2 or n % 2:
        raise OddN(f"dihedral_alpha requires an even n >= 2, got {n}")
    G = dihedral(n)
    expo = np.zeros((2 * n, 2 * n), dtype=np.int64)
    ks = np.arange(n)
    expo[n:, :n] = ks[None, :].repeat(n, axis=0)
    expo[n:, n:] = ks[None, :].repeat(n, axis=0)
    return make_cocycle(G, n, expo)


def restrict(alpha: Cocycle, handle: SubgroupHandle) -> tuple[Cocycle, tuple[int, ...]]:
    """Restrict to a subgroup, re-indexed 0..m-1; returns the index map too."""
    if handle.parent is not alpha.group and not handle.parent.same_table(alpha.group):
        raise InputError("subgroup handle does not belong to the cocycle's group")
    sub, to_parent = handle.as_group()
    expo = alpha.exponents[np.ix_(to_parent, to_parent)]
    restricted = make_cocycle(sub, alpha.order, expo)  # validity is inherited; asserted
    return restricted, to_parent


def restrict_numeric(beta: NumericCocycle, handle: SubgroupHandle,
                     tol: Tolerances | None = None) -> tuple[NumericCocycle, tuple[int, ...]]:
    sub, to_parent = handle.as_group()
    table = beta.table[np.ix_(to_parent, to_parent)]
    return make_numeric_cocycle(sub, table, tol), to_parent


def restrict_any(cocycle, handle: SubgroupHandle, tol: Tolerances | None = None):
    if isinstance(cocycle, Cocycle):
        return restrict(cocycle, handle)
    return restrict_numeric(cocycle, handle, tol)


@dataclass(eq=False)
class CentralExtension:
    """The group on G x mu_K with product (g1,z1)(g2,z2) = (g1 g2, alpha(g1,g2) z1 z2).

    Elements are encoded as g*K + k; the central mu_K embeds as k -> 0*K + k.
    """

    group: FiniteGroup
    base: FiniteGroup
    order_k: int
    projection: tuple[int, ...]       # extension index -> G index
    scalar_exponent: tuple[int, ...]  # extension index -> exponent in mu_K
    central: tuple[int, ...]          # mu_K exponent -> extension index

    def encode(self, g: int, k: int) -> int:
        return g * self.order_k + (k % self.order_k)


def central_extension(G: FiniteGroup, alpha: Cocycle) -> CentralExtension:
    if alpha.group is not G and not alpha.group.same_table(G):
        raise InputError("cocycle is not defined on the given group")
    K = alpha.order
    n = G.order
    size = n * K
    gs, ks = np.divmod(np.arange(size), K)
    mul = (
        G.mul[np.ix_(gs, gs)] * K
        + (alpha.exponents[np.ix_(gs, gs)] + ks[:, None] + ks[None, :]) % K
    )
    labels = [f"({G.labels[g]},{k})" for g in range(n) for k in range(K)]
    ext = from_multiplication_table(mul, labels)
    return CentralExtension(
        group=ext,
        base=G,
        order_k=K,
        projection=tuple(int(x) for x in gs),
        scalar_exponent=tuple(int(x) for x in ks),
        central=tuple(range(K)),
    )


def tau_scalar(alpha: Cocycle, qs: QuotientWithSection, q1: int, q2: int) -> UnitScalar:
    """The correction scalar attached to a section, as an exact root of unity.

    Computed through both of its defining expressions, which must agree
    (they are related by the cocycle identity); disagreement signals a
    corrupted cocycle.
    """
    G = qs.parent
    if alpha.group is not G and not alpha.group.same_table(G):
        raise InputError("tau_scalar needs the cocycle on the quotient's parent group")
    s = qs.section
    q12 = int(qs.quotient.mul[q1, q2])
    x = s[q12]
    xinv = int(G.inv[x])
    prod = int(G.mul[s[q1], s[q2]])
    c = chi(qs, q1, q2)
    K = alpha.order
    direct = (-int(alpha.exponents[x, c]) + int(alpha.exponents[s[q1], s[q2]])) % K
    expanded = (
        int(alpha.exponents[xinv, prod])
        - int(alpha.exponents[x, xinv])
        + int(alpha.exponents[s[q1], s[q2]])
    ) % K
    assert direct == expanded, "tau formulas disagree: cocycle table is corrupted"
    return UnitScalar(direct, K)


_COBOUNDARY_SPACE_CAP = 24 ** 5


def is_coboundary_brute(beta: NumericCocycle, lattice_order: int,
                        tol: Tolerances | None = None) -> tuple[UnitScalar, ...] | None:
    """Search mu_{K'}-valued 1-cochains c with c(1)=1 and delta(c) = beta.

    Returns the first match in lexicographic exponent order, or None when
    no cochain on this lattice reproduces beta within tolerance. The search
    space (K')^(|Q|-1) is capped at 24^5; larger requests fail fast.
    """
    tol = tol or default_tolerances()
    Q = beta.group
    m = Q.order
    K = lattice_order
    if K < 1:
        raise SearchSpaceTooLarge("lattice order must be positive")
    if K ** max(m - 1, 0) > _COBOUNDARY_SPACE_CAP:
        raise SearchSpaceTooLarge(
            f"search space {K}^{m - 1} exceeds the 24^5 cap"
        )
    if m == 1:
        if abs(beta.table[0, 0] - 1.0) <= tol.cocycle:
            return (UnitScalar(0, K),)
        return None
    e = Q.identity
    # pairs touching the identity constrain beta alone, not the cochain
    for q in range(m):
        if abs(beta.table[e, q] - 1.0) > tol.cocycle or abs(beta.table[q, e] - 1.0) > tol.cocycle:
            return None
    pairs = [
        (q1, q2, int(Q.mul[q1, q2]), complex(beta.table[q1, q2]))
        for q1 in range(m) if q1 != e
        for q2 in range(m) if q2 != e
    ]
    roots = np.exp(2j * np.pi * np.arange(K) / K)
    # vectorize the last few exponent coordinates, keeping lexicographic order
    tail = 1
    while tail < m - 1 and K ** (tail + 1) <= 16384:
        tail += 1
    head = m - 1 - tail
    block = K ** tail
    digits = np.empty((block, tail), dtype=np.int64)
    rem = np.arange(block)
    for t in range(tail - 1, -1, -1):
        rem, digits[:, t] = np.divmod(rem, K)
    c = np.ones((block, m), dtype=np.complex128)
    c[:, 1 + head:] = roots[digits]
    for prefix in itertools.product(range(K), repeat=head):
        if head:
            c[:, 1:1 + head] = roots[list(prefix)]
        # |c1*c2/c12 - t| = |c1*c2 - t*c12| since |c12| = 1
        alive = np.arange(block)
        for q1, q2, q12, target in pairs:
            bad = (
                np.abs(c[alive, q1] * c[alive, q2] - target * c[alive, q12])
                > tol.cocycle
            )
            alive = alive[~bad]
            if not alive.size:
                break
        if alive.size:
            first = int(alive[0])
            expos = list(prefix) + [int(d) for d in digits[first]]
            return tuple(
                UnitScalar(0 if q == 0 else expos[q - 1], K) for q in range(m)
            )
    return None


def snap_to_lattice(beta: NumericCocycle, lattice_order: int,
                    tol: Tolerances | None = None) -> Cocycle | None:
    """Round a numeric cocycle onto mu_{K'} when every entry is near a lattice point.

    Opportunistic: returns None when an entry is too far off the lattice or
    when the rounded table is not an exact cocycle.
    """
    tol = tol or default_tolerances()
    angles = np.angle(beta.table) / (2 * np.pi) * lattice_order
    expo = np.round(angles).astype(np.int64) % lattice_order
    snapped = np.exp(2j * np.pi * expo / lattice_order)
    if np.max(np.abs(snapped - beta.table)) > tol.snap:
        return None
    report = validate_cocycle_table(beta.group, lattice_order, expo)
    if not report.ok:
        return None
    return Cocycle(group=beta.group, order=lattice_order, exponents=expo)
