"""Projective representations: validation, regular representation,
numerical decomposition into irreducibles, characters, intertwiners.

An alpha-representation satisfies rho(g) rho(h) = alpha(g,h) rho(gh) with
rho(1) = Id and all matrices unitary. Irreducibility is certified
structurally: the commutant (solutions M of M rho(g) = rho(g) M) must be
one-dimensional, never inferred from eigenvalue multiplicities alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cocycles import Cocycle, NumericCocycle, restrict_any
from .config import Tolerances, default_tolerances
from .errors import (
    InputError,
    NonIntegerMultiplicity,
    NotIrreducible,
    SplitFailure,
)
from .groups import FiniteGroup, SubgroupHandle, generating_set

MAX_DENSE_ORDER = 512
_NULLSPACE_RTOL = 1e-8
_CLUSTER_ATOL = 1e-7
_FINGERPRINT_DIGITS = 9


@dataclass(eq=False)
class ProjectiveRep:
    """A map g -> unitary matrix obeying the twisted multiplication rule."""

    group: FiniteGroup
    cocycle: Cocycle | NumericCocycle
    dim: int
    matrices: np.ndarray            # (|G|, dim, dim) complex

    def __post_init__(self):
        self.matrices = np.ascontiguousarray(self.matrices, dtype=np.complex128)
        self.matrices.flags.writeable = False

    def matrix(self, g: int) -> np.ndarray:
        return self.matrices[g]


@dataclass(eq=False)
class AlphaCharacter:
    """Traces of a projective representation, one value per group element."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.complex128)
        self.values.flags.writeable = False

    @property
    def dim(self) -> int:
        return int(round(self.values[0].real))

    def fingerprint(self, digits: int = _FINGERPRINT_DIGITS) -> tuple:
        out = []
        for v in self.values:
            re = round(float(v.real), digits) + 0.0
            im = round(float(v.imag), digits) + 0.0
            out.append((re, im))
        return tuple(out)

    def close_to(self, other: "AlphaCharacter", tol: float) -> bool:
        return self.values.shape == other.values.shape and bool(
            np.max(np.abs(self.values - other.values)) <= tol
        )


def character(rep: ProjectiveRep) -> AlphaCharacter:
    return AlphaCharacter(np.trace(rep.matrices, axis1=1, axis2=2))


def character_inner(chi: AlphaCharacter, psi: AlphaCharacter) -> complex:
    """(1/|G|) sum_g chi(g) conj(psi(g))."""
    return complex(np.mean(chi.values * np.conj(psi.values)))


@dataclass(eq=False)
class RepReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def _relation_tol(cocycle, tol: Tolerances) -> float:
    return tol.rep if cocycle.is_exact else tol.rep_numeric


def validate_rep(rep: ProjectiveRep, tol: Tolerances | None = None) -> RepReport:
    """Report every violated pair of the defining relation and non-unitary element."""
    tol = tol or default_tolerances()
    G = rep.group
    mats = rep.matrices
    violations: list = []
    d = rep.dim
    if mats.shape != (G.order, d, d):
        return RepReport([("shape", mats.shape)])
    eye = np.eye(d)
    if np.max(np.abs(mats[G.identity] - eye)) > tol.rep:
        violations.append(("identity",))
    for g in range(G.order):
        if np.max(np.abs(mats[g].conj().T @ mats[g] - eye)) > tol.unitary:
            violations.append(("unitary", g))
    ctable = rep.cocycle.complex_table
    rtol = _relation_tol(rep.cocycle, tol)
    for g in range(G.order):
        lhs = mats[g] @ mats
        rhs = ctable[g][:, None, None] * mats[G.mul[g]]
        bad = np.flatnonzero(np.max(np.abs(lhs - rhs), axis=(1, 2)) > rtol)
        for h in bad:
            violations.append(("relation", g, int(h)))
    return RepReport(violations)


def regular_rep(G: FiniteGroup, cocycle: Cocycle | NumericCocycle) -> ProjectiveRep:
    """Twisted regular representation: rho(g) e_h = alpha(g,h) e_{gh}."""
    if cocycle.group is not G and not cocycle.group.same_table(G):
        raise InputError("cocycle is not defined on the given group")
    n = G.order
    ctable = cocycle.complex_table
    mats = np.zeros((n, n, n), dtype=np.complex128)
    cols = np.arange(n)
    for g in range(n):
        mats[g, G.mul[g, cols], cols] = ctable[g, cols]
    return ProjectiveRep(G, cocycle, n, mats)


def _apply_regular(G: FiniteGroup, ctable: np.ndarray, g: int, B: np.ndarray) -> np.ndarray:
    """rho_reg(g) @ B without materializing the |G| x |G| matrix."""
    out = np.empty_like(B)
    out[G.mul[g]] = ctable[g][:, None] * B
    return out


def _nullspace(A: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the kernel, columns; rows(A) >= cols(A) assumed."""
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    cutoff = _NULLSPACE_RTOL * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def _commutant_dim(mats_by_gen: list[np.ndarray]) -> int:
    """Dimension of {M : M rho(g) = rho(g) M for all generators}."""
    d = mats_by_gen[0].shape[0]
    eye = np.eye(d)
    rows = [np.kron(eye, m.T) - np.kron(m, eye) for m in mats_by_gen]
    if not rows:
        return d * d
    return _nullspace(np.vstack(rows)).shape[1]


def commutant_dimension(rep: ProjectiveRep) -> int:
    gens = generating_set(rep.group)
    return _commutant_dim([rep.matrices[g] for g in gens]) if gens else rep.dim ** 2


def is_irreducible(rep: ProjectiveRep) -> bool:
    return commutant_dimension(rep) == 1


def _cluster_sorted(w: np.ndarray) -> list[np.ndarray]:
    """Group ascending eigenvalues into clusters separated by a real gap."""
    atol = _CLUSTER_ATOL * max(1.0, float(np.max(np.abs(w))))
    clusters = [[0]]
    for i in range(1, w.size):
        if w[i] - w[i - 1] > atol:
            clusters.append([i])
        else:
            clusters[-1].append(i)
    return [np.array(c) for c in clusters]


def _split_regular(G: FiniteGroup, cocycle, seed: int) -> list[np.ndarray]:
    """Bases (columns) of irreducible invariant subspaces of the regular rep."""
    n = G.order
    ctable = cocycle.complex_table
    gens = generating_set(G)
    rng = np.random.default_rng(seed)
    leaves: list[np.ndarray] = []
    max_depth = n

    def sub_matrices(B: np.ndarray, elements) -> list[np.ndarray]:
        return [B.conj().T @ _apply_regular(G, ctable, g, B) for g in elements]

    def recurse(B: np.ndarray, depth: int):
        if depth > max_depth:
            raise SplitFailure(f"splitting recursion exceeded depth {max_depth}")
        d = B.shape[1]
        # any irreducible constituent of the regular rep has dim^2 <= |G|
        if d * d <= n and _commutant_dim(sub_matrices(B, gens) or [np.eye(d)]) == 1:
            leaves.append(np.linalg.qr(B)[0])
            return
        all_mats = sub_matrices(B, range(n))
        for _ in range(8):
            H = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            H = H + H.conj().T
            T = np.zeros((d, d), dtype=np.complex128)
            for m in all_mats:
                T += m @ H @ m.conj().T
            T /= n
            T = (T + T.conj().T) / 2
            w, V = np.linalg.eigh(T)
            clusters = _cluster_sorted(w)
            if len(clusters) > 1:
                for idx in clusters:
                    recurse(B @ V[:, idx], depth + 1)
                return
        raise SplitFailure("averaging operator repeatedly failed to separate eigenvalues")

    recurse(np.eye(n, dtype=np.complex128), 0)
    return leaves


@dataclass(eq=False)
class IrrTable:
    """All irreducible projective representations for one (group, cocycle)."""

    group: FiniteGroup
    cocycle: Cocycle | NumericCocycle
    irreducibles: list[ProjectiveRep]
    characters: list[AlphaCharacter]

    def __len__(self) -> int:
        return len(self.irreducibles)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(rep.dim for rep in self.irreducibles)

    def match_character(self, chi: AlphaCharacter, tol: float) -> int | None:
        """Index of the unique table entry whose character matches, if any."""
        hits = [i for i, c in enumerate(self.characters) if c.close_to(chi, tol)]
        if len(hits) == 1:
            return hits[0]
        if not hits:
            return None
        raise NonIntegerMultiplicity("character matched several table entries")


def _sort_key(chi: AlphaCharacter):
    return (chi.dim, chi.fingerprint())


def irreducibles(G: FiniteGroup, cocycle: Cocycle | NumericCocycle,
                 seed: int = 0, tol: Tolerances | None = None) -> IrrTable:
    """Decompose the twisted regular representation into irreducibles.

    Randomized equivariant-averaging splits, seeded and retried; the table
    is sorted by (dimension, lexicographic character) and deduplicated by
    character equality, so the result is deterministic per seed.
    """
    tol = tol or default_tolerances()
    if G.order > MAX_DENSE_ORDER:
        raise InputError(f"dense decomposition capped at order {MAX_DENSE_ORDER}")
    if cocycle.group is not G and not cocycle.group.same_table(G):
        raise InputError("cocycle is not defined on the given group")
    last_error: Exception | None = None
    for attempt in range(5):
        try:
            bases = _split_regular(G, cocycle, seed + attempt)
            return _assemble_table(G, cocycle, bases, tol)
        except SplitFailure as exc:
            last_error = exc
    raise SplitFailure(f"no clean split after 5 seeds starting at {seed}") from last_error


def _assemble_table(G: FiniteGroup, cocycle, bases: list[np.ndarray],
                    tol: Tolerances) -> IrrTable:
    n = G.order
    ctable = cocycle.complex_table
    reps = []
    for B in bases:
        mats = np.stack([B.conj().T @ _apply_regular(G, ctable, g, B) for g in range(n)])
        reps.append(ProjectiveRep(G, cocycle, B.shape[1], mats))
    chars = [character(r) for r in reps]
    order = sorted(range(len(reps)), key=lambda i: _sort_key(chars[i]))
    table_reps: list[ProjectiveRep] = []
    table_chars: list[AlphaCharacter] = []
    counts: list[int] = []
    for i in order:
        for j, known in enumerate(table_chars):
            if known.close_to(chars[i], tol.char):
                counts[j] += 1
                break
        else:
            table_reps.append(reps[i])
            table_chars.append(chars[i])
            counts.append(1)
    dims = [r.dim for r in table_reps]
    if any(c != d for c, d in zip(counts, dims)):
        raise SplitFailure(f"block multiplicities {counts} differ from dimensions {dims}")
    if sum(d * d for d in dims) != n:
        raise SplitFailure(f"sum of squared dimensions {dims} misses group order {n}")
    return IrrTable(group=G, cocycle=cocycle, irreducibles=table_reps, characters=table_chars)


def _check_compatible(r1: ProjectiveRep, r2: ProjectiveRep) -> None:
    if r1.group is not r2.group and not r1.group.same_table(r2.group):
        raise InputError("representations live on different groups")
    if not r1.cocycle.same_as(r2.cocycle):
        raise InputError("representations use different cocycle tables")


def multiplicity(W: ProjectiveRep, tau: ProjectiveRep,
                 tol: Tolerances | None = None) -> int:
    """dim Hom(V_tau, W) via the character inner product, rounded to an integer.

    Fails loudly when the inner product is not close to an integer, which
    usually means the two representations carry different cocycle tables.
    """
    tol = tol or default_tolerances()
    _check_compatible(W, tau)
    val = character_inner(character(W), character(tau))
    r = int(round(val.real))
    if abs(val - r) > tol.char or r < 0:
        raise NonIntegerMultiplicity(f"character inner product {val} is not a multiplicity")
    return r


def intertwiner(rho1: ProjectiveRep, rho2: ProjectiveRep,
                tol: Tolerances | None = None) -> np.ndarray | None:
    """Unitary M with rho2(g) = M^-1 rho1(g) M, or None if not isomorphic.

    Both inputs must be irreducible; Schur's lemma then makes M unique up
    to phase, which is fixed by making the first large entry real positive.
    """
    tol = tol or default_tolerances()
    _check_compatible(rho1, rho2)
    if rho1.dim != rho2.dim:
        return None
    pairing = character_inner(character(rho1), character(rho2))
    mult = int(round(pairing.real))
    if abs(pairing - mult) > tol.char or mult not in (0, 1):
        raise NotIrreducible(f"character pairing {pairing} is not 0 or 1")
    if mult == 0:
        return None
    if commutant_dimension(rho1) != 1:
        raise NotIrreducible("first representation has commutant dimension > 1")
    if commutant_dimension(rho2) != 1:
        raise NotIrreducible("second representation has commutant dimension > 1")
    d = rho1.dim
    eye = np.eye(d)
    gens = generating_set(rho1.group) or [rho1.group.identity]
    rows = [
        np.kron(eye, rho2.matrices[g].T) - np.kron(rho1.matrices[g], eye)
        for g in gens
    ]
    kernel = _nullspace(np.vstack(rows))
    assert kernel.shape[1] == 1, "Schur solution space is not one-dimensional"
    M = kernel[:, 0].reshape(d, d)
    # scale to unitary: M^H M = c I for an intertwiner between unitary irreps
    c = np.trace(M.conj().T @ M).real / d
    M = M / np.sqrt(c)
    flat = np.abs(M).ravel()
    pivot = int(np.flatnonzero(flat > 0.5 * flat.max())[0])
    z = M.ravel()[pivot]
    M = M * (np.conj(z) / np.abs(z))
    rtol = _relation_tol(rho1.cocycle, tol)
    err = max(
        float(np.max(np.abs(rho2.matrices[g] - M.conj().T @ rho1.matrices[g] @ M)))
        for g in range(rho1.group.order)
    )
    assert err <= 10 * rtol, f"intertwiner verification failed (residual {err:.2e})"
    return M


def restrict_rep(rho: ProjectiveRep, handle: SubgroupHandle,
                 sub_cocycle: Cocycle | NumericCocycle | None = None,
                 tol: Tolerances | None = None) -> ProjectiveRep:
    """Matrices re-indexed to the subgroup's own numbering."""
    if handle.parent is not rho.group and not handle.parent.same_table(rho.group):
        raise InputError("handle does not belong to the representation's group")
    sub, to_parent = handle.as_group()
    if sub_cocycle is None:
        sub_cocycle, _ = restrict_any(rho.cocycle, handle, tol)
    mats = rho.matrices[list(to_parent)]
    return ProjectiveRep(sub, sub_cocycle, rho.dim, mats)
