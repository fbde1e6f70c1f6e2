"""The orbit decomposition machinery for twisted representation rings.

Given a normal subgroup A of G and a cocycle alpha, the group G acts on the
irreducible alpha-projective representations of A by

    (g . tau)(a) = alpha(g^-1 a, g) alpha(g, g^-1 a)^-1 tau(g^-1 a g),

and the action factors through Q = G/A. Each orbit carries an isotropy
group, a family of Schur intertwiners M_q, and an induced 2-cocycle beta on
the isotropy quotient. verify_point_decomposition checks that the
irreducibles of (G, alpha) biject with the beta-twisted irreducibles of the
isotropy quotients, orbit by orbit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cocycles import (
    Cocycle,
    NumericCocycle,
    make_numeric_cocycle,
    restrict,
    restrict_any,
    tau_scalar,
)
from .config import Tolerances, default_tolerances
from .errors import (
    InputError,
    MatchFailure,
    NotIsotypic,
    NotNormal,
    NotScalar,
    NotUnimodular,
    OrbitMixing,
    UnmatchedCharacter,
)
from .groups import (
    FiniteGroup,
    QuotientWithSection,
    SubgroupHandle,
    chi,
    is_normal,
    quotient_with_section,
)
from .reps import (
    IrrTable,
    ProjectiveRep,
    character,
    intertwiner,
    irreducibles,
    multiplicity,
    restrict_rep,
    validate_rep,
)


def _complex_scalars(cocycle) -> np.ndarray:
    return cocycle.complex_table


def act(alpha: Cocycle, A: SubgroupHandle, g: int, tau: ProjectiveRep,
        validate: bool = False, tol: Tolerances | None = None) -> ProjectiveRep:
    """The twisted conjugation action of g in G on a representation of A."""
    out_handle, rep = conjugate_rep(alpha, A, g, tau, tol=tol)
    if out_handle.elements != A.elements:
        raise NotNormal("act requires a normal subgroup")
    if validate:
        report = validate_rep(rep, tol)
        assert report.ok, f"act produced an invalid representation: {report.violations[:3]}"
    return rep


def conjugate_rep(cocycle, H: SubgroupHandle, g: int, rho: ProjectiveRep,
                  tol: Tolerances | None = None) -> tuple[SubgroupHandle, ProjectiveRep]:
    """Transport a representation of H to one of g H g^-1.

    (g . rho)(h) = alpha(g^-1 h, g) alpha(g, g^-1 h)^-1 rho(g^-1 h g); the
    scalars use the full cocycle on the parent group, and the result is an
    exact representation for the cocycle restricted to the conjugate.
    """
    G = H.parent
    ctable = _complex_scalars(cocycle)
    _, to_parent = H.as_group()
    conj_elems = sorted(G.conjugate(g, a) for a in to_parent)
    out_handle = H if tuple(conj_elems) == H.elements else SubgroupHandle(G, tuple(conj_elems))
    out_cocycle, out_map = restrict_any(cocycle, out_handle, tol)
    ginv = int(G.inv[g])
    mats = np.empty((len(out_map), rho.dim, rho.dim), dtype=np.complex128)
    for i, hG in enumerate(out_map):
        x = int(G.mul[ginv, hG])            # g^-1 h
        back = int(G.mul[x, g])             # g^-1 h g, an element of H
        scale = ctable[x, g] * np.conj(ctable[g, x])
        mats[i] = scale * rho.matrices[H.position(back)]
    sub_group, _ = out_handle.as_group()
    return out_handle, ProjectiveRep(sub_group, out_cocycle, rho.dim, mats)


@dataclass(eq=False)
class IrrAction:
    """The permutation action of G on the irreducible table of (A, alpha|_A)."""

    group: FiniteGroup
    subgroup: SubgroupHandle
    alpha: Cocycle
    base: IrrTable                      # irreducibles of (A, alpha|_A)
    alpha_a: Cocycle
    a_map: tuple[int, ...]              # A-standalone index -> G index
    perm: np.ndarray                    # (|G|, #irr) int
    witnesses: list[list[np.ndarray]]   # [g][i]: intertwiner from g.tau_i to its class rep

    def orbits(self) -> list[tuple[int, ...]]:
        """Orbits on irreducible indices, sorted by smallest member."""
        m = len(self.base)
        seen = [False] * m
        out = []
        for i in range(m):
            if seen[i]:
                continue
            orbit = {i}
            frontier = [i]
            while frontier:
                nxt = []
                for j in frontier:
                    for g in range(self.group.order):
                        k = int(self.perm[g, j])
                        if k not in orbit:
                            orbit.add(k)
                            nxt.append(k)
                frontier = nxt
            for j in orbit:
                seen[j] = True
            out.append(tuple(sorted(orbit)))
        return out


def action_table(G: FiniteGroup, A: SubgroupHandle, alpha: Cocycle,
                 irr_a: IrrTable | None = None, seed: int = 0,
                 tol: Tolerances | None = None) -> IrrAction:
    """Tabulate g . [tau_i] with class-identifying witnesses, then check the laws."""
    tol = tol or default_tolerances()
    if not is_normal(G, A):
        raise NotNormal("the action is defined for a normal subgroup")
    alpha_a, a_map = restrict(alpha, A)
    a_std, _ = A.as_group()
    if irr_a is None:
        irr_a = irreducibles(a_std, alpha_a, seed=seed, tol=tol)
    m = len(irr_a)
    perm = np.empty((G.order, m), dtype=np.int64)
    witnesses: list[list[np.ndarray]] = []
    for g in range(G.order):
        row: list[np.ndarray] = []
        for i in range(m):
            moved = act(alpha, A, g, irr_a.irreducibles[i], tol=tol)
            report = validate_rep(moved, tol)
            assert report.ok, f"g.tau failed validation at g={g}, i={i}"
            j = irr_a.match_character(character(moved), tol.char)
            if j is None:
                raise UnmatchedCharacter(f"act({g}, tau_{i}) matches no table entry")
            perm[g, i] = j
            w = intertwiner(irr_a.irreducibles[j], moved, tol)
            assert w is not None
            row.append(w)
        witnesses.append(row)
    ident = np.arange(m)
    assert np.array_equal(perm[G.identity], ident), "perm(1) is not the identity"
    for a in A.elements:
        assert np.array_equal(perm[a], ident), f"perm({a}) moves classes inside A"
    for g in range(G.order):
        for h in range(G.order):
            if not np.array_equal(perm[g][perm[h]], perm[int(G.mul[g, h])]):
                raise AssertionError(f"action law fails at ({g},{h})")
    return IrrAction(
        group=G, subgroup=A, alpha=alpha, base=irr_a, alpha_a=alpha_a,
        a_map=tuple(a_map), perm=perm, witnesses=witnesses,
    )


@dataclass(eq=False)
class OrbitDatum:
    """One orbit of the action with its isotropy apparatus."""

    representative: int
    members: tuple[int, ...]
    isotropy: SubgroupHandle            # G_[tau], on G
    gt_group: FiniteGroup               # G_[tau] re-indexed
    gt_map: tuple[int, ...]             # gt index -> G index
    alpha_gt: Cocycle
    a_in_gt: SubgroupHandle             # A inside gt_group
    quotient: QuotientWithSection       # A normal in G_[tau]
    tau: ProjectiveRep                  # representative irreducible of A
    M: np.ndarray                       # (|Q_tau|, d, d) with M[0] = I
    beta: NumericCocycle | None

    @property
    def q_group(self) -> FiniteGroup:
        return self.quotient.quotient

    def section_in_g(self, q: int) -> int:
        """sigma(q) as an element index of the parent group G."""
        return self.gt_map[self.quotient.section[q]]


def orbit_data(action: IrrAction, alpha: Cocycle, phase_seed: int | None = None,
               tol: Tolerances | None = None) -> list[OrbitDatum]:
    """Isotropy groups, intertwiner families, and induced cocycles per orbit.

    phase_seed, when given, multiplies each M(q), q != 1, by a fixed random
    unit scalar: a convention change that moves beta by a coboundary and
    must leave all cohomology-level outputs unchanged.
    """
    tol = tol or default_tolerances()
    G = action.group
    A = action.subgroup
    rng = np.random.default_rng(phase_seed) if phase_seed is not None else None
    data = []
    for members in action.orbits():
        rep_idx = members[0]
        iso_elems = tuple(
            g for g in range(G.order) if int(action.perm[g, rep_idx]) == rep_idx
        )
        isotropy = SubgroupHandle(G, iso_elems)
        gt_group, gt_map = isotropy.as_group()
        alpha_gt, _ = restrict(alpha, isotropy)
        a_in_gt = SubgroupHandle(gt_group, tuple(isotropy.position(a) for a in A.elements))
        qs = quotient_with_section(gt_group, a_in_gt)
        tau = action.base.irreducibles[rep_idx]
        d = tau.dim
        nq = qs.quotient.order
        M = np.empty((nq, d, d), dtype=np.complex128)
        M[0] = np.eye(d)
        for q in range(1, nq):
            g = gt_map[qs.section[q]]
            moved = act(alpha, A, g, tau, tol=tol)
            w = intertwiner(tau, moved, tol)
            if w is None:
                raise UnmatchedCharacter(f"section element {g} does not fix the class")
            if rng is not None:
                z = np.exp(2j * np.pi * rng.random())
                w = z * w
            M[q] = w
        datum = OrbitDatum(
            representative=rep_idx, members=members, isotropy=isotropy,
            gt_group=gt_group, gt_map=tuple(gt_map), alpha_gt=alpha_gt,
            a_in_gt=a_in_gt, quotient=qs, tau=tau, M=M, beta=None,
        )
        _check_m_family(datum, action, tol)
        datum.beta = induced_cocycle(datum, alpha, tol)
        data.append(datum)
    return data


def _check_m_family(datum: OrbitDatum, action: IrrAction, tol: Tolerances) -> None:
    """sigma(q).tau(a) must equal M(q)^-1 tau(a) M(q) for every q and a."""
    tau = datum.tau
    for q in range(datum.q_group.order):
        g = datum.section_in_g(q)
        moved = act(action.alpha, action.subgroup, g, tau, tol=tol)
        Mq = datum.M[q]
        err = float(
            np.max(np.abs(moved.matrices - Mq.conj().T[None] @ tau.matrices @ Mq[None]))
        )
        assert err <= 10 * tol.rep, f"M family fails conjugation check at q={q} ({err:.2e})"


def induced_cocycle(datum: OrbitDatum, alpha: Cocycle,
                    tol: Tolerances | None = None) -> NumericCocycle:
    """The induced 2-cocycle beta on the isotropy quotient.

    For each pair (q1, q2) the matrix

        tau_scalar(q1,q2) * tau(chi(q1,q2)) * M(q2)^-1 M(q1)^-1 M(q1 q2)

    must be a unit scalar matrix; the scalars assemble into a normalized
    2-cocycle on Q_[tau].
    """
    tol = tol or default_tolerances()
    qs = datum.quotient
    Q = qs.quotient
    tau = datum.tau
    apos = {g: i for i, g in enumerate(_a_parent_order(datum))}
    Minv = np.conj(np.transpose(datum.M, (0, 2, 1)))
    table = np.empty((Q.order, Q.order), dtype=np.complex128)
    for q1 in range(Q.order):
        for q2 in range(Q.order):
            c_gt = chi(qs, q1, q2)
            a_idx = apos[datum.gt_map[c_gt]]
            scal = tau_scalar(datum.alpha_gt, qs, q1, q2).value()
            q12 = int(Q.mul[q1, q2])
            T = scal * tau.matrices[a_idx] @ Minv[q2] @ Minv[q1] @ datum.M[q12]
            diag = np.diagonal(T)
            off = T - np.diag(diag)
            mean = complex(np.mean(diag))
            if np.max(np.abs(off)) > tol.scalar or np.max(np.abs(diag - mean)) > tol.scalar:
                raise NotScalar(f"induced matrix at ({q1},{q2}) is not scalar")
            if abs(abs(mean) - 1.0) > tol.unitary:
                raise NotUnimodular(f"induced scalar at ({q1},{q2}) has modulus {abs(mean)}")
            table[q1, q2] = mean
    return make_numeric_cocycle(Q, table, tol)  # re-checks: normalized 2-cocycle


def _a_parent_order(datum: OrbitDatum) -> tuple[int, ...]:
    """A's elements in parent-G order, i.e. the standalone-A index order."""
    return tuple(datum.gt_map[x] for x in datum.a_in_gt.elements)


def _hom_basis(tau_mats: np.ndarray, w_mats: list[np.ndarray]) -> np.ndarray:
    """Orthonormal basis of {f : f tau(a) = W(a) f for all a}, as columns of vec(f)."""
    d_tau = tau_mats.shape[1]
    d_w = w_mats[0].shape[0]
    eye_tau = np.eye(d_tau)
    eye_w = np.eye(d_w)
    rows = [
        np.kron(w, eye_tau) - np.kron(eye_w, t.T)
        for t, w in zip(tau_mats, w_mats)
    ]
    from .reps import _nullspace

    return _nullspace(np.vstack(rows))


def _hom_action(datum: OrbitDatum, w_lookup, q_list, tol: Tolerances
                ) -> tuple[np.ndarray, dict[int, np.ndarray]]:
    """Basis of Hom_A(V_tau, W) and the matrices of q . f = W(sigma(q)) f M_q^-1.

    w_lookup maps a parent-G element index to the matrix acting on W; it
    must cover A and sigma(q) for the requested q_list.
    """
    tau = datum.tau
    a_order = _a_parent_order(datum)
    F = _hom_basis(tau.matrices, [w_lookup(g) for g in a_order])
    m = F.shape[1]
    if m == 0:
        raise NotIsotypic("input has no component on the orbit representative")
    d_w = w_lookup(a_order[0]).shape[0]
    mats: dict[int, np.ndarray] = {}
    for q in q_list:
        S = w_lookup(datum.section_in_g(q))
        Minv = datum.M[q].conj().T
        R = np.empty((m, m), dtype=np.complex128)
        for i in range(m):
            f = F[:, i].reshape(d_w, tau.dim)
            moved = (S @ f @ Minv).reshape(-1)
            coords = F.conj().T @ moved
            resid = float(np.linalg.norm(moved - F @ coords))
            assert resid <= tol.rep_numeric, f"q.f left the Hom space (residual {resid:.2e})"
            R[:, i] = coords
        mats[q] = R
    return F, mats


def hom_rep(W: ProjectiveRep, datum: OrbitDatum,
            tol: Tolerances | None = None) -> ProjectiveRep:
    """The multiplicity representation of the isotropy quotient on Hom_A(V_tau, W).

    W is a representation of the isotropy group (in its standalone
    indexing). The input is implicitly projected onto its tau-isotypic
    part: the Hom space only sees that component. Errors if the component
    is zero; the result satisfies the beta-twisted relation, which is
    asserted.
    """
    tol = tol or default_tolerances()
    if W.group is not datum.gt_group and not W.group.same_table(datum.gt_group):
        raise InputError("hom_rep expects a representation of the isotropy group")
    gt_pos = {g: i for i, g in enumerate(datum.gt_map)}

    def w_lookup(g_parent: int) -> np.ndarray:
        return W.matrices[gt_pos[g_parent]]

    Q = datum.q_group
    _, mats = _hom_action(datum, w_lookup, range(Q.order), tol)
    m = mats[0].shape[0]
    stacked = np.stack([mats[q] for q in range(Q.order)])
    rep = ProjectiveRep(Q, datum.beta, m, stacked)
    _assert_twisted_relation(rep, tol)
    # m * dim(tau) is the dimension of the tau-isotypic component
    tau_mult = _isotypic_multiplicity(W, datum, tol)
    assert m == tau_mult, f"Hom dimension {m} != character multiplicity {tau_mult}"
    return rep


def _isotypic_multiplicity(W: ProjectiveRep, datum: OrbitDatum, tol: Tolerances) -> int:
    # a_in_gt ordering matches the standalone-A ordering used by tau
    w_a = restrict_rep(W, datum.a_in_gt, tol=tol)
    return multiplicity(w_a, datum.tau, tol)


def _assert_twisted_relation(rep: ProjectiveRep, tol: Tolerances) -> None:
    Q = rep.group
    beta = rep.cocycle.complex_table
    for q1 in range(Q.order):
        lhs = rep.matrices[q1] @ rep.matrices
        rhs = beta[q1][:, None, None] * rep.matrices[Q.mul[q1]]
        err = float(np.max(np.abs(lhs - rhs)))
        assert err <= 10 * tol.rep, f"beta-twisted relation fails at q1={q1} ({err:.2e})"


def reconstruct_rep(datum: OrbitDatum, hom: ProjectiveRep,
                    tol: Tolerances | None = None) -> ProjectiveRep:
    """Rebuild the isotropy-group representation on V_tau (x) Hom.

    h acts by [M_q * scalar * tau(sigma(q)^-1 h)] (x) hom(q) with
    q = pi(h); the result is a representation for the restricted cocycle
    whose character equals that of the tau-isotypic part of the input to
    hom_rep. Specializes the bundle reconstruction action to a point.
    """
    tol = tol or default_tolerances()
    qs = datum.quotient
    gt = datum.gt_group
    ctable = datum.alpha_gt.complex_table
    apos = {g: i for i, g in enumerate(_a_parent_order(datum))}
    d = datum.tau.dim * hom.dim
    mats = np.empty((gt.order, d, d), dtype=np.complex128)
    for h in range(gt.order):
        q = qs.projection[h]
        s = qs.section[q]
        sinv = int(gt.inv[s])
        x = int(gt.mul[sinv, h])            # sigma(q)^-1 h, lies in A
        scale = np.conj(ctable[s, sinv]) * ctable[sinv, h]
        a_idx = apos[datum.gt_map[x]]
        left = datum.M[q] @ (scale * datum.tau.matrices[a_idx])
        mats[h] = np.kron(left, hom.matrices[q])
    rep = ProjectiveRep(gt, datum.alpha_gt, d, mats)
    report = validate_rep(rep, tol)
    assert report.ok, f"reconstruction is not a representation: {report.violations[:3]}"
    return rep


@dataclass(eq=False)
class DecompositionReport:
    """The verified correspondence between Irr(G, alpha) and the orbit side."""

    group: FiniteGroup
    subgroup: SubgroupHandle
    alpha: Cocycle
    seed: int
    irr_g: IrrTable
    action: IrrAction
    orbits: list[OrbitDatum]
    beta_tables: list[IrrTable]
    matching: list[tuple[int, int]]        # W index -> (orbit index, class index)
    multiplicities: list[tuple[int, ...]]  # W index -> mult per A-irreducible

    @property
    def rank_lhs(self) -> int:
        return len(self.irr_g)

    @property
    def rank_rhs(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.beta_tables)

    @property
    def rank_ok(self) -> bool:
        return self.rank_lhs == sum(self.rank_rhs)


def verify_point_decomposition(G: FiniteGroup, A: SubgroupHandle, alpha: Cocycle,
                               seed: int = 0, phase_seed: int | None = None,
                               tol: Tolerances | None = None) -> DecompositionReport:
    """Run the whole pipeline at a single point and verify the bijection.

    Each irreducible W of (G, alpha) restricts to A inside a single orbit
    with uniform multiplicities, its Hom representation matches exactly one
    beta-twisted class of the orbit's isotropy quotient, and the global
    matching is a bijection whose counts give the rank identity.
    """
    tol = tol or default_tolerances()
    if not is_normal(G, A):
        raise NotNormal("decomposition requires a normal subgroup")
    irr_g = irreducibles(G, alpha, seed=seed, tol=tol)
    action = action_table(G, A, alpha, seed=seed, tol=tol)
    orbits = orbit_data(action, alpha, phase_seed=phase_seed, tol=tol)
    beta_tables = [
        irreducibles(datum.q_group, datum.beta, seed=seed, tol=tol) for datum in orbits
    ]
    orbit_of_irr = {}
    for oi, datum in enumerate(orbits):
        for member in datum.members:
            orbit_of_irr[member] = oi
    matching: list[tuple[int, int]] = []
    multiplicities: list[tuple[int, ...]] = []
    for wi, W in enumerate(irr_g.irreducibles):
        w_a = restrict_rep(W, A, action.alpha_a, tol=tol)
        mults = tuple(
            multiplicity(w_a, tau, tol) for tau in action.base.irreducibles
        )
        multiplicities.append(mults)
        support = [i for i, m in enumerate(mults) if m > 0]
        touched = {orbit_of_irr[i] for i in support}
        if len(touched) != 1:
            raise OrbitMixing(f"W_{wi} restricts across orbits {sorted(touched)}")
        oi = touched.pop()
        datum = orbits[oi]
        orbit_mults = {mults[i] for i in datum.members}
        if len(orbit_mults) != 1 or 0 in orbit_mults:
            raise OrbitMixing(f"W_{wi} has uneven multiplicities across its orbit")
        dim_check = sum(mults[i] * action.base.irreducibles[i].dim for i in support)
        assert dim_check == W.dim, "restriction dimensions do not add up"
        w_gt = restrict_rep(W, datum.isotropy, datum.alpha_gt, tol=tol)
        hom = hom_rep(w_gt, datum, tol=tol)
        j = beta_tables[oi].match_character(character(hom), tol.char)
        if j is None:
            raise MatchFailure(f"Hom representation of W_{wi} matches no beta-class")
        matching.append((oi, j))
    if len(set(matching)) != len(matching):
        raise MatchFailure("matching is not injective")
    total = sum(len(t) for t in beta_tables)
    if total != len(irr_g.irreducibles):
        raise MatchFailure(
            f"rank mismatch: {len(irr_g.irreducibles)} irreducibles vs {total} classes"
        )
    return DecompositionReport(
        group=G, subgroup=A, alpha=alpha, seed=seed, irr_g=irr_g, action=action,
        orbits=orbits, beta_tables=beta_tables, matching=matching,
        multiplicities=multiplicities,
    )
