"""Ordinary (1-categorical) Mackey and Green functors as finite data.

A functor here is a table: one free module per subgroup of G (all
subgroups, not just class representatives, so conjugation maps are total),
a restriction and a transfer matrix per containment K <= H, and a
conjugation matrix per pair (g, H).  `verify_mackey_axioms` checks, over
every chain and every triple, the four axioms: functoriality of
restriction and transfer, functoriality of conjugation (with inner
conjugations acting trivially), compatibility of conjugation with both
maps, and the double-coset (Mackey) formula

    res^L_K tr^L_H = sum over KxH in L of tr^K_{K n xHx^-1} c_x res^H_{x^-1Kx n H}.

Transfers in the Hom-functor are the relative trace f |-> sum_t Y(t) f X(t)^-1
over a transversal, which is the composite of the pinned unit/counit pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from .groups import FiniteGroup, Subgroup
from .linalg import Field, Mat, QQ
from .reps import Module, ModuleHom, hom_space, restrict_to

__all__ = [
    "OrdinaryMackeyFunctor",
    "GreenFunctorData",
    "CheckResult",
    "MackeyAxiomReport",
    "verify_mackey_axioms",
    "verify_green_axioms",
    "cohomological_check",
    "hom_decategorify",
    "green_from_monoid",
    "burnside_green_functor",
    "all_subgroups_sorted",
]

FAILURE_LIST_CAP = 12


def all_subgroups_sorted(G: FiniteGroup) -> List[Subgroup]:
    """Every subgroup of G (not just class representatives), sorted by
    (order, element tuple)."""
    subs = [tuple(sorted(s)) for s in G.all_subgroups()]
    subs.sort(key=lambda t: (len(t), t))
    return [G.subgroup(t) for t in subs]


@dataclass
class LevelData:
    subgroup: Subgroup
    dim: int
    labels: Tuple


class OrdinaryMackeyFunctor:
    """Plain data holder; the equations live in verify_mackey_axioms."""

    def __init__(
        self,
        group: FiniteGroup,
        field: Field,
        levels: Dict[Subgroup, LevelData],
        res: Dict[Tuple[Subgroup, Subgroup], Mat],
        tr: Dict[Tuple[Subgroup, Subgroup], Mat],
        conj: Dict[Tuple[int, Subgroup], Mat],
    ):
        self.group = group
        self.field = field
        self.levels = levels
        self.res = res
        self.tr = tr
        self.conj = conj
        self.subgroups = sorted(levels.keys(), key=lambda S: (S.order, S.elements))
        sets = {S: frozenset(S.elements) for S in self.subgroups}
        for K in self.subgroups:
            for H in self.subgroups:
                if sets[K] <= sets[H]:
                    r = res.get((K, H))
                    t = tr.get((K, H))
                    if r is None or t is None:
                        raise ValueError(f"missing maps for {K.elements} <= {H.elements}")
                    if r.shape != (levels[K].dim, levels[H].dim):
                        raise ValueError("restriction matrix has wrong shape")
                    if t.shape != (levels[H].dim, levels[K].dim):
                        raise ValueError("transfer matrix has wrong shape")
        for g in range(group.order):
            for H in self.subgroups:
                c = conj.get((g, H))
                if c is None:
                    raise ValueError(f"missing conjugation ({g}, {H.elements})")
                tgt = H.conjugate_by(g)
                if c.shape != (levels[tgt].dim, levels[H].dim):
                    raise ValueError("conjugation matrix has wrong shape")

    def level(self, S: Subgroup) -> LevelData:
        return self.levels[S]


@dataclass
class CheckResult:
    name: str
    instances: int
    failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class MackeyAxiomReport:
    checks: List[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def clause(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            status = "ok" if c.ok else f"{len(c.failures)} FAILED"
            lines.append(f"{c.name}: {c.instances} instances, {status}")
            for f in c.failures[:3]:
                lines.append(f"    {f}")
        return "\n".join(lines)


def _double_cosets_in(G: FiniteGroup, L: Subgroup, K: Subgroup, H: Subgroup) -> List[int]:
    """Minimal representatives of K\\L/H for K, H <= L, in G coordinates."""
    seen = set()
    reps = []
    for x in L.elements:
        if x in seen:
            continue
        reps.append(x)
        for k in K.elements:
            kx = G.mul(k, x)
            for h in H.elements:
                seen.add(G.mul(kx, h))
    return reps


def verify_mackey_axioms(M: OrdinaryMackeyFunctor) -> MackeyAxiomReport:
    """Exhaustive check of the four Mackey-functor axioms over all chains,
    conjugation pairs, and double-coset triples."""
    G = M.group
    subs = M.subgroups
    sets = {S: frozenset(S.elements) for S in subs}
    f = M.field
    checks: List[CheckResult] = []

    def run(name: str, gen) -> None:
        inst, fails = 0, []
        for desc, ok in gen:
            inst += 1
            if not ok and len(fails) < FAILURE_LIST_CAP:
                fails.append(desc)
        checks.append(CheckResult(name, inst, fails))

    def identity_maps():
        for H in subs:
            d = M.levels[H].dim
            yield (f"res at {H.elements}", M.res[(H, H)] == Mat.identity(f, d))
            yield (f"tr at {H.elements}", M.tr[(H, H)] == Mat.identity(f, d))
            for h in H.elements:
                yield (f"c_{h} on {H.elements}",
                       M.conj[(h, H)] == Mat.identity(f, d))
    run("identity-maps", identity_maps())

    chains = [(K, L, H) for K in subs for L in subs for H in subs
              if sets[K] <= sets[L] <= sets[H]]

    def res_chain():
        for K, L, H in chains:
            yield (f"res {K.elements}<={L.elements}<={H.elements}",
                   M.res[(K, H)] == M.res[(K, L)] @ M.res[(L, H)])
    run("restriction-functoriality", res_chain())

    def tr_chain():
        for K, L, H in chains:
            yield (f"tr {K.elements}<={L.elements}<={H.elements}",
                   M.tr[(K, H)] == M.tr[(L, H)] @ M.tr[(K, L)])
    run("transfer-functoriality", tr_chain())

    def conj_chain():
        for H in subs:
            for h in range(G.order):
                Hh = H.conjugate_by(h)
                for g in range(G.order):
                    yield (f"c_{g} c_{h} on {H.elements}",
                           M.conj[(g, Hh)] @ M.conj[(h, H)]
                           == M.conj[(G.mul(g, h), H)])
    run("conjugation-functoriality", conj_chain())

    pairs = [(K, H) for K in subs for H in subs if sets[K] <= sets[H]]

    def conj_res():
        for K, H in pairs:
            for g in range(G.order):
                yield (f"c_{g} res {K.elements}<={H.elements}",
                       M.conj[(g, K)] @ M.res[(K, H)]
                       == M.res[(K.conjugate_by(g), H.conjugate_by(g))] @ M.conj[(g, H)])
    run("conjugation-restriction-compatibility", conj_res())

    def conj_tr():
        for K, H in pairs:
            for g in range(G.order):
                yield (f"c_{g} tr {K.elements}<={H.elements}",
                       M.conj[(g, H)] @ M.tr[(K, H)]
                       == M.tr[(K.conjugate_by(g), H.conjugate_by(g))] @ M.conj[(g, K)])
    run("conjugation-transfer-compatibility", conj_tr())

    def mackey():
        for L in subs:
            inner = [S for S in subs if sets[S] <= sets[L]]
            for K in inner:
                for H in inner:
                    lhs = M.res[(K, L)] @ M.tr[(H, L)]
                    rhs = Mat.zeros(f, M.levels[K].dim, M.levels[H].dim)
                    for x in _double_cosets_in(G, L, K, H):
                        xH = H.conjugate_by(x)
                        A = G.subgroup(sets[K] & frozenset(xH.elements))     # K n xHx^-1
                        B = A.conjugate_by(G.inv(x))                          # x^-1Kx n H
                        rhs = rhs + M.tr[(A, K)] @ M.conj[(x, B)] @ M.res[(B, H)]
                    yield (f"mackey L={L.elements} K={K.elements} H={H.elements}",
                           lhs == rhs)
    run("mackey-formula", mackey())

    return MackeyAxiomReport(checks)


def cohomological_check(M: OrdinaryMackeyFunctor) -> CheckResult:
    """tr o res = [H:K] . id at every containment; the report lists failures
    (a functor need not be cohomological — the Burnside one is not)."""
    subs = M.subgroups
    sets = {S: frozenset(S.elements) for S in subs}
    inst, fails = 0, []
    for K in subs:
        for H in subs:
            if not sets[K] <= sets[H]:
                continue
            inst += 1
            idx = H.order // K.order
            d = M.levels[H].dim
            lhs = M.tr[(K, H)] @ M.res[(K, H)]
            if lhs != Mat.identity(M.field, d).scale(idx):
                if len(fails) < FAILURE_LIST_CAP:
                    fails.append(f"tr res at {K.elements}<={H.elements} != {idx} id")
    return CheckResult("cohomological", inst, fails)


# ---------------------------------------------------------------------------
# Hom decategorification


def _coords_in_basis(basis: List[Mat], target: Mat, field: Field) -> Mat:
    """Coordinates of a matrix in a list basis (by column-stacking); hard
    error when the element is outside the span."""
    if not basis:
        if target.is_zero():
            return Mat.zeros(field, 0, 1)
        raise ArithmeticError("element outside the (empty) hom space")
    stack = basis[0].vec()
    for b in basis[1:]:
        stack = stack.hstack(b.vec())
    sol = stack.solve(target.vec())
    if sol is None:
        raise ArithmeticError("image left the expected hom space")
    return sol


def hom_decategorify(X: Module, Y: Module) -> OrdinaryMackeyFunctor:
    """The Mackey functor H |-> Hom_kH(Res X, Res Y).

    Restriction is literal inclusion of intertwiners, conjugation is
    f |-> Y(g) f X(g)^-1, and the transfer is the relative trace
    f |-> sum_t Y(t) f X(t)^-1 over minimal coset representatives, each
    expressed in the echelon basis of the target hom space (with membership
    verified exactly).
    """
    if X.group is not Y.group or X.field != Y.field:
        raise ValueError("modules must share group and field")
    G, f = X.group, X.field
    subs = all_subgroups_sorted(G)
    bases: Dict[Subgroup, List[Mat]] = {}
    levels: Dict[Subgroup, LevelData] = {}
    for S in subs:
        hs = hom_space(restrict_to(X, S), restrict_to(Y, S))
        bases[S] = [h.mat for h in hs]
        levels[S] = LevelData(S, len(hs), tuple(range(len(hs))))
    sets = {S: frozenset(S.elements) for S in subs}
    res: Dict[Tuple[Subgroup, Subgroup], Mat] = {}
    tr: Dict[Tuple[Subgroup, Subgroup], Mat] = {}
    for K in subs:
        for H in subs:
            if not sets[K] <= sets[H]:
                continue
            cols = [_coords_in_basis(bases[K], b, f) for b in bases[H]]
            res[(K, H)] = _cols_to_mat(cols, levels[K].dim, f)
            Hgrp, Hel = H.as_group()
            Kin = Hgrp.subgroup(Hel.index(x) for x in K.elements)
            reps_h, _ = Hgrp.left_transversal(Kin)
            ts = [Hel[i] for i in reps_h]
            cols = []
            for b in bases[K]:
                acc = None
                for t in ts:
                    term = Y.action(t) @ b @ X.action_inv(t)
                    acc = term if acc is None else acc + term
                cols.append(_coords_in_basis(bases[H], acc, f))
            tr[(K, H)] = _cols_to_mat(cols, levels[H].dim, f)
    conj: Dict[Tuple[int, Subgroup], Mat] = {}
    for g in range(G.order):
        for H in subs:
            tgt = H.conjugate_by(g)
            cols = [_coords_in_basis(bases[tgt], Y.action(g) @ b @ X.action_inv(g), f)
                    for b in bases[H]]
            conj[(g, H)] = _cols_to_mat(cols, levels[tgt].dim, f)
    return OrdinaryMackeyFunctor(G, f, levels, res, tr, conj)


def _cols_to_mat(cols: List[Mat], nrows: int, field: Field) -> Mat:
    if not cols:
        return Mat.zeros(field, nrows, 0)
    out = cols[0]
    for c in cols[1:]:
        out = out.hstack(c)
    return out


# ---------------------------------------------------------------------------
# Green functors


@dataclass
class GreenFunctorData:
    underlying: OrdinaryMackeyFunctor
    products: Dict[Subgroup, List[Mat]]  # left multiplication per basis element
    units: Dict[Subgroup, Mat]           # unit column per level

    def product(self, H: Subgroup, u: Mat, v: Mat) -> Mat:
        f = self.underlying.field
        out = Mat.zeros(f, v.nrows, 1)
        for i, L in enumerate(self.products[H]):
            c = u.num[i, 0]
            if c:
                s = int(c) if f.p is not None else Fraction(int(c), u.den)
                out = out + (L @ v).scale(s)
        return out


def verify_green_axioms(Gf: GreenFunctorData) -> MackeyAxiomReport:
    """Per-level ring laws, restrictions as unital ring maps, and both
    Frobenius (projection) formulas on all containments and basis pairs."""
    M = Gf.underlying
    f = M.field
    subs = M.subgroups
    sets = {S: frozenset(S.elements) for S in subs}
    checks: List[CheckResult] = []

    def run(name, gen):
        inst, fails = 0, []
        for desc, ok in gen:
            inst += 1
            if not ok and len(fails) < FAILURE_LIST_CAP:
                fails.append(desc)
        checks.append(CheckResult(name, inst, fails))

    def level_rings():
        for H in subs:
            d = M.levels[H].dim
            Ls = Gf.products[H]
            u = Gf.units[H]
            for j in range(d):
                ej = Mat.identity(f, d).col(j)
                yield (f"unit at {H.elements} col {j}",
                       Gf.product(H, u, ej) == ej and Gf.product(H, ej, u) == ej)
            for i in range(d):
                for j in range(d):
                    eij = Ls[i].col(j)
                    for k in range(d):
                        ek = Mat.identity(f, d).col(k)
                        lhs = Gf.product(H, eij, ek)
                        rhs = Ls[i] @ Gf.product(H, Mat.identity(f, d).col(j), ek)
                        yield (f"assoc at {H.elements} ({i},{j},{k})", lhs == rhs)
    run("level-ring-laws", level_rings())

    def res_hom():
        for K in subs:
            for H in subs:
                if not sets[K] <= sets[H]:
                    continue
                r = M.res[(K, H)]
                dH = M.levels[H].dim
                yield (f"res unit {K.elements}<={H.elements}",
                       r @ Gf.units[H] == Gf.units[K])
                for i in range(dH):
                    ei = Mat.identity(f, dH).col(i)
                    for j in range(dH):
                        ej = Mat.identity(f, dH).col(j)
                        lhs = r @ Gf.product(H, ei, ej)
                        rhs = Gf.product(K, r @ ei, r @ ej)
                        yield (f"res hom {K.elements}<={H.elements} ({i},{j})", lhs == rhs)
    run("restriction-ring-homomorphism", res_hom())

    def frobenius():
        for K in subs:
            for H in subs:
                if not sets[K] <= sets[H]:
                    continue
                r, t = M.res[(K, H)], M.tr[(K, H)]
                dH, dK = M.levels[H].dim, M.levels[K].dim
                for i in range(dH):
                    x = Mat.identity(f, dH).col(i)
                    for j in range(dK):
                        y = Mat.identity(f, dK).col(j)
                        lhs = t @ Gf.product(K, r @ x, y)
                        rhs = Gf.product(H, x, t @ y)
                        yield (f"frobenius-left {K.elements}<={H.elements} ({i},{j})",
                               lhs == rhs)
                        lhs2 = t @ Gf.product(K, y, r @ x)
                        rhs2 = Gf.product(H, t @ y, x)
                        yield (f"frobenius-right {K.elements}<={H.elements} ({i},{j})",
                               lhs2 == rhs2)
    run("frobenius-formulas", frobenius())

    return MackeyAxiomReport(checks)


def green_from_monoid(X: Module, Y: Module, mul: ModuleHom, unit: ModuleHom) -> GreenFunctorData:
    """Green functor structure on H |-> Hom_kH(Res X, Res Y) by convolution
    with the multiplication of Y; X must be the trivial comonoid (dim 1,
    trivial action), so the comultiplication is the canonical isomorphism
    k = k (x) k.

    The multiplication is verified associative and unital before anything
    is built; non-associative input is a contract violation.
    """
    G, f = Y.group, Y.field
    if X.dim != 1 or any(not X.action(g).is_identity() for g in range(G.order)):
        raise ValueError("X must be the trivial comonoid")
    d = Y.dim
    I = Mat.identity(f, d)
    if mul.mat.shape != (d, d * d) or unit.mat.shape != (d, 1):
        raise ValueError("multiplication/unit have wrong shapes")
    if mul.mat @ mul.mat.kron(I) != mul.mat @ I.kron(mul.mat):
        raise ValueError("input multiplication is not associative")
    if mul.mat @ unit.mat.kron(I) != I or mul.mat @ I.kron(unit.mat) != I:
        raise ValueError("input multiplication is not unital")
    M = hom_decategorify(X, Y)
    # rebuild level bases to express products (bases are deterministic)
    products: Dict[Subgroup, List[Mat]] = {}
    units: Dict[Subgroup, Mat] = {}
    for S in M.subgroups:
        basis = [h.mat for h in hom_space(restrict_to(X, S), restrict_to(Y, S))]
        dS = len(basis)
        Ls = []
        for i in range(dS):
            cols = []
            for j in range(dS):
                prod = mul.mat @ basis[i].kron(basis[j])  # k = k(x)k -> Y(x)Y -> Y
                cols.append(_coords_in_basis(basis, prod, f))
            Ls.append(_cols_to_mat(cols, dS, f))
        products[S] = Ls
        units[S] = _coords_in_basis(basis, unit.mat, f)
    return GreenFunctorData(M, products, units)


# ---------------------------------------------------------------------------
# the Burnside Green functor


def _subgroup_classes_in(
    G: FiniteGroup, H: Subgroup
) -> Tuple[List[Subgroup], Dict[frozenset, int]]:
    """H-conjugacy classes of subgroups of H: canonical representatives as
    subgroups of G (sorted by order then element tuple), plus a lookup
    mapping every subgroup contained in H to its class index."""
    Hset = frozenset(H.elements)
    remaining = {s for s in G.all_subgroups() if s <= Hset}
    orbits: List[Tuple[Tuple[int, Tuple[int, ...]], set]] = []
    while remaining:
        s = next(iter(remaining))
        orbit = {frozenset(G.conjugate_subgroup(h, s)) for h in H.elements}
        remaining -= orbit
        orbits.append((min((len(t), tuple(sorted(t))) for t in orbit), orbit))
    orbits.sort(key=lambda pair: pair[0])
    classes = [G.subgroup(key[1]) for key, _ in orbits]
    index_of: Dict[frozenset, int] = {}
    for i, (_, orbit) in enumerate(orbits):
        for t in orbit:
            index_of[t] = i
    return classes, index_of


def burnside_green_functor(G: FiniteGroup) -> GreenFunctorData:
    """The Burnside-ring Green functor: level H is the free module on
    H-classes of subgroups S <= H (the classes of transitive H-sets H/S);
    res / tr / conj / product all come from counting double cosets:

        res^H_K [H/S]   = sum over KhS of [K/(K n hSh^-1)]
        tr^H_K  [K/S]   = [H/S]
        c_g     [H/S]   = [gHg^-1 / gSg^-1]
        [H/S] . [H/T]   = sum over ShT of [H/(S n hTh^-1)]

    The full Mackey axiom suite and the Green axioms are run before the
    functor is returned; any failure is a hard error.
    """
    f = QQ
    subs = all_subgroups_sorted(G)
    classes: Dict[Subgroup, List[Subgroup]] = {}
    index_of: Dict[Subgroup, Dict[frozenset, int]] = {}
    levels: Dict[Subgroup, LevelData] = {}
    for H in subs:
        cl, idx = _subgroup_classes_in(G, H)
        classes[H], index_of[H] = cl, idx
        levels[H] = LevelData(H, len(cl), tuple(S.elements for S in cl))
    sets = {S: frozenset(S.elements) for S in subs}
    res: Dict[Tuple[Subgroup, Subgroup], Mat] = {}
    tr: Dict[Tuple[Subgroup, Subgroup], Mat] = {}
    for K in subs:
        for H in subs:
            if not sets[K] <= sets[H]:
                continue
            clH, clK = classes[H], classes[K]
            rmat = np.zeros((len(clK), len(clH)), dtype=np.int64)
            for j, S in enumerate(clH):
                for h in _double_cosets_in(G, H, K, S):
                    inter = sets[K] & G.conjugate_subgroup(h, S.elements)
                    rmat[index_of[K][inter], j] += 1
            res[(K, H)] = Mat(f, rmat)
            tmat = np.zeros((len(clH), len(clK)), dtype=np.int64)
            for j, S in enumerate(clK):
                tmat[index_of[H][frozenset(S.elements)], j] += 1
            tr[(K, H)] = Mat(f, tmat)
    conj: Dict[Tuple[int, Subgroup], Mat] = {}
    for g in range(G.order):
        for H in subs:
            tgt = H.conjugate_by(g)
            clH, clT = classes[H], classes[tgt]
            cmat = np.zeros((len(clT), len(clH)), dtype=np.int64)
            for j, S in enumerate(clH):
                cmat[index_of[tgt][G.conjugate_subgroup(g, S.elements)], j] += 1
            conj[(g, H)] = Mat(f, cmat)
    M = OrdinaryMackeyFunctor(G, f, levels, res, tr, conj)

    products: Dict[Subgroup, List[Mat]] = {}
    units: Dict[Subgroup, Mat] = {}
    for H in subs:
        cl = classes[H]
        r = len(cl)
        Ls = []
        for i, S in enumerate(cl):
            mat = np.zeros((r, r), dtype=np.int64)
            for j, T in enumerate(cl):
                for h in _double_cosets_in(G, H, S, T):
                    inter = sets[S] & G.conjugate_subgroup(h, T.elements)
                    mat[index_of[H][inter], j] += 1
            Ls.append(Mat(f, mat))
        products[H] = Ls
        u = np.zeros((r, 1), dtype=np.int64)
        u[[i for i, S in enumerate(cl) if S.order == H.order][0], 0] = 1
        units[H] = Mat(f, u)
    Gf = GreenFunctorData(M, products, units)
    rep = verify_mackey_axioms(M)
    if not rep.ok:
        raise ArithmeticError("Burnside functor failed the Mackey axioms:\n" + rep.summary())
    grep = verify_green_axioms(Gf)
    if not grep.ok:
        raise ArithmeticError("Burnside functor failed the Green axioms:\n" + grep.summary())
    return Gf
