"""Exact modules over finite group algebras.

Induction here always means kG (x)_{kH} N with basis t (x) n over the
minimal-element left transversal {t} of H in G, and restriction/induction
form a two-sided adjunction whose units and counits are pinned to concrete
formulas.  Writing t0 for the minimal element of H (t0 = identity whenever
the group carries the BFS element order):

    eta_left  : N -> Res Ind N,   n |-> t0 (x) t0^-1 n     ("1 (x) n")
    eps_left  : Ind Res M -> M,   t (x) m |-> t m
    eta_right : M -> Ind Res M,   m |-> sum_t t (x) t^-1 m
    eps_right : Res Ind N -> N,   t (x) n |-> t0 n if t = t0 else 0

These satisfy all four triangle identities, eps_right o eta_left = id
(separability of the restriction monad) and eps_left o eta_right = [G:H] id.

The double-coset comparison map is the exchange ("mate") composite built
from these: on the summand of a double coset KxH it sends t (x) n to
tx (x) n, and its inverse sends v to sum_x sum_t t (x) e(x^-1 t^-1 v) where
e projects Ind N onto its trivial-coset component as in eps_right.  Both
directions are constructed and their composites checked to be identities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .groups import FiniteGroup, InjectiveHom, Subgroup
from .linalg import Field, GF, Mat, QQ, perm_to_mat

__all__ = [
    "Module",
    "ModuleHom",
    "InductionBasisLabel",
    "permutation_module",
    "regular_module",
    "trivial_module",
    "module_from_matrices",
    "restrict",
    "induce",
    "conj_module",
    "tensor",
    "direct_sum",
    "AdjunctionData",
    "unit_counit",
    "MackeyIsoData",
    "mackey_iso",
    "ProjectionData",
    "projection_map",
    "FrobeniusObject",
    "frobenius_object",
    "hom_space",
    "module_isomorphism",
    "DecompositionResult",
    "decompose",
    "SummandWitness",
    "is_summand",
    "VertexResult",
    "vertex",
    "GreenCorrespondence",
    "green_correspondent",
    "block_of",
    "DecompositionError",
]

MAX_DECOMPOSE_DIM = 200
EXHAUSTIVE_END_CAP = 16384


class DecompositionError(RuntimeError):
    """Raised when a decomposition or certification budget is exhausted."""


@dataclass(frozen=True)
class InductionBasisLabel:
    """Basis label t (x) e_j of an induced module: transversal element and
    inner basis index."""

    coset_rep: int
    inner: int


class Module:
    """A finite-dimensional kG-module given by its action on a chosen basis.

    The action is stored either as permutations of the basis (permutation
    modules and everything built from them stay in this form) or as one
    exact matrix per group element.  A(g)A(h) = A(gh) is checked on all
    pairs at construction for groups of order <= 24 (beyond that, on a
    seeded sample); modules derived by the functors in this file are
    homomorphic by construction and skip the re-check.
    """

    def __init__(
        self,
        group: FiniteGroup,
        field: Field,
        dim: int,
        perms: Optional[np.ndarray] = None,
        mats: Optional[List[Mat]] = None,
        basis_labels: Optional[List] = None,
        check: bool = True,
    ):
        if (perms is None) == (mats is None):
            raise ValueError("exactly one of perms/mats must be given")
        self.group = group
        self.field = field
        self.dim = dim
        self._perms = perms
        self._mats = mats
        self.basis_labels = basis_labels
        if perms is not None and perms.shape != (group.order, dim):
            raise ValueError("permutation action has wrong shape")
        if mats is not None:
            if len(mats) != group.order:
                raise ValueError("need one matrix per group element")
            for m in mats:
                if m.shape != (dim, dim) or m.field != field:
                    raise ValueError("bad action matrix")
        if check:
            self.verify_action()

    # -- action access ---------------------------------------------------

    @property
    def is_permutation(self) -> bool:
        return self._perms is not None

    def act_perm(self, g: int) -> np.ndarray:
        assert self._perms is not None
        return self._perms[g]

    def action(self, g: int) -> Mat:
        if self._perms is not None:
            return perm_to_mat(self.field, self._perms[g])
        assert self._mats is not None
        return self._mats[g]

    def action_inv(self, g: int) -> Mat:
        return self.action(self.group.inv(g))

    def verify_action(self) -> None:
        G = self.group
        n = G.order
        if self._perms is not None:
            P = self._perms
            if not np.array_equal(P[G.identity], np.arange(self.dim)):
                raise ValueError("identity does not act as the identity")
            for g in range(n):
                if not np.array_equal(P[g][P], P[G.table[g]]):
                    raise ValueError("action is not a homomorphism")
            return
        assert self._mats is not None
        if not self._mats[G.identity].is_identity():
            raise ValueError("identity does not act as the identity")
        if n <= 24:
            pairs = itertools.product(range(n), range(n))
        else:
            rng = np.random.default_rng(0)
            pairs = ((int(a), int(b)) for a, b in rng.integers(0, n, size=(500, 2)))
        for a, b in pairs:
            if self._mats[a] @ self._mats[b] != self._mats[G.table[a, b]]:
                raise ValueError(f"action is not a homomorphism at pair {(a, b)}")

    def label(self, idx: int):
        return self.basis_labels[idx] if self.basis_labels is not None else idx

    def __repr__(self) -> str:
        kind = "perm" if self.is_permutation else "dense"
        return f"Module(dim={self.dim}, {self.field!r}, {kind}, |G|={self.group.order})"


class ModuleHom:
    """A kG-linear map, verified to intertwine the two actions.

    Intertwining is checked on a generating set, which proves it for every
    element since both actions are verified homomorphisms.
    """

    def __init__(self, source: Module, target: Module, mat: Mat, check: bool = True):
        if source.group is not target.group:
            raise ValueError("source and target live over different groups")
        if source.field != target.field or mat.field != source.field:
            raise ValueError("field mismatch")
        if mat.shape != (target.dim, source.dim):
            raise ValueError(f"expected shape {(target.dim, source.dim)}, got {mat.shape}")
        self.source = source
        self.target = target
        self.mat = mat
        if check:
            for s in source.group.generators():
                if self.mat @ source.action(s) != target.action(s) @ self.mat:
                    raise ValueError(f"map does not intertwine generator {s}")

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        if other.target is not self.source and other.target.dim != self.source.dim:
            raise ValueError("homs are not composable")
        return ModuleHom(other.source, self.target, self.mat @ other.mat, check=False)

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.mat + other.mat, check=False)

    def scale(self, s) -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.mat.scale(s), check=False)

    def is_identity(self) -> bool:
        return self.mat.is_identity()

    def is_isomorphism(self) -> bool:
        return self.mat.is_invertible()

    def inverse(self) -> "ModuleHom":
        return ModuleHom(self.target, self.source, self.mat.inv(), check=False)

    def __repr__(self) -> str:
        return f"ModuleHom({self.source.dim} -> {self.target.dim} over {self.mat.field!r})"


# ---------------------------------------------------------------------------
# constructors


def permutation_module(G: FiniteGroup, H: Subgroup, field: Field) -> Module:
    """k[G/H] with the left translation action on cosets."""
    reps, coset_of = G.left_transversal(H)
    perms = coset_of[G.table[:, reps]]
    labels = [InductionBasisLabel(r, 0) for r in reps]
    return Module(G, field, len(reps), perms=perms, basis_labels=labels)


def regular_module(G: FiniteGroup, field: Field) -> Module:
    return permutation_module(G, G.trivial_subgroup(), field)


def trivial_module(G: FiniteGroup, field: Field) -> Module:
    return Module(G, field, 1, perms=np.zeros((G.order, 1), dtype=np.int64))


def module_from_matrices(G: FiniteGroup, field: Field, mats: Sequence[Mat]) -> Module:
    return Module(G, field, mats[0].nrows, mats=list(mats))


def restrict(hom: InjectiveHom, M: Module) -> Module:
    """Pull a module over hom.target back along hom (restriction)."""
    if M.group is not hom.target:
        raise ValueError("module does not live over the hom's target")
    idx = np.asarray(hom.map, dtype=np.int64)
    if M.is_permutation:
        return Module(hom.source, M.field, M.dim, perms=M._perms[idx], check=False)
    mats = [M._mats[i] for i in idx]
    return Module(hom.source, M.field, M.dim, mats=mats, check=False)


def restrict_to(M: Module, S: Subgroup) -> Module:
    return restrict(S.inclusion_hom(), M)


def _factorize_through(G: FiniteGroup, image_elements: Sequence[int]):
    """Transversal bookkeeping for Ind along a subgroup of G.

    Returns (reps, coset_of, in_image, pos_in_image): minimal-element left
    coset reps of the image subgroup, coset index per element, membership
    mask, and each element's index inside the sorted image list.
    """
    S = G.subgroup(image_elements)
    reps, coset_of = G.left_transversal(S)
    in_image = np.zeros(G.order, dtype=bool)
    pos = np.full(G.order, -1, dtype=np.int64)
    for i, s in enumerate(S.elements):
        in_image[s] = True
        pos[s] = i
    return reps, coset_of, in_image, pos


def induce(hom: InjectiveHom, N: Module) -> Module:
    """kG (x)_{kH} N along an injective hom with image H <= G."""
    if N.group is not hom.source:
        raise ValueError("module does not live over the hom's source")
    G = hom.target
    image = sorted(hom.map)
    back = {g: h for h, g in enumerate(hom.map)}  # image element -> source element
    reps, coset_of, _, _ = _factorize_through(G, image)
    nc, d = len(reps), N.dim
    labels = [InductionBasisLabel(reps[c], j) for c in range(nc) for j in range(d)]
    if N.is_permutation:
        perms = np.empty((G.order, nc * d), dtype=np.int64)
        for g in range(G.order):
            for c in range(nc):
                u = G.mul(g, reps[c])
                c2 = int(coset_of[u])
                s = G.mul(G.inv(reps[c2]), u)
                h = back[s]
                perms[g, c * d : (c + 1) * d] = c2 * d + N._perms[h]
        return Module(G, N.field, nc * d, perms=perms, basis_labels=labels, check=False)
    mats: List[Mat] = []
    for g in range(G.order):
        blocks = []
        den = 1
        for c in range(nc):
            u = G.mul(g, reps[c])
            c2 = int(coset_of[u])
            s = G.mul(G.inv(reps[c2]), u)
            b = N.action(back[s])
            blocks.append((c2, c, b))
            den = den * b.den // math.gcd(den, b.den)
        dtype = object if any(b.num.dtype == object for *_, b in blocks) or den > 1 else np.int64
        out = np.zeros((nc * d, nc * d), dtype=dtype)
        for c2, c, b in blocks:
            out[c2 * d : (c2 + 1) * d, c * d : (c + 1) * d] = b.num * (den // b.den)
        mats.append(Mat(N.field, out, den))
    return Module(G, N.field, nc * d, mats=mats, basis_labels=labels, check=False)


def induce_from(N: Module, S: Subgroup) -> Module:
    return induce(S.inclusion_hom(), N)


def conj_module(G: FiniteGroup, a: int, H: Subgroup, N: Module) -> Tuple[Module, InjectiveHom]:
    """Transport a module over H <= G to one over aHa^-1.

    The conjugate of h acts exactly as h did; the returned hom is the
    identification x |-> a^-1 x a from (aHa^-1)-as-a-group to H-as-a-group
    along which the transported module is the restriction.
    """
    Hgrp, Hel = H.as_group()
    if N.group is not Hgrp:
        raise ValueError("module does not live over the subgroup's group")
    K = H.conjugate_by(a)
    Kgrp, Kel = K.as_group()
    Hpos = {g: i for i, g in enumerate(Hel)}
    back = tuple(Hpos[G.mul(G.inv(a), G.mul(k, a))] for k in Kel)
    ident = InjectiveHom(Kgrp, Hgrp, back)
    return restrict(ident, N), ident


def tensor(M: Module, N: Module) -> Module:
    """M (x) N with the diagonal action; basis ordered (i, j) -> i*dim(N)+j."""
    if M.group is not N.group or M.field != N.field:
        raise ValueError("tensor factors must share group and field")
    G, d2 = M.group, N.dim
    if M.is_permutation and N.is_permutation:
        perms = M._perms[:, :, None] * d2 + N._perms[:, None, :]
        return Module(G, M.field, M.dim * d2, perms=perms.reshape(G.order, -1), check=False)
    mats = [M.action(g).kron(N.action(g)) for g in range(G.order)]
    return Module(G, M.field, M.dim * d2, mats=mats, check=False)


def direct_sum(parts: Sequence[Module]) -> Tuple[Module, List[int]]:
    """Block direct sum; returns the sum and the block offsets."""
    G, field = parts[0].group, parts[0].field
    offsets, total = [], 0
    for m in parts:
        if m.group is not G or m.field != field:
            raise ValueError("direct summands must share group and field")
        offsets.append(total)
        total += m.dim
    if all(m.is_permutation for m in parts):
        perms = np.empty((G.order, total), dtype=np.int64)
        for off, m in zip(offsets, parts):
            perms[:, off : off + m.dim] = m._perms + off
        return Module(G, field, total, perms=perms, check=False), offsets
    mats = [Mat.block_diag(field, [m.action(g) for m in parts]) for g in range(G.order)]
    return Module(G, field, total, mats=mats, check=False), offsets


# ---------------------------------------------------------------------------
# the two-sided adjunction


def _min_coset_data(G: FiniteGroup, H: Subgroup):
    """(reps, coset_of, c0, t0) with c0 the index of the coset containing the
    identity and t0 its (minimal) representative; t0 is an element of H."""
    reps, coset_of = G.left_transversal(H)
    c0 = int(coset_of[G.identity])
    t0 = reps[c0]
    assert t0 in set(H.elements)
    return reps, coset_of, c0, t0


@dataclass
class AdjunctionData:
    """The four structure maps of Ind -| Res -| Ind at a pair (M over G, N over H)."""

    group: FiniteGroup
    subgroup: Subgroup
    M: Module
    N: Module
    ind_N: Module
    res_M: Module
    res_ind_N: Module
    ind_res_M: Module
    eta_left: ModuleHom    # N -> Res Ind N
    eps_left: ModuleHom    # Ind Res M -> M
    eta_right: ModuleHom   # M -> Ind Res M
    eps_right: ModuleHom   # Res Ind N -> N

    def separable_composite(self) -> ModuleHom:
        """eps_right o eta_left : N -> N (should be the identity)."""
        return self.eps_right @ self.eta_left

    def cohomological_composite(self) -> ModuleHom:
        """eps_left o eta_right : M -> M (should be [G:H] times the identity)."""
        return self.eps_left @ self.eta_right


def _eta_left_mat(G: FiniteGroup, H: Subgroup, N: Module) -> Mat:
    reps, _, c0, t0 = _min_coset_data(G, H)
    Hgrp, Hel = H.as_group()
    h0 = Hel.index(G.inv(t0))  # t0^-1 as an element of H
    A = N.action(h0)
    nc, d = len(reps), N.dim
    dtype = object if A.num.dtype == object else np.int64
    out = np.zeros((nc * d, d), dtype=dtype)
    out[c0 * d : (c0 + 1) * d, :] = A.num
    return Mat(N.field, out, A.den)


def _eps_left_mat(G: FiniteGroup, H: Subgroup, M: Module) -> Mat:
    reps, _, _, _ = _min_coset_data(G, H)
    cols = [M.action(t) for t in reps]
    den = 1
    for b in cols:
        den = den * b.den // math.gcd(den, b.den)
    d = M.dim
    dtype = object if any(b.num.dtype == object for b in cols) or den > 1 else np.int64
    out = np.zeros((d, len(reps) * d), dtype=dtype)
    for c, b in enumerate(cols):
        out[:, c * d : (c + 1) * d] = b.num * (den // b.den)
    return Mat(M.field, out, den)


def _eta_right_mat(G: FiniteGroup, H: Subgroup, M: Module) -> Mat:
    reps, _, _, _ = _min_coset_data(G, H)
    blocks = [M.action_inv(t) for t in reps]
    den = 1
    for b in blocks:
        den = den * b.den // math.gcd(den, b.den)
    d = M.dim
    dtype = object if any(b.num.dtype == object for b in blocks) or den > 1 else np.int64
    out = np.zeros((len(reps) * d, d), dtype=dtype)
    for c, b in enumerate(blocks):
        out[c * d : (c + 1) * d, :] = b.num * (den // b.den)
    return Mat(M.field, out, den)


def _eps_right_mat(G: FiniteGroup, H: Subgroup, N: Module) -> Mat:
    reps, _, c0, t0 = _min_coset_data(G, H)
    Hgrp, Hel = H.as_group()
    A = N.action(Hel.index(t0))  # t0 as an element of H
    nc, d = len(reps), N.dim
    dtype = object if A.num.dtype == object else np.int64
    out = np.zeros((d, nc * d), dtype=dtype)
    out[:, c0 * d : (c0 + 1) * d] = A.num
    return Mat(N.field, out, A.den)


def unit_counit(G: FiniteGroup, H: Subgroup, M: Module, N: Module) -> AdjunctionData:
    """Units and counits of the two adjunctions at (M over G, N over H).

    All four triangle identities are verified exactly; failure is a hard
    error.  The composite identities (separability, multiplication by the
    index) are exposed on the returned object but not asserted here.
    """
    Hgrp, _ = H.as_group()
    if M.group is not G or N.group is not Hgrp:
        raise ValueError("modules live over the wrong groups")
    incl = H.inclusion_hom()
    ind_N = induce(incl, N)
    res_M = restrict(incl, M)
    res_ind_N = restrict(incl, ind_N)
    ind_res_M = induce(incl, res_M)
    eta_left = ModuleHom(N, res_ind_N, _eta_left_mat(G, H, N))
    eps_left = ModuleHom(ind_res_M, M, _eps_left_mat(G, H, M))
    eta_right = ModuleHom(M, ind_res_M, _eta_right_mat(G, H, M))
    eps_right = ModuleHom(res_ind_N, N, _eps_right_mat(G, H, N))

    nc = ind_N.dim // N.dim
    # triangle 1: eps_left(Ind N) o Ind(eta_left) = id on Ind N
    ind_eta = Mat.identity(N.field, nc).kron(eta_left.mat)
    t1 = _eps_left_mat(G, H, ind_N) @ ind_eta
    # triangle 2: Res(eps_left M) o eta_left(Res M) = id on Res M
    t2 = eps_left.mat @ _eta_left_mat(G, H, res_M)
    # triangle 3: eps_right(Res M) o Res(eta_right) = id on Res M
    t3 = _eps_right_mat(G, H, res_M) @ eta_right.mat
    # triangle 4: Ind(eps_right) o eta_right(Ind N) = id on Ind N
    ind_eps = Mat.identity(N.field, nc).kron(eps_right.mat)
    t4 = ind_eps @ _eta_right_mat(G, H, ind_N)
    for name, t in [("left-1", t1), ("left-2", t2), ("right-1", t3), ("right-2", t4)]:
        if not t.is_identity():
            raise ArithmeticError(f"triangle identity {name} fails for H of order {H.order}")
    return AdjunctionData(G, H, M, N, ind_N, res_M, res_ind_N, ind_res_M,
                          eta_left, eps_left, eta_right, eps_right)


# ---------------------------------------------------------------------------
# double-coset comparison


@dataclass
class MackeyComponent:
    coset_rep: int
    left_subgroup_order: int  # |K n xHx^-1|
    module: Module


@dataclass
class MackeyIsoData:
    left: Module
    right: Module
    forward: ModuleHom
    backward: ModuleHom
    components: List[MackeyComponent]


def mackey_iso(G: FiniteGroup, K: Subgroup, H: Subgroup, N: Module) -> MackeyIsoData:
    """The double-coset decomposition of Res_K Ind_H N.

    Builds sum_x Ind^K_{K n xHx^-1} conj_x Res^H_{H n x^-1Kx} N together
    with the exchange map (t (x) n |-> tx (x) n on the x-summand) and its
    inverse, checks both composites are identities and that the dimensions
    match sum_x [K : K n xHx^-1] * dim N = [G:H] * dim N.
    """
    Hgrp, Hel = H.as_group()
    Kgrp, Kel = K.as_group()
    if N.group is not Hgrp:
        raise ValueError("N must live over H")
    dc = G.double_cosets(K, H)
    Hset, Kset = set(H.elements), set(K.elements)
    Hpos = {g: i for i, g in enumerate(Hel)}
    Kpos = {g: i for i, g in enumerate(Kel)}
    d = N.dim

    comps: List[MackeyComponent] = []
    parts: List[Module] = []
    col_meta: List[Tuple[int, List[int]]] = []  # per part: (x, transversal G-elements)
    for x in dc.representatives:
        xinv = G.inv(x)
        # H n x^-1 K x inside H-the-group
        s1 = [i for i, h in enumerate(Hel) if G.conj(x, h) in Kset]
        S1 = Hgrp.subgroup(s1)
        N1 = restrict(S1.inclusion_hom(), N)
        # transport to K n xHx^-1 inside K-the-group
        s2_parent = [G.conj(x, Hel[i]) for i in s1]
        S2 = Kgrp.subgroup(Kpos[g] for g in s2_parent)
        S1grp, S1el = S1.as_group()
        S2grp, S2el = S2.as_group()
        s1pos = {h: i for i, h in enumerate(S1el)}
        ident = InjectiveHom(
            S2grp, S1grp,
            tuple(s1pos[Hpos[G.mul(xinv, G.mul(Kel[k], x))]] for k in S2el))
        N2 = restrict(ident, N1)
        part = induce(S2.inclusion_hom(), N2)
        u_reps, _ = Kgrp.left_transversal(S2)
        comps.append(MackeyComponent(x, S2.order, part))
        parts.append(part)
        col_meta.append((x, [Kel[u] for u in u_reps]))

    left, offsets = direct_sum(parts)
    incl = H.inclusion_hom()
    right = restrict(K.inclusion_hom(), induce(incl, N))
    w_reps, w_coset_of = G.left_transversal(H)

    # forward: on the x-summand, (t, j) |-> t*x (x) e_j = w (x) A(h) e_j
    blocks: List[Tuple[int, int, Mat]] = []
    for part_idx, (x, ts) in enumerate(col_meta):
        base = offsets[part_idx]
        for c, t in enumerate(ts):
            tx = G.mul(t, x)
            w = int(w_coset_of[tx])
            h = Hpos[G.mul(G.inv(w_reps[w]), tx)]
            blocks.append((w * d, base + c * d, N.action(h)))
    fwd = _assemble(N.field, right.dim, left.dim, blocks)

    # backward: w (x) e_j |-> sum over (x, t): [x^-1 t^-1 w in H] (t (x) A(z) e_j)
    blocks = []
    for part_idx, (x, ts) in enumerate(col_meta):
        base = offsets[part_idx]
        xinv = G.inv(x)
        for c, t in enumerate(ts):
            tinv = G.inv(t)
            for w_idx, w in enumerate(w_reps):
                z = G.mul(xinv, G.mul(tinv, w))
                if z in Hset:
                    blocks.append((base + c * d, w_idx * d, N.action(Hpos[z])))
    bwd = _assemble(N.field, left.dim, right.dim, blocks)

    forward = ModuleHom(left, right, fwd)
    backward = ModuleHom(right, left, bwd)
    if not (fwd @ bwd).is_identity() or not (bwd @ fwd).is_identity():
        raise ArithmeticError("double-coset comparison maps are not mutually inverse")
    expected = sum(Kgrp.order // c.left_subgroup_order for c in comps) * d
    if left.dim != expected or right.dim != (G.order // H.order) * d:
        raise ArithmeticError("double-coset dimension bookkeeping is off")
    return MackeyIsoData(left, right, forward, backward, comps)


def _assemble(field: Field, nrows: int, ncols: int,
              blocks: List[Tuple[int, int, Mat]]) -> Mat:
    den = 1
    for *_, b in blocks:
        den = den * b.den // math.gcd(den, b.den)
    dtype = object if (den > 1 or any(b.num.dtype == object for *_, b in blocks)) else np.int64
    out = np.zeros((nrows, ncols), dtype=dtype)
    for r0, c0, b in blocks:
        br, bc = b.shape
        out[r0 : r0 + br, c0 : c0 + bc] += b.num * (den // b.den)
    return Mat(field, out, den)


# ---------------------------------------------------------------------------
# projection maps


@dataclass
class ProjectionData:
    pi: ModuleHom          # Ind(Res X (x) Y) -> X (x) Ind Y
    pi_inverse: ModuleHom
    mirror: ModuleHom      # Ind(Y (x) Res X) -> Ind Y (x) X
    mirror_inverse: ModuleHom


def projection_map(G: FiniteGroup, H: Subgroup, X: Module, Y: Module) -> ProjectionData:
    """The exchange isomorphisms t (x) (m (x) n) |-> t m (x) (t (x) n) and its
    mirror, with explicit inverses; all four maps are verified equivariant and
    the composites checked to be identities."""
    Hgrp, _ = H.as_group()
    if X.group is not G or Y.group is not Hgrp:
        raise ValueError("X must live over G and Y over H")
    incl = H.inclusion_hom()
    res_X = restrict(incl, X)
    ind_Y = induce(incl, Y)
    src = induce(incl, tensor(res_X, Y))
    tgt = tensor(X, ind_Y)
    reps, _ = G.left_transversal(H)
    nc, dx, dy = len(reps), X.dim, Y.dim

    blocks = []
    inv_blocks = []
    for c, t in enumerate(reps):
        A = X.action(t)
        Ainv = X.action_inv(t)
        for i in range(dx):
            # source index (c, i, j); target rows (i2, c, j)
            col = c * dx * dy + i * dy
            for i2 in range(dx):
                v = A.num[i2, i]
                if v:
                    blocks.append((i2 * nc * dy + c * dy, col,
                                   Mat(X.field, np.eye(dy, dtype=np.int64)).scale(
                                       Fraction(int(v), A.den))))
                w = Ainv.num[i2, i]
                if w:
                    inv_blocks.append((c * dx * dy + i2 * dy, i * nc * dy + c * dy,
                                       Mat(X.field, np.eye(dy, dtype=np.int64)).scale(
                                           Fraction(int(w), Ainv.den))))
    pi = ModuleHom(src, tgt, _assemble(X.field, tgt.dim, src.dim, blocks))
    pi_inv = ModuleHom(tgt, src, _assemble(X.field, src.dim, tgt.dim, inv_blocks))
    if not (pi.mat @ pi_inv.mat).is_identity() or not (pi_inv.mat @ pi.mat).is_identity():
        raise ArithmeticError("projection map is not invertible")

    src_m = induce(incl, tensor(Y, res_X))
    tgt_m = tensor(ind_Y, X)
    blocks = []
    inv_blocks = []
    for c, t in enumerate(reps):
        A = X.action(t)
        Ainv = X.action_inv(t)
        # source index (c, j, i) -> target (c, j, i2) scaled by A[i2, i]
        for j in range(dy):
            row0 = (c * dy + j) * dx
            col0 = c * dy * dx + j * dx
            blocks.append((row0, col0, A))
            inv_blocks.append((col0, row0, Ainv))
    mirror = ModuleHom(src_m, tgt_m, _assemble(X.field, tgt_m.dim, src_m.dim, blocks))
    mirror_inv = ModuleHom(tgt_m, src_m, _assemble(X.field, src_m.dim, tgt_m.dim, inv_blocks))
    if not (mirror.mat @ mirror_inv.mat).is_identity() or not (mirror_inv.mat @ mirror.mat).is_identity():
        raise ArithmeticError("mirror projection map is not invertible")
    return ProjectionData(pi, pi_inv, mirror, mirror_inv)


# ---------------------------------------------------------------------------
# Frobenius structure on k[G/H]


@dataclass
class FrobeniusLaw:
    name: str
    holds: bool


@dataclass
class FrobeniusObject:
    """k[G/H] with pointwise multiplication, diagonal comultiplication, the
    all-ones unit and the sum-of-coefficients counit."""

    module: Module
    mul: ModuleHom       # A (x) A -> A
    comul: ModuleHom     # A -> A (x) A
    unit: ModuleHom      # k -> A
    counit: ModuleHom    # A -> k

    def verify(self) -> List[FrobeniusLaw]:
        A = self.module
        k = self.unit.source
        d = A.dim
        f = A.field
        I = Mat.identity(f, d)
        mu, de, io, ep = self.mul.mat, self.comul.mat, self.unit.mat, self.counit.mat
        swap = _swap_mat(f, d, d)
        laws = [
            FrobeniusLaw("associativity", mu @ mu.kron(I) == mu @ I.kron(mu)),
            FrobeniusLaw("coassociativity", de.kron(I) @ de == I.kron(de) @ de),
            FrobeniusLaw("unit", (mu @ io.kron(I) == I) and (mu @ I.kron(io) == I)),
            FrobeniusLaw("counit", (ep.kron(I) @ de == I) and (I.kron(ep) @ de == I)),
            FrobeniusLaw("frobenius",
                         (mu.kron(I) @ I.kron(de) == de @ mu)
                         and (I.kron(mu) @ de.kron(I) == de @ mu)),
            FrobeniusLaw("specialness", mu @ de == I),
            FrobeniusLaw("commutativity", (mu @ swap == mu) and (swap @ de == de)),
        ]
        return laws

    @property
    def ok(self) -> bool:
        return all(l.holds for l in self.verify())


def _swap_mat(field: Field, a: int, b: int) -> Mat:
    perm = [(i % b) * a + (i // b) for i in range(a * b)]
    return perm_to_mat(field, perm)


def frobenius_object(G: FiniteGroup, H: Subgroup, field: Field) -> FrobeniusObject:
    A = permutation_module(G, H, field)
    d = A.dim
    mu = np.zeros((d, d * d), dtype=np.int64)
    de = np.zeros((d * d, d), dtype=np.int64)
    for i in range(d):
        mu[i, i * d + i] = 1
        de[i * d + i, i] = 1
    unit = np.ones((d, 1), dtype=np.int64)
    counit = np.ones((1, d), dtype=np.int64)
    AA = tensor(A, A)
    k = trivial_module(G, field)
    return FrobeniusObject(
        A,
        ModuleHom(AA, A, Mat(field, mu)),
        ModuleHom(A, AA, Mat(field, de)),
        ModuleHom(k, A, Mat(field, unit)),
        ModuleHom(A, k, Mat(field, counit)),
    )


# ---------------------------------------------------------------------------
# hom spaces, isomorphism, decomposition


def hom_space(M: Module, N: Module) -> List[ModuleHom]:
    """A basis of Hom_kG(M, N), in reduced echelon form (deterministic)."""
    if M.group is not N.group or M.field != N.field:
        raise ValueError("hom space needs a common group and field")
    f = M.field
    rows = []
    for s in M.group.generators():
        A, B = M.action(s), N.action(s)
        lhs = Mat.identity(f, M.dim).kron(B)
        rhs = A.T.kron(Mat.identity(f, N.dim))
        rows.append(lhs - rhs)
    if not rows:  # trivial group
        rows = [Mat.zeros(f, 1, M.dim * N.dim)]
    system = rows[0]
    for r in rows[1:]:
        system = system.vstack(r)
    basis = system.nullspace()
    if basis.ncols == 0:
        return []
    reduced, _ = basis.T.rref()
    out = []
    for r in range(reduced.nrows):
        v = Mat(f, reduced.num[r : r + 1, :].T.copy(), reduced.den)
        out.append(ModuleHom(M, N, Mat.unvec(f, v, N.dim, M.dim)))
    return out


def _class_traces(M: Module) -> List:
    return [M.action(c[0]).trace() for c in M.group.conjugacy_classes()]


def module_isomorphism(M: Module, N: Module, seed: int = 0,
                       tries: int = 60) -> Optional[ModuleHom]:
    """Search for an isomorphism M -> N.

    Over F_p the span of Hom(M, N) is searched exhaustively when it has at
    most EXHAUSTIVE_END_CAP elements (a definitive verdict); otherwise, and
    always over Q, basis elements and seeded random combinations are tried.
    """
    if M.dim != N.dim or M.field != N.field or M.group is not N.group:
        return None
    if _class_traces(M) != _class_traces(N):
        return None
    basis = hom_space(M, N)
    if not basis:
        return None
    for h in basis:
        if h.mat.is_invertible():
            return h
    p, e = M.field.p, len(basis)
    if p is not None and p**e <= EXHAUSTIVE_END_CAP:
        for coeffs in itertools.product(range(p), repeat=e):
            mat = _combine(basis, coeffs)
            if mat is not None and mat.is_invertible():
                return ModuleHom(M, N, mat, check=False)
        return None
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        if p is not None:
            coeffs = [int(c) for c in rng.integers(0, p, size=e)]
        else:
            coeffs = [int(c) for c in rng.integers(-5, 6, size=e)]
        mat = _combine(basis, coeffs)
        if mat is not None and mat.is_invertible():
            return ModuleHom(M, N, mat, check=False)
    return None


def _combine(basis: List[ModuleHom], coeffs) -> Optional[Mat]:
    out = None
    for c, h in zip(coeffs, basis):
        if c:
            term = h.mat.scale(int(c))
            out = term if out is None else out + term
    return out


@dataclass
class DecompositionResult:
    module: Module
    summands: List[Module]
    transform: Mat  # P with P^-1 A(g) P block-diagonal in summand order
    iso_classes: List[Tuple[int, List[int]]]  # (representative index, member indices)
    certified: bool  # every leaf's endomorphism ring certified local exhaustively

    def multiplicities(self) -> List[Tuple[Module, int]]:
        return [(self.summands[rep], len(members)) for rep, members in self.iso_classes]


def decompose(M: Module, seed: int = 0) -> DecompositionResult:
    """Split M into indecomposable summands with a change-of-basis certificate.

    Splitting elements are drawn from End(M): basis elements, pairwise
    products, then seeded random combinations; a non-scalar z with
    0 < rank(z^dim) < dim yields a Fitting splitting ker(z^dim) + im(z^dim).
    A leaf is accepted when End is one-dimensional or, when |End| is at most
    EXHAUSTIVE_END_CAP, after an exhaustive search finds no splitting
    element (a complete locality test); otherwise the sampled candidates
    must all be nilpotent-or-invertible and the leaf is marked uncertified.
    """
    if M.field.p is None:
        raise ValueError("decompose requires a prime field")
    if M.dim > MAX_DECOMPOSE_DIM:
        raise ValueError(f"dimension {M.dim} exceeds the decomposition cap {MAX_DECOMPOSE_DIM}")
    if M.dim == 0:
        raise ValueError("cannot decompose the zero module")
    certified = True

    def split(X: Module, depth: int) -> Tuple[List[Module], Mat]:
        nonlocal certified
        if depth > M.dim:
            raise DecompositionError("decomposition failed: recursion budget exceeded")
        z = _find_splitter(X, seed)
        if isinstance(z, bool):  # leaf; value = certified exhaustively?
            certified = certified and z
            return [X], Mat.identity(X.field, X.dim)
        zn = z.pow(X.dim)
        ker = zn.nullspace()
        im_basis, piv = zn.T.rref()
        img = Mat(X.field, im_basis.num[: len(piv), :].T.copy(), im_basis.den)
        P = ker.hstack(img)
        if ker.ncols == 0 or img.ncols == 0 or not P.is_invertible():
            raise DecompositionError("Fitting splitting degenerated")
        Pinv = P.inv()
        a = ker.ncols
        sub1, sub2 = [], []
        for g in range(X.group.order):
            C = Pinv @ X.action(g) @ P
            if np.any(C.num[:a, a:] != 0) or np.any(C.num[a:, :a] != 0):
                raise DecompositionError("Fitting subspaces are not invariant")
            sub1.append(Mat(X.field, C.num[:a, :a].copy(), C.den))
            sub2.append(Mat(X.field, C.num[a:, a:].copy(), C.den))
        X1 = Module(X.group, X.field, a, mats=sub1, check=False)
        X2 = Module(X.group, X.field, X.dim - a, mats=sub2, check=False)
        l1, Q1 = split(X1, depth + 1)
        l2, Q2 = split(X2, depth + 1)
        return l1 + l2, P @ Mat.block_diag(X.field, [Q1, Q2])

    leaves, P = split(M, 0)
    # certificate: P^-1 A(g) P is block diagonal with the leaf actions
    Pinv = P.inv()
    for s in list(M.group.generators()) + [M.group.identity]:
        C = Pinv @ M.action(s) @ P
        off = 0
        for leaf in leaves:
            nxt = off + leaf.dim
            if Mat(M.field, C.num[off:nxt, off:nxt].copy(), C.den) != leaf.action(s):
                raise DecompositionError("certificate verification failed")
            if np.any(C.num[off:nxt, nxt:] != 0) or np.any(C.num[nxt:, off:nxt] != 0):
                raise DecompositionError("certificate has off-diagonal leakage")
            off = nxt
    iso_classes: List[Tuple[int, List[int]]] = []
    for idx, leaf in enumerate(leaves):
        for rep, members in iso_classes:
            if leaf.dim == leaves[rep].dim and module_isomorphism(leaves[rep], leaf, seed=seed):
                members.append(idx)
                break
        else:
            iso_classes.append((idx, [idx]))
    return DecompositionResult(M, leaves, P, [(r, m) for r, m in iso_classes], certified)


def _find_splitter(X: Module, seed: int):
    """A splitting endomorphism of X, or True/False for a (certified?) leaf."""
    if X.dim == 1:
        return True
    E = hom_space(X, X)
    e = len(E)
    if e == 1:
        return True
    p = X.field.p
    candidates: List[Mat] = [h.mat for h in E]
    for i in range(min(e, 8)):
        for j in range(min(e, 8)):
            candidates.append(E[i].mat @ E[j].mat)
    rng = np.random.default_rng(seed)
    for _ in range(40 + 10 * e):
        coeffs = rng.integers(0, p, size=e)
        m = _combine(E, [int(c) for c in coeffs])
        if m is not None:
            candidates.append(m)
    for z in candidates:
        if _is_scalar(z):
            continue
        r = z.pow(X.dim).rank()
        if 0 < r < X.dim:
            return z
    if p**e <= EXHAUSTIVE_END_CAP:
        for coeffs in itertools.product(range(p), repeat=e):
            m = _combine(E, coeffs)
            if m is None or _is_scalar(m):
                continue
            r = m.pow(X.dim).rank()
            if 0 < r < X.dim:
                return m
        return True  # certified: no idempotent other than 0 and 1 exists
    for z in candidates:  # sampled nilpotent-or-invertible certification
        r = z.pow(X.dim).rank()
        if r not in (0, X.dim):
            return z
    return False


def _is_scalar(m: Mat) -> bool:
    d = m.nrows
    lam = m.num[0, 0]
    return bool(np.array_equal(m.num.astype(object),
                               (np.eye(d, dtype=object) * lam)))


@dataclass
class SummandWitness:
    injection: ModuleHom
    retraction: ModuleHom


def is_summand(M: Module, X: Module, seed: int = 0) -> Optional[SummandWitness]:
    """A split injection/retraction pair exhibiting M as a direct summand of X,
    or None.  Both modules are decomposed and the factors matched up to
    isomorphism (multiplicities respected)."""
    if M.field.p is None:
        raise ValueError("is_summand requires a prime field (decompose does)")
    DM = decompose(M, seed=seed)
    DX = decompose(X, seed=seed)
    used: List[int] = []
    pairing: List[Tuple[int, int, ModuleHom]] = []
    for mi, mleaf in enumerate(DM.summands):
        found = None
        for xi, xleaf in enumerate(DX.summands):
            if xi in used or xleaf.dim != mleaf.dim:
                continue
            iso = module_isomorphism(mleaf, xleaf, seed=seed)
            if iso is not None:
                found = (xi, iso)
                break
        if found is None:
            return None
        used.append(found[0])
        pairing.append((mi, found[0], found[1]))
    f = M.field
    offM = np.cumsum([0] + [s.dim for s in DM.summands])
    offX = np.cumsum([0] + [s.dim for s in DX.summands])
    emb = np.zeros((X.dim, M.dim), dtype=np.int64)
    J = Mat.zeros(f, X.dim, M.dim)
    R = Mat.zeros(f, M.dim, X.dim)
    for mi, xi, iso in pairing:
        blocks_j = [(int(offX[xi]), int(offM[mi]), iso.mat)]
        J = J + _assemble(f, X.dim, M.dim, blocks_j)
        blocks_r = [(int(offM[mi]), int(offX[xi]), iso.mat.inv())]
        R = R + _assemble(f, M.dim, X.dim, blocks_r)
    inj = ModuleHom(M, X, DX.transform @ J @ DM.transform.inv())
    ret = ModuleHom(X, M, DM.transform @ R @ DX.transform.inv())
    if not (ret.mat @ inj.mat).is_identity():
        raise DecompositionError("summand witness failed its retraction check")
    return SummandWitness(inj, ret)


# ---------------------------------------------------------------------------
# vertices and the Green correspondence


def _relative_trace_span(M: Module, S: Subgroup) -> List[Mat]:
    """Images Tr^G_S(phi) = sum_t A(t) phi A(t)^-1 over a basis of End_kS(Res M)."""
    G = M.group
    resM = restrict_to(M, S)
    basis = hom_space(resM, resM)
    reps, _ = G.left_transversal(S)
    out = []
    for h in basis:
        acc = None
        for t in reps:
            term = M.action(t) @ h.mat @ M.action_inv(t)
            acc = term if acc is None else acc + term
        out.append(acc)
    return out

def relatively_projective(M: Module, S: Subgroup) -> bool:
    """Higman's criterion: M is relatively S-projective iff the identity lies
    in the image of the relative trace from End_kS(Res_S M)."""
    traces = _relative_trace_span(M, S)
    if not traces:
        return False
    f = M.field
    stacked = traces[0].vec()
    for t in traces[1:]:
        stacked = stacked.hstack(t.vec())
    target = Mat.identity(f, M.dim).vec()
    return stacked.solve(target) is not None


def _is_subconjugate(G: FiniteGroup, A: Subgroup, B: Subgroup) -> bool:
    """Some conjugate of A is contained in B."""
    if A.order > B.order:
        return False
    bset = frozenset(B.elements)
    return any(G.conjugate_subgroup(g, A.elements) <= bset for g in range(G.order))


@dataclass
class VertexResult:
    vertex: Subgroup
    relatively_projective_classes: List[Subgroup]
    checked_classes: List[Subgroup]


def vertex(M: Module, require_indecomposable: bool = True) -> VertexResult:
    """The vertex of an indecomposable module over F_p.

    Scans all conjugacy classes of p-subgroups for relative projectivity
    (Higman's criterion) and returns the unique minimal class; a hard error
    is raised if the minimal relatively projective classes are not a single
    conjugacy class, or if M turns out to be decomposable.
    """
    p = M.field.p
    if p is None:
        raise ValueError("vertices are defined over prime fields here")
    if require_indecomposable:
        s = _find_splitter(M, seed=0)
        if not isinstance(s, bool):
            raise ValueError("vertex requires an indecomposable module")
    G = M.group
    pclasses = [S for S in G.subgroups_up_to_conjugacy()
                if S.order == 1 or _is_prime_power(S.order, p)]
    proj = [S for S in pclasses if relatively_projective(M, S)]
    if not proj:
        raise ArithmeticError("no relatively projective p-class found (broken invariant)")
    minimal = [S for S in proj
               if not any(T is not S and _is_subconjugate(G, T, S) for T in proj)]
    if len(minimal) != 1:
        raise ArithmeticError(
            f"vertex is not unique up to conjugacy: {len(minimal)} minimal classes")
    return VertexResult(minimal[0], proj, pclasses)


def _is_prime_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass
class GreenCorrespondence:
    correspondent: Module
    induced: Module
    decomposition: DecompositionResult
    correspondent_indices: List[int]
    other_vertices: List[Tuple[int, Subgroup]]
    round_trip: SummandWitness


def green_correspondent(G: FiniteGroup, H: Subgroup, D: Subgroup, n: Module,
                        seed: int = 0) -> GreenCorrespondence:
    """The Green correspondent of an indecomposable H-module n with vertex D.

    Requires N_G(D) <= H <= G.  Ind_H^G n is decomposed; exactly one
    isomorphism class of summands with vertex conjugate to D (and it has
    multiplicity one) is the correspondent.  Every other summand's vertex is
    checked to be subconjugate to some D n gDg^-1 with g outside H, and the
    round trip (n is a summand of Res_H of the correspondent) is certified
    with an explicit witness.
    """
    Hgrp, Hel = H.as_group()
    if n.group is not Hgrp:
        raise ValueError("n must live over H")
    Dset = set(D.elements)
    if not Dset <= set(H.elements):
        raise ValueError("D must be contained in H")
    NG = G.normalizer(D)
    if not set(NG.elements) <= set(H.elements):
        raise ValueError("the normalizer of D must be contained in H")
    Hpos = {g: i for i, g in enumerate(Hel)}
    D_in_H = Hgrp.subgroup(Hpos[x] for x in D.elements)
    vx = vertex(n)
    if not vx.vertex.is_conjugate_to(D_in_H):
        raise ValueError("the vertex of n is not conjugate to D in H")

    X = induce(H.inclusion_hom(), n)
    DX = decompose(X, seed=seed)
    Hset = set(H.elements)
    relevant = {frozenset(Dset & G.conjugate_subgroup(g, D.elements))
                for g in range(G.order) if g not in Hset}
    relevant_subs = [G.subgroup(s) for s in relevant]

    matches: List[int] = []
    others: List[Tuple[int, Subgroup]] = []
    for rep, members in DX.iso_classes:
        v = vertex(DX.summands[rep]).vertex
        if v.is_conjugate_to(D):
            matches.extend(members)
        else:
            for m in members:
                others.append((m, v))
            if not any(_is_subconjugate(G, v, s) for s in relevant_subs):
                raise ArithmeticError(
                    "a non-correspondent summand has vertex outside the expected family")
    if len(matches) != 1:
        raise ArithmeticError(
            f"expected exactly one vertex-D summand, found {len(matches)}")
    corr = DX.summands[matches[0]]
    res_corr = restrict(H.inclusion_hom(), corr)
    witness = is_summand(n, res_corr, seed=seed)
    if witness is None:
        raise ArithmeticError("round trip failed: n is not a summand of Res of its correspondent")
    return GreenCorrespondence(corr, X, DX, matches, others, witness)


# ---------------------------------------------------------------------------
# block membership


def block_of(M: Module, idempotents: Sequence[Tuple[np.ndarray, int]]) -> int:
    """Index of the block acting as the identity on M.

    `idempotents` lists (group-algebra coefficient vector, block dimension)
    pairs; exactly one central idempotent must act as the identity and all
    others as zero, anything else is a hard error.
    """
    G = M.group
    p = M.field.p
    hit = []
    for bi, (vec, _dim) in enumerate(idempotents):
        acc = Mat.zeros(M.field, M.dim, M.dim)
        for g in range(G.order):
            c = int(vec[g]) % p if p is not None else int(vec[g])
            if c:
                acc = acc + M.action(g).scale(c)
        if acc.is_identity():
            hit.append(bi)
        elif not acc.is_zero():
            raise ArithmeticError(f"block idempotent {bi} acts neither as 0 nor as 1")
    if len(hit) != 1:
        raise ArithmeticError(f"module does not lie in a single block: hits {hit}")
    return hit[0]
