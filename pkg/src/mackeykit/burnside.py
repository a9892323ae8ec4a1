"""Burnside rings, crossed Burnside rings, and block decompositions.

Everything here is exact.  Idempotent computations over F_p use the
Frobenius map (which is F_p-linear on a commutative algebra): the
nilradical is the kernel of a Frobenius power, and the dimension of the
Frobenius-fixed subspace of A/Nil equals the number of primitive
idempotents, which certifies leaves without any enumeration.  Over Q the
nilradical is the radical of the trace form and splitting uses rational
roots of minimal polynomials; pieces that would need genuine factoring
over Q raise NotSplitOverRationals instead of guessing.
"""

from __future__ import annotations

import itertools
import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .groups import FiniteGroup, Subgroup
from .linalg import Field, GF, Mat, QQ

__all__ = [
    "GSet",
    "gset_from_subgroup",
    "gset_induce",
    "gset_restrict",
    "table_of_marks",
    "burnside_vector",
    "burnside_multiply",
    "CrossedBurnsideAlgebra",
    "CenterOfGroupAlgebra",
    "CommutativeAlgebra",
    "primitive_idempotents",
    "NotSplitOverRationals",
    "Block",
    "block_decomposition",
]

ASSOCIATIVITY_DIM_CAP = 60


class NotSplitOverRationals(ArithmeticError):
    """The idempotent search over Q hit a piece it cannot certify or split
    with rational-root methods alone."""


# ---------------------------------------------------------------------------
# G-sets and the Burnside ring


class GSet:
    """A finite left G-set given by its action table (|G| x points)."""

    def __init__(self, group: FiniteGroup, action: np.ndarray, check: bool = True):
        self.group = group
        self.action = np.asarray(action, dtype=np.int64)
        if self.action.ndim != 2 or self.action.shape[0] != group.order:
            raise ValueError("action table must be |G| x points")
        if check:
            n = group.order
            pts = self.action.shape[1]
            if not np.array_equal(self.action[group.identity], np.arange(pts)):
                raise ValueError("identity must act trivially")
            A = self.action
            for g in range(n):
                if not np.array_equal(A[g][A], A[group.table[g]]):
                    raise ValueError("action is not a homomorphism")

    @property
    def size(self) -> int:
        return self.action.shape[1]

    def orbits(self) -> List[Tuple[int, ...]]:
        seen = np.zeros(self.size, dtype=bool)
        out = []
        for x in range(self.size):
            if not seen[x]:
                orb = np.unique(self.action[:, x])
                seen[orb] = True
                out.append(tuple(int(y) for y in orb))
        return out

    def stabilizer(self, x: int) -> Subgroup:
        els = np.nonzero(self.action[:, x] == x)[0]
        return self.group.subgroup(int(g) for g in els)

    def fixed_points(self, S: Subgroup) -> int:
        rows = self.action[list(S.elements)]
        return int(np.sum(np.all(rows == np.arange(self.size), axis=0)))

    def disjoint_union(self, other: "GSet") -> "GSet":
        if other.group is not self.group:
            raise ValueError("union needs a common group")
        return GSet(self.group,
                    np.hstack([self.action, other.action + self.size]), check=False)

    def product(self, other: "GSet") -> "GSet":
        """Cartesian product with the diagonal action; point (x, y) has
        index x * other.size + y."""
        if other.group is not self.group:
            raise ValueError("product needs a common group")
        act = self.action[:, :, None] * other.size + other.action[:, None, :]
        return GSet(self.group, act.reshape(self.group.order, -1), check=False)


def gset_from_subgroup(G: FiniteGroup, H: Subgroup) -> GSet:
    reps, coset_of = G.left_transversal(H)
    return GSet(G, coset_of[G.table[:, reps]], check=False)


def gset_restrict(S: Subgroup, X: GSet) -> GSet:
    """Restriction of a G-set to a subgroup, as a set over S-as-a-group."""
    if X.group is not S.parent:
        raise ValueError("G-set does not live over the subgroup's parent")
    Sgrp, Sel = S.as_group()
    return GSet(Sgrp, X.action[list(Sel)], check=False)


def gset_induce(G: FiniteGroup, H: Subgroup, X: GSet) -> GSet:
    """G x_H X: points (coset c, x) indexed c * |X| + x, with
    g.(t, x) = (t', h.x) where g t = t' h."""
    Hgrp, Hel = H.as_group()
    if X.group is not Hgrp:
        raise ValueError("G-set does not live over H")
    reps, coset_of = G.left_transversal(H)
    pos = {g: i for i, g in enumerate(Hel)}
    nc, m = len(reps), X.size
    act = np.empty((G.order, nc * m), dtype=np.int64)
    for g in range(G.order):
        for c in range(nc):
            u = G.mul(g, reps[c])
            c2 = int(coset_of[u])
            h = pos[G.mul(G.inv(reps[c2]), u)]
            act[g, c * m : (c + 1) * m] = c2 * m + X.action[h]
    return GSet(G, act, check=False)


_marks_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def table_of_marks(G: FiniteGroup) -> np.ndarray:
    """m[i, j] = #fixed points of H_j on G/H_i, over the conjugacy classes of
    subgroups in canonical order.  Lower triangular with positive diagonal."""
    cached = _marks_cache.get(G)
    if cached is not None:
        return cached
    subs = G.subgroups_up_to_conjugacy()
    r = len(subs)
    m = np.zeros((r, r), dtype=np.int64)
    for i, Hi in enumerate(subs):
        X = gset_from_subgroup(G, Hi)
        for j, Hj in enumerate(subs):
            m[i, j] = X.fixed_points(Hj)
    for i in range(r):
        if m[i, i] <= 0 or np.any(m[i, i + 1 :] != 0):
            raise ArithmeticError("table of marks is not lower triangular")
    _marks_cache[G] = m
    return m


def burnside_vector(X: GSet) -> np.ndarray:
    """The class of X in the Burnside ring: multiplicity of [G/H_i] per
    conjugacy class of subgroups (orbit stabilizers, identified up to
    conjugacy)."""
    G = X.group
    subs = G.subgroups_up_to_conjugacy()
    out = np.zeros(len(subs), dtype=np.int64)
    for orb in X.orbits():
        st = X.stabilizer(orb[0])
        for i, S in enumerate(subs):
            if st.order == S.order and st.is_conjugate_to(S):
                out[i] += 1
                break
        else:
            raise ArithmeticError("stabilizer matched no subgroup class")
    return out


_burnside_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _burnside_structure(G: FiniteGroup) -> List[List[np.ndarray]]:
    cached = _burnside_cache.get(G)
    if cached is not None:
        return cached
    subs = G.subgroups_up_to_conjugacy()
    r = len(subs)
    marks = table_of_marks(G)
    rows: List[List[np.ndarray]] = []
    for i in range(r):
        row = []
        for j in range(r):
            vec = np.zeros(r, dtype=np.int64)
            dc = G.double_cosets(subs[i], subs[j])
            for g in dc.representatives:
                inter = frozenset(subs[i].elements) & G.conjugate_subgroup(g, subs[j].elements)
                S = G.subgroup(inter)
                for k, T in enumerate(subs):
                    if S.order == T.order and S.is_conjugate_to(T):
                        vec[k] += 1
                        break
                else:
                    raise ArithmeticError("intersection matched no subgroup class")
            # cross-check through the mark homomorphism (injective)
            if not np.array_equal(vec @ marks, marks[i] * marks[j]):
                raise ArithmeticError("double-coset product disagrees with marks")
            row.append(vec)
        rows.append(row)
    _burnside_cache[G] = rows
    return rows


def burnside_multiply(G: FiniteGroup, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    """Product in the Burnside ring, on multiplicity vectors over the
    subgroup classes.  Computed from the double-coset formula
    [G/K][G/H] = sum over KgH of [G/(K n gHg^-1)] and verified against the
    pointwise product of marks."""
    rows = _burnside_structure(G)
    r = len(rows)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros(r, dtype=np.int64)
    for i in range(r):
        if not a[i]:
            continue
        for j in range(r):
            if b[j]:
                out += a[i] * b[j] * rows[i][j]
    return out


# ---------------------------------------------------------------------------
# commutative algebras and primitive idempotents


class CommutativeAlgebra:
    """A commutative associative unital algebra given by left-multiplication
    matrices of a basis.  Associativity, commutativity and the unit law are
    verified at construction for dimensions up to ASSOCIATIVITY_DIM_CAP."""

    def __init__(self, field: Field, left_mult: List[Mat], unit: Mat, check: bool = True):
        self.field = field
        self.left_mult = left_mult
        self.unit = unit
        self.dim = len(left_mult)
        for L in left_mult:
            if L.shape != (self.dim, self.dim) or L.field != field:
                raise ValueError("bad left-multiplication matrix")
        if unit.shape != (self.dim, 1):
            raise ValueError("unit must be a column vector")
        if check:
            self._verify()

    def _verify(self) -> None:
        r = self.dim
        if r > ASSOCIATIVITY_DIM_CAP:
            raise ValueError(f"dimension {r} exceeds the verification cap")
        acc = Mat.zeros(self.field, r, r)
        for i in range(r):
            acc = acc + self.left_mult[i].scale(self._unit_coeff(i))
        if not acc.is_identity():
            raise ArithmeticError("unit law fails")
        for i in range(r):
            for j in range(i):
                if self.left_mult[i].col(j) != self.left_mult[j].col(i):
                    raise ArithmeticError(f"not commutative at basis pair {(i, j)}")
        for i in range(r):
            for j in range(r):
                # (e_i e_j) e_k = e_i (e_j e_k) for all k, as matrices
                if self.mult_matrix(self.left_mult[i].col(j)) != self.left_mult[i] @ self.left_mult[j]:
                    raise ArithmeticError(f"not associative at basis pair {(i, j)}")

    def _unit_coeff(self, i: int):
        if self.field.p is not None:
            return int(self.unit.num[i, 0])
        return Fraction(int(self.unit.num[i, 0]), self.unit.den)

    def mult_matrix(self, x: Mat) -> Mat:
        out = Mat.zeros(self.field, self.dim, self.dim)
        for i in range(self.dim):
            v = x.num[i, 0]
            if v:
                c = int(v) if self.field.p is not None else Fraction(int(v), x.den)
                out = out + self.left_mult[i].scale(c)
        return out

    def multiply(self, x: Mat, y: Mat) -> Mat:
        return self.mult_matrix(x) @ y

    def power(self, x: Mat, k: int) -> Mat:
        return self.mult_matrix(x).pow(k) @ self.unit

    def is_idempotent(self, x: Mat) -> bool:
        return self.multiply(x, x) == x


# -- polynomial helpers (coefficients low-to-high; ints mod p or Fractions) --


def _poly_trim(f: List) -> List:
    while f and not f[-1]:
        f.pop()
    return f


def _poly_mul(f: List, g: List, p: Optional[int]) -> List:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    if p is not None:
        out = [c % p for c in out]
    return _poly_trim(out)


def _poly_divmod(f: List, g: List, p: Optional[int]) -> Tuple[List, List]:
    f = list(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    inv_lead = pow(int(g[-1]), p - 2, p) if p is not None else Fraction(1) / g[-1]
    while len(f) >= len(g) and _poly_trim(list(f)):
        if not f[-1]:
            f.pop()
            continue
        d = len(f) - len(g)
        c = f[-1] * inv_lead
        if p is not None:
            c %= p
        q[d] = c
        for i in range(len(g)):
            f[d + i] -= c * g[i]
            if p is not None:
                f[d + i] %= p
        f.pop()
    return _poly_trim(q), _poly_trim(f)


def _poly_xgcd(f: List, g: List, p: Optional[int]) -> Tuple[List, List, List]:
    """(d, u, v) with u f + v g = d (d not normalized to monic)."""
    r0, r1 = list(f), list(g)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while _poly_trim(list(r1)):
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1, p), p)
    return _poly_trim(r0), _poly_trim(s0), _poly_trim(t0)


def _poly_sub(f: List, g: List, p: Optional[int]) -> List:
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] += a
    for i, b in enumerate(g):
        out[i] -= b
    if p is not None:
        out = [c % p for c in out]
    return _poly_trim(out)


def _eval_poly(alg: CommutativeAlgebra, coeffs: List, Mz: Mat, unit: Mat) -> Mat:
    """f(z) via Horner inside the unital subalgebra whose unit is `unit`
    (the constant term multiplies that unit, not the global one)."""
    out = Mat.zeros(alg.field, alg.dim, 1)
    for c in reversed(coeffs):
        out = Mz @ out
        if c:
            out = out + unit.scale(c if alg.field.p is None else int(c))
    return out


def _krylov_minpoly(alg: CommutativeAlgebra, z: Mat, e: Mat,
                    modulo: Optional[Mat]) -> List:
    """Monic minimal polynomial of z in the unital subalgebra with unit e,
    optionally modulo the span of `modulo` (for minpoly in a quotient).
    Coefficients low-to-high, ints mod p or Fractions."""
    f = alg.field
    Mz = alg.mult_matrix(z)
    powers = [e]
    cur = e
    while True:
        stack = powers[0]
        for v in powers[1:]:
            stack = stack.hstack(v)
        k = len(powers)
        cur = Mz @ cur
        rhs = cur
        sysm = stack if modulo is None or modulo.ncols == 0 else stack.hstack(modulo)
        sol = sysm.solve(rhs)
        if sol is not None:
            if f.p is not None:
                coeffs = [(-int(sol.num[i, 0])) % f.p for i in range(k)]
            else:
                coeffs = [-Fraction(int(sol.num[i, 0]), sol.den) for i in range(k)]
            coeffs.append(1 if f.p is not None else Fraction(1))
            return coeffs
        powers.append(cur)
        if len(powers) > alg.dim + 1:
            raise ArithmeticError("minimal polynomial search exceeded the dimension")


def _rational_roots(coeffs: List[Fraction]) -> List[Fraction]:
    """All rational roots of a monic polynomial with Fraction coefficients."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots = []
    # strip roots at zero
    f = list(ints)
    if not f:
        return []
    while f and f[0] == 0 and len(f) > 1:
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
        f = f[1:]
    a0, an = abs(f[0]), abs(f[-1])
    if a0 == 0:
        return sorted(roots)
    if a0 > 10**12:
        raise NotSplitOverRationals(f"constant term {a0} too large for root search")
    for num in _divisors(a0):
        for d in _divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, d)
                if r in roots:
                    continue
                acc = Fraction(0)
                for c in reversed(coeffs):
                    acc = acc * r + c
                if acc == 0:
                    roots.append(r)
    return sorted(roots)


def _divisors(n: int) -> List[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def primitive_idempotents(alg: CommutativeAlgebra) -> List[Mat]:
    """The complete list of primitive idempotents, sorted lexicographically
    by coefficient vector.

    Over F_p this is deterministic and certified: leaves are exactly the
    pieces whose Frobenius-fixed subspace modulo the nilradical is
    one-dimensional.  Over Q, splitting uses rational roots of minimal
    polynomials modulo the nilradical with Hensel lifting; a leaf is
    certified when its semisimple quotient is Q itself or is generated by
    an element whose minimal polynomial is irreducible of degree <= 3
    (no rational root); anything else raises NotSplitOverRationals.
    """
    if alg.field.p is not None:
        leaves = _split_modp(alg)
    else:
        leaves = _split_rational(alg)
    total = leaves[0]
    for e in leaves[1:]:
        total = total + e
    if total != alg.unit:
        raise ArithmeticError("idempotents do not sum to the unit")
    for i, e in enumerate(leaves):
        if not alg.is_idempotent(e):
            raise ArithmeticError("output is not idempotent")
        for j in range(i):
            if not alg.multiply(e, leaves[j]).is_zero():
                raise ArithmeticError("idempotents are not orthogonal")
    def key(e: Mat):
        if alg.field.p is not None:
            return tuple(int(v) for v in e.num[:, 0])
        return tuple(Fraction(int(v), e.den) for v in e.num[:, 0])
    return sorted(leaves, key=key)


def _frobenius_matrix(alg: CommutativeAlgebra) -> Mat:
    p = alg.field.p
    cols = []
    for i in range(alg.dim):
        cols.append(alg.left_mult[i].pow(p) @ alg.unit)
    out = cols[0]
    for c in cols[1:]:
        out = out.hstack(c)
    return out


def _span_basis(vectors: Mat) -> Mat:
    """A deterministic (RREF) basis of the column span."""
    if vectors.ncols == 0:
        return vectors
    R, piv = vectors.T.rref()
    return Mat(vectors.field, R.num[: len(piv), :].T.copy(), R.den)


def _in_span(v: Mat, basis: Mat) -> bool:
    if basis.ncols == 0:
        return v.is_zero()
    return basis.solve(v) is not None


def _split_modp(alg: CommutativeAlgebra) -> List[Mat]:
    p = alg.field.p
    n = alg.dim
    N = 0
    while p**N < n:
        N += 1
    F = _frobenius_matrix(alg)
    FN = F.pow(max(N, 1)) if N else Mat.identity(alg.field, n)
    nil_global = _span_basis(FN.nullspace()) if N else Mat.zeros(alg.field, n, 0)
    I = Mat.identity(alg.field, n)

    out: List[Mat] = []

    def split(e: Mat) -> None:
        B = _span_basis(alg.mult_matrix(e))  # basis of eA
        if B.ncols == 0:
            raise ArithmeticError("zero idempotent reached")
        # Nil(eA) = ker F^N intersect eA
        if nil_global.ncols:
            sysm = B.hstack(nil_global.scale(-1))
            pairs = sysm.nullspace()
            nilE = _span_basis(B @ Mat(alg.field, pairs.num[: B.ncols, :].copy(), pairs.den)) \
                if pairs.ncols else Mat.zeros(alg.field, n, 0)
        else:
            nilE = Mat.zeros(alg.field, n, 0)
        # solutions of (F - I) x in Nil(eA), x in eA
        lhs = (F - I) @ B
        sysm = lhs if nilE.ncols == 0 else lhs.hstack(nilE.scale(-1))
        sols = sysm.nullspace()
        X = B @ Mat(alg.field, sols.num[: B.ncols, :].copy(), sols.den) if sols.ncols \
            else Mat.zeros(alg.field, n, 0)
        Xb = _span_basis(X) if X.ncols else X
        s = Xb.ncols - nilE.ncols
        if s < 1:
            raise ArithmeticError("Frobenius-fixed space is too small (broken invariant)")
        if s == 1:
            out.append(e)
            return
        # pick a fixed vector outside span(e) + Nil(eA)
        span_e = e if nilE.ncols == 0 else _span_basis(e.hstack(nilE))
        z = None
        for c in range(Xb.ncols):
            cand = Xb.col(c)
            if not _in_span(cand, span_e):
                z = cand
                break
        if z is None:
            raise ArithmeticError("no splitting element found (broken invariant)")
        f = _krylov_minpoly(alg, z, e, modulo=None)
        roots: List[Tuple[int, int]] = []  # (root, multiplicity)
        rem = list(f)
        for c in range(p):
            m = 0
            while True:
                q, r = _poly_divmod(rem, [(-c) % p, 1], p)
                if r:
                    break
                rem, m = q, m + 1
            if m:
                roots.append((c, m))
        if sum(m for _, m in roots) != len(f) - 1:
            raise ArithmeticError("minimal polynomial did not split over F_p")
        if len(roots) < 2:
            raise ArithmeticError("splitting element has a single eigenvalue (broken invariant)")
        Mz = alg.mult_matrix(z)
        pieces = []
        for c, m in roots:
            fc, _ = _poly_divmod(f, _poly_power([(-c) % p, 1], m, p), p)
            g = _poly_power([(-c) % p, 1], m, p)
            d, u, _v = _poly_xgcd(fc, g, p)
            if len(d) != 1:
                raise ArithmeticError("cofactors are not coprime")
            dinv = pow(int(d[0]), p - 2, p)
            ec = _eval_poly(alg, _poly_mul([x * dinv % p for x in u], fc, p), Mz, e)
            pieces.append(ec)
        acc = pieces[0]
        for q in pieces[1:]:
            acc = acc + q
        if acc != e:
            raise ArithmeticError("spectral idempotents do not sum to e")
        for q in pieces:
            if not alg.is_idempotent(q):
                raise ArithmeticError("spectral piece is not idempotent")
            split(q)

    split(alg.unit)
    return out


def _poly_power(f: List, k: int, p: Optional[int]) -> List:
    out = [1]
    for _ in range(k):
        out = _poly_mul(out, f, p)
    return out


def _trace_form_radical(alg: CommutativeAlgebra) -> Mat:
    n = alg.dim
    gram = np.zeros((n, n), dtype=object)
    dens = np.zeros((n, n), dtype=object)
    entries = []
    for i in range(n):
        row = []
        for j in range(i + 1):
            t = (alg.left_mult[i] @ alg.left_mult[j]).trace()
            row.append(t if isinstance(t, Fraction) else Fraction(t))
        entries.append(row)
    den = 1
    for row in entries:
        for t in row:
            den = den * t.denominator // math.gcd(den, t.denominator)
    num = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(i + 1):
            v = int(entries[i][j] * den)
            num[i, j] = v
            num[j, i] = v
    G = Mat(QQ, num, den)
    return _span_basis(G.nullspace())


def _split_rational(alg: CommutativeAlgebra) -> List[Mat]:
    n = alg.dim
    nil_global = _trace_form_radical(alg)
    out: List[Mat] = []

    def split(e: Mat, depth: int) -> None:
        if depth > n:
            raise NotSplitOverRationals("splitting recursion exceeded the dimension")
        B = _span_basis(alg.mult_matrix(e))
        if nil_global.ncols:
            sysm = B.hstack(nil_global.scale(-1))
            pairs = sysm.nullspace()
            nilE = _span_basis(B @ Mat(QQ, pairs.num[: B.ncols, :].copy(), pairs.den)) \
                if pairs.ncols else Mat.zeros(QQ, n, 0)
        else:
            nilE = Mat.zeros(QQ, n, 0)
        m = B.ncols - nilE.ncols  # dim of the semisimple quotient
        if m == 1:
            out.append(e)
            return
        candidates = [B.col(c) for c in range(B.ncols)]
        for a in range(min(B.ncols, 6)):
            for b in range(a):
                candidates.append(B.col(a) + B.col(b))
        best_deg = 0
        for z in candidates:
            fbar = _krylov_minpoly(alg, z, e, modulo=nilE)
            deg = len(fbar) - 1
            best_deg = max(best_deg, deg)
            if deg < 2:
                continue
            roots = _rational_roots(fbar)
            if not roots:
                continue
            c = roots[0]
            g, r = _poly_divmod(fbar, [-c, Fraction(1)], None)
            if r:
                raise ArithmeticError("claimed root does not divide")
            gc = Fraction(0)
            for coef in reversed(g):
                gc = gc * c + coef
            if gc == 0:
                raise NotSplitOverRationals("repeated root modulo the nilradical")
            E = _eval_poly(alg, [coef / gc for coef in g], alg.mult_matrix(z), e)
            E = _hensel_idempotent(alg, E)
            comp = e - E
            if E.is_zero() or comp.is_zero():
                raise ArithmeticError("degenerate rational split")
            split(E, depth + 1)
            split(comp, depth + 1)
            return
        # no rational split available: certify the leaf or refuse
        if best_deg == m and m <= 3:
            out.append(e)  # minpoly of degree m with no rational root: a field
            return
        raise NotSplitOverRationals(
            f"piece of semisimple dimension {m} not certifiable by rational roots")

    split(alg.unit, 0)
    return out


def _hensel_idempotent(alg: CommutativeAlgebra, E: Mat) -> Mat:
    for _ in range(12):
        if alg.is_idempotent(E):
            return E
        E2 = alg.multiply(E, E)
        E = E2.scale(3) - alg.multiply(E2, E).scale(2)
    raise ArithmeticError("idempotent refinement did not converge")


# ---------------------------------------------------------------------------
# the center of the group algebra and blocks


class CenterOfGroupAlgebra:
    """Z(kG) on the class-sum basis, with exact structure constants."""

    def __init__(self, G: FiniteGroup, field: Field):
        self.group = G
        self.field = field
        self.classes = G.conjugacy_classes()
        r = len(self.classes)
        reps = [c[0] for c in self.classes]
        T = np.zeros((r, r, r), dtype=np.int64)
        for i, Ci in enumerate(self.classes):
            prod = G.table[np.ix_(list(Ci), [g for Cj in self.classes for g in Cj])]
            # column blocks correspond to classes j
            off = 0
            for j, Cj in enumerate(self.classes):
                blk = prod[:, off : off + len(Cj)]
                counts = np.bincount(blk.ravel(), minlength=G.order)
                for k, rep in enumerate(reps):
                    T[i, k, j] = counts[rep]
                off += len(Cj)
        unit = np.zeros((r, 1), dtype=np.int64)
        unit[0, 0] = 1
        if self.classes[0] != (G.identity,):
            raise ArithmeticError("identity class must come first")
        self.algebra = CommutativeAlgebra(
            field, [Mat(field, T[i]) for i in range(r)], Mat(field, unit))
        self._tensor = T

    @property
    def dim(self) -> int:
        return len(self.classes)

    def class_vector_to_elements(self, v: Mat) -> np.ndarray:
        """Expand class-sum coordinates to a coefficient per group element
        (integers; interpret mod p or over den as appropriate)."""
        out = np.zeros(self.group.order, dtype=object)
        for i, C in enumerate(self.classes):
            for g in C:
                out[g] = int(v.num[i, 0])
        return out

    def multiply(self, x: Mat, y: Mat) -> Mat:
        return self.algebra.multiply(x, y)


@dataclass
class Block:
    index: int
    idempotent_classes: Mat       # column over class sums
    idempotent_elements: np.ndarray  # integer coefficients per group element
    idempotent_den: int
    dimension: int


def block_decomposition(G: FiniteGroup, field: Field) -> List[Block]:
    """Blocks of kG: primitive idempotents of Z(kG) plus the dimension of
    each two-sided ideal e kG; dimensions are verified to sum to |G|."""
    Z = CenterOfGroupAlgebra(G, field)
    idems = primitive_idempotents(Z.algebra)
    blocks = []
    for bi, e in enumerate(idems):
        vec = Z.class_vector_to_elements(e)
        M = np.zeros((G.order, G.order), dtype=np.int64)
        for g in range(G.order):
            c = int(vec[g])
            if c:
                M[G.table[g], np.arange(G.order)] += c
        dim = Mat(field, M, e.den).rank()
        blocks.append(Block(bi, e, vec, e.den, dim))
    if sum(b.dimension for b in blocks) != G.order:
        raise ArithmeticError("block dimensions do not sum to |G|")
    return blocks


# ---------------------------------------------------------------------------
# the crossed Burnside ring


@dataclass(frozen=True)
class PairClass:
    """Canonical representative of a G-class of pairs (H, a) with a
    centralizing H: the subgroup as a sorted element tuple plus the element."""

    subgroup: Tuple[int, ...]
    element: int


class CrossedBurnsideAlgebra:
    """The crossed Burnside ring of G on the basis of G-classes of pairs
    (H <= G, a in C_G(H)), with integer structure constants

        (K, b) (H, a) = sum over KgH of (K n gHg^-1, b * gag^-1).

    The unit is (G, 1).  Associativity, commutativity and the unit law are
    verified on the computed constants, and the span of the pairs (H, 1) is
    checked to reproduce the Burnside ring's double-coset products.
    """

    def __init__(self, G: FiniteGroup):
        self.group = G
        self.basis: List[PairClass] = []
        self._index: Dict[PairClass, int] = {}
        subs = G.subgroups_up_to_conjugacy()
        for S in subs:
            C = G.centralizer(S.elements)
            N = G.normalizer(S)
            seen = set()
            for a in C.elements:
                if a in seen:
                    continue
                orbit = {G.conj(g, a) for g in N.elements}
                seen |= orbit
                pc = self.canonical_pair(S.elements, min(orbit))
                if pc in self._index:
                    raise ArithmeticError("duplicate pair class (broken canonicalization)")
                self._index[pc] = len(self.basis)
                self.basis.append(pc)
        self.rank = len(self.basis)
        self.unit_index = self._index[self.canonical_pair(
            tuple(range(G.order)), G.identity)]
        self._table: List[List[np.ndarray]] = [[None] * self.rank for _ in range(self.rank)]
        for i in range(self.rank):
            for j in range(self.rank):
                self._table[i][j] = self._product(i, j)
        self._verify()

    def canonical_pair(self, subgroup_elements: Sequence[int], a: int) -> PairClass:
        """Minimum of (sorted subgroup tuple, element) over simultaneous
        conjugation by all of G."""
        G = self.group
        best = None
        for g in range(G.order):
            t = tuple(sorted(G.conjugate_subgroup(g, subgroup_elements)))
            key = (t, G.conj(g, a))
            if best is None or key < best:
                best = key
        return PairClass(best[0], best[1])

    def _product(self, i: int, j: int) -> np.ndarray:
        G = self.group
        K = G.subgroup(self.basis[i].subgroup)
        H = G.subgroup(self.basis[j].subgroup)
        b, a = self.basis[i].element, self.basis[j].element
        out = np.zeros(self.rank, dtype=np.int64)
        Kset = frozenset(K.elements)
        for g in G.double_cosets(K, H).representatives:
            inter = Kset & G.conjugate_subgroup(g, H.elements)
            c = G.mul(b, G.conj(g, a))
            for s in inter:  # the product must centralize the intersection
                if G.conj(c, s) != s:
                    raise ArithmeticError("product element does not centralize")
            pc = self.canonical_pair(tuple(sorted(inter)), c)
            out[self._index[pc]] += 1
        return out

    def _verify(self) -> None:
        r = self.rank
        if r > ASSOCIATIVITY_DIM_CAP:
            raise ValueError(f"rank {r} exceeds the verification cap")
        # L[i][k, j] = coeff of e_k in e_i e_j
        L = np.zeros((r, r, r), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                L[i, :, j] = self._table[i][j]
        self._left = L
        u = self.unit_index
        if not np.array_equal(L[u], np.eye(r, dtype=np.int64)):
            raise ArithmeticError("unit law fails in the crossed Burnside ring")
        for i in range(r):
            for j in range(r):
                if not np.array_equal(L[i, :, j], L[j, :, i]):
                    raise ArithmeticError("crossed Burnside ring is not commutative")
        for i in range(r):
            Li = L[i].astype(np.int64)
            for j in range(r):
                lhs = np.tensordot(L[i, :, j], L, axes=(0, 0))
                if not np.array_equal(lhs, Li @ L[j]):
                    raise ArithmeticError("crossed Burnside ring is not associative")

    def multiply(self, x: Sequence[int], y: Sequence[int]) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("i,ikj,j->k", x, self._left, y)

    def basis_index(self, subgroup_elements: Sequence[int], a: int) -> int:
        return self._index[self.canonical_pair(subgroup_elements, a)]

    def untwisted_indices(self) -> List[Tuple[int, int]]:
        """(subgroup class index, basis index) for the pairs (H, 1), in the
        canonical subgroup-class order."""
        G = self.group
        out = []
        for k, S in enumerate(G.subgroups_up_to_conjugacy()):
            out.append((k, self.basis_index(S.elements, G.identity)))
        return out

    def verify_burnside_subring(self) -> bool:
        """The span of the pairs (H, 1) multiplies exactly like the Burnside
        ring on the matching basis."""
        G = self.group
        pairs = self.untwisted_indices()
        back = {bi: k for k, bi in pairs}
        for k1, b1 in pairs:
            for k2, b2 in pairs:
                prod = self._table[b1][b2]
                expected = np.zeros(len(pairs), dtype=np.int64)
                for bi, c in enumerate(prod):
                    if c:
                        if bi not in back:
                            return False
                        expected[back[bi]] += c
                ref = np.zeros(len(pairs), dtype=np.int64)
                ref[k1] = 1
                ref2 = np.zeros(len(pairs), dtype=np.int64)
                ref2[k2] = 1
                if not np.array_equal(burnside_multiply(G, ref, ref2), expected):
                    return False
        return True

    def as_algebra(self, field: Field) -> CommutativeAlgebra:
        unit = np.zeros((self.rank, 1), dtype=np.int64)
        unit[self.unit_index, 0] = 1
        return CommutativeAlgebra(
            field, [Mat(field, self._left[i]) for i in range(self.rank)],
            Mat(field, unit), check=False)

    # -- the coholological map to the center -------------------------------

    def rho_coh_matrix(self) -> np.ndarray:
        """Integer matrix of (H, a) |-> sum_{xH in G/H} x a x^-1 expressed in
        class sums: rows = basis pairs, columns = conjugacy classes."""
        G = self.group
        classes = G.conjugacy_classes()
        out = np.zeros((self.rank, len(classes)), dtype=np.int64)
        for bi, pc in enumerate(self.basis):
            H = G.subgroup(pc.subgroup)
            reps, _ = G.left_transversal(H)
            w = np.zeros(G.order, dtype=np.int64)
            for t in reps:
                w[G.conj(t, pc.element)] += 1
            for ci, C in enumerate(classes):
                vals = {int(w[g]) for g in C}
                if len(vals) > 1:
                    raise ArithmeticError("image is not a class-sum combination")
                out[bi, ci] = vals.pop()
        return out

    def verify_rho_coh(self, field: Field) -> Dict[str, bool]:
        """The map is a unital ring homomorphism onto Z(kG)."""
        G = self.group
        R = self.rho_coh_matrix()
        Z = CenterOfGroupAlgebra(G, QQ)
        unit_ok = bool(R[self.unit_index, 0] == 1 and not np.any(R[self.unit_index, 1:]))
        hom_ok = True
        for i in range(self.rank):
            for j in range(self.rank):
                lhs = self._table[i][j] @ R  # rho of the product, over Z
                x = Mat(QQ, R[i].reshape(-1, 1).copy())
                y = Mat(QQ, R[j].reshape(-1, 1).copy())
                rhs = Z.multiply(x, y)
                if Mat(QQ, lhs.reshape(-1, 1).copy()) != rhs:
                    hom_ok = False
                    break
            if not hom_ok:
                break
        surj_ok = Mat(field, R.T.copy()).rank() == len(Z.classes)
        if not (unit_ok and hom_ok):
            raise ArithmeticError("rho_coh is not a unital ring homomorphism")
        return {"unital": unit_ok, "homomorphism": hom_ok, "surjective": surj_ok}
