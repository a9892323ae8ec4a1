"""Exact linear algebra over prime fields and the rationals.

A matrix is an integer numpy array `num` together with a positive common
denominator `den` (always 1 over F_p).  Every operation is exact: mod-p
products go through float64 BLAS only while the inner dimension times
(p-1)^2 stays below 2**53, and integer products escalate from int64 to
Python bignums (object dtype) before they could overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np

__all__ = ["Field", "GF", "QQ", "Mat", "rref_mod", "perm_to_mat"]

_F53 = 2**53
_I62 = 2**62


@dataclass(frozen=True)
class Field:
    """Prime field F_p (`p` a prime) or the rationals (`p` is None)."""

    p: Optional[int]

    @property
    def char(self) -> int:
        return 0 if self.p is None else self.p

    def __repr__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, int(n**0.5) + 1):
        if n % q == 0:
            return False
    return True


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    if not _is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return Field(p)


QQ = Field(None)


def _imatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two integer matrices, escalating dtype as needed."""
    m, k = a.shape
    n = b.shape[1]
    if m == 0 or n == 0 or k == 0:
        return np.zeros((m, n), dtype=np.int64)
    if a.dtype != object and b.dtype != object:
        ma = int(np.abs(a).max(initial=0))
        mb = int(np.abs(b).max(initial=0))
        bound = k * ma * mb
        if bound < _F53:
            c = a.astype(np.float64) @ b.astype(np.float64)
            return np.rint(c).astype(np.int64)
        if bound < _I62:
            return a.astype(np.int64) @ b.astype(np.int64)
    return np.dot(a.astype(object), b.astype(object))


def _scale_arr(a: np.ndarray, s: int) -> np.ndarray:
    if s == 0:
        return np.zeros_like(a, dtype=np.int64)
    if a.dtype != object:
        if int(np.abs(a).max(initial=0)) * abs(s) < _I62:
            return a * np.int64(s)
    return a.astype(object) * s


def _add_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        if int(np.abs(a).max(initial=0)) + int(np.abs(b).max(initial=0)) < _I62:
            return a + b
    return a.astype(object) + b.astype(object)


def _content(a: np.ndarray) -> int:
    flat = a.ravel()
    if a.dtype != object:
        g = int(np.gcd.reduce(np.abs(flat))) if flat.size else 0
    else:
        g = reduce(math.gcd, (abs(int(x)) for x in flat), 0)
    return g


def _compact(a: np.ndarray) -> np.ndarray:
    """Drop back to int64 when an object array fits again."""
    if a.dtype == object and a.size:
        try:
            hi = max(abs(int(x)) for x in a.ravel())
        except TypeError:  # pragma: no cover
            return a
        if hi < _I62:
            return a.astype(np.int64)
    return a


def rref_mod(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form of an integer matrix mod p (vectorized)."""
    a = np.asarray(a, dtype=np.int64) % p
    rows, cols = a.shape
    piv: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        other = np.flatnonzero(a[:, c])
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        piv.append(c)
        r += 1
    return a, piv


def _rref_fraction(rows: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    piv: List[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        pr = next((i for i in range(r, nr) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            f = rows[i][c]
            if i != r and f:
                ri, rr = rows[i], rows[r]
                rows[i] = ri[:c] + [x - f * y for x, y in zip(ri[c:], rr[c:])]
        piv.append(c)
        r += 1
    return rows, piv


class Mat:
    """Exact matrix over F_p or Q."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: Field, num: np.ndarray, den: int = 1):
        num = np.asarray(num)
        if num.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        if num.dtype not in (np.dtype(np.int64), np.dtype(object)):
            num = num.astype(np.int64)
        p = field.p
        if p is not None:
            num = num.astype(np.int64) % p
            if den % p == 0:
                raise ZeroDivisionError("denominator vanishes mod p")
            if den % p != 1:
                num = (num * pow(den % p, p - 2, p)) % p
            den = 1
        else:
            if den < 0:
                num, den = _scale_arr(num, -1), -den
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den != 1:
                g = math.gcd(_content(num), den)
                if g > 1:
                    num = (num // g) if num.dtype != object else num // g
                    den //= g
            num = _compact(num)
        self.field = field
        self.num = num
        self.den = den

    # ---- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, r: int, c: int) -> "Mat":
        return cls(field, np.zeros((r, c), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence]) -> "Mat":
        rows = [list(r) for r in rows]
        nc = len(rows[0]) if rows else 0
        den = 1
        for row in rows:
            for x in row:
                if isinstance(x, Fraction):
                    den = den * x.denominator // math.gcd(den, x.denominator)
        num = np.empty((len(rows), nc), dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                num[i, j] = int(Fraction(x) * den)
        return cls(field, _compact(num) if num.size else num.astype(np.int64), den)

    @classmethod
    def from_cols(cls, field: Field, cols: Sequence[Sequence]) -> "Mat":
        return cls.from_rows(field, cols).T

    @classmethod
    def block_diag(cls, field: Field, blocks: Sequence["Mat"]) -> "Mat":
        rs = sum(b.nrows for b in blocks)
        cs = sum(b.ncols for b in blocks)
        den = 1
        for b in blocks:
            den = den * b.den // math.gcd(den, b.den)
        dtype = object if any(b.num.dtype == object for b in blocks) or den > 1 else np.int64
        out = np.zeros((rs, cs), dtype=dtype)
        r = c = 0
        for b in blocks:
            out[r : r + b.nrows, c : c + b.ncols] = _scale_arr(b.num, den // b.den)
            r += b.nrows
            c += b.ncols
        return cls(field, out, den)

    # ---- basic queries -------------------------------------------------

    @property
    def nrows(self) -> int:
        return self.num.shape[0]

    @property
    def ncols(self) -> int:
        return self.num.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.num.shape

    def entry(self, i: int, j: int):
        v = int(self.num[i, j])
        return v if self.field.p is not None else Fraction(v, self.den)

    def to_fractions(self) -> List[List[Fraction]]:
        d = self.den
        return [[Fraction(int(x), d) for x in row] for row in self.num]

    def to_jsonable(self):
        if self.den == 1:
            return [[int(x) for x in row] for row in self.num]
        out = []
        for row in self.num:
            out.append([str(Fraction(int(x), self.den)) for x in row])
        return out

    def is_zero(self) -> bool:
        return not np.any(self.num != 0)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols or self.den != 1:
            return False
        return bool(np.array_equal(self.num.astype(object), np.eye(self.nrows, dtype=object)))

    def __repr__(self) -> str:
        return f"Mat({self.field!r}, {self.nrows}x{self.ncols})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self.den == other.den:
            return bool(np.array_equal(self.num.astype(object), other.num.astype(object)))
        a = _scale_arr(self.num, other.den)
        b = _scale_arr(other.num, self.den)
        return bool(np.array_equal(a.astype(object), b.astype(object)))

    __hash__ = None  # type: ignore[assignment]

    # ---- arithmetic ----------------------------------------------------

    def _check(self, other: "Mat") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        d = self.den * other.den // math.gcd(self.den, other.den)
        a = _scale_arr(self.num, d // self.den)
        b = _scale_arr(other.num, d // other.den)
        return Mat(self.field, _add_arr(a, b), d)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        return Mat(self.field, _scale_arr(self.num, -1), self.den)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        num = _imatmul(self.num, other.num)
        if self.field.p is not None:
            num %= self.field.p
            return Mat(self.field, num)
        return Mat(self.field, num, self.den * other.den)

    def scale(self, s) -> "Mat":
        s = Fraction(s)
        return Mat(self.field, _scale_arr(self.num, s.numerator), self.den * s.denominator)

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self.num.T.copy(), self.den)

    def hstack(self, other: "Mat") -> "Mat":
        self._check(other)
        d = self.den * other.den // math.gcd(self.den, other.den)
        a = _scale_arr(self.num, d // self.den)
        b = _scale_arr(other.num, d // other.den)
        if a.dtype != b.dtype:
            a, b = a.astype(object), b.astype(object)
        return Mat(self.field, np.hstack([a, b]), d)

    def vstack(self, other: "Mat") -> "Mat":
        return self.T.hstack(other.T).T

    def kron(self, other: "Mat") -> "Mat":
        self._check(other)
        a, b = self.num, other.num
        if a.dtype == object or b.dtype == object:
            a, b = a.astype(object), b.astype(object)
        else:
            ma = int(np.abs(a).max(initial=0))
            mb = int(np.abs(b).max(initial=0))
            if ma * mb >= _I62:
                a, b = a.astype(object), b.astype(object)
        num = np.kron(a, b)
        if self.field.p is not None:
            num %= self.field.p
        return Mat(self.field, num, self.den * other.den)

    def trace(self):
        t = int(np.sum(self.num.diagonal().astype(object)))
        if self.field.p is not None:
            return t % self.field.p
        return Fraction(t, self.den)

    def col(self, j: int) -> "Mat":
        return Mat(self.field, self.num[:, j : j + 1].copy(), self.den)

    def take_cols(self, idx: Sequence[int]) -> "Mat":
        return Mat(self.field, self.num[:, list(idx)].copy(), self.den)

    def vec(self) -> "Mat":
        """Column-major flattening as a single column."""
        return Mat(self.field, self.num.T.reshape(-1, 1).copy(), self.den)

    @classmethod
    def unvec(cls, field: Field, v: "Mat", nrows: int, ncols: int) -> "Mat":
        return cls(field, v.num.reshape(ncols, nrows).T.copy(), v.den)

    # ---- elimination ----------------------------------------------------

    def rref(self) -> Tuple["Mat", List[int]]:
        if self.field.p is not None:
            r, piv = rref_mod(self.num, self.field.p)
            return Mat(self.field, r), piv
        if self.nrows == 0:
            return self, []
        rows, piv = _rref_fraction(self.to_fractions())
        return Mat.from_rows(self.field, rows), piv

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "Mat":
        """Matrix whose columns are a basis of the right kernel."""
        R, piv = self.rref()
        free = [c for c in range(self.ncols) if c not in piv]
        if self.field.p is not None:
            p = self.field.p
            out = np.zeros((self.ncols, len(free)), dtype=np.int64)
            for k, f in enumerate(free):
                out[f, k] = 1
                for i, c in enumerate(piv):
                    out[c, k] = (-int(R.num[i, f])) % p
            return Mat(self.field, out)
        out = np.zeros((self.ncols, len(free)), dtype=object)
        for k, f in enumerate(free):
            out[f, k] = R.den
            for i, c in enumerate(piv):
                out[c, k] = -int(R.num[i, f])
        if not free:
            out = out.astype(np.int64)
        return Mat(self.field, out, R.den)

    def solve(self, b: "Mat") -> Optional["Mat"]:
        """One exact solution of self @ x = b, or None if inconsistent."""
        aug = self.hstack(b)
        R, piv = aug.rref()
        n = self.ncols
        if any(c >= n for c in piv):
            return None
        out = np.zeros((n, b.ncols), dtype=R.num.dtype if R.num.dtype == object else np.int64)
        for i, c in enumerate(piv):
            out[c] = R.num[i, n:]
        return Mat(self.field, out, R.den)

    def inv(self) -> "Mat":
        if self.nrows != self.ncols:
            raise ValueError("only square matrices can be inverted")
        n = self.nrows
        R, piv = self.hstack(Mat.identity(self.field, n)).rref()
        if piv != list(range(n)):
            raise ValueError("matrix is not invertible")
        return Mat(self.field, R.num[:, n:].copy(), R.den).scale(Fraction(self.den, 1))

    def is_invertible(self) -> bool:
        """Exact invertibility; over Q a full-rank mod-p certificate suffices."""
        if self.nrows != self.ncols:
            return False
        if self.field.p is not None:
            return len(rref_mod(self.num, self.field.p)[1]) == self.nrows
        if self.num.dtype != object:
            q = 2147483647  # rank mod q == n certifies rank over Q
            if len(rref_mod(self.num % q, q)[1]) == self.nrows:
                return True
        return self.rank() == self.nrows

    def pow(self, e: int) -> "Mat":
        if self.nrows != self.ncols:
            raise ValueError("matrix power needs a square matrix")
        out = Mat.identity(self.field, self.nrows)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base_needed = e >> 1
            if base_needed:
                base = base @ base
            e >>= 1
        return out


def perm_to_mat(field: Field, perm: Sequence[int]) -> Mat:
    """Permutation matrix sending basis vector e_j to e_{perm[j]}."""
    n = len(perm)
    num = np.zeros((n, n), dtype=np.int64)
    num[np.asarray(perm, dtype=np.int64), np.arange(n)] = 1
    return Mat(field, num)
