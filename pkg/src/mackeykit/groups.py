"""Finite groups as Cayley tables with a canonical element order.

Groups built from permutation generators get the BFS element order: breadth
first from the identity, expanding by right multiplication with the
generators in their input order, so the identity always has index 0.  Groups
can also be loaded from a raw multiplication table, in which case the
identity may sit anywhere; everything downstream works from stored indices
rather than assuming index 0.

All enumerative routines (subgroups, conjugacy classes, double cosets) are
exact and exhaustive, meant for desk-scale orders; closure is capped at
MACKEYKIT_MAX_ORDER (default 10080).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "InjectiveHom",
    "DoubleCosetDecomposition",
    "group_from_generators",
    "group_from_table",
    "perm_cycle_name",
    "max_order_cap",
]

DEFAULT_MAX_ORDER = 10080


def max_order_cap() -> int:
    return int(os.environ.get("MACKEYKIT_MAX_ORDER", DEFAULT_MAX_ORDER))


def perm_cycle_name(perm: Sequence[int]) -> str:
    """Cycle notation, e.g. (0 1 2)(3 4); identity prints as 'e'."""
    seen = [False] * len(perm)
    parts = []
    for i in range(len(perm)):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) if parts else "e"


class FiniteGroup:
    """A finite group given by its full multiplication table.

    table[a, b] is the index of the product a*b.  `perms` optionally holds
    the underlying permutations (one per element) when the group came from
    permutation generators.
    """

    def __init__(
        self,
        table: np.ndarray,
        identity: int,
        generators: Optional[List[int]] = None,
        perms: Optional[np.ndarray] = None,
        names: Optional[List[str]] = None,
        _skip_checks: bool = False,
    ):
        table = np.asarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        self.table = table
        self.order = n
        self.identity = int(identity)
        self.perms = perms
        self.names = names
        self._gens = list(generators) if generators is not None else None
        if not _skip_checks:
            self._check_table()
        inv = np.empty(n, dtype=np.int32)
        rows, cols = np.nonzero(table == self.identity)
        inv[rows] = cols
        self.inverse = inv
        self._element_orders: Optional[np.ndarray] = None
        self._conj_classes: Optional[List[Tuple[int, ...]]] = None
        self._class_of: Optional[np.ndarray] = None
        self._all_subgroups: Optional[List[frozenset]] = None
        self._subgroup_classes: Optional[List["Subgroup"]] = None

    # ---- validation ------------------------------------------------------

    def _check_table(self) -> None:
        n = self.order
        t = self.table
        if t.size and (t.min() < 0 or t.max() >= n):
            raise ValueError("table entries out of range")
        ar = np.arange(n, dtype=np.int32)
        sorted_rows = np.sort(t, axis=1)
        sorted_cols = np.sort(t, axis=0)
        if not (np.array_equal(sorted_rows, np.tile(ar, (n, 1))) and
                np.array_equal(sorted_cols.T, np.tile(ar, (n, 1)))):
            raise ValueError("table is not a Latin square")
        e = self.identity
        if not (np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)):
            raise ValueError(f"element {e} is not a two-sided identity")
        # exhaustive associativity check, capped so construction stays cheap
        if n <= 256:
            for a in range(n):
                if not np.array_equal(t[t[a], :], t[a][t]):
                    raise ValueError("multiplication table is not associative")

    # ---- element arithmetic ----------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return int(self.table[g, self.table[x, self.inverse[g]]])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        out = self.identity
        while k:
            out = self.mul(out, a)
            k -= 1
        return out

    def element_orders(self) -> np.ndarray:
        if self._element_orders is None:
            out = np.empty(self.order, dtype=np.int32)
            for a in range(self.order):
                x, k = a, 1
                while x != self.identity:
                    x = self.mul(x, a)
                    k += 1
                out[a] = k
            self._element_orders = out
        return self._element_orders

    def name(self, a: int) -> str:
        if self.names is not None:
            return self.names[a]
        if self.perms is not None:
            return perm_cycle_name(self.perms[a])
        return f"g{a}"

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    # ---- generators --------------------------------------------------------

    def generators(self) -> List[int]:
        """Stored generators, or a greedy small generating set."""
        if self._gens is None:
            gens: List[int] = []
            cur = frozenset([self.identity])
            while len(cur) < self.order:
                nxt = min(a for a in range(self.order) if a not in cur)
                gens.append(nxt)
                cur = self._closure(list(cur) + [nxt])
            self._gens = gens
        return list(self._gens)

    def _closure(self, elements: Iterable[int]) -> frozenset:
        cur = np.unique(np.fromiter(set(elements) | {self.identity}, dtype=np.int64))
        while True:
            prod = np.unique(self.table[np.ix_(cur, cur)])
            if prod.size == cur.size:
                return frozenset(int(x) for x in cur)
            cur = prod

    # ---- conjugacy classes ---------------------------------------------

    def conjugacy_classes(self) -> List[Tuple[int, ...]]:
        """Classes as sorted tuples; identity's class first, then by min element."""
        if self._conj_classes is None:
            n = self.order
            t, inv = self.table, self.inverse
            assigned = np.full(n, -1, dtype=np.int64)
            classes: List[Tuple[int, ...]] = []
            ar = np.arange(n)
            for x in range(n):
                if assigned[x] >= 0:
                    continue
                orbit = np.unique(t[ar, t[x, inv]])
                assigned[orbit] = len(classes)
                classes.append(tuple(int(v) for v in orbit))
            classes.sort(key=lambda c: (self.identity not in c, c[0]))
            self._conj_classes = classes
            class_of = np.empty(n, dtype=np.int64)
            for i, c in enumerate(classes):
                class_of[list(c)] = i
            self._class_of = class_of
        return self._conj_classes

    def class_of(self, x: int) -> int:
        self.conjugacy_classes()
        assert self._class_of is not None
        return int(self._class_of[x])

    # ---- subgroups -------------------------------------------------------

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        return Subgroup(self, tuple(sorted(set(int(x) for x in elements))))

    def subgroup_from_generators(self, gens: Iterable[int]) -> "Subgroup":
        return self.subgroup(self._closure(gens))

    def trivial_subgroup(self) -> "Subgroup":
        return self.subgroup([self.identity])

    def full_subgroup(self) -> "Subgroup":
        return self.subgroup(range(self.order))

    def all_subgroups(self) -> List[frozenset]:
        """Every subgroup, as frozensets of element indices.

        All cyclic subgroups are generated first, then the collection is
        closed under joins with cyclic subgroups (every subgroup arises by
        adjoining one generator at a time, so this is exhaustive).
        """
        if self._all_subgroups is None:
            cyclics = set()
            for a in range(self.order):
                cyclics.add(self._closure([a]))
            found = set(cyclics)
            work = list(cyclics)
            while work:
                sub = work.pop()
                if len(sub) == self.order:
                    continue
                for cyc in cyclics:
                    if cyc <= sub:
                        continue
                    join = self._closure(sub | cyc)
                    if join not in found:
                        found.add(join)
                        work.append(join)
            self._all_subgroups = sorted(found, key=lambda s: (len(s), tuple(sorted(s))))
        return self._all_subgroups

    def conjugate_subgroup(self, g: int, elements: Iterable[int]) -> frozenset:
        el = np.fromiter(elements, dtype=np.int64)
        conj = self.table[g, self.table[el, self.inverse[g]]]
        return frozenset(int(x) for x in conj)

    def subgroups_up_to_conjugacy(self) -> List["Subgroup"]:
        """One representative per conjugacy class of subgroups.

        Representatives are the lexicographically least element tuple in
        their class; the list is sorted by order then by that tuple, so the
        trivial subgroup comes first and the whole group last.
        """
        if self._subgroup_classes is None:
            remaining = set(self.all_subgroups())
            reps: List[Tuple[int, Tuple[int, ...]]] = []
            while remaining:
                sub = next(iter(remaining))
                orbit = {frozenset(self.conjugate_subgroup(g, sub)) for g in range(self.order)}
                remaining -= orbit
                canon = min(tuple(sorted(s)) for s in orbit)
                reps.append((len(sub), canon))
            reps.sort()
            self._subgroup_classes = [self.subgroup(t) for _, t in reps]
        return self._subgroup_classes

    def centralizer(self, elements: Iterable[int]) -> "Subgroup":
        mask = np.ones(self.order, dtype=bool)
        for x in set(elements):
            mask &= self.table[:, x] == self.table[x, :]
        return self.subgroup(np.flatnonzero(mask))

    def normalizer(self, sub: "Subgroup") -> "Subgroup":
        target = frozenset(sub.elements)
        good = [g for g in range(self.order)
                if self.conjugate_subgroup(g, sub.elements) == target]
        return self.subgroup(good)

    # ---- cosets ----------------------------------------------------------

    def left_transversal(self, sub: "Subgroup") -> Tuple[List[int], np.ndarray]:
        """Minimal-element representatives of the left cosets gH.

        Returns (reps, coset_of) where coset_of[g] indexes into reps.
        """
        n = self.order
        coset_of = np.full(n, -1, dtype=np.int64)
        reps: List[int] = []
        hs = np.fromiter(sub.elements, dtype=np.int64)
        for g in range(n):
            if coset_of[g] < 0:
                coset = self.table[g, hs]
                coset_of[coset] = len(reps)
                reps.append(g)
        return reps, coset_of

    def double_cosets(self, left: "Subgroup", right: "Subgroup") -> "DoubleCosetDecomposition":
        """Decomposition of G into double cosets K g H (K=left, H=right)."""
        n = self.order
        assignment = np.full(n, -1, dtype=np.int64)
        reps: List[int] = []
        ks = np.fromiter(left.elements, dtype=np.int64)
        hs = np.fromiter(right.elements, dtype=np.int64)
        for g in range(n):
            if assignment[g] < 0:
                kg = self.table[ks, g]
                coset = np.unique(self.table[np.ix_(kg, hs)])
                assignment[coset] = len(reps)
                reps.append(g)
        return DoubleCosetDecomposition(self, left, right, reps, assignment)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup, stored as the sorted tuple of its element indices."""

    parent: FiniteGroup
    elements: Tuple[int, ...]

    def __post_init__(self):
        t = self.parent.table
        el = set(self.elements)
        if self.parent.identity not in el:
            raise ValueError("subgroup must contain the identity")
        for a in self.elements:
            if int(self.parent.inverse[a]) not in el:
                raise ValueError("subgroup is not closed under inverses")
        prods = t[np.ix_(list(el), list(el))]
        if not set(int(x) for x in prods.ravel()) <= el:
            raise ValueError("subgroup is not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, a: int) -> bool:
        return a in set(self.elements)

    def conjugate_by(self, g: int) -> "Subgroup":
        return self.parent.subgroup(self.parent.conjugate_subgroup(g, self.elements))

    def is_normal(self) -> bool:
        return self.parent.normalizer(self).order == self.parent.order

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return self.parent.subgroup(set(self.elements) & set(other.elements))

    def is_conjugate_to(self, other: "Subgroup") -> bool:
        if self.order != other.order:
            return False
        target = frozenset(other.elements)
        return any(self.parent.conjugate_subgroup(g, self.elements) == target
                   for g in range(self.parent.order))

    def as_group(self) -> Tuple[FiniteGroup, Tuple[int, ...]]:
        """The subgroup as a standalone group plus its element list in the parent.

        Element i of the standalone group is parent element elements[i]
        (ascending), so the map i -> elements[i] is an injective hom.
        """
        if not hasattr(self, "_as_group"):
            el = list(self.elements)
            pos = {a: i for i, a in enumerate(el)}
            n = len(el)
            table = np.empty((n, n), dtype=np.int32)
            for i, a in enumerate(el):
                row = self.parent.table[a, el]
                table[i] = [pos[int(x)] for x in row]
            perms = self.parent.perms[el] if self.parent.perms is not None else None
            names = [self.parent.name(a) for a in el] if (
                self.parent.names is not None or self.parent.perms is not None) else None
            grp = FiniteGroup(table, pos[self.parent.identity], perms=perms,
                              names=names, _skip_checks=self.parent.order > 256)
            object.__setattr__(self, "_as_group", (grp, tuple(el)))
        return self._as_group  # type: ignore[attr-defined]

    def inclusion_hom(self) -> "InjectiveHom":
        grp, el = self.as_group()
        return InjectiveHom(grp, self.parent, el)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, elements={self.elements})"


@dataclass(frozen=True)
class InjectiveHom:
    """An injective group homomorphism given elementwise."""

    source: FiniteGroup
    target: FiniteGroup
    map: Tuple[int, ...]

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.int64)
        if m.shape != (self.source.order,):
            raise ValueError("hom map has wrong length")
        if len(set(self.map)) != self.source.order:
            raise ValueError("hom is not injective")
        if self.map[self.source.identity] != self.target.identity:
            raise ValueError("hom does not preserve the identity")
        lhs = m[self.source.table]
        rhs = self.target.table[np.ix_(m, m)]
        if not np.array_equal(lhs, rhs):
            raise ValueError("map is not a homomorphism")

    def __call__(self, a: int) -> int:
        return int(self.map[a])

    def image_subgroup(self) -> Subgroup:
        return self.target.subgroup(self.map)

    def compose(self, inner: "InjectiveHom") -> "InjectiveHom":
        """self o inner."""
        if inner.target is not self.source:
            raise ValueError("homs are not composable")
        return InjectiveHom(inner.source, self.target,
                            tuple(int(self.map[x]) for x in inner.map))

    @property
    def is_isomorphism(self) -> bool:
        return self.source.order == self.target.order

    def inverse(self) -> "InjectiveHom":
        if not self.is_isomorphism:
            raise ValueError("only bijective homs can be inverted")
        inv = [0] * self.source.order
        for a, b in enumerate(self.map):
            inv[b] = a
        return InjectiveHom(self.target, self.source, tuple(inv))


@dataclass(frozen=True)
class DoubleCosetDecomposition:
    """G = union of double cosets K g H over the stored representatives.

    Representatives are the minimal element of each coset, listed in
    increasing order; assignment[g] is the index of g's coset.
    """

    group: FiniteGroup
    left: Subgroup
    right: Subgroup
    representatives: List[int]
    assignment: np.ndarray

    def __len__(self) -> int:
        return len(self.representatives)

    def coset_sizes(self) -> List[int]:
        return [int(np.sum(self.assignment == i)) for i in range(len(self.representatives))]


def group_from_generators(
    degree: int,
    generators: Sequence[Sequence[int]],
    names: Optional[List[str]] = None,
) -> FiniteGroup:
    """Close a set of permutations (on points 0..degree-1) into a group.

    Elements are ordered BFS from the identity, expanding by right
    multiplication with the generators in their input order; the identity is
    element 0.  Raises if the closure exceeds MACKEYKIT_MAX_ORDER.
    """
    cap = max_order_cap()
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    for g in gens:
        if sorted(g.tolist()) != list(range(degree)):
            raise ValueError(f"{g.tolist()} is not a permutation of 0..{degree - 1}")
    ident = np.arange(degree, dtype=np.int64)
    elems = [ident]
    index: Dict[bytes, int] = {ident.tobytes(): 0}
    head = 0
    while head < len(elems):
        w = elems[head]
        head += 1
        for s in gens:
            ws = w[s]  # right multiplication: (w*s)(x) = w(s(x))
            key = ws.tobytes()
            if key not in index:
                if len(elems) >= cap:
                    raise ValueError(
                        f"group closure exceeded the order cap {cap} "
                        "(set MACKEYKIT_MAX_ORDER to raise it)")
                index[key] = len(elems)
                elems.append(ws)
    n = len(elems)
    perms = np.vstack(elems) if n else ident.reshape(1, -1)
    table = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        comp = perms[i][perms]  # row j = perm_i o perm_j
        table[i] = [index[comp[j].tobytes()] for j in range(n)]
    gen_idx = [index[g.tobytes()] for g in gens]
    return FiniteGroup(table, 0, generators=gen_idx, perms=perms, names=names,
                       _skip_checks=n > 256)


def group_from_table(table: Sequence[Sequence[int]], names: Optional[List[str]] = None) -> FiniteGroup:
    """Build a group from a raw multiplication table (identity located automatically)."""
    t = np.asarray(table, dtype=np.int32)
    n = t.shape[0]
    if n > max_order_cap():
        raise ValueError(f"table order {n} exceeds the cap {max_order_cap()}")
    ar = np.arange(n, dtype=np.int32)
    identity = None
    for e in range(n):
        if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
            identity = e
            break
    if identity is None:
        raise ValueError("table has no two-sided identity")
    return FiniteGroup(t, identity, names=names)
