"""Finite abelian groups: elements, subgroup lattice, invertible-power classes.

Conventions
-----------
A group with invariant factors ``(d_1, ..., d_k)`` (normalized to a divisor
chain ``d_1 | d_2 | ... | d_k``) has elements represented as coordinate
tuples ``(a_1, ..., a_k)`` with ``0 <= a_i < d_i``, listed in lexicographic
order; an element's *index* is its position in that list, so the identity is
index 0.  Two non-identity elements are equivalent when each is a power of
the other; the resulting classes partition the non-identity elements, each
class consisting of the generators of the cyclic subgroup it spans.

Deterministic orderings (used for every id this package prints or stores):

* elements: lexicographic on coordinate tuples;
* subgroups: by (order, sorted member-index tuple), ids assigned in that
  order, so id 0 is always the trivial subgroup and the last id is the full
  group;
* classes: by (order of generated subgroup, least member index).

Class and subgroup ids are 0-based throughout the API; the command-line
layer presents classes 1-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod
from typing import Iterable, Sequence

from .errors import (
    GroupError,
    LatticeCapError,
    OmegaError,
    ParamError,
    UndefinedMinimumError,
)

__all__ = [
    "AbelianGroup",
    "Subgroup",
    "PowerClass",
    "ClassPoset",
    "ParamVector",
    "OmegaSet",
    "make_group",
    "normalize_invariant_factors",
    "power_classes",
    "make_params",
    "validate_omega",
    "omega_from_classes",
    "omega_of_type",
    "x_of_subgroup",
    "beta_of_class_set",
    "xi_classes",
    "beta_aggregate",
    "euler_phi",
]


def normalize_invariant_factors(factors: Iterable[int]) -> tuple[int, ...]:
    """Normalize cyclic orders to an ascending divisor chain d_1 | ... | d_k.

    Factors equal to 1 are dropped.  Raises GroupError for non-integral or
    non-positive entries, or if no nontrivial factor remains.
    """
    vals: list[int] = []
    for f in factors:
        if not isinstance(f, int) or isinstance(f, bool):
            raise GroupError(f"invariant factor must be an int, got {f!r}")
        if f < 1:
            raise GroupError(f"invariant factor must be >= 1, got {f}")
        if f > 1:
            vals.append(f)
    if not vals:
        raise GroupError("group must be nontrivial (need a factor >= 2)")
    # Pairwise gcd/lcm sweeps converge to the divisor chain (product is
    # preserved and each swap strictly increases the sorted tuple's tail).
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                a, b = vals[i], vals[j]
                if b % a:
                    vals[i], vals[j] = gcd(a, b), lcm(a, b)
                    changed = True
    vals = sorted(v for v in vals if v > 1)
    return tuple(vals)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its member element indices.

    ``generators`` is a minimal generating set (deterministic: chosen by the
    greedy maximal-quotient-order rule, ties to the least element index),
    so ``len(generators)`` is the minimal number of generators; it is empty
    for the trivial subgroup.
    """

    id: int
    members: frozenset[int]
    order: int
    generators: tuple[int, ...]

    @property
    def is_cyclic(self) -> bool:
        return len(self.generators) <= 1


@dataclass(frozen=True)
class PowerClass:
    """One mutual-power class of non-identity elements.

    ``members`` are element indices (sorted); all members share
    ``element_order`` and generate the same cyclic subgroup
    (``subgroup_id``).
    """

    index: int
    members: tuple[int, ...]
    subgroup_id: int
    element_order: int


@dataclass(frozen=True)
class ClassPoset:
    """Power classes with their divisibility order.

    ``leq[i][j]`` is True when the cyclic subgroup spanned by class ``i`` is
    contained in the one spanned by class ``j``; the order is a partial
    order on classes (reflexive, antisymmetric).  ``class_of_subgroup``
    maps each nontrivial cyclic subgroup id to its generator class.
    """

    classes: tuple[PowerClass, ...]
    leq: tuple[tuple[bool, ...], ...]
    class_of_subgroup: dict[int, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.classes)

    def up_set(self, class_indices: Iterable[int]) -> frozenset[int]:
        """All classes j lying above (>=) some class in ``class_indices``."""
        seeds = list(class_indices)
        return frozenset(
            j
            for j in range(len(self.classes))
            if any(self.leq[i][j] for i in seeds)
        )

    def maximal_within(self, class_indices: Iterable[int]) -> tuple[int, ...]:
        """The maximal classes of the induced sub-poset on ``class_indices``."""
        idx = sorted(set(class_indices))
        return tuple(
            i
            for i in idx
            if not any(self.leq[i][j] for j in idx if j != i)
        )


class AbelianGroup:
    """A finite abelian group in coordinate form with cached structure.

    Heavy derived data (multiplication table, subgroup lattice, class poset)
    is computed lazily and cached on the instance; all of it is
    deterministic given the invariant factors.
    """

    def __init__(self, invariant_factors: Iterable[int]):
        fs = normalize_invariant_factors(invariant_factors)
        self.invariant_factors: tuple[int, ...] = fs
        self.order: int = prod(fs)
        self.exponent: int = fs[-1]
        self.elements: tuple[tuple[int, ...], ...] = tuple(
            itertools.product(*(range(d) for d in fs))
        )
        self._index: dict[tuple[int, ...], int] = {
            e: i for i, e in enumerate(self.elements)
        }
        self.element_orders: tuple[int, ...] = tuple(
            lcm(*(d // gcd(a, d) for a, d in zip(e, fs))) if e != () else 1
            for e in self.elements
        )
        self._mul_table: list[list[int]] | None = None
        self._subgroups: tuple[Subgroup, ...] | None = None
        self._sub_by_members: dict[frozenset[int], int] = {}
        self._poset: ClassPoset | None = None
        self._join_memo: dict[tuple[int, int], int] = {}
        self._within_memo: dict[int, tuple[int, ...]] = {}

    # -- basic structure ---------------------------------------------------

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"AbelianGroup{self.invariant_factors}"

    def describe(self) -> str:
        """Human-readable name like 'C2 x C4'."""
        return " x ".join(f"C{d}" for d in self.invariant_factors)

    def index_of(self, element: Sequence[int]) -> int:
        key = tuple(element)
        if key not in self._index:
            raise GroupError(
                f"{key!r} is not an element of {self.describe()}"
            )
        return self._index[key]

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is None:
            self._build_mul_table()
        return self._mul_table[a][b]

    def _build_mul_table(self) -> None:
        fs = self.invariant_factors
        idx = self._index
        els = self.elements
        table = []
        for ea in els:
            row = [
                idx[tuple((x + y) % d for x, y, d in zip(ea, eb, fs))]
                for eb in els
            ]
            table.append(row)
        self._mul_table = table

    def power(self, a: int, n: int) -> int:
        ea = self.elements[a]
        fs = self.invariant_factors
        return self._index[tuple((x * n) % d for x, d in zip(ea, fs))]

    def inverse(self, a: int) -> int:
        return self.power(a, -1)

    def order_of(self, a: int) -> int:
        return self.element_orders[a]

    def closure(self, generators: Iterable[int]) -> frozenset[int]:
        """Members of the subgroup generated by the given element indices."""
        members = {0}
        for g in generators:
            if g in members:
                continue
            powers = [self.power(g, k) for k in range(self.order_of(g))]
            members = {self.mul(s, p) for s in members for p in powers}
        return frozenset(members)

    # -- subgroup lattice ---------------------------------------------------

    def subgroups(self, cap: int = 10000) -> tuple[Subgroup, ...]:
        """The full subgroup lattice, sorted by (order, member tuple).

        Raises LatticeCapError when more than ``cap`` subgroups are found
        (the cap only matters for groups far larger than the census ever
        enumerates).
        """
        if self._subgroups is None:
            found: set[frozenset[int]] = {frozenset({0})}
            frontier: list[frozenset[int]] = [frozenset({0})]
            while frontier:
                nxt: list[frozenset[int]] = []
                for sub in frontier:
                    for g in range(1, self.order):
                        if g in sub:
                            continue
                        ext = self._extend(sub, g)
                        if ext not in found:
                            found.add(ext)
                            if len(found) > cap:
                                raise LatticeCapError(
                                    f"{self.describe()} has more than {cap} subgroups"
                                )
                            nxt.append(ext)
                frontier = nxt
            ordered = sorted(found, key=lambda s: (len(s), tuple(sorted(s))))
            subs = []
            for sid, members in enumerate(ordered):
                gens = self._min_generators(members)
                subs.append(
                    Subgroup(
                        id=sid,
                        members=members,
                        order=len(members),
                        generators=gens,
                    )
                )
            self._subgroups = tuple(subs)
            self._sub_by_members = {s.members: s.id for s in subs}
        return self._subgroups

    def _extend(self, members: frozenset[int], g: int) -> frozenset[int]:
        powers = [self.power(g, k) for k in range(self.order_of(g))]
        return frozenset(self.mul(s, p) for s in members for p in powers)

    def _min_generators(self, members: frozenset[int]) -> tuple[int, ...]:
        """Greedy minimal generating set (maximal quotient order first).

        Picking an element of maximal order modulo the span so far splits
        off a direct summand, so the greedy count equals the minimal number
        of generators for an abelian group.
        """
        gens: list[int] = []
        current: frozenset[int] = frozenset({0})
        while current != members:
            rest = sorted(members - current)
            best = rest[0]
            best_q = self._quotient_order(best, current)
            max_possible = max(self.order_of(h) for h in rest)
            if best_q < max_possible:
                for h in rest[1:]:
                    q = self._quotient_order(h, current)
                    if q > best_q:
                        best, best_q = h, q
                        if q == max_possible:
                            break
            gens.append(best)
            current = self.closure(gens)
        return tuple(gens)

    def _quotient_order(self, h: int, current: frozenset[int]) -> int:
        n = self.order_of(h)
        for k in _divisors(n):
            if self.power(h, k) in current:
                return k
        return n  # unreachable: k = n gives the identity

    def subgroup_id_of(self, members: frozenset[int]) -> int:
        self.subgroups()
        try:
            return self._sub_by_members[members]
        except KeyError:
            raise GroupError("the given member set is not a subgroup") from None

    @property
    def trivial_subgroup_id(self) -> int:
        self.subgroups()
        return 0

    @property
    def full_subgroup_id(self) -> int:
        return len(self.subgroups()) - 1

    def cyclic_subgroup_id(self, a: int) -> int:
        """Id of the cyclic subgroup generated by element ``a``."""
        return self.subgroup_id_of(self.closure([a]))

    def join_id(self, i: int, j: int) -> int:
        """Id of the subgroup generated by subgroups ``i`` and ``j``."""
        if i > j:
            i, j = j, i
        key = (i, j)
        hit = self._join_memo.get(key)
        if hit is not None:
            return hit
        subs = self.subgroups()
        a, b = subs[i].members, subs[j].members
        if a <= b:
            result = j
        elif b <= a:
            result = i
        else:
            result = self.subgroup_id_of(
                self.closure(subs[i].generators + subs[j].generators)
            )
        self._join_memo[key] = result
        return result

    def subgroup_ids_within(self, i: int) -> tuple[int, ...]:
        """Ids of all subgroups contained in subgroup ``i`` (including it)."""
        hit = self._within_memo.get(i)
        if hit is not None:
            return hit
        subs = self.subgroups()
        target = subs[i].members
        ids = tuple(s.id for s in subs if s.members <= target)
        self._within_memo[i] = ids
        return ids

    def min_generator_count(self, i: int) -> int:
        return len(self.subgroups()[i].generators)

    # -- power classes -------------------------------------------------------

    def class_poset(self) -> ClassPoset:
        if self._poset is None:
            subs = self.subgroups()
            seen: set[int] = set()
            raw: list[tuple[int, ...]] = []
            for g in range(1, self.order):
                if g in seen:
                    continue
                r = self.order_of(g)
                members = sorted(
                    {self.power(g, a) for a in range(1, r) if gcd(a, r) == 1}
                )
                seen.update(members)
                raw.append(tuple(members))
            raw.sort(key=lambda m: (self.order_of(m[0]), m[0]))
            classes = tuple(
                PowerClass(
                    index=i,
                    members=m,
                    subgroup_id=self.cyclic_subgroup_id(m[0]),
                    element_order=self.order_of(m[0]),
                )
                for i, m in enumerate(raw)
            )
            total = sum(len(c.members) for c in classes)
            assert total == self.order - 1, "classes must partition G minus identity"
            leq = tuple(
                tuple(
                    ci.members[0] in subs[cj.subgroup_id].members
                    for cj in classes
                )
                for ci in classes
            )
            by_subgroup = {c.subgroup_id: c.index for c in classes}
            self._poset = ClassPoset(
                classes=classes, leq=leq, class_of_subgroup=by_subgroup
            )
        return self._poset


def make_group(invariant_factors: Iterable[int]) -> AbelianGroup:
    """Build the abelian group with the given cyclic factor orders."""
    return AbelianGroup(invariant_factors)


def power_classes(G: AbelianGroup) -> ClassPoset:
    """The invertible-power classes of ``G`` with their containment order."""
    return G.class_poset()


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# -- parameter vectors -------------------------------------------------------


@dataclass(frozen=True)
class ParamVector:
    """Positive rational weights, one per power class, in class order."""

    values: tuple[Fraction, ...]

    @cached_property
    def denominator_scale(self) -> int:
        """Least common multiple D of the denominators; D*x_i is integral."""
        return lcm(*(v.denominator for v in self.values))

    def scaled(self, i: int) -> int:
        """The integer D * x_i."""
        v = self.values[i] * self.denominator_scale
        return v.numerator

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]


def make_params(G: AbelianGroup, values: Iterable) -> ParamVector:
    """Validate and build a parameter vector for ``G``'s classes.

    Accepts ints, Fractions, or strings like '1/3'; requires one strictly
    positive value per class.
    """
    poset = G.class_poset()
    vals = tuple(Fraction(v) for v in values)
    if len(vals) != len(poset):
        raise ParamError(
            f"expected {len(poset)} parameters (one per class), got {len(vals)}"
        )
    for i, v in enumerate(vals):
        if v <= 0:
            raise ParamError(f"parameter {i} must be positive, got {v}")
    return ParamVector(values=vals)


# -- omega sets ---------------------------------------------------------------


@dataclass(frozen=True)
class OmegaSet:
    """A union of power classes (possibly empty), never containing the identity."""

    class_indices: tuple[int, ...]
    elements: frozenset[int]

    def is_empty(self) -> bool:
        return not self.class_indices

    def meets(self, members: Iterable[int]) -> bool:
        elems = self.elements
        return any(m in elems for m in members)


def validate_omega(G: AbelianGroup, elements: Iterable) -> OmegaSet:
    """Check that the given elements form a union of power classes.

    Elements may be coordinate tuples or element indices.  Raises OmegaError
    when the identity is present or when some class is only partially
    covered (the message names the class).
    """
    poset = G.class_poset()
    idx: set[int] = set()
    for e in elements:
        idx.add(e if isinstance(e, int) else G.index_of(e))
    if 0 in idx:
        raise OmegaError("omega must not contain the identity element")
    for g in idx:
        if not 0 <= g < G.order:
            raise OmegaError(f"element index {g} out of range for {G.describe()}")
    covered: list[int] = []
    for c in poset.classes:
        inside = idx.intersection(c.members)
        if not inside:
            continue
        if len(inside) != len(c.members):
            missing = sorted(set(c.members) - inside)
            raise OmegaError(
                f"omega is not a union of classes: class {c.index} is partially "
                f"covered (missing element indices {missing})"
            )
        covered.append(c.index)
    stray = idx - {g for c in poset.classes for g in c.members}
    if stray:
        raise OmegaError(f"unknown elements in omega: {sorted(stray)}")
    return OmegaSet(class_indices=tuple(covered), elements=frozenset(idx))


def omega_from_classes(G: AbelianGroup, class_indices: Iterable[int]) -> OmegaSet:
    """Build an omega set as a union of the given class indices (0-based)."""
    poset = G.class_poset()
    idx = sorted(set(class_indices))
    for i in idx:
        if not 0 <= i < len(poset):
            raise OmegaError(
                f"class index {i} out of range (group has {len(poset)} classes)"
            )
    elements = frozenset(
        g for i in idx for g in poset.classes[i].members
    )
    return OmegaSet(class_indices=tuple(idx), elements=elements)


def omega_of_type(G: AbelianGroup, q: int, level: int) -> OmegaSet:
    """Elements whose order is divisible by q^level but not q^(level+1).

    ``q`` must be prime and ``level >= 1``; the identity is never included
    (its order has no q part).  The result is automatically a union of
    classes because mutual powers share their order.
    """
    if level < 1:
        raise OmegaError(f"level must be >= 1, got {level}")
    if q < 2 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
        raise OmegaError(f"q must be prime, got {q}")
    selected = []
    for g in range(1, G.order):
        r = G.order_of(g)
        v = 0
        while r % q == 0:
            r //= q
            v += 1
        if v == level:
            selected.append(g)
    return validate_omega(G, selected)


# -- class-indexed aggregates --------------------------------------------------


def x_of_subgroup(G: AbelianGroup, sub_id: int, x: ParamVector) -> Fraction:
    """Sum of x_i over the maximal classes contained in the subgroup.

    Zero for the trivial subgroup; equals x_i for the cyclic subgroup
    spanned by class i.
    """
    poset = G.class_poset()
    members = G.subgroups()[sub_id].members
    inside = [
        c.index for c in poset.classes if c.members[0] in members
    ]
    return sum(
        (x[i] for i in poset.maximal_within(inside)), start=Fraction(0)
    )


def beta_of_class_set(G: AbelianGroup, elements: Iterable[int]) -> int:
    """Sum of 1/phi(order) over a class-closed element set; always an integer.

    Each full class contributes exactly 1 (it has phi(r) elements of order
    r), so the value is the number of classes; the function still computes
    the sum and checks integrality rather than shortcutting.
    """
    elems = set(elements)
    omega = validate_omega(G, elems)  # reuse the class-closure validation
    total = sum(
        (Fraction(1, euler_phi(G.order_of(g))) for g in omega.elements),
        start=Fraction(0),
    )
    if total.denominator != 1:
        raise OmegaError("class-closed set produced a non-integral weight")
    return total.numerator


def xi_classes(G: AbelianGroup, omega: OmegaSet) -> tuple[int, ...]:
    """Classes whose span contains a class of omega (the upward closure).

    Computed from the poset, then cross-checked against the element-level
    characterization: class i qualifies iff its cyclic span meets omega.
    """
    poset = G.class_poset()
    up = poset.up_set(omega.class_indices)
    subs = G.subgroups()
    direct = frozenset(
        c.index
        for c in poset.classes
        if omega.meets(subs[c.subgroup_id].members)
    )
    assert up == direct, "poset and element characterizations must agree"
    return tuple(sorted(up))


def beta_aggregate(
    G: AbelianGroup, x: ParamVector, omega: OmegaSet
) -> tuple[Fraction, int]:
    """Off-omega minimum x0 and the weight of the classes attaining it.

    Considers classes outside the upward closure of omega; raises
    UndefinedMinimumError when no such class exists.
    """
    poset = G.class_poset()
    xi = set(xi_classes(G, omega))
    rest = [i for i in range(len(poset)) if i not in xi]
    if not rest:
        raise UndefinedMinimumError(
            "every class lies above omega; the off-omega minimum is undefined"
        )
    x0 = min(x[i] for i in rest)
    attaining = [i for i in rest if x[i] == x0]
    elements = [g for i in attaining for g in poset.classes[i].members]
    return x0, beta_of_class_set(G, elements)


def euler_phi(n: int) -> int:
    """Euler totient of n by trial-division factorization."""
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result
