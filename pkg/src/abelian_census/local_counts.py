"""Hom/sur counts from the local unit models into subgroups.

The completion at a prime p contributes a finite abelian source group:

* tame p (p does not divide |G|): one cyclic factor of order p - 1 — only
  the tame quotient can map nontrivially into G;
* wild odd p: C_(p-1) x C_(p^v) with v the p-part of the exponent of G
  (higher p-power torsion in the source cannot be seen by G);
* wild p = 2: C_2 x C_(2^v).

Hom counts are products over source factors of the number of elements of
dividing order.  Surjection counts onto a subgroup H follow by inclusion-
exclusion over H's subgroup lattice; for tame primes this collapses to the
closed form phi(|H|) when H is cyclic of order dividing p - 1, else 0.

Tame counts depend on p only through p mod |G| (orders of subgroup elements
divide |G|), which is how the memo table is keyed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .errors import DomainError
from .groups import AbelianGroup, euler_phi

__all__ = [
    "LocalUnitModel",
    "local_unit_model",
    "hom_count",
    "sur_count",
    "wild_images",
    "SurTable",
]


@dataclass(frozen=True)
class LocalUnitModel:
    """The source group at prime p, as a tuple of cyclic factor orders."""

    p: int
    wild: bool
    cyclic_factors: tuple[int, ...]


def local_unit_model(p: int, G: AbelianGroup) -> LocalUnitModel:
    """The local source group at p, truncated to what can map into G."""
    if p < 2:
        raise DomainError(f"p must be a prime, got {p}")
    if G.order % p:
        return LocalUnitModel(p=p, wild=False, cyclic_factors=(p - 1,))
    v = 0
    e = G.exponent
    while e % p == 0:
        e //= p
        v += 1
    head = 2 if p == 2 else p - 1
    return LocalUnitModel(p=p, wild=True, cyclic_factors=(head, p**v))


def hom_count(G: AbelianGroup, p: int, sub_id: int) -> int:
    """Number of homomorphisms from the local model at p into subgroup sub_id."""
    return SurTable(G).hom(p, sub_id)


def sur_count(G: AbelianGroup, p: int, sub_id: int) -> int:
    """Number of homomorphisms from the local model at p onto subgroup sub_id."""
    return SurTable(G).sur(p, sub_id)


def wild_images(p: int, G: AbelianGroup) -> tuple[int, ...]:
    """Subgroup ids attainable as local images at a wild prime p (sur > 0).

    Requires p | |G|; includes the trivial subgroup.  The local model has
    two cyclic factors, so subgroups needing more than two generators never
    appear.
    """
    if G.order % p:
        raise DomainError(
            f"wild_images needs p dividing |G| = {G.order}, got p = {p}"
        )
    table = SurTable(G)
    return tuple(
        s.id for s in G.subgroups() if table.sur(p, s.id) > 0
    )


class SurTable:
    """Memoized local hom/sur counts for one group.

    One instance is cached per AbelianGroup, so repeated constructions are
    cheap.  Tame entries are keyed by (p mod |G|, subgroup id); wild entries
    by (p, subgroup id).
    """

    def __new__(cls, G: AbelianGroup):
        existing = getattr(G, "_sur_table", None)
        if existing is not None:
            return existing
        table = super().__new__(cls)
        table._init(G)
        G._sur_table = table
        return table

    def _init(self, G: AbelianGroup) -> None:
        self.G = G
        self._hom_tame: dict[tuple[int, int], int] = {}
        self._sur_wild: dict[tuple[int, int], int] = {}
        self._orders_in: dict[int, list[int]] = {}

    def _member_orders(self, sub_id: int) -> list[int]:
        cached = self._orders_in.get(sub_id)
        if cached is None:
            members = self.G.subgroups()[sub_id].members
            cached = [self.G.order_of(g) for g in members]
            self._orders_in[sub_id] = cached
        return cached

    def _torsion_count(self, sub_id: int, f: int) -> int:
        """#{h in H : order(h) divides f} = #Hom(C_f, H)."""
        return sum(1 for r in self._member_orders(sub_id) if f % r == 0)

    def hom(self, p: int, sub_id: int) -> int:
        model = local_unit_model(p, self.G)
        if model.wild:
            return prod(
                self._torsion_count(sub_id, f) for f in model.cyclic_factors
            )
        key = (p % self.G.order, sub_id)
        hit = self._hom_tame.get(key)
        if hit is None:
            hit = self._torsion_count(sub_id, p - 1)
            self._hom_tame[key] = hit
        return hit

    def sur(self, p: int, sub_id: int) -> int:
        G = self.G
        sub = G.subgroups()[sub_id]
        if sub.order == 1:
            return 1
        model = local_unit_model(p, G)
        if not model.wild:
            # Image of a cyclic source is cyclic; a generator must land on a
            # generator of H, and those exist iff |H| divides p - 1.
            if sub.is_cyclic and (p - 1) % sub.order == 0:
                return euler_phi(sub.order)
            return 0
        key = (p, sub_id)
        hit = self._sur_wild.get(key)
        if hit is None:
            hit = self._sur_wild_uncached(p, sub_id)
            self._sur_wild[key] = hit
        return hit

    def _sur_wild_uncached(self, p: int, sub_id: int) -> int:
        G = self.G
        # A quotient of a 2-generated abelian group is 2-generated.
        if G.min_generator_count(sub_id) > 2:
            return 0
        total = self.hom(p, sub_id)
        for other in G.subgroup_ids_within(sub_id):
            if other != sub_id:
                total -= self.sur(p, other)
        return total
