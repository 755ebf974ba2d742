"""Local hom/sur counts against brute force, plus their arithmetic laws."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import abelian_census as ac
from abelian_census.errors import DomainError

import _oracles as orc

GROUPS = [(2,), (3,), (4,), (2, 2), (6,), (2, 4), (3, 3), (2, 2, 2), (12,)]
PRIMES = [2, 3, 5, 7, 11, 13]


def _members(G, s):
    return frozenset(G.elements[i] for i in s.members)


# -- brute-force equivalence -------------------------------------------------------


@pytest.mark.parametrize("factors", GROUPS)
def test_counts_match_brute_force(factors):
    G = ac.make_group(factors)
    f = list(G.invariant_factors)
    for p in PRIMES:
        model = orc.local_model_factors(p, f)
        for s in G.subgroups():
            assert ac.hom_count(G, p, s.id) == orc.brute_hom_count(model, _members(G, s), f)
            assert ac.sur_count(G, p, s.id) == orc.brute_sur_count(model, _members(G, s), f)


@pytest.mark.parametrize("factors", GROUPS)
def test_local_unit_model_matches_oracle(factors):
    G = ac.make_group(factors)
    f = list(G.invariant_factors)
    for p in PRIMES:
        m = ac.local_unit_model(p, G)
        assert m.p == p
        assert m.wild == (G.order % p == 0)
        assert tuple(m.cyclic_factors) == orc.local_model_factors(p, f)


# -- structural laws ---------------------------------------------------------------


def test_tame_sur_is_phi_or_zero():
    G = ac.make_group((12,))
    for p in (5, 7, 11, 13, 17, 19, 23):
        if G.order % p == 0:
            continue
        for s in G.subgroups():
            want = ac.euler_phi(s.order) if s.is_cyclic and (p - 1) % s.order == 0 else 0
            assert ac.sur_count(G, p, s.id) == want


def test_tame_noncyclic_never_reached():
    G = ac.make_group((2, 2))
    assert ac.sur_count(G, 5, G.full_subgroup_id) == 0
    assert ac.sur_count(G, 13, G.full_subgroup_id) == 0


def test_wild_images_requires_wild_prime():
    G = ac.make_group((2, 2))
    with pytest.raises(DomainError):
        ac.wild_images(5, G)


@pytest.mark.parametrize("factors", GROUPS)
def test_wild_images_are_the_nonzero_sur_targets(factors):
    G = ac.make_group(factors)
    for p in (q for q in PRIMES if G.order % q == 0):
        ids = set(ac.wild_images(p, G))
        for s in G.subgroups():
            assert (s.id in ids) == (ac.sur_count(G, p, s.id) > 0)


# -- Moebius / hom-sur consistency --------------------------------------------------


def _wild_primes(order):
    return [p for p in range(2, order + 1) if order % p == 0 and all(p % d for d in range(2, p))]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(orc.all_abelian_groups(36)))
def test_property_moebius_consistency_wild(factors):
    G = ac.make_group(factors)
    for p in _wild_primes(G.order):
        for h in G.subgroups():
            total = sum(
                ac.sur_count(G, p, k) for k in G.subgroup_ids_within(h.id)
            )
            assert total == ac.hom_count(G, p, h.id)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(orc.all_abelian_groups(20)),
    st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23, 29]),
)
def test_property_moebius_consistency_tame(factors, p):
    G = ac.make_group(factors)
    if G.order % p == 0:
        return
    for h in G.subgroups():
        total = sum(ac.sur_count(G, p, k) for k in G.subgroup_ids_within(h.id))
        assert total == ac.hom_count(G, p, h.id)


def test_hom_full_group_counts_all_local_maps():
    # for tame p the model is cyclic of order p-1: hom(G) = #solutions of
    # g^(p-1) = id, i.e. the number of elements of order dividing p-1
    G = ac.make_group((6,))
    for p in (5, 7, 11, 13):
        want = sum(1 for i in range(G.order) if (p - 1) % G.order_of(i) == 0)
        assert ac.hom_count(G, p, G.full_subgroup_id) == want


# -- tame periodicity ---------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(orc.all_abelian_groups(16)))
def test_property_tame_periodicity_mod_group_order(factors):
    G = ac.make_group(factors)
    N = G.order
    tame = [p for p in orc.small_primes(300) if N % p]
    by_residue: dict[int, tuple] = {}
    for p in tame:
        sig = tuple(
            (ac.hom_count(G, p, s.id), ac.sur_count(G, p, s.id)) for s in G.subgroups()
        )
        r = p % N
        if r in by_residue:
            assert by_residue[r] == sig
        else:
            by_residue[r] = sig
