"""Structure constants of a census configuration.

delta_x is the least number of "expensive" omega-meeting tame primes any
generating family of local images must contain, where a cyclic image H is
expensive when H meets omega and x(H) exceeds the smallest parameter.
gamma_x is the least total number of omega-meeting tame primes among
delta-minimizing families.  Both control the log log power of the census
asymptotics, and both are computed exactly by breadth-first search over the
subgroup lattice: tame slot types are cyclic subgroups (a type may be used
at any number of distinct primes), wild primes contribute one attainable
image each, and joins are memoized on the lattice.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from .errors import (
    DomainError,
    NotApplicableError,
    UndefinedMinimumError,
    WitnessNotFoundError,
)
from .groups import (
    AbelianGroup,
    OmegaSet,
    ParamVector,
    beta_aggregate,
    xi_classes,
    x_of_subgroup,
)
from .local_counts import wild_images
from .profiles import RamificationProfile, _is_prime

__all__ = [
    "GeneratingFamily",
    "StructureReport",
    "TauWitness",
    "delta_of_family",
    "gamma_of_family",
    "delta_x",
    "gamma_x",
    "tau_witness",
    "admissible_partitions",
    "conjecture_classifier",
    "realize_family",
    "structure_report",
]


@dataclass(frozen=True)
class GeneratingFamily:
    """A wild image choice plus a multiset of tame cyclic slot types.

    ``wild_part`` lists (prime, subgroup id) with nontrivial image only;
    ``tame_slots`` lists cyclic subgroup ids, one per hypothetical tame
    prime (repeats mean distinct primes with the same inertia type).
    """

    wild_part: tuple[tuple[int, int], ...]
    tame_slots: tuple[int, ...]


def _family_join(G: AbelianGroup, fam: GeneratingFamily) -> int:
    jid = 0
    for _, sid in fam.wild_part:
        jid = G.join_id(jid, sid)
    for sid in fam.tame_slots:
        jid = G.join_id(jid, sid)
    return jid


def _slot_kinds(
    G: AbelianGroup, x: ParamVector, omega: OmegaSet
) -> tuple[list[int], list[int], list[int], Fraction]:
    """Split cyclic class subgroups into (non-xi, cheap-xi, expensive)."""
    poset = G.class_poset()
    xi = set(xi_classes(G, omega))
    x1 = min(x.values)
    non_xi, cheap_xi, expensive = [], [], []
    for c in poset.classes:
        if c.index not in xi:
            non_xi.append(c.subgroup_id)
        elif x[c.index] == x1:
            cheap_xi.append(c.subgroup_id)
        else:
            expensive.append(c.subgroup_id)
    return sorted(non_xi), sorted(cheap_xi), sorted(expensive), x1


def _wild_combos(G: AbelianGroup) -> list[tuple[tuple[tuple[int, int], ...], int]]:
    """All wild image combinations as (wild_part, join id), deterministic order."""
    wild_primes = [p for p in range(2, G.order + 1) if G.order % p == 0 and _is_prime(p)]
    per_prime = []
    for p in wild_primes:
        per_prime.append([(p, sid) for sid in wild_images(p, G)])  # includes trivial
    combos = []
    for choice in product(*per_prime) if per_prime else [()]:
        part = tuple((p, sid) for p, sid in choice if sid != 0)
        jid = 0
        for _, sid in part:
            jid = G.join_id(jid, sid)
        combos.append((part, jid))
    return combos


def delta_of_family(
    G: AbelianGroup, fam: GeneratingFamily, x: ParamVector, omega: OmegaSet
) -> int:
    """Number of expensive omega-meeting tame slots in a generating family."""
    if _family_join(G, fam) != G.full_subgroup_id:
        raise DomainError("family does not generate the group")
    subs = G.subgroups()
    x1 = min(x.values)
    count = 0
    for sid in fam.tame_slots:
        sub = subs[sid]
        if omega.meets(sub.members) and x_of_subgroup(G, sid, x) > x1:
            count += 1
    return count


def gamma_of_family(G: AbelianGroup, fam: GeneratingFamily, omega: OmegaSet) -> int:
    """Number of omega-meeting tame slots (wild images never count)."""
    subs = G.subgroups()
    return sum(1 for sid in fam.tame_slots if omega.meets(subs[sid].members))


def _min_expensive_path(
    G: AbelianGroup, start: int, expensive: list[int]
) -> tuple[int, tuple[int, ...]] | None:
    """BFS: least number of expensive slot types joining ``start`` up to G."""
    full = G.full_subgroup_id
    if start == full:
        return 0, ()
    dist: dict[int, tuple[int, ...]] = {start: ()}
    frontier = deque([start])
    while frontier:
        sid = frontier.popleft()
        path = dist[sid]
        for t in expensive:
            nxt = G.join_id(sid, t)
            if nxt not in dist:
                dist[nxt] = path + (t,)
                if nxt == full:
                    return len(dist[nxt]), dist[nxt]
                frontier.append(nxt)
    return None


def _minimize_cheap(
    G: AbelianGroup, kept: list[int], fixed_join: int
) -> list[int]:
    """Drop cheap slots (descending id) while the family still generates."""
    full = G.full_subgroup_id

    def total(slots: list[int]) -> int:
        jid = fixed_join
        for s in slots:
            jid = G.join_id(jid, s)
        return jid

    slots = sorted(kept)
    for sid in sorted(kept, reverse=True):
        trial = [s for s in slots if s != sid]
        if total(trial) == full:
            slots = trial
    return slots


def delta_x(
    G: AbelianGroup, x: ParamVector, omega: OmegaSet
) -> tuple[int, GeneratingFamily]:
    """Exact minimum of delta over generating families, with a witness."""
    non_xi, cheap_xi, expensive, _ = _slot_kinds(G, x, omega)
    cheap = sorted(non_xi + cheap_xi)
    cheap_join = 0
    for sid in cheap:
        cheap_join = G.join_id(cheap_join, sid)
    best: tuple[int, int, tuple, tuple[int, ...]] | None = None
    path_memo: dict[int, tuple[int, tuple[int, ...]] | None] = {}
    for combo_id, (part, jid) in enumerate(_wild_combos(G)):
        start = G.join_id(cheap_join, jid)
        if start not in path_memo:
            path_memo[start] = _min_expensive_path(G, start, expensive)
        hit = path_memo[start]
        if hit is None:
            continue
        d, path = hit
        if best is None or d < best[0]:
            best = (d, combo_id, part, path)
            if d == 0:
                break
    if best is None:
        raise WitnessNotFoundError("no generating family exists")
    d, _, part, path = best
    wild_join = 0
    for _, sid in part:
        wild_join = G.join_id(wild_join, sid)
    for sid in path:
        wild_join = G.join_id(wild_join, sid)
    kept_cheap = _minimize_cheap(G, cheap, wild_join)
    fam = GeneratingFamily(wild_part=part, tame_slots=tuple(sorted(kept_cheap + list(path))))
    assert delta_of_family(G, fam, x, omega) == d
    return d, fam


def gamma_x(
    G: AbelianGroup, x: ParamVector, omega: OmegaSet
) -> tuple[int, GeneratingFamily]:
    """Least omega-meeting tame slot count among delta-minimizing families."""
    d_min, _ = delta_x(G, x, omega)
    non_xi, cheap_xi, expensive, _ = _slot_kinds(G, x, omega)
    avoid_join = 0
    for sid in non_xi:
        avoid_join = G.join_id(avoid_join, sid)
    full = G.full_subgroup_id
    meeting = [(t, 0) for t in cheap_xi] + [(t, 1) for t in expensive]
    meeting.sort()
    best: tuple[int, int, tuple, tuple[int, ...]] | None = None
    seen_starts: dict[int, tuple[int, tuple[int, ...]] | None] = {}
    for combo_id, (part, jid) in enumerate(_wild_combos(G)):
        start = G.join_id(avoid_join, jid)
        if start not in seen_starts:
            seen_starts[start] = _bfs_gamma(G, start, meeting, d_min, full)
        hit = seen_starts[start]
        if hit is None:
            continue
        g, path = hit
        if best is None or g < best[0]:
            best = (g, combo_id, part, path)
            if g == 0:
                break
    if best is None:
        raise WitnessNotFoundError("no delta-minimizing family found")
    g, _, part, path = best
    fixed = 0
    for _, sid in part:
        fixed = G.join_id(fixed, sid)
    for sid in path:
        fixed = G.join_id(fixed, sid)
    kept = _minimize_cheap(G, non_xi, fixed)
    fam = GeneratingFamily(wild_part=part, tame_slots=tuple(sorted(kept + list(path))))
    assert delta_of_family(G, fam, x, omega) == d_min
    assert gamma_of_family(G, fam, omega) == g
    return g, fam


def _bfs_gamma(
    G: AbelianGroup,
    start: int,
    meeting: list[tuple[int, int]],
    d_cap: int,
    full: int,
) -> tuple[int, tuple[int, ...]] | None:
    """BFS over (subgroup, expensive-used): fewest meeting slots to reach G."""
    if start == full:
        return 0, ()
    dist: dict[tuple[int, int], tuple[int, ...]] = {(start, 0): ()}
    frontier = deque([(start, 0)])
    while frontier:
        sid, e = frontier.popleft()
        path = dist[(sid, e)]
        for t, cost in meeting:
            e2 = e + cost
            if e2 > d_cap:
                continue
            key = (G.join_id(sid, t), e2)
            if key not in dist:
                dist[key] = path + (t,)
                if key[0] == full:
                    return len(dist[key]), dist[key]
                frontier.append(key)
    return None


@dataclass(frozen=True)
class TauWitness:
    """Everything the tau lower-bound series needs from one witness family.

    ``family`` generates G with delta_x expensive slots and exactly gamma
    omega-meeting slots; ``anchor`` realizes its wild part and omega-avoiding
    slots at concrete primes; ``anchor_q`` is the largest prime in the
    anchor's support (1 when unramified); ``partition`` counts the meeting
    slots per xi-class, in ascending class order.
    """

    family: GeneratingFamily
    anchor: RamificationProfile
    anchor_q: int
    partition: tuple[tuple[int, int], ...]  # (class index, multiplicity)


def tau_witness(
    G: AbelianGroup,
    x: ParamVector,
    omega: OmegaSet,
    gamma: int,
    scan_cap: int = 10**6,
) -> TauWitness:
    """A delta-minimizing family with exactly ``gamma`` omega-meeting slots.

    The family realizes both structure constants at once: exactly ``gamma``
    tame slots meet omega, of which exactly delta_x are expensive.  When
    ``gamma`` is zero the slice indicator additionally forces every wild
    image to avoid omega, so only avoiding wild combinations are searched.
    Wild combinations are tried in ascending order of their contribution to
    the invariant (then combination order), so the anchor value is small and
    the resulting lower bound tight.  Raises WitnessNotFoundError when no
    such family exists.
    """
    d_min, _ = delta_x(G, x, omega)
    g_min, _ = gamma_x(G, x, omega)
    if gamma < g_min:
        raise WitnessNotFoundError(
            f"gamma={gamma} is below gamma_x={g_min}; no witness exists"
        )
    non_xi, cheap_xi, expensive, _ = _slot_kinds(G, x, omega)
    subs = G.subgroups()
    avoid_join = 0
    for sid in non_xi:
        avoid_join = G.join_id(avoid_join, sid)
    full = G.full_subgroup_id
    meeting = sorted([(t, 0) for t in cheap_xi] + [(t, 1) for t in expensive])
    D = x.denominator_scale

    def combo_cost(part: tuple[tuple[int, int], ...]) -> int:
        return sum((x_of_subgroup(G, sid, x) * D).numerator for _, sid in part)

    combos = sorted(
        enumerate(_wild_combos(G)), key=lambda kv: (combo_cost(kv[1][0]), kv[0])
    )
    for _, (part, jid) in combos:
        if gamma == 0 and any(omega.meets(subs[sid].members) for _, sid in part):
            continue
        start = G.join_id(avoid_join, jid)
        path = _bfs_exact_gamma(G, start, meeting, d_min, gamma, full)
        if path is None:
            continue
        fixed = 0
        for _, sid in part:
            fixed = G.join_id(fixed, sid)
        for sid in path:
            fixed = G.join_id(fixed, sid)
        kept = _minimize_cheap(G, non_xi, fixed)
        fam = GeneratingFamily(
            wild_part=part, tame_slots=tuple(sorted(kept + list(path)))
        )
        assert delta_of_family(G, fam, x, omega) == d_min
        assert gamma_of_family(G, fam, omega) == gamma
        anchor_fam = GeneratingFamily(wild_part=part, tame_slots=tuple(sorted(kept)))
        anchor = realize_family(G, anchor_fam, scan_cap=scan_cap)
        anchor_q = max((p for p, _ in anchor.assignments), default=1)
        poset = G.class_poset()
        counts: dict[int, int] = {}
        for sid in path:
            ci = poset.class_of_subgroup[sid]
            counts[ci] = counts.get(ci, 0) + 1
        partition = tuple(sorted(counts.items()))
        return TauWitness(
            family=fam, anchor=anchor, anchor_q=anchor_q, partition=partition
        )
    raise WitnessNotFoundError(
        f"no delta-minimizing family with exactly {gamma} omega-meeting slots"
    )


def _bfs_exact_gamma(
    G: AbelianGroup,
    start: int,
    meeting: list[tuple[int, int]],
    d_cap: int,
    gamma: int,
    full: int,
) -> tuple[int, ...] | None:
    """Reach G with exactly ``gamma`` meeting slots, at most ``d_cap`` expensive.

    Slot types may repeat (distinct primes, same inertia type), which is how
    a shorter generating path is padded up to an exact meeting count.
    """
    if gamma == 0:
        return () if start == full else None
    states: dict[tuple[int, int, int], tuple[int, ...]] = {(start, 0, 0): ()}
    frontier = deque([(start, 0, 0)])
    while frontier:
        sid, e, m = frontier.popleft()
        if m == gamma:
            continue
        path = states[(sid, e, m)]
        for t, cost in meeting:
            e2 = e + cost
            if e2 > d_cap:
                continue
            key = (G.join_id(sid, t), e2, m + 1)
            if key not in states:
                states[key] = path + (t,)
                if key[2] == gamma and key[0] == full:
                    return states[key]
                frontier.append(key)
    return None


def realize_family(
    G: AbelianGroup, fam: GeneratingFamily, scan_cap: int = 10**6
) -> RamificationProfile:
    """Assign concrete primes to a family's tame slots, smallest first.

    Each slot of type H gets the least unused prime p with p ≡ 1 (mod |H|)
    and p coprime to |G|; such primes exist by Dirichlet, and the scan cap
    is a safety valve, not a mathematical bound.
    """
    subs = G.subgroups()
    used = {p for p, _ in fam.wild_part}
    assignments = dict(fam.wild_part)
    for sid in sorted(fam.tame_slots):
        m = subs[sid].order
        p = 2
        while True:
            if p > scan_cap:
                raise WitnessNotFoundError(
                    f"no prime ≡ 1 mod {m} found below {scan_cap}"
                )
            if (
                p not in used
                and G.order % p != 0
                and (p - 1) % m == 0
                and _is_prime(p)
            ):
                break
            p += 1
        used.add(p)
        assignments[p] = sid
    return RamificationProfile.from_dict(assignments)


def admissible_partitions(
    G: AbelianGroup, omega: OmegaSet, gamma: int
) -> list[tuple[int, ...]]:
    """All compositions of gamma over the xi-classes that can generate G.

    A composition (n_1, ..., n_u) over the xi-classes (ascending class
    order) is admissible when some attainable wild image family, all non-xi
    cyclic subgroups, and the xi-subgroups with positive part generate G.
    """
    if omega.is_empty():
        raise NotApplicableError("admissible partitions require nonempty omega")
    poset = G.class_poset()
    xi = xi_classes(G, omega)
    u = len(xi)
    non_xi_join = 0
    for c in poset.classes:
        if c.index not in xi:
            non_xi_join = G.join_id(non_xi_join, c.subgroup_id)
    wild_joins = sorted({jid for _, jid in _wild_combos(G)})
    full = G.full_subgroup_id
    support_ok: dict[frozenset[int], bool] = {}

    def admissible(support: frozenset[int]) -> bool:
        if support not in support_ok:
            base = non_xi_join
            for ci in support:
                base = G.join_id(base, poset.classes[ci].subgroup_id)
            support_ok[support] = any(
                G.join_id(base, w) == full for w in wild_joins
            )
        return support_ok[support]

    out = []
    for comp in _compositions(gamma, u):
        support = frozenset(xi[k] for k in range(u) if comp[k] > 0)
        if admissible(support):
            out.append(comp)
    return out


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints summing to ``total``, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def conjecture_classifier(
    G: AbelianGroup, x: ParamVector, omega: OmegaSet
) -> bool:
    """True iff the least xi-class parameter equals the least parameter."""
    if omega.is_empty():
        raise NotApplicableError("the classifier presumes nonempty omega")
    xi = xi_classes(G, omega)
    x_xi = min(x[i] for i in xi)
    return x_xi == min(x.values)


@dataclass(frozen=True)
class StructureReport:
    """Deterministic bundle of a configuration's structure constants."""

    group: str
    params: tuple[Fraction, ...]
    omega_classes: tuple[int, ...]
    xi: tuple[int, ...]
    x1: Fraction
    x0: Fraction | None
    beta: int | None
    delta: int
    delta_witness: GeneratingFamily
    gamma: int
    gamma_witness: GeneratingFamily
    partitions: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]
    conjecture: bool | None

    def render(self) -> str:
        lines = [
            f"group: {self.group}",
            f"params: {' '.join(str(v) for v in self.params)}",
            f"omega_classes: {[i + 1 for i in self.omega_classes]}",
            f"xi_classes: {[i + 1 for i in self.xi]}",
            f"x1: {self.x1}",
            f"x0: {self.x0 if self.x0 is not None else 'undefined'}",
            f"beta: {self.beta if self.beta is not None else 'undefined'}",
            f"delta_x: {self.delta}",
            f"delta_witness: wild={list(self.delta_witness.wild_part)} "
            f"tame_subgroups={list(self.delta_witness.tame_slots)}",
            f"gamma_x: {self.gamma}",
            f"gamma_witness: wild={list(self.gamma_witness.wild_part)} "
            f"tame_subgroups={list(self.gamma_witness.tame_slots)}",
        ]
        for g, parts in self.partitions:
            shown = " ".join("(" + ",".join(map(str, c)) + ")" for c in parts)
            lines.append(f"partitions[gamma={g}]: {shown if parts else '(none)'}")
        lines.append(
            f"conjecture: {self.conjecture if self.conjecture is not None else 'not applicable'}"
        )
        return "\n".join(lines)


def structure_report(
    G: AbelianGroup,
    x: ParamVector,
    omega: OmegaSet,
    gammas: tuple[int, ...] = (),
) -> StructureReport:
    """Compute every structure constant for one configuration."""
    d, d_wit = delta_x(G, x, omega)
    g, g_wit = gamma_x(G, x, omega)
    try:
        x0, beta = beta_aggregate(G, x, omega)
    except UndefinedMinimumError:
        x0, beta = None, None
    if omega.is_empty():
        conj = None
        partitions = tuple()
    else:
        conj = conjecture_classifier(G, x, omega)
        partitions = tuple(
            (gm, tuple(admissible_partitions(G, omega, gm))) for gm in gammas
        )
    return StructureReport(
        group=G.describe(),
        params=tuple(x.values),
        omega_classes=omega.class_indices,
        xi=xi_classes(G, omega),
        x1=min(x.values),
        x0=x0,
        beta=beta,
        delta=d,
        delta_witness=d_wit,
        gamma=g,
        gamma_witness=g_wit,
        partitions=partitions,
        conjecture=conj,
    )
