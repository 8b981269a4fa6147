"""Finite right M-sets: continuity analysis, the continuous-part
coreflection, the powerset action, and categorical constructions.

act[x][m] is the result of letting monoid element m act on carrier point x.
Sub-M-sets are bitmasks over the parent carrier; quotient carriers use
"[least-representative]" names.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .congruences import RightCongruence, _canonical, _check_right_stable
from .errors import CapExceeded, InternalCheckError, TopactError
from .monoid import BadShape, FiniteMonoid
from .topology import Topology, is_continuous
from .util import bits, mask_of, render_subset


class NotAnAction(TopactError):
    """The table violates the unit or associativity law."""


class NotEquivariantMap(TopactError):
    def __init__(self, x: int, m: int):
        super().__init__(f"map breaks equivariance at carrier {x}, element {m}")
        self.witness = (x, m)


class NotContinuousInput(TopactError):
    """Exponentials require continuous inputs."""


@dataclass(frozen=True)
class MSet:
    monoid: FiniteMonoid
    carrier: tuple[str, ...]
    act: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.carrier)

    def apply(self, x: int, m: int) -> int:
        return self.act[x][m]

    def __repr__(self) -> str:
        return f"MSet({'|'.join(self.carrier)} over {self.monoid!r})"


@dataclass(frozen=True)
class MSetHom:
    source: MSet
    target: MSet
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]


def validate_mset(monoid: FiniteMonoid, carrier: Sequence[str],
                  act: Sequence[Sequence[int]]) -> MSet:
    names = tuple(carrier)
    if len(set(names)) != len(names):
        raise BadShape("carrier names are not unique")
    if len(act) != len(names):
        raise BadShape(f"action has {len(act)} rows for {len(names)} carrier points")
    table = tuple(tuple(row) for row in act)
    for x, row in enumerate(table):
        if len(row) != monoid.order:
            raise BadShape(f"action row {x} has length {len(row)}")
        for v in row:
            if not (0 <= v < len(names)):
                raise BadShape(f"action value {v} out of carrier range")
    for x in range(len(names)):
        if table[x][monoid.identity] != x:
            raise NotAnAction(f"identity moves carrier point {x}")
        for m in range(monoid.order):
            for n in range(monoid.order):
                if table[table[x][m]][n] != table[x][monoid.table[m][n]]:
                    raise NotAnAction(
                        f"associativity fails at point {x}, elements ({m}, {n})")
    return MSet(monoid, names, table)


def validate_mset_hom(source: MSet, target: MSet,
                      mapping: Sequence[int]) -> MSetHom:
    m = tuple(mapping)
    if len(m) != source.size:
        raise BadShape("hom is not total on the source carrier")
    for x in range(source.size):
        for g in range(source.monoid.order):
            if m[source.act[x][g]] != target.act[m[x]][g]:
                raise NotEquivariantMap(x, g)
    return MSetHom(source, target, m)


def regular_mset(monoid: FiniteMonoid) -> MSet:
    """M acting on itself by right multiplication."""
    return MSet(monoid, monoid.elements, monoid.table)


def terminal_mset(monoid: FiniteMonoid) -> MSet:
    return MSet(monoid, ("*",), ((0,) * monoid.order,))


def necessary_clopen(mset: MSet, x: int, p: int) -> int:
    """The subset of monoid elements acting on x like p does."""
    target = mset.act[x][p]
    return mask_of(m for m in range(mset.monoid.order) if mset.act[x][m] == target)


def orbit_congruence(mset: MSet, x: int) -> RightCongruence:
    """Partition of M by the orbit map m ↦ x·m; stability is re-verified."""
    cong = RightCongruence(mset.monoid, _canonical(mset.act[x]))
    _check_right_stable(cong)
    return cong


def is_continuous_mset(mset: MSet, topology: Topology
                       ) -> tuple[bool, Optional[tuple[int, int]]]:
    """True when every necessary clopen is open; otherwise a witness (x, p)."""
    for x in range(mset.size):
        for p in range(mset.monoid.order):
            if not topology.is_open(necessary_clopen(mset, x, p)):
                return False, (x, p)
    return True, None


def left_translations_continuous(monoid: FiniteMonoid, topology: Topology) -> bool:
    return all(is_continuous(monoid.table[q], topology, topology)
               for q in range(monoid.order))


def continuous_part(mset: MSet, topology: Topology) -> int:
    """Bitmask of the largest continuous sub-M-set: points all of whose
    translates have open necessary clopens.

    The general formula quantifies over translates x·q.  When the topology
    makes left translation continuous the one-point formula must agree; a
    mismatch is an engine bug.
    """
    general = 0
    for x in range(mset.size):
        if all(topology.is_open(necessary_clopen(mset, mset.act[x][q], p))
               for q in range(mset.monoid.order)
               for p in range(mset.monoid.order)):
            general |= 1 << x
    if left_translations_continuous(mset.monoid, topology):
        simple = 0
        for x in range(mset.size):
            if all(topology.is_open(necessary_clopen(mset, x, p))
                   for p in range(mset.monoid.order)):
                simple |= 1 << x
        if simple != general:
            raise InternalCheckError(
                "simplified continuous-part formula disagrees with the general one")
    return general


def restrict_mset(mset: MSet, mask: int) -> MSet:
    """Sub-M-set on the masked carrier points; the mask must be closed
    under the action."""
    members = list(bits(mask))
    pos = {x: i for i, x in enumerate(members)}
    for x in members:
        for m in range(mset.monoid.order):
            if mset.act[x][m] not in pos:
                raise NotAnAction(f"subset not closed under the action at point {x}")
    act = tuple(tuple(pos[mset.act[x][m]] for m in range(mset.monoid.order))
                for x in members)
    return MSet(mset.monoid, tuple(mset.carrier[x] for x in members), act)


def power_mset(monoid: FiniteMonoid, left_act: Sequence[Sequence[int]],
               point_names: Sequence[str]) -> MSet:
    """Right action on the powerset of a left M-set: a subset A moves to
    {x : g·x in A}."""
    k = len(point_names)
    for x in range(k):
        if left_act[monoid.identity][x] != x:
            raise NotAnAction(f"left identity moves point {x}")
        for g in range(monoid.order):
            for h in range(monoid.order):
                if left_act[g][left_act[h][x]] != left_act[monoid.table[g][h]][x]:
                    raise NotAnAction(
                        f"left associativity fails at point {x}, elements ({g}, {h})")
    names = tuple(render_subset(a, tuple(point_names)) for a in range(1 << k))
    act = []
    for a in range(1 << k):
        act.append(tuple(
            mask_of(x for x in range(k) if a >> left_act[g][x] & 1)
            for g in range(monoid.order)))
    return MSet(monoid, names, tuple(act))


@lru_cache(maxsize=None)
def power_of_m(monoid: FiniteMonoid) -> MSet:
    """The powerset of M under the inverse-image action of left
    multiplication; carrier index i is the subset with bitmask i."""
    return power_mset(monoid, monoid.table, monoid.elements)


@lru_cache(maxsize=None)
def power_of_m_squared(monoid: FiniteMonoid) -> MSet:
    """Powerset of M x M (diagonal left action), hosting the relations."""
    n = monoid.order
    left = [[monoid.table[g][a] * n + monoid.table[g][b]
             for a in range(n) for b in range(n)]
            for g in range(n)]
    names = [f"({monoid.elements[a]},{monoid.elements[b]})"
             for a in range(n) for b in range(n)]
    return power_mset(monoid, left, names)


@dataclass(frozen=True)
class SubobjectClassifier:
    """Right ideals of M with the inverse-image action, and the retraction
    sending a subset to the right ideal it generates."""

    mset: MSet
    ideal_masks: tuple[int, ...]
    retraction: tuple[int, ...]


def subobject_classifier(monoid: FiniteMonoid) -> SubobjectClassifier:
    power = power_of_m(monoid)
    n = monoid.order
    ideals = []
    for a in range(1 << n):
        if all(a >> monoid.table[x][m] & 1
               for x in bits(a) for m in range(n)):
            ideals.append(a)
    pos = {a: i for i, a in enumerate(ideals)}
    for a in ideals:
        for g in range(n):
            if power.act[a][g] not in pos:
                raise InternalCheckError("inverse image action left the right ideals")
    act = tuple(tuple(pos[power.act[a][g]] for g in range(n)) for a in ideals)
    omega = MSet(monoid, tuple(power.carrier[a] for a in ideals), act)
    retraction = tuple(
        mask_of(monoid.table[x][m] for x in bits(a) for m in range(n))
        for a in range(1 << n))
    return SubobjectClassifier(omega, tuple(ideals), retraction)


def quotient_mset(monoid: FiniteMonoid, r: RightCongruence) -> MSet:
    """Classes of r with [m]·n = [mn]; the canonical generator is [1]."""
    reps = r.representatives()
    names = tuple(f"[{monoid.elements[m]}]" for m in reps)
    act = tuple(tuple(r.class_of[monoid.table[reps[c]][m]]
                      for m in range(monoid.order))
                for c in range(r.num_classes))
    for c, rep in enumerate(reps):
        for other in range(monoid.order):
            if r.class_of[other] == c:
                for m in range(monoid.order):
                    if r.class_of[monoid.table[other][m]] != act[c][m]:
                        raise InternalCheckError("quotient action not well defined")
    return MSet(monoid, names, act)


def epi_mono_factorize(hom: MSetHom) -> tuple[MSetHom, MSetHom]:
    """Surjection onto the image sub-M-set followed by its inclusion."""
    image_mask = mask_of(hom.map)
    mid = restrict_mset(hom.target, image_mask)
    members = list(bits(image_mask))
    pos = {x: i for i, x in enumerate(members)}
    first = MSetHom(hom.source, mid, tuple(pos[v] for v in hom.map))
    second = MSetHom(mid, hom.target, tuple(members))
    return first, second


def mset_product(x: MSet, y: MSet) -> MSet:
    """Componentwise action on pairs, row-major carrier order."""
    names = tuple(f"({a},{b})" for a in x.carrier for b in y.carrier)
    act = []
    for xa in range(x.size):
        for yb in range(y.size):
            act.append(tuple(x.act[xa][m] * y.size + y.act[yb][m]
                             for m in range(x.monoid.order)))
    return MSet(x.monoid, names, tuple(act))


def enumerate_mset_homs(source: MSet, target: MSet) -> tuple[tuple[int, ...], ...]:
    """All equivariant maps, by backtracking on generator images: once a
    point's image is chosen, its whole orbit is forced."""
    n = source.monoid.order
    out: list[tuple[int, ...]] = []
    assignment: list[int] = [-1] * source.size

    def propagate(x: int, y: int, trail: list[int]) -> bool:
        stack = [(x, y)]
        while stack:
            px, py = stack.pop()
            if assignment[px] >= 0:
                if assignment[px] != py:
                    return False
                continue
            assignment[px] = py
            trail.append(px)
            for m in range(n):
                stack.append((source.act[px][m], target.act[py][m]))
        return True

    def search() -> None:
        try:
            x = assignment.index(-1)
        except ValueError:
            out.append(tuple(assignment))
            return
        for y in range(target.size):
            trail: list[int] = []
            if propagate(x, y, trail):
                search()
            for px in trail:
                assignment[px] = -1

    search()
    return tuple(sorted(out))


def msets_isomorphic(a: MSet, b: MSet) -> bool:
    if a.size != b.size or a.monoid != b.monoid:
        return False
    return any(len(set(h)) == a.size for h in enumerate_mset_homs(a, b))


@dataclass(frozen=True)
class ExponentialMSet:
    """The exponential Y^X in the continuous-action category: continuous
    elements of the inner hom Hom(M x X, Y)."""

    mset: MSet
    hom_maps: tuple[tuple[int, ...], ...]
    x_size: int

    def evaluate(self, h: int, m: int, x: int) -> int:
        return self.hom_maps[h][m * self.x_size + x]


EXPONENTIAL_CARRIER_CAP = 64


def exponential_mset(x: MSet, y: MSet, topology: Topology) -> ExponentialMSet:
    """Carrier: all M-set homs M x X -> Y; m acts by precomposing the first
    component with left multiplication; then the continuous part is taken."""
    if max(x.size, y.size) > EXPONENTIAL_CARRIER_CAP:
        raise CapExceeded("exponential input carrier", max(x.size, y.size))
    if not is_continuous_mset(x, topology)[0] or not is_continuous_mset(y, topology)[0]:
        raise NotContinuousInput("exponentials require continuous inputs")
    monoid = x.monoid
    base = mset_product(regular_mset(monoid), x)
    homs = enumerate_mset_homs(base, y)
    index = {h: i for i, h in enumerate(homs)}
    act = []
    for h in homs:
        row = []
        for m in range(monoid.order):
            moved = tuple(h[monoid.table[m][nn] * x.size + p]
                          for nn in range(monoid.order) for p in range(x.size))
            if moved not in index:
                raise InternalCheckError("hom set not closed under the action")
            row.append(index[moved])
        act.append(tuple(row))
    ambient = MSet(monoid, tuple(f"f{i}" for i in range(len(homs))), tuple(act))
    mask = continuous_part(ambient, topology)
    members = list(bits(mask))
    return ExponentialMSet(restrict_mset(ambient, mask),
                           tuple(homs[i] for i in members), x.size)
