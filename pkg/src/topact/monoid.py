"""Finite monoids and semigroup homomorphisms.

Elements are indexed 0..n-1 and carry stable user-supplied names; all
computation uses indices, the I/O layer translates names.  Values are
immutable after validation, so everything here is a pure function and safe
for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import TopactError


class BadShape(TopactError):
    """Table or map is not total over the element range."""


class NonAssociative(TopactError):
    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"(a·b)·c != a·(b·c) at indices ({a}, {b}, {c})")
        self.triple = (a, b, c)


class NoIdentity(TopactError):
    """The declared identity is not two-sided neutral."""


class NotMultiplicative(TopactError):
    def __init__(self, a: int, b: int):
        super().__init__(f"map(a·b) != map(a)·map(b) at indices ({a}, {b})")
        self.pair = (a, b)


class NotIdempotent(TopactError):
    def __init__(self, e: int):
        super().__init__(f"element {e} is not idempotent")
        self.element = e


class MismatchedHoms(TopactError):
    """Conjugations need two homs with a common source and target."""


@dataclass(frozen=True)
class FiniteMonoid:
    """Named elements, a total multiplication table and an identity index.

    table[a][b] is the index of the product of elements a and b.
    """

    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def index(self, name: str) -> int:
        return self.elements.index(name)

    def is_commutative(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(a))

    def __repr__(self) -> str:
        return f"FiniteMonoid({'|'.join(self.elements)})"


@dataclass(frozen=True)
class SemigroupHom:
    """A multiplicative map between monoids; need not preserve the identity."""

    source: FiniteMonoid
    target: FiniteMonoid
    map: tuple[int, ...]
    preserves_identity: bool

    def __call__(self, a: int) -> int:
        return self.map[a]

    def then(self, other: "SemigroupHom") -> "SemigroupHom":
        if other.source is not self.target and other.source != self.target:
            raise MismatchedHoms("cannot compose: target/source mismatch")
        return validate_hom(self.source, other.target,
                            tuple(other.map[v] for v in self.map))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{self.source.elements[a]}->{self.target.elements[v]}"
                          for a, v in enumerate(self.map))
        return f"SemigroupHom({pairs})"


def validate_monoid(elements: Sequence[str], table: Sequence[Sequence[int]],
                    identity: int) -> FiniteMonoid:
    """Check shape, neutrality and associativity; return the validated monoid.

    Raises BadShape, NoIdentity, or NonAssociative with the first failing
    triple.
    """
    names = tuple(elements)
    n = len(names)
    if len(set(names)) != n:
        raise BadShape("element names are not unique")
    if len(table) != n:
        raise BadShape(f"table has {len(table)} rows for {n} elements")
    for i, row in enumerate(table):
        if len(row) != n:
            raise BadShape(f"row {i} has length {len(row)}, expected {n}")
        for v in row:
            if not (0 <= v < n):
                raise BadShape(f"entry {v} in row {i} out of range")
    tab = tuple(tuple(row) for row in table)
    if not (0 <= identity < n):
        raise BadShape(f"identity index {identity} out of range")
    for a in range(n):
        if tab[identity][a] != a or tab[a][identity] != a:
            raise NoIdentity(f"element {identity} is not neutral at {a}")
    for a in range(n):
        for b in range(n):
            ab = tab[a][b]
            row_ab = tab[ab]
            row_b = tab[b]
            for c in range(n):
                if row_ab[c] != tab[a][row_b[c]]:
                    raise NonAssociative(a, b, c)
    return FiniteMonoid(names, tab, identity)


def validate_hom(source: FiniteMonoid, target: FiniteMonoid,
                 mapping: Sequence[int]) -> SemigroupHom:
    """Check totality and multiplicativity; the identity flag is computed,
    not required (semigroup homs are first-class)."""
    m = tuple(mapping)
    if len(m) != source.order:
        raise BadShape(f"map has {len(m)} entries for {source.order} elements")
    for v in m:
        if not (0 <= v < target.order):
            raise BadShape(f"map value {v} out of range")
    for a in range(source.order):
        for b in range(source.order):
            if m[source.table[a][b]] != target.table[m[a]][m[b]]:
                raise NotMultiplicative(a, b)
    return SemigroupHom(source, target, m,
                        m[source.identity] == target.identity)


def identity_hom(monoid: FiniteMonoid) -> SemigroupHom:
    return SemigroupHom(monoid, monoid, tuple(range(monoid.order)), True)


def opposite(monoid: FiniteMonoid) -> FiniteMonoid:
    """Same carrier with the transposed table."""
    n = monoid.order
    table = tuple(tuple(monoid.table[b][a] for b in range(n)) for a in range(n))
    return FiniteMonoid(monoid.elements, table, monoid.identity)


def idempotents(monoid: FiniteMonoid) -> tuple[int, ...]:
    return tuple(e for e in range(monoid.order) if monoid.table[e][e] == e)


def corner_monoid(monoid: FiniteMonoid, e: int) -> tuple[FiniteMonoid, SemigroupHom]:
    """The monoid on {e·m·e} with identity e, plus its subsemigroup inclusion.

    The inclusion preserves the ambient identity only when e is it.
    """
    if monoid.table[e][e] != e:
        raise NotIdempotent(e)
    carrier = sorted({monoid.table[monoid.table[e][m]][e] for m in range(monoid.order)})
    pos = {m: i for i, m in enumerate(carrier)}
    table = tuple(tuple(pos[monoid.table[a][b]] for b in carrier) for a in carrier)
    corner = FiniteMonoid(tuple(monoid.elements[m] for m in carrier), table, pos[e])
    inclusion = SemigroupHom(corner, monoid, tuple(carrier), e == monoid.identity)
    return corner, inclusion


def sub_monoid(monoid: FiniteMonoid, carrier: Iterable[int],
               identity: Optional[int] = None) -> FiniteMonoid:
    """Restrict the table to a multiplicatively closed subset."""
    members = sorted(set(carrier))
    pos = {m: i for i, m in enumerate(members)}
    for a in members:
        for b in members:
            if monoid.table[a][b] not in pos:
                raise BadShape(f"subset not closed: {a}·{b} escapes")
    ident = monoid.identity if identity is None else identity
    if ident not in pos:
        raise NoIdentity("subset does not contain the requested identity")
    table = tuple(tuple(pos[monoid.table[a][b]] for b in members) for a in members)
    return FiniteMonoid(tuple(monoid.elements[m] for m in members), table, pos[ident])


def unit_indices(monoid: FiniteMonoid) -> tuple[int, ...]:
    """Elements with a two-sided inverse."""
    one = monoid.identity
    out = []
    for m in range(monoid.order):
        if any(monoid.table[m][k] == one and monoid.table[k][m] == one
               for k in range(monoid.order)):
            out.append(m)
    return tuple(out)


def units_group(monoid: FiniteMonoid) -> FiniteMonoid:
    """The largest subgroup containing the identity, as a sub-monoid."""
    return sub_monoid(monoid, unit_indices(monoid))


def is_group(monoid: FiniteMonoid) -> bool:
    return len(unit_indices(monoid)) == monoid.order


def zero_element(monoid: FiniteMonoid) -> Optional[int]:
    """The unique two-sided absorbing element, if present."""
    for z in range(monoid.order):
        if all(monoid.table[m][z] == z and monoid.table[z][m] == z
               for m in range(monoid.order)):
            return z
    return None


def conjugations(phi: SemigroupHom, psi: SemigroupHom) -> tuple[int, ...]:
    """All alpha in the common target with alpha·phi(1) = alpha = psi(1)·alpha
    and alpha·phi(m) = psi(m)·alpha for every m."""
    if phi.source != psi.source or phi.target != psi.target:
        raise MismatchedHoms("conjugations need a common source and target")
    tgt = phi.target
    src = phi.source
    e_phi = phi.map[src.identity]
    e_psi = psi.map[src.identity]
    out = []
    for alpha in range(tgt.order):
        if tgt.table[alpha][e_phi] != alpha or tgt.table[e_psi][alpha] != alpha:
            continue
        if all(tgt.table[alpha][phi.map[m]] == tgt.table[psi.map[m]][alpha]
               for m in range(src.order)):
            out.append(alpha)
    return tuple(out)


def factor_surjection_inclusion(phi: SemigroupHom) -> tuple[SemigroupHom, SemigroupHom]:
    """Factor a semigroup hom as a monoid hom onto the corner at phi(1)
    followed by the corner's subsemigroup inclusion."""
    e = phi.map[phi.source.identity]
    corner, inclusion = corner_monoid(phi.target, e)
    lookup = {v: i for i, v in enumerate(inclusion.map)}
    first = validate_hom(phi.source, corner, tuple(lookup[v] for v in phi.map))
    return first, inclusion
