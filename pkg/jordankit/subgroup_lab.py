"""Structural analysis of explicit finite groups.

Sylow subgroups, subgroup and normal-subgroup enumeration, the
brute-force oracle for the largest normal abelian p'-subgroup and the
Chermak-Delgado subgroup.  ``p = 0`` means "no characteristic": the
p'-condition is vacuous and Sylow 0-subgroups are trivial.
"""
from dataclasses import dataclass

import numpy as np
from sympy import isprime, multiplicity

from .groups import FiniteGroup, Subgroup
from .primitives import element_order

DEFAULT_SUBGROUP_LIMIT = 400
DEFAULT_ORACLE_LIMIT = 2000


class EnumerationLimitError(Exception):
    def __init__(self, order: int, limit: int):
        super().__init__(f"group of order {order} is above the enumeration limit {limit}")
        self.order = order
        self.limit = limit


@dataclass
class SylowWitness:
    prime: int
    subgroup: Subgroup
    is_normal: bool

    @property
    def order(self) -> int:
        return self.subgroup.order


@dataclass
class OracleResult:
    """Largest normal abelian p'-subgroup, and how many candidates qualified."""
    subgroup: Subgroup
    index: int
    search_space: int
    normal_subgroups_scanned: int


def _check_p(p: int):
    if p != 0 and not isprime(p):
        raise ValueError(f"p must be a prime or 0, got {p}")


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n (1 when p is 0)."""
    if p == 0 or n % p:
        return 1
    return p ** multiplicity(p, n)


def _is_power_of(n: int, p: int) -> bool:
    return n == p_part(n, p)


def is_p_prime(g, p: int) -> bool:
    """True iff p does not divide the order of g (always true for p = 0)."""
    _check_p(p)
    return p == 0 or len(g) % p != 0


def sylow(g: FiniteGroup, p: int) -> SylowWitness:
    """A Sylow p-subgroup, grown greedily from p-elements.

    Passes over the p-elements repeat until nothing can be adjoined, so the
    result is a maximal p-subgroup, hence Sylow.  The order is still checked
    and enumeration takes over if it is ever short.
    """
    _check_p(p)
    if p == 0 or g.order % p:
        return SylowWitness(p, g.trivial_subgroup(), True)
    target = p_part(g.order, p)
    orders = g.element_orders
    p_elements = [x for x in range(len(g)) if orders[x] > 1 and _is_power_of(int(orders[x]), p)]

    gens = []
    mask = g._generate(gens)
    changed = True
    while changed and mask.sum() < target:
        changed = False
        for x in p_elements:
            if mask[x]:
                continue
            grown = g._generate(gens + [x], limit=target)
            if grown is not None and _is_power_of(int(grown.sum()), p):
                gens.append(x)
                mask = grown
                changed = True
                if mask.sum() == target:
                    break

    if mask.sum() == target:
        sub = Subgroup(g, mask, gens, verify=False)
    else:
        sub = next(s for s in enumerate_subgroups(g) if s.order == target)
    return SylowWitness(p, sub, sub.is_normal())


def enumerate_subgroups(g: FiniteGroup, limit: int = DEFAULT_SUBGROUP_LIMIT) -> list:
    """Every subgroup of g exactly once, in canonical mask order.

    Cyclic extension: start from the trivial group and keep adjoining
    generators of cyclic subgroups until no new subgroup appears.
    """
    if g.order > limit:
        raise EnumerationLimitError(g.order, limit)
    cyclic = {}
    for x in range(len(g)):
        cyclic.setdefault(g._generate([x]).tobytes(), x)
    cyclic_gens = list(cyclic.values())

    trivial = g._generate([])
    found = {trivial.tobytes(): (trivial, [])}
    queue = [(trivial, [])]
    while queue:
        mask, gens = queue.pop()
        for x in cyclic_gens:
            if mask[x]:
                continue
            extended = g._generate(gens + [x])
            key = extended.tobytes()
            if key not in found:
                found[key] = (extended, gens + [x])
                queue.append((extended, gens + [x]))

    subgroups = [Subgroup(g, m, gens, verify=False) for m, gens in found.values()]
    subgroups.sort(key=lambda s: s.key)
    return subgroups


def normal_subgroups(g: FiniteGroup, limit: int = DEFAULT_ORACLE_LIMIT) -> list:
    """Every normal subgroup of g, in canonical mask order.

    A normal subgroup is the join of the normal closures of its elements,
    so joining class closures from the trivial group reaches all of them.
    """
    if g.order > limit:
        raise EnumerationLimitError(g.order, limit)
    closures = {}
    for cls in g.conjugacy_classes():
        ncl = g.normal_closure(cls[:1])
        closures.setdefault(ncl.mask.tobytes(), ncl)
    atoms = list(closures.values())

    trivial = g.trivial_subgroup()
    found = {trivial.mask.tobytes(): trivial}
    queue = [trivial]
    while queue:
        current = queue.pop()
        for atom in atoms:
            if atom.is_subgroup_of(current):
                continue
            joined = g.subgroup(list(current.generators) + list(atom.generators))
            key = joined.mask.tobytes()
            if key not in found:
                found[key] = joined
                queue.append(joined)
    return sorted(found.values(), key=lambda s: s.key)


def minimal_index_normal_abelian(g: FiniteGroup, p: int, limit: int = DEFAULT_ORACLE_LIMIT) -> OracleResult:
    """Largest normal abelian p'-subgroup of g; ties go to the smallest mask."""
    _check_p(p)
    normals = normal_subgroups(g, limit)
    candidates = [
        n for n in normals
        if n.is_abelian() and (p == 0 or n.order % p)
    ]
    best = min(candidates, key=lambda s: (-s.order, s.key))
    return OracleResult(best, g.order // best.order, len(candidates), len(normals))


def chermak_delgado_measure(h: Subgroup) -> int:
    """|H| * |C_G(H)|"""
    return h.order * h.parent.centralizer(h).order


def chermak_delgado(g: FiniteGroup, limit: int = DEFAULT_SUBGROUP_LIMIT) -> Subgroup:
    """Least member of the Chermak-Delgado lattice of g.

    The subgroups of maximal measure form a lattice closed under
    intersection, so the least member is the intersection of all of them.
    """
    subgroups = enumerate_subgroups(g, limit)
    measures = [chermak_delgado_measure(s) for s in subgroups]
    best = max(measures)
    members = [s for s, m in zip(subgroups, measures) if m == best]
    mask = np.logical_and.reduce([s.mask for s in members])
    return Subgroup(g, mask)


def pprime_part_of_center(g: FiniteGroup, p: int) -> Subgroup:
    """Elements of the centre whose order is prime to p."""
    _check_p(p)
    center = g.center()
    if p == 0:
        return center
    if g.has_table:
        orders = g.element_orders[center.members]
    else:
        orders = np.array([element_order(g.elements[z]) for z in center.members])
    mask = np.zeros(len(g), dtype=bool)
    mask[center.members[orders % p != 0]] = True
    return Subgroup(g, mask, verify=g.has_table)


def oracle_report(g: FiniteGroup, p: int, limit: int = DEFAULT_ORACLE_LIMIT) -> dict:
    result = minimal_index_normal_abelian(g, p, limit)
    return {
        "group_digest": g.digest,
        "p": p,
        "order": g.order,
        "sylow_order": p_part(g.order, p),
        "min_index": result.index,
        "abelian_subgroup_generators": [
            g.elements[i].to_literal() for i in result.subgroup.generators
        ],
        "search_space": result.search_space,
    }
