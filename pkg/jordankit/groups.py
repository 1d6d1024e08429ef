"""Explicit finite groups: closure, subgroups, products, quotients.

A :class:`FiniteGroup` is a canonically ordered list of elements plus a
way to multiply positions.  Up to ``table_limit`` elements that is a
full Cayley table held in a numpy array; above it, closures keep the
action of their generators and multiply by following generator words.
Everything structural (subgroups, normality, quotients) works on
positions and boolean membership masks.
"""
import hashlib
import json
from collections import namedtuple
from functools import cached_property

import numpy as np
import yaml

from .primitives import CarrierMismatchError, GroupElement, PairElement, parse_element

DEFAULT_CAP = 20000
TABLE_LIMIT = 4096
EXHAUSTIVE_HOM_LIMIT = 4096


class OrderCapExceededError(Exception):
    def __init__(self, cap: int, count: int):
        super().__init__(f"group order exceeds the cap of {cap} ({count} elements reached)")
        self.cap = cap
        self.count = count


class TableLimitError(Exception):
    pass


class NotNormalError(Exception):
    pass


class ParentMismatchError(Exception):
    pass


class HomomorphismError(Exception):
    pass


class FiniteGroup:
    """An explicitly enumerated finite group.

    Either ``table`` (an n x n array with ``table[i, j]`` the position of
    ``elements[i] * elements[j]``) or the pair ``mul``/``inv`` of
    position-level callables must be given.  ``elements`` must already
    be sorted in canonical order.
    """

    def __init__(
            self,
            elements: list,
            table=None,
            generators=(),
            name: str = "",
            *,
            mul=None,
            inv=None,
            identity_pos=None,
            table_limit: int = TABLE_LIMIT,
    ):
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements in group")
        self.name = name
        self.table_limit = table_limit
        self._mul = mul
        self._inv = inv
        n = len(self.elements)
        if table is not None:
            table = np.asarray(table, dtype=np.int32)
            if table.shape != (n, n):
                raise ValueError(f"Cayley table has shape {table.shape}, expected {(n, n)}")
            self._table = table
            if identity_pos is None:
                identity_pos = int(np.flatnonzero((table == np.arange(n)).all(axis=1))[0])
        else:
            if mul is None or inv is None:
                raise ValueError("either a Cayley table or mul/inv callables are required")
            self._table = None
            if identity_pos is None:
                raise ValueError("identity_pos is required without a Cayley table")
        self.identity_pos = int(identity_pos)
        self.generators = tuple(self._position(g) for g in generators)
        if self._table is not None:
            self._verify_table()

    def _verify_table(self):
        n = len(self)
        t = self._table
        ar = np.arange(n)
        if t.min(initial=0) < 0 or t.max(initial=0) >= n:
            raise ValueError("Cayley table entries out of range")
        e = self.identity_pos
        if not (np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)):
            raise ValueError("identity row/column of the Cayley table is wrong")
        if not ((t == e).sum(axis=1) == 1).all():
            raise ValueError("some element has no unique inverse")
        if not self._generate(self.generators).all():
            raise ValueError(f"generators of {self.name or 'group'} do not generate it")

    def _position(self, g) -> int:
        if isinstance(g, GroupElement):
            try:
                return self.index[g]
            except KeyError:
                raise ValueError(f"{g} is not an element of {self.name or 'the group'}") from None
        i = int(g)
        if not 0 <= i < len(self):
            raise ValueError(f"position {i} out of range")
        return i

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={len(self)})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def has_table(self) -> bool:
        return self._table is not None

    @property
    def _word_mode(self) -> bool:
        """No table is held and none may be built: multiply through ``mul``."""
        return self._table is None and len(self) > self.table_limit

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            n = len(self)
            if n > self.table_limit:
                raise TableLimitError(
                    f"{self.name or 'group'} has order {n}, above the Cayley table limit {self.table_limit}"
                )
            self._table = np.array(
                [[self._mul(i, j) for j in range(n)] for i in range(n)], dtype=np.int32
            )
        return self._table

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return int(self._mul(int(i), int(j)))

    @cached_property
    def inverses(self) -> np.ndarray:
        if self._table is not None:
            return np.argmax(self._table == self.identity_pos, axis=1)
        return np.array([self._inv(i) for i in range(len(self))])

    def inv(self, i: int) -> int:
        return int(self.inverses[i])

    def conjugate_by(self, x: int, g: int) -> int:
        """g^-1 x g"""
        return self.mul(self.mul(self.inv(g), x), g)

    @cached_property
    def digest(self) -> str:
        """SHA-256 of the ordered element literals."""
        payload = json.dumps(
            [g.to_literal() for g in self.elements], sort_keys=True, separators=(",", ":")
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    @cached_property
    def element_orders(self) -> np.ndarray:
        if self._word_mode:
            return np.array([self._power_order(i) for i in range(len(self))], dtype=np.int64)
        t = self.table
        n = len(self)
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        power = ar.copy()
        k = 1
        while (orders == 0).any():
            fresh = (power == self.identity_pos) & (orders == 0)
            orders[fresh] = k
            power = t[power, ar]
            k += 1
        return orders

    def _power_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity_pos:
            x = self.mul(x, i)
            k += 1
        return k

    @property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    def is_abelian(self) -> bool:
        return self.whole().is_abelian()

    def _generate(self, generators, limit=None):
        """Membership mask of the subgroup generated by ``generators``.

        Returns None as soon as the subgroup grows past ``limit``.
        """
        mask = np.zeros(len(self), dtype=bool)
        mask[self.identity_pos] = True
        gens = np.unique(np.asarray(list(generators), dtype=np.int64))
        if self._word_mode:
            return self._generate_by_words(mask, gens.tolist(), limit)
        t = self.table
        frontier = np.array([self.identity_pos])
        count = 1
        while frontier.size and gens.size:
            candidates = t[np.ix_(frontier, gens)].ravel()
            candidates = np.unique(candidates[~mask[candidates]])
            mask[candidates] = True
            count += candidates.size
            if limit is not None and count > limit:
                return None
            frontier = candidates
        return mask

    def _generate_by_words(self, mask, gens, limit):
        frontier = [self.identity_pos]
        count = 1
        while frontier and gens:
            fresh = []
            for x in frontier:
                for s in gens:
                    y = self.mul(x, s)
                    if not mask[y]:
                        mask[y] = True
                        fresh.append(y)
            count += len(fresh)
            if limit is not None and count > limit:
                return None
            frontier = fresh
        return mask

    def subgroup(self, generators) -> "Subgroup":
        gens = tuple(self._position(g) for g in generators)
        return Subgroup(self, self._generate(gens), gens, verify=False)

    def trivial_subgroup(self) -> "Subgroup":
        return self.subgroup(())

    def whole(self) -> "Subgroup":
        return Subgroup(self, np.ones(len(self), dtype=bool), self.generators, verify=False)

    def centralizer(self, sub: "Subgroup" = None) -> "Subgroup":
        """Elements commuting with every element of ``sub`` (default: the whole group)."""
        gens = list(self.generators if sub is None else sub.generators)
        if self._table is None:
            mask = np.array([
                all(self.mul(z, s) == self.mul(s, z) for s in gens) for z in range(len(self))
            ])
            return Subgroup(self, mask, verify=False)
        t = self.table
        if not gens:
            return self.whole()
        commutes = (t[:, gens] == t[gens, :].T).all(axis=1)
        return Subgroup(self, commutes, verify=False)

    def center(self) -> "Subgroup":
        return self.centralizer(None)

    def conjugates_of(self, i: int) -> np.ndarray:
        if self._word_mode:
            orbit, frontier = {int(i)}, [int(i)]
            while frontier:
                fresh = []
                for x in frontier:
                    for g in self.generators:
                        y = self.conjugate_by(x, g)
                        if y not in orbit:
                            orbit.add(y)
                            fresh.append(y)
                frontier = fresh
            return np.array(sorted(orbit), dtype=np.int64)
        t = self.table
        return np.unique(t[t[self.inverses, i], np.arange(len(self))])

    def conjugacy_classes(self) -> list:
        seen = np.zeros(len(self), dtype=bool)
        classes = []
        for x in range(len(self)):
            if not seen[x]:
                cls = self.conjugates_of(x)
                seen[cls] = True
                classes.append(cls)
        return classes

    def normal_closure(self, positions) -> "Subgroup":
        xs = np.asarray(list(positions), dtype=np.int64)
        if xs.size == 0:
            return self.trivial_subgroup()
        if self._word_mode:
            # adjoin conjugates by the group generators until none is new
            gens = xs.tolist()
            mask = self._generate(gens)
            grown = True
            while grown:
                grown = False
                for s in list(gens):
                    for g in self.generators:
                        y = self.conjugate_by(s, g)
                        if not mask[y]:
                            gens.append(y)
                            mask = self._generate(gens)
                            grown = True
            return Subgroup(self, mask, gens, verify=False)
        t = self.table
        conj = t[t[self.inverses[:, None], xs[None, :]], np.arange(len(self))[:, None]]
        return self.subgroup(np.unique(conj).tolist())

    def derived_subgroup(self) -> "Subgroup":
        """Normal closure of the commutators x^-1 y^-1 x y of generators."""
        if self._word_mode:
            comm = {
                self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
                for x in self.generators for y in self.generators
            }
            return self.normal_closure(sorted(comm))
        t = self.table
        gens = np.asarray(self.generators, dtype=np.int64)
        inv = self.inverses[gens]
        comm = t[t[inv[:, None], inv[None, :]], t[gens[:, None], gens[None, :]]]
        return self.normal_closure(np.unique(comm).tolist())


class Subgroup:
    """A subgroup of ``parent`` given by a boolean membership mask."""

    def __init__(self, parent: FiniteGroup, mask, generators=None, verify: bool = True):
        mask = np.array(mask, dtype=bool)
        if mask.shape != (len(parent),):
            raise ValueError("membership mask does not match the parent order")
        mask.setflags(write=False)
        self.parent = parent
        self.mask = mask
        self.order = int(mask.sum())
        self._generators = None if generators is None else tuple(int(g) for g in generators)
        if verify:
            self._verify()

    def _verify(self):
        if not self.mask[self.parent.identity_pos]:
            raise ValueError("subgroup does not contain the identity")
        if self.parent._word_mode:
            closed = np.array_equal(self.parent._generate(self.generators), self.mask)
        else:
            s = self.members
            closed = self.mask[self.parent.table[np.ix_(s, s)]].all()
        if not closed:
            raise ValueError("membership mask is not closed under composition")

    @cached_property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def key(self) -> tuple:
        """Canonical mask order: lexicographic on the sorted member positions."""
        return tuple(self.members.tolist())

    @property
    def generators(self) -> tuple:
        if self._generators is None:
            gens = []
            current = self.parent._generate(gens)
            for x in self.members:
                if not current[x]:
                    gens.append(int(x))
                    current = self.parent._generate(gens)
            self._generators = tuple(gens)
        return self._generators

    @property
    def elements(self) -> list:
        return [self.parent.elements[i] for i in self.members]

    def __len__(self):
        return self.order

    def __contains__(self, i) -> bool:
        return bool(self.mask[int(i)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and np.array_equal(other.mask, self.mask)
        )

    def __hash__(self):
        return hash((id(self.parent), self.mask.tobytes()))

    def __repr__(self):
        return f"Subgroup(order={self.order}, parent={self.parent!r})"

    def _same_parent(self, other: "Subgroup"):
        if other.parent is not self.parent:
            raise ParentMismatchError("subgroups live in different parent groups")

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        self._same_parent(other)
        return bool(other.mask[self.mask].all())

    def index(self, within: "Subgroup" = None) -> int:
        total = self.parent.order if within is None else within.order
        return total // self.order

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_normal(self, within: "Subgroup" = None) -> bool:
        """Does every element of ``within`` conjugate self into itself?

        Exhaustive with a Cayley table.  In word mode the generators of
        ``within`` act on the generators of self.
        """
        if within is not None:
            self._same_parent(within)
            if not self.is_subgroup_of(within):
                return False
        if self.parent._word_mode:
            conjugators = self.parent.generators if within is None else within.generators
            return all(
                self.mask[self.parent.conjugate_by(s, g)]
                for g in conjugators for s in self.generators
            )
        ambient = np.arange(len(self.parent)) if within is None else within.members
        t = self.parent.table
        inv = self.parent.inverses
        s = self.members
        conj = t[t[inv[ambient][:, None], s[None, :]], ambient[:, None]]
        return bool(self.mask[conj].all())

    def is_abelian(self) -> bool:
        if self.parent._word_mode:
            mul = self.parent.mul
            gens = self.generators
            return all(mul(a, b) == mul(b, a) for a in gens for b in gens)
        s = self.members
        block = self.parent.table[np.ix_(s, s)]
        return bool(np.array_equal(block, block.T))

    def conjugate(self, g: int) -> "Subgroup":
        """g^-1 * self * g"""
        g = int(g)
        if self.parent._word_mode:
            images = [self.parent.conjugate_by(x, g) for x in self.members]
        else:
            t = self.parent.table
            images = t[t[self.parent.inv(g), self.members], g]
        mask = np.zeros(len(self.parent), dtype=bool)
        mask[images] = True
        return Subgroup(self.parent, mask, verify=False)

    def to_group(self, name: str = None):
        """This subgroup as a FiniteGroup, with the inclusion homomorphism into the parent."""
        parent = self.parent
        s = self.members
        local = np.full(len(parent), -1, dtype=np.int64)
        local[s] = np.arange(s.size)
        options = dict(
            generators=local[list(self.generators)].tolist(),
            name=name or f"{parent.name}[{self.order}]",
            identity_pos=int(local[parent.identity_pos]),
        )
        elements = [parent.elements[i] for i in s]
        if parent._word_mode:
            group = FiniteGroup(
                elements,
                mul=lambda a, b: int(local[parent.mul(s[a], s[b])]),
                inv=lambda a: int(local[parent.inv(s[a])]),
                table_limit=parent.table_limit,
                **options,
            )
        else:
            group = FiniteGroup(elements, local[parent.table[np.ix_(s, s)]], **options)
        return group, Homomorphism(group, parent, s)


class Homomorphism:
    """Map between FiniteGroups given position-wise, checked on construction.

    The multiplicativity check is exhaustive up to ``exhaustive_limit``
    domain elements and runs on 10*|domain| random pairs above it; the
    strategy used is kept in ``verification``.
    """

    def __init__(
            self,
            domain: FiniteGroup,
            codomain: FiniteGroup,
            image_of,
            *,
            exhaustive_limit: int = EXHAUSTIVE_HOM_LIMIT,
            seed: int = 0,
    ):
        image_of = np.asarray(image_of, dtype=np.int64)
        if image_of.shape != (len(domain),):
            raise HomomorphismError("image array does not cover the domain")
        if image_of.size and (image_of.min() < 0 or image_of.max() >= len(codomain)):
            raise HomomorphismError("image positions out of codomain range")
        image_of.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.image_of = image_of
        if image_of[domain.identity_pos] != codomain.identity_pos:
            raise HomomorphismError("identity is not mapped to identity")
        self.verification = self._verify(exhaustive_limit, seed)

    def _verify(self, exhaustive_limit: int, seed: int) -> str:
        n = len(self.domain)
        img = self.image_of
        if n <= exhaustive_limit and self.domain.has_table and self.codomain.has_table:
            dt = self.domain.table
            ct = self.codomain.table
            # row blocks keep the temporary arrays small for large domains
            for start in range(0, n, 256):
                rows = slice(start, min(n, start + 256))
                if not np.array_equal(img[dt[rows]], ct[np.ix_(img[rows], img)]):
                    raise HomomorphismError("map is not multiplicative")
            return "exhaustive"
        rng = np.random.default_rng(seed)
        samples = 10 * n
        for x, y in rng.integers(0, n, size=(samples, 2)):
            if img[self.domain.mul(x, y)] != self.codomain.mul(img[x], img[y]):
                raise HomomorphismError("map is not multiplicative")
        return f"sampled:{samples}"

    def __call__(self, i: int) -> int:
        return int(self.image_of[i])

    def kernel(self) -> Subgroup:
        return kernel(self)

    def image(self, sub: Subgroup = None) -> Subgroup:
        return image(self, sub)

    def is_surjective(self) -> bool:
        return np.unique(self.image_of).size == len(self.codomain)

    def is_injective(self) -> bool:
        return np.unique(self.image_of).size == len(self.domain)


class QuotientGroup:
    """base / kernel, each coset represented by its smallest element."""

    def __init__(self, base: FiniteGroup, kernel: Subgroup, group: FiniteGroup,
                 representatives: np.ndarray, projection: Homomorphism):
        self.base = base
        self.kernel = kernel
        self.group = group
        self.representatives = representatives
        self.projection = projection

    def __len__(self):
        return len(self.group)

    @property
    def order(self) -> int:
        return len(self.group)

    def lift(self, q: int) -> int:
        """Canonical representative (a base position) of coset ``q``."""
        return int(self.representatives[q])


DirectProduct = namedtuple("DirectProduct", ["group", "pi1", "pi2"])


def closure(gens, cap: int = DEFAULT_CAP, name: str = "", table_limit: int = TABLE_LIMIT) -> FiniteGroup:
    """Group generated by ``gens`` by breadth-first saturation.

    Raises OrderCapExceededError, carrying the partial count, as soon as
    more than ``cap`` elements are found.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("closure needs at least one generator")
    for g in gens[1:]:
        if not gens[0].same_carrier(g):
            raise CarrierMismatchError("generators do not share a carrier")

    e = gens[0].identity()
    elements = [e]
    index = {e: 0}
    parent, via, right = [-1], [-1], []
    i = 0
    while i < len(elements):
        x = elements[i]
        row = []
        for k, s in enumerate(gens):
            y = x.compose(s)
            j = index.get(y)
            if j is None:
                if len(elements) >= cap:
                    raise OrderCapExceededError(cap, len(elements))
                j = len(elements)
                index[y] = j
                elements.append(y)
                parent.append(i)
                via.append(k)
            row.append(j)
        right.append(row)
        i += 1

    # relabel so that positions follow the canonical element order
    n = len(elements)
    order = sorted(range(n), key=elements.__getitem__)
    newpos = np.empty(n, dtype=np.int64)
    newpos[order] = np.arange(n)
    old_right = np.asarray(right, dtype=np.int64)
    right_sorted = np.empty_like(old_right)
    right_sorted[newpos] = newpos[old_right]
    sorted_elements = [elements[j] for j in order]
    identity = int(newpos[0])
    gen_positions = [int(newpos[index[g]]) for g in gens]

    if n <= table_limit:
        table = np.empty((n, n), dtype=np.int32)
        table[:, identity] = np.arange(n)
        # breadth-first order guarantees the parent column is already filled
        for old in range(1, n):
            h, p = newpos[old], newpos[parent[old]]
            table[:, h] = right_sorted[table[:, p], via[old]]
        return FiniteGroup(
            sorted_elements, table, gen_positions, name,
            identity_pos=identity, table_limit=table_limit,
        )

    words = [()] * n
    for old in range(1, n):
        words[newpos[old]] = words[newpos[parent[old]]] + (via[old],)
    sorted_index = {g: j for j, g in enumerate(sorted_elements)}

    def mul(a, b):
        for k in words[b]:
            a = right_sorted[a, k]
        return int(a)

    def inv(a):
        return sorted_index[sorted_elements[a].inverse()]

    return FiniteGroup(
        sorted_elements, None, gen_positions, name,
        mul=mul, inv=inv, identity_pos=identity, table_limit=table_limit,
    )


def direct_product(g1: FiniteGroup, g2: FiniteGroup, cap: int = DEFAULT_CAP, seed: int = 0) -> DirectProduct:
    """g1 x g2 together with its two projection homomorphisms.

    ``seed`` drives the sampled homomorphism check used when the product
    is too large for a Cayley table.
    """
    n1, n2 = len(g1), len(g2)
    n = n1 * n2
    if n > cap:
        raise OrderCapExceededError(cap, n)
    elements = [PairElement(a, b) for a in g1.elements for b in g2.elements]
    gens = [i * n2 + g2.identity_pos for i in g1.generators]
    gens += [g1.identity_pos * n2 + j for j in g2.generators]
    identity = g1.identity_pos * n2 + g2.identity_pos
    name = f"{g1.name}x{g2.name}"
    if n <= min(g1.table_limit, g2.table_limit) and g1.has_table and g2.has_table:
        t1 = g1.table.astype(np.int64)
        t2 = g2.table.astype(np.int64)
        table = (t1[:, None, :, None] * n2 + t2[None, :, None, :]).reshape(n, n)
        group = FiniteGroup(elements, table, gens, name, identity_pos=identity)
    else:
        def mul(a, b):
            return g1.mul(a // n2, b // n2) * n2 + g2.mul(a % n2, b % n2)

        def inv(a):
            return g1.inv(a // n2) * n2 + g2.inv(a % n2)

        group = FiniteGroup(elements, None, gens, name, mul=mul, inv=inv, identity_pos=identity)
    positions = np.arange(n)
    return DirectProduct(
        group,
        Homomorphism(group, g1, positions // n2, seed=seed),
        Homomorphism(group, g2, positions % n2, seed=seed),
    )


def quotient(g: FiniteGroup, n: Subgroup) -> QuotientGroup:
    """g / n, with elements named by their minimal coset representative.

    In word mode the quotient multiplies representatives through ``g.mul``
    and builds its own table only if it is small enough.
    """
    if n.parent is not g:
        raise ParentMismatchError("the kernel must be a subgroup of the group being divided")
    if not n.is_normal():
        raise NotNormalError(f"subgroup of order {n.order} is not normal in {g.name or 'the group'}")
    kernel_members = n.members
    coset_of = np.full(len(g), -1, dtype=np.int64)
    reps = []
    for x in range(len(g)):
        if coset_of[x] < 0:
            if g._word_mode:
                coset = [g.mul(x, k) for k in kernel_members]
            else:
                coset = g.table[x, kernel_members]
            coset_of[coset] = len(reps)
            reps.append(x)
    reps = np.asarray(reps, dtype=np.int64)
    elements = [g.elements[r] for r in reps]
    gens = list(dict.fromkeys(int(coset_of[s]) for s in g.generators))
    options = dict(name=f"{g.name}/{n.order}", identity_pos=int(coset_of[g.identity_pos]))
    if g._word_mode:
        group = FiniteGroup(
            elements, None, gens,
            mul=lambda a, b: int(coset_of[g.mul(reps[a], reps[b])]),
            inv=lambda a: int(coset_of[g.inv(reps[a])]),
            table_limit=g.table_limit,
            **options,
        )
    else:
        group = FiniteGroup(elements, coset_of[g.table[np.ix_(reps, reps)]], gens, **options)
    return QuotientGroup(g, n, group, reps, Homomorphism(g, group, coset_of))


def preimage(h: Homomorphism, s: Subgroup) -> Subgroup:
    """Full preimage in the domain of a subgroup of the codomain."""
    if s.parent is not h.codomain:
        raise ParentMismatchError("subgroup does not live in the codomain")
    return Subgroup(h.domain, s.mask[h.image_of], verify=False)


def image(h: Homomorphism, s: Subgroup = None) -> Subgroup:
    if s is None:
        s = h.domain.whole()
    if s.parent is not h.domain:
        raise ParentMismatchError("subgroup does not live in the domain")
    mask = np.zeros(len(h.codomain), dtype=bool)
    mask[h.image_of[s.members]] = True
    return Subgroup(h.codomain, mask, h.image_of[list(s.generators)].tolist(), verify=False)


def kernel(h: Homomorphism) -> Subgroup:
    return Subgroup(h.domain, h.image_of == h.codomain.identity_pos, verify=False)


def intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    a._same_parent(b)
    return Subgroup(a.parent, a.mask & b.mask)


def join(a: Subgroup, b: Subgroup) -> Subgroup:
    """Subgroup generated by a and b."""
    a._same_parent(b)
    return a.parent.subgroup(list(a.generators) + list(b.generators))


def load_group_definition(path, cap: int = DEFAULT_CAP, table_limit: int = TABLE_LIMIT) -> FiniteGroup:
    """Read {"name": ..., "generators": [element literals], "cap": ...} and close it.

    The smaller of ``cap`` and the file's own cap applies.
    """
    with open(path, "r") as f:
        definition = yaml.safe_load(f)
    gens = [parse_element(lit) for lit in definition["generators"]]
    return closure(
        gens,
        cap=min(cap, int(definition.get("cap", cap))),
        name=definition.get("name", ""),
        table_limit=table_limit,
    )
