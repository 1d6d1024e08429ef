"""Exact group element carriers.

Three kinds of elements live here: permutations of a fixed degree,
invertible square matrices over a prime field, and pairs of elements
(the carrier of direct products).  All of them are immutable, hashable
and totally ordered: within one carrier, elements compare
lexicographically on their flattened image / entry arrays.
"""
from dataclasses import dataclass
from functools import lru_cache

import galois
import numpy as np
from sympy import isprime

MAX_DIM = 8
MAX_DEGREE = 64


class CarrierMismatchError(Exception):
    pass


class InvalidElementError(ValueError):
    pass


class NotPrimeError(ValueError):
    pass


@lru_cache(maxsize=None)
def _gf(p: int):
    return galois.GF(p)


@dataclass(frozen=True, order=True)
class PrimeField:
    """The field F_p.  The modulus is checked for primality."""
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not isprime(int(self.p)):
            raise NotPrimeError(f"{self.p} is not a prime modulus")

    def reduce(self, value: int) -> int:
        return int(value) % self.p

    @property
    def GF(self):
        return _gf(self.p)


class GroupElement:
    """Interface shared by every carrier."""

    def compose(self, other):
        raise NotImplementedError

    def inverse(self):
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def to_literal(self) -> dict:
        raise NotImplementedError

    def same_carrier(self, other) -> bool:
        raise NotImplementedError

    def is_identity(self) -> bool:
        return self == self.identity()

    def __mul__(self, other):
        return compose(self, other)


@dataclass(frozen=True, order=True)
class PermElement(GroupElement):
    """Permutation of {0, ..., d-1}, stored as its image array.

    Composition applies the left factor first: (a*b)(i) = b(a(i)).
    """
    images: tuple

    def __post_init__(self):
        d = len(self.images)
        if d == 0 or d > MAX_DEGREE:
            raise InvalidElementError(f"permutation degree must lie in [1, {MAX_DEGREE}], got {d}")
        if sorted(self.images) != list(range(d)):
            raise InvalidElementError(f"{list(self.images)} is not a permutation of range({d})")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def from_cycles(cls, degree: int, *cycles) -> "PermElement":
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        return cls(tuple(images))

    def same_carrier(self, other) -> bool:
        return isinstance(other, PermElement) and other.degree == self.degree

    def compose(self, other: "PermElement") -> "PermElement":
        _check_carrier(self, other)
        b = other.images
        return PermElement(tuple(b[i] for i in self.images))

    def inverse(self) -> "PermElement":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return PermElement(tuple(inv))

    def identity(self) -> "PermElement":
        return PermElement(tuple(range(self.degree)))

    def to_literal(self) -> dict:
        return {"kind": "perm", "images": list(self.images)}


@dataclass(frozen=True, order=True)
class MatrixElement(GroupElement):
    """Invertible dim x dim matrix over F_p, entries flattened row-major.

    Entries are reduced mod p and the determinant is checked on
    construction.  Products, inverses and identities skip both checks.
    """
    entries: tuple
    dim: int
    field: PrimeField

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise InvalidElementError(f"matrix dimension must lie in [1, {MAX_DIM}], got {self.dim}")
        if len(self.entries) != self.dim * self.dim:
            raise InvalidElementError("entry count does not match dimension")
        if not all(isinstance(x, (int, np.integer)) and not isinstance(x, bool) for x in self.entries):
            raise InvalidElementError("matrix entries must be integers")
        object.__setattr__(self, "entries", tuple(self.field.reduce(x) for x in self.entries))
        if self.determinant() == 0:
            raise InvalidElementError(f"matrix {self.rows} is singular mod {self.p}")

    @classmethod
    def from_rows(cls, rows, p: int) -> "MatrixElement":
        dim = len(rows)
        if any(len(row) != dim for row in rows):
            raise InvalidElementError("matrix must be square")
        return cls(tuple(x for row in rows for x in row), dim, PrimeField(p))

    @classmethod
    def scalar(cls, dim: int, p: int, value: int = 1) -> "MatrixElement":
        entries = [0] * (dim * dim)
        for i in range(dim):
            entries[i * dim + i] = value
        return cls(tuple(entries), dim, PrimeField(p))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def rows(self) -> list:
        d = self.dim
        return [list(self.entries[i * d:(i + 1) * d]) for i in range(d)]

    @property
    def array(self):
        return self.field.GF(np.array(self.entries, dtype=np.int64).reshape(self.dim, self.dim))

    @classmethod
    def _trusted(cls, entries: tuple, dim: int, field: PrimeField) -> "MatrixElement":
        # entries already reduced, matrix known to be invertible
        element = object.__new__(cls)
        object.__setattr__(element, "entries", entries)
        object.__setattr__(element, "dim", dim)
        object.__setattr__(element, "field", field)
        return element

    @classmethod
    def _from_array(cls, array, dim: int, field: PrimeField) -> "MatrixElement":
        return cls._trusted(tuple(array.view(np.ndarray).ravel().tolist()), dim, field)

    def same_carrier(self, other) -> bool:
        return (
            isinstance(other, MatrixElement)
            and other.dim == self.dim
            and other.field == self.field
        )

    def compose(self, other: "MatrixElement") -> "MatrixElement":
        _check_carrier(self, other)
        return MatrixElement._from_array(self.array @ other.array, self.dim, self.field)

    def inverse(self) -> "MatrixElement":
        return MatrixElement._from_array(np.linalg.inv(self.array), self.dim, self.field)

    def identity(self) -> "MatrixElement":
        d = self.dim
        return MatrixElement._trusted(tuple(int(i % (d + 1) == 0) for i in range(d * d)), d, self.field)

    def determinant(self) -> int:
        return int(np.linalg.det(self.array))

    def to_literal(self) -> dict:
        return {"kind": "mat", "p": self.p, "rows": self.rows}


@dataclass(frozen=True, order=True)
class PairElement(GroupElement):
    """Element (left, right) of a direct product, composed componentwise."""
    left: GroupElement
    right: GroupElement

    def same_carrier(self, other) -> bool:
        return (
            isinstance(other, PairElement)
            and self.left.same_carrier(other.left)
            and self.right.same_carrier(other.right)
        )

    def compose(self, other: "PairElement") -> "PairElement":
        _check_carrier(self, other)
        return PairElement(self.left.compose(other.left), self.right.compose(other.right))

    def inverse(self) -> "PairElement":
        return PairElement(self.left.inverse(), self.right.inverse())

    def identity(self) -> "PairElement":
        return PairElement(self.left.identity(), self.right.identity())

    def to_literal(self) -> dict:
        return {"kind": "pair", "left": self.left.to_literal(), "right": self.right.to_literal()}


def _check_carrier(a, b):
    if not a.same_carrier(b):
        raise CarrierMismatchError(
            f"cannot compose {type(a).__name__} with {type(b).__name__} of a different carrier"
        )


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Return a*b.  Both factors must share carrier kind, size and field."""
    _check_carrier(a, b)
    return a.compose(b)


def inverse(g: GroupElement) -> GroupElement:
    return g.inverse()


def identity_of(g: GroupElement) -> GroupElement:
    return g.identity()


def element_order(g: GroupElement) -> int:
    """Smallest k >= 1 with g^k equal to the identity."""
    e = g.identity()
    power, k = g, 1
    while power != e:
        power = power.compose(g)
        k += 1
    return k


def parse_element(literal: dict) -> GroupElement:
    """Build an element from its JSON literal.

    {"kind": "perm", "images": [...]}, {"kind": "mat", "p": 5, "rows": [[...], ...]}
    or {"kind": "pair", "left": <literal>, "right": <literal>}.
    """
    try:
        kind = literal["kind"]
        if kind == "perm":
            return PermElement(tuple(int(i) for i in literal["images"]))
        if kind == "mat":
            return MatrixElement.from_rows(literal["rows"], int(literal["p"]))
        if kind == "pair":
            return PairElement(parse_element(literal["left"]), parse_element(literal["right"]))
    except (KeyError, TypeError) as exc:
        raise InvalidElementError(f"malformed element literal {literal!r}") from exc
    raise InvalidElementError(f"unknown element kind {kind!r}")


def element_to_literal(g: GroupElement) -> dict:
    return g.to_literal()
