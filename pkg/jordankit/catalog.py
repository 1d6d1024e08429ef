"""Named families of finite groups for surveys.

A catalog is a list of ``{"name", "family", "params"}`` mappings (JSON or
YAML).  Each family registers a builder and, where one is known, a
closed formula for the group order; builders enumerate the group by
closure from a small generating set.  Entries of the ``product``,
``quotient`` and ``extension`` families refer to other entries, either
by name (an earlier entry of the same catalog) or inline.
"""
import copy
from collections import namedtuple
from dataclasses import dataclass, field, replace
from math import factorial, gcd, prod

import yaml
from sympy import primitive_root

from .constants import StructureProfile
from .groups import (
    DEFAULT_CAP, DirectProduct, FiniteGroup, NotNormalError, Subgroup,
    closure, direct_product, kernel, quotient,
)
from .primitives import MatrixElement, PermElement, parse_element
from .subgroup_lab import sylow
from .witness import ExtensionInstance


class UnknownFamilyError(Exception):
    pass


class CatalogError(Exception):
    pass


@dataclass
class BuiltGroup:
    """A catalog group plus whatever structure its family provides."""
    entry: "CatalogEntry"
    group: FiniteGroup
    characteristic: int = 0
    dimension: int = 0
    product: DirectProduct = None
    extension: ExtensionInstance = None
    gamma0: Subgroup = None


@dataclass
class CatalogEntry:
    name: str
    family: str
    params: dict = field(default_factory=dict)
    profile: StructureProfile = None
    expected_order: int = None
    order_provenance: str = None

    @classmethod
    def from_dict(cls, data: dict) -> "CatalogEntry":
        try:
            name, family = data["name"], data["family"]
        except (KeyError, TypeError):
            raise CatalogError(f"catalog entries need a name and a family, got {data!r}") from None
        if family not in FAMILIES:
            raise UnknownFamilyError(f"{name}: unknown family {family!r}, expected one of {sorted(FAMILIES)}")
        params = dict(data.get("params") or {})
        missing = [k for k in FAMILIES[family].required if k not in params]
        if missing:
            raise CatalogError(f"{name}: family {family} needs parameters {missing}")
        profile = data.get("profile")
        if profile is not None and not isinstance(profile, StructureProfile):
            profile = StructureProfile(**profile)
        expected, provenance = data.get("expected_order"), "user"
        if expected is None:
            expected, provenance = FAMILIES[family].expected_order(params), "formula"
        return cls(name, family, params, profile, expected, provenance if expected is not None else None)

    def to_dict(self) -> dict:
        return {"name": self.name, "family": self.family, "params": self.params}

    def build(self, cap: int = DEFAULT_CAP, seed: int = 0) -> BuiltGroup:
        built = FAMILIES[self.family].build(self.params, cap, seed)
        built = replace(built, entry=self)
        built.group.name = self.name
        if self.expected_order is not None and built.group.order != self.expected_order:
            raise CatalogError(
                f"{self.name}: built a group of order {built.group.order}, "
                f"expected {self.expected_order} ({self.order_provenance})"
            )
        return built


FamilyBuilder = namedtuple("FamilyBuilder", ["build", "expected_order", "required"])


def _identity_rows(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _elementary(n: int, p: int, i: int, j: int) -> MatrixElement:
    rows = _identity_rows(n)
    rows[i][j] = 1
    return MatrixElement.from_rows(rows, p)


def _diagonal(n: int, p: int, i: int, value: int) -> MatrixElement:
    rows = _identity_rows(n)
    rows[i][i] = value
    return MatrixElement.from_rows(rows, p)


def _permutation_matrix(images, p: int) -> MatrixElement:
    n = len(images)
    rows = [[int(images[i] == j) for j in range(n)] for i in range(n)]
    return MatrixElement.from_rows(rows, p)


def _diagonal_gens(n: int, p: int) -> list:
    g = int(primitive_root(p)) if p > 2 else 1
    return [_diagonal(n, p, i, g) for i in range(n)] if g != 1 else []


def _matrix_closure(gens, n, p, cap) -> FiniteGroup:
    gens = [g for g in gens if not g.is_identity()] or [MatrixElement.scalar(n, p)]
    return closure(gens, cap=cap)


def _matrix_params(params) -> tuple:
    n, p = int(params["n"]), int(params["p"])
    return n, p


def build_gl(params, cap, seed) -> BuiltGroup:
    n, p = _matrix_params(params)
    gens = [_elementary(n, p, i, j) for i in range(n) for j in range(n) if i != j]
    gens += _diagonal_gens(n, p)[:1]
    return BuiltGroup(None, _matrix_closure(gens, n, p, cap), p, n)


def build_sl(params, cap, seed) -> BuiltGroup:
    n, p = _matrix_params(params)
    gens = [_elementary(n, p, i, j) for i in range(n) for j in range(n) if i != j]
    return BuiltGroup(None, _matrix_closure(gens, n, p, cap), p, n)


def build_borel(params, cap, seed) -> BuiltGroup:
    n, p = _matrix_params(params)
    gens = _diagonal_gens(n, p) + [_elementary(n, p, i, i + 1) for i in range(n - 1)]
    return BuiltGroup(None, _matrix_closure(gens, n, p, cap), p, n)


def build_diagonal(params, cap, seed) -> BuiltGroup:
    n, p = _matrix_params(params)
    return BuiltGroup(None, _matrix_closure(_diagonal_gens(n, p), n, p, cap), p, n)


def build_monomial(params, cap, seed) -> BuiltGroup:
    """Monomial matrices; the diagonal torus is kept as the identity component."""
    n, p = _matrix_params(params)
    diag = _diagonal_gens(n, p)
    perms = []
    if n > 1:
        perms.append(_permutation_matrix([1, 0] + list(range(2, n)), p))
        perms.append(_permutation_matrix([(i + 1) % n for i in range(n)], p))
    group = _matrix_closure(diag + perms, n, p, cap)
    return BuiltGroup(None, group, p, n, gamma0=group.subgroup(diag))


def build_symmetric(params, cap, seed) -> BuiltGroup:
    n = int(params["n"])
    gens = [PermElement.from_cycles(n, [0, 1]), PermElement.from_cycles(n, list(range(n)))] if n > 1 \
        else [PermElement((0,))]
    return BuiltGroup(None, closure(gens, cap=cap), 0, n)


def build_alternating(params, cap, seed) -> BuiltGroup:
    n = int(params["n"])
    if n < 3:
        raise CatalogError("alternating groups need n >= 3")
    gens = [PermElement.from_cycles(n, [0, 1, i]) for i in range(2, n)]
    return BuiltGroup(None, closure(gens, cap=cap), 0, n)


def build_cyclic(params, cap, seed) -> BuiltGroup:
    m = int(params["m"])
    return BuiltGroup(None, closure([PermElement.from_cycles(m, list(range(m)))], cap=cap), 0, m)


def build_dihedral(params, cap, seed) -> BuiltGroup:
    """Symmetries of the m-gon, order 2m; rotations form the identity component."""
    m = int(params["m"])
    if m < 3:
        raise CatalogError("dihedral groups need m >= 3")
    rotation = PermElement.from_cycles(m, list(range(m)))
    reflection = PermElement(tuple((-i) % m for i in range(m)))
    group = closure([rotation, reflection], cap=cap)
    return BuiltGroup(None, group, 0, m, gamma0=group.subgroup([rotation]))


def build_quaternion(params, cap, seed) -> BuiltGroup:
    """Q8 inside SL(2, 3)."""
    i = MatrixElement.from_rows([[0, 2], [1, 0]], 3)
    j = MatrixElement.from_rows([[1, 1], [1, 2]], 3)
    return BuiltGroup(None, closure([i, j], cap=cap), 3, 2)


def build_semidirect(params, cap, seed) -> BuiltGroup:
    """C_m x| C_k with the generator of C_k acting by x -> x^r, on m + k points."""
    m, k, r = int(params["m"]), int(params["k"]), int(params["r"])
    if gcd(r, m) != 1 or pow(r, k, m) != 1 % m:
        raise CatalogError(f"x -> x^{r} is not an automorphism of C_{m} of order dividing {k}")
    a = PermElement(tuple((i + 1) % m for i in range(m)) + tuple(range(m, m + k)))
    b = PermElement(tuple((r * i) % m for i in range(m)) + tuple(m + (i + 1) % k for i in range(k)))
    group = closure([a, b], cap=cap)
    return BuiltGroup(None, group, 0, m + k, gamma0=group.subgroup([a]))


def build_product(params, cap, seed) -> BuiltGroup:
    left = _nested(params["left"]).build(cap, seed)
    right = _nested(params["right"]).build(cap, seed)
    product = direct_product(left.group, right.group, cap=cap, seed=seed)
    characteristic = left.characteristic if left.characteristic == right.characteristic else 0
    return BuiltGroup(None, product.group, characteristic, left.dimension + right.dimension, product=product)


def _extension_of(params, cap, seed, base_key) -> tuple:
    base = _nested(params[base_key]).build(cap, seed)
    k = select_kernel(base, params["kernel"])
    return base, ExtensionInstance.from_kernel(base.group, k)


def build_quotient(params, cap, seed) -> BuiltGroup:
    """The quotient H/K; the extension it came from is kept."""
    base, ext = _extension_of(params, cap, seed, "base")
    return BuiltGroup(None, ext.gamma, base.characteristic, base.dimension, extension=ext)


def build_extension(params, cap, seed) -> BuiltGroup:
    """The total group H of 1 -> K -> H -> H/K -> 1."""
    base, ext = _extension_of(params, cap, seed, "total")
    return BuiltGroup(None, base.group, base.characteristic, base.dimension,
                      product=base.product, extension=ext, gamma0=base.gamma0)


def select_kernel(built: BuiltGroup, selector) -> Subgroup:
    """A normal subgroup named by ``selector``.

    "trivial", "center", "derived", "sylow:<p>" (must be normal),
    "factor:1" / "factor:2" (product entries), or
    ``{"generators": [element literals]}`` (must generate a normal subgroup).
    """
    g = built.group
    if isinstance(selector, dict):
        sub = g.subgroup([parse_element(lit) for lit in selector.get("generators", [])])
    elif selector == "trivial":
        sub = g.trivial_subgroup()
    elif selector == "center":
        sub = g.center()
    elif selector == "derived":
        sub = g.derived_subgroup()
    elif isinstance(selector, str) and selector.startswith("sylow:"):
        witness = sylow(g, int(selector.split(":", 1)[1]))
        if not witness.is_normal:
            raise CatalogError(f"{selector}: the Sylow subgroup of {g.name} is not normal")
        sub = witness.subgroup
    elif selector in ("factor:1", "factor:2"):
        if built.product is None:
            raise CatalogError(f"{selector} needs a product entry")
        sub = kernel(built.product.pi2 if selector == "factor:1" else built.product.pi1)
    else:
        raise CatalogError(f"unknown kernel selector {selector!r}")
    if not sub.is_normal():
        raise NotNormalError(f"kernel {selector!r} is not normal in {g.name}")
    return sub


def _nested(ref) -> CatalogEntry:
    if isinstance(ref, CatalogEntry):
        return ref
    if not isinstance(ref, dict):
        raise CatalogError(f"unresolved entry reference {ref!r}")
    ref = dict(ref)
    ref.setdefault("name", ref.get("family", "anonymous"))
    return CatalogEntry.from_dict(ref)


def _gl_order(params) -> int:
    n, p = _matrix_params(params)
    return prod(p ** n - p ** i for i in range(n))


def _sub_order(key):
    def expected(params):
        sub = params.get(key)
        if isinstance(sub, dict) and sub.get("family") in FAMILIES:
            return _nested(sub).expected_order
        return None
    return expected


def _product_order(params):
    left, right = _sub_order("left")(params), _sub_order("right")(params)
    return None if left is None or right is None else left * right


FAMILIES = {
    "GL": FamilyBuilder(build_gl, _gl_order, ("n", "p")),
    "SL": FamilyBuilder(build_sl, lambda q: _gl_order(q) // (int(q["p"]) - 1), ("n", "p")),
    "borel": FamilyBuilder(
        build_borel,
        lambda q: (int(q["p"]) - 1) ** int(q["n"]) * int(q["p"]) ** (int(q["n"]) * (int(q["n"]) - 1) // 2),
        ("n", "p"),
    ),
    "diagonal": FamilyBuilder(build_diagonal, lambda q: (int(q["p"]) - 1) ** int(q["n"]), ("n", "p")),
    "monomial": FamilyBuilder(
        build_monomial, lambda q: (int(q["p"]) - 1) ** int(q["n"]) * factorial(int(q["n"])), ("n", "p"),
    ),
    "symmetric": FamilyBuilder(build_symmetric, lambda q: factorial(int(q["n"])), ("n",)),
    "alternating": FamilyBuilder(build_alternating, lambda q: factorial(int(q["n"])) // 2, ("n",)),
    "cyclic": FamilyBuilder(build_cyclic, lambda q: int(q["m"]), ("m",)),
    "dihedral": FamilyBuilder(build_dihedral, lambda q: 2 * int(q["m"]), ("m",)),
    "quaternion": FamilyBuilder(build_quaternion, lambda q: 8, ()),
    "semidirect": FamilyBuilder(build_semidirect, lambda q: int(q["m"]) * int(q["k"]), ("m", "k", "r")),
    "product": FamilyBuilder(build_product, _product_order, ("left", "right")),
    "quotient": FamilyBuilder(build_quotient, lambda q: None, ("base", "kernel")),
    "extension": FamilyBuilder(build_extension, _sub_order("total"), ("total", "kernel")),
}

_REFERENCE_KEYS = ("left", "right", "base", "total")


def build_catalog(source) -> list:
    """Validate a catalog (a path, or an already parsed list) into CatalogEntries.

    References by name are replaced by a copy of the earlier entry, so
    every entry can be built on its own.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r") as f:
            source = yaml.safe_load(f)
    if not isinstance(source, list):
        raise CatalogError("a catalog must be a list of entries")
    known = {}
    entries = []
    for raw in source:
        raw = copy.deepcopy(raw)
        params = (raw.get("params") or {}) if isinstance(raw, dict) else {}
        for key in _REFERENCE_KEYS:
            if isinstance(params.get(key), str):
                try:
                    params[key] = copy.deepcopy(known[params[key]])
                except KeyError:
                    raise CatalogError(f"{raw.get('name')}: unknown entry {params[key]!r}") from None
        entry = CatalogEntry.from_dict(raw)
        if entry.name in known:
            raise CatalogError(f"duplicate catalog entry {entry.name!r}")
        known[entry.name] = entry.to_dict()
        entries.append(entry)
    return entries


DEFAULT_CATALOG = [
    {"name": "GL(2,2)", "family": "GL", "params": {"n": 2, "p": 2}},
    {"name": "GL(2,3)", "family": "GL", "params": {"n": 2, "p": 3}},
    {"name": "GL(2,5)", "family": "GL", "params": {"n": 2, "p": 5}},
    {"name": "GL(3,2)", "family": "GL", "params": {"n": 3, "p": 2}},
    {"name": "SL(2,3)", "family": "SL", "params": {"n": 2, "p": 3}},
    {"name": "SL(2,5)", "family": "SL", "params": {"n": 2, "p": 5}},
    {"name": "SL(2,7)", "family": "SL", "params": {"n": 2, "p": 7}},
    {"name": "B(3,3)", "family": "borel", "params": {"n": 3, "p": 3}},
    {"name": "T(2,5)", "family": "diagonal", "params": {"n": 2, "p": 5}},
    {"name": "N(2,3)", "family": "monomial", "params": {"n": 2, "p": 3}},
    {"name": "N(3,3)", "family": "monomial", "params": {"n": 3, "p": 3}},
    {"name": "S3", "family": "symmetric", "params": {"n": 3}},
    {"name": "S4", "family": "symmetric", "params": {"n": 4}},
    {"name": "S5", "family": "symmetric", "params": {"n": 5}},
    {"name": "A4", "family": "alternating", "params": {"n": 4}},
    {"name": "A5", "family": "alternating", "params": {"n": 5}},
    {"name": "C2", "family": "cyclic", "params": {"m": 2}},
    {"name": "C6", "family": "cyclic", "params": {"m": 6}},
    {"name": "C12", "family": "cyclic", "params": {"m": 12}},
    {"name": "D4", "family": "dihedral", "params": {"m": 4}},
    {"name": "D5", "family": "dihedral", "params": {"m": 5}},
    {"name": "D6", "family": "dihedral", "params": {"m": 6}},
    {"name": "Q8", "family": "quaternion", "params": {}},
    {"name": "C3:C4", "family": "semidirect", "params": {"m": 3, "k": 4, "r": 2}},
    {"name": "S3xC2", "family": "product", "params": {"left": "S3", "right": "C2"}},
    {"name": "S3xS3", "family": "product", "params": {"left": "S3", "right": "S3"}},
    {"name": "SL(2,3)/Z", "family": "quotient", "params": {"base": "SL(2,3)", "kernel": "center"}},
    {"name": "S3xC2/A3", "family": "quotient", "params": {"base": "S3xC2", "kernel": "sylow:3"}},
    {"name": "C3:C4>C3", "family": "extension", "params": {"total": "C3:C4", "kernel": "sylow:3"}},
]


def default_catalog() -> list:
    return build_catalog(DEFAULT_CATALOG)
