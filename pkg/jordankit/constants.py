"""Explicit Jordan-type constants as exact integer arithmetic.

J(n) and J'(n), the constants for the general linear group of degree n,
are always inputs: nothing here computes them.  Everything else is a
formula over a :class:`StructureProfile`.
"""
from collections import namedtuple
from dataclasses import asdict, dataclass, fields

import yaml


class InvalidProfileError(ValueError):
    pass


class ProfileIncompleteError(Exception):
    pass


StageBound = namedtuple("StageBound", ["stage", "jp", "e"])


@dataclass(frozen=True)
class StructureProfile:
    """Numeric stand-ins for the structure of an algebraic group.

    :param c_G: number of connected components
    :param r_G: rank of the affine part of the anti-affine subgroup
    :param n: least faithful representation dimension of the affine part
    :param kp_order: order of the Sylow p-subgroup of the isogeny kernel
    :param ell_X: component bound for automorphism groups (optional)
    :param dim_X: dimension of the variety (optional)
    :param rank_aff: rank of the affine part of G (optional)
    """
    c_G: int
    r_G: int
    n: int
    kp_order: int
    ell_X: int = None
    dim_X: int = None
    rank_aff: int = None

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidProfileError(f"{f.name} must be an integer, got {value!r}")
            minimum = 0 if f.name == "r_G" else 1
            if value < minimum:
                raise InvalidProfileError(f"{f.name} must be >= {minimum}, got {value}")
        if self.rank_aff is not None and self.r_G > self.rank_aff:
            raise InvalidProfileError(f"r_G = {self.r_G} exceeds rank_aff = {self.rank_aff}")
        if self.dim_X is not None:
            top = self.r_G if self.rank_aff is None else self.rank_aff
            if top > self.dim_X:
                raise InvalidProfileError(f"rank {top} exceeds dim_X = {self.dim_X}")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class ConstantsReport:
    J_G: int
    e_G: int
    Jp_G: int
    J_X: int = None
    Jp_X: int = None
    e_X: int = None
    stages: list = None

    def to_dict(self) -> dict:
        report = {k: v for k, v in asdict(self).items() if v is not None and k != "stages"}
        report["formulas"] = {
            "J_G": "c_G * J_n ** c_G",
            "e_G": "3 * (r_G + 1) * c_G",
            "Jp_G": "c_G * Jp_n ** c_G * kp_order ** e_G",
        }
        if self.J_X is not None:
            report["formulas"].update({
                "J_X": "ell_X * J_n ** ell_X",
                "Jp_X": "ell_X * Jp_G ** ell_X",
                "e_X": "3 * (r_G + 1) * ell_X",
            })
        if self.stages is not None:
            report["stages"] = [s._asdict() for s in self.stages]
        return report


def _check_base(name: str, value: int):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


def jordan_constant(profile: StructureProfile, J_n: int) -> int:
    """J(G) = c_G * J(n)^c_G"""
    _check_base("J_n", J_n)
    return profile.c_G * J_n ** profile.c_G


def lp_constants(profile: StructureProfile, Jp_n: int) -> tuple:
    """(J'(G), e(G)) with e(G) = 3 (r_G + 1) c_G and J'(G) = c_G J'(n)^c_G |K_(p)|^e(G)."""
    _check_base("Jp_n", Jp_n)
    e = 3 * (profile.r_G + 1) * profile.c_G
    return profile.c_G * Jp_n ** profile.c_G * profile.kp_order ** e, e


def aut_constants(profile: StructureProfile, J_n: int, Jp_G: int) -> tuple:
    """(J_X, J'_X, e_X) for automorphism groups, driven by the component bound ell_X."""
    if profile.ell_X is None:
        raise ProfileIncompleteError("ell_X is required for automorphism group constants")
    _check_base("J_n", J_n)
    _check_base("Jp_G", Jp_G)
    ell = profile.ell_X
    return ell * J_n ** ell, ell * Jp_G ** ell, 3 * (profile.r_G + 1) * ell


def product_constants(jp1: int, e1: int, jp2: int, e2: int) -> tuple:
    """Constants of G1 x G2: J' multiplies, exponents add less one.

    The same multiplication rule applies to J (pass e1 = e2 = 1).
    """
    return jp1 * jp2, e1 + e2 - 1


def quotient_constants(jp: int, e: int, kp_order: int, J: int = None) -> tuple:
    """Constants of G/K for a finite normal K: (J'(G) |K_(p)|^e, e, J), J unchanged."""
    return jp * kp_order ** e, e, J


def connected_stage_bounds(profile: StructureProfile, Jp_n: int) -> list:
    """Bound after each step of the structure theory, ending at :func:`lp_constants`."""
    _check_base("Jp_n", Jp_n)
    e_torus = 3 * (profile.r_G + 1)
    jp_isogeny = Jp_n * profile.kp_order ** e_torus
    return [
        StageBound("affine", Jp_n, 3),
        StageBound("torus-quotient", Jp_n, e_torus),
        StageBound("isogeny-kernel", jp_isogeny, e_torus),
        StageBound("components", profile.c_G * jp_isogeny ** profile.c_G, e_torus * profile.c_G),
    ]


def constants_report(profile: StructureProfile, J_n: int, Jp_n: int) -> ConstantsReport:
    Jp_G, e_G = lp_constants(profile, Jp_n)
    report = ConstantsReport(
        J_G=jordan_constant(profile, J_n),
        e_G=e_G,
        Jp_G=Jp_G,
        stages=connected_stage_bounds(profile, Jp_n),
    )
    if profile.ell_X is not None:
        report.J_X, report.Jp_X, report.e_X = aut_constants(profile, J_n, Jp_G)
    return report


def load_profile(path) -> StructureProfile:
    """Read a profile file: {c_G, r_G, n, kp_order, ell_X?, dim_X?, rank_aff?}."""
    with open(path, "r") as f:
        data = yaml.safe_load(f)
    if not isinstance(data, dict):
        raise InvalidProfileError(f"{path}: a profile must be a mapping")
    known = {f.name for f in fields(StructureProfile)}
    if unknown := set(data) - known:
        raise InvalidProfileError(f"{path}: unknown profile keys {sorted(unknown)}")
    try:
        return StructureProfile(**data)
    except TypeError as exc:
        raise InvalidProfileError(f"{path}: {exc}") from None
