"""Executable proof constructions for Jordan-type index bounds.

Each construction builds a subgroup A explicitly, certifies it (normal,
abelian, order prime to p) by exhaustive checks, and compares its index
with the bound the construction promises.  A violated bound is reported,
never raised: ``WitnessReport.bound_satisfied`` is False and the caller
decides what a falsification means.
"""
from dataclasses import dataclass, field
from math import gcd

import numpy as np
from sympy import isprime, mod_inverse, primefactors

from .constants import product_constants
from .groups import (
    DirectProduct, FiniteGroup, ParentMismatchError, QuotientGroup, Subgroup,
    image, intersect, join, preimage, quotient,
)
from .subgroup_lab import (
    DEFAULT_ORACLE_LIMIT, DEFAULT_SUBGROUP_LIMIT, chermak_delgado, enumerate_subgroups,
    minimal_index_normal_abelian, p_part, sylow,
)


class PreconditionError(Exception):
    pass


class NoComplementGuaranteeError(Exception):
    pass


class ComplementSearchError(Exception):
    pass


class ModelViolationError(Exception):
    pass


@dataclass
class WitnessReport:
    construction: str
    subgroup: Subgroup
    index: int
    bound: int
    bound_satisfied: bool
    certified: dict
    chain_values: dict = field(default_factory=dict)
    reconstructed: bool = False

    @property
    def falsified(self) -> bool:
        return not self.bound_satisfied

    @property
    def fully_certified(self) -> bool:
        return all(self.certified.values())

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "group_digest": self.subgroup.parent.digest,
            "index": self.index,
            "bound": self.bound,
            "bound_satisfied": self.bound_satisfied,
            "certificates": dict(self.certified),
            "chain_values": dict(self.chain_values),
            "reconstructed": self.reconstructed,
        }


@dataclass
class ExtensionInstance:
    """1 -> K -> H -> Gamma = H/K -> 1"""
    total: FiniteGroup
    kernel: Subgroup
    quotient: QuotientGroup

    def __post_init__(self):
        if self.kernel.parent is not self.total or self.quotient.base is not self.total:
            raise ParentMismatchError("extension pieces do not share the total group")
        if self.total.order != self.kernel.order * self.quotient.order:
            raise ValueError("|H| != |K| * |Gamma|")

    @classmethod
    def from_kernel(cls, total: FiniteGroup, kernel: Subgroup) -> "ExtensionInstance":
        return cls(total, kernel, quotient(total, kernel))

    @property
    def gamma(self) -> FiniteGroup:
        return self.quotient.group

    @property
    def projection(self):
        return self.quotient.projection

    def sylow_orders(self, p: int) -> tuple:
        """(|H_(p)|, |K_(p)|, |Gamma_(p)|) from actual Sylow subgroups."""
        return (
            sylow(self.total, p).order,
            sylow_in(self.kernel, p).order,
            sylow(self.gamma, p).order,
        )

    def multiplicativity_holds(self, p: int) -> bool:
        h_p, k_p, gamma_p = self.sylow_orders(p)
        return h_p == k_p * gamma_p


@dataclass
class DivisibilityReport:
    holds: bool
    order_divides: bool
    exponent_divides: bool
    kernel_order: int
    kernel_exponent: int
    quotient_order: int
    r: int
    sylow_checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "order_divides": self.order_divides,
            "exponent_divides": self.exponent_divides,
            "kernel_order": self.kernel_order,
            "kernel_exponent": self.kernel_exponent,
            "quotient_order": self.quotient_order,
            "r": self.r,
            "sylow_checks": {str(k): v for k, v in self.sylow_checks.items()},
        }


@dataclass
class JordanCheckReport:
    holds: bool
    family_size: int
    violations: int
    worst_index: int
    worst_bound: int
    worst_order: int


def sylow_in(sub: Subgroup, p: int) -> Subgroup:
    """A Sylow p-subgroup of ``sub``, as a subgroup of sub's parent."""
    group, inclusion = sub.to_group()
    return image(inclusion, sylow(group, p).subgroup)


def oracle_in(sub: Subgroup, p: int, limit: int = DEFAULT_ORACLE_LIMIT) -> Subgroup:
    """Oracle answer for ``sub``, as a subgroup of sub's parent."""
    group, inclusion = sub.to_group()
    return image(inclusion, minimal_index_normal_abelian(group, p, limit).subgroup)


def certify(sub: Subgroup, p: int, within: Subgroup = None) -> dict:
    return {
        "normal": sub.is_normal(within),
        "abelian": sub.is_abelian(),
        "p_prime": p == 0 or sub.order % p != 0,
    }


def _report(construction, sub, p, bound, within=None, chain=None, reconstructed=False) -> WitnessReport:
    total = sub.parent.order if within is None else within.order
    index = total // sub.order
    return WitnessReport(
        construction=construction,
        subgroup=sub,
        index=index,
        bound=int(bound),
        bound_satisfied=index <= bound,
        certified=certify(sub, p, within),
        chain_values=chain or {},
        reconstructed=reconstructed,
    )


def _require_normal_abelian(a: Subgroup, within: Subgroup, p: int, label: str):
    if a.parent is not within.parent or not a.is_subgroup_of(within):
        raise PreconditionError(f"{label} is not a subgroup of the group it should live in")
    if not a.is_normal(within):
        raise PreconditionError(f"{label} is not normal")
    if not a.is_abelian():
        raise PreconditionError(f"{label} is not abelian")
    if p and a.order % p == 0:
        raise PreconditionError(f"{label} has order divisible by p = {p}")


def product_witness(product: DirectProduct, gamma: Subgroup, a1: Subgroup, a2: Subgroup,
                    p: int, factor_constants=None) -> WitnessReport:
    """A = pi1^-1(a1) & pi2^-1(a2) & gamma, with [gamma : A] <= [G1 : a1] [G2 : a2].

    ``a1``/``a2`` are subgroups of the factors contained in the projections
    of gamma.  With ``factor_constants = ((jp1, e1), (jp2, e2))`` the
    exponent-form bound jp1*jp2*|gamma_(p)|^(e1+e2-1) is checked as well.
    """
    if gamma.parent is not product.group:
        raise PreconditionError("gamma is not a subgroup of the product")
    gamma1 = image(product.pi1, gamma)
    gamma2 = image(product.pi2, gamma)
    _require_normal_abelian(a1, gamma1, p, "a1")
    _require_normal_abelian(a2, gamma2, p, "a2")

    tilde1 = intersect(preimage(product.pi1, a1), gamma)
    tilde2 = intersect(preimage(product.pi2, a2), gamma)
    a = intersect(tilde1, tilde2)
    index1 = gamma.order // tilde1.order
    index2 = gamma.order // tilde2.order
    index12 = gamma.order // join(tilde1, tilde2).order
    exact = index1 * index2 // index12
    chain = {
        "factor_index_1": a1.index(gamma1),
        "factor_index_2": a2.index(gamma2),
        "gamma_index_tilde_1": index1,
        "gamma_index_tilde_2": index2,
        "gamma_index_tilde_12": index12,
        "exact_chain_value": exact,
        "exact_chain_holds": index1 * index2 % index12 == 0 and exact == gamma.order // a.order,
        "tilde_index_matches": index1 == a1.index(gamma1) and index2 == a2.index(gamma2),
    }
    if p:
        gamma_p = p_part(gamma.order, p)
        chain["sylow_identity_1"] = gamma_p == p_part(gamma1.order, p) * p_part(tilde1.order, p)
        chain["sylow_identity_2"] = gamma_p == p_part(gamma2.order, p) * p_part(tilde2.order, p)
    if factor_constants is not None:
        (jp1, e1), (jp2, e2) = factor_constants
        jp, e = product_constants(jp1, e1, jp2, e2)
        exponent_bound = jp * p_part(gamma.order, p) ** e
        chain["exponent_form_bound"] = exponent_bound
        chain["exponent_form_holds"] = gamma.order // a.order <= exponent_bound
    bound = a1.index(gamma1) * a2.index(gamma2)
    return _report("product", a, p, bound, within=gamma, chain=chain)


def _power(g: FiniteGroup, x: int, k: int) -> int:
    result, base = g.identity_pos, int(x)
    while k:
        if k & 1:
            result = g.mul(result, base)
        base = g.mul(base, base)
        k >>= 1
    return result


def _complement_abelian(h: FiniteGroup, n: Subgroup, m: int) -> Subgroup:
    """Complement of an abelian normal Hall subgroup by transversal correction.

    With T the canonical transversal and x(g) the product over cosets of
    t_{rg}^-1 t_r g (an element of n), the elements t_q * x(t_q)^(-1/m)
    form a complement, 1/m taken modulo the exponent of n.
    """
    t = h.table
    inv = h.inverses
    q = quotient(h, n)
    coset_of = q.projection.image_of
    reps = q.representatives
    exponent = int(np.lcm.reduce(h.element_orders[n.members]))
    k = int(mod_inverse(m, exponent)) if exponent > 1 else 1

    def defect(x):
        ys = t[reps, x]
        factors = t[inv[reps[coset_of[ys]]], ys]
        acc = h.identity_pos
        for f in factors:
            acc = t[acc, f]
        return int(acc)

    mask = np.zeros(len(h), dtype=bool)
    for x in reps:
        correction = _power(h, inv[defect(x)], k)
        mask[t[x, correction]] = True
    return Subgroup(h, mask)


def _complement_search(h: FiniteGroup, n: Subgroup, m: int) -> Subgroup:
    """Depth-first search over subgroups meeting n trivially, smallest candidates first."""
    orders = h.element_orders
    candidates = [x for x in range(len(h)) if m % int(orders[x]) == 0 and not n.mask[x]]
    visited = set()

    def extend(gens, mask):
        if mask.sum() == m:
            return gens, mask
        for x in candidates:
            if mask[x]:
                continue
            grown = h._generate(gens + [x], limit=m)
            if grown is None or m % int(grown.sum()) or (grown & n.mask).sum() != 1:
                continue
            key = grown.tobytes()
            if key in visited:
                continue
            visited.add(key)
            found = extend(gens + [x], grown)
            if found is not None:
                return found
        return None

    found = extend([], h._generate([]))
    if found is None:
        raise ComplementSearchError("no complement found")
    gens, mask = found
    return Subgroup(h, mask, gens, verify=False)


def schur_zassenhaus(h: FiniteGroup, n: Subgroup, method: str = "auto") -> Subgroup:
    """Complement C of a normal Hall subgroup n: C & n = 1 and |C| |n| = |h|.

    ``method`` is "abelian" (transversal correction, needs n abelian),
    "search", or "auto" (abelian whenever n is).
    """
    if n.parent is not h:
        raise PreconditionError("n is not a subgroup of h")
    if not n.is_normal():
        raise PreconditionError("n is not normal in h")
    m = h.order // n.order
    if gcd(n.order, m) != 1:
        raise NoComplementGuaranteeError(
            f"|n| = {n.order} and its index {m} are not coprime"
        )
    if n.order == 1:
        return h.whole()
    if m == 1:
        return h.trivial_subgroup()
    if method == "auto":
        method = "abelian" if n.is_abelian() else "search"
    if method == "abelian":
        if not n.is_abelian():
            raise PreconditionError("the abelian construction needs an abelian normal subgroup")
        complement = _complement_abelian(h, n, m)
    elif method == "search":
        complement = _complement_search(h, n, m)
    else:
        raise ValueError(f"unknown complement method {method!r}")
    if complement.order != m or intersect(complement, n).order != 1:
        raise ComplementSearchError("constructed set is not a complement")
    return complement


def quotient_witness_pprime(ext: ExtensionInstance, p: int, base_bound: int,
                            witness: Subgroup = None) -> WitnessReport:
    """Quotient by a kernel with a normal Sylow p-subgroup, Gamma a p'-group.

    K_(p) is then the normal Sylow p-subgroup of H; a complement H_C of it
    maps onto Gamma, and the image of a normal abelian subgroup of H_C
    (``witness``, or the oracle's answer on H_C) has index at most its
    index in H_C.
    """
    if not p or not isprime(p):
        raise PreconditionError("this construction needs a prime p")
    h = ext.total
    if ext.gamma.order % p == 0:
        raise PreconditionError(f"the quotient has order {ext.gamma.order}, divisible by p = {p}")
    k_p = sylow_in(ext.kernel, p)
    if not k_p.is_normal(ext.kernel):
        raise PreconditionError("the kernel's Sylow p-subgroup is not normal in the kernel")
    if k_p.order != p_part(h.order, p) or not k_p.is_normal():
        raise PreconditionError("the kernel's Sylow p-subgroup is not the normal Sylow subgroup of H")
    h_c = schur_zassenhaus(h, k_p)
    if witness is None:
        a_hc = oracle_in(h_c, p)
    else:
        _require_normal_abelian(witness, h_c, p, "witness")
        a_hc = witness
    complement_index = a_hc.index(h_c)
    a = image(ext.projection, a_hc)
    index = ext.gamma.order // a.order
    chain = {
        "kernel_sylow_order": k_p.order,
        "total_sylow_order": p_part(h.order, p),
        "complement_order": h_c.order,
        "kernel_complement_order": intersect(h_c, ext.kernel).order,
        "kernel_complement_expected": ext.kernel.order // k_p.order,
        "complement_index": complement_index,
        "complement_index_within_bound": complement_index <= base_bound,
        "image_index_le_complement_index": index <= complement_index,
    }
    return _report("quotient-sylow-split", a, p, base_bound, chain=chain)


def quotient_witness_general(ext: ExtensionInstance, p: int, a_h: Subgroup,
                             jp: int = None, e: int = None) -> WitnessReport:
    """Image in Gamma of a normal abelian p'-subgroup a_h of H; [Gamma : A] <= [H : a_h].

    With ``jp`` and ``e`` the decomposition jp * |K_(p)|^e * |Gamma_(p)|^e
    of the bound on [H : a_h] is recorded too.
    """
    _require_normal_abelian(a_h, ext.total.whole(), p, "a_h")
    a = image(ext.projection, a_h)
    total_index = a_h.index()
    chain = {"total_index": total_index}
    if p:
        h_p, k_p, gamma_p = ext.sylow_orders(p)
        chain.update({
            "total_sylow_order": h_p,
            "kernel_sylow_order": k_p,
            "quotient_sylow_order": gamma_p,
            "multiplicativity_holds": h_p == k_p * gamma_p,
        })
        if jp is not None and e is not None:
            decomposition = jp * k_p ** e * gamma_p ** e
            chain["decomposition_bound"] = decomposition
            chain["decomposition_holds"] = total_index <= decomposition
    return _report("quotient-general", a, p, total_index, chain=chain)


def quotient_witness_coprime_kernel(ext: ExtensionInstance, p: int, base_bound: int) -> WitnessReport:
    """Quotient by a kernel of order prime to p, Gamma a p'-group.

    H is then a p'-group itself: the oracle's subgroup of H is pushed down
    through the general construction.  This route is a reconstruction and
    is flagged as such in the report.
    """
    if p and (ext.kernel.order % p == 0 or ext.gamma.order % p == 0):
        raise PreconditionError("kernel and quotient must both have order prime to p")
    a_h = oracle_in(ext.total.whole(), p)
    general = quotient_witness_general(ext, p, a_h)
    chain = dict(general.chain_values)
    chain["total_index_within_bound"] = general.bound <= base_bound
    return _report("quotient-coprime-kernel", general.subgroup, p, base_bound,
                   chain=chain, reconstructed=True)


def lifting_divisibility_check(ext: ExtensionInstance, r: int) -> DivisibilityReport:
    """Is the abelian kernel S small enough to come from an r-dimensional torus?

    Checks |S| divides |Gamma|^r and exp(S) divides |Gamma|; per prime,
    |S_(p)| divides |Gamma_(p)|^r, so |S_(p)| |Gamma_(p)| <= |Gamma_(p)|^(r+1).
    """
    s = ext.kernel
    if not s.is_abelian():
        raise ModelViolationError("the kernel must be abelian")
    n = ext.gamma.order
    exponent = int(np.lcm.reduce(ext.total.element_orders[s.members]))
    order_divides = n ** r % s.order == 0
    exponent_divides = n % exponent == 0
    sylow_checks = {}
    for q in primefactors(s.order):
        s_q, gamma_q = p_part(s.order, q), p_part(n, q)
        sylow_checks[q] = {
            "divides": gamma_q ** r % s_q == 0,
            "exponent_chain": s_q * gamma_q <= gamma_q ** (r + 1),
        }
    return DivisibilityReport(
        holds=order_divides and exponent_divides,
        order_divides=order_divides,
        exponent_divides=exponent_divides,
        kernel_order=s.order,
        kernel_exponent=exponent,
        quotient_order=n,
        r=r,
        sylow_checks=sylow_checks,
    )


def conjugate_intersection_witness(gamma: FiniteGroup, gamma0: Subgroup, a0: Subgroup,
                                   p: int = 0, with_chermak_delgado: bool = False) -> WitnessReport:
    """A = intersection of g^-1 a0 g over coset representatives g of gamma0.

    [gamma : A] = [gamma : gamma0] [gamma0 : A] <= l * [gamma0 : a0]^l with
    l = [gamma : gamma0].
    """
    if gamma0.parent is not gamma or a0.parent is not gamma:
        raise PreconditionError("gamma0 and a0 must be subgroups of gamma")
    if not gamma0.is_normal():
        raise PreconditionError("gamma0 is not normal in gamma")
    _require_normal_abelian(a0, gamma0, p, "a0")
    ell = gamma0.index()
    reps = quotient(gamma, gamma0).representatives
    mask = np.logical_and.reduce([a0.conjugate(g).mask for g in reps])
    a = Subgroup(gamma, mask)
    core = np.logical_and.reduce([a0.conjugate(g).mask for g in range(len(gamma))])
    a0_index = a0.index(gamma0)
    chain = {
        "ell": ell,
        "a0_index": a0_index,
        "index_in_gamma0": gamma0.order // a.order,
        "intersection_bound_in_gamma0": a0_index ** ell,
        "independent_of_representatives": bool(np.array_equal(core, mask)),
    }
    if with_chermak_delgado:
        m = chermak_delgado(gamma)
        chain["chermak_delgado_index"] = m.index()
        chain["chermak_delgado_squared_bound"] = (gamma.order // a0.order) ** 2
        chain["chermak_delgado_within_bound"] = m.index() <= (gamma.order // a0.order) ** 2
    return _report("conjugate-intersection", a, p, ell * a0_index ** ell, chain=chain)


def _family_check(g: FiniteGroup, p: int, bound_of, pprime_only: bool, limit: int) -> JordanCheckReport:
    family = enumerate_subgroups(g, limit)
    if pprime_only and p:
        family = [s for s in family if s.order % p]
    violations = 0
    worst = (0, 1, 1)
    for s in family:
        group, _ = s.to_group()
        index = minimal_index_normal_abelian(group, p).index
        bound = bound_of(s)
        if index > bound:
            violations += 1
        if index * worst[1] > worst[0] * bound:
            worst = (index, bound, s.order)
    return JordanCheckReport(
        holds=violations == 0,
        family_size=len(family),
        violations=violations,
        worst_index=worst[0],
        worst_bound=worst[1],
        worst_order=worst[2],
    )


def generalized_jordan_check(g: FiniteGroup, p: int, jordan_constant: int,
                             limit: int = DEFAULT_SUBGROUP_LIMIT) -> JordanCheckReport:
    """Every subgroup of g of order prime to p has a normal abelian subgroup of index <= J."""
    return _family_check(g, p, lambda s: jordan_constant, True, limit)


def p_jordan_check(g: FiniteGroup, p: int, jp: int, e: int,
                   limit: int = DEFAULT_SUBGROUP_LIMIT) -> JordanCheckReport:
    """Every subgroup of g has a normal abelian p'-subgroup of index <= jp * |Gamma_(p)|^e."""
    return _family_check(g, p, lambda s: jp * p_part(s.order, p) ** e, False, limit)
