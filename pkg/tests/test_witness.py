from math import gcd

import pytest

from jordankit.catalog import CatalogEntry, select_kernel
from jordankit.groups import closure, direct_product, image, intersect, kernel
from jordankit.primitives import PermElement
from jordankit.subgroup_lab import (
    enumerate_subgroups, minimal_index_normal_abelian, normal_subgroups,
)
from jordankit.witness import (
    ExtensionInstance, ModelViolationError, NoComplementGuaranteeError, PreconditionError,
    conjugate_intersection_witness, generalized_jordan_check, lifting_divisibility_check,
    oracle_in, p_jordan_check, product_witness, quotient_witness_coprime_kernel,
    quotient_witness_general, quotient_witness_pprime, schur_zassenhaus,
)


def built(family, **params):
    return CatalogEntry.from_dict({"name": family, "family": family, "params": params}).build()


def build(family, **params):
    return built(family, **params).group


def cyclic(m):
    return build("cyclic", m=m)


S3 = build("symmetric", n=3)
S4 = build("symmetric", n=4)
A3 = S3.derived_subgroup()
V4_GENS = [PermElement.from_cycles(4, [0, 1]), PermElement.from_cycles(4, [2, 3])]


############################
## direct product witness ##
############################

def test_product_of_full_symmetric_groups():
    product = direct_product(S3, S3)
    report = product_witness(product, product.group.whole(), A3, A3, p=0)
    assert report.construction == "product"
    assert report.subgroup.order == 9
    assert report.index == 4
    assert report.bound == 4
    assert report.bound_satisfied
    assert report.fully_certified
    assert report.chain_values["exact_chain_holds"]


def test_product_of_diagonal_subgroup():
    product = direct_product(S3, S3)
    n2 = S3.order
    diagonal = product.group.subgroup([i * n2 + i for i in S3.generators])
    assert diagonal.order == 6
    report = product_witness(product, diagonal, A3, A3, p=2)
    # A is the diagonal copy of A3
    assert report.subgroup.order == 3
    assert report.index == 2
    assert report.bound == 4
    assert report.chain_values["sylow_identity_1"]
    assert report.chain_values["sylow_identity_2"]


def test_product_of_abelian_groups():
    product = direct_product(cyclic(2), cyclic(3))
    g1, g2 = product.pi1.codomain, product.pi2.codomain
    report = product_witness(product, product.group.whole(), g1.whole(), g2.whole(), p=0)
    assert report.index == 1


def test_product_witness_exponent_form():
    product = direct_product(S3, S3)
    report = product_witness(
        product, product.group.whole(), A3, A3, p=2, factor_constants=((2, 3), (2, 3)),
    )
    # 4 * |Gamma_(2)|^5 = 4 * 4^5
    assert report.chain_values["exponent_form_bound"] == 4 * 4 ** 5
    assert report.chain_values["exponent_form_holds"]


def test_product_witness_preconditions():
    product = direct_product(S3, S3)
    whole = product.group.whole()
    with pytest.raises(PreconditionError):
        # A3 is not a 3'-group
        product_witness(product, whole, A3, A3, p=3)
    with pytest.raises(PreconditionError):
        product_witness(product, whole, S3.subgroup([S3.generators[0]]), A3, p=0)
    with pytest.raises(PreconditionError):
        product_witness(product, whole, S3.whole(), A3, p=0)


def product_subgroup_cases():
    d4 = build("dihedral", m=4)
    for g1, g2, p in [(S3, S3, 0), (S3, S3, 2), (S3, cyclic(2), 3), (d4, cyclic(3), 3)]:
        product = direct_product(g1, g2)
        for gamma in enumerate_subgroups(product.group):
            yield product, gamma, p


def test_product_witness_on_every_subgroup():
    count = 0
    for product, gamma, p in product_subgroup_cases():
        a1 = oracle_in(image(product.pi1, gamma), p)
        a2 = oracle_in(image(product.pi2, gamma), p)
        report = product_witness(product, gamma, a1, a2, p)
        assert report.bound_satisfied
        assert report.fully_certified
        assert report.chain_values["exact_chain_holds"]
        # witnesses never beat the oracle
        group, inclusion = gamma.to_group()
        assert minimal_index_normal_abelian(group, p).index <= report.index
        count += 1
    assert count >= 50


######################
## Schur-Zassenhaus ##
######################

def test_complement_in_s3():
    c = schur_zassenhaus(S3, A3)
    assert c.order == 2
    assert intersect(c, A3).is_trivial()
    assert schur_zassenhaus(S3, A3, method="search").order == 2


def test_complement_in_cyclic_group():
    c6 = cyclic(6)
    c3 = c6.subgroup([c6.mul(c6.generators[0], c6.generators[0])])
    c = schur_zassenhaus(c6, c3)
    assert c.order == 2
    # the unique subgroup of order 2
    assert c == [s for s in enumerate_subgroups(c6) if s.order == 2][0]


def test_trivial_complements():
    assert schur_zassenhaus(S3, S3.whole()).is_trivial()
    assert schur_zassenhaus(S3, S3.trivial_subgroup()) == S3.whole()


def test_complement_errors():
    v4 = S4.subgroup([
        PermElement.from_cycles(4, [0, 1], [2, 3]),
        PermElement.from_cycles(4, [0, 2], [1, 3]),
    ])
    with pytest.raises(NoComplementGuaranteeError):
        # |V4| = 4 and the index 6 share the factor 2
        schur_zassenhaus(S4, v4)
    with pytest.raises(PreconditionError):
        schur_zassenhaus(S3, S3.subgroup([S3.generators[0]]))
    sl23 = build("SL", n=2, p=3)
    with pytest.raises(PreconditionError):
        # Q8 is a normal Hall subgroup of SL(2, 3) but not abelian
        schur_zassenhaus(sl23, sl23.derived_subgroup(), method="abelian")
    with pytest.raises(ValueError):
        schur_zassenhaus(S3, A3, method="guess")


def test_complement_is_canonical():
    # closures from differently ordered generators give the same complement
    s3_again = closure(list(reversed(S3.elements[1:])))
    c1 = schur_zassenhaus(S3, A3)
    c2 = schur_zassenhaus(s3_again, s3_again.derived_subgroup())
    assert c1.elements == c2.elements


COPRIME_GROUPS = [
    ("symmetric", {"n": 3}),
    ("symmetric", {"n": 4}),
    ("alternating", {"n": 4}),
    ("dihedral", {"m": 5}),
    ("dihedral", {"m": 6}),
    ("cyclic", {"m": 12}),
    ("semidirect", {"m": 3, "k": 4, "r": 2}),
    ("semidirect", {"m": 7, "k": 3, "r": 2}),
    ("SL", {"n": 2, "p": 3}),
    ("GL", {"n": 2, "p": 3}),
    ("monomial", {"n": 2, "p": 3}),
]


def test_complements_of_every_normal_hall_subgroup():
    pairs = 0
    for family, params in COPRIME_GROUPS:
        h = build(family, **params)
        for n in normal_subgroups(h):
            m = h.order // n.order
            if gcd(n.order, m) != 1:
                continue
            c = schur_zassenhaus(h, n)
            assert c.order * n.order == h.order
            assert intersect(c, n).is_trivial()
            if n.is_abelian():
                assert schur_zassenhaus(h, n, method="search").order == c.order
            pairs += 1
    assert pairs >= 20


#######################
## quotient witnesses ##
#######################

def extension(family, selector, **params):
    b = built(family, **params)
    return ExtensionInstance.from_kernel(b.group, select_kernel(b, selector))


def test_quotient_by_the_center_of_sl23():
    ext = extension("SL", "center", n=2, p=3)
    assert ext.gamma.order == 12
    report = quotient_witness_general(ext, 3, ext.total.center())
    assert report.subgroup.is_trivial()
    assert report.index == 12
    assert report.bound == 12
    assert report.bound_satisfied
    assert report.chain_values["multiplicativity_holds"]


def test_quotient_of_c6_by_a_factor():
    b = built("product", left={"family": "cyclic", "params": {"m": 6}},
              right={"family": "cyclic", "params": {"m": 2}})
    ext = ExtensionInstance.from_kernel(b.group, select_kernel(b, "factor:2"))
    a_h = oracle_in(b.group.whole(), 2)
    assert a_h.order == 3
    report = quotient_witness_general(ext, 2, a_h, jp=1, e=3)
    assert report.subgroup.order == 3
    assert report.index == 2
    assert report.bound == 4
    assert report.chain_values["decomposition_bound"] == 2 ** 3 * 2 ** 3
    assert report.chain_values["decomposition_holds"]


def test_trivial_witness_in_the_total_group():
    ext = extension("SL", "center", n=2, p=3)
    report = quotient_witness_general(ext, 3, ext.total.trivial_subgroup())
    assert report.index == ext.gamma.order


def test_general_quotient_preconditions():
    ext = extension("SL", "center", n=2, p=3)
    with pytest.raises(PreconditionError):
        # Q8 is not abelian
        quotient_witness_general(ext, 3, ext.total.derived_subgroup())
    with pytest.raises(PreconditionError):
        # the centre has even order
        quotient_witness_general(ext, 2, ext.total.center())


def test_sylow_split_quotient_of_s3_times_c2():
    b = built("product", left={"family": "symmetric", "params": {"n": 3}},
              right={"family": "cyclic", "params": {"m": 2}})
    ext = ExtensionInstance.from_kernel(b.group, select_kernel(b, "sylow:3"))
    assert ext.gamma.order == 4
    report = quotient_witness_pprime(ext, 3, base_bound=4)
    assert report.index == 1
    assert report.subgroup.order == 4
    assert report.chain_values["complement_order"] == 4
    assert report.chain_values["kernel_complement_order"] == report.chain_values["kernel_complement_expected"]
    assert report.fully_certified


def test_sylow_split_quotient_of_semidirect_product():
    ext = extension("semidirect", "sylow:3", m=3, k=4, r=2)
    assert ext.gamma.order == 4
    report = quotient_witness_pprime(ext, 3, base_bound=1)
    assert report.index == 1
    assert report.bound_satisfied


def test_sylow_split_with_trivial_kernel():
    c4 = cyclic(4)
    ext = ExtensionInstance.from_kernel(c4, c4.trivial_subgroup())
    report = quotient_witness_pprime(ext, 3, base_bound=1)
    assert report.index == 1


def test_sylow_split_preconditions():
    ext = extension("SL", "center", n=2, p=3)
    with pytest.raises(PreconditionError):
        # A4 has order divisible by 3
        quotient_witness_pprime(ext, 3, base_bound=12)
    with pytest.raises(PreconditionError):
        quotient_witness_pprime(ext, 0, base_bound=12)


def test_falsified_bound_is_reported_not_raised():
    ext = extension("semidirect", "trivial", m=3, k=4, r=2)
    # C3:C4 has no normal abelian 5'-subgroup of index 1
    report = quotient_witness_pprime(ext, 5, base_bound=1)
    assert report.falsified
    assert report.index == 2
    assert not report.chain_values["complement_index_within_bound"]


def test_coprime_kernel_quotient():
    c6 = cyclic(6)
    x = c6.generators[0]
    ext = ExtensionInstance.from_kernel(c6, c6.subgroup([c6.mul(x, c6.mul(x, x))]))
    assert ext.kernel.order == 2
    report = quotient_witness_coprime_kernel(ext, 5, base_bound=1)
    assert report.reconstructed
    assert report.construction == "quotient-coprime-kernel"
    assert report.index == 1
    assert report.to_dict()["reconstructed"] is True
    with pytest.raises(PreconditionError):
        quotient_witness_coprime_kernel(ext, 2, base_bound=1)


EXTENSIONS = [
    ("SL", "center", {"n": 2, "p": 3}),
    ("SL", "center", {"n": 2, "p": 5}),
    ("SL", "derived", {"n": 2, "p": 3}),
    ("GL", "center", {"n": 2, "p": 3}),
    ("GL", "derived", {"n": 2, "p": 3}),
    ("symmetric", "derived", {"n": 3}),
    ("symmetric", "derived", {"n": 4}),
    ("symmetric", "center", {"n": 3}),
    ("alternating", "sylow:2", {"n": 4}),
    ("alternating", "derived", {"n": 4}),
    ("dihedral", "center", {"m": 4}),
    ("dihedral", "derived", {"m": 6}),
    ("dihedral", "derived", {"m": 5}),
    ("quaternion", "center", {}),
    ("semidirect", "sylow:3", {"m": 3, "k": 4, "r": 2}),
    ("semidirect", "center", {"m": 3, "k": 4, "r": 2}),
    ("semidirect", "sylow:7", {"m": 7, "k": 3, "r": 2}),
    ("cyclic", "sylow:2", {"m": 12}),
    ("cyclic", "sylow:3", {"m": 12}),
    ("monomial", "center", {"n": 2, "p": 3}),
    ("monomial", "derived", {"n": 2, "p": 3}),
]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_quotient_witnesses_on_many_extensions(p):
    assert len(EXTENSIONS) >= 20
    for family, kernel, params in EXTENSIONS:
        ext = extension(family, kernel, **params)
        assert ext.multiplicativity_holds(p)
        a_h = oracle_in(ext.total.whole(), p)
        general = quotient_witness_general(ext, p, a_h)
        assert general.bound_satisfied
        assert general.fully_certified
        oracle = minimal_index_normal_abelian(ext.gamma, p).index
        assert oracle <= general.index
        if ext.gamma.order % p == 0:
            continue
        try:
            split = quotient_witness_pprime(ext, p, base_bound=general.bound)
        except PreconditionError:
            continue
        assert split.bound_satisfied
        assert split.fully_certified
        assert oracle <= split.index


########################
## lifting and tori ##
########################

def abelian_extension(kernel_group, quotient_order):
    product = direct_product(kernel_group, cyclic(quotient_order))
    return ExtensionInstance.from_kernel(product.group, kernel(product.pi2))


def test_lifting_with_trivial_kernel():
    c2 = cyclic(2)
    ext = ExtensionInstance.from_kernel(c2, c2.trivial_subgroup())
    for r in range(4):
        assert lifting_divisibility_check(ext, r).holds


def test_lifting_klein_four():
    v4 = closure(V4_GENS)
    ext = abelian_extension(v4, 2)
    report = lifting_divisibility_check(ext, 2)
    assert report.holds
    assert report.order_divides and report.exponent_divides
    assert report.sylow_checks[2] == {"divides": True, "exponent_chain": True}
    assert not lifting_divisibility_check(ext, 1).holds


def test_lifting_cyclic_four():
    ext = abelian_extension(cyclic(4), 2)
    report = lifting_divisibility_check(ext, 2)
    assert report.order_divides
    assert not report.exponent_divides
    assert not report.holds


def test_lifting_needs_abelian_kernel():
    ext = abelian_extension(S3, 2)
    with pytest.raises(ModelViolationError):
        lifting_divisibility_check(ext, 3)


def test_lifting_checks_each_prime_divisor_of_the_kernel():
    report = lifting_divisibility_check(abelian_extension(cyclic(6), 6), 1)
    assert report.holds
    assert list(report.sylow_checks) == [2, 3]
    assert report.sylow_checks[3] == {"divides": True, "exponent_chain": True}
    c2 = cyclic(2)
    trivial = ExtensionInstance.from_kernel(c2, c2.trivial_subgroup())
    assert lifting_divisibility_check(trivial, 1).sylow_checks == {}


##################################
## conjugate intersection witness ##
##################################

def test_conjugate_intersection_with_one_component():
    report = conjugate_intersection_witness(S3, S3.whole(), A3)
    assert report.subgroup == A3
    assert report.index == 2


def test_conjugate_intersection_s3():
    report = conjugate_intersection_witness(S3, A3, A3)
    assert report.subgroup == A3
    assert report.index == 2
    assert report.bound == 2


def test_conjugate_intersection_s4():
    a4 = S4.derived_subgroup()
    v4 = a4.derived_subgroup()
    report = conjugate_intersection_witness(S4, a4, v4, with_chermak_delgado=True)
    assert report.subgroup == v4
    assert report.index == 6
    assert report.bound == 18
    assert report.chain_values["independent_of_representatives"]
    assert report.chain_values["chermak_delgado_within_bound"]
    assert report.to_dict()["group_digest"] == S4.digest


def test_conjugate_intersection_non_normal_a0():
    # a non-normal cyclic subgroup of the rotations-and-reflections group
    b = built("monomial", n=2, p=3)
    gamma0 = b.gamma0
    a0 = b.group.subgroup([gamma0.generators[0]])
    report = conjugate_intersection_witness(b.group, gamma0, a0)
    assert report.subgroup.is_normal()
    assert report.bound_satisfied
    assert report.chain_values["independent_of_representatives"]


def test_conjugate_intersection_preconditions():
    with pytest.raises(PreconditionError):
        conjugate_intersection_witness(S3, S3.subgroup([S3.generators[0]]), S3.trivial_subgroup())
    with pytest.raises(PreconditionError):
        conjugate_intersection_witness(S4, S4.derived_subgroup(), S4.derived_subgroup())


######################
## family predicates ##
######################

def test_generalized_jordan_on_s4():
    assert generalized_jordan_check(S4, 5, 6).holds
    failing = generalized_jordan_check(S4, 5, 5)
    assert not failing.holds
    assert failing.worst_index == 6


def test_p_jordan_on_sl23():
    sl23 = build("SL", n=2, p=3)
    report = p_jordan_check(sl23, 3, 12, 3)
    assert report.holds
    assert report.family_size == 15
    # Q8 has no normal abelian 3'-subgroup of index 1
    assert not p_jordan_check(sl23, 3, 1, 3).holds
