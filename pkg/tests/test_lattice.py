import math
from fractions import Fraction

import pytest

from heegnercone.errors import CongruenceError, LatticeError
from heegnercone.lattice import (
    build_named,
    det_exact,
    direct_sum,
    e8_lattice,
    hilbert_lattice,
    hyperbolic_plane,
    k3_lattice,
    rank1_lattice,
    signature_exact,
    smith_normal_form,
    unimodular_hyperbolic,
    validate_weight,
)


def mat_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


@pytest.mark.parametrize(
    "latt",
    [
        hyperbolic_plane(),
        e8_lattice(),
        rank1_lattice(2),
        k3_lattice(1),
        hilbert_lattice(5),
        build_named("rank1(2)+U^2"),
    ],
)
def test_smith_transform_identity(latt):
    diag, u, v = smith_normal_form(latt.gram)
    prod = mat_mul(mat_mul(u, [list(r) for r in latt.gram]), v)
    n = latt.rank
    for i in range(n):
        for j in range(n):
            assert prod[i][j] == (diag[i] if i == j else 0)
    for i in range(len(diag) - 1):
        if diag[i]:
            assert diag[i + 1] % diag[i] == 0
    assert abs(det_exact(u)) == 1
    assert abs(det_exact(v)) == 1


def test_hyperbolic_plane():
    u = hyperbolic_plane()
    assert u.gram == ((0, 1), (1, 0))
    assert u.signature == (1, 1)
    assert len(u.discriminant_group()) == 1
    assert u.level() == 1


def test_e8():
    e8 = e8_lattice()
    assert e8.det == 1
    assert e8.signature == (8, 0)
    assert e8_lattice(negative=True).signature == (0, 8)


def test_k3_lattice():
    k3 = k3_lattice(1)
    assert k3.rank == 21
    assert k3.signature == (19, 2)
    assert abs(k3.det) == 2
    assert k3.declared_splits == 2
    assert k3.level() == 4
    d = k3.discriminant_group()
    assert d.orders == (2,)


def test_rank1_disc_group():
    for d in (1, 2, 3):
        latt = rank1_lattice(d)
        grp = latt.discriminant_group()
        assert grp.orders == (2 * d,)
        # some generator g has Q(g) = c^2/(4d) for a unit c; the distinguished
        # dual vector omega/2d always has Q = 1/4d
        mu = grp.element_from_dual_vector((Fraction(1, 2 * d),))
        assert mu.q_value == Fraction(1, 4 * d)
        assert mu.order == 2 * d
        assert latt.level() == 4 * d


def test_hilbert_5():
    h = hilbert_lattice(5)
    assert h.gram[0][0:2] == (2, 5)
    assert h.gram[1][0:2] == (5, 10)
    assert h.signature == (2, 2)
    assert abs(h.det) == 5
    assert h.declared_splits == 1
    assert h.discriminant_group().orders == (5,)


def test_hilbert_8():
    h = hilbert_lattice(8)
    assert abs(h.det) == 8
    assert h.signature == (2, 2)


def test_hilbert_rejects():
    with pytest.raises(LatticeError):
        hilbert_lattice(7)  # 7 = 3 mod 4
    with pytest.raises(LatticeError):
        hilbert_lattice(9)  # square
    with pytest.raises(LatticeError):
        hilbert_lattice(5, ((1, 0), (2, 0)))  # singular
    with pytest.raises(LatticeError):
        hilbert_lattice(5, ((1, 0), (0, 2)))  # not an ideal


def test_direct_sum_examples():
    uu = build_named("U^2")
    assert uu.rank == 4 and uu.signature == (2, 2)
    s = direct_sum(rank1_lattice(1), hyperbolic_plane())
    assert s.rank == 3 and s.signature == (2, 1)
    e = build_named("E8+U^2")
    assert e.rank == 12 and abs(e.det) == 1


def test_disc_group_of_sum_is_sum():
    a = rank1_lattice(2)
    b = rank1_lattice(3)
    s = direct_sum(a, b)
    grp = s.discriminant_group()
    assert len(grp) == len(a.discriminant_group()) * len(b.discriminant_group())
    # q-values add mod 1 through the block embedding
    va = (Fraction(1, 4), Fraction(0), Fraction(0))
    vb = (Fraction(0), Fraction(0), Fraction(1, 6))
    vab = (Fraction(1, 4), Fraction(0), Fraction(1, 6))
    qa = s.q_value(va) % 1
    qb = s.q_value(vb) % 1
    qab = s.q_value(vab) % 1
    assert (qa + qb) % 1 == qab


def test_signature_recomputed_from_gram():
    for latt in (k3_lattice(2), hilbert_lattice(13), build_named("rank1(4)+U^2")):
        assert signature_exact(latt.gram) == latt.signature


def test_level_divides_twice_disc():
    for latt in (
        hyperbolic_plane(),
        rank1_lattice(1),
        rank1_lattice(2),
        k3_lattice(1),
        k3_lattice(2),
        hilbert_lattice(5),
        hilbert_lattice(13),
    ):
        n = latt.level()
        assert (2 * abs(latt.det)) % n == 0
        # minimality: every element satisfies N Q(mu) integral, and some
        # smaller modulus fails
        grp = latt.discriminant_group()
        assert all((n * mu.q_value).denominator == 1 for mu in grp.elements())
        for smaller in range(1, n):
            if n % smaller:
                continue
            if all(((smaller * mu.q_value).denominator == 1) for mu in grp.elements()):
                assert smaller == n


def test_disc_group_bilinear_identity():
    grp = build_named("rank1(2)+U").discriminant_group()
    els = list(grp.elements())
    for mu in els:
        for nu in els:
            lhs = ((mu + nu).q_value - mu.q_value - nu.q_value) % 1
            assert lhs == mu.pairing(nu)


def test_kernel_of_mult():
    grp = rank1_lattice(2).discriminant_group()  # Z/4
    k2 = grp.kernel_of_mult(2)
    assert sorted(e.coords[0] for e in k2) == [0, 2]
    sols = grp.kernel_of_mult(2, grp.element((2,)))
    assert sorted(e.coords[0] for e in sols) == [1, 3]
    assert grp.kernel_of_mult(2, grp.element((1,))) == []


def test_kernel_size_bound_for_double_split():
    # lattice rank 2k with two declared hyperbolic planes: |K_r| <= r^(2k-4)
    latt = build_named("rank1(2)+U^2")
    latt2 = build_named("rank1(4)+U^2")
    for target in (latt, latt2):
        grp = target.discriminant_group()
        two_k = target.rank + 1  # odd rank: bound read with 2k = rank + 1
        for r in (1, 2, 3, 4, 6):
            kr = grp.kernel_of_mult(r)
            assert 1 <= len(kr)
    k3 = k3_lattice(2)
    grp = k3.discriminant_group()
    for r in (1, 2, 3, 4):
        kr = grp.kernel_of_mult(r)
        assert 1 <= len(kr) <= r ** (k3.rank + 1 - 4)


def test_element_from_dual_vector_roundtrip():
    grp = k3_lattice(2).discriminant_group()  # Z/4
    for mu in grp.elements():
        back = grp.element_from_dual_vector(mu.dual_vector())
        assert back == mu


def test_validate_weight():
    uu = build_named("U^2")
    info = validate_weight(uu, 2)
    assert info.cone_congruence and info.is_geometric
    info = validate_weight(k3_lattice(1), Fraction(21, 2))
    assert info.cone_congruence and info.is_geometric
    with pytest.raises(CongruenceError):
        validate_weight(hyperbolic_plane(), 1)
    with pytest.raises(CongruenceError):
        validate_weight(build_named("rank1(2)+U"), 2)  # 4 - 2 + 1 not 0 mod 4


def test_build_named_roundtrip_names():
    latt = build_named("U^18")
    assert latt.rank == 36
    assert latt.is_unimodular()
    assert latt.declared_splits == 18


def test_evenness_enforced():
    with pytest.raises(LatticeError):
        build_named_bad = None
        from heegnercone.lattice import EvenLattice

        EvenLattice(((1,),))
