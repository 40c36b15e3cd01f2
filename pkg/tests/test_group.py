import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chevalley.algebra import apply, bracket, build_structure_table
from chevalley.errors import DescriptorMismatch, ExponentTooLarge, NotAUnit, NotUnipotent
from chevalley.group import (GroupElement, evaluate_power_polynomial, exp_generator, h_element,
                             is_lie_automorphism, lemma1_certificate, preserves_bracket,
                             unipotent_power_polynomial, verify_steinberg, w_element,
                             weyl_torus_elements)
from chevalley.matrix import Matrix
from chevalley.qmatrix import QMatrix
from chevalley.rings import QQ, Poly, Product, Truncated

from strategies import fractions

SYSTEMS = [("A", 2), ("B", 2), ("G", 2), ("A", 3)]


def neg(a):
    return tuple(-c for c in a)


def h_of(t, a):
    out = t.zero()
    for i, c in enumerate(t.coroots[a]):
        out = out + t.h(i).scale(c)
    return out


def series_oracle(t, a, r):
    """Plain truncated exponential sum with fresh matrices, up to order dim."""
    n = t.ad_x(a).scale(r)
    acc = QMatrix.identity(t.dim)
    p = QMatrix.identity(t.dim)
    for k in range(1, t.dim + 1):
        p = p @ n
        acc = acc + p.scale(Fraction(1, math.factorial(k)))
    return acc


def test_sl2_block():
    t = build_structure_table("A", 1)
    r = Fraction(3, 7)
    m = exp_generator(t, (1,), r).matrix.as_qmatrix()
    # basis order h, x, x_-; reorder to (x, h, x_-)
    order = [1, 0, 2]
    block = [[m[i, j] for j in order] for i in order]
    assert block == [[1, -2 * r, -r * r], [0, 1, r], [0, 0, 1]]


@pytest.mark.parametrize("kind,rank", SYSTEMS)
def test_three_dim_block_in_larger_systems(kind, rank):
    t = build_structure_table(kind, rank)
    r = QQ(Fraction(-5, 3))
    for a in t.rs.roots:
        g = exp_generator(t, a, r)
        ha = h_of(t, a)
        assert apply(g.matrix, t.x(a)) == t.x(a)
        assert apply(g.matrix, ha) == ha - t.x(a, coeff=2 * r)
        assert apply(g.matrix, t.x(neg(a))) == t.x(neg(a)) + ha.scale(r) - t.x(a, coeff=r * r)


def test_zero_parameter_is_identity():
    t = build_structure_table("B", 2)
    assert exp_generator(t, (1, 1), 0).is_identity()


@pytest.mark.parametrize("kind,rank", SYSTEMS)
def test_random_generators_are_automorphisms(kind, rank):
    t = build_structure_table(kind, rank)
    rng = random.Random(f"exp:{kind}{rank}")
    for _ in range(50):
        a = rng.choice(t.rs.roots)
        r = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        g = exp_generator(t, a, r)
        assert g.det() == QQ.one()
        assert is_lie_automorphism(t, g, full=True)
        assert g.matrix.as_qmatrix() == series_oracle(t, a, r)


def test_generators_over_other_rings():
    t = build_structure_table("A", 2)
    for ring in (Product(2), Truncated(QQ, "t", 3), Poly(QQ, "t")):
        r = ring.gen() if hasattr(ring, "gen") else ring.element((Fraction(2), Fraction(-1)))
        g = exp_generator(t, (1, 1), r, ring)
        assert g.det() == ring.one()
        assert is_lie_automorphism(t, g, full=True)


def test_simple_examples_of_automorphism_predicate():
    t = build_structure_table("A", 2)
    ident = Matrix.identity(QQ, t.dim)
    assert is_lie_automorphism(t, ident)
    assert not is_lie_automorphism(t, ident.scale(2))
    assert preserves_bracket(t, ident.scale(2)) is not None
    assert is_lie_automorphism(t, exp_generator(t, (1, 0), Fraction(1, 2)))
    assert not is_lie_automorphism(t, Matrix.identity(QQ, 3))


def test_generator_check_agrees_with_full_check_on_random_matrices():
    t = build_structure_table("A", 2)
    rng = random.Random(3)
    for _ in range(20):
        g = exp_generator(t, rng.choice(t.rs.roots), 1)
        rows = g.matrix.as_qmatrix().rows()
        i, j = rng.randrange(t.dim), rng.randrange(t.dim)
        rows[i][j] += rng.choice([1, -1, Fraction(1, 2)])
        m = Matrix.from_qmatrix(QQ, QMatrix.from_rows(rows))
        assert is_lie_automorphism(t, m) == is_lie_automorphism(t, m, full=True)


def test_weyl_and_torus_examples():
    t = build_structure_table("A", 2)
    a1, a2 = (1, 0), (0, 1)
    for a in t.rs.roots:
        assert h_element(t, a, 1).is_identity()
        w1 = w_element(t, a, 1)
        assert w1 @ w1 == h_element(t, a, -1)
    h = h_element(t, a1, 2)
    for r in (1, Fraction(-3, 4)):
        assert h @ exp_generator(t, a2, r) @ h.inverse() == exp_generator(t, a2, Fraction(r) / 2)
    with pytest.raises(NotAUnit):
        weyl_torus_elements(t, a1, Product(2).element((Fraction(1), Fraction(0))))


def test_torus_acts_by_characters():
    t = build_structure_table("G", 2)
    s = Fraction(3)
    for a in t.rs.roots:
        h = h_element(t, a, s)
        assert h.det() == QQ.one()
        assert is_lie_automorphism(t, h, full=True)
        for b in t.rs.roots:
            k = t.rs.pair(b, a)
            assert apply(h.matrix, t.x(b)) == t.x(b, coeff=s ** k)


def test_steinberg_anchors():
    t = build_structure_table("B", 2)
    a = (1, 0)
    assert exp_generator(t, a, Fraction(1, 2)) @ exp_generator(t, a, Fraction(1, 3)) == exp_generator(t, a, Fraction(5, 6))
    h = h_element(t, a, 2)
    assert h @ exp_generator(t, a, 1) @ h.inverse() == exp_generator(t, a, 4)
    assert exp_generator(t, a, 1) ** 4 == h @ exp_generator(t, a, 1) @ h.inverse()


@pytest.mark.parametrize("kind,rank", [("A", 2), ("B", 2), ("G", 2)])
def test_steinberg_suite(kind, rank):
    rep = verify_steinberg(build_structure_table(kind, rank))
    assert rep.ok and rep.failed == 0 and rep.passed > 0


def test_steinberg_suite_catches_corrupt_table():
    t = build_structure_table("A", 2).with_flipped((1, 0), (0, 1))
    assert not verify_steinberg(t).ok


def test_group_element_algebra():
    t = build_structure_table("A", 2)
    g = GroupElement.from_word(t, [((1, 0), 2), ((0, -1), Fraction(1, 3)), ((1, 1), -1)])
    assert (g @ g.inverse()).is_identity()
    assert GroupElement(t, g.matrix).inverse() == g.inverse()
    assert g ** -2 == g.inverse() @ g.inverse()
    assert g.conjugate(exp_generator(t, (1, 0), 1)) == g @ exp_generator(t, (1, 0), 1) @ g.inverse()
    other = exp_generator(t, (1, 0), 1, Product(2))
    with pytest.raises(DescriptorMismatch):
        g @ other


# -- unipotence certificate -----------------------------------------------

def test_certificate_examples():
    t = build_structure_table("A", 2)
    c = lemma1_certificate(exp_generator(t, (1, 0), 1), 2, 3, 1)
    assert (c.status, c.m) == ("certified", 3)
    c = lemma1_certificate(h_element(t, (1, 0), 2), 2, 3, 1)
    assert c.status == "hypothesis_failed"
    c = lemma1_certificate(GroupElement.identity(t), 2, 3, 1)
    assert (c.status, c.m) == ("certified", 1)


def test_certificate_determinant_and_inconclusive():
    t = build_structure_table("A", 2)
    assert lemma1_certificate(Matrix.identity(QQ, t.dim).scale(2), 2, 3, 1).status == "hypothesis_failed"
    c = lemma1_certificate(exp_generator(t, (1, 1), 1), 2, 3, 1, m_max=2)
    assert c.status == "inconclusive"


def test_certificate_exponent_bounds():
    t = build_structure_table("A", 2)
    g = exp_generator(t, (1, 0), 1)
    with pytest.raises(ExponentTooLarge):
        lemma1_certificate(g, 2, 2 ** 20 + 1, 1)
    with pytest.raises(ExponentTooLarge):
        lemma1_certificate(g, 2, 3, 17)
    with pytest.raises(ValueError):
        lemma1_certificate(g, 1, 3, 1)


def test_certificates_on_conjugates_are_sound():
    t = build_structure_table("B", 2)
    rng = random.Random("cert")
    for _ in range(20):
        word = [(rng.choice(t.rs.roots), rng.choice([1, -1, 2, Fraction(1, 2)])) for _ in range(rng.randint(0, 4))]
        g = GroupElement.from_word(t, word)
        a = g @ exp_generator(t, rng.choice(t.rs.roots), rng.choice([1, 3, Fraction(-1, 2)])) @ g.inverse()
        c = lemma1_certificate(a, 2, 3, 1)
        assert c.status == "certified" and c.m <= 5
        nil = a.matrix - Matrix.identity(QQ, t.dim)
        assert (nil ** c.m).is_zero() and not (nil ** (c.m - 1)).is_zero()


# -- power polynomial --------------------------------------------------------

def test_power_polynomial_of_generator():
    t = build_structure_table("G", 2)
    r = Fraction(2, 5)
    poly = unipotent_power_polynomial(exp_generator(t, (1, 1), r))
    for m in range(-2, 6):
        assert evaluate_power_polynomial(poly, m) == exp_generator(t, (1, 1), m * r).matrix
    # a rational m gives the generator with a rational parameter too
    assert evaluate_power_polynomial(poly, Fraction(1, 3)) == exp_generator(t, (1, 1), r / 3).matrix


def test_power_polynomial_examples():
    t = build_structure_table("A", 2)
    g = GroupElement.from_word(t, [((1, 0), 1), ((0, 1), 2)])
    poly = unipotent_power_polynomial(g)
    assert evaluate_power_polynomial(poly, 3) == (g @ g @ g).matrix
    ident = unipotent_power_polynomial(GroupElement.identity(t))
    assert ident.degree() == 0 and ident.coefficient(0).is_identity()
    with pytest.raises(NotUnipotent):
        unipotent_power_polynomial(h_element(t, (1, 0), 2))


@given(st.lists(st.tuples(st.integers(0, 5), fractions), min_size=1, max_size=3), st.integers(-2, 5))
def test_power_polynomial_on_positive_words(word, m):
    # products of positive root elements are unipotent
    t = build_structure_table("A", 2)
    pos = t.rs.positive
    g = GroupElement.from_word(t, [(pos[i % len(pos)], r) for i, r in word])
    assert evaluate_power_polynomial(unipotent_power_polynomial(g), m) == (g ** m).matrix


def test_bracket_preserved_on_samples():
    t = build_structure_table("B", 2)
    g = GroupElement.from_word(t, [((1, 0), 2), ((-1, -1), 3)])
    for a in range(t.dim):
        for b in range(t.dim):
            ea, eb = t.basis(a), t.basis(b)
            assert apply(g.matrix, bracket(ea, eb)) == bracket(apply(g.matrix, ea), apply(g.matrix, eb))
