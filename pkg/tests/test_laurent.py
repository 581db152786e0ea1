import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from higgstwist.arith import FieldParams
from higgstwist.errors import (
    BadIndex,
    ExponentOverflow,
    NonInvertibleImage,
    NotAUnit,
    NotDivisibleByP,
    PolynomialSyntaxError,
    TagMismatch,
    WrongLevel,
)
from higgstwist.laurent import (
    MAX_EXPONENT,
    MOD_P,
    MOD_P2,
    RingTag,
    lp_arith,
    lp_deriv,
    lp_div_p,
    lp_frobenius_pullback,
    lp_invert,
    lp_lift,
    lp_reduce,
    lp_sigma,
    lp_substitute,
    parse,
    random_laurent,
    render,
    times_p,
)
from tests.strategies import polys, tag_and_polys, tags

F3, F5 = FieldParams(3), FieldParams(5)
F9 = FieldParams(3, 2, (1, 0, 1))

P5 = RingTag(MOD_P, 1, frozenset(), F5)
P5inv = RingTag(MOD_P, 1, frozenset({0}), F5)
W5 = P5.with_level(MOD_P2)
W5inv = P5inv.with_level(MOD_P2)


def P(text, tag=P5):
    return parse(text, tag)


# -- examples ---------------------------------------------------------------


def test_arith_examples():
    assert lp_arith(P("t1 + 1"), P("t1 - 1"), "mul") == P("t1^2 - 1")
    assert lp_arith(P("5*t1", W5), P("5*t1", W5), "mul").is_zero()
    assert lp_arith(P("t1", P5inv), P("t1^-1", P5inv), "mul") == P5inv.one()


def test_deriv_examples():
    assert lp_deriv(P("t1^3"), 0) == P("3*t1^2")
    assert lp_deriv(P("t1^-1", P5inv), 0) == P("-t1^-2", P5inv)
    assert lp_deriv(P("t1^5"), 0).is_zero()
    assert not lp_deriv(P("t1^5", W5), 0).is_zero()


def test_substitute_examples():
    assert lp_substitute(P("t1^2"), [P("t1^5")]) == P("t1^10")
    got = lp_substitute(P("t1^-1", W5inv), [P("t1^5 + 5*t1^2", W5inv)])
    assert got == P("t1^-5 - 5*t1^-8", W5inv)
    assert got * P("t1^5 + 5*t1^2", W5inv) == W5inv.one()
    assert lp_substitute(P("3"), [P("t1^2 + 1")]) == P("3")


def test_invert_examples():
    assert lp_invert(P("2*t1^3", P5inv)) == P("3*t1^-3", P5inv)
    f = P("t1^2 + 5*t1^3", W5inv)
    inv = lp_invert(f)
    assert inv == P("t1^-2 - 5*t1^-1", W5inv)
    assert f * inv == W5inv.one()
    with pytest.raises(NotAUnit):
        lp_invert(P("t1 + 1", P5inv))


def test_invert_needs_inverted_coordinate():
    with pytest.raises(NotAUnit):
        lp_invert(P("t1"))


def test_frobenius_pullback_examples():
    T3 = RingTag(MOD_P, 1, frozenset(), F3)
    assert lp_frobenius_pullback(P("t1 + 1", T3)) == P("t1^3 + 1", T3)
    T9 = RingTag(MOD_P, 1, frozenset(), F9)
    assert lp_frobenius_pullback(P("{x}*t1", T9)) == P("{2x}*t1^3", T9)
    assert lp_frobenius_pullback(P5.zero()).is_zero()


def test_reduce_examples():
    assert lp_reduce(P("t1^5 + 5*t1^2", W5)) == P("t1^5")
    assert lp_reduce(P("(0,1)*t1", W5)).is_zero()
    assert lp_reduce(W5.one()) == P5.one()


def test_div_p_examples():
    assert lp_div_p(P("5*t1 + 10", W5)) == P("t1 + 2")
    assert lp_div_p(W5.zero()).is_zero()
    with pytest.raises(NotDivisibleByP):
        lp_div_p(P("t1", W5))


def test_lift_examples():
    assert lp_lift(P("t1^2")) == P("t1^2", W5)
    T3 = RingTag(MOD_P, 1, frozenset(), F3)
    assert render(lp_lift(P("2*t1", T3))) == "2*t1"
    assert lp_lift(P5.zero()).is_zero()


def test_level_errors():
    with pytest.raises(WrongLevel):
        lp_reduce(P("t1"))
    with pytest.raises(WrongLevel):
        lp_div_p(P("t1"))
    with pytest.raises(WrongLevel):
        lp_frobenius_pullback(P("t1", W5))
    with pytest.raises(BadIndex):
        lp_deriv(P("t1"), 1)


def test_tag_mismatch():
    with pytest.raises(TagMismatch):
        P("t1") + P("t1", P5inv)


def test_substitute_non_unit_image():
    with pytest.raises(NonInvertibleImage):
        lp_substitute(P("t1^-1", P5inv), [P("t1 + 1", P5inv)])


def test_exponent_cap():
    big = RingTag(MOD_P, 1, frozenset(), F5).var(0, MAX_EXPONENT // 2)
    with pytest.raises(ExponentOverflow):
        lp_frobenius_pullback(big)


# -- text ------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, canonical",
    [
        ("t1^5+5*t1^2", "t1^5 + (0,1)*t1^2"),
        ("  1 + t1  ", "t1 + 1"),
        ("-t1", "4*t1"),  # -1 = [4] since 4^5 = 24 mod 25
        ("0", "0"),
        ("(2,3)*t1*t1", "(2,3)*t1^2"),
        ("20", "(0,4)"),
        ("7", "(2,1)"),
        ("23", "(3,4)"),  # digits 3 + 5*4
    ],
)
def test_render_canonical_mod_p2(text, canonical):
    assert render(parse(text, W5)) == canonical


def test_render_multivariate_order():
    T = RingTag(MOD_P, 2, frozenset({1}), F5)
    f = parse("1 + t2^-1 + t1*t2 + t1^2 + 3*t2^2", T)
    assert render(f) == "t1^2 + t1*t2 + 3*t2^2 + 1 + t2^-1"


@pytest.mark.parametrize("text", ["", "t1 +", "t3", "t1^", "(1,2)*t1", "t1 ** 2", "{x}", "t1^-1", "2 t1"])
def test_syntax_errors(text):
    with pytest.raises(PolynomialSyntaxError):
        parse(text, P5)


def test_syntax_error_reports_column():
    with pytest.raises(PolynomialSyntaxError, match="column 5"):
        parse("t1 +* 2", P5)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_parse_render_round_trip(data):
    level = data.draw(st.sampled_from([MOD_P, MOD_P2]))
    tag = data.draw(tags()).with_level(level)
    f = data.draw(polys(tag))
    assert parse(render(f), tag) == f
    assert render(parse(render(f), tag)) == render(f)


# -- ring properties -------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(tag_and_polys(3, level=MOD_P2))
def test_ring_axioms_mod_p2(args):
    tag, a, b, c = args
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == tag.zero()
    assert a * tag.one() == a


@settings(max_examples=100, deadline=None)
@given(tag_and_polys(2))
def test_leibniz_rule(args):
    tag, f, g = args
    for i in range(tag.nvars):
        assert lp_deriv(f * g, i) == lp_deriv(f, i) * g + f * lp_deriv(g, i)


@settings(max_examples=100, deadline=None)
@given(tag_and_polys(2))
def test_frobenius_pullback_is_pth_power(args):
    tag, f, g = args
    p = tag.field.p
    power = tag.one()
    for _ in range(p):
        power = power * f
    assert lp_frobenius_pullback(f) == power
    assert lp_frobenius_pullback(f + g) == lp_frobenius_pullback(f) + lp_frobenius_pullback(g)
    for i in range(tag.nvars):
        assert lp_deriv(lp_frobenius_pullback(f), i).is_zero()


@settings(max_examples=100, deadline=None)
@given(tag_and_polys(1, level=MOD_P2))
def test_reduce_lift_and_div_p(args):
    tag, f = args
    red = lp_reduce(f)
    assert lp_reduce(lp_lift(red)) == red
    rest = f - lp_lift(red)
    assert lp_reduce(rest).is_zero()
    assert times_p(lp_div_p(rest)) == rest
    assert lp_div_p(times_p(red)) == red


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_substitute_is_a_ring_map(data):
    tag = data.draw(tags(MOD_P2)).with_level(MOD_P2)
    # images t_i -> t_i^p + p g_i are units on inverted coordinates
    p = tag.field.p
    images = [tag.var(i, p) + times_p(data.draw(polys(tag.with_level(MOD_P), 2, 2))) for i in range(tag.nvars)]
    f, g = data.draw(polys(tag, 3, 2)), data.draw(polys(tag, 3, 2))
    S = lambda h: lp_substitute(h, images)
    assert S(f + g) == S(f) + S(g)
    assert S(f * g) == S(f) * S(g)
    assert S(tag.one()) == tag.one()
    # mod p the map is the relative Frobenius; with sigma on coefficients, the absolute one
    red_tag = tag.with_level(MOD_P)
    assert lp_reduce(S(f)) == lp_substitute(lp_reduce(f), [red_tag.var(i, p) for i in range(tag.nvars)])
    assert lp_reduce(S(lp_sigma(f))) == lp_frobenius_pullback(lp_reduce(f))


@pytest.mark.parametrize("seed", range(30))
def test_invert_random_units(seed):
    rng = random.Random(seed)
    F = [F3, F5, F9][seed % 3]
    tag = RingTag(MOD_P2, 2, frozenset({0, 1}), F)
    c = F([rng.randrange(1, F.p)] + [0] * (F.e - 1))
    u = tag.monomial(c, (rng.randint(-3, 3), rng.randint(-3, 3)))
    f = u + times_p(random_laurent(tag.with_level(MOD_P), rng))
    assert f * lp_invert(f) == tag.one()
    assert f ** -2 * f**2 == tag.one()
