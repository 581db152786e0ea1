"""Hypothesis strategies for rings, polynomials and matrices."""

from hypothesis import strategies as st

from higgstwist.arith import FieldParams, Witt2Elem
from higgstwist.forms import Matrix
from higgstwist.laurent import MOD_P, MOD_P2, LaurentPoly, RingTag

FIELDS = [FieldParams(3), FieldParams(5), FieldParams(7), FieldParams(3, 2, (1, 0, 1))]


@st.composite
def field_elems(draw, F):
    return F([draw(st.integers(0, F.p - 1)) for _ in range(F.e)])


@st.composite
def coefficients(draw, tag):
    a0 = draw(field_elems(tag.field))
    if tag.level == MOD_P:
        return a0
    return Witt2Elem(a0, draw(field_elems(tag.field)))


@st.composite
def exponents(draw, tag, max_degree=3):
    return tuple(
        draw(st.integers(-max_degree, max_degree) if i in tag.inverted else st.integers(0, max_degree))
        for i in range(tag.nvars)
    )


@st.composite
def polys(draw, tag, max_terms=4, max_degree=3):
    terms = draw(st.dictionaries(exponents(tag, max_degree), coefficients(tag), max_size=max_terms))
    return LaurentPoly(tag, terms)


@st.composite
def tags(draw, level=MOD_P, fields=FIELDS, max_vars=2):
    F = draw(st.sampled_from(fields))
    d = draw(st.integers(1, max_vars))
    inverted = draw(st.frozensets(st.integers(0, d - 1)))
    return RingTag(level, d, inverted, F)


@st.composite
def tag_and_polys(draw, count, level=MOD_P, max_terms=4):
    tag = draw(tags(level))
    return (tag, *[draw(polys(tag, max_terms)) for _ in range(count)])


@st.composite
def matrices(draw, tag, n, max_terms=2):
    return Matrix(tag, [[draw(polys(tag, max_terms, 2)) for _ in range(n)] for _ in range(n)])


@st.composite
def unipotent(draw, tag, n):
    rows = [
        [tag.one() if i == j else (draw(polys(tag, 2, 2)) if j > i else tag.zero()) for j in range(n)]
        for i in range(n)
    ]
    return Matrix(tag, rows)


def lift_tag(tag):
    return tag.with_level(MOD_P2)
